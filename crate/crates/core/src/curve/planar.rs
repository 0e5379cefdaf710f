use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::series::{grid_point, wrap};
use super::CurveConfig;

/// A closed planar curve with period `2π`.
pub(crate) trait PlanarCurve: Sync {
    fn point(&self, t: f64) -> [f64; 2];
    fn velocity(&self, t: f64) -> [f64; 2];

    /// Rough size of the coordinates; residual tolerances scale with it.
    fn magnitude(&self) -> f64 {
        1.0
    }
}

/// A candidate cell whose Newton refinement did not converge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NewtonFailure {
    pub t1: f64,
    pub t2: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct RawCrossing {
    pub t1: f64,
    pub t2: f64,
    pub point: [f64; 2],
}

fn cross(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

/// Distance between parameters on the circle.
pub(crate) fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

fn newton<C: PlanarCurve>(
    c: &C,
    mut t1: f64,
    mut t2: f64,
    tol: f64,
) -> Result<(f64, f64), NewtonFailure> {
    let residual = |t1: f64, t2: f64| {
        let (p, q) = (c.point(t1), c.point(t2));
        [p[0] - q[0], p[1] - q[1]]
    };
    for _ in 0..60 {
        let f = residual(t1, t2);
        let (v1, v2) = (c.velocity(t1), c.velocity(t2));
        let det = v2[0] * v1[1] - v1[0] * v2[1];
        if det.abs() < 1e-300 {
            break;
        }
        let d1 = (f[0] * v2[1] - v2[0] * f[1]) / det;
        let d2 = (v1[1] * f[0] - v1[0] * f[1]) / det;
        t1 += d1;
        t2 += d2;
        if d1.abs().max(d2.abs()) < 1e-15 {
            break;
        }
    }
    let f = residual(t1, t2);
    let r = f[0].abs().max(f[1].abs());
    if r.is_finite() && r <= tol {
        Ok((t1, t2))
    } else {
        Err(NewtonFailure {
            t1: wrap(t1),
            t2: wrap(t2),
            residual: r,
        })
    }
}

/// Transverse self-intersections of `c`: a sweep over the segments of the
/// sampled polyline finds candidate cells, then 2D Newton on
/// `c(t1) - c(t2) = 0` refines each one. Results are deduplicated and sorted
/// by `(t1, t2)` with `t1 < t2`.
pub(crate) fn self_intersections<C: PlanarCurve>(
    c: &C,
    cfg: &CurveConfig,
) -> (Vec<RawCrossing>, Vec<NewtonFailure>) {
    let n = cfg.grid.max(8);
    let h = TAU / n as f64;
    let pts = cfg.exec.map_range(0..n, |i| c.point(grid_point(i, n)));
    let seg = |i: usize| (pts[i], pts[(i + 1) % n]);
    let bounds: Vec<[f64; 4]> = (0..n)
        .map(|i| {
            let (a, b) = seg(i);
            [
                a[0].min(b[0]),
                a[0].max(b[0]),
                a[1].min(b[1]),
                a[1].max(b[1]),
            ]
        })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| bounds[a][0].total_cmp(&bounds[b][0]).then(a.cmp(&b)));

    let candidates: Vec<(f64, f64)> = cfg.exec.flat_map_range(0..n, |ai| {
        let i = order[ai];
        let bi = bounds[i];
        let (p, p1) = seg(i);
        let r = [p1[0] - p[0], p1[1] - p[1]];
        let mut out = Vec::new();
        for &j in &order[ai + 1..] {
            let bj = bounds[j];
            if bj[0] > bi[1] {
                break;
            }
            if j == (i + 1) % n || i == (j + 1) % n || bj[2] > bi[3] || bj[3] < bi[2] {
                continue;
            }
            let (q, q1) = seg(j);
            let s = [q1[0] - q[0], q1[1] - q[1]];
            let rxs = cross(r, s);
            if rxs == 0.0 {
                continue;
            }
            let qp = [q[0] - p[0], q[1] - p[1]];
            let alpha = cross(qp, s) / rxs;
            let beta = cross(qp, r) / rxs;
            if (0.0..=1.0).contains(&alpha) && (0.0..=1.0).contains(&beta) {
                out.push(((i as f64 + alpha) * h, (j as f64 + beta) * h));
            }
        }
        out
    });

    let refined = cfg.exec.map(&candidates, |&(t1, t2)| {
        newton(c, t1, t2, cfg.match_tol * c.magnitude().max(1.0))
    });
    let mut found: Vec<RawCrossing> = Vec::new();
    let mut failures = Vec::new();
    for r in refined {
        match r {
            Ok((a, b)) => {
                let (a, b) = (wrap(a), wrap(b));
                if circular_distance(a, b) < cfg.dedupe_tol {
                    continue;
                }
                let (t1, t2) = if a < b { (a, b) } else { (b, a) };
                let duplicate = found.iter().any(|x| {
                    let same = circular_distance(x.t1, t1) < cfg.dedupe_tol
                        && circular_distance(x.t2, t2) < cfg.dedupe_tol;
                    let swapped = circular_distance(x.t1, t2) < cfg.dedupe_tol
                        && circular_distance(x.t2, t1) < cfg.dedupe_tol;
                    same || swapped
                });
                if !duplicate {
                    found.push(RawCrossing {
                        t1,
                        t2,
                        point: c.point(t1),
                    });
                }
            }
            Err(e) => failures.push(e),
        }
    }
    found.sort_by(|a, b| a.t1.total_cmp(&b.t1).then(a.t2.total_cmp(&b.t2)));
    failures.sort_by(|a, b| a.t1.total_cmp(&b.t1).then(a.t2.total_cmp(&b.t2)));
    debug_assert!(found
        .iter()
        .all(|x| x.t1 < x.t2 && x.t2 < TAU && x.t1 >= 0.0));
    (found, failures)
}
