use serde::{Deserialize, Serialize};

use super::series::{grid_point, wrap, FourierSeries};
use super::{CurveConfig, CurveError};

/// Which of `f, f', f''` a zero search runs on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Order {
    F,
    FPrime,
    FSecond,
}

impl Order {
    pub fn derivative(self) -> u32 {
        match self {
            Order::F => 0,
            Order::FPrime => 1,
            Order::FSecond => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Order::F => "f",
            Order::FPrime => "f'",
            Order::FSecond => "f''",
        }
    }
}

/// Relative size below which a value counts as zero in degeneracy checks.
const DEGENERACY: f64 = 1e-8;

/// Root of a continuous `g` in `[lo, hi]` where `g(lo)` has sign `sign_lo`
/// and `g(hi)` the opposite: Newton steps kept inside a shrinking bracket.
pub(crate) fn bracketed_root(
    g: impl Fn(f64) -> f64,
    dg: impl Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    sign_lo: f64,
    tol: f64,
) -> f64 {
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let gx = g(x);
        if gx == 0.0 {
            return x;
        }
        if gx.signum() == sign_lo {
            lo = x;
        } else {
            hi = x;
        }
        let d = dg(x);
        let newton = x - gx / d;
        let next = if d != 0.0 && newton > lo.min(hi) && newton < lo.max(hi) {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let done = (next - x).abs() < tol * 1e-3 || (hi - lo).abs() < tol * 1e-3;
        x = next;
        if done {
            break;
        }
    }
    x
}

/// All zeros of `f^(order)` in `[0, 2π)`, sorted, refined to `root_tol`.
///
/// Sign changes on the grid bracket the roots; a grid value of exactly zero
/// is itself a root. An interior extremum that reaches zero without a sign
/// change is a tangential zero and is rejected; one that overshoots zero
/// splits its cell into two brackets.
pub fn zeros_on_cycle(
    f: &FourierSeries,
    order: Order,
    cfg: &CurveConfig,
) -> Result<Vec<f64>, CurveError> {
    let k = order.derivative();
    let n = cfg.grid.max(8);
    let scale = f.scale(k).max(f64::MIN_POSITIVE);
    let dscale = f.scale(k + 1).max(f64::MIN_POSITIVE);
    let g = |t: f64| f.derivative(t, k);
    let dg = |t: f64| f.derivative(t, k + 1);
    let d2g = |t: f64| f.derivative(t, k + 2);
    let vals = cfg.exec.map_range(0..n, |i| {
        let t = grid_point(i, n);
        (g(t), dg(t))
    });

    let found: Vec<Result<f64, CurveError>> = cfg.exec.flat_map_range(0..n, |i| {
        let (a, b) = (grid_point(i, n), grid_point(i + 1, n));
        let (ga, da) = vals[i];
        let (gb, db) = vals[(i + 1) % n];
        let mut out = Vec::new();
        if ga == 0.0 {
            out.push(Ok(a));
        } else if gb != 0.0 && ga.signum() != gb.signum() {
            out.push(Ok(bracketed_root(g, dg, a, b, ga.signum(), cfg.root_tol)));
        } else if gb != 0.0 && da.signum() != db.signum() && da != 0.0 {
            // extremum of g inside the cell
            let m = bracketed_root(dg, d2g, a, b, da.signum(), cfg.root_tol);
            let gm = g(m);
            if gm.abs() <= DEGENERACY * scale {
                out.push(Err(CurveError::DegenerateZero {
                    function: order.name(),
                    t: wrap(m),
                }));
            } else if gm.signum() != ga.signum() {
                out.push(Ok(bracketed_root(g, dg, a, m, ga.signum(), cfg.root_tol)));
                out.push(Ok(bracketed_root(g, dg, m, b, gm.signum(), cfg.root_tol)));
            }
        }
        out
    });

    let mut roots = Vec::with_capacity(found.len());
    for r in found {
        let t = wrap(r?);
        if dg(t).abs() <= DEGENERACY * dscale {
            return Err(CurveError::DegenerateZero {
                function: order.name(),
                t,
            });
        }
        roots.push(t);
    }
    roots.sort_by(f64::total_cmp);
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn series(sin: &[f64], cos: &[f64]) -> FourierSeries {
        FourierSeries::new(0.0, sin.to_vec(), cos.to_vec()).unwrap()
    }

    #[test]
    fn cosine_zeros() {
        let z = zeros_on_cycle(&series(&[], &[1.0]), Order::F, &CurveConfig::default()).unwrap();
        assert_eq!(z.len(), 2);
        assert!((z[0] - PI / 2.0).abs() < 1e-10);
        assert!((z[1] - 3.0 * PI / 2.0).abs() < 1e-10);
    }

    #[test]
    fn cos_plus_sin_two_t() {
        let f = series(&[0.0, 1.0], &[1.0]);
        let cfg = CurveConfig::default();
        let z = zeros_on_cycle(&f, Order::F, &cfg).unwrap();
        let expected = [PI / 2.0, 7.0 * PI / 6.0, 3.0 * PI / 2.0, 11.0 * PI / 6.0];
        assert_eq!(z.len(), 4);
        for (a, b) in z.iter().zip(expected) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
        assert_eq!(zeros_on_cycle(&f, Order::FPrime, &cfg).unwrap().len(), 4);
    }

    #[test]
    fn exact_grid_zero_counted_once() {
        // sin t + 4 sin 2t + sin 4t vanishes exactly at t = 0
        let f = series(&[1.0, 4.0, 0.0, 1.0], &[]);
        let z = zeros_on_cycle(&f, Order::F, &CurveConfig::default()).unwrap();
        assert_eq!(z.len(), 4);
        assert_eq!(z[0], 0.0);
    }

    #[test]
    fn tangential_zero_is_rejected() {
        // 1 + cos t touches zero at π
        let f = FourierSeries::new(1.0, vec![], vec![1.0]).unwrap();
        let mut cfg = CurveConfig {
            grid: 999,
            ..CurveConfig::default()
        }; // π is not a grid point
        assert!(matches!(
            zeros_on_cycle(&f, Order::F, &cfg),
            Err(CurveError::DegenerateZero { .. })
        ));
        cfg.grid = 4096; // π is a grid point
        assert!(matches!(
            zeros_on_cycle(&f, Order::F, &cfg),
            Err(CurveError::DegenerateZero { .. })
        ));
    }

    #[test]
    fn close_pair_inside_one_cell_is_split() {
        // cos(t - 0.05) - 0.9999999: two zeros 9e-4 apart, both inside
        // the grid cell [0, 2π/64]
        let (s, c) = 0.05f64.sin_cos();
        let f = FourierSeries::new(-0.999_999_9, vec![s], vec![c]).unwrap();
        let cfg = CurveConfig {
            grid: 64,
            ..CurveConfig::default()
        };
        let z = zeros_on_cycle(&f, Order::F, &cfg).unwrap();
        assert_eq!(z.len(), 2, "{z:?}");
    }
}
