use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use super::planar::{circular_distance, self_intersections, PlanarCurve};
use super::roots::{bracketed_root, zeros_on_cycle, Order};
use super::series::{grid_point, wrap, FourierSeries};
use super::{CurveConfig, CurveError, NewtonFailure};
use crate::braid::BraidWord;

/// Which side of the x axis a double point of the projection lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HalfPlane {
    Upper,
    Lower,
}

/// A signed crossing of the xy projection `(-f, f')`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DoublePoint {
    pub t1: f64,
    pub t2: f64,
    pub xy: [f64; 2],
    /// `z = -f''` on the branches through `t1` and `t2`.
    pub heights: [f64; 2],
    pub sign: i8,
    pub half_plane: HalfPlane,
}

impl DoublePoint {
    /// Parameter of the branch passing underneath.
    pub fn under(&self) -> f64 {
        if self.heights[0] < self.heights[1] {
            self.t1
        } else {
            self.t2
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionCheck {
    pub passed: bool,
    pub detail: String,
}

impl ConditionCheck {
    fn pass(detail: impl Into<String>) -> Self {
        ConditionCheck {
            passed: true,
            detail: detail.into(),
        }
    }

    fn fail(detail: impl Into<String>) -> Self {
        ConditionCheck {
            passed: false,
            detail: detail.into(),
        }
    }
}

/// Outcome of the four genericity conditions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenericityReport {
    pub condition1: ConditionCheck,
    pub condition2: ConditionCheck,
    pub condition3: ConditionCheck,
    pub condition4: ConditionCheck,
    pub zeros_f: Option<usize>,
    pub zeros_fprime: Option<usize>,
    /// Present exactly when condition 4 passes.
    pub braid_index: Option<usize>,
    /// Parameter pairs `(t1, t2)` of the double points.
    pub double_points: Vec<[f64; 2]>,
    pub newton_failures: usize,
    pub triple_points: Vec<f64>,
    /// Separating point of the axis crossings, when condition 4 passes and
    /// one exists.
    pub axis_point: Option<f64>,
    pub warnings: Vec<String>,
}

impl GenericityReport {
    pub fn conditions(&self) -> [&ConditionCheck; 4] {
        [
            &self.condition1,
            &self.condition2,
            &self.condition3,
            &self.condition4,
        ]
    }

    pub fn all_passed(&self) -> bool {
        self.conditions().iter().all(|c| c.passed)
    }

    /// The first failing condition, numbered from 1.
    pub fn first_failure(&self) -> Option<(usize, &ConditionCheck)> {
        self.conditions()
            .into_iter()
            .enumerate()
            .find(|(_, c)| !c.passed)
            .map(|(i, c)| (i + 1, c))
    }
}

/// A closed-braid word read off the projection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtractedBraid {
    pub word: BraidWord,
    /// The braid axis is the vertical line through `(axis, 0)`.
    pub axis: f64,
    /// Crossings in the order of their letters.
    pub crossings: Vec<DoublePoint>,
}

pub(crate) struct Projection<'a>(pub(crate) &'a FourierSeries);

impl PlanarCurve for Projection<'_> {
    fn point(&self, t: f64) -> [f64; 2] {
        let d = self.0.derivatives(t);
        [-d[0], d[1]]
    }

    fn velocity(&self, t: f64) -> [f64; 2] {
        let d = self.0.derivatives(t);
        [-d[1], d[2]]
    }
}

fn cross(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

/// Parameter pairs of the double points, with the candidates whose Newton
/// refinement failed.
pub fn double_point_pairs(
    f: &FourierSeries,
    cfg: &CurveConfig,
) -> Result<(Vec<[f64; 2]>, Vec<NewtonFailure>), CurveError> {
    f.validate()?;
    let (raw, failures) = self_intersections(&Projection(f), cfg);
    Ok((raw.into_iter().map(|x| [x.t1, x.t2]).collect(), failures))
}

/// Sign of the crossing at `(t1, t2)`, computed from the half-plane and
/// again from the heights and directions of the two branches.
pub fn crossing_sign(
    f: &FourierSeries,
    t1: f64,
    t2: f64,
    cfg: &CurveConfig,
) -> Result<i8, CurveError> {
    let (d1, d2) = (f.derivatives(t1), f.derivatives(t2));
    if d1[1].abs() <= cfg.axis_tol {
        return Err(CurveError::OnAxis { t1, t2 });
    }
    let by_half_plane = if d1[1] > 0.0 { -1 } else { 1 };
    let (z1, z2) = (-d1[2], -d2[2]);
    if (z1 - z2).abs() <= cfg.match_tol {
        return Err(CurveError::NotEmbedded { t1, t2 });
    }
    let u1 = [-d1[1], d1[2]];
    let u2 = [-d2[1], d2[2]];
    let (over, under) = if z1 > z2 { (u1, u2) } else { (u2, u1) };
    let by_heights = if cross(over, under) > 0.0 { 1 } else { -1 };
    if by_heights != by_half_plane {
        return Err(CurveError::SignDisagreement { t1, t2 });
    }
    Ok(by_half_plane)
}

fn signed(
    f: &FourierSeries,
    [t1, t2]: [f64; 2],
    cfg: &CurveConfig,
) -> Result<DoublePoint, CurveError> {
    let sign = crossing_sign(f, t1, t2, cfg)?;
    let (d1, d2) = (f.derivatives(t1), f.derivatives(t2));
    Ok(DoublePoint {
        t1,
        t2,
        xy: [-d1[0], d1[1]],
        heights: [-d1[2], -d2[2]],
        sign,
        half_plane: if d1[1] > 0.0 {
            HalfPlane::Upper
        } else {
            HalfPlane::Lower
        },
    })
}

/// Signed double points of the projection, sorted by `(t1, t2)`.
pub fn double_points(f: &FourierSeries, cfg: &CurveConfig) -> Result<Vec<DoublePoint>, CurveError> {
    let (pairs, _) = double_point_pairs(f, cfg)?;
    pairs.into_iter().map(|p| signed(f, p, cfg)).collect()
}

/// Parameters shared by two or more double points.
fn triple_points(pairs: &[[f64; 2]], tol: f64) -> Vec<f64> {
    let mut params: Vec<(f64, usize)> = pairs
        .iter()
        .enumerate()
        .flat_map(|(i, p)| [(p[0], i), (p[1], i)])
        .collect();
    params.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out = Vec::new();
    let m = params.len();
    for a in 0..m {
        for b in a + 1..m {
            if circular_distance(params[a].0, params[b].0) < tol
                && params[a].1 != params[b].1
                && !out.iter().any(|&t| circular_distance(t, params[a].0) < tol)
            {
                out.push(params[a].0);
            }
        }
    }
    out
}

/// Checks the four genericity conditions. Failures are report entries; only
/// an invalid series is an error.
pub fn genericity_report(
    f: &FourierSeries,
    cfg: &CurveConfig,
) -> Result<GenericityReport, CurveError> {
    let (pairs, failures) = double_point_pairs(f, cfg)?;

    let unembedded: Vec<&[f64; 2]> = pairs
        .iter()
        .filter(|[t1, t2]| (f.derivative(*t1, 2) - f.derivative(*t2, 2)).abs() <= cfg.match_tol)
        .collect();
    let condition1 = if let Some([t1, t2]) = unembedded.first() {
        ConditionCheck::fail(format!("heights coincide at t = ({t1:.9}, {t2:.9})"))
    } else if !failures.is_empty() {
        ConditionCheck::fail(format!(
            "{} candidate crossings did not converge",
            failures.len()
        ))
    } else {
        ConditionCheck::pass(format!("{} double points, all embedded", pairs.len()))
    };

    let on_axis = pairs
        .iter()
        .find(|[t1, _]| f.derivative(*t1, 1).abs() <= cfg.axis_tol);
    let condition2 = match on_axis {
        Some([t1, t2]) => ConditionCheck::fail(format!(
            "double point on the x axis at t = ({t1:.9}, {t2:.9})"
        )),
        None => ConditionCheck::pass("no double point on the x axis"),
    };

    let triples = triple_points(&pairs, cfg.dedupe_tol);
    let condition3 = match triples.first() {
        Some(t) => ConditionCheck::fail(format!("triple point near t = {t:.9}")),
        None => ConditionCheck::pass("no triple points"),
    };

    let zf = zeros_on_cycle(f, Order::F, cfg);
    let zp = zeros_on_cycle(f, Order::FPrime, cfg);
    let zeros_f = zf.as_ref().ok().map(Vec::len);
    let zeros_fprime = zp.as_ref().ok().map(Vec::len);
    let condition4 = match (&zf, &zp) {
        (Err(e), _) | (_, Err(e)) => ConditionCheck::fail(e.to_string()),
        (Ok(a), Ok(b)) if a.len() == b.len() => {
            ConditionCheck::pass(format!("f and f' both have {} zeros", a.len()))
        }
        (Ok(a), Ok(b)) => {
            ConditionCheck::fail(format!("f has {} zeros but f' has {}", a.len(), b.len()))
        }
    };
    let braid_index = if condition4.passed {
        zeros_f.map(|z| z / 2)
    } else {
        None
    };

    let mut warnings = Vec::new();
    let axis_point = if condition4.passed {
        match braid_axis_point(f, cfg) {
            Ok(c) => Some(c),
            Err(e) => {
                warnings.push(format!("condition 4 holds but {e}"));
                None
            }
        }
    } else {
        None
    };

    Ok(GenericityReport {
        condition1,
        condition2,
        condition3,
        condition4,
        zeros_f,
        zeros_fprime,
        braid_index,
        double_points: pairs,
        newton_failures: failures.len(),
        triple_points: triples,
        axis_point,
        warnings,
    })
}

/// A point `c` of the x axis separating the axis crossings with `f'' < 0`
/// (all to its left) from those with `f'' > 0` (all to its right); the
/// midpoint of the gap.
pub fn braid_axis_point(f: &FourierSeries, cfg: &CurveConfig) -> Result<f64, CurveError> {
    f.validate()?;
    let zeros = zeros_on_cycle(f, Order::FPrime, cfg)?;
    let (mut left, mut right) = (f64::NEG_INFINITY, f64::INFINITY);
    for t in zeros {
        let d = f.derivatives(t);
        let x = -d[0];
        if d[2] < 0.0 {
            left = left.max(x);
        } else {
            right = right.min(x);
        }
    }
    if left.is_finite() && right.is_finite() && left < right {
        Ok(0.5 * (left + right))
    } else {
        Err(CurveError::NoSeparatingPoint)
    }
}

/// Numerator of `dθ/dt` for the polar angle about `(c, 0)`.
fn angular_speed(d: &[f64; 4], c: f64) -> f64 {
    d[1] * d[1] - (d[0] + c) * d[2]
}

/// Polar angle of the projection about `(c, 0)`, in `[0, 2π)`.
fn polar_angle(d: &[f64; 4], c: f64) -> f64 {
    d[1].atan2(-d[0] - c).rem_euclid(TAU)
}

fn wrap_to_pi(x: f64) -> f64 {
    (x + PI).rem_euclid(TAU) - PI
}

/// Checks that the polar angle about `(c, 0)` increases at every sample.
pub fn winding_check(f: &FourierSeries, c: f64, cfg: &CurveConfig) -> Result<(), CurveError> {
    let n = cfg.grid.max(8);
    let speeds = cfg
        .exec
        .map_range(0..n, |i| angular_speed(&f.derivatives(grid_point(i, n)), c));
    match speeds.iter().position(|v| v.is_nan() || *v <= 0.0) {
        Some(i) => Err(CurveError::WindingFailure {
            t: grid_point(i, n),
            value: speeds[i],
        }),
        None => Ok(()),
    }
}

/// Parameters where the polar angle equals `target`.
fn strands_at(f: &FourierSeries, c: f64, target: f64, angles: &[f64], tol: f64) -> Vec<f64> {
    let n = angles.len();
    let g = |t: f64| wrap_to_pi(polar_angle(&f.derivatives(t), c) - target);
    let dg = |t: f64| {
        let d = f.derivatives(t);
        let r2 = (d[0] + c).powi(2) + d[1] * d[1];
        angular_speed(&d, c) / r2
    };
    let mut out = Vec::new();
    for i in 0..n {
        let ga = wrap_to_pi(angles[i] - target);
        let gb = wrap_to_pi(angles[(i + 1) % n] - target);
        if ga == 0.0 {
            out.push(grid_point(i, n));
        } else if ga < 0.0 && gb > 0.0 && ga > -PI / 2.0 && gb < PI / 2.0 {
            let (a, b) = (grid_point(i, n), grid_point(i + 1, n));
            out.push(wrap(bracketed_root(g, dg, a, b, -1.0, tol)));
        }
    }
    out
}

const REFINEMENTS: u32 = 3;

fn crossing_letter(
    f: &FourierSeries,
    c: f64,
    dp: &DoublePoint,
    strands: usize,
    cfg: &CurveConfig,
) -> Result<i32, CurveError> {
    let target = polar_angle(&f.derivatives(dp.t1), c);
    let radius = |t: f64| {
        let d = f.derivatives(t);
        (d[0] + c).hypot(d[1])
    };
    let r_dp = radius(dp.t1);
    let ambiguous = CurveError::StrandAmbiguity { angle: target };
    for level in 0..=REFINEMENTS {
        let n = cfg.grid.max(8) << level;
        let angles: Vec<f64> = (0..n)
            .map(|i| polar_angle(&f.derivatives(grid_point(i, n)), c))
            .collect();
        let ts = strands_at(f, c, target, &angles, cfg.root_tol);
        if ts.len() != strands {
            continue;
        }
        let near = |t: f64| {
            circular_distance(t, dp.t1) < cfg.dedupe_tol
                || circular_distance(t, dp.t2) < cfg.dedupe_tol
        };
        let (on, others): (Vec<f64>, Vec<f64>) = ts.into_iter().partition(|t| near(*t));
        if on.len() != 2 {
            return Err(ambiguous);
        }
        let tol = cfg.dedupe_tol * (1.0 + r_dp);
        let mut below = 0;
        for t in others {
            let r = radius(t);
            if (r - r_dp).abs() <= tol {
                return Err(ambiguous);
            }
            if r < r_dp {
                below += 1;
            }
        }
        let index = below + 1;
        if index >= strands {
            return Err(ambiguous);
        }
        return Ok(dp.sign as i32 * index as i32);
    }
    Err(ambiguous)
}

/// Reads the closed-braid word off a generic curve: crossings are ordered
/// by polar angle about the braid axis starting from the positive x
/// direction, and strands are numbered from the axis outward.
pub fn extract_braid(f: &FourierSeries, cfg: &CurveConfig) -> Result<ExtractedBraid, CurveError> {
    let report = genericity_report(f, cfg)?;
    if let Some((i, check)) = report.first_failure() {
        return Err(CurveError::NotGeneric(format!(
            "condition {i} fails: {}",
            check.detail
        )));
    }
    let strands = report.braid_index.expect("condition 4 passed");
    let c = braid_axis_point(f, cfg)?;
    winding_check(f, c, cfg)?;
    let mut crossings = report
        .double_points
        .iter()
        .map(|p| signed(f, *p, cfg))
        .collect::<Result<Vec<_>, _>>()?;
    crossings.sort_by(|a, b| {
        let ta = polar_angle(&f.derivatives(a.t1), c);
        let tb = polar_angle(&f.derivatives(b.t1), c);
        ta.total_cmp(&tb)
    });
    let letters = cfg
        .exec
        .map(&crossings, |dp| crossing_letter(f, c, dp, strands, cfg))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ExtractedBraid {
        word: BraidWord::new(strands, letters)?,
        axis: c,
        crossings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(sin: &[f64], cos: &[f64]) -> FourierSeries {
        FourierSeries::new(0.0, sin.to_vec(), cos.to_vec()).unwrap()
    }

    fn trefoil() -> FourierSeries {
        series(&[1.0, 4.0, 0.0, 1.0], &[])
    }

    #[test]
    fn unknot_has_no_crossings() {
        let cfg = CurveConfig::default();
        let f = series(&[], &[1.0]);
        assert!(double_points(&f, &cfg).unwrap().is_empty());
        let r = genericity_report(&f, &cfg).unwrap();
        assert!(r.all_passed());
        assert_eq!(r.braid_index, Some(1));
        let c = braid_axis_point(&f, &cfg).unwrap();
        assert!(c > -1.0 && c < 1.0);
        let b = extract_braid(&f, &cfg).unwrap();
        assert_eq!(b.word.to_text(), "n=1");
    }

    #[test]
    fn single_loop_signs() {
        let cfg = CurveConfig::default();
        let plus = series(&[0.0, 1.0], &[1.0]);
        let minus = series(&[0.0, -1.0], &[1.0]);
        let p = double_points(&plus, &cfg).unwrap();
        let m = double_points(&minus, &cfg).unwrap();
        assert_eq!((p.len(), m.len()), (1, 1));
        assert_eq!((p[0].sign, p[0].half_plane), (-1, HalfPlane::Upper));
        assert_eq!((m[0].sign, m[0].half_plane), (1, HalfPlane::Lower));
        assert_eq!(extract_braid(&plus, &cfg).unwrap().word.to_text(), "n=2 -1");
        assert_eq!(extract_braid(&minus, &cfg).unwrap().word.to_text(), "n=2 1");
    }

    #[test]
    fn trefoil_reads_as_positive_cube() {
        let cfg = CurveConfig::default();
        let r = genericity_report(&trefoil(), &cfg).unwrap();
        assert!(r.all_passed(), "{r:?}");
        assert_eq!((r.zeros_f, r.braid_index), (Some(4), Some(2)));
        let b = extract_braid(&trefoil(), &cfg).unwrap();
        assert_eq!(b.word.to_text(), "n=2 1 1 1");
        assert!(b.crossings.iter().all(|d| d.half_plane == HalfPlane::Lower));
    }

    #[test]
    fn interleaved_has_no_axis() {
        let cfg = CurveConfig::default();
        let f = series(&[1.0, 4.0, 0.0, 1.0, 1.5], &[]);
        let r = genericity_report(&f, &cfg).unwrap();
        assert!(!r.condition4.passed);
        assert_eq!(r.braid_index, None);
        assert_eq!(
            braid_axis_point(&f, &cfg),
            Err(CurveError::NoSeparatingPoint)
        );
        assert!(matches!(
            extract_braid(&f, &cfg),
            Err(CurveError::NotGeneric(_))
        ));
    }

    #[test]
    fn on_axis_is_rejected() {
        let cfg = CurveConfig::default();
        let f = series(&[], &[1.0]);
        assert!(matches!(
            crossing_sign(&f, 0.0, 1.0, &cfg),
            Err(CurveError::OnAxis { .. })
        ));
    }

    #[test]
    fn triple_point_clusters() {
        let pairs = [[0.1, 1.0], [0.1 + 1e-9, 2.0], [3.0, 4.0]];
        assert_eq!(triple_points(&pairs, 1e-6), vec![0.1]);
        assert!(triple_points(&pairs[1..], 1e-6).is_empty());
    }

    #[test]
    fn winding_fails_off_axis() {
        let cfg = CurveConfig::default();
        let f = series(&[], &[1.0]);
        assert!(winding_check(&f, 0.0, &cfg).is_ok());
        assert!(matches!(
            winding_check(&f, 2.0, &cfg),
            Err(CurveError::WindingFailure { .. })
        ));
    }
}
