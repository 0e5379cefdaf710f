//! Legendrian cousins of holonomic knots.
//!
//! For `k ≥ 1` the curve
//! `L_k(t) = (-f, f'^(2k+1), -(2k+1) f'^(2k-1) f'')` is tangent to the
//! contact planes of `α = z dx - dv`. Its front, the projection to the
//! `(x, v)` plane, has the same double points as the holonomic projection
//! `(-f, f')` and cusps where `f' = 0`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curve::{
    crossing_sign, genericity_report, grid_point, self_intersections, svg_document, zeros_on_cycle,
    CurveConfig, CurveError, FourierSeries, Jet, Order, PlanarCurve, SvgMark,
};

/// Slopes of two front branches closer than this make a crossing
/// indeterminate.
pub const TRANSVERSALITY_TOL: f64 = 1e-6;

/// Samples with `|y|` at or below this lie on the plane where `β` vanishes.
pub const PLANE_TOL: f64 = 1e-6;

const NOT_A_FRONT: &str = "holonomic, not a front";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LegendrianError {
    #[error("beta degenerates on y = 0; sample at t = {t:.9} lies on it")]
    OnPlane { t: f64 },
    #[error("front branches at t = ({t1:.9}, {t2:.9}) are not transverse")]
    NotTransverse { t1: f64, t2: f64 },
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// Selects `L_k` over the base series `f`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CousinParams {
    pub k: u32,
    pub base: FourierSeries,
}

impl CousinParams {
    pub fn new(base: FourierSeries, k: u32) -> Self {
        CousinParams { k, base }
    }

    /// `k = 0` gives the holonomic curve itself, whose `(x, v)` projection
    /// has vertical tangencies.
    pub fn is_front(&self) -> bool {
        self.k > 0
    }
}

/// Position and velocity of `L_k` for one exponent.
fn cousin_terms(d: &[f64; 4], k: u32) -> ([f64; 3], [f64; 3]) {
    let [f0, f1, f2, f3] = *d;
    if k == 0 {
        return ([-f0, f1, -f2], [-f1, f2, -f3]);
    }
    let c = (2 * k + 1) as f64;
    let e = 2 * k as i32;
    let v = f1.powi(e + 1);
    let z = -(c * f1.powi(e - 1) * f2);
    let dv = c * f1.powi(e) * f2;
    let dz = -c * ((e - 1) as f64 * f1.powi(e - 2) * f2 * f2 + f1.powi(e - 1) * f3);
    ([-f0, v, z], [-f1, dv, dz])
}

/// `(x, v, z)` of `L_k` at `t`, with velocity.
pub fn cousin_jet(p: &CousinParams, t: f64) -> Jet {
    let (position, velocity) = cousin_terms(&p.base.derivatives(t), p.k);
    Jet {
        t,
        position,
        velocity,
    }
}

/// `L_k` sampled on the configured grid.
pub fn cousin_samples(p: &CousinParams, cfg: &CurveConfig) -> Vec<Jet> {
    let n = cfg.grid.max(8);
    cfg.exec
        .map_range(0..n, |i| cousin_jet(p, grid_point(i, n)))
}

/// The holonomic curve sampled on the configured grid.
pub fn holonomic_samples(f: &FourierSeries, cfg: &CurveConfig) -> Vec<Jet> {
    let n = cfg.grid.max(8);
    cfg.exec.map_range(0..n, |i| f.eval_jet(grid_point(i, n)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ContactForm {
    /// `α = z dx - dv`
    Alpha,
    /// `β = z dx - y dy`
    Beta,
}

/// Largest tangency defect over the samples, each measured relative to the
/// size of the two terms it compares (floored at 1).
pub fn tangency_residual(samples: &[Jet], form: ContactForm) -> Result<f64, LegendrianError> {
    let mut worst: f64 = 0.0;
    for j in samples {
        let [_, y, z] = j.position;
        let [dx, dy, _] = j.velocity;
        let a = z * dx;
        let b = match form {
            ContactForm::Alpha => dy,
            ContactForm::Beta => {
                if y.abs() <= PLANE_TOL {
                    return Err(LegendrianError::OnPlane { t: j.t });
                }
                y * dy
            }
        };
        worst = worst.max((a - b).abs() / a.abs().max(b.abs()).max(1.0));
    }
    Ok(worst)
}

/// `(x, y, z) ↦ (x, y²/2, z)`. Both half-spaces `y > 0` and `y < 0` map onto
/// `v > 0`; the map is not invertible along `y = 0`.
pub fn half_space_map(p: [f64; 3]) -> [f64; 3] {
    [p[0], p[1] * p[1] / 2.0, p[2]]
}

/// [`half_space_map`] applied to a jet, velocity included.
pub fn half_space_jet(j: &Jet) -> Jet {
    Jet {
        t: j.t,
        position: half_space_map(j.position),
        velocity: [j.velocity[0], j.position[1] * j.velocity[1], j.velocity[2]],
    }
}

/// One branch through a front double point: its parameter, slope `z` and
/// the sign of `dx/dt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrontBranch {
    pub t: f64,
    pub slope: f64,
    pub dx: f64,
}

/// Positive when the two branches meet a vertical line from opposite
/// directions, negative when from the same one. Checked against the sign
/// from the heights, with the larger `z` on top.
pub fn front_crossing_sign(a: FrontBranch, b: FrontBranch) -> Result<i8, LegendrianError> {
    let transverse = LegendrianError::NotTransverse { t1: a.t, t2: b.t };
    if (a.slope - b.slope).abs() < TRANSVERSALITY_TOL || a.dx == 0.0 || b.dx == 0.0 {
        return Err(transverse);
    }
    let by_directions = if a.dx.signum() == b.dx.signum() {
        -1
    } else {
        1
    };
    let u = |br: FrontBranch| [br.dx, br.slope * br.dx];
    let (over, under) = if a.slope > b.slope {
        (u(a), u(b))
    } else {
        (u(b), u(a))
    };
    let by_heights = if over[0] * under[1] - over[1] * under[0] > 0.0 {
        1
    } else {
        -1
    };
    if by_heights != by_directions {
        return Err(CurveError::SignDisagreement { t1: a.t, t2: b.t }.into());
    }
    Ok(by_directions)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrontCrossing {
    pub t1: f64,
    pub t2: f64,
    pub xv: [f64; 2],
    /// `z` on the branches through `t1` and `t2`.
    pub slopes: [f64; 2],
    pub sign: i8,
    /// Sign of the same crossing in the holonomic projection.
    pub holonomic_sign: i8,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontDiagram {
    pub k: u32,
    pub crossings: Vec<FrontCrossing>,
    /// Parameters of the cusps, the zeros of `f'`.
    pub cusps: Vec<f64>,
    pub note: Option<String>,
}

struct Front<'a> {
    p: &'a CousinParams,
    magnitude: f64,
}

impl<'a> Front<'a> {
    fn new(p: &'a CousinParams) -> Self {
        let magnitude = p
            .base
            .scale(1)
            .powi(2 * p.k as i32 + 1)
            .max(p.base.scale(0));
        Front { p, magnitude }
    }
}

impl PlanarCurve for Front<'_> {
    fn point(&self, t: f64) -> [f64; 2] {
        let j = cousin_jet(self.p, t);
        [j.position[0], j.position[1]]
    }

    fn velocity(&self, t: f64) -> [f64; 2] {
        let j = cousin_jet(self.p, t);
        [j.velocity[0], j.velocity[1]]
    }

    fn magnitude(&self) -> f64 {
        self.magnitude
    }
}

/// Crossings and cusps of the front of `L_k`. The crossings are found on the
/// `(x, v)` curve itself; the base series must be generic.
pub fn front_diagram(p: &CousinParams, cfg: &CurveConfig) -> Result<FrontDiagram, LegendrianError> {
    let report = genericity_report(&p.base, cfg)?;
    if let Some((i, check)) = report.first_failure() {
        return Err(
            CurveError::NotGeneric(format!("condition {i} fails: {}", check.detail)).into(),
        );
    }
    let (raw, failures) = self_intersections(&Front::new(p), cfg);
    if let Some(e) = failures.first() {
        return Err(CurveError::NotGeneric(format!(
            "front crossing search did not converge near t = ({:.9}, {:.9})",
            e.t1, e.t2
        ))
        .into());
    }
    let cusps = zeros_on_cycle(&p.base, Order::FPrime, cfg)?;
    let crossings = raw
        .iter()
        .map(|x| {
            let (a, b) = (cousin_jet(p, x.t1), cousin_jet(p, x.t2));
            let holonomic_sign = crossing_sign(&p.base, x.t1, x.t2, cfg)?;
            let sign = if p.is_front() {
                front_crossing_sign(
                    FrontBranch {
                        t: x.t1,
                        slope: a.position[2],
                        dx: a.velocity[0],
                    },
                    FrontBranch {
                        t: x.t2,
                        slope: b.position[2],
                        dx: b.velocity[0],
                    },
                )?
            } else {
                holonomic_sign
            };
            Ok(FrontCrossing {
                t1: x.t1,
                t2: x.t2,
                xv: x.point,
                slopes: [a.position[2], b.position[2]],
                sign,
                holonomic_sign,
            })
        })
        .collect::<Result<Vec<_>, LegendrianError>>()?;
    Ok(FrontDiagram {
        k: p.k,
        crossings,
        cusps,
        note: (!p.is_front()).then(|| NOT_A_FRONT.to_string()),
    })
}

/// The front as SVG, the branch with smaller `z` cut at each crossing and
/// each cusp marked.
pub fn front_svg(p: &CousinParams, cfg: &CurveConfig) -> Result<String, LegendrianError> {
    let d = front_diagram(p, cfg)?;
    let unders: Vec<f64> = d
        .crossings
        .iter()
        .map(|c| {
            if c.slopes[0] < c.slopes[1] {
                c.t1
            } else {
                c.t2
            }
        })
        .collect();
    let marks: Vec<SvgMark> = d
        .cusps
        .iter()
        .map(|&t| {
            let j = cousin_jet(p, t);
            SvgMark::Cusp([j.position[0], j.position[1]])
        })
        .collect();
    let title = match &d.note {
        Some(note) => format!("L_{} ({note})", p.k),
        None => format!("front of L_{}", p.k),
    };
    Ok(svg_document(
        &title,
        &Front::new(p),
        cfg.grid,
        &unders,
        &marks,
    ))
}

/// A point of the family `L(t, s)` joining `L_k` (at `s = 1`) to `L_m`
/// (at `s = 0`):
/// `v = s f'^(2k+1) + (1-s) f'^(2m+1)`, `z = s z_k + (1-s) z_m`.
///
/// With `verbatim` the `z_m` term keeps the coefficient `2k+1` in place of
/// `2m+1`; that curve is not tangent to `α` for `s < 1` when `k ≠ m`.
pub fn dasbach_isotopy_jet(
    f: &FourierSeries,
    k: u32,
    m: u32,
    s: f64,
    t: f64,
    verbatim: bool,
) -> Jet {
    let d = f.derivatives(t);
    let (pk, vk) = cousin_terms(&d, k);
    let (mut pm, mut vm) = cousin_terms(&d, m);
    if verbatim && m > 0 {
        let ratio = (2 * k + 1) as f64 / (2 * m + 1) as f64;
        pm[2] *= ratio;
        vm[2] *= ratio;
    }
    let mix = |a: f64, b: f64| s * a + (1.0 - s) * b;
    Jet {
        t,
        position: [pk[0], mix(pk[1], pm[1]), mix(pk[2], pm[2])],
        velocity: [vk[0], mix(vk[1], vm[1]), mix(vk[2], vm[2])],
    }
}

/// Tangency of one slice `L(·, s)` of the isotopy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsotopySlice {
    pub s: f64,
    pub alpha_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsotopyReport {
    pub k: u32,
    pub m: u32,
    pub verbatim: bool,
    pub slices: Vec<IsotopySlice>,
    /// `L(·, 1) = L_k` and `L(·, 0) = L_m` at every sample.
    pub endpoints_exact: bool,
    pub warnings: Vec<String>,
}

/// Samples the isotopy at each `s` and checks the endpoints against the
/// cousins. In verbatim mode the largest tangency defect is reported as a
/// warning.
pub fn dasbach_report(
    f: &FourierSeries,
    k: u32,
    m: u32,
    s_values: &[f64],
    verbatim: bool,
    cfg: &CurveConfig,
) -> Result<IsotopyReport, LegendrianError> {
    f.validate().map_err(LegendrianError::from)?;
    let n = cfg.grid.max(8);
    let slice = |s: f64| {
        cfg.exec.map_range(0..n, |i| {
            dasbach_isotopy_jet(f, k, m, s, grid_point(i, n), verbatim)
        })
    };
    let mut slices = Vec::with_capacity(s_values.len());
    for &s in s_values {
        slices.push(IsotopySlice {
            s,
            alpha_residual: tangency_residual(&slice(s), ContactForm::Alpha)?,
        });
    }
    let same = |a: &[Jet], b: &[Jet]| a.iter().zip(b).all(|(x, y)| x.position == y.position);
    let endpoints_exact = same(
        &slice(1.0),
        &cousin_samples(&CousinParams::new(f.clone(), k), cfg),
    ) && same(
        &slice(0.0),
        &cousin_samples(&CousinParams::new(f.clone(), m), cfg),
    );
    let mut warnings = Vec::new();
    if verbatim {
        let worst = slices.iter().map(|x| x.alpha_residual).fold(0.0, f64::max);
        warnings.push(format!(
            "verbatim isotopy formula uses 2k+1 = {} in both z terms and is not alpha-tangent: \
             largest residual {worst:.3e}",
            2 * k + 1
        ));
    }
    Ok(IsotopyReport {
        k,
        m,
        verbatim,
        slices,
        endpoints_exact,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn cosine() -> FourierSeries {
        FourierSeries::new(0.0, vec![], vec![1.0]).unwrap()
    }

    fn trefoil() -> FourierSeries {
        FourierSeries::new(0.0, vec![1.0, 4.0, 0.0, 1.0], vec![]).unwrap()
    }

    #[test]
    fn unknot_cousin_matches_closed_form() {
        let p = CousinParams::new(cosine(), 1);
        for t in [0.0, 0.4, 2.0, 5.1] {
            let j = cousin_jet(&p, t);
            let expect = [-t.cos(), -t.sin().powi(3), -3.0 * t.sin() * t.cos()];
            for (a, b) in j.position.iter().zip(expect) {
                assert!((a - b).abs() < 1e-14);
            }
        }
        let j = cousin_jet(&CousinParams::new(cosine(), 2), FRAC_PI_2);
        assert!(j.position[0].abs() < 1e-15 && (j.position[1] + 1.0).abs() < 1e-15);
        assert!(j.position[2].abs() < 1e-15);
        let j = cousin_jet(&p, 0.0);
        assert_eq!((j.position[1], j.position[2]), (0.0, 0.0));
    }

    #[test]
    fn velocity_matches_differences() {
        let p = CousinParams::new(trefoil(), 2);
        let h = 1e-6;
        for t in [0.3, 1.7, 4.4] {
            let j = cousin_jet(&p, t);
            let (a, b) = (cousin_jet(&p, t + h), cousin_jet(&p, t - h));
            for c in 0..3 {
                let fd = (a.position[c] - b.position[c]) / (2.0 * h);
                assert!((fd - j.velocity[c]).abs() < 1e-5 * j.velocity[c].abs().max(1.0));
            }
        }
    }

    #[test]
    fn residuals() {
        let cfg = CurveConfig::default();
        let s = cousin_samples(&CousinParams::new(cosine(), 1), &cfg);
        assert!(tangency_residual(&s, ContactForm::Alpha).unwrap() < 1e-9);
        let shifted: Vec<Jet> = s
            .iter()
            .map(|j| Jet {
                position: [j.position[0], j.position[1], j.position[2] + 0.1],
                ..*j
            })
            .collect();
        assert!(tangency_residual(&shifted, ContactForm::Alpha).unwrap() >= 0.05);
        let h = holonomic_samples(&cosine(), &cfg);
        assert!(matches!(
            tangency_residual(&h, ContactForm::Beta),
            Err(LegendrianError::OnPlane { .. })
        ));
        let off: Vec<Jet> = h
            .into_iter()
            .filter(|j| j.position[1].abs() > 0.1)
            .collect();
        assert!(tangency_residual(&off, ContactForm::Beta).unwrap() < 1e-9);
        let mapped: Vec<Jet> = off.iter().map(half_space_jet).collect();
        assert!(tangency_residual(&mapped, ContactForm::Alpha).unwrap() < 1e-9);
    }

    #[test]
    fn half_space_map_is_even() {
        assert_eq!(half_space_map([0.0, 2.0, 5.0]), [0.0, 2.0, 5.0]);
        assert_eq!(
            half_space_map([1.0, -3.0, 2.0]),
            half_space_map([1.0, 3.0, 2.0])
        );
    }

    #[test]
    fn fronts_of_the_catalog() {
        let cfg = CurveConfig::default();
        let d = front_diagram(&CousinParams::new(cosine(), 1), &cfg).unwrap();
        assert_eq!((d.crossings.len(), d.cusps.len()), (0, 2));
        let d = front_diagram(&CousinParams::new(trefoil(), 1), &cfg).unwrap();
        assert_eq!((d.crossings.len(), d.cusps.len()), (3, 4));
        assert!(d
            .crossings
            .iter()
            .all(|c| c.sign == -1 && c.holonomic_sign == 1));
        assert_eq!(d.note, None);
        let d0 = front_diagram(&CousinParams::new(trefoil(), 0), &cfg).unwrap();
        assert_eq!(d0.note.as_deref(), Some(NOT_A_FRONT));
    }

    #[test]
    fn front_sign_rule() {
        let br = |t, slope, dx| FrontBranch { t, slope, dx };
        assert_eq!(
            front_crossing_sign(br(0.0, 1.0, 1.0), br(1.0, -1.0, 2.0)),
            Ok(-1)
        );
        assert_eq!(
            front_crossing_sign(br(0.0, 1.0, 1.0), br(1.0, -1.0, -2.0)),
            Ok(1)
        );
        assert!(matches!(
            front_crossing_sign(br(0.0, 1.0, 1.0), br(1.0, 1.0 + 1e-9, 1.0)),
            Err(LegendrianError::NotTransverse { .. })
        ));
    }

    #[test]
    fn isotopy_endpoints_and_tangency() {
        let cfg = CurveConfig {
            grid: 1024,
            ..CurveConfig::default()
        };
        let s = [0.0, 0.25, 0.5, 0.75, 1.0];
        let r = dasbach_report(&cosine(), 1, 2, &s, false, &cfg).unwrap();
        assert!(r.endpoints_exact && r.warnings.is_empty());
        assert!(r.slices.iter().all(|x| x.alpha_residual < 1e-9));
        let v = dasbach_report(&cosine(), 1, 2, &s, true, &cfg).unwrap();
        assert_eq!(v.warnings.len(), 1);
        assert!(v.slices[0].alpha_residual > 1e-3);
        assert_eq!(v.slices[4].alpha_residual, r.slices[4].alpha_residual);
    }
}
