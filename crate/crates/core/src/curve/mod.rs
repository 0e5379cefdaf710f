//! Numerical engine for the space curve `(-f(t), f'(t), -f''(t))` of a
//! trigonometric series `f`.
//!
//! The xy projection `(-f, f')` is a closed braid about a point `(c, 0)` of
//! the x axis whenever the genericity conditions hold:
//!
//! 1. the curve is embedded (no double point of the projection has equal
//!    heights on both branches),
//! 2. no double point lies on the x axis,
//! 3. there are no triple points,
//! 4. `f` and `f'` have the same number of zeros per cycle.
//!
//! Crossings in the upper half-plane are negative and those in the lower
//! half-plane positive, so reading the crossings by polar angle gives a word
//! in `N|P` form directly.

mod analysis;
mod planar;
mod render;
mod roots;
mod series;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::BraidError;
use crate::par::Exec;

pub use analysis::{
    braid_axis_point, crossing_sign, double_point_pairs, double_points, extract_braid,
    genericity_report, winding_check, ConditionCheck, DoublePoint, ExtractedBraid,
    GenericityReport, HalfPlane,
};
pub use planar::NewtonFailure;
pub use render::{curve_csv, curve_svg};
pub use roots::{zeros_on_cycle, Order};
pub use series::{FourierSeries, Jet};

pub(crate) use planar::{self_intersections, PlanarCurve};
pub(crate) use render::{svg_document, SvgMark};
pub(crate) use series::grid_point;

/// Sampling resolution and tolerances shared by every scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CurveConfig {
    /// Samples per cycle for the grid scans.
    pub grid: usize,
    /// Root refinement tolerance.
    pub root_tol: f64,
    /// Largest residual accepted for a double point.
    pub match_tol: f64,
    /// Parameters closer than this are the same point.
    pub dedupe_tol: f64,
    /// `|f'|` at or below this puts a double point on the axis.
    pub axis_tol: f64,
    pub exec: Exec,
}

impl Default for CurveConfig {
    fn default() -> Self {
        CurveConfig {
            grid: 4096,
            root_tol: 1e-10,
            match_tol: 1e-8,
            dedupe_tol: 1e-6,
            axis_tol: 1e-6,
            exec: Exec::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CurveError {
    #[error("invalid series: {0}")]
    InvalidSeries(String),
    #[error("{function} has a non-simple zero near t = {t:.9}")]
    DegenerateZero { function: &'static str, t: f64 },
    #[error("no point of the x axis separates the axis crossings")]
    NoSeparatingPoint,
    #[error("double point at t = ({t1:.9}, {t2:.9}) lies on the x axis")]
    OnAxis { t1: f64, t2: f64 },
    #[error("crossing signs disagree at t = ({t1:.9}, {t2:.9})")]
    SignDisagreement { t1: f64, t2: f64 },
    #[error("curve is not embedded at t = ({t1:.9}, {t2:.9})")]
    NotEmbedded { t1: f64, t2: f64 },
    #[error("curve is not generic: {0}")]
    NotGeneric(String),
    #[error("strand order is ambiguous at angle {angle:.9}")]
    StrandAmbiguity { angle: f64 },
    #[error("projection does not wind monotonically: value {value:e} at t = {t:.9}")]
    WindingFailure { t: f64, value: f64 },
    #[error(transparent)]
    Braid(#[from] BraidError),
}
