use std::fmt::Write;

use super::analysis::{braid_axis_point, double_point_pairs, Projection};
use super::planar::{circular_distance, PlanarCurve};
use super::series::{grid_point, FourierSeries};
use super::{CurveConfig, CurveError};

const CANVAS: f64 = 480.0;
const MARGIN: f64 = 24.0;

/// Decorations drawn on top of a curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum SvgMark {
    /// The braid axis through `(x, 0)`.
    Axis(f64),
    Cusp([f64; 2]),
}

struct Frame {
    min: [f64; 2],
    scale: f64,
    height: f64,
}

impl Frame {
    fn new(points: &[[f64; 2]]) -> Frame {
        let mut min = [f64::INFINITY; 2];
        let mut max = [f64::NEG_INFINITY; 2];
        for p in points {
            for k in 0..2 {
                min[k] = min[k].min(p[k]);
                max[k] = max[k].max(p[k]);
            }
        }
        // keep the x axis in view
        min[1] = min[1].min(0.0);
        max[1] = max[1].max(0.0);
        let span = (max[0] - min[0]).max(max[1] - min[1]).max(1e-12);
        let scale = (CANVAS - 2.0 * MARGIN) / span;
        Frame {
            min,
            scale,
            height: (max[1] - min[1]) * scale + 2.0 * MARGIN,
        }
    }

    fn width(&self, max_x: f64) -> f64 {
        (max_x - self.min[0]) * self.scale + 2.0 * MARGIN
    }

    fn map(&self, p: [f64; 2]) -> (f64, f64) {
        (
            MARGIN + (p[0] - self.min[0]) * self.scale,
            self.height - MARGIN - (p[1] - self.min[1]) * self.scale,
        )
    }
}

/// Runs of consecutive sample indices kept after cutting the gaps, joined
/// across `t = 0`.
fn runs(keep: &[bool]) -> Vec<Vec<usize>> {
    let n = keep.len();
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut current = Vec::new();
    for (i, &k) in keep.iter().enumerate() {
        if k {
            current.push(i);
        } else if !current.is_empty() {
            out.push(std::mem::take(&mut current));
        }
    }
    if current.len() == n {
        current.push(0);
        return vec![current];
    }
    if !current.is_empty() {
        if keep[0] && !out.is_empty() {
            current.extend(out.remove(0));
            out.insert(0, current);
        } else {
            out.push(current);
        }
    }
    out
}

/// An SVG drawing of a closed planar curve sampled at `samples` points, with
/// the under-strand cut at each parameter in `unders`.
pub(crate) fn svg_document<C: PlanarCurve>(
    title: &str,
    curve: &C,
    samples: usize,
    unders: &[f64],
    marks: &[SvgMark],
) -> String {
    let n = samples.max(8);
    let pts: Vec<[f64; 2]> = (0..n).map(|i| curve.point(grid_point(i, n))).collect();
    let frame = Frame::new(&pts);
    let max_x = pts.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
    let width = frame.width(max_x);
    let gap = 7.0 / frame.scale;
    let cuts: Vec<(f64, f64)> = unders
        .iter()
        .map(|&t| {
            let v = curve.velocity(t);
            (t, gap / v[0].hypot(v[1]).max(1e-12))
        })
        .collect();
    let keep: Vec<bool> = (0..n)
        .map(|i| {
            let t = grid_point(i, n);
            cuts.iter().all(|&(c, d)| circular_distance(t, c) > d)
        })
        .collect();

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{:.0}" viewBox="0 0 {width:.3} {:.3}">"#,
        frame.height, frame.height
    );
    let _ = writeln!(s, "<title>{}</title>", escape(title));
    let (x0, ya) = frame.map([frame.min[0], 0.0]);
    let (x1, _) = frame.map([max_x, 0.0]);
    let _ = writeln!(
        s,
        r##"<line x1="{:.3}" y1="{ya:.3}" x2="{:.3}" y2="{ya:.3}" stroke="#bbb" stroke-width="1"/>"##,
        x0 - MARGIN / 2.0,
        x1 + MARGIN / 2.0
    );
    for run in runs(&keep) {
        let mut d = String::new();
        for (k, &i) in run.iter().enumerate() {
            let (x, y) = frame.map(pts[i]);
            let _ = write!(d, "{}{x:.3} {y:.3}", if k == 0 { "M" } else { " L" });
        }
        let _ = writeln!(
            s,
            r#"<path d="{d}" fill="none" stroke="black" stroke-width="2" stroke-linejoin="round"/>"#
        );
    }
    for mark in marks {
        match *mark {
            SvgMark::Axis(c) => {
                let (x, y) = frame.map([c, 0.0]);
                let _ = writeln!(
                    s,
                    r##"<circle cx="{x:.3}" cy="{y:.3}" r="4" fill="#c00"/>"##
                );
            }
            SvgMark::Cusp(p) => {
                let (x, y) = frame.map(p);
                let _ = writeln!(
                    s,
                    r##"<path d="M{:.3} {:.3} L{:.3} {:.3} L{:.3} {:.3} Z" fill="#06c"/>"##,
                    x - 4.0,
                    y + 3.5,
                    x + 4.0,
                    y + 3.5,
                    x,
                    y - 4.5
                );
            }
        }
    }
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// The xy projection as SVG. The lower branch (smaller `z`) is cut at each
/// crossing; the braid axis is marked when it exists.
pub fn curve_svg(f: &FourierSeries, cfg: &CurveConfig) -> Result<String, CurveError> {
    let (pairs, _) = double_point_pairs(f, cfg)?;
    let unders: Vec<f64> = pairs
        .iter()
        .filter_map(|&[t1, t2]| {
            let (z1, z2) = (-f.derivative(t1, 2), -f.derivative(t2, 2));
            (z1 != z2).then_some(if z1 < z2 { t1 } else { t2 })
        })
        .collect();
    let marks: Vec<SvgMark> = braid_axis_point(f, cfg)
        .ok()
        .map(SvgMark::Axis)
        .into_iter()
        .collect();
    Ok(svg_document(
        "holonomic projection",
        &Projection(f),
        cfg.grid,
        &unders,
        &marks,
    ))
}

/// Samples `t,x,y,z` of the space curve on the configured grid.
pub fn curve_csv(f: &FourierSeries, cfg: &CurveConfig) -> Result<String, CurveError> {
    f.validate()?;
    let n = cfg.grid.max(8);
    let rows = cfg.exec.map_range(0..n, |i| {
        let j = f.eval_jet(grid_point(i, n));
        let [x, y, z] = j.position;
        format!("{:.12},{x:.12},{y:.12},{z:.12}\n", j.t)
    });
    let mut s = String::from("t,x,y,z\n");
    s.extend(rows);
    Ok(s)
}
