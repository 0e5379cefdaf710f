use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::CurveError;

/// A truncated trigonometric series
/// `f(t) = c + Σ_j a_j sin(jt) + b_j cos(jt)` with period `2π`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FourierSeries {
    #[serde(default)]
    pub constant: f64,
    /// `a_1, a_2, …`
    #[serde(default)]
    pub sin: Vec<f64>,
    /// `b_1, b_2, …`
    #[serde(default)]
    pub cos: Vec<f64>,
}

/// The space curve `(-f, f', -f'')` at one parameter together with its
/// velocity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub t: f64,
    pub position: [f64; 3],
    pub velocity: [f64; 3],
}

impl FourierSeries {
    pub fn new(constant: f64, sin: Vec<f64>, cos: Vec<f64>) -> Result<Self, CurveError> {
        let f = FourierSeries { constant, sin, cos };
        f.validate()?;
        Ok(f)
    }

    /// Rejects non-finite coefficients and series with no oscillating term.
    pub fn validate(&self) -> Result<(), CurveError> {
        let all = std::iter::once(&self.constant)
            .chain(&self.sin)
            .chain(&self.cos);
        if all.clone().any(|c| !c.is_finite()) {
            return Err(CurveError::InvalidSeries(
                "coefficients must be finite".into(),
            ));
        }
        if self.sin.iter().chain(&self.cos).all(|c| *c == 0.0) {
            return Err(CurveError::InvalidSeries(
                "at least one sine or cosine coefficient must be nonzero".into(),
            ));
        }
        Ok(())
    }

    pub fn degree(&self) -> usize {
        self.sin.len().max(self.cos.len())
    }

    /// `f, f', f'', f'''` at `t`, differentiated termwise.
    pub fn derivatives(&self, t: f64) -> [f64; 4] {
        let mut d = [self.constant, 0.0, 0.0, 0.0];
        for j in 1..=self.degree() {
            let a = self.sin.get(j - 1).copied().unwrap_or(0.0);
            let b = self.cos.get(j - 1).copied().unwrap_or(0.0);
            if a == 0.0 && b == 0.0 {
                continue;
            }
            let w = j as f64;
            let (s, c) = (w * t).sin_cos();
            // a sin + b cos, then its successive derivatives
            let v0 = a * s + b * c;
            let v1 = a * c - b * s;
            d[0] += v0;
            d[1] += w * v1;
            d[2] -= w * w * v0;
            d[3] -= w * w * w * v1;
        }
        d
    }

    /// The `order`-th derivative of `f` at `t`, for any `order`.
    pub fn derivative(&self, t: f64, order: u32) -> f64 {
        if order <= 3 {
            return self.derivatives(t)[order as usize];
        }
        let mut total = 0.0;
        for j in 1..=self.degree() {
            let a = self.sin.get(j - 1).copied().unwrap_or(0.0);
            let b = self.cos.get(j - 1).copied().unwrap_or(0.0);
            let w = j as f64;
            let (s, c) = (w * t).sin_cos();
            let (ds, dc) = match order % 4 {
                0 => (s, c),
                1 => (c, -s),
                2 => (-s, -c),
                _ => (-c, s),
            };
            total += w.powi(order as i32) * (a * ds + b * dc);
        }
        total
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.derivatives(t)[0]
    }

    /// `(x, y, z) = (-f, f', -f'')` and its velocity `(-f', f'', -f''')`.
    pub fn eval_jet(&self, t: f64) -> Jet {
        let [f0, f1, f2, f3] = self.derivatives(t);
        Jet {
            t,
            position: [-f0, f1, -f2],
            velocity: [-f1, f2, -f3],
        }
    }

    /// `Σ |coefficient|·j^order`, an upper bound for `|f^(order)|`.
    pub fn scale(&self, order: u32) -> f64 {
        let mut s = if order == 0 { self.constant.abs() } else { 0.0 };
        for j in 1..=self.degree() {
            let a = self.sin.get(j - 1).copied().unwrap_or(0.0);
            let b = self.cos.get(j - 1).copied().unwrap_or(0.0);
            s += (a.abs() + b.abs()) * (j as f64).powi(order as i32);
        }
        s
    }
}

/// The `i`-th of `n` equally spaced parameters in `[0, 2π)`.
pub(crate) fn grid_point(i: usize, n: usize) -> f64 {
    TAU * i as f64 / n as f64
}

/// Reduces `t` to `[0, 2π)`.
pub(crate) fn wrap(t: f64) -> f64 {
    let r = t.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn jet_of_cosine() {
        let f = FourierSeries::new(0.0, vec![], vec![1.0]).unwrap();
        let j = f.eval_jet(0.0);
        assert_eq!(j.position, [-1.0, 0.0, 1.0]);
        let j = f.eval_jet(FRAC_PI_2);
        assert!((j.position[0]).abs() < 1e-15);
        assert!((j.position[1] + 1.0).abs() < 1e-15);
        assert!((j.position[2]).abs() < 1e-15);
    }

    #[test]
    fn higher_derivatives_agree() {
        let f = FourierSeries::new(0.5, vec![1.0, 4.0, 0.0, 1.0], vec![0.3, -0.2]).unwrap();
        for t in [0.0, 0.7, 2.9, 5.5] {
            let d = f.derivatives(t);
            for (k, v) in d.iter().enumerate() {
                assert!((f.derivative(t, k as u32) - v).abs() < 1e-12);
            }
            // the fourth derivative via the general path against a difference
            let h = 1e-4;
            let fd = (f.derivative(t + h, 3) - f.derivative(t - h, 3)) / (2.0 * h);
            assert!((f.derivative(t, 4) - fd).abs() < 1e-4 * f.scale(5));
        }
    }

    #[test]
    fn validation() {
        assert!(FourierSeries::new(1.0, vec![0.0], vec![]).is_err());
        assert!(FourierSeries::new(0.0, vec![f64::NAN], vec![]).is_err());
        assert_eq!(wrap(-0.5), TAU - 0.5);
        assert_eq!(wrap(TAU), 0.0);
    }
}
