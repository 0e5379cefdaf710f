mod common;

use holobraid_core::curve::{double_point_pairs, zeros_on_cycle, CurveConfig, Order};
use holobraid_core::legendrian::{
    cousin_samples, dasbach_report, front_diagram, half_space_jet, holonomic_samples,
    tangency_residual, ContactForm, CousinParams,
};

#[test]
fn cousins_are_tangent_to_alpha() {
    let cfg = CurveConfig::default();
    for (name, f) in common::catalog() {
        for k in 1..=3 {
            let s = cousin_samples(&CousinParams::new(f.clone(), k), &cfg);
            let r = tangency_residual(&s, ContactForm::Alpha).unwrap();
            assert!(r < 1e-9, "{name} k={k}: {r:e}");
        }
    }
}

#[test]
fn half_space_map_carries_beta_to_alpha() {
    let cfg = CurveConfig::default();
    for (name, f) in common::catalog() {
        let off: Vec<_> = holonomic_samples(&f, &cfg)
            .into_iter()
            .filter(|j| j.position[1].abs() > 0.1)
            .collect();
        assert!(
            tangency_residual(&off, ContactForm::Beta).unwrap() < 1e-9,
            "{name}"
        );
        let mapped: Vec<_> = off.iter().map(half_space_jet).collect();
        assert!(
            tangency_residual(&mapped, ContactForm::Alpha).unwrap() < 1e-9,
            "{name}"
        );
    }
}

#[test]
fn fronts_share_the_holonomic_diagram() {
    let cfg = CurveConfig::default();
    for (name, f) in common::catalog() {
        let (pairs, _) = double_point_pairs(&f, &cfg).unwrap();
        let zeros = zeros_on_cycle(&f, Order::FPrime, &cfg).unwrap();
        for k in 1..=3 {
            let d = front_diagram(&CousinParams::new(f.clone(), k), &cfg).unwrap();
            assert_eq!(d.crossings.len(), pairs.len(), "{name} k={k}");
            for (c, p) in d.crossings.iter().zip(&pairs) {
                assert!((c.t1 - p[0]).abs() < 1e-8 && (c.t2 - p[1]).abs() < 1e-8);
                // every front crossing is negative
                assert_eq!(c.sign, -1);
                // the sign survives in the upper half-plane and flips below
                let upper = f.derivative(c.t1, 1) > 0.0;
                assert_eq!(c.sign == c.holonomic_sign, upper, "{name} k={k}");
                // x coordinates agree with the holonomic projection
                assert!((c.xv[0] + f.eval(c.t1)).abs() < 1e-12);
            }
            assert_eq!(d.cusps.len() % 2, 0);
            assert_eq!(d.cusps.len(), zeros.len());
            for (a, b) in d.cusps.iter().zip(&zeros) {
                assert!((a - b).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn isotopy_slices_are_legendrian() {
    let cfg = CurveConfig::default();
    let s = [0.0, 0.25, 0.5, 0.75, 1.0];
    for (name, f) in common::catalog() {
        let r = dasbach_report(&f, 1, 2, &s, false, &cfg).unwrap();
        assert!(r.endpoints_exact, "{name}");
        for slice in &r.slices {
            assert!(slice.alpha_residual < 1e-9, "{name} s={}", slice.s);
        }
    }
}
