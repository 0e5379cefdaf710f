mod common;

use holobraid_core::garside::{left_normal_form, summit_form, words_equal};
use holobraid_core::holonomic::{
    holonomic_normal_form, holonomic_summit, holonomize, markov_destabilize, markov_stabilize,
    replay, verify_certificate, verify_certificate_with, HolonomicForm, IsotopyCertificate,
    ReplayScript,
};
use holobraid_core::{BraidWord, Exec};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn corpus(seed: u64, count: usize) -> Vec<BraidWord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(2..=5);
            common::random_word(&mut rng, n, 20)
        })
        .collect()
}

fn random_holonomic<R: Rng>(rng: &mut R, n: usize, max_len: usize) -> HolonomicForm {
    if n < 2 {
        return HolonomicForm::trivial(n).unwrap();
    }
    let neg_len = rng.gen_range(0..=max_len);
    let pos_len = rng.gen_range(0..=max_len);
    let neg = common::random_positive(rng, n, neg_len).invert();
    let pos = common::random_positive(rng, n, pos_len);
    HolonomicForm::from_words(neg, pos).unwrap()
}

#[test]
fn holonomize_preserves_element_and_strands() {
    for w in corpus(101, 500) {
        let h = holonomize(&w);
        assert_eq!(h.strands(), w.strands());
        assert!(h.check_shape().is_ok());
        assert!(h.negative().is_negative() && h.positive().is_positive());
        assert!(words_equal(&h.word(), &w).unwrap(), "{w}");
        assert!(h.delta_exponent().is_some());
    }
}

#[test]
fn summit_pipeline_agrees_with_garside() {
    for w in corpus(101, 500) {
        let (summit, cert) = holonomic_summit(&holonomize(&w)).unwrap();
        let expected = summit_form(&w).unwrap().0;
        assert_eq!(
            summit.normal_form().summit_key(),
            expected.summit_key(),
            "{w}"
        );
        assert_eq!(&summit, cert.end());
        let v = verify_certificate(&cert);
        assert!(v.passed(), "{w}: {v}");
        for f in cert.forms() {
            assert!(f.check_shape().is_ok());
        }
        // conjugacy class data is constant across class-preserving steps
        for s in &cert.steps {
            assert!(s.mv.preserves_class());
            assert_eq!(s.result.strands(), w.strands());
            assert_eq!(s.result.exponent_sum(), w.exponent_sum());
        }
    }
}

#[test]
fn normal_form_pipeline_matches_left_normal_form() {
    for w in corpus(7, 200) {
        let (h, cert) = holonomic_normal_form(&holonomize(&w));
        assert_eq!(h, HolonomicForm::from_normal_form(&left_normal_form(&w)));
        assert!(verify_certificate(&cert).passed());
        assert!(cert
            .steps
            .iter()
            .all(|s| matches!(s.mv.tag(), "V3a" | "V3b")));
    }
}

#[test]
fn arbitrary_negative_parts_comb_and_verify() {
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    for _ in 0..200 {
        let n = rng.gen_range(2..=5);
        let h = random_holonomic(&mut rng, n, 12);
        let (out, cert) = holonomic_summit(&h).unwrap();
        assert!(verify_certificate(&cert).passed(), "{h}");
        assert_eq!(
            out.normal_form().summit_key(),
            summit_form(&h.word()).unwrap().0.summit_key()
        );
    }
}

#[test]
fn markov_round_trip_both_signs() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for i in 0..200 {
        let n = rng.gen_range(1..=5);
        let h = random_holonomic(&mut rng, n, 10);
        let sign = if i % 2 == 0 { 1 } else { -1 };
        let up = markov_stabilize(&h, sign).unwrap();
        assert_eq!(up.strands(), n + 1);
        let down = markov_destabilize(&up).unwrap();
        assert_eq!(down.normal_form(), h.normal_form());
    }
}

#[test]
fn verification_verdict_is_order_independent() {
    for w in corpus(3, 40) {
        let (_, mut cert) = holonomic_summit(&holonomize(&w)).unwrap();
        if cert.steps.len() < 2 {
            continue;
        }
        // corrupt two steps; the earliest one must be reported
        let k = cert.steps.len() / 2;
        for j in [k, cert.steps.len() - 1] {
            let r = &cert.steps[j].result;
            let mut pos = r.positive().letters().to_vec();
            pos.push(1);
            cert.steps[j].result =
                HolonomicForm::new(r.strands(), r.negative().letters().to_vec(), pos).unwrap();
        }
        let seq = verify_certificate_with(&cert, Exec::Sequential);
        let par = verify_certificate_with(&cert, Exec::Parallel);
        assert_eq!(seq, par);
        assert!(seq.failure.unwrap().step <= k + 1);
    }
}

#[test]
fn certificate_text_survives_a_round_trip() {
    for w in corpus(11, 50) {
        let (_, cert) = holonomic_summit(&holonomize(&w)).unwrap();
        let back: IsotopyCertificate = cert.to_text().parse().unwrap();
        assert_eq!(back, cert);
    }
}

#[test]
fn trefoil_goes_up_to_four_strands_and_back() {
    let start: HolonomicForm = "n=2 N= P=1,1,1".parse().unwrap();
    let script: ReplayScript = "M1 +\nM1 -\nM2\nM2\n".parse().unwrap();
    let cert = replay(&start, &script).unwrap();
    assert_eq!(cert.forms().map(HolonomicForm::strands).max(), Some(4));
    assert_eq!(cert.end(), &start);
    assert!(verify_certificate(&cert).passed());
}

#[test]
fn goto_between_random_conjugates() {
    let mut rng = ChaCha8Rng::seed_from_u64(91);
    for _ in 0..30 {
        let n = rng.gen_range(2..=4);
        let x = common::random_word(&mut rng, n, 10);
        let c = common::random_word(&mut rng, n, 6);
        let y = c.invert().compose(&x).unwrap().compose(&c).unwrap();
        let target = holonomize(&y);
        let script = ReplayScript::parse_text(&format!("GOTO {target}")).unwrap();
        let cert = replay(&holonomize(&x), &script).unwrap();
        assert_eq!(cert.end(), &target);
        assert!(verify_certificate(&cert).passed());
    }
}

fn arb_form() -> impl Strategy<Value = HolonomicForm> {
    (2usize..6).prop_flat_map(|n| {
        (
            prop::collection::vec(1..n as i32, 0..10),
            prop::collection::vec(1..n as i32, 0..10),
        )
            .prop_map(move |(a, b)| {
                HolonomicForm::new(n, a.into_iter().map(|l| -l).collect(), b).unwrap()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn form_text_round_trips(h in arb_form()) {
        let back: HolonomicForm = h.to_text().parse().unwrap();
        prop_assert_eq!(back, h);
    }

    #[test]
    fn summit_certificates_always_verify(h in arb_form()) {
        let (_, cert) = holonomic_summit(&h).unwrap();
        prop_assert!(verify_certificate(&cert).passed());
        prop_assert_eq!(cert.start.clone(), h);
    }
}
