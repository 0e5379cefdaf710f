#![allow(dead_code)]

use holobraid_core::BraidWord;
use rand::Rng;

pub fn random_word<R: Rng>(rng: &mut R, n: usize, max_len: usize) -> BraidWord {
    let len = rng.gen_range(0..=max_len);
    random_word_exact(rng, n, len)
}

pub fn random_word_exact<R: Rng>(rng: &mut R, n: usize, len: usize) -> BraidWord {
    if n < 2 {
        return BraidWord::new(n.max(1), Vec::new()).unwrap();
    }
    let letters = (0..len)
        .map(|_| {
            let i = rng.gen_range(1..n as i32);
            if rng.gen_bool(0.5) {
                i
            } else {
                -i
            }
        })
        .collect();
    BraidWord::new(n, letters).unwrap()
}

pub fn random_positive<R: Rng>(rng: &mut R, n: usize, len: usize) -> BraidWord {
    let letters = (0..len).map(|_| rng.gen_range(1..n as i32)).collect();
    BraidWord::new(n, letters).unwrap()
}

/// Applies `moves` random element-preserving rewrites: commutations,
/// braid relations (either sign), and free insertions/deletions of
/// `σ_i^{±1}σ_i^{∓1}`.
pub fn scramble<R: Rng>(rng: &mut R, w: &BraidWord, moves: usize) -> BraidWord {
    let n = w.strands();
    let mut v = w.letters().to_vec();
    if n < 2 {
        return w.clone();
    }
    for _ in 0..moves {
        match rng.gen_range(0..4) {
            0 => {
                let i = rng.gen_range(1..n as i32);
                let e = if rng.gen_bool(0.5) { i } else { -i };
                let at = rng.gen_range(0..=v.len());
                v.splice(at..at, [e, -e]);
            }
            1 => {
                // first commutable pair from a random offset
                if v.len() >= 2 {
                    let off = rng.gen_range(0..v.len() - 1);
                    if let Some(k) = (0..v.len() - 1)
                        .map(|j| (j + off) % (v.len() - 1))
                        .find(|&k| (v[k].abs() - v[k + 1].abs()).abs() >= 2)
                    {
                        v.swap(k, k + 1);
                    }
                }
            }
            2 => {
                if v.len() >= 3 {
                    let off = rng.gen_range(0..v.len() - 2);
                    if let Some(k) =
                        (0..v.len() - 2)
                            .map(|j| (j + off) % (v.len() - 2))
                            .find(|&k| {
                                let (a, b, c) = (v[k], v[k + 1], v[k + 2]);
                                a == c && a.signum() == b.signum() && (a.abs() - b.abs()).abs() == 1
                            })
                    {
                        let (a, b) = (v[k], v[k + 1]);
                        v[k] = b;
                        v[k + 1] = a;
                        v[k + 2] = b;
                    } else if v.len() >= 2 {
                        // manufacture a braid-relation site: σ_i σ_{i+1} σ_i ↔ σ_{i+1} σ_i σ_{i+1}
                        let i = rng.gen_range(1..n as i32);
                        if i + 1 < n as i32 {
                            let at = rng.gen_range(0..=v.len());
                            v.splice(at..at, [i, i + 1, i, -(i + 1), -i, -(i + 1)]);
                        }
                    }
                }
            }
            _ => {
                if let Some(k) = (0..v.len().saturating_sub(1)).find(|&k| v[k] == -v[k + 1]) {
                    v.drain(k..k + 2);
                }
            }
        }
    }
    BraidWord::new(n, v).unwrap()
}

/// Series with a known closed-braid reading: unknot, the two single loops
/// and the trefoil.
pub fn catalog() -> Vec<(&'static str, holobraid_core::curve::FourierSeries)> {
    use holobraid_core::curve::FourierSeries;
    vec![
        ("cos", FourierSeries::new(0.0, vec![], vec![1.0]).unwrap()),
        (
            "plus",
            FourierSeries::new(0.0, vec![0.0, 1.0], vec![1.0]).unwrap(),
        ),
        (
            "minus",
            FourierSeries::new(0.0, vec![0.0, -1.0], vec![1.0]).unwrap(),
        ),
        (
            "trefoil",
            FourierSeries::new(0.0, vec![1.0, 4.0, 0.0, 1.0], vec![]).unwrap(),
        ),
    ]
}

/// The trefoil series with a fifth harmonic: no braid axis.
pub fn interleaved() -> holobraid_core::curve::FourierSeries {
    holobraid_core::curve::FourierSeries::new(0.0, vec![1.0, 4.0, 0.0, 1.0, 1.5], vec![]).unwrap()
}
