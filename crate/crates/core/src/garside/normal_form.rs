use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::braid::{
    is_delta_fragment, parse_strands, same_strands, tokenize, BraidWord, Permutation,
    PermutationBraid,
};
use crate::error::{BraidError, Result};

/// Left normal form `Δ^k P_1⋯P_r`: each `P_i` is a proper, non-trivial
/// fragment of `Δ` and every adjacent pair is left-weighted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NormalForm {
    strands: usize,
    inf: i64,
    factors: Vec<PermutationBraid>,
}

impl NormalForm {
    pub fn delta_power(strands: usize, k: i64) -> NormalForm {
        NormalForm {
            strands,
            inf: if strands <= 1 { 0 } else { k },
            factors: Vec::new(),
        }
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    /// The exponent `k` of `Δ`.
    pub fn inf(&self) -> i64 {
        self.inf
    }

    /// Number of non-`Δ` factors `r`.
    pub fn canonical_length(&self) -> usize {
        self.factors.len()
    }

    pub fn sup(&self) -> i64 {
        self.inf + self.factors.len() as i64
    }

    pub fn factors(&self) -> &[PermutationBraid] {
        &self.factors
    }

    pub fn is_delta_power(&self) -> bool {
        self.factors.is_empty()
    }

    /// `(k, r)`, the pair maximized/minimized by summit forms.
    pub fn summit_key(&self) -> (i64, usize) {
        (self.inf, self.factors.len())
    }

    /// Word `Δ^k P_1⋯P_r` using the canonical `Δ^{±1}` words.
    pub fn to_word(&self) -> BraidWord {
        let n = self.strands;
        let delta = if self.inf >= 0 {
            BraidWord::delta(n).expect("strands >= 1")
        } else {
            BraidWord::delta_inverse(n).expect("strands >= 1")
        };
        let mut letters = delta.power(self.inf.unsigned_abs() as usize).into_letters();
        for f in &self.factors {
            letters.extend_from_slice(f.word().letters());
        }
        BraidWord::from_parts_unchecked(n, letters)
    }

    /// Positive tail `P_1⋯P_r` as a single word.
    pub fn tail_word(&self) -> BraidWord {
        let letters = self
            .factors
            .iter()
            .flat_map(|f| f.word().letters().iter().copied())
            .collect();
        BraidWord::from_parts_unchecked(self.strands, letters)
    }

    pub fn exponent_sum(&self) -> i64 {
        let delta_len = (self.strands * self.strands.saturating_sub(1) / 2) as i64;
        self.inf * delta_len + self.factors.iter().map(|f| f.len() as i64).sum::<i64>()
    }

    pub fn permutation(&self) -> Permutation {
        let mut p = if self.inf.rem_euclid(2) == 1 {
            Permutation::reversal(self.strands)
        } else {
            Permutation::identity(self.strands)
        };
        for f in &self.factors {
            p = p.then(f.perm());
        }
        p
    }

    /// `Δ^{-1} x Δ`, applied to the whole normal form.
    pub fn tau(&self) -> NormalForm {
        NormalForm {
            strands: self.strands,
            inf: self.inf,
            factors: self.factors.iter().map(PermutationBraid::tau).collect(),
        }
    }

    /// Left normal form of `Δ^k S_1⋯S_m` for simple elements `S_j`.
    pub(crate) fn from_simples(
        strands: usize,
        k: i64,
        simples: impl IntoIterator<Item = Permutation>,
    ) -> NormalForm {
        let mut inf = k;
        let mut f: Vec<Permutation> = Vec::new();
        for p in simples {
            if p.is_identity() {
                continue;
            }
            f.push(p);
            let mut j = f.len() - 1;
            while j > 0 {
                let (left, right) = f.split_at_mut(j);
                if !make_left_weighted(&mut left[j - 1], &mut right[0]) {
                    break;
                }
                j -= 1;
            }
            while f.last().is_some_and(Permutation::is_identity) {
                f.pop();
            }
        }
        let reversal = Permutation::reversal(strands);
        let leading = f.iter().take_while(|p| **p == reversal).count();
        inf += leading as i64;
        let nf = NormalForm {
            strands,
            inf: if strands <= 1 { 0 } else { inf },
            factors: f
                .into_iter()
                .skip(leading)
                .map(PermutationBraid::from_permutation)
                .collect(),
        };
        debug_assert!(nf.check().is_ok(), "{:?}", nf.check());
        nf
    }

    /// Checks the structural invariants; `Err` names the first violation.
    pub fn check(&self) -> std::result::Result<(), String> {
        for (i, f) in self.factors.iter().enumerate() {
            if f.strands() != self.strands {
                return Err(format!("factor {i} has {} strands", f.strands()));
            }
            if f.is_identity() {
                return Err(format!("factor {i} is trivial"));
            }
            if f.is_delta() {
                return Err(format!("factor {i} equals Δ"));
            }
            match is_delta_fragment(f.word()) {
                Ok(Some(p)) if &p == f.perm() => {}
                _ => return Err(format!("factor {i} word does not spell its permutation")),
            }
        }
        for (i, pair) in self.factors.windows(2).enumerate() {
            let (a, b) = (&pair[0], &pair[1]);
            for j in 0..self.strands - 1 {
                if b.starts_with(j) && !a.ends_with(j) {
                    return Err(format!(
                        "factors {i},{} not left-weighted: σ{} moves left",
                        i + 1,
                        j + 1
                    ));
                }
            }
        }
        Ok(())
    }

    /// Text form with the strand count, e.g. `n=3 Δ^-1 | 1 2`.
    pub fn to_text(&self) -> String {
        format!("n={} {}", self.strands, self)
    }

    /// Parses `[n=<n>] Δ^<k> | <factor> . <factor> …`. The strand count
    /// comes from the `n=` token when present, otherwise from `strands`.
    pub fn parse_text(s: &str, strands: Option<usize>) -> Result<NormalForm> {
        let tokens = tokenize(s);
        let mut iter = tokens.iter().peekable();
        let n = match iter.peek() {
            Some(t) if t.text.starts_with("n=") => {
                let n = parse_strands(t)?;
                iter.next();
                n
            }
            _ => strands.ok_or_else(|| {
                BraidError::parse(1, 1, "strand count missing: expected `n=<strands>`")
            })?,
        };
        let head = iter
            .next()
            .ok_or_else(|| BraidError::parse(1, 1, "expected `Δ^<k>`"))?;
        let k_text = head
            .text
            .strip_prefix("Δ^")
            .or_else(|| head.text.strip_prefix("D^"))
            .ok_or_else(|| {
                BraidError::parse(
                    head.line,
                    head.column,
                    format!("expected `Δ^<k>`, found `{}`", head.text),
                )
            })?;
        let inf: i64 = k_text.parse().map_err(|_| {
            BraidError::parse(
                head.line,
                head.column,
                format!("invalid exponent `{k_text}`"),
            )
        })?;
        match iter.next() {
            Some(t) if t.text == "|" => {}
            Some(t) => {
                return Err(BraidError::parse(
                    t.line,
                    t.column,
                    format!("expected `|`, found `{}`", t.text),
                ))
            }
            None => {
                return Err(BraidError::parse(
                    head.line,
                    head.column + head.text.len(),
                    "expected `|`",
                ))
            }
        }
        let mut groups: Vec<Vec<i32>> = vec![Vec::new()];
        let mut last = (head.line, head.column);
        for t in iter {
            last = (t.line, t.column);
            if t.text == "." {
                groups.push(Vec::new());
                continue;
            }
            let l: i32 = t.text.parse().map_err(|_| {
                BraidError::parse(t.line, t.column, format!("invalid letter `{}`", t.text))
            })?;
            if l <= 0 || l as usize >= n {
                return Err(BraidError::parse(
                    t.line,
                    t.column,
                    format!("factor letter {l} out of range"),
                ));
            }
            groups.last_mut().expect("non-empty").push(l);
        }
        if groups.len() == 1 && groups[0].is_empty() {
            groups.clear();
        }
        let mut factors = Vec::with_capacity(groups.len());
        for g in groups {
            let word = BraidWord::new(n, g)?;
            let perm = is_delta_fragment(&word)?.ok_or_else(|| {
                BraidError::parse(
                    last.0,
                    last.1,
                    format!("factor `{word}` is not a fragment of Δ"),
                )
            })?;
            factors.push(PermutationBraid::from_permutation(perm));
        }
        let nf = NormalForm {
            strands: n,
            inf,
            factors,
        };
        nf.check()
            .map_err(|m| BraidError::parse(last.0, last.1, m))?;
        Ok(nf)
    }
}

/// Moves generators from the head of `b` to the tail of `a` until the pair
/// is left-weighted. Returns whether anything moved.
fn make_left_weighted(a: &mut Permutation, b: &mut Permutation) -> bool {
    let n = a.len();
    let mut changed = false;
    'outer: loop {
        let inv_b = b.inverse();
        let (ai, bi) = (a.images(), inv_b.images());
        for i in 0..n.saturating_sub(1) {
            if bi[i] > bi[i + 1] && ai[i] < ai[i + 1] {
                a.swap_positions(i);
                b.swap_values(i);
                changed = true;
                continue 'outer;
            }
        }
        return changed;
    }
}

impl PartialOrd for NormalForm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by `(strands, inf, r, factor permutations)`.
impl Ord for NormalForm {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.strands, self.inf, self.factors.len())
            .cmp(&(other.strands, other.inf, other.factors.len()))
            .then_with(|| self.factors.cmp(&other.factors))
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Δ^{} |", self.inf)?;
        for (i, p) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " .")?;
            }
            write!(f, " {p}")?;
        }
        Ok(())
    }
}

/// Garside normal form of the element represented by `w`.
///
/// Each `σ_i^{-1}` is rewritten as `Δ^{-1} U_i` with `U_i σ_i = Δ`, the
/// `Δ^{-1}` is pushed to the left through `τ`, and the resulting product
/// of simple elements is put in left-greedy form.
pub fn left_normal_form(w: &BraidWord) -> NormalForm {
    let n = w.strands();
    let reversal = Permutation::reversal(n);
    let mut pending: Vec<(Permutation, u64)> = Vec::with_capacity(w.len());
    let mut twists: u64 = 0;
    for &l in w.letters() {
        let i = l.unsigned_abs() as usize - 1;
        if l > 0 {
            let mut s = Permutation::identity(n);
            s.swap_positions(i);
            pending.push((s, twists));
        } else {
            twists += 1;
            let mut u = reversal.clone();
            u.swap_positions(i);
            pending.push((u, twists));
        }
    }
    let simples = pending.into_iter().map(|(p, at)| {
        if (twists - at) % 2 == 1 {
            p.reversal_conjugate()
        } else {
            p
        }
    });
    NormalForm::from_simples(n, -(twists as i64), simples)
}

/// Word problem: equal normal forms.
pub fn words_equal(w1: &BraidWord, w2: &BraidWord) -> Result<bool> {
    same_strands(w1, w2)?;
    if w1.permutation() != w2.permutation() || w1.exponent_sum() != w2.exponent_sum() {
        return Ok(false);
    }
    Ok(left_normal_form(w1) == left_normal_form(w2))
}

/// `τ(w)`: every `σ_i^{±1}` replaced by `σ_{n-i}^{±1}`; equals `Δ^{-1} w Δ`.
pub fn tau(w: &BraidWord) -> BraidWord {
    w.tau()
}

/// Splits `σ_i^{-1} = Δ^{-1} U_i`, returning the canonical `Δ^{-1}` word and
/// the fragment `U_i` with `U_i σ_i = Δ`.
pub fn negative_split(i: usize, n: usize) -> Result<(BraidWord, PermutationBraid)> {
    if n == 0 {
        return Err(BraidError::InvalidStrands(n));
    }
    let gen = PermutationBraid::generator(n, i)?;
    Ok((BraidWord::delta_inverse(n)?, gen.left_complement()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::positive_equivalent;

    fn w(n: usize, l: &[i32]) -> BraidWord {
        BraidWord::new(n, l.to_vec()).unwrap()
    }

    #[test]
    fn normal_form_examples() {
        let d = left_normal_form(&w(3, &[1, 2, 1]));
        assert_eq!((d.inf(), d.canonical_length()), (1, 0));

        let m = left_normal_form(&w(3, &[-1]));
        assert_eq!(m.inf(), -1);
        assert_eq!(m.factors().len(), 1);
        assert!(positive_equivalent(m.factors()[0].word(), &w(3, &[1, 2])).unwrap());

        let x = left_normal_form(&w(3, &[1, 2, 1, 2]));
        assert_eq!(x.inf(), 1);
        assert_eq!(x.factors().len(), 1);
        assert_eq!(x.factors()[0].word(), &w(3, &[2]));
        // σ1σ2σ1σ2 ≐ Δ σ2 in the positive monoid
        assert!(positive_equivalent(&x.to_word(), &w(3, &[1, 2, 1, 2])).unwrap());
    }

    #[test]
    fn two_strand_powers_are_delta_powers() {
        let nf = left_normal_form(&w(2, &[1, 1, 1]));
        assert_eq!((nf.inf(), nf.canonical_length()), (3, 0));
        assert_eq!(nf.to_string(), "Δ^3 |");
        let nf = left_normal_form(&w(2, &[-1, -1]));
        assert_eq!(nf.inf(), -2);
    }

    #[test]
    fn negative_split_examples() {
        let (d, u) = negative_split(1, 2).unwrap();
        assert_eq!(d, w(2, &[-1]));
        assert!(u.is_identity());

        let (d, u) = negative_split(1, 3).unwrap();
        assert_eq!(d, w(3, &[-1, -2, -1]));
        assert!(words_equal(&u.word().clone(), &w(3, &[1, 2])).unwrap());
        assert!(words_equal(&d.compose(u.word()).unwrap(), &w(3, &[-1])).unwrap());

        let (d, u) = negative_split(2, 3).unwrap();
        assert!(words_equal(u.word(), &w(3, &[2, 1])).unwrap());
        assert!(words_equal(&d.compose(u.word()).unwrap(), &w(3, &[-2])).unwrap());

        assert!(negative_split(3, 3).is_err());
        assert!(negative_split(0, 3).is_err());
    }

    #[test]
    fn words_equal_examples() {
        assert!(words_equal(&w(3, &[1, 2, 1]), &w(3, &[2, 1, 2])).unwrap());
        assert!(words_equal(&w(3, &[1, -1]), &w(3, &[])).unwrap());
        assert!(!words_equal(&w(3, &[1]), &w(3, &[2])).unwrap());
        assert!(words_equal(&w(3, &[1]), &w(4, &[1])).is_err());
    }

    #[test]
    fn tau_examples() {
        assert_eq!(tau(&w(3, &[1])), w(3, &[2]));
        assert_eq!(tau(&w(4, &[2])), w(4, &[2]));
        // Δ^{-1} w Δ = τ(w)
        let x = w(4, &[1, -3, 2, 2]);
        let d = BraidWord::delta(4).unwrap();
        let conj = d.invert().compose(&x).unwrap().compose(&d).unwrap();
        assert!(words_equal(&conj, &tau(&x)).unwrap());
    }

    #[test]
    fn text_format() {
        let nf = left_normal_form(&w(3, &[-1]));
        assert_eq!(nf.to_string(), "Δ^-1 | 1 2");
        assert_eq!(nf.to_text(), "n=3 Δ^-1 | 1 2");
        assert_eq!(NormalForm::parse_text(&nf.to_text(), None).unwrap(), nf);
        assert_eq!(NormalForm::parse_text("Δ^-1 | 1 2", Some(3)).unwrap(), nf);

        let two = left_normal_form(&w(3, &[1, 1]));
        assert_eq!(two.to_string(), "Δ^0 | 1 . 1");
        assert_eq!(
            NormalForm::parse_text("n=3 D^0 | 1 . 1", None).unwrap(),
            two
        );
        assert_eq!(left_normal_form(&w(3, &[1, 2, 1])).to_string(), "Δ^1 |");

        assert!(NormalForm::parse_text("n=3 Δ^0 | 1 1", None).is_err());
        assert!(NormalForm::parse_text("n=3 Δ^0 | 2 . 1", None).is_err());
        assert!(NormalForm::parse_text("Δ^0 |", None).is_err());
        assert!(NormalForm::parse_text("n=3 Δ^x |", None).is_err());
    }

    #[test]
    fn one_strand() {
        let nf = left_normal_form(&w(1, &[]));
        assert_eq!((nf.inf(), nf.canonical_length()), (0, 0));
    }
}
