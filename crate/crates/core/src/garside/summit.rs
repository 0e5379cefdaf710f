use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::normal_form::{left_normal_form, words_equal, NormalForm};
use crate::braid::{same_strands, BraidWord, Permutation, PermutationBraid};
use crate::error::{BraidError, Result};
use crate::par::Exec;

/// Default strand cap for summit-set enumeration.
pub const SUMMIT_SET_STRAND_CAP: usize = 6;

/// Hard cap on summit-set size; the enumeration errors beyond it.
pub const SUMMIT_SET_SIZE_CAP: usize = 200_000;

/// A positive conjugator `W = A_1⋯A_z` written as a product of fragments of `Δ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjugationWitness {
    strands: usize,
    steps: Vec<PermutationBraid>,
}

impl ConjugationWitness {
    pub fn empty(strands: usize) -> Self {
        ConjugationWitness {
            strands,
            steps: Vec::new(),
        }
    }

    pub fn from_steps(strands: usize, steps: Vec<PermutationBraid>) -> Self {
        ConjugationWitness { strands, steps }
    }

    pub fn steps(&self) -> &[PermutationBraid] {
        &self.steps
    }

    pub fn push(&mut self, step: PermutationBraid) {
        self.steps.push(step);
    }

    pub fn extend(&mut self, other: &ConjugationWitness) {
        self.steps.extend(other.steps.iter().cloned());
    }

    /// The positive word `W`.
    pub fn word(&self) -> BraidWord {
        let letters = self
            .steps
            .iter()
            .flat_map(|s| s.word().letters().iter().copied())
            .collect();
        BraidWord::from_parts_unchecked(self.strands, letters)
    }

    /// Checks `W^{-1} · source · W = target`.
    pub fn verify(&self, source: &BraidWord, target: &BraidWord) -> Result<bool> {
        let w = self.word();
        let conj = w.invert().compose(source)?.compose(&w)?;
        words_equal(&conj, target)
    }
}

/// `s^{-1} x s` for a simple element `s`.
pub fn conjugate_by_simple(nf: &NormalForm, s: &PermutationBraid) -> NormalForm {
    // s^{-1} = ∂(s) Δ^{-1}, so s^{-1} Δ^k A s = Δ^{k-1} τ^{k-1}(∂s) A s
    let k = nf.inf();
    let head = s.right_complement().tau_pow(k - 1);
    let simples = std::iter::once(head.perm().clone())
        .chain(nf.factors().iter().map(|f| f.perm().clone()))
        .chain(std::iter::once(s.perm().clone()));
    NormalForm::from_simples(nf.strands(), k - 1, simples)
}

/// One cycling step: conjugation by `τ^k(P_1)`. Returns `None` for `Δ^k`.
pub fn cycle_step(nf: &NormalForm) -> Option<(NormalForm, PermutationBraid)> {
    let first = nf.factors().first()?;
    let conj = first.tau_pow(nf.inf());
    let simples = nf.factors()[1..]
        .iter()
        .map(|f| f.perm().clone())
        .chain(std::iter::once(conj.perm().clone()));
    Some((
        NormalForm::from_simples(nf.strands(), nf.inf(), simples),
        conj,
    ))
}

/// One decycling step: `P_r x P_r^{-1}`, witnessed by the positive
/// conjugator `∂(P_r)·Δ` (Δ² is central). Returns `None` for `Δ^k`.
pub fn decycle_step(nf: &NormalForm) -> Option<(NormalForm, [PermutationBraid; 2])> {
    let last = nf.factors().last()?;
    let n = nf.strands();
    let simples = std::iter::once(last.tau_pow(nf.inf()).perm().clone()).chain(
        nf.factors()[..nf.factors().len() - 1]
            .iter()
            .map(|f| f.perm().clone()),
    );
    Some((
        NormalForm::from_simples(n, nf.inf(), simples),
        [last.right_complement(), PermutationBraid::delta(n)],
    ))
}

pub fn cycling(nf: &NormalForm) -> NormalForm {
    cycle_step(nf).map_or_else(|| nf.clone(), |(x, _)| x)
}

pub fn decycling(nf: &NormalForm) -> NormalForm {
    decycle_step(nf).map_or_else(|| nf.clone(), |(x, _)| x)
}

fn delta_length(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// The conjugation steps that carry `nf` to a summit form, each with its
/// resulting normal form and positive conjugator (as simple factors).
///
/// Cycles until `inf` has not risen for `|Δ|` consecutive steps, then
/// decycles until `sup` has not dropped for `|Δ|` steps. Each phase is capped
/// at `(r + 1)·|Δ|` steps.
pub fn summit_trajectory(nf: &NormalForm) -> Result<Vec<(NormalForm, Vec<PermutationBraid>)>> {
    let n = nf.strands();
    let patience = delta_length(n).max(1);
    let mut out = Vec::new();
    let mut x = nf.clone();

    let cap = (x.canonical_length() + 1) * patience;
    let (mut iters, mut stale) = (0usize, 0usize);
    while stale < patience && !x.is_delta_power() {
        iters += 1;
        if iters > cap {
            return Err(BraidError::IterationCap {
                what: "cycling",
                cap,
            });
        }
        let (y, c) = cycle_step(&x).expect("r >= 1");
        stale = if y.inf() > x.inf() { 0 } else { stale + 1 };
        out.push((y.clone(), vec![c]));
        x = y;
    }

    let cap = (x.canonical_length() + 1) * patience;
    let (mut iters, mut stale) = (0usize, 0usize);
    while stale < patience && !x.is_delta_power() {
        iters += 1;
        if iters > cap {
            return Err(BraidError::IterationCap {
                what: "decycling",
                cap,
            });
        }
        let (y, conj) = decycle_step(&x).expect("r >= 1");
        stale = if y.sup() < x.sup() { 0 } else { stale + 1 };
        out.push((y.clone(), conj.to_vec()));
        x = y;
    }
    Ok(out)
}

/// A summit representative of the conjugacy class of `nf` (maximal `inf`,
/// then minimal `r`) with its positive witness.
pub fn summit_of(nf: &NormalForm) -> Result<(NormalForm, ConjugationWitness)> {
    let mut witness = ConjugationWitness::empty(nf.strands());
    let mut last = nf.clone();
    for (y, conj) in summit_trajectory(nf)? {
        for c in conj {
            witness.push(c);
        }
        last = y;
    }
    Ok((last, witness))
}

/// Summit form of the conjugacy class of `w` with a positive witness `W`
/// such that `W^{-1} w W` equals the returned form.
pub fn summit_form(w: &BraidWord) -> Result<(NormalForm, ConjugationWitness)> {
    summit_of(&left_normal_form(w))
}

/// Closure of a summit form under conjugation by simple elements, with the
/// conjugator that first reached each member.
#[derive(Debug, Clone)]
pub struct SummitGraph {
    members: Vec<NormalForm>,
    parent: Vec<Option<(usize, PermutationBraid)>>,
    index: HashMap<NormalForm, usize>,
}

impl SummitGraph {
    pub fn build(root: NormalForm, strand_cap: usize, exec: Exec) -> Result<SummitGraph> {
        let n = root.strands();
        if n > strand_cap {
            return Err(BraidError::StrandCap {
                strands: n,
                cap: strand_cap,
            });
        }
        let key = root.summit_key();
        let simples: Vec<PermutationBraid> = Permutation::all(n)
            .into_iter()
            .filter(|p| !p.is_identity())
            .map(PermutationBraid::from_permutation)
            .collect();
        let mut graph = SummitGraph {
            members: vec![root.clone()],
            parent: vec![None],
            index: HashMap::from([(root, 0)]),
        };
        let mut frontier = vec![0usize];
        while !frontier.is_empty() {
            let members = &graph.members;
            let candidates: Vec<(usize, usize, NormalForm)> =
                exec.flat_map_range(0..frontier.len(), |fi| {
                    let src = frontier[fi];
                    simples
                        .iter()
                        .enumerate()
                        .filter_map(|(si, s)| {
                            let y = conjugate_by_simple(&members[src], s);
                            (y.summit_key() == key).then_some((src, si, y))
                        })
                        .collect()
                });
            let mut next = Vec::new();
            for (src, si, y) in candidates {
                if graph.index.contains_key(&y) {
                    continue;
                }
                let id = graph.members.len();
                graph.index.insert(y.clone(), id);
                graph.members.push(y);
                graph.parent.push(Some((src, simples[si].clone())));
                next.push(id);
                if graph.members.len() > SUMMIT_SET_SIZE_CAP {
                    return Err(BraidError::IterationCap {
                        what: "summit set enumeration",
                        cap: SUMMIT_SET_SIZE_CAP,
                    });
                }
            }
            frontier = next;
        }
        Ok(graph)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, nf: &NormalForm) -> bool {
        self.index.contains_key(nf)
    }

    /// Members in deterministic `(inf, r, factors)` order.
    pub fn sorted_members(&self) -> Vec<NormalForm> {
        let mut v = self.members.clone();
        v.sort();
        v
    }

    /// Simple conjugators leading from the root to `target`.
    pub fn path_to(&self, target: &NormalForm) -> Option<Vec<PermutationBraid>> {
        let mut id = *self.index.get(target)?;
        let mut path = Vec::new();
        while let Some((p, s)) = &self.parent[id] {
            path.push(s.clone());
            id = *p;
        }
        path.reverse();
        Some(path)
    }
}

/// The full summit set of the conjugacy class of `w`, sorted.
pub fn summit_set(w: &BraidWord) -> Result<Vec<NormalForm>> {
    summit_set_with(w, SUMMIT_SET_STRAND_CAP, Exec::default())
}

pub fn summit_set_with(w: &BraidWord, strand_cap: usize, exec: Exec) -> Result<Vec<NormalForm>> {
    if w.strands() > strand_cap {
        return Err(BraidError::StrandCap {
            strands: w.strands(),
            cap: strand_cap,
        });
    }
    let (root, _) = summit_form(w)?;
    Ok(SummitGraph::build(root, strand_cap, exec)?.sorted_members())
}

/// Conjugacy test. Returns `c` with `c^{-1} w1 c = w2` when the braids are
/// conjugate, `None` otherwise.
pub fn conjugate_test(w1: &BraidWord, w2: &BraidWord) -> Result<Option<BraidWord>> {
    conjugate_test_with(w1, w2, SUMMIT_SET_STRAND_CAP, Exec::default())
}

pub fn conjugate_test_with(
    w1: &BraidWord,
    w2: &BraidWord,
    strand_cap: usize,
    exec: Exec,
) -> Result<Option<BraidWord>> {
    same_strands(w1, w2)?;
    let n = w1.strands();
    if words_equal(w1, w2)? {
        return Ok(Some(BraidWord::identity(n)?));
    }
    if w1.exponent_sum() != w2.exponent_sum()
        || cycle_type(&w1.permutation()) != cycle_type(&w2.permutation())
    {
        return Ok(None);
    }
    let (s1, wit1) = summit_form(w1)?;
    let (s2, wit2) = summit_form(w2)?;
    if s1.summit_key() != s2.summit_key() {
        return Ok(None);
    }
    if n > strand_cap {
        return Err(BraidError::StrandCap {
            strands: n,
            cap: strand_cap,
        });
    }
    let graph = SummitGraph::build(s1, strand_cap, exec)?;
    let Some(path) = graph.path_to(&s2) else {
        return Ok(None);
    };
    let mut c = wit1.word().into_letters();
    for s in &path {
        c.extend_from_slice(s.word().letters());
    }
    c.extend(wit2.word().invert().into_letters());
    let c = BraidWord::new(n, c)?.free_reduce();
    debug_assert!(ConjugationWitness::verify_word(&c, w1, w2).unwrap_or(false));
    Ok(Some(c))
}

impl ConjugationWitness {
    /// Checks `c^{-1} · source · c = target` for an arbitrary word `c`.
    pub fn verify_word(c: &BraidWord, source: &BraidWord, target: &BraidWord) -> Result<bool> {
        let conj = c.invert().compose(source)?.compose(c)?;
        words_equal(&conj, target)
    }
}

/// Sorted cycle lengths; a conjugacy invariant of the permutation image.
pub fn cycle_type(p: &Permutation) -> Vec<usize> {
    let n = p.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = p.images()[i];
            len += 1;
        }
        out.push(len);
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(n: usize, l: &[i32]) -> BraidWord {
        BraidWord::new(n, l.to_vec()).unwrap()
    }

    fn nf_text(nf: &NormalForm) -> String {
        nf.to_string()
    }

    #[test]
    fn cycling_leaves_delta_powers() {
        let d = left_normal_form(&w(3, &[1, 2, 1, 1, 2, 1]));
        assert_eq!(cycling(&d), d);
        assert_eq!(decycling(&d), d);
    }

    #[test]
    fn cycling_preserves_exponent_sum_and_class() {
        let x = left_normal_form(&w(4, &[1, -2, 3, 3, -1, 2, 2]));
        let c = cycling(&x);
        let d = decycling(&x);
        assert_eq!(c.exponent_sum(), x.exponent_sum());
        assert_eq!(d.exponent_sum(), x.exponent_sum());
        assert!(c.inf() >= x.inf() && c.sup() <= x.sup());
        assert!(d.inf() >= x.inf() && d.sup() <= x.sup());
    }

    #[test]
    fn decycling_witness_conjugates() {
        let src = w(3, &[1, 1, 2, -1]);
        let x = left_normal_form(&src);
        let (y, steps) = decycle_step(&x).unwrap();
        let wit = ConjugationWitness::from_steps(3, steps.to_vec());
        assert!(wit.verify(&src, &y.to_word()).unwrap());
        let (y, c) = cycle_step(&x).unwrap();
        let wit = ConjugationWitness::from_steps(3, vec![c]);
        assert!(wit.verify(&src, &y.to_word()).unwrap());
    }

    #[test]
    fn summit_form_examples() {
        let (s, wit) = summit_form(&w(3, &[1])).unwrap();
        assert_eq!(s.summit_key(), (0, 1));
        assert!(wit.verify(&w(3, &[1]), &s.to_word()).unwrap());

        let (s, _) = summit_form(&w(3, &[1, 1])).unwrap();
        assert_eq!(s.summit_key(), (0, 2));

        let (s, _) = summit_form(&w(3, &[1, 2])).unwrap();
        assert_eq!(s.summit_key(), (0, 1));

        let (s, _) = summit_form(&w(3, &[-1, 2])).unwrap();
        assert_eq!(s.summit_key(), (-1, 2));
    }

    #[test]
    fn summit_set_examples() {
        let set: Vec<String> = summit_set(&w(3, &[1]))
            .unwrap()
            .iter()
            .map(nf_text)
            .collect();
        assert_eq!(set, vec!["Δ^0 | 2", "Δ^0 | 1"]);
        let set: Vec<String> = summit_set(&w(3, &[1, 1]))
            .unwrap()
            .iter()
            .map(nf_text)
            .collect();
        assert_eq!(set, vec!["Δ^0 | 2 . 2", "Δ^0 | 1 . 1"]);
        let set: Vec<String> = summit_set(&w(3, &[1, 2, 1]))
            .unwrap()
            .iter()
            .map(nf_text)
            .collect();
        assert_eq!(set, vec!["Δ^1 |"]);
        assert!(matches!(
            summit_set(&w(7, &[1])),
            Err(BraidError::StrandCap { strands: 7, cap: 6 })
        ));
    }

    #[test]
    fn conjugacy_examples() {
        let c = conjugate_test(&w(3, &[1]), &w(3, &[2])).unwrap().unwrap();
        assert!(ConjugationWitness::verify_word(&c, &w(3, &[1]), &w(3, &[2])).unwrap());
        assert!(conjugate_test(&w(3, &[1, 2]), &w(3, &[1, 1]))
            .unwrap()
            .is_none());
        let c = conjugate_test(&w(3, &[1, -2]), &w(3, &[1, -2]))
            .unwrap()
            .unwrap();
        assert!(c.is_empty());
    }

    #[test]
    fn cycle_types() {
        assert_eq!(cycle_type(&w(3, &[1, 2]).permutation()), vec![3]);
        assert_eq!(cycle_type(&w(4, &[1, 3]).permutation()), vec![2, 2]);
    }
}
