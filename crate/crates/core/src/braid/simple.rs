use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::perm::Permutation;
use super::word::{same_strands, BraidWord};
use crate::error::{BraidError, Result};

/// Visited-word cap for [`positive_equivalent`].
pub const POSITIVE_SEARCH_CAP: usize = 1_000_000;

/// A positive braid in which every pair of strands crosses at most once
/// (a fragment of `Δ`), stored as its permutation plus a canonical word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PermutationBraid {
    perm: Permutation,
    word: BraidWord,
}

impl PermutationBraid {
    pub fn from_permutation(perm: Permutation) -> Self {
        let word = permutation_braid_word(&perm);
        PermutationBraid { perm, word }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_permutation(Permutation::identity(n))
    }

    pub fn delta(n: usize) -> Self {
        Self::from_permutation(Permutation::reversal(n))
    }

    /// The generator `σ_i` (1-based) as a simple braid.
    pub fn generator(n: usize, i: usize) -> Result<Self> {
        if i == 0 || i >= n {
            return Err(BraidError::IndexOutOfRange {
                index: i,
                strands: n,
            });
        }
        let mut p = Permutation::identity(n);
        p.swap_positions(i - 1);
        Ok(Self::from_permutation(p))
    }

    pub fn perm(&self) -> &Permutation {
        &self.perm
    }

    pub fn word(&self) -> &BraidWord {
        &self.word
    }

    pub fn strands(&self) -> usize {
        self.perm.len()
    }

    /// Crossing count (= inversion count of the permutation).
    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.perm.is_identity()
    }

    pub fn is_delta(&self) -> bool {
        self.perm == Permutation::reversal(self.strands())
    }

    /// `Δ^{-1} A Δ`.
    pub fn tau(&self) -> Self {
        Self::from_permutation(self.perm.reversal_conjugate())
    }

    pub fn tau_pow(&self, k: i64) -> Self {
        if k.rem_euclid(2) == 0 {
            self.clone()
        } else {
            self.tau()
        }
    }

    /// The simple `B` with `A·B = Δ`.
    pub fn right_complement(&self) -> Self {
        let n = self.strands();
        Self::from_permutation(self.perm.inverse().then(&Permutation::reversal(n)))
    }

    /// The simple `B` with `B·A = Δ`.
    pub fn left_complement(&self) -> Self {
        let n = self.strands();
        Self::from_permutation(Permutation::reversal(n).then(&self.perm.inverse()))
    }

    /// Does `σ_i` (0-based position `i`) right-divide this braid?
    pub(crate) fn ends_with(&self, i: usize) -> bool {
        let im = self.perm.images();
        im[i] > im[i + 1]
    }

    /// Does `σ_i` (0-based position `i`) left-divide this braid?
    pub(crate) fn starts_with(&self, i: usize) -> bool {
        let inv = self.perm.inverse();
        let inv = inv.images();
        inv[i] > inv[i + 1]
    }

    /// 1-based generators that left-divide this braid.
    pub fn starting_set(&self) -> Vec<usize> {
        let inv = self.perm.inverse();
        let inv = inv.images();
        (0..self.strands().saturating_sub(1))
            .filter(|&i| inv[i] > inv[i + 1])
            .map(|i| i + 1)
            .collect()
    }

    /// 1-based generators that right-divide this braid.
    pub fn finishing_set(&self) -> Vec<usize> {
        let im = self.perm.images();
        (0..self.strands().saturating_sub(1))
            .filter(|&i| im[i] > im[i + 1])
            .map(|i| i + 1)
            .collect()
    }
}

impl PartialOrd for PermutationBraid {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PermutationBraid {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.perm.cmp(&other.perm)
    }
}

impl fmt::Display for PermutationBraid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letters: Vec<String> = self.word.letters().iter().map(|l| l.to_string()).collect();
        write!(f, "{}", letters.join(" "))
    }
}

/// Returns the permutation of `p` when `p` is a fragment of `Δ`, i.e. every
/// pair of strands crosses at most once along `p`.
pub fn is_delta_fragment(p: &BraidWord) -> Result<Option<Permutation>> {
    if !p.is_positive() {
        return Err(BraidError::NotPositive);
    }
    let n = p.strands();
    let mut crossed = vec![false; n * n];
    let mut at: Vec<usize> = (0..n).collect();
    for &l in p.letters() {
        let i = l as usize - 1;
        let (a, b) = (at[i].min(at[i + 1]), at[i].max(at[i + 1]));
        if std::mem::replace(&mut crossed[a * n + b], true) {
            return Ok(None);
        }
        at.swap(i, i + 1);
    }
    Ok(Some(Permutation::from_images_unchecked(at)))
}

/// Canonical positive word of a permutation braid.
///
/// Bubble-sorts the image list with left-to-right passes; the recorded swap
/// positions, reversed, spell the word. Its length is the inversion count.
pub fn permutation_braid_word(perm: &Permutation) -> BraidWord {
    let n = perm.len();
    let mut v = perm.images().to_vec();
    let mut swaps: Vec<i32> = Vec::with_capacity(perm.inversions());
    loop {
        let mut changed = false;
        for j in 0..n.saturating_sub(1) {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                swaps.push(j as i32 + 1);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    swaps.reverse();
    BraidWord::from_parts_unchecked(n.max(1), swaps)
}

/// Decides `p1 ≐ p2` in the positive monoid by exhaustive rewriting with the
/// commutation and braid relations. Relations preserve length, so the search
/// space is finite; it is capped at [`POSITIVE_SEARCH_CAP`] visited words.
pub fn positive_equivalent(p1: &BraidWord, p2: &BraidWord) -> Result<bool> {
    same_strands(p1, p2)?;
    if !p1.is_positive() || !p2.is_positive() {
        return Err(BraidError::NotPositive);
    }
    if p1.len() != p2.len() {
        return Ok(false);
    }
    if p1.letters() == p2.letters() {
        return Ok(true);
    }
    // cheap necessary conditions
    if p1.permutation() != p2.permutation() {
        return Ok(false);
    }
    let target = p2.letters().to_vec();
    let mut seen: HashSet<Vec<i32>> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(p1.letters().to_vec());
    queue.push_back(p1.letters().to_vec());
    while let Some(cur) = queue.pop_front() {
        for next in relation_neighbours(&cur) {
            if next == target {
                return Ok(true);
            }
            if seen.insert(next.clone()) {
                if seen.len() > POSITIVE_SEARCH_CAP {
                    return Err(BraidError::SearchCap(POSITIVE_SEARCH_CAP));
                }
                queue.push_back(next);
            }
        }
    }
    Ok(false)
}

/// All words reachable by one application of a braid relation, for a
/// word whose letters share one sign.
pub(crate) fn relation_neighbours(w: &[i32]) -> Vec<Vec<i32>> {
    let mut out = Vec::new();
    for k in 0..w.len().saturating_sub(1) {
        let (a, b) = (w[k], w[k + 1]);
        if a.signum() == b.signum() && (a - b).abs() >= 2 {
            let mut v = w.to_vec();
            v.swap(k, k + 1);
            out.push(v);
        }
    }
    for k in 0..w.len().saturating_sub(2) {
        let (a, b, c) = (w[k], w[k + 1], w[k + 2]);
        if a == c && a.signum() == b.signum() && (a - b).abs() == 1 {
            let mut v = w.to_vec();
            v[k] = b;
            v[k + 1] = a;
            v[k + 2] = b;
            out.push(v);
        }
    }
    out
}
