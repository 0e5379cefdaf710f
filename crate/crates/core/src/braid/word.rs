use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::perm::Permutation;
use crate::error::{BraidError, Result};

/// A word in the Artin generators of `B_n`.
///
/// Letter `i > 0` is `σ_i`, letter `-i` is `σ_i^{-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<Self> {
        if strands == 0 {
            return Err(BraidError::InvalidStrands(strands));
        }
        for &letter in &letters {
            check_letter(letter, strands)?;
        }
        Ok(BraidWord { strands, letters })
    }

    pub(crate) fn from_parts_unchecked(strands: usize, letters: Vec<i32>) -> Self {
        debug_assert!(Self::new(strands, letters.clone()).is_ok());
        BraidWord { strands, letters }
    }

    pub fn identity(strands: usize) -> Result<Self> {
        Self::new(strands, Vec::new())
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<i32> {
        self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_positive(&self) -> bool {
        self.letters.iter().all(|&l| l > 0)
    }

    pub fn is_negative(&self) -> bool {
        self.letters.iter().all(|&l| l < 0)
    }

    pub fn compose(&self, other: &BraidWord) -> Result<BraidWord> {
        same_strands(self, other)?;
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Ok(BraidWord {
            strands: self.strands,
            letters,
        })
    }

    pub fn invert(&self) -> BraidWord {
        BraidWord {
            strands: self.strands,
            letters: self.letters.iter().rev().map(|l| -l).collect(),
        }
    }

    /// Cancels adjacent `σ_i^{±1} σ_i^{∓1}` pairs until none remain.
    pub fn free_reduce(&self) -> BraidWord {
        let mut out: Vec<i32> = Vec::with_capacity(self.len());
        for &l in &self.letters {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        BraidWord {
            strands: self.strands,
            letters: out,
        }
    }

    /// Image under `B_n → S_n`.
    pub fn permutation(&self) -> Permutation {
        let mut p = Permutation::identity(self.strands);
        for &l in &self.letters {
            p.swap_positions(l.unsigned_abs() as usize - 1);
        }
        p
    }

    pub fn exponent_sum(&self) -> i64 {
        self.letters.iter().map(|&l| i64::from(l.signum())).sum()
    }

    /// Garside's half twist `(σ_1⋯σ_{n-1})(σ_1⋯σ_{n-2})⋯(σ_1)`.
    pub fn delta(n: usize) -> Result<BraidWord> {
        if n == 0 {
            return Err(BraidError::InvalidStrands(n));
        }
        let mut letters = Vec::with_capacity(n * (n - 1) / 2);
        for top in (1..n).rev() {
            letters.extend(1..=top as i32);
        }
        Ok(BraidWord {
            strands: n,
            letters,
        })
    }

    /// Canonical word for `Δ^{-1}`: `invert(delta(n))`.
    pub fn delta_inverse(n: usize) -> Result<BraidWord> {
        Ok(Self::delta(n)?.invert())
    }

    /// `p` copies of `w` concatenated.
    pub fn power(&self, p: usize) -> BraidWord {
        BraidWord {
            strands: self.strands,
            letters: self.letters.repeat(p),
        }
    }

    /// Index-reversing automorphism `σ_i ↦ σ_{n-i}`.
    pub fn tau(&self) -> BraidWord {
        let n = self.strands as i32;
        BraidWord {
            strands: self.strands,
            letters: self
                .letters
                .iter()
                .map(|&l| l.signum() * (n - l.abs()))
                .collect(),
        }
    }

    /// The same letters viewed in `B_m`, `m ≥ n`.
    pub fn widen(&self, m: usize) -> Result<BraidWord> {
        if m < self.strands {
            return Err(BraidError::StrandMismatch {
                left: self.strands,
                right: m,
            });
        }
        Ok(BraidWord {
            strands: m,
            letters: self.letters.clone(),
        })
    }

    /// Serializes to the `n=<n> l1 l2 …` text format.
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    /// Parses the `n=<n> l1 l2 …` text format. Whitespace, including
    /// newlines, separates tokens.
    pub fn parse_text(s: &str) -> Result<BraidWord> {
        let tokens = tokenize(s);
        let mut iter = tokens.into_iter();
        let Some(first) = iter.next() else {
            return Err(BraidError::parse(
                1,
                1,
                "empty input, expected `n=<strands>`",
            ));
        };
        let strands = parse_strands(&first)?;
        let mut letters = Vec::new();
        for tok in iter {
            let letter: i32 = tok.text.parse().map_err(|_| {
                BraidError::parse(
                    tok.line,
                    tok.column,
                    format!("invalid letter `{}`", tok.text),
                )
            })?;
            if letter == 0 || letter.unsigned_abs() as usize >= strands {
                return Err(BraidError::parse(
                    tok.line,
                    tok.column,
                    format!("letter {letter} out of range for {strands} strands"),
                ));
            }
            letters.push(letter);
        }
        BraidWord::new(strands, letters)
    }
}

pub(crate) fn check_letter(letter: i32, strands: usize) -> Result<()> {
    if letter == 0 || letter.unsigned_abs() as usize >= strands {
        return Err(BraidError::LetterOutOfRange { letter, strands });
    }
    Ok(())
}

pub(crate) fn same_strands(a: &BraidWord, b: &BraidWord) -> Result<()> {
    if a.strands != b.strands {
        return Err(BraidError::StrandMismatch {
            left: a.strands,
            right: b.strands,
        });
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub text: String,
    pub line: usize,
    pub column: usize,
}

pub(crate) fn tokenize(s: &str) -> Vec<Token> {
    let mut out = Vec::new();
    for (ln, line) in s.lines().enumerate() {
        let mut start: Option<usize> = None;
        let chars: Vec<(usize, char)> = line.char_indices().collect();
        for (ci, &(_, ch)) in chars.iter().enumerate() {
            if ch.is_whitespace() {
                if let Some(st) = start.take() {
                    out.push(Token {
                        text: chars[st..ci].iter().map(|c| c.1).collect(),
                        line: ln + 1,
                        column: st + 1,
                    });
                }
            } else if start.is_none() {
                start = Some(ci);
            }
        }
        if let Some(st) = start {
            out.push(Token {
                text: chars[st..].iter().map(|c| c.1).collect(),
                line: ln + 1,
                column: st + 1,
            });
        }
    }
    out
}

pub(crate) fn parse_strands(tok: &Token) -> Result<usize> {
    let Some(rest) = tok.text.strip_prefix("n=") else {
        return Err(BraidError::parse(
            tok.line,
            tok.column,
            format!("expected `n=<strands>`, found `{}`", tok.text),
        ));
    };
    match rest.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(BraidError::parse(
            tok.line,
            tok.column,
            format!("invalid strand count `{rest}`"),
        )),
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={}", self.strands)?;
        for l in &self.letters {
            write!(f, " {l}")?;
        }
        Ok(())
    }
}

impl FromStr for BraidWord {
    type Err = BraidError;

    fn from_str(s: &str) -> Result<Self> {
        BraidWord::parse_text(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(n: usize, l: &[i32]) -> BraidWord {
        BraidWord::new(n, l.to_vec()).unwrap()
    }

    #[test]
    fn compose_examples() {
        assert_eq!(w(3, &[1]).compose(&w(3, &[2])).unwrap(), w(3, &[1, 2]));
        assert_eq!(w(3, &[]).compose(&w(3, &[2, -1])).unwrap(), w(3, &[2, -1]));
        assert_eq!(w(3, &[1]).compose(&w(3, &[-1])).unwrap(), w(3, &[1, -1]));
        assert!(matches!(
            w(3, &[1]).compose(&w(4, &[1])),
            Err(BraidError::StrandMismatch { .. })
        ));
    }

    #[test]
    fn invert_examples() {
        assert_eq!(w(3, &[1, 2]).invert(), w(3, &[-2, -1]));
        assert_eq!(w(3, &[]).invert(), w(3, &[]));
        assert_eq!(w(3, &[-1]).invert(), w(3, &[1]));
    }

    #[test]
    fn free_reduce_examples() {
        assert_eq!(w(3, &[1, -1, 2]).free_reduce(), w(3, &[2]));
        assert_eq!(w(3, &[1, 2]).free_reduce(), w(3, &[1, 2]));
        assert_eq!(w(3, &[1, 2, -2, -1]).free_reduce(), w(3, &[]));
    }

    #[test]
    fn permutation_examples() {
        assert_eq!(w(3, &[1]).permutation().one_based(), vec![2, 1, 3]);
        assert_eq!(w(3, &[1, 2]).permutation().one_based(), vec![2, 3, 1]);
        assert!(w(3, &[1, 1]).permutation().is_identity());
    }

    #[test]
    fn exponent_sums() {
        assert_eq!(w(2, &[1, 1, 1]).exponent_sum(), 3);
        assert_eq!(w(3, &[-1, 2]).exponent_sum(), 0);
        assert_eq!(w(3, &[1, 2, 1]).exponent_sum(), 3);
    }

    #[test]
    fn delta_words() {
        assert_eq!(BraidWord::delta(2).unwrap(), w(2, &[1]));
        assert_eq!(BraidWord::delta(3).unwrap(), w(3, &[1, 2, 1]));
        assert_eq!(BraidWord::delta(1).unwrap(), w(1, &[]));
        assert_eq!(BraidWord::delta(5).unwrap().len(), 10);
        assert!(BraidWord::delta(0).is_err());
    }

    #[test]
    fn letters_validated() {
        assert!(BraidWord::new(3, vec![3]).is_err());
        assert!(BraidWord::new(3, vec![0]).is_err());
        assert!(BraidWord::new(1, vec![1]).is_err());
        assert!(BraidWord::new(0, vec![]).is_err());
    }

    #[test]
    fn tau_maps_index() {
        assert_eq!(w(3, &[1]).tau(), w(3, &[2]));
        assert_eq!(w(4, &[2]).tau(), w(4, &[2]));
        assert_eq!(w(4, &[-1, 3]).tau(), w(4, &[-3, 1]));
    }

    #[test]
    fn text_roundtrip_and_errors() {
        let word: BraidWord = "n=3 1 -2 1".parse().unwrap();
        assert_eq!(word, w(3, &[1, -2, 1]));
        assert_eq!(word.to_text(), "n=3 1 -2 1");
        assert_eq!("n=4\n 1\t3 ".parse::<BraidWord>().unwrap(), w(4, &[1, 3]));
        assert_eq!(w(2, &[]).to_text(), "n=2");

        match "n=3 1\n 2 x".parse::<BraidWord>() {
            Err(BraidError::Parse { line, column, .. }) => assert_eq!((line, column), (2, 4)),
            other => panic!("unexpected {other:?}"),
        }
        match "n=3 1 3".parse::<BraidWord>() {
            Err(BraidError::Parse { line, column, .. }) => assert_eq!((line, column), (1, 7)),
            other => panic!("unexpected {other:?}"),
        }
        assert!("3 1".parse::<BraidWord>().is_err());
        assert!("".parse::<BraidWord>().is_err());
        assert!("n=0".parse::<BraidWord>().is_err());
    }
}
