use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::braid::{parse_strands, tokenize, BraidWord, Token};
use crate::error::{BraidError, Result};
use crate::garside::{left_normal_form, NormalForm};

/// A closed braid split as `N|P`: a word of negative letters followed by a
/// word of positive letters. The open braid is `NP`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HolonomicForm {
    strands: usize,
    negative: BraidWord,
    positive: BraidWord,
}

impl HolonomicForm {
    pub fn new(strands: usize, negative: Vec<i32>, positive: Vec<i32>) -> Result<Self> {
        let h = Self::unchecked_signs(strands, negative, positive)?;
        h.check_shape().map_err(BraidError::NotHolonomic)?;
        Ok(h)
    }

    pub fn from_words(negative: BraidWord, positive: BraidWord) -> Result<Self> {
        if negative.strands() != positive.strands() {
            return Err(BraidError::StrandMismatch {
                left: negative.strands(),
                right: positive.strands(),
            });
        }
        let h = HolonomicForm {
            strands: negative.strands(),
            negative,
            positive,
        };
        h.check_shape().map_err(BraidError::NotHolonomic)?;
        Ok(h)
    }

    /// Letters are range-checked but signs are not; used when reading
    /// certificates so a bad form can be reported by the verifier.
    pub(crate) fn unchecked_signs(
        strands: usize,
        negative: Vec<i32>,
        positive: Vec<i32>,
    ) -> Result<Self> {
        Ok(HolonomicForm {
            strands,
            negative: BraidWord::new(strands, negative)?,
            positive: BraidWord::new(strands, positive)?,
        })
    }

    pub(crate) fn from_parts(strands: usize, negative: Vec<i32>, positive: Vec<i32>) -> Self {
        let h = HolonomicForm {
            strands,
            negative: BraidWord::from_parts_unchecked(strands, negative),
            positive: BraidWord::from_parts_unchecked(strands, positive),
        };
        debug_assert!(h.check_shape().is_ok(), "{h}");
        h
    }

    /// The trivial closed braid on `strands` strands.
    pub fn trivial(strands: usize) -> Result<Self> {
        Self::new(strands, Vec::new(), Vec::new())
    }

    /// Renders `Δ^k P_1⋯P_r` as `N|P`: `N = (Δ^{-1})^{-k}` when `k < 0`,
    /// otherwise `N = ∅` and `Δ^k` leads `P`.
    pub fn from_normal_form(nf: &NormalForm) -> Self {
        let n = nf.strands();
        let k = nf.inf();
        let delta_power = |sign: bool, m: usize| {
            let d = if sign {
                BraidWord::delta(n)
            } else {
                BraidWord::delta_inverse(n)
            };
            d.expect("strands >= 1").power(m).into_letters()
        };
        let (negative, mut positive) = if k < 0 {
            (delta_power(false, k.unsigned_abs() as usize), Vec::new())
        } else {
            (Vec::new(), delta_power(true, k as usize))
        };
        positive.extend_from_slice(nf.tail_word().letters());
        Self::from_parts(n, negative, positive)
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn negative(&self) -> &BraidWord {
        &self.negative
    }

    pub fn positive(&self) -> &BraidWord {
        &self.positive
    }

    /// The open braid `NP`.
    pub fn word(&self) -> BraidWord {
        self.negative
            .compose(&self.positive)
            .expect("parts share the strand count")
    }

    pub fn exponent_sum(&self) -> i64 {
        self.negative.exponent_sum() + self.positive.exponent_sum()
    }

    pub fn normal_form(&self) -> NormalForm {
        left_normal_form(&self.word())
    }

    /// `q` when `N` is exactly `q` copies of the canonical `Δ^{-1}` word.
    pub fn delta_exponent(&self) -> Option<usize> {
        let unit = BraidWord::delta_inverse(self.strands).ok()?;
        let (l, u) = (self.negative.letters(), unit.letters());
        if u.is_empty() {
            return l.is_empty().then_some(0);
        }
        if l.len() % u.len() != 0 || l.chunks(u.len()).any(|c| c != u) {
            return None;
        }
        Some(l.len() / u.len())
    }

    /// `Err` names the first sign violation.
    pub fn check_shape(&self) -> std::result::Result<(), String> {
        if let Some((i, l)) = self
            .negative
            .letters()
            .iter()
            .enumerate()
            .find(|(_, l)| **l > 0)
        {
            return Err(format!("N has positive letter {l} at position {}", i + 1));
        }
        if let Some((i, l)) = self
            .positive
            .letters()
            .iter()
            .enumerate()
            .find(|(_, l)| **l < 0)
        {
            return Err(format!("P has negative letter {l} at position {}", i + 1));
        }
        Ok(())
    }

    /// `n=<n> N=<l,l,…> P=<l,l,…>`.
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    pub fn parse_text(s: &str) -> Result<Self> {
        let tokens = tokenize(s);
        let h = parse_form_tokens(&tokens, (1, 1))?;
        h.check_shape().map_err(BraidError::NotHolonomic)?;
        Ok(h)
    }
}

pub(crate) fn join_letters(w: &BraidWord) -> String {
    w.letters()
        .iter()
        .map(i32::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

pub(crate) fn parse_letters(tok: &Token, text: &str) -> Result<Vec<i32>> {
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|p| {
            p.parse::<i32>().ok().filter(|l| *l != 0).ok_or_else(|| {
                BraidError::parse(tok.line, tok.column, format!("invalid letter `{p}`"))
            })
        })
        .collect()
}

/// Reads exactly `n=… N=… P=…` from `tokens` without checking signs. `at`
/// locates errors when `tokens` is empty.
pub(crate) fn parse_form_tokens(tokens: &[Token], at: (usize, usize)) -> Result<HolonomicForm> {
    let [n_tok, neg_tok, pos_tok] = tokens else {
        let (line, column) = tokens.first().map_or(at, |t| (t.line, t.column));
        return Err(BraidError::parse(
            line,
            column,
            "expected `n=<n> N=<letters> P=<letters>`",
        ));
    };
    let n = parse_strands(n_tok)?;
    let field = |tok: &Token, key: &str| -> Result<Vec<i32>> {
        let text = tok.text.strip_prefix(key).ok_or_else(|| {
            BraidError::parse(
                tok.line,
                tok.column,
                format!("expected `{key}<letters>`, found `{}`", tok.text),
            )
        })?;
        let letters = parse_letters(tok, text)?;
        if let Some(l) = letters.iter().find(|l| l.unsigned_abs() as usize >= n) {
            return Err(BraidError::parse(
                tok.line,
                tok.column,
                format!("letter {l} out of range for {n} strands"),
            ));
        }
        Ok(letters)
    };
    let negative = field(neg_tok, "N=")?;
    let positive = field(pos_tok, "P=")?;
    HolonomicForm::unchecked_signs(n, negative, positive)
}

impl fmt::Display for HolonomicForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={} N={} P={}",
            self.strands,
            join_letters(&self.negative),
            join_letters(&self.positive)
        )
    }
}

impl FromStr for HolonomicForm {
    type Err = BraidError;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse_text(s)
    }
}
