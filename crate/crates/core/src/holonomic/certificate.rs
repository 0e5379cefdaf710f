use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::form::{join_letters, parse_form_tokens, parse_letters, HolonomicForm};
use crate::braid::{tokenize, BraidWord, Token};
use crate::error::{BraidError, Result};
use crate::garside::words_equal;
use crate::par::Exec;

/// Which interface of the closed braid a move acts on. `Primary` is the
/// `N`-to-`P` junction inside the open word, `Cyclic` the `P`-to-`N`
/// wraparound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Primary,
    Cyclic,
}

/// Direction of a negative-word transfer across an interface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// A negative word leaves `P` and joins `N`.
    Push,
    /// A negative word leaves `N` and is absorbed into `P`.
    Pull,
}

/// A single certificate move together with the data its check needs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Move {
    /// V3(a): `N` and `P` are each replaced by equal words of the same sign.
    Equivalence,
    /// V3(b): the negative word `word` crosses the interface `side`.
    ///
    /// * push primary: `P = N₁P'`, result `NN₁ | P'`
    /// * push cyclic: `P = P'N₁`, result `N₁N | P'`
    /// * pull moves are the inverses.
    Transfer {
        direction: Direction,
        side: Side,
        word: BraidWord,
    },
    /// V3(c): insert `σ_n^{±1}` at an interface, adding a strand.
    Loop { sign: i8, side: Side },
    /// Markov stabilization at the primary interface.
    Stabilize { sign: i8 },
    /// Markov destabilization: the unique `σ_{n-1}^{±1}`, found at an
    /// interface, is deleted.
    Destabilize { sign: i8, side: Side },
    /// Conjugation by a positive word `W`: `N|P → W^{-1}N | PW`.
    PositiveConjugation { conjugator: BraidWord },
}

impl Move {
    pub fn tag(&self) -> &'static str {
        match self {
            Move::Equivalence => "V3a",
            Move::Transfer { .. } => "V3b",
            Move::Loop { .. } => "V3c",
            Move::Stabilize { .. } => "M1",
            Move::Destabilize { .. } => "M2",
            Move::PositiveConjugation { .. } => "CONJ-POS",
        }
    }

    /// Whether the move keeps the conjugacy class in `B_n`.
    pub fn preserves_class(&self) -> bool {
        !matches!(
            self,
            Move::Loop { .. } | Move::Stabilize { .. } | Move::Destabilize { .. }
        )
    }

    /// The move undoing this one when the forms are swapped, if it exists
    /// in the same literal form.
    pub fn reversed(&self) -> Option<Move> {
        Some(match self {
            Move::Equivalence => Move::Equivalence,
            Move::Transfer {
                direction,
                side,
                word,
            } => Move::Transfer {
                direction: match direction {
                    Direction::Push => Direction::Pull,
                    Direction::Pull => Direction::Push,
                },
                side: *side,
                word: word.clone(),
            },
            Move::Loop { sign, side } => Move::Destabilize {
                sign: *sign,
                side: *side,
            },
            Move::Stabilize { sign } => Move::Destabilize {
                sign: *sign,
                side: Side::Primary,
            },
            Move::Destabilize { sign, side } => match side {
                Side::Primary => Move::Stabilize { sign: *sign },
                Side::Cyclic => Move::Loop {
                    sign: *sign,
                    side: *side,
                },
            },
            Move::PositiveConjugation { .. } => return None,
        })
    }

    fn payload(&self) -> String {
        let sign = |s: &i8| if *s < 0 { "-" } else { "+" };
        let side = |s: &Side| match s {
            Side::Primary => "primary",
            Side::Cyclic => "cyclic",
        };
        match self {
            Move::Equivalence => "-".to_string(),
            Move::Transfer {
                direction,
                side: s,
                word,
            } => format!(
                "{} {} N1={}",
                match direction {
                    Direction::Push => "push",
                    Direction::Pull => "pull",
                },
                side(s),
                join_letters(word)
            ),
            Move::Loop { sign: g, side: s } | Move::Destabilize { sign: g, side: s } => {
                format!("{} {}", sign(g), side(s))
            }
            Move::Stabilize { sign: g } => sign(g).to_string(),
            Move::PositiveConjugation { conjugator } => format!("W={}", join_letters(conjugator)),
        }
    }

    /// Reads a move from its tag and payload tokens; letters are checked
    /// against the strand count `n` of the form before the move.
    fn parse(tag: &Token, payload: &[Token], n: usize) -> Result<Move> {
        let err = |t: &Token, m: String| BraidError::parse(t.line, t.column, m);
        let want = |k: usize| -> Result<()> {
            if payload.len() == k {
                Ok(())
            } else {
                let t = payload.first().unwrap_or(tag);
                Err(err(
                    t,
                    format!(
                        "{} expects {k} payload token(s), found {}",
                        tag.text,
                        payload.len()
                    ),
                ))
            }
        };
        let sign = |t: &Token| match t.text.as_str() {
            "+" => Ok(1i8),
            "-" => Ok(-1i8),
            other => Err(err(t, format!("expected `+` or `-`, found `{other}`"))),
        };
        let side = |t: &Token| match t.text.as_str() {
            "primary" => Ok(Side::Primary),
            "cyclic" => Ok(Side::Cyclic),
            other => Err(err(
                t,
                format!("expected `primary` or `cyclic`, found `{other}`"),
            )),
        };
        let word = |t: &Token, key: &str| -> Result<BraidWord> {
            let text = t
                .text
                .strip_prefix(key)
                .ok_or_else(|| err(t, format!("expected `{key}<letters>`, found `{}`", t.text)))?;
            BraidWord::new(n, parse_letters(t, text)?).map_err(|e| err(t, e.to_string()))
        };
        match tag.text.as_str() {
            "V3a" => {
                want(1)?;
                if payload[0].text != "-" {
                    return Err(err(&payload[0], "V3a takes the payload `-`".into()));
                }
                Ok(Move::Equivalence)
            }
            "V3b" => {
                want(3)?;
                let direction = match payload[0].text.as_str() {
                    "push" => Direction::Push,
                    "pull" => Direction::Pull,
                    other => {
                        return Err(err(
                            &payload[0],
                            format!("expected `push` or `pull`, found `{other}`"),
                        ))
                    }
                };
                Ok(Move::Transfer {
                    direction,
                    side: side(&payload[1])?,
                    word: word(&payload[2], "N1=")?,
                })
            }
            "V3c" => {
                want(2)?;
                Ok(Move::Loop {
                    sign: sign(&payload[0])?,
                    side: side(&payload[1])?,
                })
            }
            "M1" => {
                want(1)?;
                Ok(Move::Stabilize {
                    sign: sign(&payload[0])?,
                })
            }
            "M2" => {
                want(2)?;
                Ok(Move::Destabilize {
                    sign: sign(&payload[0])?,
                    side: side(&payload[1])?,
                })
            }
            "CONJ-POS" => {
                want(1)?;
                Ok(Move::PositiveConjugation {
                    conjugator: word(&payload[0], "W=")?,
                })
            }
            other => Err(err(tag, format!("unknown move tag `{other}`"))),
        }
    }
}

/// One certificate line: a move and the full form it produces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub mv: Move,
    pub result: HolonomicForm,
}

/// A start form and a sequence of checked moves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsotopyCertificate {
    pub start: HolonomicForm,
    pub steps: Vec<Step>,
}

impl IsotopyCertificate {
    pub fn new(start: HolonomicForm) -> Self {
        IsotopyCertificate {
            start,
            steps: Vec::new(),
        }
    }

    pub fn end(&self) -> &HolonomicForm {
        self.steps.last().map_or(&self.start, |s| &s.result)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// All forms in order, start first.
    pub fn forms(&self) -> impl Iterator<Item = &HolonomicForm> {
        std::iter::once(&self.start).chain(self.steps.iter().map(|s| &s.result))
    }

    /// Appends `other`, which must start where this certificate ends.
    pub fn append(&mut self, other: IsotopyCertificate) {
        debug_assert_eq!(self.end(), &other.start);
        self.steps.extend(other.steps);
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }

    /// Parses the line log. Blank lines and `#` comments are skipped; the
    /// first remaining line must be `START - => …`. Sign violations in the
    /// forms are accepted here and reported by [`verify_certificate`].
    pub fn parse_text(s: &str) -> Result<Self> {
        let tokens = tokenize(s);
        let mut lines: Vec<Vec<Token>> = Vec::new();
        for t in tokens {
            match lines.last_mut() {
                Some(l) if l[0].line == t.line => l.push(t),
                _ => lines.push(vec![t]),
            }
        }
        lines.retain(|l| !l[0].text.starts_with('#'));
        let mut iter = lines.into_iter();
        let first = iter
            .next()
            .ok_or_else(|| BraidError::parse(1, 1, "empty certificate"))?;
        let (head, start) = split_line(&first)?;
        if head[0].text != "START" {
            return Err(BraidError::parse(
                head[0].line,
                head[0].column,
                format!("expected `START`, found `{}`", head[0].text),
            ));
        }
        let mut cert = IsotopyCertificate::new(start);
        for line in iter {
            let (head, result) = split_line(&line)?;
            let n = cert.end().strands();
            let mv = Move::parse(&head[0], &head[1..], n)?;
            cert.steps.push(Step { mv, result });
        }
        Ok(cert)
    }
}

fn split_line(line: &[Token]) -> Result<(&[Token], HolonomicForm)> {
    let arrow = line
        .iter()
        .position(|t| t.text == "=>")
        .ok_or_else(|| BraidError::parse(line[0].line, line[0].column, "missing `=>`"))?;
    if arrow == 0 {
        return Err(BraidError::parse(
            line[0].line,
            line[0].column,
            "missing move tag",
        ));
    }
    let end = &line[arrow];
    let form = parse_form_tokens(&line[arrow + 1..], (end.line, end.column + 2))?;
    Ok((&line[..arrow], form))
}

impl fmt::Display for IsotopyCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "START - => {}", self.start)?;
        for s in &self.steps {
            writeln!(f, "{} {} => {}", s.mv.tag(), s.mv.payload(), s.result)?;
        }
        Ok(())
    }
}

impl FromStr for IsotopyCertificate {
    type Err = BraidError;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse_text(s)
    }
}

/// Outcome of [`verify_certificate`]: the first failing step, if any.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub steps: usize,
    pub failure: Option<Failure>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    /// 0 for the start form, `i` for the `i`-th step.
    pub step: usize,
    pub tag: String,
    pub reason: String,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.failure {
            None => write!(f, "PASS ({} steps)", self.steps),
            Some(x) => write!(f, "FAIL at step {} ({}): {}", x.step, x.tag, x.reason),
        }
    }
}

pub fn verify_certificate(c: &IsotopyCertificate) -> Verdict {
    verify_certificate_with(c, Exec::default())
}

/// Checks every step independently; the reported failure is always the one
/// with the smallest index, whatever the execution mode.
pub fn verify_certificate_with(c: &IsotopyCertificate, exec: Exec) -> Verdict {
    let failure = if let Err(reason) = c.start.check_shape() {
        Some(Failure {
            step: 0,
            tag: "START".into(),
            reason,
        })
    } else {
        let checks = exec.map_range(0..c.steps.len(), |i| {
            let prev = if i == 0 {
                &c.start
            } else {
                &c.steps[i - 1].result
            };
            check_step(prev, &c.steps[i].mv, &c.steps[i].result)
        });
        checks
            .into_iter()
            .enumerate()
            .find_map(|(i, r)| r.err().map(|reason| (i, reason)))
            .map(|(i, reason)| Failure {
                step: i + 1,
                tag: c.steps[i].mv.tag().into(),
                reason,
            })
    };
    Verdict {
        steps: c.steps.len(),
        failure,
    }
}

/// Tag-specific legality of `prev --mv--> next`.
pub fn check_step(
    prev: &HolonomicForm,
    mv: &Move,
    next: &HolonomicForm,
) -> std::result::Result<(), String> {
    prev.check_shape()
        .map_err(|e| format!("source form: {e}"))?;
    next.check_shape()
        .map_err(|e| format!("result form: {e}"))?;
    let n = prev.strands();
    let equal = |a: &BraidWord, b: &BraidWord| words_equal(a, b).map_err(|e| e.to_string());
    let compose = |a: &BraidWord, b: &BraidWord| a.compose(b).map_err(|e| e.to_string());
    let same_n = || {
        if next.strands() == n {
            Ok(())
        } else {
            Err(format!(
                "strand count changed from {n} to {}",
                next.strands()
            ))
        }
    };
    let (pn, pp) = (prev.negative().letters(), prev.positive().letters());
    let (nn, np) = (next.negative().letters(), next.positive().letters());
    match mv {
        Move::Equivalence => {
            same_n()?;
            if !equal(prev.negative(), next.negative())? {
                return Err("N is not equivalent to the new negative part".into());
            }
            if !equal(prev.positive(), next.positive())? {
                return Err("P is not equivalent to the new positive part".into());
            }
            Ok(())
        }
        Move::Transfer {
            direction,
            side,
            word,
        } => {
            same_n()?;
            if word.strands() != n {
                return Err(format!("N1 has {} strands, expected {n}", word.strands()));
            }
            if !word.is_negative() {
                return Err("N1 is not a negative word".into());
            }
            let w = word.letters();
            // (form holding N1 in its negative part, form before the transfer)
            let (with, without) = match direction {
                Direction::Push => (next, prev),
                Direction::Pull => (prev, next),
            };
            let (wn, on) = (with.negative().letters(), without.negative().letters());
            let literal = match side {
                Side::Primary => {
                    wn.len() == on.len() + w.len() && wn.ends_with(w) && wn.starts_with(on)
                }
                Side::Cyclic => {
                    wn.len() == on.len() + w.len() && wn.starts_with(w) && wn.ends_with(on)
                }
            };
            if !literal {
                return Err(match side {
                    Side::Primary => "negative parts do not differ by N1 at the tail".into(),
                    Side::Cyclic => "negative parts do not differ by N1 at the head".into(),
                });
            }
            // the positive part without N1 must equal N1 times the other
            let expected = match side {
                Side::Primary => compose(word, with.positive())?,
                Side::Cyclic => compose(with.positive(), word)?,
            };
            if !equal(without.positive(), &expected)? {
                return Err("positive parts are not related by N1 as elements".into());
            }
            Ok(())
        }
        Move::Loop { sign, side } => check_loop(prev, next, *sign, *side, "V3c"),
        Move::Stabilize { sign } => check_loop(prev, next, *sign, Side::Primary, "M1"),
        Move::Destabilize { sign, side } => {
            check_loop(next, prev, *sign, *side, "M2")?;
            let letter = i32::from(*sign) * (n as i32 - 1);
            let count = pn
                .iter()
                .chain(pp)
                .filter(|l| l.abs() == letter.abs())
                .count();
            if count != 1 {
                return Err(format!("σ{} occurs {count} times", n - 1));
            }
            Ok(())
        }
        Move::PositiveConjugation { conjugator } => {
            same_n()?;
            if conjugator.strands() != n {
                return Err(format!(
                    "W has {} strands, expected {n}",
                    conjugator.strands()
                ));
            }
            if !conjugator.is_positive() {
                return Err("conjugator is not positive".into());
            }
            let inv = conjugator.invert();
            let w = conjugator.letters();
            let ok_n = nn.len() == inv.len() + pn.len()
                && nn.starts_with(inv.letters())
                && nn.ends_with(pn);
            let ok_p = np.len() == pp.len() + w.len() && np.starts_with(pp) && np.ends_with(w);
            if !(ok_n && ok_p) {
                return Err("result is not W^-1 N | P W".into());
            }
            Ok(())
        }
    }
}

/// `big` is `small` with `σ_n^{sign}` inserted at `side`, `n = small.strands()`.
fn check_loop(
    small: &HolonomicForm,
    big: &HolonomicForm,
    sign: i8,
    side: Side,
    tag: &str,
) -> std::result::Result<(), String> {
    let n = small.strands();
    if big.strands() != n + 1 {
        return Err(format!(
            "{tag} must change the strand count by one ({n} vs {})",
            big.strands()
        ));
    }
    let letter = i32::from(sign) * n as i32;
    let (sn, sp) = (
        small.negative().letters().to_vec(),
        small.positive().letters().to_vec(),
    );
    let (mut en, mut ep) = (sn.clone(), sp.clone());
    match (sign < 0, side) {
        (true, Side::Primary) => en.push(letter),
        (true, Side::Cyclic) => en.insert(0, letter),
        (false, Side::Primary) => ep.insert(0, letter),
        (false, Side::Cyclic) => ep.push(letter),
    }
    if big.negative().letters() != en.as_slice() || big.positive().letters() != ep.as_slice() {
        return Err(format!(
            "forms do not differ by σ{}^{} at the {} interface",
            n,
            if sign < 0 { "-1" } else { "+1" },
            match side {
                Side::Primary => "primary",
                Side::Cyclic => "cyclic",
            }
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(s: &str) -> HolonomicForm {
        s.parse().unwrap()
    }

    #[test]
    fn transfer_at_the_primary_interface() {
        let prev = form("n=3 N=-2 P=2,1");
        let next = form("n=3 N=-2,-1 P=1,2,1");
        let mv = Move::Transfer {
            direction: Direction::Push,
            side: Side::Primary,
            word: BraidWord::new(3, vec![-1]).unwrap(),
        };
        assert_eq!(check_step(&prev, &mv, &next), Ok(()));
        assert_eq!(check_step(&next, &mv.reversed().unwrap(), &prev), Ok(()));
        let bad = form("n=3 N=-2,-1 P=2,2,1");
        assert!(check_step(&prev, &mv, &bad).is_err());
    }

    #[test]
    fn transfer_at_the_cyclic_interface() {
        let prev = form("n=3 N= P=2,1");
        let next = form("n=3 N=-1 P=2,1,1");
        let mv = Move::Transfer {
            direction: Direction::Push,
            side: Side::Cyclic,
            word: BraidWord::new(3, vec![-1]).unwrap(),
        };
        assert_eq!(check_step(&prev, &mv, &next), Ok(()));
    }

    #[test]
    fn loops_and_markov_moves() {
        let h = form("n=2 N= P=1,1,1");
        let up = form("n=3 N= P=2,1,1,1");
        assert_eq!(check_step(&h, &Move::Stabilize { sign: 1 }, &up), Ok(()));
        let m2 = Move::Destabilize {
            sign: 1,
            side: Side::Primary,
        };
        assert_eq!(check_step(&up, &m2, &h), Ok(()));
        let cyc = form("n=3 N= P=1,1,1,2");
        let loop_move = Move::Loop {
            sign: 1,
            side: Side::Cyclic,
        };
        assert_eq!(check_step(&h, &loop_move, &cyc), Ok(()));
        assert!(check_step(&h, &Move::Stabilize { sign: 1 }, &cyc).is_err());
        let twice = form("n=3 N= P=2,1,2");
        let down = form("n=2 N= P=1");
        assert!(check_step(&twice, &m2, &down).is_err());
    }

    #[test]
    fn positive_conjugation() {
        let prev = form("n=3 N=-1 P=2");
        let next = form("n=3 N=-2,-1 P=2,2");
        let mv = Move::PositiveConjugation {
            conjugator: BraidWord::new(3, vec![2]).unwrap(),
        };
        assert_eq!(check_step(&prev, &mv, &next), Ok(()));
        let neg = Move::PositiveConjugation {
            conjugator: BraidWord::new(3, vec![-2]).unwrap(),
        };
        let signless = HolonomicForm::unchecked_signs(3, vec![2, -1], vec![2, -2]).unwrap();
        assert!(check_step(&prev, &neg, &signless).is_err());
    }

    #[test]
    fn text_round_trip_and_located_failure() {
        let text = "START - => n=2 N= P=1,1,1\n\
                    M1 + => n=3 N= P=2,1,1,1\n\
                    # comment\n\
                    M2 + primary => n=2 N= P=1,1,1\n";
        let c: IsotopyCertificate = text.parse().unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.to_text(), text.replace("# comment\n", ""));
        assert!(verify_certificate(&c).passed());

        let bad = "START - => n=3 N=-1 P=2\nV3a - => n=3 N=1 P=2\n";
        let c: IsotopyCertificate = bad.parse().unwrap();
        let v = verify_certificate(&c);
        let f = v.failure.unwrap();
        assert_eq!((f.step, f.tag.as_str()), (1, "V3a"));
        assert!(f.reason.contains("positive letter"), "{}", f.reason);
    }

    #[test]
    fn parse_errors_are_located() {
        let e = "START - => n=2 N= P=1\nV3x - => n=2 N= P=1\n"
            .parse::<IsotopyCertificate>()
            .unwrap_err();
        assert!(
            matches!(
                e,
                BraidError::Parse {
                    line: 2,
                    column: 1,
                    ..
                }
            ),
            "{e}"
        );
        let e = "START - => n=2 N= P=1\nV3b push primary N1=-5 => n=2 N= P=1\n"
            .parse::<IsotopyCertificate>()
            .unwrap_err();
        assert!(
            matches!(
                e,
                BraidError::Parse {
                    line: 2,
                    column: 18,
                    ..
                }
            ),
            "{e}"
        );
    }
}
