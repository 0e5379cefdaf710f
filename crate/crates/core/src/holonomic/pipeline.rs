use super::certificate::{check_step, Direction, IsotopyCertificate, Move, Side, Step};
use super::form::HolonomicForm;
use crate::braid::{tokenize, BraidWord, Token};
use crate::error::{BraidError, Result};
use crate::garside::{
    left_normal_form, negative_split, summit_trajectory, SummitGraph, SUMMIT_SET_STRAND_CAP,
};
use crate::par::Exec;

/// Builds a certificate move by move.
struct Recorder {
    cert: IsotopyCertificate,
}

impl Recorder {
    fn new(start: HolonomicForm) -> Self {
        Recorder {
            cert: IsotopyCertificate::new(start),
        }
    }

    fn current(&self) -> &HolonomicForm {
        self.cert.end()
    }

    fn push(&mut self, mv: Move, next: HolonomicForm) {
        if mv == Move::Equivalence && &next == self.current() {
            return;
        }
        debug_assert_eq!(check_step(self.current(), &mv, &next), Ok(()), "{mv:?}");
        self.cert.steps.push(Step { mv, result: next });
    }
}

fn delta_inverse_power(n: usize, q: usize) -> Vec<i32> {
    BraidWord::delta_inverse(n)
        .expect("strands >= 1")
        .power(q)
        .into_letters()
}

fn tau_letters(n: usize, letters: &[i32]) -> Vec<i32> {
    let n = n as i32;
    letters
        .iter()
        .map(|&l| l.signum() * (n - l.abs()))
        .collect()
}

/// `U_j` with `U_j σ_j = Δ`, as letters.
fn u_letters(j: usize, n: usize) -> Vec<i32> {
    negative_split(j, n)
        .expect("generator in range")
        .1
        .word()
        .letters()
        .to_vec()
}

/// Rewrites an arbitrary word as `N|P` with `N = (Δ^{-1})^q`.
///
/// Each `σ_i^{-1}` becomes `Δ^{-1}U_i`; the `Δ^{-1}` is moved in front of the
/// positive letters read so far, which are twisted by `τ` on the way.
pub fn holonomize(w: &BraidWord) -> HolonomicForm {
    let n = w.strands();
    let mut positive: Vec<i32> = Vec::with_capacity(w.len());
    let mut q = 0usize;
    for &l in w.letters() {
        if l > 0 {
            positive.push(l);
        } else {
            positive = tau_letters(n, &positive);
            positive.extend(u_letters(l.unsigned_abs() as usize, n));
            q += 1;
        }
    }
    HolonomicForm::from_parts(n, delta_inverse_power(n, q), positive)
}

fn comb(rec: &mut Recorder) {
    let h = rec.current().clone();
    if h.delta_exponent().is_some() {
        return;
    }
    let n = h.strands();
    let positive = h.positive().letters().to_vec();

    // N = Δ^{-a} τ^a(B^{-1}) where Δ^a B is the normal form of N^{-1}
    let nf = left_normal_form(&h.negative().invert());
    let mut q = nf.inf() as usize;
    let mut residual = nf.tail_word().invert().into_letters();
    if q % 2 == 1 {
        residual = tau_letters(n, &residual);
    }
    let mut neg = delta_inverse_power(n, q);
    neg.extend_from_slice(&residual);
    rec.push(
        Move::Equivalence,
        HolonomicForm::from_parts(n, neg, positive),
    );

    // peel the last letter σ_j^{-1}: σ_j^{-1}U_j^{-1} = Δ^{-1}
    while let Some(last) = residual.pop() {
        let u = u_letters(last.unsigned_abs() as usize, n);
        let n1 = BraidWord::from_parts_unchecked(n, u.clone()).invert();
        let cur = rec.current().clone();
        let mut neg = cur.negative().letters().to_vec();
        neg.extend_from_slice(n1.letters());
        let mut pos = u;
        pos.extend_from_slice(cur.positive().letters());
        rec.push(
            Move::Transfer {
                direction: Direction::Push,
                side: Side::Primary,
                word: n1,
            },
            HolonomicForm::from_parts(n, neg, pos.clone()),
        );
        q += 1;
        residual = tau_letters(n, &residual);
        let mut neg = delta_inverse_power(n, q);
        neg.extend_from_slice(&residual);
        rec.push(Move::Equivalence, HolonomicForm::from_parts(n, neg, pos));
    }
}

fn normalize(rec: &mut Recorder) {
    comb(rec);
    let h = rec.current().clone();
    let n = h.strands();
    let q = h.delta_exponent().expect("combed");
    let pnf = left_normal_form(h.positive());
    let c = pnf.inf() as usize;
    rec.push(
        Move::Equivalence,
        HolonomicForm::from_parts(
            n,
            h.negative().letters().to_vec(),
            pnf.to_word().into_letters(),
        ),
    );
    let m = c.min(q);
    if m > 0 {
        let mut pos = BraidWord::delta(n)
            .expect("strands >= 1")
            .power(c - m)
            .into_letters();
        pos.extend_from_slice(pnf.tail_word().letters());
        rec.push(
            Move::Transfer {
                direction: Direction::Pull,
                side: Side::Primary,
                word: BraidWord::from_parts_unchecked(n, delta_inverse_power(n, m)),
            },
            HolonomicForm::from_parts(n, delta_inverse_power(n, q - m), pos),
        );
    }
    debug_assert_eq!(
        rec.current(),
        &HolonomicForm::from_normal_form(&rec.current().normal_form())
    );
}

fn conjugate(rec: &mut Recorder, w: BraidWord) {
    if w.is_empty() {
        return;
    }
    let cur = rec.current().clone();
    let n = cur.strands();
    let mut neg = w.invert().into_letters();
    neg.extend_from_slice(cur.negative().letters());
    let mut pos = cur.positive().letters().to_vec();
    pos.extend_from_slice(w.letters());
    rec.push(
        Move::PositiveConjugation { conjugator: w },
        HolonomicForm::from_parts(n, neg, pos),
    );
}

fn summit(rec: &mut Recorder) -> Result<()> {
    normalize(rec);
    let nf = rec.current().normal_form();
    for (y, conj) in summit_trajectory(&nf)? {
        let n = nf.strands();
        let letters = conj
            .iter()
            .flat_map(|s| s.word().letters().iter().copied())
            .collect();
        conjugate(rec, BraidWord::from_parts_unchecked(n, letters));
        normalize(rec);
        debug_assert_eq!(rec.current(), &HolonomicForm::from_normal_form(&y));
    }
    Ok(())
}

/// Brings `N` to exactly `q` copies of the canonical `Δ^{-1}` word by a
/// recorded holonomic isotopy. The element `NP` is unchanged.
pub fn comb_to_delta_power(h: &HolonomicForm) -> (HolonomicForm, IsotopyCertificate) {
    let mut rec = Recorder::new(h.clone());
    comb(&mut rec);
    (rec.current().clone(), rec.cert)
}

/// Rewrites `h` as its left normal form `Δ^k P_1⋯P_r` in `N|P` shape.
pub fn holonomic_normal_form(h: &HolonomicForm) -> (HolonomicForm, IsotopyCertificate) {
    let mut rec = Recorder::new(h.clone());
    normalize(&mut rec);
    (rec.current().clone(), rec.cert)
}

/// Carries `h` to a summit form of its conjugacy class using only positive
/// conjugations and holonomic rewrites.
pub fn holonomic_summit(h: &HolonomicForm) -> Result<(HolonomicForm, IsotopyCertificate)> {
    let mut rec = Recorder::new(h.clone());
    summit(&mut rec)?;
    Ok((rec.current().clone(), rec.cert))
}

/// A V3 move request. Positive parts left as `None` are computed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum V3Move {
    /// (a) replace `N` and `P` by equal words of the same signs.
    Equivalence {
        negative: BraidWord,
        positive: BraidWord,
    },
    /// (b) move the negative word `word` across an interface.
    Transfer {
        direction: Direction,
        side: Side,
        word: BraidWord,
        positive: Option<BraidWord>,
    },
    /// (c) insert `σ_n^{±1}` at an interface.
    Loop { sign: i8, side: Side },
}

fn illegal(msg: impl Into<String>) -> BraidError {
    BraidError::IllegalMove(msg.into())
}

fn sign_of(sign: i8) -> Result<i8> {
    match sign {
        1 | -1 => Ok(sign),
        _ => Err(illegal(format!("sign must be +1 or -1, got {sign}"))),
    }
}

/// Applies a V3 move and returns the certificate step, checking the side
/// conditions.
pub fn v3_step(h: &HolonomicForm, m: &V3Move) -> Result<Step> {
    let n = h.strands();
    let (neg, pos) = (h.negative().letters(), h.positive().letters());
    let (mv, next) = match m {
        V3Move::Equivalence { negative, positive } => (
            Move::Equivalence,
            HolonomicForm::from_words(negative.clone(), positive.clone())?,
        ),
        V3Move::Transfer {
            direction,
            side,
            word,
            positive,
        } => {
            if word.strands() != n {
                return Err(BraidError::StrandMismatch {
                    left: n,
                    right: word.strands(),
                });
            }
            if !word.is_negative() {
                return Err(illegal("transferred word must be negative"));
            }
            let w = word.letters();
            let new_neg: Vec<i32> = match (direction, side) {
                (Direction::Push, Side::Primary) => [neg, w].concat(),
                (Direction::Push, Side::Cyclic) => [w, neg].concat(),
                (Direction::Pull, Side::Primary) => neg
                    .strip_suffix(w)
                    .ok_or_else(|| illegal("N does not end with the transferred word"))?
                    .to_vec(),
                (Direction::Pull, Side::Cyclic) => neg
                    .strip_prefix(w)
                    .ok_or_else(|| illegal("N does not start with the transferred word"))?
                    .to_vec(),
            };
            let new_pos = match positive {
                Some(p) => p.letters().to_vec(),
                None => {
                    let inv = word.invert();
                    match (direction, side) {
                        (Direction::Push, Side::Primary) => [inv.letters(), pos].concat(),
                        (Direction::Push, Side::Cyclic) => [pos, inv.letters()].concat(),
                        (Direction::Pull, _) => {
                            let joined = match side {
                                Side::Primary => word.compose(h.positive())?,
                                Side::Cyclic => h.positive().compose(word)?,
                            };
                            let nf = left_normal_form(&joined);
                            if nf.inf() < 0 {
                                return Err(illegal(
                                    "absorbing the transferred word leaves a negative braid",
                                ));
                            }
                            nf.to_word().into_letters()
                        }
                    }
                }
            };
            (
                Move::Transfer {
                    direction: *direction,
                    side: *side,
                    word: word.clone(),
                },
                HolonomicForm::unchecked_signs(n, new_neg, new_pos)?,
            )
        }
        V3Move::Loop { sign, side } => {
            let sign = sign_of(*sign)?;
            let (mut a, mut b) = (neg.to_vec(), pos.to_vec());
            let letter = i32::from(sign) * n as i32;
            match (sign < 0, side) {
                (true, Side::Primary) => a.push(letter),
                (true, Side::Cyclic) => a.insert(0, letter),
                (false, Side::Primary) => b.insert(0, letter),
                (false, Side::Cyclic) => b.push(letter),
            }
            (
                Move::Loop { sign, side: *side },
                HolonomicForm::new(n + 1, a, b)?,
            )
        }
    };
    check_step(h, &mv, &next).map_err(BraidError::IllegalMove)?;
    Ok(Step { mv, result: next })
}

pub fn v3_move(h: &HolonomicForm, m: &V3Move) -> Result<HolonomicForm> {
    Ok(v3_step(h, m)?.result)
}

/// Markov stabilization: `σ_n^{sign}` placed at the primary interface,
/// adding a strand.
pub fn stabilize_step(h: &HolonomicForm, sign: i8) -> Result<Step> {
    let sign = sign_of(sign)?;
    let n = h.strands();
    let (mut a, mut b) = (
        h.negative().letters().to_vec(),
        h.positive().letters().to_vec(),
    );
    let letter = i32::from(sign) * n as i32;
    if sign < 0 {
        a.push(letter);
    } else {
        b.insert(0, letter);
    }
    Ok(Step {
        mv: Move::Stabilize { sign },
        result: HolonomicForm::from_parts(n + 1, a, b),
    })
}

pub fn markov_stabilize(h: &HolonomicForm, sign: i8) -> Result<HolonomicForm> {
    Ok(stabilize_step(h, sign)?.result)
}

/// Markov destabilization: removes the unique `σ_{n-1}^{±1}` when it sits at
/// one of the interfaces.
pub fn destabilize_step(h: &HolonomicForm) -> Result<Step> {
    let n = h.strands();
    if n < 2 {
        return Err(illegal("a 1-strand braid cannot be destabilized"));
    }
    let top = n as i32 - 1;
    let (neg, pos) = (h.negative().letters(), h.positive().letters());
    let count = neg.iter().chain(pos).filter(|l| l.abs() == top).count();
    if count != 1 {
        return Err(illegal(format!(
            "σ{top} occurs {count} times, expected once"
        )));
    }
    let (mut a, mut b) = (neg.to_vec(), pos.to_vec());
    let (sign, side) = if a.last() == Some(&-top) {
        a.pop();
        (-1, Side::Primary)
    } else if a.first() == Some(&-top) {
        a.remove(0);
        (-1, Side::Cyclic)
    } else if b.first() == Some(&top) {
        b.remove(0);
        (1, Side::Primary)
    } else if b.last() == Some(&top) {
        b.pop();
        (1, Side::Cyclic)
    } else {
        return Err(illegal(format!("σ{top} is not at an interface")));
    };
    let result = HolonomicForm::from_parts(n - 1, a, b);
    let mv = Move::Destabilize { sign, side };
    check_step(h, &mv, &result).map_err(BraidError::IllegalMove)?;
    Ok(Step { mv, result })
}

pub fn markov_destabilize(h: &HolonomicForm) -> Result<HolonomicForm> {
    Ok(destabilize_step(h)?.result)
}

/// One line of a replay script.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScriptCommand {
    /// `M1 +` / `M1 -`
    Stabilize(i8),
    /// `M2`
    Destabilize,
    /// `V3c + primary`
    Loop(i8, Side),
    /// `SUMMIT`: move to a summit form of the current class.
    Summit,
    /// `GOTO n=… N=… P=…`: move to a conjugate holonomic form.
    Goto(HolonomicForm),
}

/// A user-supplied sequence of Markov moves and class targets; the
/// holonomic isotopies in between are filled in by [`replay`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ReplayScript {
    pub commands: Vec<ScriptCommand>,
}

impl ReplayScript {
    pub fn parse_text(s: &str) -> Result<ReplayScript> {
        let mut lines: Vec<Vec<Token>> = Vec::new();
        for t in tokenize(s) {
            match lines.last_mut() {
                Some(l) if l[0].line == t.line => l.push(t),
                _ => lines.push(vec![t]),
            }
        }
        let mut commands = Vec::new();
        for line in lines.iter().filter(|l| !l[0].text.starts_with('#')) {
            let head = &line[0];
            let rest = &line[1..];
            let err = |t: &Token, m: &str| BraidError::parse(t.line, t.column, m);
            let sign = |t: Option<&Token>| match t.map(|t| t.text.as_str()) {
                Some("+") => Ok(1i8),
                Some("-") => Ok(-1i8),
                _ => Err(err(t.unwrap_or(head), "expected `+` or `-`")),
            };
            let cmd = match head.text.as_str() {
                "M1" if rest.len() == 1 => ScriptCommand::Stabilize(sign(rest.first())?),
                "M2" if rest.is_empty() => ScriptCommand::Destabilize,
                "V3c" if rest.len() == 2 => {
                    let side = match rest[1].text.as_str() {
                        "primary" => Side::Primary,
                        "cyclic" => Side::Cyclic,
                        _ => return Err(err(&rest[1], "expected `primary` or `cyclic`")),
                    };
                    ScriptCommand::Loop(sign(rest.first())?, side)
                }
                "SUMMIT" if rest.is_empty() => ScriptCommand::Summit,
                "GOTO" => {
                    let form = super::form::parse_form_tokens(rest, (head.line, head.column + 5))?;
                    form.check_shape().map_err(|m| err(&rest[0], &m))?;
                    ScriptCommand::Goto(form)
                }
                "M1" | "M2" | "V3c" | "SUMMIT" => {
                    return Err(err(head, "wrong number of arguments"));
                }
                _ => return Err(err(head, "unknown script command")),
            };
            commands.push(cmd);
        }
        Ok(ReplayScript { commands })
    }
}

impl std::str::FromStr for ReplayScript {
    type Err = BraidError;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse_text(s)
    }
}

/// Runs `script` from `start`, filling in holonomic isotopies, and returns
/// the full certificate. Errors name the failing command (1-based).
pub fn replay(start: &HolonomicForm, script: &ReplayScript) -> Result<IsotopyCertificate> {
    replay_with(start, script, Exec::default())
}

pub fn replay_with(
    start: &HolonomicForm,
    script: &ReplayScript,
    exec: Exec,
) -> Result<IsotopyCertificate> {
    let mut rec = Recorder::new(start.clone());
    for (i, cmd) in script.commands.iter().enumerate() {
        let at = |e: BraidError| match e {
            BraidError::IllegalMove(m) => {
                BraidError::IllegalMove(format!("script command {}: {m}", i + 1))
            }
            e => e,
        };
        match cmd {
            ScriptCommand::Stabilize(sign) => {
                let step = stabilize_step(rec.current(), *sign).map_err(at)?;
                rec.push(step.mv, step.result);
            }
            ScriptCommand::Destabilize => {
                let step = destabilize_step(rec.current()).map_err(at)?;
                rec.push(step.mv, step.result);
            }
            ScriptCommand::Loop(sign, side) => {
                let step = v3_step(
                    rec.current(),
                    &V3Move::Loop {
                        sign: *sign,
                        side: *side,
                    },
                )
                .map_err(at)?;
                rec.push(step.mv, step.result);
            }
            ScriptCommand::Summit => summit(&mut rec)?,
            ScriptCommand::Goto(target) => goto(&mut rec, target, exec).map_err(at)?,
        }
    }
    Ok(rec.cert)
}

fn goto(rec: &mut Recorder, target: &HolonomicForm, exec: Exec) -> Result<()> {
    let n = rec.current().strands();
    if target.strands() != n {
        return Err(illegal(format!(
            "target has {} strands, current braid has {n}",
            target.strands()
        )));
    }
    summit(rec)?;
    let here = rec.current().normal_form();

    // target side: its normal form route and the summit it reaches
    let (target_nf_form, target_norm) = holonomic_normal_form(target);
    let target_nf = target_nf_form.normal_form();
    let mut there = target_nf.clone();
    let mut back: Vec<i32> = Vec::new();
    for (y, conj) in summit_trajectory(&target_nf)? {
        back.extend(conj.iter().flat_map(|s| s.word().letters().iter().copied()));
        there = y;
    }

    let graph = SummitGraph::build(here, SUMMIT_SET_STRAND_CAP, exec)?;
    let path = graph
        .path_to(&there)
        .ok_or_else(|| illegal("target is not conjugate to the current braid"))?;
    for s in path {
        conjugate(rec, s.word().clone());
        normalize(rec);
    }

    // undo the target's summit conjugation with a positive word:
    // W^{-1} Δ^{2m} conjugates like W^{-1}
    if !back.is_empty() {
        let w = BraidWord::from_parts_unchecked(n, back);
        let inv = w.invert();
        let m = (-left_normal_form(&inv).inf()).max(0) as usize;
        let d2m = BraidWord::delta(n)?.power(2 * m.div_ceil(2));
        let c = left_normal_form(&inv.compose(&d2m)?).to_word();
        debug_assert!(c.is_positive());
        conjugate(rec, c);
        normalize(rec);
    }
    if rec.current() != &target_nf_form {
        return Err(illegal("failed to reach the target normal form"));
    }
    let forms: Vec<HolonomicForm> = target_norm.forms().cloned().collect();
    for (i, step) in target_norm.steps.iter().enumerate().rev() {
        let mv = step.mv.reversed().expect("normal form route is reversible");
        rec.push(mv, forms[i].clone());
    }
    Ok(())
}
