use std::fmt::Write;
use std::path::PathBuf;

use holobraid_core::curve::{
    crossing_sign, curve_csv, curve_svg, extract_braid, genericity_report, CurveConfig,
    FourierSeries, GenericityReport,
};
use holobraid_core::garside::{
    conjugate_test_with, left_normal_form, summit_form, summit_set_with, words_equal,
    ConjugationWitness, SUMMIT_SET_STRAND_CAP,
};
use holobraid_core::holonomic::{
    destabilize_step, holonomic_normal_form, holonomize as to_holonomic, replay_with,
    stabilize_step, verify_certificate_with, HolonomicForm, IsotopyCertificate, ReplayScript,
};
use holobraid_core::legendrian::{
    cousin_samples, dasbach_report, front_diagram, front_svg, tangency_residual, ContactForm,
    CousinParams,
};
use holobraid_core::{BraidWord, Exec};
use serde_json::json;

use crate::input::{parse_series, Failure, Inputs};
use crate::{CousinCommand, CurveCommand, IsotopyCommand, Output};

/// Largest tangency residual accepted for a Legendrian curve.
const TANGENCY_TOL: f64 = 1e-9;

fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn word(inputs: &mut Inputs, arg: &str) -> Result<BraidWord, Failure> {
    Ok(BraidWord::parse_text(&inputs.read(arg)?)?)
}

fn form(inputs: &mut Inputs, arg: &str) -> Result<HolonomicForm, Failure> {
    Ok(HolonomicForm::parse_text(&inputs.read(arg)?)?)
}

fn series(inputs: &mut Inputs, arg: &str) -> Result<FourierSeries, Failure> {
    let text = inputs.read(arg)?;
    parse_series(arg, &text)
}

/// Sends `content` to `path`, or to standard output without one.
fn emit(out: &mut Output, path: Option<&PathBuf>, content: String) {
    match path {
        Some(p) => {
            out.result = json!({ "written": p.display().to_string(), "bytes": content.len() });
            out.files.push((p.clone(), content));
        }
        None => {
            out.result = json!({ "content": content });
            out.text = content;
        }
    }
}

pub fn nf(inputs: &mut Inputs, arg: &str) -> Result<Output, Failure> {
    let nf = left_normal_form(&word(inputs, arg)?);
    Ok(Output {
        text: format!("{nf}\n"),
        result: json!({
            "normal_form": nf.to_text(),
            "inf": nf.inf(),
            "canonical_length": nf.canonical_length(),
        }),
        ..Output::default()
    })
}

pub fn eq(inputs: &mut Inputs, a: &str, b: &str) -> Result<Output, Failure> {
    let (a, b) = (word(inputs, a)?, word(inputs, b)?);
    let equal = words_equal(&a, &b)?;
    Ok(Output {
        text: format!("{}\n", if equal { "EQUAL" } else { "NOT EQUAL" }),
        result: json!({ "equal": equal }),
        ..Output::default()
    })
}

pub fn conj(inputs: &mut Inputs, a: &str, b: &str, exec: Exec) -> Result<Output, Failure> {
    let (a, b) = (word(inputs, a)?, word(inputs, b)?);
    let found = conjugate_test_with(&a, &b, SUMMIT_SET_STRAND_CAP, exec)?;
    let out = match found {
        Some(c) => {
            let verified = ConjugationWitness::verify_word(&c, &a, &b)?;
            if !verified {
                return Err(Failure::Domain(format!("witness {c} failed verification")));
            }
            Output {
                text: format!("CONJUGATE\nwitness: {c}\nwitness check: PASS\n"),
                result: json!({ "conjugate": true, "witness": c.to_text(), "verified": true }),
                ..Output::default()
            }
        }
        None => Output {
            text: "NOT CONJUGATE\n".into(),
            result: json!({ "conjugate": false }),
            ..Output::default()
        },
    };
    Ok(out)
}

pub fn summit(inputs: &mut Inputs, arg: &str) -> Result<Output, Failure> {
    let w = word(inputs, arg)?;
    let (nf, witness) = summit_form(&w)?;
    let c = witness.word();
    Ok(Output {
        text: format!(
            "summit: {}\ninf: {}\ncanonical length: {}\nconjugator: {c}\n",
            nf.to_text(),
            nf.inf(),
            nf.canonical_length()
        ),
        result: json!({
            "summit": nf.to_text(),
            "inf": nf.inf(),
            "canonical_length": nf.canonical_length(),
            "conjugator": c.to_text(),
        }),
        ..Output::default()
    })
}

pub fn summit_set(inputs: &mut Inputs, arg: &str, exec: Exec) -> Result<Output, Failure> {
    let w = word(inputs, arg)?;
    let set = summit_set_with(&w, SUMMIT_SET_STRAND_CAP, exec)?;
    let lines: Vec<String> = set.iter().map(|nf| nf.to_text()).collect();
    Ok(Output {
        text: lines.iter().map(|l| format!("{l}\n")).collect(),
        result: json!({ "size": lines.len(), "members": lines }),
        ..Output::default()
    })
}

pub fn holonomize(
    inputs: &mut Inputs,
    arg: &str,
    certificate: Option<&PathBuf>,
) -> Result<Output, Failure> {
    let w = word(inputs, arg)?;
    let h = to_holonomic(&w);
    let round_trip = words_equal(&h.word(), &w)?;
    let (_, cert) = holonomic_normal_form(&h);
    let verdict = verify_certificate_with(&cert, Exec::default());
    let mut out = Output {
        text: format!(
            "{h}\nround trip: {}\ncertificate: {verdict}\n",
            pass(round_trip)
        ),
        result: json!({
            "form": h.to_text(),
            "round_trip": round_trip,
            "certificate": verdict.to_string(),
        }),
        ..Output::default()
    };
    if let Some(p) = certificate {
        out.files.push((p.clone(), cert.to_text()));
    }
    if !round_trip || !verdict.passed() {
        return Err(Failure::Domain(out.text));
    }
    Ok(out)
}

pub fn verify(inputs: &mut Inputs, arg: &str, exec: Exec) -> Result<Output, Failure> {
    let cert = IsotopyCertificate::parse_text(&inputs.read(arg)?)?;
    let verdict = verify_certificate_with(&cert, exec);
    let result = match &verdict.failure {
        None => json!({ "passed": true, "steps": verdict.steps }),
        Some(f) => json!({
            "passed": false,
            "steps": verdict.steps,
            "failed_step": f.step,
            "tag": f.tag,
            "reason": f.reason,
        }),
    };
    Ok(Output {
        text: format!("{verdict}\n"),
        result,
        code: if verdict.passed() { 0 } else { 1 },
        ..Output::default()
    })
}

/// Nine decimals, without a sign on a value that rounds to zero.
fn fixed9(x: f64) -> String {
    let s = format!("{x:.9}");
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
        _ => s,
    }
}

fn report_text(f: &FourierSeries, r: &GenericityReport, cfg: &CurveConfig) -> String {
    let mut s = String::new();
    for (i, c) in r.conditions().iter().enumerate() {
        let _ = writeln!(s, "condition {}: {} ({})", i + 1, pass(c.passed), c.detail);
    }
    let count = |x: Option<usize>| x.map_or("-".to_string(), |v| v.to_string());
    let _ = writeln!(s, "zeros f: {}", count(r.zeros_f));
    let _ = writeln!(s, "zeros f': {}", count(r.zeros_fprime));
    let _ = writeln!(s, "braid index: {}", count(r.braid_index));
    let _ = writeln!(
        s,
        "axis point: {}",
        r.axis_point.map_or("-".to_string(), fixed9)
    );
    let _ = writeln!(s, "double points: {}", r.double_points.len());
    for &[t1, t2] in &r.double_points {
        let sign = match crossing_sign(f, t1, t2, cfg) {
            Ok(1) => "+1",
            Ok(_) => "-1",
            Err(_) => "?",
        };
        let half = if f.derivative(t1, 1) > 0.0 {
            "upper"
        } else {
            "lower"
        };
        let _ = writeln!(s, "  t1={t1:.9} t2={t2:.9} sign={sign} {half}");
    }
    let _ = writeln!(s, "newton failures: {}", r.newton_failures);
    let _ = writeln!(s, "genericity: {}", pass(r.all_passed()));
    s
}

pub fn curve(
    inputs: &mut Inputs,
    cmd: &CurveCommand,
    cfg: &CurveConfig,
) -> Result<Output, Failure> {
    let mut out = Output::default();
    match cmd {
        CurveCommand::Check { series: arg } => {
            let f = series(inputs, arg)?;
            let r = genericity_report(&f, cfg)?;
            out.text = report_text(&f, &r, cfg);
            out.warnings = r.warnings.clone();
            out.result = serde_json::to_value(&r).expect("report serializes");
        }
        CurveCommand::Braid { series: arg } => {
            let f = series(inputs, arg)?;
            let b = extract_braid(&f, cfg)?;
            out.text = format!("{}\n", b.word);
            out.result = json!({
                "word": b.word.to_text(),
                "axis": b.axis,
                "crossings": b.crossings,
            });
        }
        CurveCommand::Svg {
            series: arg,
            output,
        } => {
            let f = series(inputs, arg)?;
            emit(&mut out, output.as_ref(), curve_svg(&f, cfg)?);
        }
        CurveCommand::Csv {
            series: arg,
            output,
        } => {
            let f = series(inputs, arg)?;
            emit(&mut out, output.as_ref(), curve_csv(&f, cfg)?);
        }
    }
    Ok(out)
}

pub fn cousin(
    inputs: &mut Inputs,
    cmd: &CousinCommand,
    cfg: &CurveConfig,
) -> Result<Output, Failure> {
    let mut out = Output::default();
    match cmd {
        CousinCommand::Front { series: arg, k } => {
            let p = CousinParams::new(series(inputs, arg)?, *k);
            let d = front_diagram(&p, cfg)?;
            let mut s = format!("k={k}\n");
            if let Some(note) = &d.note {
                let _ = writeln!(s, "note: {note}");
            }
            let _ = writeln!(s, "crossings: {}", d.crossings.len());
            for c in &d.crossings {
                let _ = writeln!(
                    s,
                    "  t1={:.9} t2={:.9} x={:.9} v={:.9} sign={:+}",
                    c.t1, c.t2, c.xv[0], c.xv[1], c.sign
                );
            }
            let _ = writeln!(s, "cusps: {}", d.cusps.len());
            for &t in &d.cusps {
                let _ = writeln!(s, "  t={t:.9} x={:.9}", -p.base.eval(t));
            }
            out.text = s;
            out.result = serde_json::to_value(&d).expect("diagram serializes");
            out.warnings.extend(d.note);
        }
        CousinCommand::Check { series: arg, k } => {
            let p = CousinParams::new(series(inputs, arg)?, *k);
            let residual = tangency_residual(&cousin_samples(&p, cfg), ContactForm::Alpha)?;
            let d = front_diagram(&p, cfg)?;
            let tangent = residual < TANGENCY_TOL;
            let negative = d.crossings.iter().all(|c| c.sign == -1);
            let mut s = format!("k={k}\n");
            if let Some(note) = &d.note {
                let _ = writeln!(s, "note: {note}");
            }
            let _ = writeln!(s, "alpha residual: {residual:.3e}");
            let _ = writeln!(s, "tangent: {}", pass(tangent));
            let _ = writeln!(s, "crossings: {}", d.crossings.len());
            let _ = writeln!(s, "all crossings negative: {}", pass(negative));
            let _ = writeln!(s, "cusps: {}", d.cusps.len());
            out.text = s;
            out.result = json!({
                "k": k,
                "alpha_residual": residual,
                "tangent": tangent,
                "crossings": d.crossings.len(),
                "all_negative": negative,
                "cusps": d.cusps.len(),
                "note": d.note,
            });
            out.warnings.extend(d.note);
        }
        CousinCommand::Svg {
            series: arg,
            k,
            output,
        } => {
            let p = CousinParams::new(series(inputs, arg)?, *k);
            emit(&mut out, output.as_ref(), front_svg(&p, cfg)?);
        }
        CousinCommand::Dasbach {
            series: arg,
            k,
            m,
            s: values,
            verbatim,
        } => {
            if let Some(bad) = values.iter().find(|s| !(0.0..=1.0).contains(*s)) {
                return Err(Failure::Input(format!("s = {bad} is outside [0, 1]")));
            }
            let f = series(inputs, arg)?;
            let r = dasbach_report(&f, *k, *m, values, *verbatim, cfg)?;
            let mut s = format!("k={k} m={m}{}\n", if *verbatim { " verbatim" } else { "" });
            for x in &r.slices {
                let _ = writeln!(
                    s,
                    "s={} alpha residual: {:.3e} {}",
                    x.s,
                    x.alpha_residual,
                    pass(x.alpha_residual < TANGENCY_TOL)
                );
            }
            let _ = writeln!(s, "endpoints: {}", pass(r.endpoints_exact));
            out.text = s;
            out.warnings = r.warnings.clone();
            out.result = serde_json::to_value(&r).expect("report serializes");
        }
    }
    Ok(out)
}

pub fn isotopy(inputs: &mut Inputs, cmd: &IsotopyCommand, exec: Exec) -> Result<Output, Failure> {
    let cert = match cmd {
        IsotopyCommand::Stabilize { form: arg, sign } => {
            let h = form(inputs, arg)?;
            let step = stabilize_step(&h, if sign == "-" { -1 } else { 1 })?;
            let mut c = IsotopyCertificate::new(h);
            c.steps.push(step);
            c
        }
        IsotopyCommand::Destabilize { form: arg } => {
            let h = form(inputs, arg)?;
            let step = destabilize_step(&h)?;
            let mut c = IsotopyCertificate::new(h);
            c.steps.push(step);
            c
        }
        IsotopyCommand::Replay { start, script, .. } => {
            let h = form(inputs, start)?;
            let script = ReplayScript::parse_text(&inputs.read(script)?)?;
            replay_with(&h, &script, exec)?
        }
    };
    let verdict = verify_certificate_with(&cert, exec);
    if !verdict.passed() {
        return Err(Failure::Domain(format!(
            "emitted certificate does not verify: {verdict}"
        )));
    }
    let mut out = Output {
        result: json!({
            "end": cert.end().to_text(),
            "steps": cert.len(),
            "verdict": verdict.to_string(),
        }),
        ..Output::default()
    };
    let text = cert.to_text();
    match cmd {
        IsotopyCommand::Replay {
            output: Some(p), ..
        } => {
            out.text = format!("{}\ncertificate: {verdict}\n", cert.end().to_text());
            out.files.push((p.clone(), text));
        }
        _ => {
            out.result["certificate"] = json!(text);
            out.text = text;
        }
    }
    Ok(out)
}
