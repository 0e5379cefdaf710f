use std::fmt;
use std::fs;
use std::io::Read;
use std::path::Path;

use holobraid_core::curve::{CurveConfig, CurveError, FourierSeries};
use holobraid_core::legendrian::LegendrianError;
use holobraid_core::BraidError;
use serde::Deserialize;
use sha2::{Digest, Sha256};

/// A command failure with its exit code.
#[derive(Debug)]
pub enum Failure {
    /// Unreadable or malformed input: exit 2.
    Input(String),
    /// The input is valid but the operation does not apply: exit 1.
    Domain(String),
    /// An internal search or size cap was hit: exit 3.
    Cap(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Domain(_) => 1,
            Failure::Input(_) => 2,
            Failure::Cap(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(m) => write!(f, "input error: {m}"),
            Failure::Domain(m) => write!(f, "{m}"),
            Failure::Cap(m) => write!(f, "cap exceeded: {m}"),
        }
    }
}

impl From<BraidError> for Failure {
    fn from(e: BraidError) -> Self {
        match e {
            BraidError::Parse { .. }
            | BraidError::InvalidStrands(_)
            | BraidError::LetterOutOfRange { .. }
            | BraidError::StrandMismatch { .. }
            | BraidError::NotHolonomic(_) => Failure::Input(e.to_string()),
            BraidError::SearchCap(_)
            | BraidError::IterationCap { .. }
            | BraidError::StrandCap { .. } => Failure::Cap(e.to_string()),
            _ => Failure::Domain(e.to_string()),
        }
    }
}

impl From<CurveError> for Failure {
    fn from(e: CurveError) -> Self {
        match e {
            CurveError::InvalidSeries(_) => Failure::Input(e.to_string()),
            CurveError::Braid(b) => b.into(),
            _ => Failure::Domain(e.to_string()),
        }
    }
}

impl From<LegendrianError> for Failure {
    fn from(e: LegendrianError) -> Self {
        match e {
            LegendrianError::Curve(c) => c.into(),
            _ => Failure::Domain(e.to_string()),
        }
    }
}

/// Every input read by a command, for the report digest.
#[derive(Default)]
pub struct Inputs {
    hasher: Sha256,
}

impl Inputs {
    /// Reads `arg` as a file, `-` as standard input, or, when no such file
    /// exists and the text starts with `n=`, as the literal content.
    pub fn read(&mut self, arg: &str) -> Result<String, Failure> {
        let text = if arg == "-" {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Failure::Input(format!("standard input: {e}")))?;
            s
        } else if !Path::new(arg).exists() && arg.trim_start().starts_with("n=") {
            arg.to_string()
        } else {
            fs::read_to_string(arg).map_err(|e| Failure::Input(format!("{arg}: {e}")))?
        };
        self.hasher.update((text.len() as u64).to_le_bytes());
        self.hasher.update(text.as_bytes());
        Ok(text)
    }

    pub fn digest(&self) -> String {
        self.hasher
            .clone()
            .finalize()
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

/// Line and column (1-based) of a byte offset.
fn position(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

fn toml_error(source: &str, text: &str, e: toml::de::Error) -> Failure {
    let message = e.message().to_string();
    match e.span() {
        Some(span) => {
            let (line, column) = position(text, span.start);
            Failure::Input(format!(
                "{source}: parse error at line {line}, column {column}: {message}"
            ))
        }
        None => Failure::Input(format!("{source}: {message}")),
    }
}

pub fn parse_series(source: &str, text: &str) -> Result<FourierSeries, Failure> {
    let f: FourierSeries = toml::from_str(text).map_err(|e| toml_error(source, text, e))?;
    f.validate()?;
    Ok(f)
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    #[serde(default)]
    curve: CurveConfig,
}

pub fn parse_config(source: &str, text: &str) -> Result<CurveConfig, Failure> {
    let c: ConfigFile = toml::from_str(text).map_err(|e| toml_error(source, text, e))?;
    Ok(c.curve)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions_are_one_based() {
        assert_eq!(position("ab\ncd", 0), (1, 1));
        assert_eq!(position("ab\ncd", 4), (2, 2));
    }

    #[test]
    fn series_errors_carry_positions() {
        let e = parse_series("f.toml", "constant = 0\nsin = [1.0, x]\n").unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
        assert_eq!(e.code(), 2);
        let e = parse_series("f.toml", "sine = [1.0]\n").unwrap_err();
        assert_eq!(e.code(), 2);
    }

    #[test]
    fn config_overrides_defaults() {
        let c = parse_config("c.toml", "[curve]\ngrid = 8192\nexec = \"sequential\"\n").unwrap();
        assert_eq!(c.grid, 8192);
        assert_eq!(c.match_tol, CurveConfig::default().match_tol);
        assert!(parse_config("c.toml", "[curve]\ngird = 1\n").is_err());
    }
}
