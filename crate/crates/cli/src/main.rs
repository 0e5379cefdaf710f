//! `holobraid`: braid normal forms, conjugacy, holonomic isotopy
//! certificates and Fourier knot parametrizations from the command line.

mod commands;
mod input;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use holobraid_core::curve::CurveConfig;
use holobraid_core::Exec;
use serde::Serialize;

use input::{Failure, Inputs};

#[derive(Parser)]
#[command(
    name = "holobraid",
    version,
    about = "Braids, holonomic knots and their certificates"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// TOML file with a `[curve]` table of sampling settings.
    #[arg(long, global = true)]
    config: Option<String>,
    /// Samples per cycle.
    #[arg(long, global = true)]
    grid: Option<usize>,
    #[arg(long, global = true)]
    root_tol: Option<f64>,
    #[arg(long, global = true)]
    match_tol: Option<f64>,
    #[arg(long, global = true)]
    dedupe_tol: Option<f64>,
    #[arg(long, global = true)]
    axis_tol: Option<f64>,
    #[arg(long, global = true, value_enum)]
    exec: Option<ExecArg>,
    /// Print a JSON run report instead of text.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExecArg {
    Sequential,
    Parallel,
}

#[derive(Subcommand)]
enum Command {
    /// Left normal form of a braid word.
    Nf { word: String },
    /// Whether two words are the same braid.
    Eq { a: String, b: String },
    /// Conjugacy test with a verified witness.
    Conj { a: String, b: String },
    /// A summit form and the conjugator reaching it.
    Summit { word: String },
    /// The full summit set, one normal form per line.
    SummitSet { word: String },
    /// Rewrite a word into negative-then-positive form.
    Holonomize {
        word: String,
        /// Write the normalizing isotopy certificate here.
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Check an isotopy certificate step by step.
    Verify { certificate: String },
    /// Analyse the curve of a Fourier series given as TOML.
    #[command(subcommand)]
    Curve(CurveCommand),
    /// Legendrian cousins of a Fourier curve.
    #[command(subcommand)]
    Cousin(CousinCommand),
    /// Markov moves and replayed isotopies of holonomic forms.
    #[command(subcommand)]
    Isotopy(IsotopyCommand),
}

#[derive(Subcommand)]
pub enum CurveCommand {
    /// Genericity report.
    Check { series: String },
    /// Closed-braid word of a generic curve.
    Braid { series: String },
    /// SVG of the xy projection.
    Svg {
        series: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Samples `t,x,y,z` as CSV.
    Csv {
        series: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
pub enum CousinCommand {
    /// Crossings and cusps of the front of `L_k`.
    Front {
        series: String,
        #[arg(short, long, default_value_t = 1)]
        k: u32,
    },
    /// Tangency residual and diagram summary of `L_k`.
    Check {
        series: String,
        #[arg(short, long, default_value_t = 1)]
        k: u32,
    },
    /// SVG of the front of `L_k`.
    Svg {
        series: String,
        #[arg(short, long, default_value_t = 1)]
        k: u32,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Tangency along the isotopy from `L_k` to `L_m`.
    Dasbach {
        series: String,
        #[arg(short, long, default_value_t = 1)]
        k: u32,
        #[arg(short, long, default_value_t = 2)]
        m: u32,
        /// Values of `s` to sample.
        #[arg(long, value_delimiter = ',', default_value = "0,0.25,0.5,0.75,1")]
        s: Vec<f64>,
        /// Use the uncorrected formula, with 2k+1 in both z terms.
        #[arg(long)]
        verbatim: bool,
    },
}

#[derive(Subcommand)]
pub enum IsotopyCommand {
    /// Add a trivial loop on a new strand.
    Stabilize {
        form: String,
        #[arg(long, default_value = "+", value_parser = ["+", "-"])]
        sign: String,
    },
    /// Remove a trivial loop on the last strand.
    Destabilize { form: String },
    /// Replay a script of moves from a start form.
    Replay {
        start: String,
        script: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// What a command produced, before anything is written.
#[derive(Default)]
pub struct Output {
    pub text: String,
    pub result: serde_json::Value,
    pub files: Vec<(PathBuf, String)>,
    pub warnings: Vec<String>,
    /// Exit code for a run that completed with a negative verdict.
    pub code: u8,
}

#[derive(Serialize)]
struct RunReport<'a> {
    command: &'a [String],
    inputs_digest: String,
    results: &'a serde_json::Value,
    warnings: &'a [String],
}

fn config(global: &Global, inputs: &mut Inputs) -> Result<CurveConfig, Failure> {
    let mut cfg = match &global.config {
        Some(path) => {
            let text = inputs.read(path)?;
            input::parse_config(path, &text)?
        }
        None => CurveConfig::default(),
    };
    if let Some(g) = global.grid {
        cfg.grid = g;
    }
    if let Some(t) = global.root_tol {
        cfg.root_tol = t;
    }
    if let Some(t) = global.match_tol {
        cfg.match_tol = t;
    }
    if let Some(t) = global.dedupe_tol {
        cfg.dedupe_tol = t;
    }
    if let Some(t) = global.axis_tol {
        cfg.axis_tol = t;
    }
    if let Some(e) = global.exec {
        cfg.exec = match e {
            ExecArg::Sequential => Exec::Sequential,
            ExecArg::Parallel => Exec::Parallel,
        };
    }
    if cfg.grid < 8 {
        return Err(Failure::Input(format!(
            "grid must be at least 8, got {}",
            cfg.grid
        )));
    }
    Ok(cfg)
}

fn run(cli: &Cli, inputs: &mut Inputs) -> Result<Output, Failure> {
    let cfg = config(&cli.global, inputs)?;
    match &cli.command {
        Command::Nf { word } => commands::nf(inputs, word),
        Command::Eq { a, b } => commands::eq(inputs, a, b),
        Command::Conj { a, b } => commands::conj(inputs, a, b, cfg.exec),
        Command::Summit { word } => commands::summit(inputs, word),
        Command::SummitSet { word } => commands::summit_set(inputs, word, cfg.exec),
        Command::Holonomize { word, certificate } => {
            commands::holonomize(inputs, word, certificate.as_ref())
        }
        Command::Verify { certificate } => commands::verify(inputs, certificate, cfg.exec),
        Command::Curve(c) => commands::curve(inputs, c, &cfg),
        Command::Cousin(c) => commands::cousin(inputs, c, &cfg),
        Command::Isotopy(c) => commands::isotopy(inputs, c, cfg.exec),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut inputs = Inputs::default();
    let out = match run(&cli, &mut inputs) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("holobraid: {e}");
            return ExitCode::from(e.code());
        }
    };
    for (path, content) in &out.files {
        if let Err(e) = fs::write(path, content) {
            eprintln!("holobraid: {}: {e}", path.display());
            // drop whatever was already written
            for (p, _) in &out.files {
                let _ = fs::remove_file(p);
            }
            return ExitCode::from(2);
        }
    }
    for w in &out.warnings {
        eprintln!("warning: {w}");
    }
    let mut stdout = std::io::stdout().lock();
    let printed = if cli.global.json {
        let args: Vec<String> = std::env::args().skip(1).collect();
        let report = RunReport {
            command: &args,
            inputs_digest: inputs.digest(),
            results: &out.result,
            warnings: &out.warnings,
        };
        let json = serde_json::to_string_pretty(&report).expect("report serializes");
        writeln!(stdout, "{json}")
    } else {
        write!(stdout, "{}", out.text)
    };
    match printed {
        Ok(()) => ExitCode::from(out.code),
        Err(_) => ExitCode::from(1),
    }
}
