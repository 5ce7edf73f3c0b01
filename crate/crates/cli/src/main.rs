use clap::{Args, Parser, Subcommand};
use cuspidal::linalg::{parse_rational, Rational};
use cuspidal::quiver_rep::{
    build, decompose_with_seed, socle_filtration, DecomposeError, QuiverRep, QuiverRepError, RepFile,
};
use cuspidal::string_band::{enumerate_bands, enumerate_strings, BandDescriptor, Descriptor};
use cuspidal::verify::{run_suite, Suite, SuiteConfig, VerifyError};
use cuspidal::weight_engine::ExponentVector;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const DEFAULT_SEED: u64 = 20_240_611;

#[derive(Parser)]
#[command(name = "cuspidal", version, about = "Exact computations for cuspidal sl(n+1)-modules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List graded strings or bands, one descriptor per line.
    Enumerate(EnumerateArgs),
    /// Build representations from descriptors (arguments or stdin lines) as JSON.
    Build(BuildArgs),
    /// Decompose a representation file into indecomposables.
    Decompose(DecomposeArgs),
    /// Print the socle filtration of a representation file.
    Socle(InputArgs),
    /// Run a verification suite and write a PASS/FAIL report.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct Output {
    /// Write to this file (atomically) instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, conflicts_with = "bands")]
    strings: bool,
    #[arg(long)]
    bands: bool,
    #[arg(long, default_value_t = 4)]
    max_len: usize,
    #[arg(long, default_value_t = 4)]
    max_perimeter: usize,
    /// Eigenvalue attached to every listed band.
    #[arg(long, default_value = "1", value_parser = rational)]
    lambda: Rational,
    /// Jordan block size attached to every listed band.
    #[arg(long, default_value_t = 1)]
    r: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct BuildArgs {
    descriptors: Vec<String>,
    /// Emit a single representation: the direct sum of all inputs.
    #[arg(long)]
    sum: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct InputArgs {
    /// Representation JSON file; `-` or absent reads stdin.
    input: Option<PathBuf>,
    #[command(flatten)]
    output: Output,
}

#[derive(Args)]
struct DecomposeArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Args)]
struct VerifyArgs {
    /// cuspidal, derham, ext, hilbert, casimir or koszul.
    suite: String,
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, default_value_t = 4)]
    radius: usize,
    /// Exponent vector, e.g. 1/3,1/3,-2/3.
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<String>,
    #[arg(long, default_value_t = 1)]
    log_degree: usize,
    #[arg(long, default_value_t = 10)]
    cutoff: usize,
    /// Report file; defaults to $CUSPIDAL_OUT_DIR/<suite>.report when that is set.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, env = "CUSPIDAL_OUT_DIR", hide_env_values = true)]
    out_dir: Option<PathBuf>,
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Debug)]
enum Failure {
    Verification(String),
    Usage(String),
    Format(String),
    Internal(String),
    Relation(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Format(_) => 3,
            Failure::Internal(_) => 4,
            Failure::Relation(_) => 5,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Verification(m)
            | Failure::Usage(m)
            | Failure::Format(m)
            | Failure::Internal(m)
            | Failure::Relation(m) => m,
        }
    }
}

impl From<QuiverRepError> for Failure {
    fn from(e: QuiverRepError) -> Self {
        if e.is_relation_violation() {
            Failure::Relation(e.to_string())
        } else {
            Failure::Format(e.to_string())
        }
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Usage(m) => Failure::Usage(m),
            VerifyError::Weight(w) => Failure::Usage(w.to_string()),
            VerifyError::Cohomology(c) => Failure::Internal(c.to_string()),
        }
    }
}

/// Replaces `path` in one step: write a sibling temp file, then rename.
fn write_atomic(path: &Path, text: &str) -> Result<(), Failure> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| Failure::Internal(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(text.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn emit(output: &Output, text: &str) -> Result<(), Failure> {
    match &output.out {
        Some(p) => write_atomic(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_input(path: &Option<PathBuf>) -> Result<String, Failure> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            std::fs::read_to_string(p).map_err(|e| Failure::Format(format!("{}: {e}", p.display())))
        }
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::Format(e.to_string()))?;
            Ok(s)
        }
    }
}

fn load_rep(path: &Option<PathBuf>) -> Result<QuiverRep, Failure> {
    let text = read_input(path)?;
    Ok(RepFile::from_json(&text)?.to_rep()?)
}

fn enumerate(a: &EnumerateArgs) -> Result<(), Failure> {
    if a.n == 0 {
        return Err(Failure::Usage("--n must be at least 1".into()));
    }
    if !a.strings && !a.bands {
        return Err(Failure::Usage("pass --strings or --bands".into()));
    }
    let mut text = String::new();
    if a.strings {
        for s in enumerate_strings(a.n, a.max_len) {
            text.push_str(&format!("{s}\n"));
        }
    } else {
        for p in enumerate_bands(a.n, a.max_perimeter) {
            let b = BandDescriptor::new(p, a.lambda.clone(), a.r).map_err(|e| Failure::Usage(e.to_string()))?;
            text.push_str(&format!("{b}\n"));
        }
    }
    emit(&a.output, &text)
}

fn build_cmd(a: &BuildArgs) -> Result<(), Failure> {
    let lines: Vec<String> = if a.descriptors.is_empty() {
        read_input(&None)?.lines().map(str::trim).filter(|l| !l.is_empty()).map(String::from).collect()
    } else {
        a.descriptors.clone()
    };
    let reps: Vec<QuiverRep> = lines
        .iter()
        .map(|l| l.parse::<Descriptor>().map(|d| build(&d)).map_err(|e| Failure::Format(format!("{l:?}: {e}"))))
        .collect::<Result<_, _>>()?;
    let text = if a.sum {
        let n = reps.first().map(QuiverRep::n).ok_or_else(|| Failure::Usage("nothing to build".into()))?;
        let total = QuiverRep::direct_sum_all(n, &reps)?;
        format!("{}\n", total.to_file().to_json())
    } else {
        reps.iter().map(|r| format!("{}\n", r.to_file().to_json())).collect()
    };
    emit(&a.output, &text)
}

fn decompose_cmd(a: &DecomposeArgs) -> Result<(), Failure> {
    let m = load_rep(&a.input.input)?;
    let parts = decompose_with_seed(&m, a.seed).map_err(|e| match e {
        DecomposeError::VerificationFailed => Failure::Verification(e.to_string()),
        other => Failure::Internal(other.to_string()),
    })?;
    let text: String = parts.iter().map(|s| format!("{} × {}\n", s.multiplicity, s.descriptor)).collect();
    emit(&a.input.output, &text)
}

fn socle_cmd(a: &InputArgs) -> Result<(), Failure> {
    let m = load_rep(&a.input)?;
    let text: String = socle_filtration(&m).diagram().iter().map(|l| format!("{l}\n")).collect();
    emit(&a.output, &text)
}

fn verify_cmd(a: &VerifyArgs) -> Result<(), Failure> {
    let suite: Suite = a.suite.parse()?;
    let mu = match &a.mu {
        Some(s) => Some(s.parse::<ExponentVector>().map_err(|e| Failure::Usage(e.to_string()))?),
        None => None,
    };
    let cfg = SuiteConfig { n: a.n, radius: a.radius, mu, log_degree: a.log_degree, cutoff: a.cutoff };
    let report = run_suite(suite, &cfg)?;
    let text = report.render();
    print!("{text}");
    let target = a.out.clone().or_else(|| a.out_dir.as_ref().map(|d| d.join(format!("{}.report", suite.name()))));
    if let Some(p) = target {
        write_atomic(&p, &text)?;
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Verification(format!("suite {} recorded failures", suite.name())))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Enumerate(a) => enumerate(a),
        Command::Build(a) => build_cmd(a),
        Command::Decompose(a) => decompose_cmd(a),
        Command::Socle(a) => socle_cmd(a),
        Command::Verify(a) => verify_cmd(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("cuspidal: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
