use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use algplane::report::{self, error_json, exit_code, Mode, Report, RunConfig};
use algplane::ruled::Derivatives;
use algplane::wire::{encode_a2, kind_of, parse_pair};
use algplane::{AlgebraKind, Error, Rational, Result, Scalar, A2};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

/// Projective planes over the complex, double and dual numbers, their line
/// congruences in RP5 and the ruled 3-folds of smooth algebra lines.
#[derive(Parser, Debug)]
#[command(name = "algplane", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Arithmetic on single algebra elements written as `x,y`.
    Algebra {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
        mode: ModeArg,
        #[command(subcommand)]
        op: AlgebraOp,
    },
    /// Classify the congruence and check focal-plane membership on random points.
    Congruence {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Generator, focus and singular-locus analysis of a curve file.
    Curve {
        file: PathBuf,
        #[arg(long, value_enum)]
        kind: Option<KindArg>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Reconstruct a join from a curve file or from `{"gamma1", "gamma2"}`.
    Join {
        file: PathBuf,
        #[arg(long, value_enum)]
        kind: Option<KindArg>,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Subcommand, Debug)]
enum AlgebraOp {
    Mul {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    Inverse {
        #[arg(allow_hyphen_values = true)]
        a: String,
    },
    ZeroDivisor {
        #[arg(allow_hyphen_values = true)]
        a: String,
    },
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// Parameter grid as `AxB`.
    #[arg(long, default_value = "5x5", value_parser = parse_grid)]
    grid: [usize; 2],
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = algplane::exactlin::RANK_TOL)]
    tol_rank: f64,
    #[arg(long, default_value_t = 1e-8)]
    tol_membership: f64,
    #[arg(long, default_value_t = algplane::exactlin::CLUSTER_RADIUS)]
    tol_cluster: f64,
    #[arg(long, value_enum, default_value_t = DerivArg::Analytic)]
    derivatives: DerivArg,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum KindArg {
    Complex,
    Double,
    Dual,
}

impl From<KindArg> for AlgebraKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Complex => AlgebraKind::Complex,
            KindArg::Double => AlgebraKind::Double,
            KindArg::Dual => AlgebraKind::Dual,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ModeArg {
    Exact,
    Float,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum DerivArg {
    Analytic,
    FiniteDifference,
}

fn parse_grid(s: &str) -> std::result::Result<[usize; 2], String> {
    let (a, b) = s.split_once(['x', 'X']).ok_or("expected AxB")?;
    let a: usize = a.parse().map_err(|_| format!("bad grid size {a:?}"))?;
    let b: usize = b.parse().map_err(|_| format!("bad grid size {b:?}"))?;
    if a == 0 || b == 0 {
        return Err("grid sizes must be positive".into());
    }
    Ok([a, b])
}

impl RunArgs {
    fn config(&self, kind: AlgebraKind) -> RunConfig {
        RunConfig {
            kind,
            mode: match self.mode {
                ModeArg::Exact => Mode::Exact,
                ModeArg::Float => Mode::Float,
            },
            seed: self.seed,
            samples: self.samples,
            grid: self.grid,
            tol_rank: self.tol_rank,
            tol_membership: self.tol_membership,
            tol_cluster: self.tol_cluster,
            derivatives: match self.derivatives {
                DerivArg::Analytic => Derivatives::Analytic,
                DerivArg::FiniteDifference => Derivatives::FiniteDifference,
            },
        }
    }
}

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn algebra<S: Scalar>(kind: AlgebraKind, op: &AlgebraOp) -> Result<Value> {
    let parse = |s: &str| parse_pair::<S>(s, kind);
    Ok(match op {
        AlgebraOp::Mul { a, b } => encode_a2(&parse(a)?.try_mul(&parse(b)?)?),
        AlgebraOp::Inverse { a } => encode_a2(&parse(a)?.inverse()?),
        AlgebraOp::ZeroDivisor { a } => {
            let a: A2<S> = parse(a)?;
            json!({
                "kind": kind,
                "element": encode_a2(&a),
                "norm": a.norm().encode(),
                "zero_divisor": a.is_zero_divisor(),
            })
        }
    })
}

/// Writes to stdout; a closed pipe is not an analysis failure.
fn write_stdout(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|_| out.flush());
}

fn print_json(v: &Value) {
    write_stdout(&format!(
        "{}\n",
        serde_json::to_string_pretty(v).expect("values serialize")
    ));
}

fn emit(report: &Report, out: Option<&Path>) -> Result<i32> {
    let text = report.to_pretty();
    match out {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| Error::Contract(format!("{}: {e}", p.display())))?
        }
        None => write_stdout(&text),
    }
    Ok(report.status.exit_code())
}

fn document_kind(doc: &Value, flag: Option<KindArg>) -> Result<AlgebraKind> {
    if doc.get("gamma1").is_some() {
        return flag
            .map(AlgebraKind::from)
            .ok_or_else(|| Error::Parse("--kind is required for sampled curves".into()));
    }
    let kind = kind_of(doc)?;
    match flag.map(AlgebraKind::from) {
        Some(k) if k != kind => Err(Error::Parse(format!(
            "document is over {kind} but --kind is {k}"
        ))),
        _ => Ok(kind),
    }
}

fn execute(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Algebra { kind, mode, op } => {
            let kind = kind.into();
            let v = match mode {
                ModeArg::Exact => algebra::<Rational>(kind, &op)?,
                ModeArg::Float => algebra::<f64>(kind, &op)?,
            };
            print_json(&v);
            Ok(0)
        }
        Command::Congruence { kind, run } => {
            let r = report::congruence(&run.config(kind.into()))?;
            emit(&r, run.out.as_deref())
        }
        Command::Curve { file, kind, run } => {
            let doc = read_json(&file)?;
            let cfg = run.config(document_kind(&doc, kind)?);
            emit(&report::curve(&doc, &cfg)?, run.out.as_deref())
        }
        Command::Join { file, kind, run } => {
            let doc = read_json(&file)?;
            let cfg = run.config(document_kind(&doc, kind)?);
            emit(&report::join(&doc, &cfg)?, run.out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 64 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let code = match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            print_json(&error_json(&e));
            exit_code(&e)
        }
    };
    ExitCode::from(code as u8)
}
