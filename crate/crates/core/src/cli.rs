//! The `quantakit` command line.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::checks;
use crate::circuitgen::{bits_to_string, parse_bits, parse_qasm, synth_permutation, Encoding};
use crate::gates;
use crate::label::Label;
use crate::quanta::{self, pinned16, run_quanta, ListBasis, StepOp};
use crate::relalg::{self, minimal_complements, parse_truth_table, FinBasis};
use crate::vecmonad::{materialize, AmpVec, CMatrix, DEFAULT_TOL};

/// Largest list length accepted by `--maxlen`.
pub const MAXLEN_CAP: usize = 4;

pub const THREADS_ENV: &str = "QUANTAKIT_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "quantakit",
    version,
    about = "Quantum folds over lists, their matrices and circuits"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Materialize the fold of a step (or a bare gate) as a matrix.
    Matrix(MatrixArgs),
    /// Run the fold of a step on one input state.
    Run(RunArgs),
    /// List the minimal complements of a function given as a truth table.
    Complement(ComplementArgs),
    /// Compile a permutation matrix to an X/CX/CCX circuit.
    Synth(SynthArgs),
    /// Simulate a QASM circuit on a computational-basis input.
    Simulate(SimulateArgs),
    /// Run a property suite (relalg, vecmonad, gates, quanta, circuitgen, all).
    Check(CheckArgs),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct StepOrGate {
    /// Step on bit × bit to fold (cnot, bell, unbell, cond, id).
    #[arg(long)]
    step: Option<String>,
    /// Library gate to materialize directly, without folding.
    #[arg(long)]
    gate: Option<String>,
}

#[derive(Args, Debug)]
struct MatrixArgs {
    #[command(flatten)]
    what: StepOrGate,
    /// List length bound, or `pinned16` for the 16-state basis.
    #[arg(long, default_value = "2")]
    maxlen: String,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long)]
    step: String,
    /// Input state, e.g. `([0,1,1,1],0)`.
    #[arg(long)]
    input: String,
    /// Apply the fold this many times.
    #[arg(long, default_value_t = 1)]
    times: usize,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Args, Debug)]
struct ComplementArgs {
    /// Truth table, one `label -> label` line per source label.
    file: PathBuf,
    #[arg(long, default_value_t = relalg::DEFAULT_COMPLEMENT_LIMIT)]
    limit: usize,
    /// Also print each quotient function as a 0/1 matrix.
    #[arg(long)]
    matrix: bool,
    /// Label the rows and columns of printed matrices.
    #[arg(long)]
    labels: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct StepOrMatrix {
    #[arg(long)]
    step: Option<String>,
    /// A matrix in the `matrix` text format.
    #[arg(long)]
    matrix_file: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SynthArgs {
    #[command(flatten)]
    what: StepOrMatrix,
    #[arg(long, default_value = "pinned16")]
    maxlen: String,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Write the QASM here; otherwise it goes to stdout before the metrics.
    #[arg(long)]
    qasm: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    qasm: PathBuf,
    /// Input bits, qubit 0 first.
    bits: String,
}

#[derive(Args, Debug)]
struct CheckArgs {
    suite: String,
    #[arg(long, default_value_t = checks::DEFAULT_SEED)]
    seed: u64,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

/// Parses arguments and runs one command, writing its output to `out`.
/// Returns `Ok(false)` when a check suite reports failures.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> Result<bool>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)?;
    execute(cli, out)
}

pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<bool> {
    match cli.command {
        Command::Matrix(a) => cmd_matrix(a, out).map(|_| true),
        Command::Run(a) => cmd_run(a, out).map(|_| true),
        Command::Complement(a) => cmd_complement(a, out).map(|_| true),
        Command::Synth(a) => cmd_synth(a, out).map(|_| true),
        Command::Simulate(a) => cmd_simulate(a, out).map(|_| true),
        Command::Check(a) => cmd_check(a, out),
    }
}

/// Caps the rayon pool from `QUANTAKIT_THREADS`, if set.
pub fn init_threads() -> Result<()> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| anyhow!("{THREADS_ENV} must be a positive integer, got {v:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .context("configuring the thread pool")
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0 && tol.is_finite()) {
        bail!("--tol must be positive, got {tol}");
    }
    Ok(())
}

/// `--maxlen`: an integer up to [`MAXLEN_CAP`], or `pinned16`.
fn state_basis(maxlen: &str) -> Result<FinBasis> {
    if maxlen == "pinned16" {
        return Ok(pinned16());
    }
    let n: usize = maxlen
        .parse()
        .map_err(|_| anyhow!("--maxlen must be an integer or `pinned16`, got {maxlen:?}"))?;
    if n > MAXLEN_CAP {
        bail!("--maxlen {n} exceeds the cap of {MAXLEN_CAP}");
    }
    Ok(ListBasis::bits(n).basis().clone())
}

fn gate(name: &str) -> Result<crate::vecmonad::KleisliOp> {
    gates::lookup(name).ok_or_else(|| {
        anyhow!(
            "unknown gate {name:?}; known gates: {}",
            gates::GATE_NAMES.join(", ")
        )
    })
}

fn step(name: &str, tol: f64) -> Result<StepOp> {
    let b = FinBasis::bits();
    StepOp::new(gate(name)?, &b, &b, tol).with_context(|| format!("{name} cannot be used as a step"))
}

fn emit(out: &mut dyn Write, path: &Option<PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => out.write_all(text.as_bytes()).map_err(Into::into),
    }
}

fn json_text(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn cmd_matrix(a: MatrixArgs, out: &mut dyn Write) -> Result<()> {
    check_tol(a.tol)?;
    let m = if let Some(name) = &a.what.step {
        let f = step(name, a.tol)?;
        materialize(&quanta::quantamorphism(&f, &state_basis(&a.maxlen)?))?
    } else {
        let name = a.what.gate.as_deref().expect("clap group");
        let m = materialize(&gate(name)?)?;
        if !m.is_unitary(a.tol)? {
            bail!("gate {name} is not unitary within {}", a.tol);
        }
        m
    };
    let text = match a.format {
        Format::Text => m.dump(),
        Format::Json => json_text(&m.to_json()),
    };
    emit(out, &a.out, &text)
}

fn amp_json(v: &AmpVec) -> serde_json::Value {
    json!(v
        .iter()
        .map(|(l, x)| json!({"label": l.to_string(), "re": x.re, "im": x.im}))
        .collect::<Vec<_>>())
}

fn cmd_run(a: RunArgs, out: &mut dyn Write) -> Result<()> {
    check_tol(a.tol)?;
    let f = step(&a.step, a.tol)?;
    let input: Label = a.input.parse().context("parsing --input")?;
    let mut v = AmpVec::ret(input);
    for _ in 0..a.times {
        let mut next = AmpVec::zero();
        for (l, x) in v.iter() {
            next = next.add(&run_quanta(&f, l)?.scale(*x));
        }
        v = next;
    }
    let text = match a.format {
        Format::Text => v.dump(),
        Format::Json => json_text(&amp_json(&v)),
    };
    emit(out, &a.out, &text)
}

fn cmd_complement(a: ComplementArgs, out: &mut dyn Write) -> Result<()> {
    let text = fs::read_to_string(&a.file).with_context(|| format!("reading {}", a.file.display()))?;
    let f = parse_truth_table(&text).with_context(|| format!("parsing {}", a.file.display()))?;
    let found = minimal_complements(&f, a.limit)?;
    let src = f.src();
    let named =
        |block: &Vec<usize>| -> Vec<String> { block.iter().map(|&i| src.label(i).to_string()).collect() };
    let text = match a.format {
        Format::Json => json_text(&json!(found
            .iter()
            .map(|c| c.blocks.iter().map(named).collect::<Vec<_>>())
            .collect::<Vec<_>>())),
        Format::Text => {
            let mut s = format!("{} minimal complement(s)\n", found.len());
            for c in &found {
                let blocks: Vec<String> = c
                    .blocks
                    .iter()
                    .map(|b| format!("{{{}}}", named(b).join(",")))
                    .collect();
                s.push_str(&blocks.join(" "));
                s.push('\n');
                if a.matrix {
                    s.push_str(&c.quotient.dump(a.labels));
                }
            }
            s
        }
    };
    emit(out, &a.out, &text)
}

fn cmd_synth(a: SynthArgs, out: &mut dyn Write) -> Result<()> {
    check_tol(a.tol)?;
    let m: CMatrix = if let Some(name) = &a.what.step {
        materialize(&quanta::quantamorphism(
            &step(name, a.tol)?,
            &state_basis(&a.maxlen)?,
        ))?
    } else {
        let p = a.what.matrix_file.as_ref().expect("clap group");
        let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
        CMatrix::parse_dump(&text).with_context(|| format!("parsing {}", p.display()))?
    };
    if m.src() != m.tgt() {
        bail!("synthesis needs a square matrix over one basis");
    }
    let enc = Encoding::natural(m.src())?;
    let circ = synth_permutation(&m, &enc)?;
    let qasm = circ.export_qasm()?;
    match &a.qasm {
        Some(p) => fs::write(p, &qasm).with_context(|| format!("writing {}", p.display()))?,
        None => out.write_all(qasm.as_bytes())?,
    }
    writeln!(out, "{}", serde_json::to_string(&circ.metrics())?)?;
    Ok(())
}

fn cmd_simulate(a: SimulateArgs, out: &mut dyn Write) -> Result<()> {
    let text = fs::read_to_string(&a.qasm).with_context(|| format!("reading {}", a.qasm.display()))?;
    let circ = parse_qasm(&text)?;
    let k = circ.data_qubits;
    let input = parse_bits(&a.bits, k)?;
    let output = circ.simulate(input)?;
    writeln!(out, "{}", bits_to_string(output, k))?;
    Ok(())
}

fn cmd_check(a: CheckArgs, out: &mut dyn Write) -> Result<bool> {
    let reports = if a.suite == "all" {
        checks::run_all(a.seed)
    } else {
        vec![checks::run_suite(&a.suite, a.seed).ok_or_else(|| {
            anyhow!(
                "unknown suite {:?}; known: {}, all",
                a.suite,
                checks::SUITES.join(", ")
            )
        })?]
    };
    let ok = reports.iter().all(checks::SuiteReport::passed);
    match a.format {
        Format::Text => {
            for r in &reports {
                write!(out, "{r}")?;
            }
            writeln!(out, "{}", if ok { "all checks passed" } else { "FAILURES" })?;
        }
        Format::Json => {
            let doc: Vec<_> = reports
                .iter()
                .map(|r| {
                    json!({
                        "suite": r.suite,
                        "checks": r.checks.iter().map(|c| json!({
                            "name": c.name,
                            "cases": c.cases,
                            "failures": c.failures,
                            "first_failure": c.first_failure,
                        })).collect::<Vec<_>>(),
                    })
                })
                .collect();
            out.write_all(json_text(&json!(doc)).as_bytes())?;
        }
    }
    Ok(ok)
}
