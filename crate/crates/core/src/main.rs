use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use gqd::measures::{Measure, MeasureResult, Method};
use gqd::spin::ModelParams;
use gqd::sweep::{compute_point, describe_changes, format_value, run_sweep, Param, SweepSpec, CSV_HEADER};
use gqd::verify::{run_suite, sample_params, Suite};
use gqd::Error;

/// Geometric quantum discords (trace, Hellinger, Bures) of the two-qubit XX
/// chain with Dzyaloshinskii-Moriya interaction.
///
/// A temperature of exactly 0 selects the ground state (an equal mixture
/// when the ground level is degenerate) instead of a Gibbs state.
#[derive(Parser, Debug)]
#[command(name = "gqd", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate the measures at one parameter point.
    Compute(ComputeArgs),
    /// Sweep one parameter and write a table of values.
    Sweep(SweepArgs),
    /// Run the verification suites.
    Verify(VerifyArgs),
    /// Evaluate the analytic limiting cases.
    Limits(LimitsArgs),
}

#[derive(Args, Debug, Clone, Copy)]
struct PointArgs {
    /// Exchange coupling.
    #[arg(long = "J", default_value_t = 1.0, allow_negative_numbers = true)]
    j: f64,
    /// Uniform magnetic field.
    #[arg(long = "B", default_value_t = 0.0, allow_negative_numbers = true)]
    b: f64,
    /// Dzyaloshinskii-Moriya coupling.
    #[arg(long = "D", default_value_t = 0.0, allow_negative_numbers = true)]
    d: f64,
    /// Temperature (0 selects the ground state).
    #[arg(long = "T", default_value_t = 1.0, allow_negative_numbers = true)]
    t: f64,
}

impl PointArgs {
    fn params(&self) -> ModelParams {
        ModelParams::new(self.j, self.b, self.d, self.t)
    }
}

#[derive(Args, Debug, Clone)]
struct EvalArgs {
    /// Measures to evaluate (comma-separated).
    #[arg(long, value_enum, value_delimiter = ',', default_value = "all")]
    measure: Vec<MeasureArg>,
    /// Evaluation path. Bures has no closed form and uses its optimiser
    /// under `closed`.
    #[arg(long, value_enum, default_value_t = MethodArg::Closed)]
    method: MethodArg,
    /// Use the uncorrected closed-form Hellinger constants. The values are
    /// not valid discords and are tagged `paper_verbatim`.
    #[arg(long)]
    paper_verbatim: bool,
    /// Seed for the randomised parts of the trace oracle.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl EvalArgs {
    fn measures(&self) -> Vec<Measure> {
        let mut out = Vec::new();
        for m in &self.measure {
            let add: &[Measure] = match m {
                MeasureArg::Trace => &[Measure::Trace],
                MeasureArg::Hellinger => &[Measure::Hellinger],
                MeasureArg::Bures => &[Measure::Bures],
                MeasureArg::All => &Measure::ALL,
            };
            for a in add {
                if !out.contains(a) {
                    out.push(*a);
                }
            }
        }
        // keep table order fixed
        out.sort_by_key(|m| Measure::ALL.iter().position(|x| x == m));
        out
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum MeasureArg {
    Trace,
    Hellinger,
    Bures,
    All,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum MethodArg {
    #[value(alias = "closed_form")]
    Closed,
    Definitional,
    Oracle,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Closed => Method::ClosedForm,
            MethodArg::Definitional => Method::Definitional,
            MethodArg::Oracle => Method::Oracle,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ParamArg {
    #[value(name = "J")]
    J,
    #[value(name = "B")]
    B,
    #[value(name = "D")]
    D,
    #[value(name = "T")]
    T,
}

impl From<ParamArg> for Param {
    fn from(p: ParamArg) -> Param {
        match p {
            ParamArg::J => Param::J,
            ParamArg::B => Param::B,
            ParamArg::D => Param::D,
            ParamArg::T => Param::T,
        }
    }
}

#[derive(Args, Debug)]
struct ComputeArgs {
    #[command(flatten)]
    point: PointArgs,
    #[command(flatten)]
    eval: EvalArgs,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Parameters held fixed; the swept one is overridden.
    #[command(flatten)]
    point: PointArgs,
    #[command(flatten)]
    eval: EvalArgs,
    /// Swept parameter.
    #[arg(long, value_enum)]
    vary: ParamArg,
    #[arg(long, allow_negative_numbers = true)]
    from: f64,
    #[arg(long, allow_negative_numbers = true)]
    to: f64,
    /// Number of grid points, endpoints included. A temperature grid may
    /// start at 0, which is evaluated on the ground state.
    #[arg(long, default_value_t = 101)]
    steps: usize,
    /// Second parameter labelling one series per value.
    #[arg(long, value_enum, requires = "family_values")]
    family_param: Option<ParamArg>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, requires = "family_param")]
    family_values: Vec<f64>,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Report argmax switches and kinks on standard error.
    #[arg(long)]
    changes: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SuiteArg {
    Oracle,
    ClosedForm,
    Invariants,
    All,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = SuiteArg::All)]
    suite: SuiteArg,
    /// Random parameter points per suite.
    #[arg(long, default_value_t = 20)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum LimitCase {
    /// Ground-state values on both sides of and on the level crossing.
    ZeroT,
    /// Large DM coupling.
    Dinf,
    /// Very high temperature on random couplings.
    HighT,
}

#[derive(Args, Debug)]
struct LimitsArgs {
    #[arg(long, value_enum)]
    case: LimitCase,
    #[arg(long = "J", default_value_t = 1.0, allow_negative_numbers = true)]
    j: f64,
    /// DM coupling for `dinf`.
    #[arg(long = "D", default_value_t = 50.0, allow_negative_numbers = true)]
    d: f64,
    /// Temperature for `dinf` (default 0.5) and `high-t` (default 1e6).
    #[arg(long = "T")]
    t: Option<f64>,
    /// Fields for `dinf` (comma-separated).
    #[arg(long = "B", value_delimiter = ',', allow_negative_numbers = true, default_value = "0,1,3")]
    b: Vec<f64>,
    /// Random draws for `high-t`.
    #[arg(long, default_value_t = 10)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    paper_verbatim: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Compute(a) => compute(&a),
        Command::Sweep(a) => sweep(&a),
        Command::Verify(a) => return verify(&a),
        Command::Limits(a) => limits(&a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::InvalidSweep(_) | Error::NonPositiveTemperature { .. } => ExitCode::from(2),
                _ => ExitCode::FAILURE,
            }
        }
    }
}

fn evaluate(p: &ModelParams, eval: &EvalArgs) -> gqd::Result<Vec<MeasureResult>> {
    if p.t < 0.0 || !p.t.is_finite() {
        return Err(Error::NonPositiveTemperature { t: p.t });
    }
    eval.measures()
        .into_iter()
        .map(|m| compute_point(p, m, eval.method.into(), eval.paper_verbatim, eval.seed))
        .collect()
}

fn compute(a: &ComputeArgs) -> gqd::Result<()> {
    let p = a.point.params();
    let results = evaluate(&p, &a.eval)?;
    let mut out = io::stdout().lock();
    match a.format {
        Format::Text => {
            writeln!(out, "J={} B={} D={} T={}", p.j, p.b, p.d, p.t)?;
            for r in &results {
                write!(out, "{} = {:.10} [{}]", r.measure.column(), r.value, r.method)?;
                if let Some(b) = r.branch() {
                    write!(out, " branch={}", serde_json::to_value(b)?.as_str().unwrap_or_default())?;
                }
                if let Some(w) = &r.diagnostics.warning {
                    write!(out, " warning: {w}")?;
                }
                writeln!(out)?;
            }
        }
        Format::Csv => {
            writeln!(out, "{CSV_HEADER}")?;
            let cell = |m: Measure| {
                results.iter().find(|r| r.measure == m).map(|r| format_value(r.value)).unwrap_or_default()
            };
            let method = results.first().map_or("", |r| r.method.as_str());
            writeln!(
                out,
                "{},{},{},{},{},{},{},{method}",
                format_value(p.j),
                format_value(p.b),
                format_value(p.d),
                format_value(p.t),
                cell(Measure::Trace),
                cell(Measure::Hellinger),
                cell(Measure::Bures)
            )?;
        }
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&results)?)?,
    }
    Ok(())
}

fn sweep(a: &SweepArgs) -> gqd::Result<()> {
    let mut spec = SweepSpec::new(a.vary.into(), a.from, a.to, a.steps, a.point.params())
        .with_measures(&a.eval.measures())
        .with_method(a.eval.method.into());
    spec.verbatim = a.eval.paper_verbatim;
    spec.seed = a.eval.seed;
    if let Some(fp) = a.family_param {
        spec = spec.with_family(fp.into(), a.family_values.clone());
    }
    let table = run_sweep(&spec)?;
    let text = match a.format {
        Format::Json => table.to_json()? + "\n",
        Format::Csv | Format::Text => table.to_csv(),
    };
    match &a.out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    if a.changes {
        eprint!("{}", describe_changes(&table, &table.sudden_changes()));
    }
    Ok(())
}

fn verify(a: &VerifyArgs) -> ExitCode {
    let suites: Vec<Suite> = match a.suite {
        SuiteArg::Oracle => vec![Suite::Oracle],
        SuiteArg::ClosedForm => vec![Suite::ClosedForm],
        SuiteArg::Invariants => vec![Suite::Invariants],
        SuiteArg::All => Suite::ALL.to_vec(),
    };
    let mut failed = 0;
    for suite in suites {
        for check in run_suite(suite, a.samples, a.seed) {
            println!("{check}");
            failed += usize::from(!check.passed);
        }
    }
    if failed > 0 {
        println!("{failed} check(s) failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}

fn limits(a: &LimitsArgs) -> gqd::Result<()> {
    let eval = EvalArgs {
        measure: vec![MeasureArg::All],
        method: MethodArg::Closed,
        paper_verbatim: a.paper_verbatim,
        seed: a.seed,
    };
    let row = |label: &str, p: &ModelParams| -> gqd::Result<()> {
        let r = evaluate(p, &eval)?;
        println!(
            "{label:<28} J={:<6} B={:<8.4} D={:<8.4} T={:<8} Q_T={:.6} Q_H={:.6} Q_B={:.6}",
            p.j, p.b, p.d, p.t, r[0].value, r[1].value, r[2].value
        );
        Ok(())
    };
    match a.case {
        LimitCase::ZeroT => {
            let j = a.j;
            row("coupled ground state", &ModelParams::new(j, 1.0, 2.0, 0.0))?;
            row("field-aligned ground state", &ModelParams::new(j, 3.0, 1.0, 0.0))?;
            // δ = B: (J² + D²) = B² with B = 1.5
            let d = (1.5f64 * 1.5 - j * j).max(0.0).sqrt();
            row("degenerate ground state", &ModelParams::new(j, 1.5, d, 0.0))?;
        }
        LimitCase::Dinf => {
            let t = a.t.unwrap_or(0.5);
            for &b in &a.b {
                row("large DM coupling", &ModelParams::new(a.j, b, a.d, t))?;
            }
        }
        LimitCase::HighT => {
            let t = a.t.unwrap_or(1e6);
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            for _ in 0..a.samples {
                let p = sample_params(&mut rng).with_t(t);
                row("high temperature", &p)?;
            }
        }
    }
    Ok(())
}
