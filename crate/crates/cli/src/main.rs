//! `wnogo`: command-line front end for the W-state local-realism toolkit.
//!
//! Every subcommand is deterministic given identical flags (and seed, for
//! the stochastic ones): rerunning an invocation produces byte-identical
//! output. Exit codes: 0 success, 1 usage or domain error, 2 a `--expect`
//! assertion was violated.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use serde::Serialize;

use wnogo_core::bellmermin::{self, Observable, PreparedDirection};
use wnogo_core::contradiction::{
    counterfactual_completion, forbidden_witnesses, quantum_wins_scan, Fraction, StateFamily,
    Verdict,
};
use wnogo_core::lhv;
use wnogo_core::preparation::{fidelity_curve, tau_pi_half, PreparationConfig};
use wnogo_core::statevector::{exact_zero_test, w_state, MeasurementSettings, Outcome, Sign};

#[derive(Parser)]
#[command(
    name = "wnogo",
    about = "Exact quantum predictions vs. local hidden variables for W states",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExpectArg {
    Contradiction,
    None,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    W,
    Ghz,
    Bell,
}

impl From<FamilyArg> for StateFamily {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::W => StateFamily::W,
            FamilyArg::Ghz => StateFamily::Ghz,
            FamilyArg::Bell => StateFamily::Bell,
        }
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Mixed-basis amplitude of the n-qubit W state, with exact-zero verdict.
    Amplitude {
        #[arg(long)]
        n: usize,
        /// Per-site bases, e.g. "ZXX".
        #[arg(long)]
        settings: String,
        /// Per-site results, e.g. "1+-".
        #[arg(long)]
        outcome: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Witness scan and counterfactual-completion report for a state family.
    Contradiction {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Fail with exit code 2 if the verdict differs.
        #[arg(long, value_enum)]
        expect: Option<ExpectArg>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Enumerate local-hidden-variable assignments through the filter pipeline.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Rabi-oscillation preparation fidelity curve.
    Prepare {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        coupling: f64,
        /// Curve duration; defaults to one full Rabi period.
        #[arg(long)]
        tmax: Option<f64>,
        #[arg(long, default_value_t = 101)]
        points: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Monte Carlo statistics of the Bell-Mermin single-qubit model.
    Bellmermin {
        /// Observable "a0,ax,ay,az".
        #[arg(long, default_value = "0,1,0,0")]
        observable: String,
        /// Preparation axis "nx,ny,nz".
        #[arg(long, default_value = "0,0,1")]
        direction: String,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// All-equal-X probabilities for W_n up to --max-n.
    Scan {
        #[arg(long = "max-n")]
        max_n: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // --help/--version are not usage errors
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

fn emit(out: &OutputArgs, rendered: String) -> Result<(), String> {
    match &out.output {
        Some(path) => std::fs::write(path, rendered.as_bytes())
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(rendered.as_bytes())
                .map_err(|e| e.to_string())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report serialization");
    text.push('\n');
    text
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Amplitude {
            n,
            settings,
            outcome,
            out,
        } => cmd_amplitude(n, &settings, &outcome, &out),
        Command::Contradiction {
            n,
            family,
            expect,
            out,
        } => cmd_contradiction(n, family.into(), expect, &out),
        Command::Enumerate { n, out } => cmd_enumerate(n, &out),
        Command::Prepare {
            n,
            coupling,
            tmax,
            points,
            out,
        } => cmd_prepare(n, coupling, tmax, points, &out),
        Command::Bellmermin {
            observable,
            direction,
            samples,
            seed,
            out,
        } => cmd_bellmermin(&observable, &direction, samples, seed, &out),
        Command::Scan { max_n, out } => cmd_scan(max_n, &out),
    }
}

#[derive(Serialize)]
struct AmplitudeReport {
    schema: &'static str,
    n: usize,
    settings: String,
    outcome: String,
    amplitude_re: f64,
    amplitude_im: f64,
    probability: f64,
    exact_zero: bool,
    /// False when the zero verdict fell back to floating tolerance.
    zero_test_exact: bool,
}

fn cmd_amplitude(
    n: usize,
    settings_text: &str,
    outcome_text: &str,
    out: &OutputArgs,
) -> Result<ExitCode, String> {
    let settings = MeasurementSettings::parse(settings_text).map_err(|e| e.to_string())?;
    let outcome = Outcome::parse(outcome_text).map_err(|e| e.to_string())?;
    let state = w_state(n).map_err(|e| e.to_string())?;
    let amp = state
        .amplitude(&settings, &outcome)
        .map_err(|e| e.to_string())?;
    let verdict = exact_zero_test(n, &settings, &outcome).map_err(|e| e.to_string())?;
    let report = AmplitudeReport {
        schema: "wnogo.amplitude/1",
        n,
        settings: settings.to_string(),
        outcome: outcome.to_string(),
        amplitude_re: amp.re,
        amplitude_im: amp.im,
        probability: amp.norm_sqr(),
        exact_zero: verdict.is_zero,
        zero_test_exact: verdict.exact,
    };
    let rendered = match out.format.unwrap_or(Format::Text) {
        Format::Json => to_json(&report),
        Format::Csv => format!(
            "n,settings,outcome,amplitude_re,amplitude_im,probability,exact_zero,zero_test_exact\n\
             {},{},{},{:.15e},{:.15e},{:.15e},{},{}\n",
            n,
            report.settings,
            report.outcome,
            amp.re,
            amp.im,
            report.probability,
            verdict.is_zero,
            verdict.exact
        ),
        Format::Text => format!(
            "<{}|W_{}> with settings {} = {:.15e} {:+.15e}i\nprobability = {:.15e}\nexact zero: {} ({})\n",
            report.outcome,
            n,
            report.settings,
            amp.re,
            amp.im,
            report.probability,
            verdict.is_zero,
            if verdict.exact {
                "integer test"
            } else {
                "floating fallback, tolerance 1e-12"
            }
        ),
    };
    emit(out, rendered)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct ContradictionOutput {
    schema: &'static str,
    #[serde(flatten)]
    report: wnogo_core::ContradictionReport,
    /// Main-text counterfactual chain, included for W at n = 3.
    counterfactual: Option<CounterfactualSummary>,
}

#[derive(Serialize)]
struct CounterfactualSummary {
    inconsistency_fraction: Fraction,
    witnesses_plus_branch: Vec<String>,
    witnesses_minus_branch: Vec<String>,
}

fn cmd_contradiction(
    n: usize,
    family: StateFamily,
    expect: Option<ExpectArg>,
    out: &OutputArgs,
) -> Result<ExitCode, String> {
    let report = forbidden_witnesses(family, n).map_err(|e| e.to_string())?;
    let counterfactual = (family == StateFamily::W && n == 3)
        .then(|| -> Result<CounterfactualSummary, String> {
            let plus = counterfactual_completion(3, Sign::Plus).map_err(|e| e.to_string())?;
            let minus = counterfactual_completion(3, Sign::Minus).map_err(|e| e.to_string())?;
            let render = |r: &wnogo_core::ContradictionReport| {
                r.witnesses
                    .iter()
                    .map(|w| format!("{}:{}", w.settings, w.outcome))
                    .collect()
            };
            Ok(CounterfactualSummary {
                inconsistency_fraction: plus.inconsistency_fraction.expect("n=3 fraction"),
                witnesses_plus_branch: render(&plus),
                witnesses_minus_branch: render(&minus),
            })
        })
        .transpose()?;
    let verdict = report.verdict;
    let output = ContradictionOutput {
        schema: "wnogo.contradiction/1",
        report,
        counterfactual,
    };
    let rendered = match out.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&output),
        Format::Csv => {
            let mut text =
                String::from("settings,outcome,quantum_num,quantum_den,lhv_num,lhv_den\n");
            for w in &output.report.witnesses {
                text.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    w.settings,
                    w.outcome,
                    w.quantum_probability.num,
                    w.quantum_probability.den,
                    w.lhv_probability.num,
                    w.lhv_probability.den
                ));
            }
            text
        }
        Format::Text => {
            let mut text = format!(
                "family: {:?}, n = {}\nverdict: {:?}\nwitnesses: {}\n",
                output.report.family,
                output.report.n,
                output.report.verdict,
                output.report.witnesses.len()
            );
            for w in &output.report.witnesses {
                text.push_str(&format!(
                    "  {} -> {}  quantum {}/{}  lhv {}/{}\n",
                    w.settings,
                    w.outcome,
                    w.quantum_probability.num,
                    w.quantum_probability.den,
                    w.lhv_probability.num,
                    w.lhv_probability.den
                ));
            }
            if let Some(f) = &output.report.inconsistency_fraction {
                text.push_str(&format!(
                    "inconsistency fraction: {}/{} = {:.15e}\n",
                    f.num, f.den, f.approx
                ));
            }
            text
        }
    };
    emit(out, rendered)?;
    let violated = match expect {
        Some(ExpectArg::Contradiction) => verdict != Verdict::ContradictionFound,
        Some(ExpectArg::None) => verdict != Verdict::NoContradiction,
        None => false,
    };
    if violated {
        eprintln!("expectation violated: verdict was {verdict:?}");
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct EnumerateReport {
    schema: &'static str,
    n: usize,
    counts: lhv::PipelineCounts,
    survivors: Vec<String>,
    /// Weight accounting: per-survivor weight and total (n = 3 only).
    survivor_weight: Option<Fraction>,
    total_weight: Option<Fraction>,
}

fn cmd_enumerate(n: usize, out: &OutputArgs) -> Result<ExitCode, String> {
    let (survivors, counts) = lhv::pipeline(n).map_err(|e| e.to_string())?;
    let (survivor_weight, total_weight) = if n == 3 {
        let total = lhv::quantum_weight_accounting(&survivors).map_err(|e| e.to_string())?;
        let per = lhv::survivor_weight(&survivors.assignments[0]);
        (Some(per.into()), Some(total.into()))
    } else {
        (None, None)
    };
    let report = EnumerateReport {
        schema: "wnogo.enumerate/1",
        n,
        counts,
        survivors: survivors.assignments.iter().map(|a| a.to_string()).collect(),
        survivor_weight,
        total_weight,
    };
    let rendered = match out.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&report),
        Format::Csv => {
            let mut text = String::from("assignment\n");
            for a in &report.survivors {
                text.push_str(a);
                text.push('\n');
            }
            text
        }
        Format::Text => format!(
            "n = {}: {} -> {} -> {}\nsurvivors:\n{}\n",
            n,
            report.counts.total,
            report.counts.after_single_excitation,
            report.counts.after_forbidden_patterns,
            report.survivors.join("\n")
        ),
    };
    emit(out, rendered)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_prepare(
    n: usize,
    coupling: f64,
    tmax: Option<f64>,
    points: usize,
    out: &OutputArgs,
) -> Result<ExitCode, String> {
    let probe = PreparationConfig::new(n, coupling, 1.0, 2).map_err(|e| e.to_string())?;
    let duration = tmax.unwrap_or_else(|| 2.0 * tau_pi_half(&probe));
    let config = PreparationConfig::new(n, coupling, duration, points).map_err(|e| e.to_string())?;
    let curve = fidelity_curve(&config).map_err(|e| e.to_string())?;
    let rendered = match out.format.unwrap_or(Format::Csv) {
        Format::Json => {
            #[derive(Serialize)]
            struct PrepareReport {
                schema: &'static str,
                config: PreparationConfig,
                tau_pi_half: f64,
                curve: Vec<(f64, f64)>,
            }
            to_json(&PrepareReport {
                schema: "wnogo.prepare/1",
                config,
                tau_pi_half: tau_pi_half(&config),
                curve: curve.iter().map(|p| (p.time, p.fidelity)).collect(),
            })
        }
        Format::Csv | Format::Text => {
            let mut text = String::from("time,fidelity\n");
            for p in &curve {
                text.push_str(&format!("{:.15e},{:.15e}\n", p.time, p.fidelity));
            }
            text
        }
    };
    emit(out, rendered)?;
    Ok(ExitCode::SUCCESS)
}

fn parse_vector<const K: usize>(text: &str, what: &str) -> Result<[f64; K], String> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| format!("cannot parse {what} '{text}': {e}"))?;
    parts
        .try_into()
        .map_err(|_| format!("{what} must have {K} comma-separated components, got '{text}'"))
}

fn cmd_bellmermin(
    observable_text: &str,
    direction_text: &str,
    samples: u64,
    seed: u64,
    out: &OutputArgs,
) -> Result<ExitCode, String> {
    let [a0, ax, ay, az] = parse_vector::<4>(observable_text, "observable")?;
    let ndir = parse_vector::<3>(direction_text, "direction")?;
    let observable = Observable {
        a0,
        a1: [ax, ay, az],
    };
    let direction = PreparedDirection::new(ndir).map_err(|e| e.to_string())?;
    let stats =
        bellmermin::sample_mean(&observable, &direction, samples, seed).map_err(|e| e.to_string())?;
    #[derive(Serialize)]
    struct BellMerminReport {
        schema: &'static str,
        observable: Observable,
        direction: PreparedDirection,
        samples: u64,
        seed: u64,
        mean: f64,
        stderr: f64,
        closed_form: f64,
        boundary_hits: u64,
    }
    let report = BellMerminReport {
        schema: "wnogo.bellmermin/1",
        observable,
        direction,
        samples,
        seed,
        mean: stats.mean,
        stderr: stats.stderr,
        closed_form: bellmermin::closed_form_mean(&observable, &direction),
        boundary_hits: stats.boundary_hits,
    };
    let rendered = match out.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&report),
        Format::Csv => format!(
            "samples,seed,mean,stderr,closed_form,boundary_hits\n{},{},{:.15e},{:.15e},{:.15e},{}\n",
            samples, seed, report.mean, report.stderr, report.closed_form, report.boundary_hits
        ),
        Format::Text => format!(
            "mean = {:.15e} ± {:.15e} ({} samples, seed {})\nclosed form = {:.15e}\n",
            report.mean, report.stderr, samples, seed, report.closed_form
        ),
    };
    emit(out, rendered)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_scan(max_n: usize, out: &OutputArgs) -> Result<ExitCode, String> {
    let scan = quantum_wins_scan(max_n).map_err(|e| e.to_string())?;
    let rendered = match out.format.unwrap_or(Format::Csv) {
        Format::Json => {
            #[derive(Serialize)]
            struct ScanRow {
                n: usize,
                probability: Fraction,
            }
            #[derive(Serialize)]
            struct ScanReport {
                schema: &'static str,
                rows: Vec<ScanRow>,
            }
            to_json(&ScanReport {
                schema: "wnogo.scan/1",
                rows: scan
                    .into_iter()
                    .map(|(n, p)| ScanRow {
                        n,
                        probability: p.into(),
                    })
                    .collect(),
            })
        }
        Format::Csv | Format::Text => {
            let mut text = String::from("n,all_equal_x_probability,num,den\n");
            for (n, p) in &scan {
                text.push_str(&format!(
                    "{},{:.15e},{},{}\n",
                    n,
                    p.to_f64().unwrap(),
                    p.numer(),
                    p.denom()
                ));
            }
            text
        }
    };
    emit(out, rendered)?;
    Ok(ExitCode::SUCCESS)
}
