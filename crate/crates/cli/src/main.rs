use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use ladderkit::coeff::UnitValues;
use ladderkit::errata::LAMBDAS;
use ladderkit::parser::ParseError;
use ladderkit::pt::DEFAULT_MAX_ORDER;
use ladderkit::report::{to_latex, to_text, RunReport, Section};
use ladderkit::verify::{verify, VerifyConfig, VerifyError, VerifyReport};
use ladderkit::{parse_operator, Expansion, OperatorPoly, PtError};

const EXIT_USAGE: u8 = 1;
const EXIT_HERMITICITY: u8 = 2;
const EXIT_VERIFY: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "ladderkit", version, about = "Perturbative ladder operators for the harmonic oscillator")]
// `-V` is the perturbation, so the version flag is long-only.
#[command(disable_version_flag = true)]
struct Cli {
    /// Print version.
    #[arg(long, action = clap::ArgAction::Version)]
    version: Option<bool>,
    /// Report errors as one JSON object on stderr.
    #[arg(long, global = true)]
    json_diagnostics: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Corrections α_(m), their adjoints and ν_(m) = (ã†ã)_(m).
    Correct(Common),
    /// Energy corrections ε_(m)(n), plus numeric E_n(λ).
    Spectrum {
        #[command(flatten)]
        common: Common,
        /// Level for the numeric table (repeatable).
        #[arg(long = "level", default_values_t = [0, 1, 2, 3])]
        levels: Vec<usize>,
        /// Coupling for the numeric table (repeatable).
        #[arg(long = "lambda", default_values_t = [0.01])]
        lambdas: Vec<f64>,
    },
    /// Expectation values and norms in the perturbed states.
    Expect {
        #[command(flatten)]
        common: Common,
        /// Observable (repeatable).
        #[arg(short = 'O', long = "observable", required = true)]
        observables: Vec<String>,
    },
    /// Run the numerical oracle against the symbolic engine.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Fock cutoff; raised to 4·M·deg(V) + 8 when omitted.
        #[arg(short = 'D', long)]
        cutoff: Option<usize>,
        /// Coupling, taken literally (repeatable). Without it the grid
        /// 0.01, 0.02, 0.05 is scaled by 1/κ, κ = max ‖V|n⟩‖/ħω.
        #[arg(long = "lambda")]
        lambdas: Vec<f64>,
        /// Relative tolerance for engine-vs-oracle equality.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Allowed change of interior quantities under cutoff doubling.
        #[arg(long, default_value_t = 1e-10)]
        cutoff_tol: f64,
        /// Highest level examined.
        #[arg(long, default_value_t = 8)]
        max_level: usize,
    },
}

#[derive(Args, Debug)]
struct Common {
    /// Perturbation V, e.g. "q", "p^4", "q*p + p*q".
    #[arg(short = 'V', long = "perturbation")]
    perturbation: String,
    /// Highest order M.
    #[arg(short = 'M', long = "order", default_value_t = 2)]
    order: usize,
    /// Keep ħ, m, ω symbolic or set them to one. Symbolic by default,
    /// except for `verify`.
    #[arg(long, value_enum)]
    units: Option<Units>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Units {
    Natural,
    Symbolic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Latex,
    Json,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Parse { source: String, error: ParseError },
    Hermiticity(String),
    Verify(Box<VerifyReport>),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) | Failure::Parse { .. } => EXIT_USAGE,
            Failure::Hermiticity(_) => EXIT_HERMITICITY,
            Failure::Verify(_) => EXIT_VERIFY,
        }
    }

    fn report(&self, json: bool) {
        if json {
            let v = match self {
                Failure::Usage(m) => json!({"error": "usage", "message": m}),
                Failure::Parse { source, error } => {
                    json!({"error": "parse", "input": source, "detail": error.to_json()})
                }
                Failure::Hermiticity(m) => json!({"error": "hermiticity", "message": m}),
                Failure::Verify(r) => json!({
                    "error": "verification",
                    "failures": r.failures().collect::<Vec<_>>(),
                }),
            };
            eprintln!("{v}");
            return;
        }
        match self {
            Failure::Usage(m) => eprintln!("error: {m}"),
            Failure::Parse { source, error } => {
                eprintln!("error: cannot parse `{source}`: {error}");
                eprintln!("  {source}");
                let col = source.get(..error.offset).map_or(0, |s| s.chars().count());
                eprintln!("  {}^", " ".repeat(col));
            }
            Failure::Hermiticity(m) => eprintln!("error: {m}"),
            Failure::Verify(r) => eprintln!("verification failed: {} checks", r.failures().count()),
        }
    }
}

fn parse_expr(src: &str) -> Result<OperatorPoly, Failure> {
    parse_operator(src).map_err(|error| Failure::Parse { source: src.to_string(), error })
}

fn max_order() -> Result<usize, Failure> {
    match std::env::var("LADDERKIT_MAX_ORDER") {
        Ok(s) => s.trim().parse().map_err(|_| Failure::Usage(format!("LADDERKIT_MAX_ORDER is not an integer: `{s}`"))),
        Err(_) => Ok(DEFAULT_MAX_ORDER),
    }
}

fn expansion(common: &Common) -> Result<(OperatorPoly, Expansion), Failure> {
    let limit = max_order()?;
    if common.order > limit {
        return Err(Failure::Usage(format!(
            "order {} exceeds the limit {limit}; raise LADDERKIT_MAX_ORDER to allow it",
            common.order
        )));
    }
    let v = parse_expr(&common.perturbation)?;
    match Expansion::new(&v, common.order) {
        Ok(ex) => Ok((v, ex)),
        Err(PtError::NotHermitian(e)) => Err(Failure::Hermiticity(format!("perturbation `{}`: {e}", common.perturbation))),
        Err(e) => Err(Failure::Usage(e.to_string())),
    }
}

fn emit(report: RunReport, common: &Common, sections: &[Section]) -> Result<String, Failure> {
    let report = if common.units == Some(Units::Natural) { report.naturalized() } else { report };
    Ok(match common.format {
        Format::Text => to_text(&report, sections),
        Format::Latex => to_latex(&report, sections),
        Format::Json => serde_json::to_string_pretty(&report).expect("plain data") + "\n",
    })
}

fn verify_text(r: &VerifyReport) -> String {
    use std::fmt::Write as _;
    let mut out = String::new();
    let _ = writeln!(out, "V = {}  M = {}  D = {}", r.perturbation, r.order, r.cutoff);
    let lambdas: Vec<String> = r.lambdas.iter().map(|l| format!("{l:.3e}")).collect();
    let _ = writeln!(out, "lambda = [{}]", lambdas.join(", "));
    let mut names: Vec<&str> = Vec::new();
    for c in &r.checks {
        if !names.contains(&c.name.as_str()) {
            names.push(&c.name);
        }
    }
    for name in names {
        let group: Vec<_> = r.checks.iter().filter(|c| c.name == name).collect();
        let passed = group.iter().filter(|c| c.pass).count();
        let worst = group.iter().map(|c| c.residual).fold(0.0, f64::max);
        let _ = write!(out, "{:<24} {passed}/{} pass, max residual {worst:.2e}", name, group.len());
        let slopes: Vec<f64> = group.iter().filter_map(|c| c.slope).filter(|s| s.is_finite()).collect();
        if !slopes.is_empty() {
            let lo = slopes.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = slopes.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let _ = write!(out, ", slope {lo:.2}..{hi:.2}");
        }
        out.push('\n');
    }
    for c in r.failures() {
        let _ = writeln!(out, "  FAIL {} level {:?} lambda {:?}: {:.3e}", c.name, c.level, c.lambda, c.residual);
    }
    for s in &r.skipped {
        let _ = writeln!(out, "skipped: {s}");
    }
    if let Some(e) = &r.errata {
        let _ = writeln!(out, "errata:");
        for f in &e.findings {
            if f.mismatches.is_empty() {
                continue;
            }
            let _ = writeln!(out, "  {}: {} terms differ, verdict {:?}", f.key, f.mismatches.len(), f.verdict);
        }
        for c in &e.contests {
            let w = c.winner().map_or("none", |w| w.label.as_str());
            let _ = writeln!(out, "  {}: oracle picks {w}, engine agrees: {}", c.name, c.resolved());
        }
    }
    let _ = writeln!(out, "{}", if r.pass { "PASS" } else { "FAIL" });
    out
}

#[allow(clippy::too_many_arguments)]
fn run_verify(
    common: &Common,
    cutoff: Option<usize>,
    lambdas: &[f64],
    tol: f64,
    cutoff_tol: f64,
    max_level: usize,
) -> Result<String, Failure> {
    if common.format == Format::Latex {
        return Err(Failure::Usage("verify reports are text or json".into()));
    }
    let (v, _) = expansion(common)?;
    let minimum = 4 * common.order * v.degree() as usize + 8;
    let cutoff = match cutoff {
        Some(d) if d < minimum => {
            return Err(Failure::Usage(format!(
                "cutoff margin violated: D = {d} but order {} with deg V = {} needs D ≥ {minimum}",
                common.order,
                v.degree()
            )))
        }
        Some(d) => d,
        None => {
            let d = minimum.max(64);
            if d > 64 {
                eprintln!("warning: cutoff raised to {d} for order {} and deg V = {}", common.order, v.degree());
            }
            d
        }
    };
    if lambdas.iter().any(|l| !(l.is_finite() && *l >= 0.0)) {
        return Err(Failure::Usage("couplings must be finite and non-negative".into()));
    }
    let units = if common.units == Some(Units::Symbolic) {
        ladderkit::errata::ORACLE_UNITS
    } else {
        UnitValues::NATURAL
    };
    let cfg = VerifyConfig {
        cutoff,
        order: common.order,
        lambdas: if lambdas.is_empty() { LAMBDAS.to_vec() } else { lambdas.to_vec() },
        units,
        tol,
        cutoff_tol,
        max_level,
        relative_lambdas: lambdas.is_empty(),
    };
    let report = verify(&v, &cfg).map_err(|e| match e {
        VerifyError::Pt(PtError::NotHermitian(h)) => Failure::Hermiticity(h.to_string()),
        e => Failure::Usage(e.to_string()),
    })?;
    let text = match common.format {
        Format::Json => serde_json::to_string_pretty(&report).expect("plain data") + "\n",
        _ => verify_text(&report),
    };
    if report.pass {
        Ok(text)
    } else {
        print!("{text}");
        Err(Failure::Verify(Box::new(report)))
    }
}

fn run(cli: &Cli) -> Result<String, Failure> {
    match &cli.command {
        Command::Correct(common) => {
            let (_, ex) = expansion(common)?;
            emit(RunReport::from_expansion(&ex, &[]), common, &[Section::Alphas, Section::AlphaDaggers, Section::Nus])
        }
        Command::Spectrum { common, levels, lambdas } => {
            let (_, ex) = expansion(common)?;
            let report = RunReport::from_expansion(&ex, &[]).with_levels(&ex, levels, lambdas);
            emit(report, common, &[Section::Epsilons])
        }
        Command::Expect { common, observables } => {
            let (_, ex) = expansion(common)?;
            let obs = observables
                .iter()
                .map(|s| Ok((s.clone(), parse_expr(s)?)))
                .collect::<Result<Vec<_>, Failure>>()?;
            emit(RunReport::from_expansion(&ex, &obs), common, &[Section::Expectations, Section::Norms])
        }
        Command::Verify { common, cutoff, lambdas, tol, cutoff_tol, max_level } => {
            run_verify(common, *cutoff, lambdas, *tol, *cutoff_tol, *max_level)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            f.report(cli.json_diagnostics);
            ExitCode::from(f.code())
        }
    }
}
