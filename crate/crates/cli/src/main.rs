use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use ttlab_core::closed_forms::{self, AomotoKind};
use ttlab_core::combinatorics::{self, ClassId, ClassSpec};
use ttlab_core::painleve::{self, OdeSpec, Target};
use ttlab_core::report::ReportBundle;
use ttlab_core::scalar::parse_rational;
use ttlab_core::suites::{self, ReportFormat, SuiteConfig};
use ttlab_core::tau::{self, Deformation, Group, WeightSpec};
use ttlab_core::VariableTable;

#[derive(Parser)]
#[command(name = "ttlab", version, about = "Exact checks for Toeplitz/Hankel tau functions")]
struct Cli {
    /// Series order D (defaults depend on the command)
    #[arg(long, global = true)]
    order: Option<u32>,
    /// First seed for randomized probes
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// json, csv or text
    #[arg(long, global = true, default_value = "text")]
    format: String,
    /// Write output to this file instead of stdout
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a verification suite; exit code 0 iff every check passes
    Verify(VerifyArgs),
    /// Print the normalized τ_n series of a weight
    Tau(TauArgs),
    /// Brute-force count of a combinatorial class
    Count(CountArgs),
    /// Painlevé series and residuals
    Painleve {
        #[command(subcommand)]
        cmd: PainleveCmd,
    },
    /// Closed-form volumes and moments
    Closedform {
        #[command(subcommand)]
        cmd: ClosedCmd,
    },
    /// Bessel-determinant g against the integrated equation
    Numeric(NumericArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name, or `all`
    suite: String,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    ell: Option<u32>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long = "nmax")]
    n_max: Option<u32>,
    /// Worker threads (default: TTLAB_THREADS or all cores)
    #[arg(long)]
    threads: Option<usize>,
    /// Record per-case runtimes
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct TauArgs {
    /// circle or jacobi
    #[arg(long, default_value = "circle")]
    model: String,
    /// Exponent of (1+z)^k for the circle
    #[arg(long, default_value_t = 0)]
    k: u32,
    #[arg(long, default_value = "0")]
    alpha: String,
    #[arg(long, default_value = "0")]
    beta: String,
    #[arg(long)]
    n: usize,
    /// Number of times t_1..t_m (and s_1..s_m for the circle)
    #[arg(long, default_value_t = 2)]
    times: usize,
}

#[derive(Args)]
struct CountArgs {
    /// perm, word, involution, fp_free_involution, iota_involution, ...
    #[arg(long)]
    class: String,
    #[arg(long)]
    n: u32,
    #[arg(long)]
    ell: u32,
    /// Alphabet size for words
    #[arg(long)]
    k: Option<u32>,
    /// Print the full LIS histogram instead
    #[arg(long)]
    histogram: bool,
}

#[derive(Args, Clone)]
struct TargetArgs {
    /// f-orth, g-unitary, h-words, h-jacobi, h-tilde or f-recursive
    #[arg(long)]
    target: String,
    #[arg(long, default_value_t = 2)]
    ell: u32,
    #[arg(long, default_value_t = 2)]
    k: u32,
    /// + or - (group sign, or exponent sign for words)
    #[arg(long, default_value = "+", allow_hyphen_values = true)]
    sign: String,
    #[arg(long, default_value_t = 1)]
    n: u32,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    alpha: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    beta: String,
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    scale: i64,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    c: String,
}

#[derive(Subcommand)]
enum PainleveCmd {
    /// Print a log-derivative series
    Series(TargetArgs),
    /// Substitute a series into an equation
    Residual {
        #[command(flatten)]
        target: TargetArgs,
        /// orthogonal, unitary, words, words-chain, jacobi, jacobi-rescaled or first-integral
        #[arg(long)]
        ode: String,
    },
    /// Floating-point check of the unitary equation
    Crosscheck(NumericArgs),
}

#[derive(Subcommand)]
enum ClosedCmd {
    /// Volume of an orthogonal group, e.g. "O(5)+"
    Volume {
        #[arg(long)]
        group: String,
    },
    /// Jacobi-ensemble moment in terms of a = α+β, b = α−β
    Aomoto {
        /// y1, y1y2, y1sq, gamma_n or H_prime_zero
        #[arg(long)]
        kind: String,
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
}

#[derive(Args, Clone)]
struct NumericArgs {
    #[arg(long, default_value_t = 2)]
    ell: u32,
    #[arg(long, default_value_t = 0.01)]
    x0: f64,
    #[arg(long = "xmax", default_value_t = 1.0)]
    x_max: f64,
    #[arg(long, default_value_t = 1e-4)]
    step: f64,
}

fn rational(s: &str) -> Result<num_rational::BigRational> {
    Ok(parse_rational(s)?)
}

fn plus_sign(s: &str) -> Result<bool> {
    match s {
        "+" | "plus" | "1" | "+1" => Ok(true),
        "-" | "minus" | "-1" => Ok(false),
        _ => bail!("sign must be + or -, got `{s}`"),
    }
}

/// A flat key/value result rendered in any of the three formats.
fn render_record(rec: &Map<String, Value>, format: ReportFormat) -> Result<String> {
    let plain = |v: &Value| match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    Ok(match format {
        ReportFormat::Json => serde_json::to_string_pretty(rec)? + "\n",
        ReportFormat::Text => rec.iter().map(|(k, v)| format!("{k}: {}\n", plain(v))).collect(),
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(rec.keys())?;
            w.write_record(rec.values().map(plain))?;
            String::from_utf8(w.into_inner()?)?
        }
    })
}

fn render_bundle(b: &ReportBundle, format: ReportFormat) -> Result<String> {
    Ok(match format {
        ReportFormat::Json => b.to_json() + "\n",
        ReportFormat::Text => b.to_text(),
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(ReportBundle::CSV_HEADER)?;
            for row in b.csv_rows() {
                w.write_record(&row)?;
            }
            String::from_utf8(w.into_inner()?)?
        }
    })
}

fn emit(text: &str, path: &Option<PathBuf>) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn record(pairs: Vec<(&str, Value)>) -> Map<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn target_of(t: &TargetArgs) -> Result<Target> {
    Ok(match t.target.as_str() {
        "f-orth" => Target::FOrth { ell: t.ell, plus: plus_sign(&t.sign)? },
        "g-unitary" => Target::GUnitary { ell: t.ell },
        "h-words" => Target::HWords { ell: t.ell, k: t.k, sigma: if plus_sign(&t.sign)? { 1 } else { -1 } },
        "h-jacobi" => Target::HJacobi { n: t.n, alpha: rational(&t.alpha)?, beta: rational(&t.beta)?, scale: t.scale },
        "h-tilde" => Target::HTilde { n: t.n, alpha: rational(&t.alpha)?, beta: rational(&t.beta)?, c: rational(&t.c)? },
        other => bail!("unknown target `{other}`"),
    })
}

fn target_series(t: &TargetArgs, order: u32) -> Result<ttlab_core::WeightedSeries> {
    if t.target == "f-recursive" {
        return Ok(painleve::f_series_recursive(t.ell, plus_sign(&t.sign)?, order)?);
    }
    Ok(painleve::tau_log_derivative(&target_of(t)?, order)?)
}

fn ode_of(name: &str, t: &TargetArgs) -> Result<OdeSpec> {
    Ok(match name {
        "orthogonal" => OdeSpec::Orthogonal { ell: t.ell },
        "unitary" => OdeSpec::Unitary { ell: t.ell },
        "words" => OdeSpec::Words { ell: t.ell, k: t.k },
        "words-chain" => OdeSpec::WordsChain { n: t.ell, k: t.k },
        "jacobi" | "jacobi-rescaled" => {
            let (alpha, beta) = (rational(&t.alpha)?, rational(&t.beta)?);
            let (a, b) = (&alpha + &beta, &alpha - &beta);
            if name == "jacobi" {
                OdeSpec::Jacobi { n: t.n, a, b }
            } else {
                OdeSpec::JacobiRescaled { n: t.n, a, b, c: rational(&t.c)? }
            }
        }
        "first-integral" => OdeSpec::Cosgrove { ell: t.ell, c: rational(&t.c)? },
        other => bail!("unknown equation `{other}`"),
    })
}

fn crosscheck(a: &NumericArgs) -> Result<Map<String, Value>> {
    let c = painleve::numeric_crosscheck_full(a.ell, a.x0, a.x_max, a.step)?;
    Ok(record(vec![
        ("ell", json!(c.ell)),
        ("steps", json!(c.steps)),
        ("max_deviation", json!(c.deviation)),
        ("halving_change", json!(c.halving_change)),
    ]))
}

fn run(cli: Cli) -> Result<bool> {
    let format = ReportFormat::parse(&cli.format)?;
    let out = |rec: Map<String, Value>| -> Result<bool> {
        emit(&render_record(&rec, format)?, &cli.report)?;
        Ok(true)
    };
    match &cli.cmd {
        Cmd::Verify(v) => {
            let mut config = SuiteConfig::new(&v.suite);
            config.n = v.n;
            config.ell = v.ell;
            config.k = v.k;
            config.order = cli.order;
            config.n_max = v.n_max;
            config.seed = cli.seed;
            config.output = cli.report.clone();
            config.format = format;
            config.threads = v.threads;
            config.timings = v.timings;
            let bundle = suites::run_suite(&config)?;
            emit(&render_bundle(&bundle, format)?, &cli.report)?;
            if cli.report.is_some() {
                eprintln!("{} passed / {} failed", bundle.passed(), bundle.failed());
            }
            Ok(bundle.all_passed())
        }
        Cmd::Tau(t) => {
            let order = cli.order.unwrap_or(6);
            let (spec, table) = match t.model.as_str() {
                "circle" => (WeightSpec::Circle { k: t.k }, VariableTable::two_times(t.times)),
                "jacobi" => (WeightSpec::jacobi(rational(&t.alpha)?, rational(&t.beta)?)?, VariableTable::times(t.times)),
                other => bail!("unknown model `{other}`"),
            };
            let ts = tau::tau(&spec, t.n, &Deformation::standard(&table, order))?;
            let text = match format {
                ReportFormat::Json => serde_json::to_string_pretty(&ts.to_json())? + "\n",
                ReportFormat::Text => format!("{} * ({})\n", ts.normalization, ts.series),
                ReportFormat::Csv => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    w.write_record(["monomial", "numerator", "denominator", "pi_power"])?;
                    for term in ts.to_json().terms {
                        let mono: Vec<String> = term.exponents.iter().map(|(v, e)| format!("{v}^{e}")).collect();
                        w.write_record([mono.join("*"), term.numerator, term.denominator, term.pi_power.to_string()])?;
                    }
                    String::from_utf8(w.into_inner()?)?
                }
            };
            emit(&text, &cli.report)?;
            Ok(true)
        }
        Cmd::Count(c) => {
            let class = ClassId::parse(&c.class, c.k)?;
            if c.histogram {
                let h = combinatorics::lis_histogram(class, c.n, combinatorics::DEFAULT_BUDGET)?;
                let mut rec = record(vec![("class", json!(class.name())), ("n", json!(c.n))]);
                for (l, v) in h.iter().enumerate() {
                    rec.insert(format!("lis{l}"), json!(v));
                }
                return out(rec);
            }
            let count = combinatorics::count_class(&ClassSpec { class, n: c.n, ell: c.ell })?;
            out(record(vec![
                ("class", json!(class.name())),
                ("n", json!(c.n)),
                ("ell", json!(c.ell)),
                ("count", json!(count)),
            ]))
        }
        Cmd::Painleve { cmd } => {
            let order = cli.order.unwrap_or(12);
            match cmd {
                PainleveCmd::Series(t) => {
                    let s = target_series(t, order)?;
                    out(record(vec![
                        ("target", json!(t.target)),
                        ("order", json!(s.order())),
                        ("series", json!(s.to_string())),
                    ]))
                }
                PainleveCmd::Residual { target, ode } => {
                    let s = target_series(target, order)?;
                    let spec = ode_of(ode, target)?;
                    let r = painleve::ode_residual(&spec, &s)?;
                    out(record(vec![
                        ("target", json!(target.target)),
                        ("equation", json!(spec.label())),
                        ("zero", json!(r.is_zero())),
                        ("order", json!(r.order())),
                        ("residual", json!(r.to_string())),
                    ]))
                }
                PainleveCmd::Crosscheck(a) => out(crosscheck(a)?),
            }
        }
        Cmd::Closedform { cmd } => match cmd {
            ClosedCmd::Volume { group } => {
                let g = Group::parse(group)?;
                let v = closed_forms::selberg_volume(g)?;
                let h = closed_forms::hankel_volume(g)?;
                out(record(vec![
                    ("group", json!(v.group)),
                    ("volume", json!(v.value.to_string())),
                    ("approx", json!(v.value.to_f64())),
                    ("determinant_agrees", json!(v.value == h)),
                ]))
            }
            ClosedCmd::Aomoto { kind, n, a, b } => {
                let kind = AomotoKind::parse(kind)?;
                let (a, b) = (rational(a)?, rational(b)?);
                let v = closed_forms::aomoto(kind, *n, &a, &b)?;
                let d = closed_forms::aomoto_from_determinant(kind, *n, &a, &b).ok();
                out(record(vec![
                    ("kind", json!(format!("{kind:?}"))),
                    ("n", json!(n)),
                    ("value", json!(v.to_string())),
                    ("determinant_agrees", json!(d.map(|d| d == v))),
                ]))
            }
        },
        Cmd::Numeric(a) => out(crosscheck(a)?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
