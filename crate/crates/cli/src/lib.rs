//! Command-line frontend for the Newton stratum decision engine.
//!
//! Four subcommands: `check` decides a single stratum query, `enumerate`
//! lists every nonempty stratum under a fixed `(b, μ)`, `plot` renders
//! polygons to SVG, and `selftest` replays the property corpus at a chosen
//! scale. Exit codes: 0 for a positive decision (or success), 1 for a
//! negative decision (or a failed self-test), 2 for input errors.

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use newton_strata::strata::{
    basic_stratum_nonempty, explicit_criterion, reduce_to_standard, stratum_nonempty,
    StratumQuery,
};
use newton_strata::Engine;

mod literal;
mod report;
mod selftest;
mod svg;

pub use literal::{parse_cocharacter, parse_polygon};

#[derive(Parser)]
#[command(
    name = "newton-strata",
    version,
    about = "Decides nonemptiness of Newton strata in minuscule Schubert cells for GL_n"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Emit JSON instead of text where both exist.
    #[arg(long, global = true)]
    json: bool,
    /// Attach the certificate to a positive `check` report.
    #[arg(long, global = true)]
    witness: bool,
    /// Attach certificates to `enumerate` output.
    #[arg(long, global = true)]
    certificates: bool,
    /// Write output to a file instead of stdout. Required for `plot`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Decide one stratum query.
    Check {
        /// Polygon of b, e.g. "2/3^3,3/5^5".
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        /// Cocharacter: "min:<n>:<d>", a tuple "2,2,1,1", or runs "1^4,0^4".
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
        /// Polygon of b'.
        #[arg(long, allow_hyphen_values = true)]
        bprime: String,
        /// Decision procedure to run.
        #[arg(long, value_enum, default_value_t = EngineChoice::Inductive)]
        engine: EngineChoice,
    },
    /// List all b' with a nonempty stratum under the given b and mu.
    Enumerate {
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
    },
    /// Render polygons to an SVG figure.
    Plot {
        /// Repeatable: "literal", "literal:label", or "literal:label:color".
        #[arg(long = "polygons", required = true, allow_hyphen_values = true)]
        polygons: Vec<String>,
    },
    /// Replay the property corpus at a bounded scale.
    Selftest {
        #[arg(long, default_value_t = 4)]
        max_rank: usize,
        #[arg(long, default_value_t = 3)]
        max_denominator: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineChoice {
    /// The general recursive procedure; the only one that yields certificates.
    Inductive,
    /// Closed-form criterion; requires all slope gaps of b to exceed 1.
    Explicit,
    /// Single Bruhat inequality; requires semistable b, allows any dominant mu.
    Basic,
}

impl EngineChoice {
    fn name(self) -> &'static str {
        match self {
            EngineChoice::Inductive => "inductive",
            EngineChoice::Explicit => "explicit",
            EngineChoice::Basic => "basic",
        }
    }
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            2
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32, String> {
    match cli.command {
        Command::Check { ref b, ref mu, ref bprime, engine } => {
            cmd_check(&cli, b, mu, bprime, engine)
        }
        Command::Enumerate { ref b, ref mu } => cmd_enumerate(&cli, b, mu),
        Command::Plot { ref polygons } => cmd_plot(&cli, polygons),
        Command::Selftest { max_rank, max_denominator } => {
            cmd_selftest(max_rank, max_denominator)
        }
    }
}

fn cmd_check(
    cli: &Cli,
    b: &str,
    mu: &str,
    bprime: &str,
    engine: EngineChoice,
) -> Result<i32, String> {
    let b = parse_polygon(b).map_err(|e| format!("--b: {e}"))?;
    let mu = parse_cocharacter(mu).map_err(|e| format!("--mu: {e}"))?;
    let bprime = parse_polygon(bprime).map_err(|e| format!("--bprime: {e}"))?;
    let query = StratumQuery::new(b, mu, bprime).map_err(|e| e.to_string())?;
    let started = Instant::now();
    let (decision, certificate) = match engine {
        EngineChoice::Inductive => {
            let cert = stratum_nonempty(&query).map_err(|e| e.to_string())?;
            (cert.is_some(), cert)
        }
        EngineChoice::Explicit => {
            let (standard, mq) = reduce_to_standard(&query)
                .ok_or_else(|| format!("cocharacter {} is not minuscule", query.mu()))?;
            let decision = mq.degree() == standard.degree()
                && explicit_criterion(&mq).map_err(|e| e.to_string())?;
            (decision, None)
        }
        EngineChoice::Basic => {
            let decision = basic_stratum_nonempty(query.b(), query.mu(), query.b_prime())
                .map_err(|e| e.to_string())?;
            (decision, None)
        }
    };
    let ms = started.elapsed().as_millis() as u64;
    let report = report::QueryReport {
        decision,
        certificate: if cli.witness { certificate } else { None },
        b: query.b().to_string(),
        mu: query.mu().to_string(),
        b_prime: query.b_prime().to_string(),
        engine: engine.name(),
        ms,
    };
    let rendered = if cli.json { report.to_json().to_string() } else { report.to_text() };
    emit(cli, &rendered)?;
    Ok(if decision { 0 } else { 1 })
}

fn cmd_enumerate(cli: &Cli, b: &str, mu: &str) -> Result<i32, String> {
    let b = parse_polygon(b).map_err(|e| format!("--b: {e}"))?;
    let mu = parse_cocharacter(mu).map_err(|e| format!("--mu: {e}"))?;
    if b.rank() != mu.rank() {
        return Err(format!("ranks differ: {} vs {}", b.rank(), mu.rank()));
    }
    let Some((shift, standard)) = mu.minuscule_decomposition() else {
        return Err(format!("cocharacter {mu} is not minuscule"));
    };
    let engine = Engine::new();
    let rows = engine.enumerate_nonempty_strata(&b, standard).map_err(|e| e.to_string())?;
    // The enumeration works in the standard form where b' is twisted up by
    // the central shift; undo it for output. Certificates stay attached to
    // the standard-form modification.
    let value = if cli.certificates {
        serde_json::Value::Array(
            rows.iter()
                .map(|(p, cert)| {
                    serde_json::json!({
                        "b_prime": p.shift(-shift).to_string(),
                        "certificate": report::certificate_to_json(cert),
                    })
                })
                .collect(),
        )
    } else {
        serde_json::Value::Array(
            rows.iter()
                .map(|(p, _)| serde_json::Value::String(p.shift(-shift).to_string()))
                .collect(),
        )
    };
    emit(cli, &value.to_string())?;
    Ok(0)
}

fn cmd_plot(cli: &Cli, specs: &[String]) -> Result<i32, String> {
    let mut polygons = Vec::new();
    for spec in specs {
        polygons.push(svg::parse_plot_spec(spec)?);
    }
    let rendered = svg::render(&polygons);
    let Some(path) = &cli.out else {
        return Err("plot requires --out <path>".to_string());
    };
    std::fs::write(path, rendered).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(0)
}

fn cmd_selftest(max_rank: usize, max_denominator: usize) -> Result<i32, String> {
    if max_rank == 0 {
        return Err("--max-rank must be at least 1".to_string());
    }
    if max_denominator == 0 {
        return Err("--max-denominator must be at least 1".to_string());
    }
    let outcome = selftest::run(max_rank, max_denominator);
    let mut total = 0usize;
    for (name, count) in &outcome.sections {
        print_line(&format!("{name}: {count} checks"))?;
        total += count;
    }
    print_line(&format!("total: {total} checks"))?;
    if outcome.failures.is_empty() {
        print_line("selftest passed")?;
        Ok(0)
    } else {
        for failure in &outcome.failures {
            print_line(&format!("FAIL {failure}"))?;
        }
        Ok(1)
    }
}

fn emit(cli: &Cli, rendered: &str) -> Result<(), String> {
    match &cli.out {
        Some(path) => {
            let mut file = std::fs::File::create(path)
                .map_err(|e| format!("{}: {e}", path.display()))?;
            writeln!(file, "{rendered}").map_err(|e| format!("{}: {e}", path.display()))
        }
        None => print_line(rendered),
    }
}

/// Write one line to stdout. A consumer that closed the pipe early (e.g.
/// `newton-strata ... | head`) silences further output but is not an error;
/// the decision exit code still stands.
fn print_line(text: &str) -> Result<(), String> {
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{text}") {
        Ok(()) => Ok(()),
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        Err(e) => Err(format!("stdout: {e}")),
    }
}
