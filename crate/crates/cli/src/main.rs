//! `basketchef`: inspect a recipe corpus, replay shopping sessions and serve
//! the HTTP API.
//!
//! Exit codes: 0 success, 1 invalid corpus or script, 2 usage error, 3 I/O error.

use std::fmt::Display;
use std::io::{self, Write};
use std::net::{IpAddr, SocketAddr};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use basketchef_core::replay::{replay, ReplayScript};
use basketchef_core::report;
use basketchef_core::session::ConfigOverrides;
use basketchef_core::{CorpusError, Engine, SessionConfig};
use basketchef_service::AppState;

#[derive(Debug, Parser)]
#[command(name = "basketchef", version, about = "Session-based grocery recommendations from a recipe corpus")]
struct Cli {
    /// Corpus JSON file. The bundled rice and chicken corpus is used when absent.
    #[arg(long, global = true, env = "BASKETCHEF_CORPUS")]
    corpus: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a corpus file and print a summary.
    Validate,
    /// Identifier sets of every category as CSV.
    Identifiers {
        #[arg(long, default_value_t = 5)]
        k: usize,
        #[arg(long, default_value_t = 1)]
        h: usize,
    },
    /// Top differentiators of each subcategory of one category as CSV.
    Differentiators {
        #[arg(long)]
        category: String,
        #[arg(long, default_value_t = 10)]
        top: usize,
    },
    /// Minimum number of top-ranked items needed to reach each threshold.
    ThresholdTable {
        #[arg(long = "n", value_delimiter = ',', default_values_t = (1..=10).map(f64::from))]
        ns: Vec<f64>,
        #[arg(long = "theta", value_delimiter = ',', default_values_t = (1..=7).map(f64::from))]
        thetas: Vec<f64>,
    },
    /// Score increment per rank for one or more values of n.
    ScoreCurve {
        #[arg(long = "n", value_delimiter = ',', default_values_t = [1.0, 2.0, 3.0, 5.0, 10.0])]
        ns: Vec<f64>,
        #[arg(long, default_value_t = 50)]
        max_rank: u32,
    },
    /// Run a session script and print the JSON transcript.
    Replay {
        script: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Serve the HTTP JSON API.
    Serve {
        #[arg(long, env = "BASKETCHEF_PORT", default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: IpAddr,
        /// Minutes of inactivity before a session is dropped.
        #[arg(long, default_value_t = 30)]
        idle_minutes: u64,
        #[command(flatten)]
        overrides: Overrides,
    },
}

/// Session parameters; unset values keep their defaults.
#[derive(Debug, Args)]
struct Overrides {
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    h: Option<usize>,
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    n: Option<f64>,
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long)]
    top_n: Option<usize>,
}

impl Overrides {
    fn config(&self) -> Result<SessionConfig, Failure> {
        let o = ConfigOverrides { k: self.k, h: self.h, q: self.q, n: self.n, theta: self.theta, top_n: self.top_n };
        SessionConfig::default().with_overrides(&o).map_err(|e| Failure::Usage(e.to_string()))
    }
}

enum Failure {
    Invalid(String),
    Usage(String),
    Io(String),
}

impl Failure {
    fn io(context: impl Display, err: impl Display) -> Self {
        Failure::Io(format!("{context}: {err}"))
    }
}

fn load(path: &Option<PathBuf>) -> Result<Arc<Engine>, Failure> {
    let Some(path) = path else { return Ok(Engine::bundled()) };
    Engine::open(path).map(Arc::new).map_err(|e| match e {
        basketchef_core::LoadError::Corpus(CorpusError::Io(err)) => Failure::io(path.display(), err),
        other => Failure::Invalid(format!("{}: {other}", path.display())),
    })
}

fn csv_out(result: Result<(), impl Display>) -> Result<(), Failure> {
    result.map_err(|e| Failure::io("writing output", e))
}

fn run(cli: Cli) -> Result<(), Failure> {
    let stdout = io::stdout();
    match cli.command {
        Command::Validate => {
            let engine = load(&cli.corpus)?;
            let corpus = engine.corpus();
            let mut out = stdout.lock();
            let mut line = |text: String| writeln!(out, "{text}").map_err(|e| Failure::io("writing output", e));
            line(format!(
                "ok: {} categories, {} recipes, {} distinct items",
                corpus.categories().len(),
                corpus.recipe_count(),
                corpus.vocabulary().len()
            ))?;
            for cat in corpus.categories() {
                let subs: Vec<String> =
                    cat.subcategories.iter().map(|s| format!("{} ({} recipes)", s.name, s.recipe_count())).collect();
                line(format!("  {}: {}", cat.name, subs.join(", ")))?;
            }
            for warning in corpus.warnings() {
                eprintln!("warning: {warning}");
            }
            Ok(())
        }
        Command::Identifiers { k, h } => {
            let engine = load(&cli.corpus)?;
            csv_out(report::write_identifiers(&engine, k, h, stdout.lock()))
        }
        Command::Differentiators { category, top } => {
            let engine = load(&cli.corpus)?;
            let id = engine.corpus().category_id(&category).ok_or_else(|| {
                let known: Vec<&str> = engine.corpus().categories().iter().map(|c| c.name.as_str()).collect();
                Failure::Usage(format!("unknown category {category:?} (known: {})", known.join(", ")))
            })?;
            csv_out(report::write_differentiators(&engine, id, top, stdout.lock()))
        }
        Command::ThresholdTable { ns, thetas } => {
            if let Some(bad) = ns.iter().find(|n| !(n.is_finite() && **n >= 1.0)) {
                return Err(Failure::Usage(format!("n must be a finite number of at least 1, got {bad}")));
            }
            if let Some(bad) = thetas.iter().find(|t| !(t.is_finite() && **t > 0.0)) {
                return Err(Failure::Usage(format!("theta must be a finite number greater than 0, got {bad}")));
            }
            csv_out(report::write_threshold_table(&ns, &thetas, stdout.lock()))
        }
        Command::ScoreCurve { ns, max_rank } => {
            if let Some(bad) = ns.iter().find(|n| !(n.is_finite() && **n >= 1.0)) {
                return Err(Failure::Usage(format!("n must be a finite number of at least 1, got {bad}")));
            }
            csv_out(report::write_score_curve(&ns, max_rank, stdout.lock()))
        }
        Command::Replay { script, overrides } => {
            let config = overrides.config()?;
            let engine = load(&cli.corpus)?;
            let text = std::fs::read_to_string(&script).map_err(|e| Failure::io(script.display(), e))?;
            let parsed = ReplayScript::parse(&text, engine.corpus())
                .map_err(|e| Failure::Invalid(format!("{}:{}: {}", script.display(), e.line, e.message)))?;
            let transcript = replay(engine, config, &parsed).map_err(|e| Failure::Usage(e.to_string()))?;
            stdout.lock().write_all(transcript.to_json().as_bytes()).map_err(|e| Failure::io("writing output", e))
        }
        Command::Serve { port, host, idle_minutes, overrides } => {
            let config = overrides.config()?;
            let engine = load(&cli.corpus)?;
            let state = AppState::new(engine, config).with_idle_timeout(Duration::from_secs(idle_minutes * 60));
            let addr = SocketAddr::new(host, port);
            basketchef_service::serve(state, addr, |bound| eprintln!("listening on http://{bound}")).map_err(|e| {
                if e.kind() == io::ErrorKind::AddrInUse {
                    Failure::Io(format!("port {port} on {host} is already in use"))
                } else {
                    Failure::io(format!("cannot serve on {addr}"), e)
                }
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            let (code, message) = match failure {
                Failure::Invalid(m) => (1, m),
                Failure::Usage(m) => (2, m),
                Failure::Io(m) => (3, m),
            };
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
