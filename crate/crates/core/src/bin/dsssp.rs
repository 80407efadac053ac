use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use dsssp::numeric::Epsilon;
use dsssp::replay::{replay, Algo, ReplayOptions};
use dsssp::trace::{generate, GenParams, TraceKind, UpdateTrace};

#[derive(Parser)]
#[command(name = "dsssp", version, about = "Decremental single-source shortest paths toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a generated update trace to stdout or a file.
    Generate {
        /// uniform-random, heavy-dense, or path-plus-cliques
        #[arg(long, default_value = "uniform-random")]
        kind: TraceKind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Maximum weight (ignored by heavy-dense, which uses ceil(sqrt n))
        #[arg(long = "w", default_value_t = 16)]
        w_max: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of deletions; defaults to m
        #[arg(long)]
        deletions: Option<usize>,
        /// Insert a query after every k updates (0 for none)
        #[arg(long, default_value_t = 5)]
        query_every: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replay a trace and report query answers.
    Replay {
        #[arg(long)]
        trace: PathBuf,
        /// dijkstra-naive, es-exact, or wses-layered
        #[arg(long, default_value = "wses-layered")]
        algo: Algo,
        /// Rational `p/q` or decimal in (0, 1)
        #[arg(long, default_value = "1/5")]
        epsilon: Epsilon,
        /// Compare every query with Dijkstra
        #[arg(long)]
        verify: bool,
        /// Query CSV path; counters go to `<stem>.counters.csv` beside it
        #[arg(long)]
        stats: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        source: usize,
        /// Accepted for symmetry with `generate`; replay is deterministic
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn counters_path(stats: &Path) -> PathBuf {
    let stem = stats.file_stem().and_then(|s| s.to_str()).unwrap_or("stats");
    stats.with_file_name(format!("{stem}.counters.csv"))
}

fn run(cli: Cli) -> Result<bool, Box<dyn std::error::Error>> {
    match cli.cmd {
        Cmd::Generate {
            kind,
            n,
            m,
            w_max,
            seed,
            deletions,
            query_every,
            out,
        } => {
            let params = GenParams {
                deletions: deletions.unwrap_or(m),
                query_every,
                ..GenParams::new(kind, n, m, w_max, seed)
            };
            let text = generate(&params)?.to_text();
            match out {
                Some(path) => std::fs::write(path, text)?,
                None => print!("{text}"),
            }
            Ok(true)
        }
        Cmd::Replay {
            trace,
            algo,
            epsilon,
            verify,
            stats,
            source,
            seed: _,
        } => {
            let trace = UpdateTrace::parse(&std::fs::read_to_string(&trace)?)?;
            let report = replay(&trace, &ReplayOptions { algo, epsilon, verify, source })?;
            if let Some(path) = stats {
                std::fs::write(&path, report.queries_csv())?;
                std::fs::write(counters_path(&path), report.counters_csv())?;
            }
            println!("algo {} epsilon {} queries {}", report.algo, report.epsilon, report.rows.len());
            if verify {
                match report.max_ratio() {
                    Some(r) => println!("max ratio {r}"),
                    None => println!("max ratio n/a"),
                }
            }
            for (phase, t) in &report.timings {
                eprintln!("{phase}: {:.3} ms", t.as_secs_f64() * 1e3);
            }
            for v in &report.violations {
                eprintln!("{v}");
            }
            println!("violations {}", report.violations.len());
            Ok(report.ok())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
