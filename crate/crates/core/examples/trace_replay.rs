//! Generate a trace, round-trip it through text, and replay it with every algorithm.

use dsssp::numeric::Epsilon;
use dsssp::replay::{replay, Algo, ReplayOptions};
use dsssp::trace::{generate, GenParams, TraceKind, UpdateTrace};

fn main() -> Result<(), dsssp::error::Error> {
    let trace = generate(&GenParams::new(TraceKind::PathPlusCliques, 30, 90, 16, 1))?;
    let text = trace.to_text();
    let trace = UpdateTrace::parse(&text)?;
    println!("{} initial edges, {} operations", trace.edges.len(), trace.ops.len());

    for algo in [Algo::DijkstraNaive, Algo::EsExact, Algo::WsesLayered] {
        let opts = ReplayOptions {
            algo,
            epsilon: Epsilon::new(1, 5)?,
            verify: true,
            source: 0,
        };
        let report = replay(&trace, &opts)?;
        println!(
            "{algo}: {} queries, max ratio {:?}, ok {}",
            report.rows.len(),
            report.max_ratio(),
            report.ok()
        );
    }
    let report = replay(&trace, &ReplayOptions { algo: Algo::WsesLayered, epsilon: Epsilon::new(1, 5)?, verify: true, source: 0 })?;
    print!("{}", report.counters_csv());
    Ok(())
}
