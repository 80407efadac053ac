//! The full layered approximate SSSP structure on a generated trace.

use dsssp::driver::LayeredSssp;
use dsssp::graph::UpdateEvent;
use dsssp::numeric::Epsilon;
use dsssp::oracle::dijkstra_graph;
use dsssp::trace::{generate, GenParams, TraceKind};

fn main() -> Result<(), dsssp::error::Error> {
    let trace = generate(&GenParams::new(TraceKind::UniformRandom, 40, 120, 32, 3))?;
    let eps = Epsilon::new(1, 5)?;
    let mut sys = LayeredSssp::new(trace.initial_graph()?, 0, eps, trace.max_weight())?;
    println!("{} layers", sys.layers().len());

    let mut worst: f64 = 1.0;
    for ev in trace.events()? {
        if let Some(answer) = sys.apply(&ev)? {
            let UpdateEvent::QueryDistance(v) = ev else { unreachable!() };
            let exact = dijkstra_graph(sys.graph(), 0)[v];
            if exact.is_finite() && exact > 0.0 {
                worst = worst.max(answer / exact);
            }
            println!("query {v}: {answer:.3} (exact {exact})");
        }
    }
    println!("worst ratio {worst:.3}, allowed {:.3}", 1.0 + 30.0 * eps.to_f64());
    println!("notifications {}", sys.total_notifications());
    Ok(())
}
