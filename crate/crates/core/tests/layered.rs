use dsssp::driver::LayeredSssp;
use dsssp::graph::{DynamicGraph, UpdateEvent};
use dsssp::numeric::Epsilon;
use dsssp::oracle::dijkstra_graph;
use dsssp::trace::{generate, GenParams, TraceKind};

fn audit(sys: &LayeredSssp, eps: f64) {
    let dist = dijkstra_graph(sys.graph(), sys.source());
    for (v, &d) in dist.iter().enumerate() {
        let a = sys.query(v);
        if d.is_infinite() {
            assert!(a.is_infinite(), "vertex {v} is disconnected but answered {a}");
        } else if v == sys.source() {
            assert!(a <= 14.0 * eps + 1e-9);
        } else {
            assert!(a >= d && a <= (1.0 + 30.0 * eps) * d * (1.0 + 1e-12), "vertex {v}: {a} vs {d}");
        }
    }
}

#[test]
fn generated_traces_stay_within_bound() {
    let eps = Epsilon::new(1, 5).unwrap();
    for (i, kind) in [TraceKind::UniformRandom, TraceKind::PathPlusCliques].into_iter().enumerate() {
        for seed in 0..4 {
            let t = generate(&GenParams::new(kind, 24, 60, 32, 100 * i as u64 + seed)).unwrap();
            let mut sys = LayeredSssp::new(t.initial_graph().unwrap(), 0, eps, t.max_weight()).unwrap();
            audit(&sys, eps.to_f64());
            for ev in t.events().unwrap() {
                let reply = sys.apply(&ev).unwrap();
                if let UpdateEvent::QueryDistance(v) = ev {
                    assert_eq!(reply, Some(sys.query(v)));
                }
                audit(&sys, eps.to_f64());
            }
        }
    }
}

#[test]
fn cutting_the_only_path_gives_infinity() {
    let g = DynamicGraph::from_edges(4, [(0, 1, 3.0), (1, 2, 5.0), (2, 3, 2.0)]).unwrap();
    let eps = Epsilon::new(1, 10).unwrap();
    let mut sys = LayeredSssp::new(g, 0, eps, 5.0).unwrap();
    assert!(sys.query(3) >= 10.0);
    sys.apply(&UpdateEvent::Delete(dsssp::graph::EdgeKey::new(1, 2).unwrap())).unwrap();
    assert!(sys.query(2).is_infinite());
    assert!(sys.query(3).is_infinite());
    assert!(sys.query(1).is_finite());
}
