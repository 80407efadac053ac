//! Maintain the threshold graph under deletions and print every change it emits.

use num_rational::Ratio;

use dsssp::graph::DynamicGraph;
use dsssp::threshold::ThresholdState;

fn main() -> Result<(), dsssp::error::Error> {
    // vertex 0 has many unit edges, so they are heavy; the 16-weight edges are light
    let mut g = DynamicGraph::new(6);
    for v in 1..5 {
        g.insert_edge(0, v, 1.0)?;
    }
    g.insert_edge(4, 5, 16.0)?;
    g.insert_edge(1, 5, 16.0)?;
    let mut st = ThresholdState::new(&g, Ratio::from_integer(1))?;
    println!("cutoffs {:?}", st.cutoffs());
    println!("heavy {:?}", st.heavy_edges().collect::<Vec<_>>());
    println!("light {:?}", st.light_edges().collect::<Vec<_>>());

    for (u, v) in [(0, 4), (0, 3), (0, 2)] {
        let rec = g.delete(u, v)?;
        println!("delete {u}-{v}:");
        for change in st.apply(&rec)? {
            println!("  {change:?}");
        }
    }
    println!("component of 4: {}", st.component_of(4));
    println!("{:?}", st.counters());
    Ok(())
}
