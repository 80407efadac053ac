//! Weight-sensitive approximate tree: heavy edges are notified only when the
//! rounded label of an endpoint changes.

use dsssp::numeric::Epsilon;
use dsssp::wses::{WsesConfig, WsesTree};

fn main() -> Result<(), dsssp::error::Error> {
    let eps = Epsilon::new(1, 5)?;
    // a unit path 0..7 with a heavy chord from every vertex to 8
    let n = 9;
    let mut edges: Vec<_> = (0..7).map(|i| (i, i + 1, 1)).collect();
    edges.extend((0..8).map(|i| (i, 8, 40)));
    let mut tree = WsesTree::new(n, &edges, WsesConfig::new(0, 200, eps)?)?;
    tree.set_logging(true);
    println!("labels: {:?}", tree.labels());

    tree.delete(0, 1)?;
    tree.delete(3, 4)?;
    tree.insert_monotone(2, 5, 30)?;
    println!("labels: {:?}", tree.labels());
    println!("invariant audit: {:?}", tree.check_invariants());

    for note in tree.take_log().iter().take(5) {
        println!("{note:?}");
    }
    let rep = tree.charge_report();
    println!(
        "notifications {}, setup touches {}, queue pops {}",
        rep.notifications, rep.setup_touches, rep.queue_pops
    );
    Ok(())
}
