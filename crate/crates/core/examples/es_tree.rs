//! Exact decremental distances with a bounded-depth Even-Shiloach tree.

use dsssp::es_tree::EsTree;

fn main() -> Result<(), dsssp::error::Error> {
    let edges = [(0, 1, 2), (1, 2, 2), (0, 2, 5), (2, 3, 1), (0, 3, 9)];
    let mut es = EsTree::new(4, &edges, 0, 20)?;
    println!("initial labels: {:?}", es.labels());

    es.delete(1, 2)?;
    println!("after deleting 1-2: {:?}", es.labels());

    es.increase(0, 2, 12)?;
    println!("after raising 0-2 to 12: {:?}", es.labels());
    println!("parent of 3: {:?}", es.parent(3));
    println!("{:?}", es.stats());
    Ok(())
}
