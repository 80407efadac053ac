//! Split detection on a dynamic forest: cut a bridge and list the smaller side.

use dsssp::connectivity::HdtForest;

fn main() -> Result<(), dsssp::error::Error> {
    // two triangles joined by the bridge 2-3
    let mut f = HdtForest::new(6);
    for (u, v) in [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)] {
        f.insert(u, v)?;
    }
    println!("connected(0, 5) = {}", f.connected(0, 5));

    let rep = f.delete(1, 2)?;
    println!("delete 1-2: split = {}", rep.split);

    let rep = f.delete(2, 3)?;
    println!(
        "delete 2-3: split = {}, smaller side = {:?}, survivor id = {}",
        rep.split, rep.smaller_side, rep.surviving_component
    );
    println!("connected(0, 5) = {}", f.connected(0, 5));
    println!("{:?}", f.stats());
    Ok(())
}
