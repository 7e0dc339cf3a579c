//! Minimal trees of invariant curves from a fixed point to a divisor.

use toric_qh::catalog;
use toric_qh::curves::{min_tree, signed_distance, tree_for_class};
use toric_qh::CurveClass;

fn main() -> toric_qh::Result<()> {
    let fan = catalog::bl2_p2();
    for (mu, cone) in fan.max_cones().iter().enumerate() {
        for d in 0..fan.num_rays() {
            if cone.contains(d) {
                continue;
            }
            let tree = min_tree(&fan, mu, d)?;
            let path: Vec<String> = tree.edges.iter().map(|e| format!("{}x{}", e.multiplicity, e.cone)).collect();
            println!("{cone} -> D{}  distance {}  class {}  via {}", d + 1, signed_distance(&fan, mu, d), tree.cls, path.join(" "));
        }
    }

    let f1 = catalog::f1();
    let beta = CurveClass::from_i64s(&[1, 1, 0, -1]);
    let forest = tree_for_class(&f1, &beta)?;
    println!("\nF1 class {beta}: {} tree(s) from root {:?}", forest.trees.len(), forest.root);
    Ok(())
}
