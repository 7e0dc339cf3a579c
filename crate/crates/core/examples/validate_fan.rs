//! Validate a fan given as JSON and list its primitive collections.
//!
//! ```text
//! cargo run --example validate_fan
//! ```

use toric_qh::fan::validate;
use toric_qh::{Fan, FanFile};

fn main() -> toric_qh::Result<()> {
    // Blow-up of the plane in two points.
    let good = r#"{"dim":2,"rays":[[1,0],[1,1],[0,1],[-1,0],[-1,-1]],
                   "max_cones":[[1,2],[2,3],[3,4],[4,5],[5,1]]}"#;
    let fan = Fan::from_file(&FanFile::from_json(good)?)?;
    println!("{} rays, {} maximal cones", fan.num_rays(), fan.max_cones().len());
    for p in fan.primitive_data() {
        println!("  primitive {}  class {}", p.set, p.cls);
    }

    // Missing a cone: two facets lie on only one maximal cone.
    let bad = r#"{"dim":2,"rays":[[1,0],[0,1],[-1,-1]],"max_cones":[[1,2],[2,3]]}"#;
    let report = validate(&FanFile::from_json(bad)?);
    println!("\nbroken fan:\n{report}");
    Ok(())
}
