//! Contract exceptional divisors until a product of projective spaces remains.

use toric_qh::catalog;
use toric_qh::fano::{blow_down_tower, exceptional_divisors, is_product_of_projective_spaces};

fn main() -> toric_qh::Result<()> {
    for (name, fan) in [("Bl3P2", catalog::bl3_p2()), ("BlP3", catalog::bl_point_p3())] {
        let exc: Vec<usize> = exceptional_divisors(&fan).iter().map(|i| i + 1).collect();
        println!("{name}: exceptional divisors {exc:?}");

        let tower = blow_down_tower(&fan, None)?;
        for (k, f) in tower.fans.iter().enumerate() {
            let kept: Vec<usize> = tower.origins[k].iter().map(|i| i + 1).collect();
            println!("  step {k}: {} rays, kept {kept:?}", f.num_rays());
        }
        println!("  terminal factors {:?}", is_product_of_projective_spaces(tower.last()));
    }

    // A different order reaches a different (isomorphic) endpoint.
    let fan = catalog::bl3_p2();
    let tower = blow_down_tower(&fan, Some(&[1]))?;
    let removed: Vec<usize> = tower.removed.iter().map(|i| i + 1).collect();
    println!("\nBl3P2 contracting v2 first: removed {removed:?}");
    Ok(())
}
