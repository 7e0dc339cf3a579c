//! Sort the surface corpus and a few non-examples into tiers.

use toric_qh::catalog;
use toric_qh::fano::{check_condition_iii, classify};

fn main() {
    let mut fans = catalog::surface_corpus();
    fans.push(("F2", catalog::hirzebruch(2)));
    fans.push(("BlP3", catalog::bl_point_p3()));
    fans.push(("P3", catalog::projective_space(3)));

    for (name, fan) in &fans {
        println!("{name:6} {}", classify(fan).tier);
        for p in fan.primitive_data() {
            let lhs: Vec<String> = p.set.labels().iter().map(|l| format!("v{l}")).collect();
            let rhs: Vec<String> = p.rhs_terms().map(|(j, a)| if a == &1.into() { format!("v{}", j + 1) } else { format!("{a}v{}", j + 1) }).collect();
            let rhs = if rhs.is_empty() { "0".to_string() } else { rhs.join(" + ") };
            println!("         {} = {rhs}", lhs.join(" + "));
        }
        let bound = check_condition_iii(fan);
        if let Some((cone, ray, coords)) = bound.witness {
            println!("         v{} has coordinates {coords:?} in cone {}", ray + 1, fan.max_cones()[cone]);
        }
    }
}
