//! Generators and relations of the small quantum ring.

use num_traits::{One, Signed, Zero};
use toric_qh::catalog;
use toric_qh::quantum::presentation;

fn main() -> toric_qh::Result<()> {
    let fan = catalog::f1();
    let p = presentation(&fan)?;
    println!("{} generators", p.generators);
    for row in &p.linear_relations {
        let mut line = String::new();
        for (i, a) in row.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            let sign = if a.is_negative() { " - " } else if line.is_empty() { "" } else { " + " };
            let mag = a.abs();
            let coef = if mag.is_one() { String::new() } else { format!("{mag}") };
            line.push_str(&format!("{sign}{coef}D{}", i + 1));
        }
        println!("  {line} = 0");
    }
    for r in &p.deformed_relations {
        let lhs: Vec<String> = r.set.labels().iter().map(|l| format!("D{l}")).collect();
        let rhs: Vec<String> = r.rhs.iter().map(|(j, a)| if a.is_one() { format!("D{}", j + 1) } else { format!("D{}^{a}", j + 1) }).collect();
        let rhs = if rhs.is_empty() { "1".to_string() } else { rhs.join("*") };
        println!("  {} = q^{} * {}", lhs.join("*"), r.beta, rhs);
    }
    Ok(())
}
