//! Quantum Giambelli polynomials of the cones of a surface.

use toric_qh::catalog;
use toric_qh::quantum::QuantumRing;

fn main() -> toric_qh::Result<()> {
    let fan = catalog::bl3_p2();
    let qr = QuantumRing::new(&fan)?;
    for sigma in fan.all_cones() {
        println!("{:8} {}", sigma.to_string(), qr.giambelli(sigma)?);
    }
    Ok(())
}
