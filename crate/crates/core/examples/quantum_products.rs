//! Multiplication table of the quantum ring of the first Hirzebruch surface.

use toric_qh::catalog;
use toric_qh::cli::quantum_text;
use toric_qh::quantum::QuantumRing;

fn main() -> toric_qh::Result<()> {
    let fan = catalog::f1();
    let qr = QuantumRing::new(&fan)?;
    let ring = qr.cohomology();
    for i in 0..ring.rank() {
        println!("e{} = D^{}", i + 1, ring.basis_monomial(i));
    }
    for i in 0..ring.rank() {
        for j in i..ring.rank() {
            let p = qr.quantum_product(&qr.basis_class(i), &qr.basis_class(j))?;
            println!("e{} * e{} = {}", i + 1, j + 1, quantum_text(&p, ring));
        }
    }

    // Monomials in divisors reduce directly.
    let cube = qr.reduce_monomial(&[0, 0, 0])?;
    println!("D1^3 = {}", quantum_text(&cube, ring));
    Ok(())
}
