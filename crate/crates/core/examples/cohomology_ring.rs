//! Additive basis from a shelling, cup products and intersection numbers.

use toric_qh::catalog;
use toric_qh::cohomology::{CohomologyRing, DivisorPolynomial};

fn main() -> toric_qh::Result<()> {
    let fan = catalog::bl2_p2();
    let ring = CohomologyRing::new(&fan)?;
    println!("Betti numbers {:?}", ring.census());
    for i in 0..ring.rank() {
        println!("  e{} = D^{}  (degree {})", i + 1, ring.basis_monomial(i), ring.basis_degree(i));
    }

    // Self-intersections of the divisors.
    for i in 0..fan.num_rays() {
        let d = ring.normal_form(&DivisorPolynomial::divisor(i))?;
        println!("D{}^2 = {}", i + 1, ring.integrate(&ring.cup(&d, &d)));
    }

    let anti = (0..fan.num_rays()).fold(DivisorPolynomial::zero(), |a, i| &a + &DivisorPolynomial::divisor(i));
    let k = ring.normal_form(&anti)?;
    println!("K^2 = {}", ring.integrate(&ring.cup(&k, &k)));
    Ok(())
}
