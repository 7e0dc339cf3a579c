//! Three-point invariants read off from quantum products.

use toric_qh::catalog;
use toric_qh::quantum::QuantumRing;
use toric_qh::CurveClass;


fn main() -> toric_qh::Result<()> {
    let fan = catalog::p2();
    let qr = QuantumRing::new(&fan)?;
    let ring = qr.cohomology();
    let (pt, h) = (ring.point(), ring.basis_class(1));
    let line = CurveClass::from_i64s(&[1, 1, 1]);
    println!("P2: <pt,pt,H>_line = {}", qr.gw3(&pt, &pt, &h, &line)?);
    println!("P2: <H,H,H>_0 = {}", qr.gw3(&h, &h, &h, &CurveClass::zero(3))?);

    let fan = catalog::p1xp1();
    let qr = QuantumRing::new(&fan)?;
    let ring = qr.cohomology();
    let pt = ring.point();
    // Each ruling through a point meets a divisor of its own degree once.
    for p in fan.primitive_data() {
        let i = p.set.first().unwrap();
        let d = ring.monomial_class(&[i])?;
        println!("P1xP1: <pt,D{0},D{0}>_{1} = {2}", i + 1, p.cls, qr.gw3(&pt, &d, &d, &p.cls)?);
    }
    let negative = -&fan.primitive_data()[0].cls;
    println!("P1xP1: class {negative}: {:?}", qr.gw3(&pt, &pt, &pt, &negative).err());
    Ok(())
}
