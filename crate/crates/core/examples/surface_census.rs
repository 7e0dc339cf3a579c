//! Enumerate the surfaces of the class up to isomorphism.

use toric_qh::cli::census::census;
use toric_qh::cohomology::CohomologyRing;

fn main() -> toric_qh::Result<()> {
    for fan in census(2, 6)? {
        let rays: Vec<String> = fan.rays().iter().map(|r| r.to_string()).collect();
        let betti = CohomologyRing::new(&fan)?.census();
        println!("{} rays  betti {:?}  {}", fan.num_rays(), betti, rays.join(" "));
    }
    Ok(())
}
