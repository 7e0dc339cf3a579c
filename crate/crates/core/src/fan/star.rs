use super::Fan;
use crate::error::Result;
use crate::lattice::{self, LatticeVector};
use crate::ray_set::RaySet;

/// The star `Δ(σ)`: a fan in `N/<σ>` whose cones correspond to the cones
/// of `Δ` containing `σ`.
#[derive(Clone, Debug)]
pub struct Star {
    pub fan: Fan,
    /// `origin[k]` is the index in the parent fan of the k-th star ray.
    pub origin: Vec<usize>,
}

impl Fan {
    pub fn star(&self, sigma: RaySet) -> Result<Star> {
        self.require_cone(sigma)?;
        let gens: Vec<&LatticeVector> = sigma.iter().map(|i| self.ray(i)).collect();
        let proj = lattice::quotient_projection(&gens, self.dim())?;
        let containing: Vec<RaySet> = self
            .max_cones()
            .iter()
            .copied()
            .filter(|c| sigma.is_subset(*c))
            .collect();
        let origin: Vec<usize> = containing
            .iter()
            .fold(RaySet::EMPTY, |a, c| a.union(c.difference(sigma)))
            .to_vec();
        let rays = origin.iter().map(|&i| lattice::mat_vec(&proj, self.ray(i))).collect();
        let cones = containing
            .iter()
            .map(|c| {
                RaySet::from_indices(
                    c.difference(sigma).iter().map(|i| origin.iter().position(|&o| o == i).unwrap()),
                )
            })
            .collect();
        let fan = Fan::from_lattice(self.dim() - sigma.len(), rays, cones)?;
        Ok(Star { fan, origin })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::error::Error;
    use crate::fan::is_isomorphic;

    #[test]
    fn star_of_p2_ray_is_p1() {
        let p2 = catalog::p2();
        let s = p2.star(RaySet::from_labels([1]).unwrap()).unwrap();
        assert!(is_isomorphic(&s.fan, &catalog::projective_space(1)).unwrap());
        assert_eq!(s.origin, vec![1, 2]);
    }

    #[test]
    fn star_of_empty_is_self() {
        let f1 = catalog::f1();
        let s = f1.star(RaySet::EMPTY).unwrap();
        assert_eq!(s.fan, f1);
    }

    #[test]
    fn exceptional_divisor_of_f1_is_p1() {
        let f1 = catalog::f1();
        let s = f1.star(RaySet::from_labels([4]).unwrap()).unwrap();
        assert!(is_isomorphic(&s.fan, &catalog::projective_space(1)).unwrap());
    }

    #[test]
    fn star_requires_cone() {
        let p2 = catalog::p2();
        assert!(matches!(p2.star(RaySet::from_labels([1, 2, 3]).unwrap()), Err(Error::NotACone(_))));
    }

    #[test]
    fn star_of_maximal_cone_is_a_point() {
        let p2 = catalog::p2();
        let s = p2.star(RaySet::from_labels([1, 2]).unwrap()).unwrap();
        assert_eq!(s.fan.dim(), 0);
        assert_eq!(s.fan.num_rays(), 0);
    }
}
