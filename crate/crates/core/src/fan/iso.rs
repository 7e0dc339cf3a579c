use std::collections::HashMap;

use itertools::Itertools;
use num_traits::Zero;

use super::Fan;
use crate::error::{Error, Result};
use crate::lattice::{Int, LatticeVector};
use crate::ray_set::RaySet;

/// Whether some unimodular map of `N` carries the rays of `a` bijectively
/// onto the rays of `b` and maximal cones onto maximal cones.
///
/// One maximal cone of `a` is pinned; the candidate maps send its generators,
/// in every order, onto the generators of each maximal cone of `b`.
pub fn is_isomorphic(a: &Fan, b: &Fan) -> Result<bool> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    if a.num_rays() != b.num_rays() || a.max_cones().len() != b.max_cones().len() {
        return Ok(false);
    }
    let n = a.dim();
    if n == 0 {
        return Ok(true);
    }
    let b_index: HashMap<&LatticeVector, usize> = b.rays().iter().enumerate().map(|(i, r)| (r, i)).collect();
    let mut b_cones: Vec<RaySet> = b.max_cones().to_vec();
    b_cones.sort_by_key(|c| c.bits());

    let anchor_duals = a.cone_dual_basis(0);
    // coordinates of every ray of `a` in the anchor basis
    let coords: Vec<Vec<Int>> = a.rays().iter().map(|r| anchor_duals.iter().map(|phi| phi.pair(r)).collect()).collect();

    for target in b.max_cones() {
        let tgens: Vec<usize> = target.to_vec();
        for perm in tgens.iter().permutations(n) {
            // image of the k-th anchor generator is ray perm[k] of b
            let mut mapping = Vec::with_capacity(a.num_rays());
            let mut ok = true;
            for c in &coords {
                let mut img = LatticeVector::zero(n);
                for (k, ck) in c.iter().enumerate() {
                    if !ck.is_zero() {
                        img = &img + &b.ray(*perm[k]).scaled(ck);
                    }
                }
                match b_index.get(&img) {
                    Some(&j) => mapping.push(j),
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok || mapping.iter().unique().count() != mapping.len() {
                continue;
            }
            let mut images: Vec<RaySet> = a
                .max_cones()
                .iter()
                .map(|c| RaySet::from_indices(c.iter().map(|i| mapping[i])))
                .collect();
            images.sort_by_key(|c| c.bits());
            if images == b_cones {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn p2_relabelled() {
        let a = catalog::p2();
        let b = Fan::from_parts(2, &[&[-1, -1], &[1, 0], &[0, 1]], &[&[1, 2], &[2, 3], &[1, 3]]).unwrap();
        assert!(is_isomorphic(&a, &b).unwrap());
    }

    #[test]
    fn p2_vs_p1xp1() {
        assert!(!is_isomorphic(&catalog::p2(), &catalog::p1xp1()).unwrap());
    }

    #[test]
    fn f1_swapped_coordinates() {
        let b = Fan::from_parts(2, &[&[0, 1], &[1, 0], &[-1, -1], &[1, 1]], &[&[1, 4], &[2, 4], &[2, 3], &[3, 1]]).unwrap();
        assert!(is_isomorphic(&catalog::f1(), &b).unwrap());
    }

    #[test]
    fn f1_vs_f2_and_dimension_mismatch() {
        assert!(!is_isomorphic(&catalog::f1(), &catalog::hirzebruch(2)).unwrap());
        assert!(matches!(
            is_isomorphic(&catalog::p2(), &catalog::projective_space(3)),
            Err(Error::DimensionMismatch(2, 3))
        ));
    }
}
