//! Isomorphism classes of surfaces in the class.
//!
//! Up to a unimodular change of basis some maximal cone is the positive
//! quadrant. Every ray of a fan in the class then has coordinates in
//! `{-1, 0, 1}` in that basis, so the candidate rays are the eight nonzero
//! points of the square, minus `(1, 1)` which would split the quadrant.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::fan::{is_isomorphic, Fan};
use crate::fano::{self, ClassTier};
use crate::lattice::LatticeVector;
use crate::ray_set::RaySet;

/// Counterclockwise from `(1, 0)`.
const SQUARE: [[i64; 2]; 8] = [[1, 0], [1, 1], [0, 1], [-1, 1], [-1, 0], [-1, -1], [0, -1], [1, -1]];

/// Fans in the class with at most `max_rays` rays, one per isomorphism class,
/// ordered by ray count.
pub fn census(dim: usize, max_rays: usize) -> Result<Vec<Fan>> {
    if dim != 2 {
        return Err(Error::Unsupported(format!("census in dimension {dim}; only 2 is implemented")));
    }
    let optional: Vec<usize> = vec![3, 4, 5, 6, 7];
    let mut found: Vec<Fan> = Vec::new();
    for k in 0..=max_rays.saturating_sub(2).min(optional.len()) {
        for extra in optional.iter().copied().combinations(k) {
            let mut chosen = vec![0, 2];
            chosen.extend(extra);
            chosen.sort_unstable();
            let rays: Vec<LatticeVector> = chosen.iter().map(|&i| LatticeVector::from_i64s(&SQUARE[i])).collect();
            let r = rays.len();
            let cones: Vec<RaySet> = (0..r).map(|i| RaySet::from_indices([i, (i + 1) % r])).collect();
            let Ok(fan) = Fan::from_lattice(2, rays, cones) else { continue };
            if fano::tier(&fan) != ClassTier::FullClass {
                continue;
            }
            let mut new = true;
            for f in &found {
                if is_isomorphic(f, &fan)? {
                    new = false;
                    break;
                }
            }
            if new {
                found.push(fan);
            }
        }
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(census(2, 6).unwrap().len(), 5);
        assert_eq!(census(2, 3).unwrap().len(), 1);
        assert_eq!(census(2, 4).unwrap().len(), 3);
        assert!(matches!(census(3, 6), Err(Error::Unsupported(_))));
    }
}
