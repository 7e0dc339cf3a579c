//! Fano-type certification from primitive relations, exceptional sets,
//! and blow-downs.
//!
//! The tiers read directly off the primitive relations
//! `ρ_1 + ... + ρ_k = a_1 ρ'_1 + ... + a_r ρ'_r`:
//!
//! | tier               | condition on every relation                          |
//! |--------------------|------------------------------------------------------|
//! | `Fano`             | `Σ a_j < k`                                           |
//! | `SubvarietiesFano` | `Σ a_j ≤ 1`                                           |
//! | `FullClass`        | `Σ a_j ≤ 1` and each ray is on at most one right side |

use std::fmt;

use itertools::Itertools;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fan::{CurveClass, Fan};
use crate::lattice::{self, Int, LatticeVector};
use crate::ray_set::RaySet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ClassTier {
    NotFano,
    Fano,
    SubvarietiesFano,
    FullClass,
}

impl fmt::Display for ClassTier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ClassTier::NotFano => "NotFano",
            ClassTier::Fano => "Fano",
            ClassTier::SubvarietiesFano => "SubvarietiesFano",
            ClassTier::FullClass => "FullClass",
        };
        f.write_str(s)
    }
}

/// Per-relation evidence for the tier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationCertificate {
    pub set: RaySet,
    pub rhs_weight: Int,
    /// Right-hand ray when the relation reads `Σρ_i = ρ'`.
    pub rhs_ray: Option<usize>,
    /// Number of relations sharing this right-hand ray.
    pub rhs_multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub tier: ClassTier,
    pub certificates: Vec<RelationCertificate>,
}

pub fn classify(fan: &Fan) -> Classification {
    let prims = fan.primitive_data();
    let mut certificates: Vec<RelationCertificate> = prims
        .iter()
        .map(|p| RelationCertificate {
            set: p.set,
            rhs_weight: p.rhs_weight(),
            rhs_ray: p.unit_rhs(),
            rhs_multiplicity: 0,
        })
        .collect();
    for k in 0..certificates.len() {
        if let Some(r) = certificates[k].rhs_ray {
            certificates[k].rhs_multiplicity = prims.iter().filter(|p| p.rhs_cone.contains(r)).count();
        }
    }
    let fano = prims.iter().all(|p| p.rhs_weight() < Int::from(p.set.len()));
    let sub = prims.iter().all(|p| p.rhs_weight() <= Int::one());
    let once = (0..fan.num_rays()).all(|r| prims.iter().filter(|p| p.rhs_cone.contains(r)).count() <= 1);
    let tier = match (fano, sub, once) {
        (false, _, _) => ClassTier::NotFano,
        (true, false, _) => ClassTier::Fano,
        (true, true, false) => ClassTier::SubvarietiesFano,
        (true, true, true) => ClassTier::FullClass,
    };
    Classification { tier, certificates }
}

pub fn tier(fan: &Fan) -> ClassTier {
    classify(fan).tier
}

pub(crate) fn require_tier(fan: &Fan, required: ClassTier) -> Result<()> {
    let found = tier(fan);
    if found >= required {
        Ok(())
    } else if required == ClassTier::Fano {
        Err(Error::NotFano)
    } else {
        Err(Error::NotInClass { found: found.to_string(), required: required.to_string() })
    }
}

/// Outcome of the coordinate test: every ray, written in the basis of every
/// maximal cone, has coordinates in `[-1, 1]` with at most one `1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordinateBound {
    pub holds: bool,
    /// First violation: (maximal cone index, ray index, coordinates).
    pub witness: Option<(usize, usize, Vec<Int>)>,
}

pub fn check_condition_iii(fan: &Fan) -> CoordinateBound {
    for c in 0..fan.max_cones().len() {
        for (r, ray) in fan.rays().iter().enumerate() {
            let b = fan.coordinates_in_cone(c, ray);
            if !coordinates_bounded(&b) {
                return CoordinateBound { holds: false, witness: Some((c, r, b)) };
            }
        }
    }
    CoordinateBound { holds: true, witness: None }
}

fn coordinates_bounded(b: &[Int]) -> bool {
    let one = Int::one();
    let minus = -Int::one();
    b.iter().all(|x| *x >= minus && *x <= one) && b.iter().filter(|x| x.is_one()).count() <= 1
}

/// An exceptional set `S` with `Σ_{i∈S} ρ_i = ρ̃`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExceptionalData {
    pub set: RaySet,
    /// Index of the ray `ρ̃`.
    pub exc_divisor: usize,
    /// Pairs 1 with `S`, -1 with `D̃`, 0 elsewhere.
    pub cls: CurveClass,
}

impl ExceptionalData {
    pub fn new(set: RaySet, exc_divisor: usize, m: usize) -> Self {
        let mut cls = CurveClass::zero(m);
        for i in set.iter() {
            cls.0[i] = Int::one();
        }
        cls.0[exc_divisor] = -Int::one();
        ExceptionalData { set, exc_divisor, cls }
    }
}

/// All exceptional sets (of size at least two), in canonical order.
pub fn exceptional_sets(fan: &Fan) -> Result<Vec<ExceptionalData>> {
    require_tier(fan, ClassTier::SubvarietiesFano)?;
    let m = fan.num_rays();
    let n = fan.dim();
    let ray_index: std::collections::HashMap<&LatticeVector, usize> =
        fan.rays().iter().enumerate().map(|(i, r)| (r, i)).collect();
    let mut out = Vec::new();
    for k in 2..=n {
        for combo in (0..m).combinations(k) {
            let set = RaySet::from_indices(combo.iter().copied());
            let sum = fan.ray_sum(set);
            let Some(&target) = ray_index.get(&sum) else { continue };
            let mat: Vec<Vec<Int>> = combo.iter().map(|&i| fan.ray(i).0.clone()).collect();
            if lattice::rank(&mat, n) == k {
                out.push(ExceptionalData::new(set, target, m));
            }
        }
    }
    out.sort_by(|a, b| a.set.lex_cmp(b.set).then(a.exc_divisor.cmp(&b.exc_divisor)));
    Ok(out)
}

/// Exceptional sets special for `sigma`: `k-1` members and `ρ̃` lie in `sigma`.
pub fn special_exceptional_sets(fan: &Fan, sigma: RaySet) -> Result<Vec<ExceptionalData>> {
    fan.require_cone(sigma)?;
    Ok(exceptional_sets(fan)?
        .into_iter()
        .filter(|e| is_special(e, sigma))
        .collect())
}

pub fn is_special(e: &ExceptionalData, sigma: RaySet) -> bool {
    sigma.contains(e.exc_divisor) && e.set.intersection(sigma).len() + 1 == e.set.len()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyPredicates {
    pub distinct_exc: bool,
    pub no_overlaps: bool,
    pub no_cycles: bool,
}

pub fn family_predicates(family: &[ExceptionalData]) -> FamilyPredicates {
    let distinct_exc = family.iter().map(|e| e.exc_divisor).all_unique();
    let no_overlaps = family
        .iter()
        .all(|e| family.iter().all(|s| !s.set.contains(e.exc_divisor)));
    // edge i -> j when the exceptional divisor of S_j lies in S_i
    let t = family.len();
    let edges: Vec<Vec<usize>> = (0..t)
        .map(|i| (0..t).filter(|&j| family[i].set.contains(family[j].exc_divisor)).collect())
        .collect();
    let no_cycles = is_acyclic(&edges);
    FamilyPredicates { distinct_exc, no_overlaps, no_cycles }
}

fn is_acyclic(edges: &[Vec<usize>]) -> bool {
    // Kahn's algorithm
    let t = edges.len();
    let mut indeg = vec![0usize; t];
    for e in edges {
        for &j in e {
            indeg[j] += 1;
        }
    }
    let mut queue: Vec<usize> = (0..t).filter(|&i| indeg[i] == 0).collect();
    let mut seen = 0;
    while let Some(i) = queue.pop() {
        seen += 1;
        for &j in &edges[i] {
            indeg[j] -= 1;
            if indeg[j] == 0 {
                queue.push(j);
            }
        }
    }
    seen == t
}

/// Result of contracting one exceptional divisor.
#[derive(Clone, Debug)]
pub struct BlowDown {
    pub fan: Fan,
    /// `origin[k]` is the parent index of the k-th ray of the new fan.
    pub origin: Vec<usize>,
    pub removed: usize,
}

/// Contracts `D̂` for a primitive relation `ρ_1 + ... + ρ_k = ρ̂`.
///
/// Cones avoiding `ρ̂` survive; each maximal cone `μ ∋ ρ̂` becomes
/// `(μ \ {ρ̂}) ∪ {ρ_1, ..., ρ_k}`. The result is re-validated.
pub fn blow_down(fan: &Fan, exc: &ExceptionalData) -> Result<BlowDown> {
    require_tier(fan, ClassTier::FullClass)?;
    let hat = exc.exc_divisor;
    let primitive = fan
        .primitive_data()
        .iter()
        .any(|p| p.set == exc.set && p.unit_rhs() == Some(hat));
    if !primitive {
        return Err(Error::PreconditionFailed(format!(
            "{} -> D{} is not a primitive exceptional relation",
            exc.set,
            hat + 1
        )));
    }
    let mut cones: Vec<RaySet> = Vec::new();
    for &mu in fan.max_cones() {
        let c = if mu.contains(hat) { mu.without(hat).union(exc.set) } else { mu };
        if !cones.contains(&c) {
            cones.push(c);
        }
    }
    let origin: Vec<usize> = (0..fan.num_rays()).filter(|&i| i != hat).collect();
    let reindex = |c: RaySet| RaySet::from_indices(c.iter().map(|i| if i > hat { i - 1 } else { i }));
    let rays: Vec<LatticeVector> = origin.iter().map(|&i| fan.ray(i).clone()).collect();
    let cones: Vec<RaySet> = cones.into_iter().map(reindex).collect();
    let new = Fan::from_lattice(fan.dim(), rays, cones).map_err(|e| Error::BlowDownInvalid(e.to_string()))?;
    Ok(BlowDown { fan: new, origin, removed: hat })
}

/// Contracts the divisor `D_ray` via its primitive exceptional relation.
pub fn blow_down_divisor(fan: &Fan, ray: usize) -> Result<BlowDown> {
    let p = fan
        .primitive_data()
        .iter()
        .find(|p| p.unit_rhs() == Some(ray))
        .ok_or(Error::NoExceptionalRelation(ray + 1))?;
    blow_down(fan, &ExceptionalData::new(p.set, ray, fan.num_rays()))
}

/// Rays heading a primitive exceptional relation, ascending.
pub fn exceptional_divisors(fan: &Fan) -> Vec<usize> {
    let mut v: Vec<usize> = fan.primitive_data().iter().filter_map(|p| p.unit_rhs()).collect();
    v.sort_unstable();
    v.dedup();
    v
}

#[derive(Clone, Debug)]
pub struct Tower {
    /// Fans from the input down to the terminal one.
    pub fans: Vec<Fan>,
    /// Contracted rays, as indices of the input fan, in order.
    pub removed: Vec<usize>,
    /// For each fan, its rays as indices of the input fan.
    pub origins: Vec<Vec<usize>>,
}

impl Tower {
    pub fn last(&self) -> &Fan {
        self.fans.last().expect("tower is never empty")
    }
}

/// Blows down exceptional divisors until none remain.
///
/// `order` lists rays of the input fan (0-based) to contract first, in
/// sequence; afterwards the smallest remaining exceptional ray goes next.
pub fn blow_down_tower(fan: &Fan, order: Option<&[usize]>) -> Result<Tower> {
    require_tier(fan, ClassTier::FullClass)?;
    let mut tower = Tower {
        fans: vec![fan.clone()],
        removed: Vec::new(),
        origins: vec![(0..fan.num_rays()).collect()],
    };
    let mut queue: std::collections::VecDeque<usize> = order.unwrap_or(&[]).iter().copied().collect();
    loop {
        let cur = tower.last().clone();
        let origin = tower.origins.last().unwrap().clone();
        let next = match queue.pop_front() {
            Some(orig) => match origin.iter().position(|&o| o == orig) {
                Some(local) => local,
                None => {
                    return Err(Error::PreconditionFailed(format!("ray {} was already removed", orig + 1)))
                }
            },
            None => match exceptional_divisors(&cur).first() {
                Some(&r) => r,
                None => break,
            },
        };
        let step = blow_down_divisor(&cur, next)?;
        if tier(&step.fan) != ClassTier::FullClass {
            return Err(Error::BlowDownInvalid(format!(
                "contracting D{} left the class (tier {})",
                origin[next] + 1,
                tier(&step.fan)
            )));
        }
        tower.removed.push(origin[next]);
        tower.origins.push(step.origin.iter().map(|&i| origin[i]).collect());
        tower.fans.push(step.fan);
    }
    Ok(tower)
}

/// Whether the primitive sets partition the rays with all relations
/// summing to zero; returns the factor dimensions if so.
pub fn is_product_of_projective_spaces(fan: &Fan) -> Option<Vec<usize>> {
    let prims = fan.primitive_data();
    let mut covered = RaySet::EMPTY;
    for p in prims {
        if !p.rhs_cone.is_empty() || !covered.is_disjoint(p.set) {
            return None;
        }
        covered = covered.union(p.set);
    }
    (covered == fan.all_rays()).then(|| prims.iter().map(|p| p.set.len() - 1).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::fan::is_isomorphic;
    use num_traits::Zero;

    fn l(xs: &[usize]) -> RaySet {
        RaySet::from_labels(xs.iter().copied()).unwrap()
    }

    #[test]
    fn classify_examples() {
        assert_eq!(tier(&catalog::p2()), ClassTier::FullClass);
        let c = classify(&catalog::f1());
        assert_eq!(c.tier, ClassTier::FullClass);
        assert_eq!(c.certificates[0].rhs_ray, Some(3));
        assert_eq!(c.certificates[0].rhs_multiplicity, 1);
        assert_eq!(c.certificates[0].rhs_weight, Int::one());
        assert_eq!(tier(&catalog::hirzebruch(2)), ClassTier::NotFano);
    }

    #[test]
    fn condition_iii_examples() {
        let p2 = catalog::p2();
        let c12 = p2.max_cones().iter().position(|&c| c == l(&[1, 2])).unwrap();
        assert_eq!(p2.coordinates_in_cone(c12, p2.ray(2)), vec![Int::from(-1), Int::from(-1)]);
        assert!(check_condition_iii(&p2).holds);

        let f2 = catalog::hirzebruch(2);
        // cone {1,3}, ray 2 = (-1,2)
        let c13 = f2.max_cones().iter().position(|&c| c == l(&[1, 3])).unwrap();
        assert_eq!(f2.coordinates_in_cone(c13, f2.ray(1)), vec![Int::from(-1), Int::from(2)]);
        let r = check_condition_iii(&f2);
        assert!(!r.holds);
        assert!(r.witness.is_some());
    }

    #[test]
    fn generators_have_unit_coordinates() {
        let f = catalog::bl3_p2();
        for (c, mu) in f.max_cones().iter().enumerate() {
            for (k, i) in mu.iter().enumerate() {
                let b = f.coordinates_in_cone(c, f.ray(i));
                let e: Vec<Int> = (0..2).map(|j| if j == k { Int::one() } else { Int::zero() }).collect();
                assert_eq!(b, e);
            }
        }
    }

    #[test]
    fn exceptional_examples() {
        let e = exceptional_sets(&catalog::f1()).unwrap();
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].set, l(&[1, 2]));
        assert_eq!(e[0].exc_divisor, 3);
        assert_eq!(e[0].cls, CurveClass::from_i64s(&[1, 1, 0, -1]));
        assert!(exceptional_sets(&catalog::p2()).unwrap().is_empty());
        assert!(exceptional_sets(&catalog::p1xp1()).unwrap().is_empty());
        assert!(exceptional_sets(&catalog::hirzebruch(2)).is_err());
    }

    #[test]
    fn special_examples() {
        let f1 = catalog::f1();
        let s = special_exceptional_sets(&f1, l(&[1, 4])).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].set, l(&[1, 2]));
        assert!(special_exceptional_sets(&f1, l(&[2, 3])).unwrap().is_empty());
        assert!(special_exceptional_sets(&f1, l(&[3])).unwrap().is_empty());
        assert!(special_exceptional_sets(&f1, l(&[1, 2])).is_err());
    }

    #[test]
    fn family_predicate_examples() {
        let all = FamilyPredicates { distinct_exc: true, no_overlaps: true, no_cycles: true };
        assert_eq!(family_predicates(&[]), all);
        let single = ExceptionalData::new(l(&[1, 2]), 3, 5);
        assert_eq!(family_predicates(&[single]), all);
        // S1 = {a,b} -> c, S2 = {c,d} -> a
        let s1 = ExceptionalData::new(l(&[1, 2]), 2, 5);
        let s2 = ExceptionalData::new(l(&[3, 4]), 0, 5);
        let p = family_predicates(&[s1.clone(), s2]);
        assert!(!p.no_cycles);
        assert!(!p.no_overlaps);
        assert!(p.distinct_exc);
        // an overlap without a cycle
        let s3 = ExceptionalData::new(l(&[3, 4]), 4, 5);
        let p = family_predicates(&[s1, s3]);
        assert!(!p.no_overlaps);
        assert!(p.no_cycles);
    }

    #[test]
    fn blow_down_examples() {
        let f1 = catalog::f1();
        let exc = &exceptional_sets(&f1).unwrap()[0];
        let down = blow_down(&f1, exc).unwrap();
        assert!(is_isomorphic(&down.fan, &catalog::p2()).unwrap());

        let bl2 = catalog::bl2_p2();
        let down = blow_down(&bl2, &ExceptionalData::new(l(&[1, 2]), 3, 5)).unwrap();
        assert!(is_isomorphic(&down.fan, &catalog::f1()).unwrap());

        let p2 = catalog::p2();
        for r in 0..3 {
            assert!(matches!(blow_down_divisor(&p2, r), Err(Error::NoExceptionalRelation(_))));
        }
    }

    #[test]
    fn tower_examples() {
        let t = blow_down_tower(&catalog::f1(), None).unwrap();
        assert_eq!(t.fans.len(), 2);
        assert!(is_isomorphic(t.last(), &catalog::p2()).unwrap());

        let t = blow_down_tower(&catalog::p2(), None).unwrap();
        assert_eq!(t.fans.len(), 1);

        let hex = catalog::bl3_p2();
        let t = blow_down_tower(&hex, None).unwrap();
        assert!(exceptional_divisors(t.last()).is_empty());
        assert!(is_product_of_projective_spaces(t.last()).is_some());
        let len = t.fans.len();
        assert!(len == 3 || len == 4);
    }

    #[test]
    fn product_detection() {
        assert_eq!(is_product_of_projective_spaces(&catalog::p2()), Some(vec![2]));
        assert_eq!(is_product_of_projective_spaces(&catalog::p1xp1()), Some(vec![1, 1]));
        assert_eq!(is_product_of_projective_spaces(&catalog::f1()), None);
    }
}
