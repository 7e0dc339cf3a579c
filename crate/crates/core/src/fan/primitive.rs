//! Primitive relations, curve classes and effective decompositions.

use std::collections::HashSet;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{Signed, ToPrimitive, Zero};

use super::Fan;
use crate::error::{Error, Result};
use crate::lattice::{self, Int, LatticeVector};
use crate::ray_set::RaySet;

/// A class in `H_2(X, Z)`, stored as its intersection numbers with
/// `D_1, ..., D_m`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct CurveClass(pub Vec<Int>);

impl CurveClass {
    pub fn zero(m: usize) -> Self {
        CurveClass(vec![Int::zero(); m])
    }

    pub fn from_i64s(xs: &[i64]) -> Self {
        CurveClass(xs.iter().map(|&x| Int::from(x)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// `∫_β D_i`.
    pub fn pairing(&self, i: usize) -> &Int {
        &self.0[i]
    }

    /// Anticanonical degree `Σ_i ∫_β D_i`.
    pub fn degree(&self) -> Int {
        self.0.iter().sum()
    }

    pub fn scaled(&self, c: &Int) -> Self {
        CurveClass(self.0.iter().map(|x| x * c).collect())
    }

    /// Rays the class meets negatively.
    pub fn negative_support(&self) -> RaySet {
        RaySet::from_indices((0..self.0.len()).filter(|&i| self.0[i].is_negative()))
    }

    /// Rays the class meets positively.
    pub fn positive_support(&self) -> RaySet {
        RaySet::from_indices((0..self.0.len()).filter(|&i| self.0[i].is_positive()))
    }

    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        self.0.iter().map(|x| x.to_i64()).collect()
    }
}

impl Add for &CurveClass {
    type Output = CurveClass;
    fn add(self, rhs: &CurveClass) -> CurveClass {
        CurveClass(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &CurveClass {
    type Output = CurveClass;
    fn sub(self, rhs: &CurveClass) -> CurveClass {
        CurveClass(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &CurveClass {
    type Output = CurveClass;
    fn neg(self) -> CurveClass {
        CurveClass(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&LatticeVector(self.0.clone()), f)
    }
}

impl fmt::Debug for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A primitive set with its primitive relation
/// `Σ_{i∈set} ρ_i = Σ_j a_j ρ'_j` and primitive class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimitiveData {
    pub set: RaySet,
    /// The cone whose relative interior contains the ray sum (empty if the sum is zero).
    pub rhs_cone: RaySet,
    /// Positive coefficients `a_j`, aligned with `rhs_cone` in ascending order.
    pub rhs_coeffs: Vec<Int>,
    pub cls: CurveClass,
}

impl PrimitiveData {
    /// `Σ a_j`.
    pub fn rhs_weight(&self) -> Int {
        self.rhs_coeffs.iter().sum()
    }

    /// The single right-hand ray when the relation reads `Σρ_i = ρ'`.
    pub fn unit_rhs(&self) -> Option<usize> {
        (self.rhs_cone.len() == 1 && self.rhs_coeffs[0] == Int::from(1)).then(|| self.rhs_cone.first().unwrap())
    }

    /// `(ray, a_j)` pairs of the right-hand side.
    pub fn rhs_terms(&self) -> impl Iterator<Item = (usize, &Int)> + '_ {
        self.rhs_cone.iter().zip(&self.rhs_coeffs)
    }
}

impl Fan {
    pub(super) fn compute_primitive_relation(&self, set: RaySet) -> Result<PrimitiveData> {
        let sum = self.ray_sum(set);
        let m = self.num_rays();
        let mut located = None;
        if sum.is_zero() {
            located = Some((RaySet::EMPTY, Vec::new()));
        } else {
            'scan: for d in 1..=self.dim() {
                for cone in self.cones_of_dim(d) {
                    let gens: Vec<&LatticeVector> = cone.iter().map(|i| self.ray(i)).collect();
                    if let Some(c) = lattice::express_in_cone(&sum, &gens)? {
                        if c.interior {
                            let coeffs = c.coeffs.iter().map(|r| r.to_integer()).collect();
                            located = Some((cone, coeffs));
                            break 'scan;
                        }
                    }
                }
            }
        }
        let (rhs_cone, rhs_coeffs): (RaySet, Vec<Int>) =
            located.ok_or_else(|| Error::LocateFailure(set.to_string()))?;
        let mut cls = CurveClass::zero(m);
        for i in set.iter() {
            cls.0[i] = Int::from(1);
        }
        for (j, a) in rhs_cone.iter().zip(&rhs_coeffs) {
            cls.0[j] = -a.clone();
        }
        Ok(PrimitiveData { set, rhs_cone, rhs_coeffs, cls })
    }

    /// Writes an effective class as a nonnegative integer combination of
    /// primitive classes.
    ///
    /// When the rays `β` meets negatively span a cone, the greedy induction
    /// applies: some primitive set lies inside `{i : ∫_β D_i > 0}`, and
    /// subtracting its class preserves the hypothesis. Otherwise a bounded
    /// exhaustive search runs, which needs every primitive class to have
    /// positive anticanonical degree.
    pub fn decompose_effective(&self, beta: &CurveClass) -> Result<Vec<(PrimitiveData, u64)>> {
        self.check_curve_class(beta)?;
        let prims = self.primitive_data();
        let mut counts = vec![0u64; prims.len()];
        if beta.is_zero() {
            return Ok(Vec::new());
        }
        if self.is_cone(beta.negative_support())? {
            let mut rest = beta.clone();
            let mut steps = 0usize;
            while !rest.is_zero() {
                steps += 1;
                let pos = rest.positive_support();
                let Some(k) = prims.iter().position(|p| p.set.is_subset(pos)) else {
                    return Err(Error::NotEffective(beta.to_string()));
                };
                if steps > 1_000_000 {
                    return Err(Error::EffectivityUndecided(beta.to_string()));
                }
                rest = &rest - &prims[k].cls;
                counts[k] += 1;
            }
        } else {
            let degrees: Vec<Int> = prims.iter().map(|p| p.cls.degree()).collect();
            if degrees.iter().any(|d| !d.is_positive()) {
                return Err(Error::EffectivityUndecided(beta.to_string()));
            }
            let mut failed = HashSet::new();
            if !search(prims, &degrees, beta.clone(), 0, &mut counts, &mut failed) {
                return Err(Error::NotEffective(beta.to_string()));
            }
        }
        Ok(prims
            .iter()
            .zip(counts)
            .filter(|(_, c)| *c > 0)
            .map(|(p, c)| (p.clone(), c))
            .collect())
    }

    pub fn is_effective(&self, beta: &CurveClass) -> Result<bool> {
        match self.decompose_effective(beta) {
            Ok(_) => Ok(true),
            Err(Error::NotEffective(_)) => Ok(false),
            Err(e) => Err(e),
        }
    }
}

fn search(
    prims: &[PrimitiveData],
    degrees: &[Int],
    rest: CurveClass,
    start: usize,
    counts: &mut [u64],
    failed: &mut HashSet<(CurveClass, usize)>,
) -> bool {
    if rest.is_zero() {
        return true;
    }
    let deg = rest.degree();
    if !deg.is_positive() || failed.contains(&(rest.clone(), start)) {
        return false;
    }
    for k in start..prims.len() {
        if degrees[k] > deg {
            continue;
        }
        counts[k] += 1;
        if search(prims, degrees, &rest - &prims[k].cls, k, counts, failed) {
            return true;
        }
        counts[k] -= 1;
    }
    failed.insert((rest, start));
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn l(xs: &[usize]) -> RaySet {
        RaySet::from_labels(xs.iter().copied()).unwrap()
    }

    #[test]
    fn primitive_relation_examples() {
        let p = catalog::p2().primitive_relation(l(&[1, 2, 3])).unwrap();
        assert!(p.rhs_cone.is_empty());
        assert_eq!(p.cls, CurveClass::from_i64s(&[1, 1, 1]));

        let f1 = catalog::f1();
        let p = f1.primitive_relation(l(&[1, 2])).unwrap();
        assert_eq!(p.rhs_cone, l(&[4]));
        assert_eq!(p.rhs_coeffs, vec![Int::from(1)]);
        assert_eq!(p.cls, CurveClass::from_i64s(&[1, 1, 0, -1]));

        let p = f1.primitive_relation(l(&[3, 4])).unwrap();
        assert!(p.rhs_cone.is_empty());
        assert_eq!(p.cls, CurveClass::from_i64s(&[0, 0, 1, 1]));

        assert!(matches!(f1.primitive_relation(l(&[1, 4])), Err(Error::NotAPrimitiveSet(_))));
    }

    #[test]
    fn hirzebruch_two_relation() {
        let f2 = catalog::hirzebruch(2);
        let p = f2.primitive_relation(l(&[1, 2])).unwrap();
        assert_eq!(p.rhs_cone, l(&[3]));
        assert_eq!(p.rhs_coeffs, vec![Int::from(2)]);
    }

    #[test]
    fn decompose_examples() {
        let p2 = catalog::p2();
        let d = p2.decompose_effective(&CurveClass::from_i64s(&[2, 2, 2])).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].1, 2);
        assert_eq!(d[0].0.cls, CurveClass::from_i64s(&[1, 1, 1]));

        assert!(p2.decompose_effective(&CurveClass::zero(3)).unwrap().is_empty());

        let f1 = catalog::f1();
        let d = f1.decompose_effective(&CurveClass::from_i64s(&[1, 1, 1, 0])).unwrap();
        let classes: Vec<_> = d.iter().map(|(p, c)| (p.cls.clone(), *c)).collect();
        assert_eq!(
            classes,
            vec![(CurveClass::from_i64s(&[1, 1, 0, -1]), 1), (CurveClass::from_i64s(&[0, 0, 1, 1]), 1)]
        );
    }

    #[test]
    fn decompose_rejects() {
        let p2 = catalog::p2();
        assert!(matches!(
            p2.decompose_effective(&CurveClass::from_i64s(&[-1, -1, -1])),
            Err(Error::NotEffective(_))
        ));
        assert!(matches!(
            p2.decompose_effective(&CurveClass::from_i64s(&[1, 0, 0])),
            Err(Error::InvalidCurveClass(_))
        ));
        // exceptional curve class negated on F1: negative support {1,2} is not a cone
        let f1 = catalog::f1();
        assert!(matches!(
            f1.decompose_effective(&CurveClass::from_i64s(&[-1, -1, 0, 1])),
            Err(Error::NotEffective(_))
        ));
    }
}
