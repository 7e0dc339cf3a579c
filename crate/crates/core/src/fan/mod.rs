//! Complete nonsingular fans.
//!
//! A [`Fan`] is only ever constructed from input that passed [`validate`],
//! so every method may assume the fan is simplicial, unimodular and
//! complete. Face queries reduce to "subset of some maximal cone"; the face
//! set, the primitive sets with their relations, and the dual bases of the
//! maximal cones are computed once at construction.

mod io;
mod iso;
mod primitive;
mod star;

use std::collections::{HashMap, HashSet};
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{self, DualFunctional, Int, LatticeVector};
use crate::ray_set::{RaySet, MAX_RAYS};

pub use io::FanFile;
pub use iso::is_isomorphic;
pub use primitive::{CurveClass, PrimitiveData};
pub use star::Star;

/// One failed fan invariant. Ray and cone numbers are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ValidationIssue {
    TooManyRays { count: usize },
    RayLength { ray: usize, len: usize },
    ZeroRay { ray: usize },
    NonPrimitiveRay { ray: usize },
    DuplicateRay { first: usize, second: usize },
    NoCones,
    ConeSize { cone: usize, size: usize },
    ConeIndex { cone: usize, label: usize },
    RepeatedIndex { cone: usize },
    DuplicateCone { first: usize, second: usize },
    NotUnimodular { cone: usize, det: String },
    UnusedRay { ray: usize },
    FacetCount { facet: Vec<usize>, count: usize },
    FacetSameSide { facet: Vec<usize> },
    Disconnected,
    MultipleCover { cones_containing_test_point: usize },
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ValidationIssue::*;
        match self {
            TooManyRays { count } => write!(f, "{count} rays exceeds the limit of {MAX_RAYS}"),
            RayLength { ray, len } => write!(f, "ray {ray} has length {len}"),
            ZeroRay { ray } => write!(f, "ray {ray} is zero"),
            NonPrimitiveRay { ray } => write!(f, "ray {ray} is not primitive"),
            DuplicateRay { first, second } => write!(f, "rays {first} and {second} are equal"),
            NoCones => write!(f, "no maximal cones"),
            ConeSize { cone, size } => write!(f, "cone {cone} has {size} generators"),
            ConeIndex { cone, label } => write!(f, "cone {cone} references missing ray {label}"),
            RepeatedIndex { cone } => write!(f, "cone {cone} repeats a ray"),
            DuplicateCone { first, second } => write!(f, "cones {first} and {second} coincide"),
            NotUnimodular { cone, det } => write!(f, "cone {cone} has |det| = {det}"),
            UnusedRay { ray } => write!(f, "ray {ray} lies in no maximal cone"),
            FacetCount { facet, count } => write!(f, "facet {facet:?} occurs in {count} maximal cone(s)"),
            FacetSameSide { facet } => write!(f, "cones across facet {facet:?} lie on the same side"),
            Disconnected => write!(f, "dual graph of maximal cones is disconnected"),
            MultipleCover { cones_containing_test_point } => {
                write!(f, "an interior test point lies in {cones_containing_test_point} cones")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub issues: Vec<ValidationIssue>,
}

impl ValidationReport {
    pub fn accepted(&self) -> bool {
        self.issues.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.accepted() {
            return write!(f, "accepted");
        }
        for (k, issue) in self.issues.iter().enumerate() {
            if k > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{issue}")?;
        }
        Ok(())
    }
}

/// Checks that the described fan is simplicial, nonsingular and complete.
///
/// Completeness is certified by three conditions together: every facet lies
/// in exactly two maximal cones and on opposite sides of them, the dual
/// graph is connected, and a point interior to one cone lies in no other.
pub fn validate(file: &FanFile) -> ValidationReport {
    let (report, _) = validate_parts(file);
    report
}

fn validate_parts(file: &FanFile) -> (ValidationReport, Option<(Vec<LatticeVector>, Vec<RaySet>)>) {
    use ValidationIssue::*;
    let n = file.dim;
    let m = file.rays.len();
    let mut issues = Vec::new();

    if m > MAX_RAYS {
        issues.push(TooManyRays { count: m });
        return (ValidationReport { issues }, None);
    }
    let rays: Vec<LatticeVector> = file.rays.iter().map(|r| LatticeVector::from_i64s(r)).collect();
    for (i, r) in rays.iter().enumerate() {
        if r.len() != n {
            issues.push(RayLength { ray: i + 1, len: r.len() });
        } else if r.is_zero() {
            issues.push(ZeroRay { ray: i + 1 });
        } else if !r.is_primitive() {
            issues.push(NonPrimitiveRay { ray: i + 1 });
        }
    }
    let mut seen: HashMap<&LatticeVector, usize> = HashMap::new();
    for (i, r) in rays.iter().enumerate() {
        if let Some(&j) = seen.get(r) {
            issues.push(DuplicateRay { first: j + 1, second: i + 1 });
        } else {
            seen.insert(r, i);
        }
    }
    if file.max_cones.is_empty() {
        issues.push(NoCones);
    }

    let mut cones = Vec::with_capacity(file.max_cones.len());
    let mut cone_seen: HashMap<RaySet, usize> = HashMap::new();
    for (c, labels) in file.max_cones.iter().enumerate() {
        if labels.len() != n {
            issues.push(ConeSize { cone: c + 1, size: labels.len() });
        }
        if let Some(&bad) = labels.iter().find(|&&l| l == 0 || l > m) {
            issues.push(ConeIndex { cone: c + 1, label: bad });
            continue;
        }
        let set = RaySet::from_labels(labels.iter().copied()).expect("labels checked");
        if set.len() != labels.len() {
            issues.push(RepeatedIndex { cone: c + 1 });
        }
        if let Some(&d) = cone_seen.get(&set) {
            issues.push(DuplicateCone { first: d + 1, second: c + 1 });
        } else {
            cone_seen.insert(set, c);
        }
        cones.push(set);
    }
    if !issues.is_empty() {
        return (ValidationReport { issues }, None);
    }

    for (c, &set) in cones.iter().enumerate() {
        let gens: Vec<&LatticeVector> = set.iter().map(|i| &rays[i]).collect();
        let det = lattice::determinant(&gens.iter().map(|g| g.0.clone()).collect());
        if !det.abs().is_one() {
            issues.push(NotUnimodular { cone: c + 1, det: det.abs().to_string() });
        }
    }
    let used = cones.iter().fold(RaySet::EMPTY, |a, &c| a.union(c));
    for i in 0..m {
        if !used.contains(i) {
            issues.push(UnusedRay { ray: i + 1 });
        }
    }
    if !issues.is_empty() {
        return (ValidationReport { issues }, None);
    }

    if n == 0 {
        if cones.len() != 1 {
            issues.push(MultipleCover { cones_containing_test_point: cones.len() });
        }
        return finish(issues, rays, cones);
    }

    // facet pairing
    let mut facets: HashMap<RaySet, Vec<usize>> = HashMap::new();
    for (c, &set) in cones.iter().enumerate() {
        for i in set.iter() {
            facets.entry(set.without(i)).or_default().push(c);
        }
    }
    let mut facet_list: Vec<_> = facets.iter().collect();
    facet_list.sort_by(|a, b| a.0.lex_cmp(*b.0));
    let mut adjacency = vec![Vec::new(); cones.len()];
    for (facet, owners) in facet_list {
        if owners.len() != 2 {
            issues.push(FacetCount { facet: facet.labels(), count: owners.len() });
            continue;
        }
        let (c1, c2) = (owners[0], owners[1]);
        adjacency[c1].push(c2);
        adjacency[c2].push(c1);
        let a = cones[c1].difference(*facet).first().expect("facet is proper");
        let b = cones[c2].difference(*facet).first().expect("facet is proper");
        let gens: Vec<&LatticeVector> = cones[c1].iter().map(|i| &rays[i]).collect();
        let pos = cones[c1].iter().position(|i| i == a).expect("a in cone");
        let psi = lattice::dual_basis_functional(&gens, pos).expect("cone is unimodular");
        if !psi.pair(&rays[b]).is_negative() {
            issues.push(FacetSameSide { facet: facet.labels() });
        }
    }
    if !issues.is_empty() {
        return (ValidationReport { issues }, None);
    }

    let mut visited = vec![false; cones.len()];
    let mut stack = vec![0];
    visited[0] = true;
    while let Some(c) = stack.pop() {
        for &d in &adjacency[c] {
            if !visited[d] {
                visited[d] = true;
                stack.push(d);
            }
        }
    }
    if visited.iter().any(|v| !v) {
        issues.push(Disconnected);
    }

    // a point interior to cone 0 must lie in no other closed cone
    let p = cones[0].iter().fold(LatticeVector::zero(n), |acc, i| &acc + &rays[i]);
    let count = cones
        .iter()
        .filter(|set| {
            let gens: Vec<&LatticeVector> = set.iter().map(|i| &rays[i]).collect();
            matches!(lattice::express_in_cone(&p, &gens), Ok(Some(_)))
        })
        .count();
    if count != 1 {
        issues.push(MultipleCover { cones_containing_test_point: count });
    }
    finish(issues, rays, cones)
}

fn finish(
    issues: Vec<ValidationIssue>,
    rays: Vec<LatticeVector>,
    cones: Vec<RaySet>,
) -> (ValidationReport, Option<(Vec<LatticeVector>, Vec<RaySet>)>) {
    let ok = issues.is_empty();
    (ValidationReport { issues }, ok.then_some((rays, cones)))
}

/// An accepted complete nonsingular fan.
#[derive(Clone)]
pub struct Fan {
    dim: usize,
    rays: Vec<LatticeVector>,
    max_cones: Vec<RaySet>,
    faces: HashSet<RaySet>,
    /// `cone_duals[c][k]` is the dual functional of the k-th (ascending) generator of cone c.
    cone_duals: Vec<Vec<DualFunctional>>,
    primitive: Vec<PrimitiveData>,
}

impl fmt::Debug for Fan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Fan")
            .field("dim", &self.dim)
            .field("rays", &self.rays)
            .field("max_cones", &self.max_cones)
            .finish()
    }
}

impl PartialEq for Fan {
    /// Literal equality of the ray list and of the set of maximal cones.
    fn eq(&self, other: &Self) -> bool {
        let mut a = self.max_cones.clone();
        let mut b = other.max_cones.clone();
        a.sort_by(|x, y| x.lex_cmp(*y));
        b.sort_by(|x, y| x.lex_cmp(*y));
        self.dim == other.dim && self.rays == other.rays && a == b
    }
}

impl Fan {
    pub fn from_file(file: &FanFile) -> Result<Fan> {
        match validate_parts(file) {
            (_, Some((rays, cones))) => Fan::build(file.dim, rays, cones),
            (report, None) => Err(Error::InvalidFan(report)),
        }
    }

    /// Builds a fan from ray coordinates and 1-based cone labels.
    pub fn from_parts(dim: usize, rays: &[&[i64]], max_cones: &[&[usize]]) -> Result<Fan> {
        Fan::from_file(&FanFile {
            dim,
            rays: rays.iter().map(|r| r.to_vec()).collect(),
            max_cones: max_cones.iter().map(|c| c.to_vec()).collect(),
        })
    }

    /// Validates and builds a fan from big-integer rays and 0-based cones.
    pub fn from_lattice(dim: usize, rays: Vec<LatticeVector>, max_cones: Vec<RaySet>) -> Result<Fan> {
        let file = FanFile {
            dim,
            rays: rays
                .iter()
                .map(|r| r.to_i64s().ok_or_else(|| Error::Unsupported("ray entry exceeds i64".into())))
                .collect::<Result<_>>()?,
            max_cones: max_cones.iter().map(|c| c.labels()).collect(),
        };
        Fan::from_file(&file)
    }

    fn build(dim: usize, rays: Vec<LatticeVector>, max_cones: Vec<RaySet>) -> Result<Fan> {
        let mut faces = HashSet::new();
        for &c in &max_cones {
            faces.extend(c.subsets());
        }
        let cone_duals = max_cones
            .iter()
            .map(|c| {
                let gens: Vec<&LatticeVector> = c.iter().map(|i| &rays[i]).collect();
                lattice::dual_basis(&gens)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut fan = Fan { dim, rays, max_cones, faces, cone_duals, primitive: Vec::new() };
        let sets = fan.enumerate_primitive_sets();
        fan.primitive = sets
            .into_iter()
            .map(|p| fan.compute_primitive_relation(p))
            .collect::<Result<_>>()?;
        Ok(fan)
    }

    pub fn to_file(&self) -> FanFile {
        FanFile {
            dim: self.dim,
            rays: self.rays.iter().map(|r| r.to_i64s().expect("rays fit in i64")).collect(),
            max_cones: self.max_cones.iter().map(|c| c.labels()).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &LatticeVector {
        &self.rays[i]
    }

    pub fn max_cones(&self) -> &[RaySet] {
        &self.max_cones
    }

    pub fn all_rays(&self) -> RaySet {
        RaySet::from_indices(0..self.rays.len())
    }

    pub(crate) fn check_indices(&self, set: RaySet) -> Result<()> {
        if set.bound() > self.rays.len() {
            return Err(Error::IndexOutOfRange { index: set.bound() - 1, rays: self.rays.len() });
        }
        Ok(())
    }

    /// Whether the rays span a cone of the fan.
    pub fn is_cone(&self, set: RaySet) -> Result<bool> {
        self.check_indices(set)?;
        Ok(self.faces.contains(&set))
    }

    pub(crate) fn require_cone(&self, set: RaySet) -> Result<()> {
        if self.is_cone(set)? {
            Ok(())
        } else {
            Err(Error::NotACone(set.to_string()))
        }
    }

    /// All cones of the given dimension, in canonical order.
    pub fn cones_of_dim(&self, d: usize) -> Vec<RaySet> {
        let mut v: Vec<RaySet> = self.faces.iter().copied().filter(|f| f.len() == d).collect();
        v.sort_by(|a, b| a.lex_cmp(*b));
        v
    }

    /// All cones in canonical order (by dimension, then lexicographic).
    pub fn all_cones(&self) -> Vec<RaySet> {
        (0..=self.dim).flat_map(|d| self.cones_of_dim(d)).collect()
    }

    /// Index of the first maximal cone containing `set`.
    pub fn containing_max_cone(&self, set: RaySet) -> Option<usize> {
        self.max_cones.iter().position(|c| set.is_subset(*c))
    }

    /// Maximal cones containing `set`, as indices.
    pub fn max_cones_containing(&self, set: RaySet) -> Vec<usize> {
        (0..self.max_cones.len()).filter(|&c| set.is_subset(self.max_cones[c])).collect()
    }

    /// The maximal cone across the facet `cone \ {ray}`.
    pub fn neighbor(&self, cone: usize, ray: usize) -> usize {
        let facet = self.max_cones[cone].without(ray);
        (0..self.max_cones.len())
            .find(|&c| c != cone && facet.is_subset(self.max_cones[c]))
            .expect("complete fan: every facet has two cones")
    }

    /// Dual basis of maximal cone `c`, aligned with its ascending generators.
    pub fn cone_dual_basis(&self, c: usize) -> &[DualFunctional] {
        &self.cone_duals[c]
    }

    /// Coordinates of `v` in the basis of maximal cone `c` (ascending generators).
    pub fn coordinates_in_cone(&self, c: usize, v: &LatticeVector) -> Vec<Int> {
        self.cone_duals[c].iter().map(|phi| phi.pair(v)).collect()
    }

    /// Pairings `phi(rho_1), ..., phi(rho_m)`.
    pub fn evaluate(&self, phi: &DualFunctional) -> Vec<Int> {
        self.rays.iter().map(|r| phi.pair(r)).collect()
    }

    /// Sum of the given rays.
    pub fn ray_sum(&self, set: RaySet) -> LatticeVector {
        set.iter().fold(LatticeVector::zero(self.dim), |acc, i| &acc + &self.rays[i])
    }

    fn enumerate_primitive_sets(&self) -> Vec<RaySet> {
        let m = self.rays.len();
        let mut out = Vec::new();
        // every primitive set P is F + {max P} for the face F = P \ {max P}
        let mut seen = HashSet::new();
        for &face in &self.faces {
            for j in face.bound()..m {
                let p = face.with(j);
                if self.faces.contains(&p) || !seen.insert(p) {
                    continue;
                }
                if p.iter().all(|i| self.faces.contains(&p.without(i))) {
                    out.push(p);
                }
            }
        }
        out.sort_by(|a, b| a.lex_cmp(*b));
        out
    }

    /// Minimal non-faces, sorted by their index lists.
    pub fn primitive_sets(&self) -> Vec<RaySet> {
        self.primitive.iter().map(|p| p.set).collect()
    }

    /// All primitive sets with their relations and classes.
    pub fn primitive_data(&self) -> &[PrimitiveData] {
        &self.primitive
    }

    pub fn primitive_relation(&self, set: RaySet) -> Result<PrimitiveData> {
        self.check_indices(set)?;
        self.primitive
            .iter()
            .find(|p| p.set == set)
            .cloned()
            .ok_or_else(|| Error::NotAPrimitiveSet(set.to_string()))
    }

    /// Whether `v` has zero sum when paired with the rays.
    pub fn is_curve_class(&self, beta: &CurveClass) -> bool {
        beta.len() == self.rays.len()
            && (0..self.dim).all(|k| {
                beta.0.iter().zip(&self.rays).map(|(b, r)| b * &r[k]).sum::<Int>().is_zero()
            })
    }

    pub(crate) fn check_curve_class(&self, beta: &CurveClass) -> Result<()> {
        if self.is_curve_class(beta) {
            Ok(())
        } else {
            Err(Error::InvalidCurveClass(beta.to_string()))
        }
    }
}
