//! Trees of torus-invariant curves joining a fixed point to a divisor, and
//! tree representatives of effective classes.

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::fan::{CurveClass, Fan};
use crate::fano::{self, ClassTier};
use crate::lattice::Int;
use crate::ray_set::RaySet;

/// Invariant curve `X(τ)` for a wall `τ`, taken with multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeEdge {
    pub cone: RaySet,
    pub multiplicity: u64,
    /// Class of one copy of the curve.
    pub cls: CurveClass,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricTree {
    /// Maximal cone of the starting fixed point.
    pub root: usize,
    /// Divisor reached.
    pub target: usize,
    pub edges: Vec<TreeEdge>,
    pub cls: CurveClass,
    /// False when built outside the tier where the degree bound is proved.
    pub degree_verified: bool,
}

impl ToricTree {
    pub fn degree(&self) -> Int {
        self.cls.degree()
    }
}

/// `1 - Σ` of the coordinates of `ρ_d` in the basis of maximal cone `mu`.
pub fn signed_distance(fan: &Fan, mu: usize, d: usize) -> Int {
    Int::one() - fan.coordinates_in_cone(mu, fan.ray(d)).iter().sum::<Int>()
}

/// Class of the invariant curve of the wall of `mu` opposite generator `g`.
pub fn wall_class(fan: &Fan, mu: usize, g: usize) -> CurveClass {
    let cone = fan.max_cones()[mu];
    let nb = fan.neighbor(mu, g);
    let new = fan.max_cones()[nb].difference(cone).first().unwrap();
    let coords = fan.coordinates_in_cone(mu, fan.ray(new));
    let mut cls = CurveClass::zero(fan.num_rays());
    for (f, a) in cone.iter().zip(coords) {
        if f != g {
            cls.0[f] = -a;
        }
    }
    cls.0[g] = Int::one();
    cls.0[new] = Int::one();
    cls
}

/// The class a minimal tree from `X(mu)` to `D_d` must carry.
pub fn expected_tree_class(fan: &Fan, mu: usize, d: usize) -> CurveClass {
    let cone = fan.max_cones()[mu];
    let mut cls = CurveClass::zero(fan.num_rays());
    if cone.contains(d) {
        return cls;
    }
    cls.0[d] = Int::one();
    for (g, c) in cone.iter().zip(fan.coordinates_in_cone(mu, fan.ray(d))) {
        cls.0[g] = -c;
    }
    cls
}

const STEP_LIMIT: usize = 10_000;

fn walk(fan: &Fan, root: usize, d: usize, degree_verified: bool) -> Result<ToricTree> {
    fan.check_indices(RaySet::singleton(d))?;
    if root >= fan.max_cones().len() {
        return Err(Error::IndexOutOfRange { index: root + 1, rays: fan.max_cones().len() });
    }
    let mut edges: Vec<TreeEdge> = Vec::new();
    let mut cls = CurveClass::zero(fan.num_rays());
    let mut mu = root;
    let mut steps = 0;
    while !fan.max_cones()[mu].contains(d) {
        steps += 1;
        if steps > STEP_LIMIT {
            return Err(Error::PreconditionFailed(format!(
                "no tree from cone {} to D{} within {} steps",
                root + 1,
                d + 1,
                STEP_LIMIT
            )));
        }
        let cone = fan.max_cones()[mu];
        let coords = fan.coordinates_in_cone(mu, fan.ray(d));
        let (g, c) = cone
            .iter()
            .zip(coords)
            .find(|(_, c)| c.is_negative())
            .expect("a ray outside the cone has a negative coordinate");
        let mult = (-c).to_u64().ok_or_else(|| Error::Unsupported("multiplicity overflow".into()))?;
        let edge_cls = wall_class(fan, mu, g);
        cls = &cls + &edge_cls.scaled(&Int::from(mult));
        let wall = cone.without(g);
        match edges.iter_mut().find(|e| e.cone == wall) {
            Some(e) => e.multiplicity += mult,
            None => edges.push(TreeEdge { cone: wall, multiplicity: mult, cls: edge_cls }),
        }
        mu = fan.neighbor(mu, g);
    }
    Ok(ToricTree { root, target: d, edges, cls, degree_verified })
}

/// A tree of invariant curves from the fixed point `X(mu)` to `D_d`, of degree
/// `signed_distance(mu, d)`.
///
/// At each step the wall opposite the first generator with coordinate -1 is
/// crossed.
pub fn min_tree(fan: &Fan, mu: usize, d: usize) -> Result<ToricTree> {
    fano::require_tier(fan, ClassTier::SubvarietiesFano)?;
    walk(fan, mu, d, true)
}

/// A forest rooted at one maximal cone whose total class is `beta`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeForest {
    pub root: Option<usize>,
    /// Trees with their number of copies.
    pub trees: Vec<(ToricTree, u64)>,
    pub cls: CurveClass,
}

/// Represents `beta` by `∫_β D_ρ` copies of a tree to `D_ρ` for each ray
/// outside a maximal cone containing the rays `beta` meets negatively.
///
/// Below the tier where [`min_tree`] applies, the same walk runs with
/// multiplicity `-c` at a coordinate `c < 0`; its trees are flagged as
/// unverified.
pub fn tree_for_class(fan: &Fan, beta: &CurveClass) -> Result<TreeForest> {
    fan.check_curve_class(beta)?;
    if beta.is_zero() {
        return Ok(TreeForest { root: None, trees: Vec::new(), cls: beta.clone() });
    }
    let neg = beta.negative_support();
    let mu = fan.containing_max_cone(neg).ok_or_else(|| {
        Error::PreconditionFailed(format!("rays {} met negatively do not share a cone", neg))
    })?;
    let verified = fano::tier(fan) >= ClassTier::SubvarietiesFano;
    let cone = fan.max_cones()[mu];
    let mut trees = Vec::new();
    let mut cls = CurveClass::zero(fan.num_rays());
    for rho in (0..fan.num_rays()).filter(|&r| !cone.contains(r)) {
        let b = beta.pairing(rho);
        if b.is_zero() {
            continue;
        }
        let copies = b.to_u64().expect("pairing outside the root cone is nonnegative");
        let t = walk(fan, mu, rho, verified)?;
        cls = &cls + &t.cls.scaled(b);
        trees.push((t, copies));
    }
    Ok(TreeForest { root: Some(mu), trees, cls })
}
