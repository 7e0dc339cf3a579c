//! The classical ring `H*(X, Q)` in the basis `[X(τ_i)]` coming from a
//! shelling of the maximal cones.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::RwLock;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::fano::{self, ClassTier};
use crate::lattice::{DualFunctional, Int, LatticeVector, Rational};
use crate::ray_set::RaySet;

/// Formal polynomial in `D_1, ..., D_m`; monomials are sorted index lists.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DivisorPolynomial {
    terms: BTreeMap<Vec<usize>, Rational>,
}

impl DivisorPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Vec::new())
    }

    pub fn monomial(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        let mut terms = BTreeMap::new();
        terms.insert(indices, Rational::one());
        DivisorPolynomial { terms }
    }

    pub fn divisor(i: usize) -> Self {
        Self::monomial(vec![i])
    }

    /// Product of the divisors of a cone.
    pub fn of_set(set: RaySet) -> Self {
        Self::monomial(set.to_vec())
    }

    pub fn add_term(&mut self, mut indices: Vec<usize>, c: Rational) {
        indices.sort_unstable();
        let e = self.terms.entry(indices).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * c);
        }
        out
    }

    pub fn max_index(&self) -> Option<usize> {
        self.terms.keys().flat_map(|k| k.iter().copied()).max()
    }
}

impl Add for &DivisorPolynomial {
    type Output = DivisorPolynomial;
    fn add(self, rhs: &DivisorPolynomial) -> DivisorPolynomial {
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.add_term(k.clone(), v.clone());
        }
        out
    }
}

impl Mul for &DivisorPolynomial {
    type Output = DivisorPolynomial;
    fn mul(self, rhs: &DivisorPolynomial) -> DivisorPolynomial {
        let mut out = DivisorPolynomial::zero();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                let mut k = a.clone();
                k.extend_from_slice(b);
                out.add_term(k, x * y);
            }
        }
        out
    }
}

/// An element of `H*(X, Q)`: coordinates in the shelling basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CohomologyClass {
    pub coords: Vec<Rational>,
}

impl CohomologyClass {
    pub fn zero(size: usize) -> Self {
        CohomologyClass { coords: vec![Rational::zero(); size] }
    }

    pub fn basis(i: usize, size: usize) -> Self {
        let mut c = Self::zero(size);
        c.coords[i] = Rational::one();
        c
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        CohomologyClass { coords: self.coords.iter().map(|x| x * c).collect() }
    }

    /// Nonzero `(basis index, coefficient)` pairs.
    pub fn support(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.coords.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }
}

impl Add for &CohomologyClass {
    type Output = CohomologyClass;
    fn add(self, rhs: &CohomologyClass) -> CohomologyClass {
        CohomologyClass { coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &CohomologyClass {
    type Output = CohomologyClass;
    fn sub(self, rhs: &CohomologyClass) -> CohomologyClass {
        CohomologyClass { coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &CohomologyClass {
    type Output = CohomologyClass;
    fn neg(self) -> CohomologyClass {
        CohomologyClass { coords: self.coords.iter().map(|a| -a).collect() }
    }
}

impl fmt::Debug for CohomologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.support().map(|(i, c)| format!("{}*b{}", c, i + 1)).collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// A generic ordering `μ_1, ..., μ_s` of the maximal cones.
#[derive(Clone, Debug)]
pub struct Shelling {
    /// Maximal cone indices, in order.
    pub order: Vec<usize>,
    pub tau: Vec<RaySet>,
    pub perturbation: LatticeVector,
    /// `y_i(ρ')`, strictly decreasing.
    pub heights: Vec<Int>,
}

impl Shelling {
    pub fn degree(&self, i: usize) -> usize {
        self.tau[i].len()
    }

    /// Number of `τ_i` of each dimension `0..=n`.
    pub fn census(&self, n: usize) -> Vec<usize> {
        let mut h = vec![0; n + 1];
        for t in &self.tau {
            h[t.len()] += 1;
        }
        h
    }
}

/// Orders the maximal cones by `y_i(ρ')`, where `y_i` is the functional equal to
/// 1 on the generators of `μ_i`, and reads off `τ_i`.
pub fn shelling(fan: &Fan) -> Shelling {
    let n = fan.dim();
    let ys: Vec<DualFunctional> = (0..fan.max_cones().len())
        .map(|c| {
            let duals = fan.cone_dual_basis(c);
            DualFunctional((0..n).map(|k| duals.iter().map(|d| &d.0[k]).sum()).collect())
        })
        .collect();
    let base = fan.ray_sum(fan.all_rays());
    let perturbation = if ys.len() <= 1 {
        base
    } else {
        let mut found = None;
        'shells: for r in 1i64.. {
            for w in (0..n).map(|_| -r..=r).multi_cartesian_product() {
                if w.iter().all(|x| x.abs() < r) {
                    continue;
                }
                let v = &base + &LatticeVector::from_i64s(&w);
                if ys.iter().map(|y| y.pair(&v)).all_unique() {
                    found = Some(v);
                    break 'shells;
                }
            }
        }
        found.expect("scan terminates")
    };
    let mut order: Vec<usize> = (0..ys.len()).collect();
    order.sort_by_key(|&c| std::cmp::Reverse(ys[c].pair(&perturbation)));
    let heights = order.iter().map(|&c| ys[c].pair(&perturbation)).collect();
    let position: Vec<usize> = {
        let mut p = vec![0; order.len()];
        for (i, &c) in order.iter().enumerate() {
            p[c] = i;
        }
        p
    };
    let tau = order
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let mu = fan.max_cones()[c];
            mu.iter().fold(mu, |t, g| {
                let nb = fan.neighbor(c, g);
                if position[nb] > i {
                    t.intersection(fan.max_cones()[nb])
                } else {
                    t
                }
            })
        })
        .collect();
    Shelling { order, tau, perturbation, heights }
}

type Exponents = Vec<u32>;
type Reduced = HashMap<Exponents, Rational>;

fn poly_mul(a: &Reduced, b: &Reduced) -> Reduced {
    let mut out: Reduced = HashMap::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Exponents = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *out.entry(e).or_insert_with(Rational::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Exponent vectors of the given total degree, in a fixed order.
fn monomials_of_degree(vars: usize, d: usize) -> Vec<Exponents> {
    (0..vars)
        .combinations_with_replacement(d)
        .map(|c| {
            let mut e = vec![0u32; vars];
            for i in c {
                e[i] += 1;
            }
            e
        })
        .collect()
}

/// Reduced row echelon form over `Q`.
#[derive(Clone, Debug, Default)]
struct Echelon {
    rows: Vec<(usize, Vec<Rational>)>,
}

impl Echelon {
    fn reduce(&self, v: &mut [Rational]) {
        for (p, row) in &self.rows {
            if !v[*p].is_zero() {
                let c = v[*p].clone();
                for (x, r) in v.iter_mut().zip(row) {
                    *x -= &c * r;
                }
            }
        }
    }

    fn insert(&mut self, mut v: Vec<Rational>) {
        self.reduce(&mut v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else { return };
        let inv = v[p].recip();
        for x in v.iter_mut() {
            *x *= &inv;
        }
        for (_, row) in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let c = row[p].clone();
                for (x, r) in row.iter_mut().zip(&v) {
                    *x -= &c * r;
                }
            }
        }
        self.rows.push((p, v));
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    fn is_pivot(&self, col: usize) -> bool {
        self.rows.iter().any(|(p, _)| *p == col)
    }
}

fn invert(mut a: Vec<Vec<Rational>>) -> Option<Vec<Vec<Rational>>> {
    let k = a.len();
    let mut inv: Vec<Vec<Rational>> =
        (0..k).map(|i| (0..k).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect();
    for col in 0..k {
        let p = (col..k).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, p);
        inv.swap(col, p);
        let c = a[col][col].recip();
        for j in 0..k {
            a[col][j] *= &c;
            inv[col][j] *= &c;
        }
        for r in 0..k {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..k {
                    let (x, y) = (a[col][j].clone(), inv[col][j].clone());
                    a[r][j] -= &f * x;
                    inv[r][j] -= &f * y;
                }
            }
        }
    }
    Some(inv)
}

/// Quotient data in one degree.
#[derive(Debug)]
struct Graded {
    columns: HashMap<Exponents, usize>,
    relations: Echelon,
    free_columns: Vec<usize>,
    /// Shelling indices of this degree.
    basis: Vec<usize>,
    /// Maps free coordinates to basis coordinates.
    to_basis: Vec<Vec<Rational>>,
}

/// `H*(X, Q)` with cached reduction data.
#[derive(Debug)]
pub struct CohomologyRing {
    fan: Fan,
    shelling: Shelling,
    /// Rays outside the reference cone; they index the reduced variables.
    free_rays: Vec<usize>,
    /// Each divisor as a linear form in the reduced variables.
    substitution: Vec<Reduced>,
    graded: Vec<Graded>,
    top: usize,
    monomial_cache: RwLock<HashMap<Vec<usize>, CohomologyClass>>,
    products: RwLock<HashMap<(usize, usize), CohomologyClass>>,
}

impl CohomologyRing {
    pub fn new(fan: &Fan) -> Result<Self> {
        fano::require_tier(fan, ClassTier::Fano)?;
        let n = fan.dim();
        let m = fan.num_rays();
        let shelling = shelling(fan);
        let reference = fan.max_cones()[shelling.order[shelling.order.len() - 1]];
        let ref_index = fan.max_cones().iter().position(|&c| c == reference).unwrap();
        let free_rays: Vec<usize> = (0..m).filter(|&i| !reference.contains(i)).collect();
        let r = free_rays.len();
        let duals = fan.cone_dual_basis(ref_index);
        let mut substitution = Vec::with_capacity(m);
        for i in 0..m {
            let mut lin: Reduced = HashMap::new();
            if let Some(k) = free_rays.iter().position(|&j| j == i) {
                let mut e = vec![0u32; r];
                e[k] = 1;
                lin.insert(e, Rational::one());
            } else {
                let slot = reference.iter().position(|g| g == i).unwrap();
                for (k, &j) in free_rays.iter().enumerate() {
                    let c = duals[slot].pair(fan.ray(j));
                    if !c.is_zero() {
                        let mut e = vec![0u32; r];
                        e[k] = 1;
                        lin.insert(e, Rational::from_integer(-c));
                    }
                }
            }
            substitution.push(lin);
        }
        let mut ring = CohomologyRing {
            fan: fan.clone(),
            shelling,
            free_rays,
            substitution,
            graded: Vec::new(),
            top: 0,
            monomial_cache: RwLock::new(HashMap::new()),
            products: RwLock::new(HashMap::new()),
        };
        let census = ring.shelling.census(n);
        for d in 0..=n {
            let cols = monomials_of_degree(r, d);
            let columns: HashMap<Exponents, usize> = cols.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
            let mut relations = Echelon::default();
            for p in fan.primitive_sets() {
                if p.len() > d {
                    continue;
                }
                let gen = ring.substitute(&p.to_vec());
                for e in monomials_of_degree(r, d - p.len()) {
                    let mut g = HashMap::new();
                    g.insert(e, Rational::one());
                    relations.insert(ring.dense(&poly_mul(&gen, &g), &columns));
                }
            }
            let free_columns: Vec<usize> = (0..cols.len()).filter(|&c| !relations.is_pivot(c)).collect();
            if free_columns.len() != census[d] {
                return Err(Error::Cohomology(format!(
                    "degree {}: quotient has dimension {} but the shelling has {} classes",
                    d,
                    free_columns.len(),
                    census[d]
                )));
            }
            let basis: Vec<usize> = (0..ring.shelling.tau.len()).filter(|&i| ring.shelling.degree(i) == d).collect();
            let mut graded = Graded { columns, relations, free_columns, basis, to_basis: Vec::new() };
            let rows: Vec<Vec<Rational>> = graded
                .basis
                .iter()
                .map(|&i| {
                    let p = ring.substitute(&ring.shelling.tau[i].to_vec());
                    ring.free_coordinates(&graded, &p)
                })
                .collect();
            graded.to_basis = invert(rows).ok_or_else(|| {
                Error::Cohomology(format!("degree {}: shelling monomials are dependent", d))
            })?;
            ring.graded.push(graded);
        }
        ring.top = (0..ring.shelling.tau.len()).find(|&i| ring.shelling.degree(i) == n).unwrap();
        Ok(ring)
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn shelling(&self) -> &Shelling {
        &self.shelling
    }

    /// Number of basis classes.
    pub fn rank(&self) -> usize {
        self.shelling.tau.len()
    }

    pub fn basis_degree(&self, i: usize) -> usize {
        self.shelling.degree(i)
    }

    pub fn basis_class(&self, i: usize) -> CohomologyClass {
        CohomologyClass::basis(i, self.rank())
    }

    pub fn unit(&self) -> CohomologyClass {
        self.basis_class(self.shelling.tau.iter().position(|t| t.is_empty()).unwrap())
    }

    pub fn point(&self) -> CohomologyClass {
        self.basis_class(self.top)
    }

    pub fn zero(&self) -> CohomologyClass {
        CohomologyClass::zero(self.rank())
    }

    /// Betti numbers read from the shelling.
    pub fn census(&self) -> Vec<usize> {
        self.shelling.census(self.fan.dim())
    }

    /// Dimension of the degree-`d` quotient found by row reduction.
    pub fn quotient_dimension(&self, d: usize) -> usize {
        self.graded.get(d).map_or(0, |g| g.columns.len() - g.relations.rank())
    }

    /// Degree of a nonzero homogeneous class.
    pub fn degree_of(&self, a: &CohomologyClass) -> Option<usize> {
        let degrees: Vec<usize> = a.support().map(|(i, _)| self.basis_degree(i)).unique().collect();
        (degrees.len() == 1).then(|| degrees[0])
    }

    /// Part of `a` in degree `d`.
    pub fn component(&self, a: &CohomologyClass, d: usize) -> CohomologyClass {
        let mut out = a.clone();
        for (i, c) in out.coords.iter_mut().enumerate() {
            if self.basis_degree(i) != d {
                *c = Rational::zero();
            }
        }
        out
    }

    fn substitute(&self, monomial: &[usize]) -> Reduced {
        let mut acc: Reduced = HashMap::new();
        acc.insert(vec![0; self.free_rays.len()], Rational::one());
        for &i in monomial {
            acc = poly_mul(&acc, &self.substitution[i]);
        }
        acc
    }

    fn dense(&self, p: &Reduced, columns: &HashMap<Exponents, usize>) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); columns.len()];
        for (e, c) in p {
            v[columns[e]] += c;
        }
        v
    }

    fn free_coordinates(&self, g: &Graded, p: &Reduced) -> Vec<Rational> {
        let mut v = self.dense(p, &g.columns);
        g.relations.reduce(&mut v);
        g.free_columns.iter().map(|&c| v[c].clone()).collect()
    }

    /// Class of `∏ D_i` over a multiset of ray indices.
    pub fn monomial_class(&self, monomial: &[usize]) -> Result<CohomologyClass> {
        let m = self.fan.num_rays();
        if let Some(&bad) = monomial.iter().find(|&&i| i >= m) {
            return Err(Error::IndexOutOfRange { index: bad + 1, rays: m });
        }
        let mut key = monomial.to_vec();
        key.sort_unstable();
        if let Some(c) = self.monomial_cache.read().unwrap().get(&key) {
            return Ok(c.clone());
        }
        let d = key.len();
        let mut out = self.zero();
        if let Some(g) = self.graded.get(d) {
            let free = self.free_coordinates(g, &self.substitute(&key));
            for (k, &b) in g.basis.iter().enumerate() {
                out.coords[b] = (0..free.len()).map(|j| &free[j] * &g.to_basis[j][k]).sum();
            }
        }
        self.monomial_cache.write().unwrap().insert(key, out.clone());
        Ok(out)
    }

    pub fn normal_form(&self, poly: &DivisorPolynomial) -> Result<CohomologyClass> {
        let mut out = self.zero();
        for (mono, c) in poly.terms() {
            out = &out + &self.monomial_class(mono)?.scaled(c);
        }
        Ok(out)
    }

    /// `[V(σ)] = ∏_{i∈σ} D_i`.
    pub fn stratum_class(&self, sigma: RaySet) -> Result<CohomologyClass> {
        self.fan.require_cone(sigma)?;
        self.monomial_class(&sigma.to_vec())
    }

    fn basis_product(&self, i: usize, j: usize) -> CohomologyClass {
        let key = (i.min(j), i.max(j));
        if let Some(c) = self.products.read().unwrap().get(&key) {
            return c.clone();
        }
        let mut mono = self.shelling.tau[i].to_vec();
        mono.extend(self.shelling.tau[j].iter());
        let c = self.monomial_class(&mono).expect("basis indices are valid");
        self.products.write().unwrap().insert(key, c.clone());
        c
    }

    pub fn cup(&self, a: &CohomologyClass, b: &CohomologyClass) -> CohomologyClass {
        let mut out = self.zero();
        for (i, x) in a.support() {
            for (j, y) in b.support() {
                out = &out + &self.basis_product(i, j).scaled(&(x * y));
            }
        }
        out
    }

    /// Coefficient of the point class.
    pub fn integrate(&self, a: &CohomologyClass) -> Rational {
        a.coords[self.top].clone()
    }

    /// Square-free monomial lifting a basis class.
    pub fn basis_monomial(&self, i: usize) -> RaySet {
        self.shelling.tau[i]
    }
}

/// Sign pattern used to cross-check `τ_i`: generators whose coordinate of
/// `ρ'` in the basis of `μ_i` is negative.
pub fn tau_by_coordinates(fan: &Fan, s: &Shelling) -> Vec<RaySet> {
    s.order
        .iter()
        .map(|&c| {
            let coords = fan.coordinates_in_cone(c, &s.perturbation);
            RaySet::from_indices(
                fan.max_cones()[c].iter().zip(coords).filter(|(_, x)| x.is_negative()).map(|(g, _)| g),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn l(xs: &[usize]) -> RaySet {
        RaySet::from_labels(xs.iter().copied()).unwrap()
    }

    #[test]
    fn census_examples() {
        assert_eq!(shelling(&catalog::p2()).census(2), vec![1, 1, 1]);
        assert_eq!(shelling(&catalog::f1()).census(2), vec![1, 2, 1]);
        assert_eq!(shelling(&catalog::p1xp1()).census(2), vec![1, 2, 1]);
        assert_eq!(shelling(&catalog::bl3_p2()).census(2), vec![1, 4, 1]);
        assert_eq!(shelling(&catalog::bl_point_p3()).census(3), vec![1, 2, 2, 1]);
    }

    #[test]
    fn shelling_order_properties() {
        for (_, fan) in catalog::surface_corpus() {
            let s = shelling(&fan);
            assert!(s.heights.windows(2).all(|w| w[0] > w[1]));
            assert_eq!(s.tau, tau_by_coordinates(&fan, &s));
            for (i, t) in s.tau.iter().enumerate() {
                for (j, &c) in s.order.iter().enumerate() {
                    if t.is_subset(fan.max_cones()[c]) {
                        assert!(i <= j);
                    }
                }
            }
        }
    }

    #[test]
    fn normal_form_examples() {
        let p2 = catalog::p2();
        let ring = CohomologyRing::new(&p2).unwrap();
        let d: Vec<_> = (0..3).map(|i| ring.monomial_class(&[i]).unwrap()).collect();
        assert_eq!(d[0], d[1]);
        assert_eq!(d[1], d[2]);
        assert!(ring.monomial_class(&[0, 1, 2]).unwrap().is_zero());
        assert_eq!(ring.normal_form(&DivisorPolynomial::one()).unwrap(), ring.unit());
        let h = d[0].clone();
        assert_eq!(ring.cup(&h, &h), ring.point());
        assert!(ring.cup(&ring.point(), &h).is_zero());
        assert_eq!(ring.stratum_class(l(&[1, 2])).unwrap(), ring.point());
        assert_eq!(ring.stratum_class(RaySet::EMPTY).unwrap(), ring.unit());
        assert_eq!(ring.integrate(&ring.cup(&h, &h)), Rational::one());
        assert!(ring.integrate(&ring.unit()).is_zero());
    }

    #[test]
    fn f1_relations() {
        let f1 = catalog::f1();
        let ring = CohomologyRing::new(&f1).unwrap();
        let d = |i: usize| ring.monomial_class(&[i]).unwrap();
        // D1 - D3 + D4 = 0 and D2 - D3 + D4 = 0
        assert_eq!(d(0), d(1));
        assert_eq!(&d(0) + &d(3), d(2));
        // exceptional curve squares to -1
        assert_eq!(ring.integrate(&ring.cup(&d(3), &d(3))), Rational::from_integer((-1).into()));
        assert_eq!(ring.integrate(&ring.cup(&d(2), &d(2))), Rational::one());
        assert!(ring.stratum_class(l(&[1, 2])).is_err());
        assert_eq!(ring.degree_of(&ring.stratum_class(l(&[3])).unwrap()), Some(1));
    }

    #[test]
    fn max_cones_give_point() {
        for (_, fan) in catalog::surface_corpus() {
            let ring = CohomologyRing::new(&fan).unwrap();
            for &c in fan.max_cones() {
                assert_eq!(ring.stratum_class(c).unwrap(), ring.point());
            }
        }
        let fan = catalog::bl_point_p3();
        let ring = CohomologyRing::new(&fan).unwrap();
        for &c in fan.max_cones() {
            assert_eq!(ring.stratum_class(c).unwrap(), ring.point());
        }
    }

    #[test]
    fn refuses_non_fano() {
        assert!(matches!(CohomologyRing::new(&catalog::hirzebruch(2)), Err(Error::NotFano)));
    }
}
