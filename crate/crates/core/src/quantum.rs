//! The small quantum ring `QH*(X)` of a toric variety in the class.
//!
//! Elements are finite sums `Σ_β q^β α_β` with `β` an effective curve class
//! and `α_β ∈ H*(X, Q)`. Products are computed by lifting basis classes to
//! their Giambelli polynomials and rewriting each divisor monomial to normal
//! form with the relations of the presentation.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul};
use std::sync::RwLock;

use num_traits::{One, Zero};

use crate::cohomology::{CohomologyClass, CohomologyRing, DivisorPolynomial};
use crate::error::{Error, Result};
use crate::fan::{CurveClass, Fan};
use crate::fano::{self, family_predicates, ClassTier, ExceptionalData};
use crate::lattice::{Int, Rational};
use crate::ray_set::RaySet;

/// `Σ_β q^β α_β`, keyed by the exponent `β`.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct QuantumClass {
    terms: BTreeMap<CurveClass, CohomologyClass>,
}

impl QuantumClass {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(beta: CurveClass, class: CohomologyClass) -> Self {
        let mut q = Self::zero();
        q.add_term(beta, &class);
        q
    }

    /// A classical class, placed at `q^0`.
    pub fn classical(class: CohomologyClass, m: usize) -> Self {
        Self::term(CurveClass::zero(m), class)
    }

    pub fn add_term(&mut self, beta: CurveClass, class: &CohomologyClass) {
        if class.is_zero() {
            return;
        }
        let sum = match self.terms.get(&beta) {
            Some(c) => c + class,
            None => class.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&beta);
        } else {
            self.terms.insert(beta, sum);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CurveClass, &CohomologyClass)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `q^β`.
    pub fn coefficient(&self, beta: &CurveClass) -> Option<&CohomologyClass> {
        self.terms.get(beta)
    }

    /// The `q^0` part.
    pub fn classical_part(&self) -> Option<&CohomologyClass> {
        self.terms.iter().find(|(b, _)| b.is_zero()).map(|(_, c)| c)
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for (b, x) in &self.terms {
            out.add_term(b.clone(), &x.scaled(c));
        }
        out
    }

    /// Multiplies by `q^β`.
    pub fn shifted(&self, beta: &CurveClass) -> Self {
        let mut out = Self::zero();
        for (b, x) in &self.terms {
            out.add_term(b + beta, x);
        }
        out
    }

    pub fn exponents(&self) -> impl Iterator<Item = &CurveClass> {
        self.terms.keys()
    }
}

impl Add for &QuantumClass {
    type Output = QuantumClass;
    fn add(self, rhs: &QuantumClass) -> QuantumClass {
        let mut out = self.clone();
        for (b, x) in &rhs.terms {
            out.add_term(b.clone(), x);
        }
        out
    }
}

impl fmt::Debug for QuantumClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(b, c)| format!("q^{} [{:?}]", b, c)).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Formal polynomial in `D_1, ..., D_m` over the semigroup ring of curve classes.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct QuantumPolynomial {
    terms: BTreeMap<(CurveClass, Vec<usize>), Rational>,
}

impl QuantumPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(beta: CurveClass, mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        let mut p = Self::zero();
        p.terms.insert((beta, indices), Rational::one());
        p
    }

    pub fn add_term(&mut self, beta: CurveClass, mut indices: Vec<usize>, c: Rational) {
        indices.sort_unstable();
        let key = (beta, indices);
        let v = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *v += c;
        if v.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CurveClass, &Vec<usize>, &Rational)> {
        self.terms.iter().map(|((b, m), c)| (b, m, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms without `q`.
    pub fn classical_part(&self) -> DivisorPolynomial {
        let mut out = DivisorPolynomial::zero();
        for ((b, m), c) in &self.terms {
            if b.is_zero() {
                out.add_term(m.clone(), c.clone());
            }
        }
        out
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for ((b, m), x) in &self.terms {
            out.add_term(b.clone(), m.clone(), x * c);
        }
        out
    }
}

impl Add for &QuantumPolynomial {
    type Output = QuantumPolynomial;
    fn add(self, rhs: &QuantumPolynomial) -> QuantumPolynomial {
        let mut out = self.clone();
        for ((b, m), c) in &rhs.terms {
            out.add_term(b.clone(), m.clone(), c.clone());
        }
        out
    }
}

impl Mul for &QuantumPolynomial {
    type Output = QuantumPolynomial;
    fn mul(self, rhs: &QuantumPolynomial) -> QuantumPolynomial {
        let mut out = QuantumPolynomial::zero();
        for ((b1, m1), c1) in &self.terms {
            for ((b2, m2), c2) in &rhs.terms {
                let mut m = m1.clone();
                m.extend_from_slice(m2);
                out.add_term(b1 + b2, m, c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for QuantumPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for ((b, m), c) in &self.terms {
            let mut factors = Vec::new();
            if !c.is_one() {
                factors.push(c.to_string());
            }
            if !b.is_zero() {
                factors.push(format!("q^{}", b));
            }
            factors.extend(m.iter().map(|i| format!("D{}", i + 1)));
            if factors.is_empty() {
                factors.push("1".into());
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for QuantumPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `D_1 ⋯ D_k = q^β ∏ (D'_j)^{a_j}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformedRelation {
    pub set: RaySet,
    /// `(ray index, exponent a_j)`.
    pub rhs: Vec<(usize, Int)>,
    pub beta: CurveClass,
}

/// Generators `D_1..D_m`, linear relations `Σ φ(ρ_i) D_i` for the standard
/// basis of `M`, and one deformed relation per primitive set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub generators: usize,
    pub linear_relations: Vec<Vec<Int>>,
    pub deformed_relations: Vec<DeformedRelation>,
}

pub fn presentation(fan: &Fan) -> Result<Presentation> {
    fano::require_tier(fan, ClassTier::Fano)?;
    let linear_relations = (0..fan.dim()).map(|k| fan.rays().iter().map(|r| r[k].clone()).collect()).collect();
    let deformed_relations = fan
        .primitive_data()
        .iter()
        .map(|p| DeformedRelation {
            set: p.set,
            rhs: p.rhs_terms().map(|(j, a)| (j, a.clone())).collect(),
            beta: p.cls.clone(),
        })
        .collect();
    Ok(Presentation { generators: fan.num_rays(), linear_relations, deformed_relations })
}

/// Choices made while rewriting a monomial. Index arguments are positions
/// in the candidate lists, which are sorted canonically.
pub trait ReductionStrategy {
    fn primitive_set(&mut self, candidates: &[RaySet]) -> usize;
    fn repeated_index(&mut self, candidates: &[usize]) -> usize;
    fn maximal_cone(&mut self, candidates: &[usize]) -> usize;
}

/// Always the first candidate.
#[derive(Clone, Copy, Debug, Default)]
pub struct Canonical;

impl ReductionStrategy for Canonical {
    fn primitive_set(&mut self, _: &[RaySet]) -> usize {
        0
    }
    fn repeated_index(&mut self, _: &[usize]) -> usize {
        0
    }
    fn maximal_cone(&mut self, _: &[usize]) -> usize {
        0
    }
}

/// A fan in the class together with its classical ring and caches.
pub struct QuantumRing {
    ring: CohomologyRing,
    exceptional: Vec<ExceptionalData>,
    primitive_sorted: Vec<RaySet>,
    memo: RwLock<HashMap<Vec<usize>, QuantumClass>>,
    basis_products: RwLock<HashMap<(usize, usize), QuantumClass>>,
}

impl QuantumRing {
    pub fn new(fan: &Fan) -> Result<Self> {
        fano::require_tier(fan, ClassTier::FullClass)?;
        let ring = CohomologyRing::new(fan)?;
        let exceptional = fano::exceptional_sets(fan)?;
        let mut primitive_sorted = fan.primitive_sets();
        primitive_sorted.sort_by(|a, b| a.lex_cmp(*b));
        Ok(QuantumRing {
            ring,
            exceptional,
            primitive_sorted,
            memo: RwLock::new(HashMap::new()),
            basis_products: RwLock::new(HashMap::new()),
        })
    }

    pub fn fan(&self) -> &Fan {
        self.ring.fan()
    }

    pub fn cohomology(&self) -> &CohomologyRing {
        &self.ring
    }

    fn m(&self) -> usize {
        self.fan().num_rays()
    }

    pub fn basis_class(&self, i: usize) -> QuantumClass {
        QuantumClass::classical(self.ring.basis_class(i), self.m())
    }

    pub fn unit(&self) -> QuantumClass {
        QuantumClass::classical(self.ring.unit(), self.m())
    }

    fn special_families(&self, sigma: RaySet, keep: impl Fn(&[ExceptionalData]) -> bool) -> Vec<Vec<ExceptionalData>> {
        let special: Vec<&ExceptionalData> =
            self.exceptional.iter().filter(|e| fano::is_special(e, sigma)).collect();
        let mut out = Vec::new();
        for mask in 0u64..(1u64 << special.len()) {
            let family: Vec<ExceptionalData> = (0..special.len())
                .filter(|k| mask >> k & 1 == 1)
                .map(|k| special[k].clone())
                .collect();
            if keep(&family) {
                out.push(family);
            }
        }
        out
    }

    fn family_class(&self, family: &[ExceptionalData]) -> CurveClass {
        family.iter().fold(CurveClass::zero(self.m()), |a, e| &a + &e.cls)
    }

    /// The quantum polynomial equal to `[V(σ)]` in `QH*(X)`.
    pub fn giambelli(&self, sigma: RaySet) -> Result<QuantumPolynomial> {
        self.fan().require_cone(sigma)?;
        let mut out = QuantumPolynomial::zero();
        for family in self.special_families(sigma, |f| {
            let p = family_predicates(f);
            p.distinct_exc && p.no_cycles
        }) {
            let covered = family.iter().fold(RaySet::EMPTY, |a, e| a.union(e.set));
            out.add_term(self.family_class(&family), sigma.difference(covered).to_vec(), Rational::one());
        }
        Ok(out)
    }

    /// The quantum product `∏_{i∈σ} D_i`.
    pub fn divisor_product_closed_form(&self, sigma: RaySet) -> Result<QuantumClass> {
        self.fan().require_cone(sigma)?;
        let mut out = QuantumClass::zero();
        for family in self.special_families(sigma, |f| {
            let p = family_predicates(f);
            p.distinct_exc && p.no_overlaps
        }) {
            let beta = self.family_class(&family);
            let kept = RaySet::from_indices(sigma.iter().filter(|&i| !beta.pairing(i).is_one()));
            let sign = if family.len() % 2 == 0 { Rational::one() } else { -Rational::one() };
            out.add_term(beta, &self.ring.stratum_class(kept)?.scaled(&sign));
        }
        Ok(out)
    }

    /// Normal form of the quantum product of the listed divisors.
    pub fn reduce_monomial(&self, monomial: &[usize]) -> Result<QuantumClass> {
        let mut key = monomial.to_vec();
        key.sort_unstable();
        self.fan().check_indices(RaySet::from_indices(key.iter().copied()))?;
        if let Some(v) = self.memo.read().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let v = self.reduce_step(&key, &mut Canonical, true)?;
        for beta in v.exponents() {
            if !beta.is_zero() && !self.fan().is_effective(beta)? {
                return Err(Error::NotEffective(format!("reduction of {:?} produced q^{}", key, beta)));
            }
        }
        self.memo.write().unwrap().insert(key, v.clone());
        Ok(v)
    }

    /// As [`QuantumRing::reduce_monomial`], with the rewrite choices delegated.
    pub fn reduce_monomial_with(&self, monomial: &[usize], strategy: &mut dyn ReductionStrategy) -> Result<QuantumClass> {
        let mut key = monomial.to_vec();
        key.sort_unstable();
        self.fan().check_indices(RaySet::from_indices(key.iter().copied()))?;
        self.reduce_step(&key, strategy, false)
    }

    fn recurse(&self, key: Vec<usize>, strategy: &mut dyn ReductionStrategy, memo: bool) -> Result<QuantumClass> {
        if memo {
            self.reduce_monomial(&key)
        } else {
            self.reduce_step(&key, strategy, false)
        }
    }

    fn reduce_step(&self, key: &[usize], strategy: &mut dyn ReductionStrategy, memo: bool) -> Result<QuantumClass> {
        let fan = self.fan();
        let support = RaySet::from_indices(key.iter().copied());
        let candidates: Vec<RaySet> =
            self.primitive_sorted.iter().copied().filter(|p| p.is_subset(support)).collect();
        if !candidates.is_empty() {
            let p = candidates[strategy.primitive_set(&candidates)];
            let data = fan.primitive_data().iter().find(|d| d.set == p).unwrap();
            let mut rest = key.to_vec();
            for i in p.iter() {
                let pos = rest.iter().position(|&x| x == i).unwrap();
                rest.remove(pos);
            }
            for (j, a) in data.rhs_terms() {
                let a: usize = a.try_into().map_err(|_| Error::Unsupported("huge exponent".into()))?;
                rest.extend(std::iter::repeat(j).take(a));
            }
            rest.sort_unstable();
            return Ok(self.recurse(rest, strategy, memo)?.shifted(&data.cls));
        }
        if support.len() == key.len() {
            return self.divisor_product_closed_form(support);
        }
        let repeated: Vec<usize> = support.iter().filter(|&i| key.iter().filter(|&&x| x == i).count() > 1).collect();
        let i = repeated[strategy.repeated_index(&repeated)];
        let cones = fan.max_cones_containing(support);
        let c = cones[strategy.maximal_cone(&cones)];
        let mu = fan.max_cones()[c];
        let slot = mu.iter().position(|g| g == i).unwrap();
        let phi = &fan.cone_dual_basis(c)[slot];
        let pos = key.iter().position(|&x| x == i).unwrap();
        let mut out = QuantumClass::zero();
        for j in (0..fan.num_rays()).filter(|&j| !mu.contains(j)) {
            let coeff = phi.pair(fan.ray(j));
            if coeff.is_zero() {
                continue;
            }
            let mut next = key.to_vec();
            next[pos] = j;
            next.sort_unstable();
            let v = self.recurse(next, strategy, memo)?;
            out = &out + &v.scaled(&Rational::from_integer(-coeff));
        }
        Ok(out)
    }

    /// Evaluates a quantum polynomial in `QH*(X)`.
    pub fn evaluate(&self, p: &QuantumPolynomial) -> Result<QuantumClass> {
        let mut out = QuantumClass::zero();
        for (beta, mono, c) in p.terms() {
            out = &out + &self.reduce_monomial(mono)?.shifted(beta).scaled(c);
        }
        Ok(out)
    }

    fn basis_product(&self, i: usize, j: usize) -> Result<QuantumClass> {
        let key = (i.min(j), i.max(j));
        if let Some(v) = self.basis_products.read().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let gi = self.giambelli(self.ring.basis_monomial(i))?;
        let gj = self.giambelli(self.ring.basis_monomial(j))?;
        let v = self.evaluate(&(&gi * &gj))?;
        self.basis_products.write().unwrap().insert(key, v.clone());
        Ok(v)
    }

    pub fn quantum_product(&self, a: &QuantumClass, b: &QuantumClass) -> Result<QuantumClass> {
        let mut out = QuantumClass::zero();
        for (ba, ca) in a.terms() {
            for (bb, cb) in b.terms() {
                let shift = ba + bb;
                for (i, x) in ca.support() {
                    for (j, y) in cb.support() {
                        out = &out + &self.basis_product(i, j)?.shifted(&shift).scaled(&(x * y));
                    }
                }
            }
        }
        Ok(out)
    }

    /// `⟨a, b, c⟩_β`: the `q^β` coefficient of `a * b`, paired with `c`.
    pub fn gw3(&self, a: &CohomologyClass, b: &CohomologyClass, c: &CohomologyClass, beta: &CurveClass) -> Result<Rational> {
        let fan = self.fan();
        if !beta.is_zero() && !fan.is_effective(beta)? {
            return Err(Error::NotEffective(beta.to_string()));
        }
        let m = self.m();
        let prod = self.quantum_product(&QuantumClass::classical(a.clone(), m), &QuantumClass::classical(b.clone(), m))?;
        Ok(match prod.coefficient(beta) {
            Some(x) => self.ring.integrate(&self.ring.cup(x, c)),
            None => Rational::zero(),
        })
    }

    /// Whether every term of `q` has total degree `d`, with `deg q^β = Σ_i ∫_β D_i`.
    pub fn is_homogeneous(&self, q: &QuantumClass, d: usize) -> bool {
        q.terms().all(|(beta, c)| {
            c.support().all(|(i, _)| Int::from(self.ring.basis_degree(i)) + beta.degree() == Int::from(d))
        })
    }
}
