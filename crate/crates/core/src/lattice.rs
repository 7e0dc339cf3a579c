//! Exact linear algebra over `N = Z^n` and its dual `M`.
//!
//! Everything here works with arbitrary-precision integers and rationals.
//! Kernels come from a column Hermite reduction that carries its
//! unimodular transform, so the returned bases are Z-bases and not just
//! Q-bases. Rational solves use fraction-free (Bareiss) elimination.

use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Int = BigInt;
pub type Rational = BigRational;

/// Row-major integer matrix.
pub type IntMatrix = Vec<Vec<Int>>;

/// A point of `N` (or of `Z^m`).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LatticeVector(pub Vec<Int>);

impl LatticeVector {
    pub fn zero(len: usize) -> Self {
        LatticeVector(vec![Int::zero(); len])
    }

    pub fn from_i64s(xs: &[i64]) -> Self {
        LatticeVector(xs.iter().map(|&x| Int::from(x)).collect())
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zero(len);
        v.0[i] = Int::one();
        v
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

    pub fn entries(&self) -> &[Int] {
        &self.0
    }

    /// gcd of the entries; zero for the zero vector.
    pub fn content(&self) -> Int {
        self.0.iter().fold(Int::zero(), |g, x| g.gcd(x))
    }

    /// Nonzero with coprime entries.
    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    pub fn scaled(&self, c: &Int) -> Self {
        LatticeVector(self.0.iter().map(|x| x * c).collect())
    }

    pub fn sum_entries(&self) -> Int {
        self.0.iter().sum()
    }

    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        self.0.iter().map(|x| i64::try_from(x).ok()).collect()
    }
}

impl Index<usize> for LatticeVector {
    type Output = Int;
    fn index(&self, i: usize) -> &Int {
        &self.0[i]
    }
}

impl Add for &LatticeVector {
    type Output = LatticeVector;
    fn add(self, rhs: &LatticeVector) -> LatticeVector {
        LatticeVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &LatticeVector {
    type Output = LatticeVector;
    fn sub(self, rhs: &LatticeVector) -> LatticeVector {
        LatticeVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        LatticeVector(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, x) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// An element of `M = Hom(N, Z)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DualFunctional(pub Vec<Int>);

impl DualFunctional {
    pub fn pair(&self, v: &LatticeVector) -> Int {
        debug_assert_eq!(self.0.len(), v.len());
        self.0.iter().zip(&v.0).map(|(a, b)| a * b).sum()
    }

    pub fn pair_rational(&self, v: &[Rational]) -> Rational {
        self.0
            .iter()
            .zip(v)
            .map(|(a, b)| Rational::from_integer(a.clone()) * b)
            .sum()
    }
}

/// Coordinates of a vector with respect to cone generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeCoordinates {
    pub coeffs: Vec<Rational>,
    /// All coefficients strictly positive (relative interior).
    pub interior: bool,
}

pub fn int_matrix(rows: &[&[i64]]) -> IntMatrix {
    rows.iter().map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect()
}

/// Matrix whose columns are the given vectors.
pub fn columns_matrix(cols: &[&LatticeVector], rows: usize) -> IntMatrix {
    (0..rows).map(|r| cols.iter().map(|c| c.0[r].clone()).collect()).collect()
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Int::one() } else { Int::zero() }).collect())
        .collect()
}

pub fn transpose(a: &IntMatrix, cols: usize) -> IntMatrix {
    (0..cols).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn mat_vec(a: &IntMatrix, v: &LatticeVector) -> LatticeVector {
    LatticeVector(
        a.iter()
            .map(|row| row.iter().zip(&v.0).map(|(x, y)| x * y).sum())
            .collect(),
    )
}

/// `(g, s, t)` with `s*a + t*b = g = gcd(a, b) >= 0`.
fn ext_gcd(a: &Int, b: &Int) -> (Int, Int, Int) {
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (Int::one(), Int::zero());
    let (mut old_t, mut t) = (Int::zero(), Int::one());
    while !r.is_zero() {
        let q = old_r.div_floor(&r);
        let nr = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, nr);
        let ns = &old_s - &q * &s;
        old_s = std::mem::replace(&mut s, ns);
        let nt = &old_t - &q * &t;
        old_t = std::mem::replace(&mut t, nt);
    }
    if old_r.is_negative() {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Column Hermite reduction: returns `(H, U, rank)` with `A * U = H`,
/// `U` unimodular (`cols x cols`), and the first `rank` columns of `H`
/// in echelon form with positive pivots; the remaining columns are zero.
pub fn column_hermite(a: &IntMatrix, cols: usize) -> (IntMatrix, IntMatrix, usize) {
    let rows = a.len();
    let mut h = a.clone();
    let mut u = identity(cols);
    let mut piv = 0;

    // column op helper: (c1, c2) <- (c1, c2) * [[p, q], [r, s]]
    let combine = |mat: &mut IntMatrix, c1: usize, c2: usize, p: &Int, q: &Int, r: &Int, s: &Int| {
        for row in mat.iter_mut() {
            let x = row[c1].clone();
            let y = row[c2].clone();
            row[c1] = p * &x + r * &y;
            row[c2] = q * &x + s * &y;
        }
    };

    for r in 0..rows {
        if piv == cols {
            break;
        }
        for c in piv + 1..cols {
            if h[r][c].is_zero() {
                continue;
            }
            let x = h[r][piv].clone();
            let y = h[r][c].clone();
            let (g, s, t) = ext_gcd(&x, &y);
            let xg = &x / &g;
            let yg = &y / &g;
            // new piv col = s*col_piv + t*col_c; new c col = -yg*col_piv + xg*col_c
            let myg = -yg;
            combine(&mut h, piv, c, &s, &myg, &t, &xg);
            combine(&mut u, piv, c, &s, &myg, &t, &xg);
        }
        if !h[r][piv].is_zero() {
            if h[r][piv].is_negative() {
                for row in h.iter_mut().chain(u.iter_mut()) {
                    row[piv] = -row[piv].clone();
                }
            }
            // reduce earlier columns modulo the pivot
            for c in 0..piv {
                let q = h[r][c].div_floor(&h[r][piv]);
                if !q.is_zero() {
                    for row in h.iter_mut().chain(u.iter_mut()) {
                        let sub = &q * &row[piv];
                        row[c] -= sub;
                    }
                }
            }
            piv += 1;
        }
    }
    (h, u, piv)
}

/// A Z-basis of `{x in Z^cols : A x = 0}`.
pub fn integer_kernel(a: &IntMatrix, cols: usize) -> Vec<LatticeVector> {
    let (_, u, rank) = column_hermite(a, cols);
    (rank..cols)
        .map(|c| LatticeVector(u.iter().map(|row| row[c].clone()).collect()))
        .collect()
}

/// Nonzero invariant factors of the Smith normal form, in divisibility order.
pub fn smith_invariants(a: &IntMatrix, cols: usize) -> Vec<Int> {
    let rows = a.len();
    let mut m = a.clone();
    let mut out = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry in the trailing block
        let best = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| !m[i][j].is_zero())
            .min_by(|&(i, j), &(k, l)| m[i][j].abs().cmp(&m[k][l].abs()));
        let Some((pi, pj)) = best else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        let mut clean = true;
        for i in t + 1..rows {
            let q = m[i][t].div_floor(&m[t][t]);
            if !q.is_zero() {
                for j in t..cols {
                    let sub = &q * &m[t][j];
                    m[i][j] -= sub;
                }
            }
            clean &= m[i][t].is_zero();
        }
        for j in t + 1..cols {
            let q = m[t][j].div_floor(&m[t][t]);
            if !q.is_zero() {
                for row in m.iter_mut().skip(t) {
                    let sub = &q * &row[t];
                    row[j] -= sub;
                }
            }
            clean &= m[t][j].is_zero();
        }
        if !clean {
            continue;
        }
        // divisibility: fold an offending row into row t and retry
        let p = m[t][t].clone();
        let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !m[i][j].is_multiple_of(&p)));
        if let Some(i) = bad {
            for j in t..cols {
                let x = m[i][j].clone();
                m[t][j] += x;
            }
            continue;
        }
        out.push(p.abs());
        t += 1;
    }
    out
}

/// Fraction-free row echelon form. Returns the pivot columns; `m` is
/// transformed in place and `swaps` counts row exchanges.
fn bareiss_echelon(m: &mut IntMatrix, cols: usize) -> (Vec<usize>, usize) {
    let rows = m.len();
    let mut prev = Int::one();
    let mut row = 0;
    let mut pivots = Vec::new();
    let mut swaps = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(p) = (row..rows).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        if p != row {
            m.swap(p, row);
            swaps += 1;
        }
        for i in row + 1..rows {
            for j in col + 1..cols {
                let num = &m[row][col] * &m[i][j] - &m[i][col] * &m[row][j];
                debug_assert!(num.is_multiple_of(&prev));
                m[i][j] = num / &prev;
            }
            m[i][col] = Int::zero();
        }
        prev = m[row][col].clone();
        pivots.push(col);
        row += 1;
    }
    (pivots, swaps)
}

pub fn rank(a: &IntMatrix, cols: usize) -> usize {
    let mut m = a.clone();
    bareiss_echelon(&mut m, cols).0.len()
}

pub fn determinant(a: &IntMatrix) -> Int {
    let n = a.len();
    if n == 0 {
        return Int::one();
    }
    let mut m = a.clone();
    let (pivots, swaps) = bareiss_echelon(&mut m, n);
    if pivots.len() < n {
        return Int::zero();
    }
    let d = m[n - 1][n - 1].clone();
    if swaps % 2 == 1 {
        -d
    } else {
        d
    }
}

/// Solves `A x = b` over Q for `A` with linearly independent columns.
/// `Ok(None)` if the system is inconsistent.
pub fn solve_rational(a: &IntMatrix, cols: usize, b: &[Int]) -> Result<Option<Vec<Rational>>> {
    let mut m: IntMatrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (pivots, _) = bareiss_echelon(&mut m, cols + 1);
    if pivots.iter().filter(|&&c| c < cols).count() < cols {
        return Err(Error::DependentGenerators);
    }
    if pivots.contains(&cols) {
        return Ok(None);
    }
    let mut x = vec![Rational::zero(); cols];
    for (r, &c) in pivots.iter().enumerate().rev() {
        let mut acc = Rational::from_integer(m[r][cols].clone());
        for j in c + 1..cols {
            acc -= Rational::from_integer(m[r][j].clone()) * &x[j];
        }
        x[c] = acc / Rational::from_integer(m[r][c].clone());
    }
    Ok(Some(x))
}

/// `phi` with `phi(gens[index]) = 1` and `phi(gens[j]) = 0` for `j != index`.
pub fn dual_basis_functional(gens: &[&LatticeVector], index: usize) -> Result<DualFunctional> {
    let n = gens.len();
    if let Some(g) = gens.iter().find(|g| g.len() != n) {
        return Err(Error::LengthMismatch { expected: n, found: g.len() });
    }
    // rows of G^T are the generators; solve G^T phi = e_index
    let gt: IntMatrix = gens.iter().map(|g| g.0.clone()).collect();
    let det = determinant(&gt);
    if !det.abs().is_one() {
        return Err(Error::NonUnimodular { det: det.abs().to_string() });
    }
    let rhs: Vec<Int> = (0..n).map(|j| if j == index { Int::one() } else { Int::zero() }).collect();
    let x = solve_rational(&gt, n, &rhs)?.expect("unimodular system is solvable");
    Ok(DualFunctional(x.into_iter().map(|r| r.to_integer()).collect()))
}

/// All dual functionals of a unimodular basis (the rows of its inverse).
pub fn dual_basis(gens: &[&LatticeVector]) -> Result<Vec<DualFunctional>> {
    (0..gens.len()).map(|i| dual_basis_functional(gens, i)).collect()
}

/// Nonnegative coefficients of `v` over independent cone generators, or
/// `None` if `v` is outside the cone.
pub fn express_in_cone(v: &LatticeVector, gens: &[&LatticeVector]) -> Result<Option<ConeCoordinates>> {
    let n = v.len();
    if let Some(g) = gens.iter().find(|g| g.len() != n) {
        return Err(Error::LengthMismatch { expected: n, found: g.len() });
    }
    let k = gens.len();
    if k == 0 {
        return Ok(v.is_zero().then(|| ConeCoordinates { coeffs: vec![], interior: true }));
    }
    let a = columns_matrix(gens, n);
    let Some(coeffs) = solve_rational(&a, k, &v.0)? else {
        return Ok(None);
    };
    if coeffs.iter().any(Signed::is_negative) {
        return Ok(None);
    }
    let interior = coeffs.iter().all(Signed::is_positive);
    Ok(Some(ConeCoordinates { coeffs, interior }))
}

/// For generators that extend to a Z-basis of `N`, a `(n-k) x n` integer
/// matrix whose rows vanish on the generators and induce an isomorphism
/// `N / <gens> -> Z^(n-k)`.
pub fn quotient_projection(gens: &[&LatticeVector], n: usize) -> Result<IntMatrix> {
    let k = gens.len();
    if k == 0 {
        return Ok(identity(n));
    }
    // Column Hermite of G^T (k x n) gives G^T U = [L | 0] with U unimodular;
    // the last n-k columns of U span the annihilator. Unimodularity of the
    // completion is checked through the Smith invariants of G.
    let g = columns_matrix(gens, n);
    let inv = smith_invariants(&g, k);
    if inv.len() < k || inv.iter().any(|d| !d.is_one()) {
        return Err(Error::NonUnimodular { det: format!("{inv:?}") });
    }
    let gt: IntMatrix = gens.iter().map(|v| v.0.clone()).collect();
    let (_, u, rank) = column_hermite(&gt, n);
    debug_assert_eq!(rank, k);
    // rows: the annihilator functionals, i.e. columns rank..n of U, transposed.
    // They pair to zero with every generator; since U is unimodular and the
    // generators are saturated, they induce N/<gens> ~ Z^(n-k).
    Ok((rank..n).map(|c| u.iter().map(|row| row[c].clone()).collect()).collect())
}
