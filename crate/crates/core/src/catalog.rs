//! Hand-built fans used throughout the examples and tests.
//!
//! Ray orders follow the conventional labelling, e.g. for `F_1`
//! `ρ1=(1,0), ρ2=(0,1), ρ3=(-1,-1), ρ4=(1,1)`.

use crate::fan::Fan;
use crate::lattice::LatticeVector;
use crate::ray_set::RaySet;

/// `P^n`: rays `e_1, ..., e_n, -(e_1 + ... + e_n)`.
pub fn projective_space(n: usize) -> Fan {
    let mut rays: Vec<LatticeVector> = (0..n).map(|i| LatticeVector::unit(n, i)).collect();
    let minus = rays.iter().fold(LatticeVector::zero(n), |a, r| &a - r);
    rays.push(minus);
    let cones = (0..=n).map(|skip| RaySet::from_indices((0..=n).filter(|&i| i != skip))).collect();
    Fan::from_lattice(n, rays, cones).expect("projective space is a valid fan")
}

pub fn p2() -> Fan {
    projective_space(2)
}

/// Product fan in `N_a ⊕ N_b`; rays of `a` come first.
pub fn product(a: &Fan, b: &Fan) -> Fan {
    let (na, nb) = (a.dim(), b.dim());
    let mut rays = Vec::new();
    for r in a.rays() {
        let mut v = r.0.clone();
        v.extend(std::iter::repeat_n(0.into(), nb));
        rays.push(LatticeVector(v));
    }
    for r in b.rays() {
        let mut v: Vec<_> = std::iter::repeat_n(0.into(), na).collect();
        v.extend(r.0.iter().cloned());
        rays.push(LatticeVector(v));
    }
    let shift = a.num_rays();
    let mut cones = Vec::new();
    for ca in a.max_cones() {
        for cb in b.max_cones() {
            cones.push(ca.union(RaySet::from_indices(cb.iter().map(|i| i + shift))));
        }
    }
    Fan::from_lattice(na + nb, rays, cones).expect("product of valid fans is valid")
}

/// `P^1 x P^1`: rays `(1,0), (-1,0), (0,1), (0,-1)`.
pub fn p1xp1() -> Fan {
    Fan::from_parts(2, &[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]], &[&[1, 3], &[1, 4], &[2, 3], &[2, 4]])
        .expect("valid fan")
}

/// Hirzebruch surface `F_a`: rays `(1,0), (-1,a), (0,1), (0,-1)`.
pub fn hirzebruch(a: i64) -> Fan {
    Fan::from_parts(2, &[&[1, 0], &[-1, a], &[0, 1], &[0, -1]], &[&[1, 3], &[1, 4], &[2, 3], &[2, 4]])
        .expect("valid fan")
}

/// `F_1`, the blow-up of `P^2` at a point, with the exceptional ray last.
pub fn f1() -> Fan {
    Fan::from_parts(2, &[&[1, 0], &[0, 1], &[-1, -1], &[1, 1]], &[&[1, 4], &[2, 4], &[2, 3], &[1, 3]])
        .expect("valid fan")
}

/// `P^2` blown up at two torus-fixed points.
pub fn bl2_p2() -> Fan {
    Fan::from_parts(
        2,
        &[&[1, 0], &[0, 1], &[-1, -1], &[1, 1], &[-1, 0]],
        &[&[1, 4], &[2, 4], &[2, 5], &[3, 5], &[1, 3]],
    )
    .expect("valid fan")
}

/// `P^2` blown up at its three torus-fixed points (the hexagon fan).
pub fn bl3_p2() -> Fan {
    Fan::from_parts(
        2,
        &[&[1, 0], &[0, 1], &[-1, -1], &[1, 1], &[-1, 0], &[0, -1]],
        &[&[1, 4], &[2, 4], &[2, 5], &[3, 5], &[3, 6], &[1, 6]],
    )
    .expect("valid fan")
}

/// `P^3` blown up at a torus-fixed point: rays of `P^3` plus `(1,1,1)`.
pub fn bl_point_p3() -> Fan {
    Fan::from_parts(
        3,
        &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[-1, -1, -1], &[1, 1, 1]],
        &[&[1, 2, 4], &[1, 3, 4], &[2, 3, 4], &[1, 2, 5], &[1, 3, 5], &[2, 3, 5]],
    )
    .expect("valid fan")
}

/// The surface corpus: `P^2, P^1xP^1, F_1, Bl_2 P^2, Bl_3 P^2`, with names.
pub fn surface_corpus() -> Vec<(&'static str, Fan)> {
    vec![("P2", p2()), ("P1xP1", p1xp1()), ("F1", f1()), ("Bl2P2", bl2_p2()), ("Bl3P2", bl3_p2())]
}
