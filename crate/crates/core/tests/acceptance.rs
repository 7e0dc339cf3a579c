//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;

use itertools::Itertools;
use num_traits::One;
use toric_qh::cli;
use toric_qh::cohomology::CohomologyRing;
use toric_qh::curves::{min_tree, signed_distance, tree_for_class};
use toric_qh::fan::is_isomorphic;
use toric_qh::fano::{self, ClassTier};
use toric_qh::quantum::{presentation, QuantumClass, QuantumRing};
use toric_qh::{CurveClass, Fan, Int, RaySet, Rational};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|x| x.to_string())
}

fn class_corpus() -> Result<Vec<(&'static str, Fan, QuantumRing)>, String> {
    common::corpus()
        .into_iter()
        .map(|(name, fan)| {
            let qr = e(QuantumRing::new(&fan))?;
            Ok((name, fan, qr))
        })
        .collect()
}

fn criterion_1() -> Outcome {
    let fan = common::p2();
    let p = e(presentation(&fan))?;
    let lin: Vec<Vec<Int>> = vec![
        vec![1.into(), 0.into(), (-1).into()],
        vec![0.into(), 1.into(), (-1).into()],
    ];
    ensure(p.linear_relations == lin, || format!("linear relations {:?}", p.linear_relations))?;
    ensure(p.deformed_relations.len() == 1, || "expected one deformed relation".into())?;
    let d = &p.deformed_relations[0];
    ensure(
        d.set == RaySet::from_indices([0, 1, 2]) && d.rhs.is_empty() && d.beta == CurveClass::from_i64s(&[1, 1, 1]),
        || format!("deformed relation {:?}", d),
    )?;
    let ring = e(CohomologyRing::new(&fan))?;
    let dims: Vec<usize> = (0..=2).map(|k| ring.quotient_dimension(k)).collect();
    ensure(dims == vec![1, 1, 1], || format!("classical dimensions {:?}", dims))?;
    // the q = 0 specialization of the deformed relation holds classically
    ensure(e(ring.monomial_class(&[0, 1, 2]))?.is_zero(), || "D1*D2*D3 nonzero classically".into())?;
    Ok(format!("D1*D2*D3 = q^(1,1,1), 2 linear relations, classical dims {:?}", dims))
}

fn criterion_2() -> Outcome {
    let fan = common::p2();
    let qr = e(QuantumRing::new(&fan))?;
    let ring = qr.cohomology();
    let q = CurveClass::from_i64s(&[1, 1, 1]);
    let h = e(ring.monomial_class(&[0]))?;
    // QH*(P^2) = Q[q][H]/(H^3 - q)
    let h3 = e(qr.reduce_monomial(&[0, 0, 0]))?;
    ensure(h3 == QuantumClass::term(q.clone(), ring.unit()), || format!("H^3 = {:?}", h3))?;
    let h4 = e(qr.reduce_monomial(&[0, 0, 0, 0]))?;
    ensure(h4 == QuantumClass::term(q.clone(), h.clone()), || format!("H^4 = {:?}", h4))?;
    let gw = e(qr.gw3(&ring.point(), &ring.point(), &h, &q))?;
    ensure(gw == Rational::one(), || format!("<pt,pt,H> = {}", gw))?;
    Ok("H^3 = q, H^4 = qH, <pt,pt,H>_line = 1".into())
}

fn criterion_3() -> Outcome {
    let mut checked = 0;
    for (name, fan) in common::corpus() {
        if fano::tier(&fan) != ClassTier::FullClass {
            continue;
        }
        for p in fan.primitive_data() {
            let ok = p.rhs_cone.is_empty() || (p.rhs_cone.len() == 1 && p.rhs_coeffs[0] == Int::one());
            ensure(ok, || format!("{}: relation {} has rhs {:?}", name, p.set, p.rhs_coeffs))?;
            checked += 1;
        }
    }
    let t = fano::tier(&common::f2());
    ensure(t == ClassTier::NotFano, || format!("F2 classified {}", t))?;
    Ok(format!("{} relations of FullClass fans have rhs size <= 1 with unit coefficient; F2 NotFano", checked))
}

fn criterion_4() -> Outcome {
    let mut cones = 0;
    for (name, fan, qr) in class_corpus()? {
        let ring = qr.cohomology();
        let m = fan.num_rays();
        for sigma in fan.all_cones() {
            let g = e(qr.giambelli(sigma))?;
            let mut substituted = QuantumClass::zero();
            for (beta, mono, c) in g.terms() {
                let closed = e(qr.divisor_product_closed_form(RaySet::from_indices(mono.iter().copied())))?;
                substituted = &substituted + &closed.shifted(beta).scaled(c);
            }
            let want = QuantumClass::classical(e(ring.stratum_class(sigma))?, m);
            ensure(substituted == want, || format!("{}: giambelli({}) evaluates to {:?}", name, sigma, substituted))?;

            let closed = e(qr.divisor_product_closed_form(sigma))?;
            let reduced = e(qr.reduce_monomial(&sigma.to_vec()))?;
            ensure(reduced == closed, || format!("{}: reduce {} = {:?} vs {:?}", name, sigma, reduced, closed))?;
            // the same product built one divisor at a time through basis lifts
            let mut iterated = qr.unit();
            for i in sigma.iter() {
                let d = QuantumClass::classical(e(ring.monomial_class(&[i]))?, m);
                iterated = e(qr.quantum_product(&iterated, &d))?;
            }
            ensure(iterated == closed, || format!("{}: iterated product over {} = {:?}", name, sigma, iterated))?;
            cones += 1;
        }
    }
    Ok(format!("{} cones checked", cones))
}

fn criterion_5() -> Outcome {
    let mut triples = 0;
    for (name, _, qr) in class_corpus()? {
        let s = qr.cohomology().rank();
        let basis: Vec<QuantumClass> = (0..s).map(|i| qr.basis_class(i)).collect();
        let mut pair = BTreeMap::new();
        for i in 0..s {
            for j in 0..s {
                pair.insert((i, j), e(qr.quantum_product(&basis[i], &basis[j]))?);
            }
        }
        for i in 0..s {
            for j in 0..s {
                ensure(pair[&(i, j)] == pair[&(j, i)], || format!("{}: b{}*b{} not commutative", name, i + 1, j + 1))?;
                for k in 0..s {
                    let left = e(qr.quantum_product(&pair[&(i, j)], &basis[k]))?;
                    let right = e(qr.quantum_product(&basis[i], &pair[&(j, k)]))?;
                    ensure(left == right, || format!("{}: ({} {} {}) not associative", name, i + 1, j + 1, k + 1))?;
                    triples += 1;
                }
            }
        }
    }
    Ok(format!("{} ordered triples", triples))
}

fn criterion_6() -> Outcome {
    let mut products = 0;
    for (name, _, qr) in class_corpus()? {
        let ring = qr.cohomology();
        let s = ring.rank();
        for i in 0..s {
            for j in 0..s {
                let p = e(qr.quantum_product(&qr.basis_class(i), &qr.basis_class(j)))?;
                let total = Int::from(ring.basis_degree(i) + ring.basis_degree(j));
                for (beta, c) in p.terms() {
                    let deg_q: Int = beta.0.iter().sum();
                    for (k, _) in c.support() {
                        let d = &deg_q + Int::from(ring.basis_degree(k));
                        ensure(d == total, || format!("{}: b{}*b{} has a term of degree {}", name, i + 1, j + 1, d))?;
                    }
                }
                products += 1;
            }
        }
    }
    Ok(format!("{} basis products homogeneous", products))
}

fn criterion_7() -> Outcome {
    let report = e(cli::cmd_census(2, 6))?;
    let count = report.json["count"].as_u64().unwrap_or(0);
    let fans = e(cli::census::census(2, 6))?;
    ensure(count == 5 && fans.len() == 5, || format!("census found {}", count))?;
    let mut matched = BTreeSet::new();
    for f in &fans {
        let hits: Vec<&str> = common::corpus()
            .into_iter()
            .filter(|(_, g)| is_isomorphic(f, g).unwrap_or(false))
            .map(|(n, _)| n)
            .collect();
        ensure(hits.len() == 1, || format!("census fan {:?} matches {:?}", f.to_file().rays, hits))?;
        matched.insert(hits[0]);
    }
    ensure(matched.len() == 5, || format!("matched {:?}", matched))?;
    Ok(format!("5 classes: {}", matched.iter().join(", ")))
}

/// Every maximal contraction sequence, as ray indices of the original fan.
fn maximal_sequences(fan: &Fan, origin: &[usize], prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) -> Result<(), String> {
    let exc = fano::exceptional_divisors(fan);
    if exc.is_empty() {
        out.push(prefix.clone());
        return Ok(());
    }
    for r in exc {
        let step = e(fano::blow_down_divisor(fan, r))?;
        let next_origin: Vec<usize> = step.origin.iter().map(|&i| origin[i]).collect();
        prefix.push(origin[r]);
        maximal_sequences(&step.fan, &next_origin, prefix, out)?;
        prefix.pop();
    }
    Ok(())
}

fn criterion_8() -> Outcome {
    let fan = common::bl3_p2();
    let mut seqs = Vec::new();
    maximal_sequences(&fan, &(0..fan.num_rays()).collect::<Vec<_>>(), &mut Vec::new(), &mut seqs)?;
    let mut endpoints: BTreeMap<BTreeSet<usize>, BTreeSet<Vec<Vec<i64>>>> = BTreeMap::new();
    for seq in &seqs {
        let tower = e(fano::blow_down_tower(&fan, Some(seq)))?;
        ensure(&tower.removed == seq, || format!("tower removed {:?} for order {:?}", tower.removed, seq))?;
        for f in &tower.fans {
            ensure(fano::tier(f) == ClassTier::FullClass, || format!("order {:?} leaves the class", seq))?;
        }
        ensure(fano::is_product_of_projective_spaces(tower.last()).is_some(), || {
            format!("order {:?} ends at {:?}", seq, tower.last().to_file().rays)
        })?;
        let mut rays: Vec<Vec<i64>> = tower.last().rays().iter().map(|r| r.to_i64s().unwrap()).collect();
        rays.sort();
        endpoints.entry(seq.iter().copied().collect()).or_default().insert(rays);
    }
    for (set, ends) in &endpoints {
        ensure(ends.len() == 1, || format!("contracting {:?} in different orders gives {:?}", set, ends))?;
    }
    let lengths: BTreeSet<usize> = seqs.iter().map(|s| s.len()).collect();
    Ok(format!("{} orders over {} divisor sets, lengths {:?}", seqs.len(), endpoints.len(), lengths))
}

/// Curves `D_e` of a surface: neighbors of `e` and the degree `2 - b_e`
/// where `ρ_prev + ρ_next = b_e ρ_e`.
fn surface_curves(fan: &Fan) -> Vec<(Vec<usize>, i64)> {
    (0..fan.num_rays())
        .map(|r| {
            let nbrs: Vec<usize> = fan
                .max_cones()
                .iter()
                .filter(|c| c.contains(r))
                .map(|c| c.without(r).first().unwrap())
                .collect();
            let s = [common::ray2(fan, nbrs[0]), common::ray2(fan, nbrs[1])];
            let sum = [s[0][0] + s[1][0], s[0][1] + s[1][1]];
            let v = common::ray2(fan, r);
            let b = if v[0] != 0 { sum[0] / v[0] } else { sum[1] / v[1] };
            (nbrs, 2 - b)
        })
        .collect()
}

/// Smallest degree of a connected union of invariant curves through `X(mu)` meeting `D_d`.
fn brute_force_min_degree(fan: &Fan, mu: usize, d: usize) -> i64 {
    let cone = fan.max_cones()[mu];
    if cone.contains(d) {
        return 0;
    }
    let curves = surface_curves(fan);
    let m = fan.num_rays();
    let mut best = i64::MAX;
    for bits in 1u64..(1 << m) {
        let set: Vec<usize> = (0..m).filter(|i| bits >> i & 1 == 1).collect();
        if !set.iter().any(|&i| cone.contains(i)) {
            continue;
        }
        if !set.iter().any(|&i| i == d || curves[i].0.contains(&d)) {
            continue;
        }
        let mut seen = vec![set[0]];
        let mut k = 0;
        while k < seen.len() {
            for &j in &curves[seen[k]].0 {
                if set.contains(&j) && !seen.contains(&j) {
                    seen.push(j);
                }
            }
            k += 1;
        }
        if seen.len() != set.len() {
            continue;
        }
        best = best.min(set.iter().map(|&i| curves[i].1).sum());
    }
    best
}

fn criterion_9() -> Outcome {
    let mut classes = 0;
    let mut pairs = 0;
    for (name, fan) in common::corpus() {
        for p in fan.primitive_data() {
            let forest = e(tree_for_class(&fan, &p.cls))?;
            ensure(forest.cls == p.cls, || format!("{}: forest for {} has class {}", name, p.cls, forest.cls))?;
            for (t, copies) in &forest.trees {
                ensure(*copies >= 1 && t.edges.iter().all(|x| x.multiplicity >= 1), || "zero multiplicity".into())?;
            }
            classes += 1;
        }
        for mu in 0..fan.max_cones().len() {
            let gens = fan.max_cones()[mu].to_vec();
            for d in 0..fan.num_rays() {
                let t = e(min_tree(&fan, mu, d))?;
                let c = common::coords2(common::ray2(&fan, gens[0]), common::ray2(&fan, gens[1]), common::ray2(&fan, d));
                let mut want = vec![0i64; fan.num_rays()];
                if !gens.contains(&d) {
                    want[d] = 1;
                    want[gens[0]] = -c[0];
                    want[gens[1]] = -c[1];
                }
                let dist = if gens.contains(&d) { 0 } else { 1 - c[0] - c[1] };
                ensure(t.cls == CurveClass::from_i64s(&want), || format!("{}: tree class {} vs {:?}", name, t.cls, want))?;
                ensure(t.degree() == Int::from(dist) && signed_distance(&fan, mu, d) == Int::from(dist), || {
                    format!("{}: degree {} vs distance {}", name, t.degree(), dist)
                })?;
                let brute = brute_force_min_degree(&fan, mu, d);
                ensure(brute == dist, || format!("{}: cone {} to D{}: brute force {} vs {}", name, mu + 1, d + 1, brute, dist))?;
                pairs += 1;
            }
        }
    }
    let p2 = common::p2();
    let mu = p2.max_cones().iter().position(|&c| c == RaySet::from_indices([0, 1])).unwrap();
    let t = e(min_tree(&p2, mu, 2))?;
    ensure(t.degree() == Int::from(3) && t.cls == CurveClass::from_i64s(&[1, 1, 1]), || format!("P2 tree {:?}", t))?;
    Ok(format!("{} primitive classes represented, {} (cone, divisor) pairs minimal", classes, pairs))
}

fn criterion_10() -> Outcome {
    let mut checks = 0;
    for (name, fan, qr) in class_corpus()? {
        let ring = qr.cohomology();
        let lifts: Vec<_> = (0..ring.rank()).map(|j| qr.giambelli(ring.basis_monomial(j))).collect::<Result<_, _>>().map_err(|x| x.to_string())?;
        let mut reference: Option<Vec<QuantumClass>> = None;
        for &mu in fan.max_cones() {
            let point = e(qr.giambelli(mu))?;
            let row: Vec<QuantumClass> =
                lifts.iter().map(|l| qr.evaluate(&(&point * l))).collect::<Result<_, _>>().map_err(|x| x.to_string())?;
            match &reference {
                None => reference = Some(row),
                Some(r) => ensure(r == &row, || format!("{}: point class from {} differs", name, mu))?,
            }
            checks += 1;
        }
        let r = reference.unwrap();
        let direct: Vec<QuantumClass> = (0..ring.rank())
            .map(|j| qr.quantum_product(&QuantumClass::classical(ring.point(), fan.num_rays()), &qr.basis_class(j)))
            .collect::<Result<_, _>>()
            .map_err(|x| x.to_string())?;
        ensure(r == direct, || format!("{}: point products disagree with quantum_product", name))?;
    }
    Ok(format!("{} maximal cones agree", checks))
}

fn criterion_11() -> Outcome {
    let mut fans = common::corpus();
    fans.push(("BlP3", toric_qh::catalog::bl_point_p3()));
    let mut rows = Vec::new();
    for (name, fan) in fans {
        let ring = e(CohomologyRing::new(&fan))?;
        let census = ring.census();
        let ranks: Vec<usize> = (0..=fan.dim()).map(|d| ring.quotient_dimension(d)).collect();
        ensure(ranks == census, || format!("{}: row reduction {:?} vs shelling {:?}", name, ranks, census))?;
        // Euler characteristic = number of fixed points
        ensure(census.iter().sum::<usize>() == fan.max_cones().len(), || format!("{}: census {:?}", name, census))?;
        if fan.dim() == 2 {
            let betti = vec![1, fan.num_rays() - 2, 1];
            ensure(census == betti, || format!("{}: census {:?} vs Betti {:?}", name, census, betti))?;
        }
        rows.push(format!("{} {:?}", name, census));
    }
    Ok(rows.join(", "))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("presentation of P2", criterion_1),
        ("quantum ring of P2", criterion_2),
        ("relations of the class", criterion_3),
        ("Giambelli / product formula duality", criterion_4),
        ("commutativity and associativity", criterion_5),
        ("grading", criterion_6),
        ("surface census", criterion_7),
        ("blow-down towers of Bl3P2", criterion_8),
        ("curve trees", criterion_9),
        ("point class consistency", criterion_10),
        ("basis double count", criterion_11),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS {:>2} {}: {}", k + 1, name, detail),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {}: {}", k + 1, name, why);
            }
        }
    }
    println!("acceptance: {} passed, {} failed", criteria.len() - failed, failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
