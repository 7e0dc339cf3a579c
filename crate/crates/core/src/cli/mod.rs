//! Command implementations behind the `toricqh` binary.
//!
//! Every command returns a [`Report`] holding both the JSON document and a
//! plain-text rendering; the binary only picks one and maps errors to exit
//! codes with [`exit_code`]. Ray, cone and basis numbers are 1-based.

pub mod census;
pub mod expr;

use std::path::Path;

use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use crate::cohomology::{CohomologyClass, CohomologyRing};
use crate::curves;
use crate::error::{Error, Result};
use crate::fan::{CurveClass, Fan, FanFile};
use crate::fano;
use crate::lattice::{Int, Rational};
use crate::quantum::{self, QuantumClass, QuantumRing};
use crate::ray_set::RaySet;

#[derive(Clone, Debug)]
pub struct Report {
    pub json: Value,
    pub text: String,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) => 2,
        Error::InvalidFan(_) => 3,
        Error::NotInClass { .. } | Error::NotFano => 4,
        Error::NotEffective(_) => 5,
        _ => 1,
    }
}

pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::NonUnimodular { .. } => "NonUnimodular",
        Error::DependentGenerators => "DependentGenerators",
        Error::IndexOutOfRange { .. } => "IndexOutOfRange",
        Error::LengthMismatch { .. } => "LengthMismatch",
        Error::LocateFailure(_) => "LocateFailure",
        Error::NotACone(_) => "NotACone",
        Error::NotAPrimitiveSet(_) => "NotAPrimitiveSet",
        Error::InvalidFan(_) => "ValidationFailed",
        Error::DimensionMismatch(..) => "DimensionMismatch",
        Error::InvalidCurveClass(_) => "InvalidCurveClass",
        Error::NotEffective(_) => "NotEffective",
        Error::EffectivityUndecided(_) => "EffectivityUndecided",
        Error::NotFano => "NotFano",
        Error::NotInClass { .. } => "NotInClass",
        Error::NoExceptionalRelation(_) => "NoExceptionalRelation",
        Error::BlowDownInvalid(_) => "BlowDownInvalid",
        Error::PreconditionFailed(_) => "PreconditionFailed",
        Error::Cohomology(_) => "Cohomology",
        Error::Parse(_) => "ParseError",
        Error::Unsupported(_) => "Unsupported",
    }
}

pub fn error_json(e: &Error) -> Value {
    let mut obj = json!({ "kind": error_kind(e), "message": e.to_string(), "exit_code": exit_code(e) });
    if let Error::InvalidFan(report) = e {
        obj["issues"] = serde_json::to_value(&report.issues).unwrap();
    }
    json!({ "error": obj })
}

pub fn rational_json(r: &Rational) -> Value {
    if r.is_integer() {
        if let Some(i) = r.numer().to_i64() {
            return json!(i);
        }
    }
    json!(r.to_string())
}

pub fn rational_from_json(v: &Value) -> Result<Rational> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(|i| Rational::from_integer(i.into()))
            .ok_or_else(|| Error::Parse(format!("not an integer: {n}"))),
        Value::String(s) => s.parse::<Rational>().map_err(|e| Error::Parse(format!("{s}: {e}"))),
        other => Err(Error::Parse(format!("not a rational: {other}"))),
    }
}

fn int_json(i: &Int) -> Value {
    match i.to_i64() {
        Some(x) => json!(x),
        None => json!(i.to_string()),
    }
}

fn ints_json(v: &[Int]) -> Value {
    Value::Array(v.iter().map(int_json).collect())
}

fn labels(set: RaySet) -> Value {
    json!(set.labels())
}

/// Sparse map from 1-based basis index to coefficient.
pub fn class_json(c: &CohomologyClass) -> Value {
    let mut m = Map::new();
    for (i, x) in c.support() {
        m.insert((i + 1).to_string(), rational_json(x));
    }
    Value::Object(m)
}

pub fn class_from_json(v: &Value, size: usize) -> Result<CohomologyClass> {
    let obj = v.as_object().ok_or_else(|| Error::Parse("class must be an object".into()))?;
    let mut c = CohomologyClass::zero(size);
    for (k, x) in obj {
        let i: usize = k.parse().map_err(|_| Error::Parse(format!("bad basis index {k}")))?;
        if i == 0 || i > size {
            return Err(Error::Parse(format!("basis index {i} out of range 1..{size}")));
        }
        c.coords[i - 1] = rational_from_json(x)?;
    }
    Ok(c)
}

pub fn quantum_json(q: &QuantumClass) -> Value {
    let terms: Vec<Value> =
        q.terms().map(|(b, c)| json!({ "beta": ints_json(&b.0), "class": class_json(c) })).collect();
    json!({ "terms": terms })
}

pub fn quantum_from_json(v: &Value, size: usize) -> Result<QuantumClass> {
    let terms = v["terms"].as_array().ok_or_else(|| Error::Parse("missing terms".into()))?;
    let mut q = QuantumClass::zero();
    for t in terms {
        let beta = t["beta"]
            .as_array()
            .ok_or_else(|| Error::Parse("missing beta".into()))?
            .iter()
            .map(|x| x.as_i64().map(Int::from).ok_or_else(|| Error::Parse("beta entries are integers".into())))
            .collect::<Result<Vec<Int>>>()?;
        q.add_term(CurveClass(beta), &class_from_json(&t["class"], size)?);
    }
    Ok(q)
}

/// Basis classes `[X(τ_i)]` with their degrees.
pub fn basis_legend(ring: &CohomologyRing) -> Value {
    Value::Array(
        (0..ring.rank())
            .map(|i| json!({ "index": i + 1, "tau": labels(ring.basis_monomial(i)), "degree": ring.basis_degree(i) }))
            .collect(),
    )
}

/// Joins `(coefficient, name)` pairs as `a - 2*b + c`.
fn signed_sum(terms: &[(String, String)]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (c, name)) in terms.iter().enumerate() {
        let (neg, mag) = match c.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, c.as_str()),
        };
        if k == 0 {
            out += if neg { "-" } else { "" };
        } else {
            out += if neg { " - " } else { " + " };
        }
        out += &match (mag, name.as_str()) {
            (_, "1") => mag.to_string(),
            ("1", _) => name.clone(),
            _ => format!("{mag}*{name}"),
        };
    }
    out
}

fn class_text(c: &CohomologyClass, ring: &CohomologyRing) -> String {
    let terms: Vec<(String, String)> = c
        .support()
        .map(|(i, x)| {
            let tau = ring.basis_monomial(i);
            let name = if tau.is_empty() { "1".to_string() } else { format!("X{}", tau) };
            (x.to_string(), name)
        })
        .collect();
    signed_sum(&terms)
}

pub fn quantum_text(q: &QuantumClass, ring: &CohomologyRing) -> String {
    if q.is_zero() {
        return "0".into();
    }
    q.terms()
        .map(|(b, c)| {
            let inner = class_text(c, ring);
            if b.is_zero() {
                inner
            } else {
                format!("q^{}*({})", b, inner)
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

pub fn parse_labels(s: &str) -> Result<Vec<usize>> {
    let s = s.trim().trim_start_matches(['[', '{']).trim_end_matches([']', '}']);
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|x| x.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad index {x:?}"))))
        .collect()
}

pub fn parse_curve_class(s: &str, m: usize) -> Result<CurveClass> {
    let s = s.trim().trim_start_matches(['[', '(']).trim_end_matches([']', ')']);
    let v: Vec<Int> = s
        .split(',')
        .map(|x| x.trim().parse::<Int>().map_err(|_| Error::Parse(format!("bad integer {x:?}"))))
        .collect::<Result<_>>()?;
    if v.len() != m {
        return Err(Error::Parse(format!("curve class needs {m} entries, got {}", v.len())));
    }
    Ok(CurveClass(v))
}

fn label_set(fan: &Fan, labels: &[usize]) -> Result<RaySet> {
    let m = fan.num_rays();
    if let Some(&bad) = labels.iter().find(|&&l| l == 0 || l > m) {
        return Err(Error::Parse(format!("index {bad} out of range 1..{m}")));
    }
    Ok(RaySet::from_labels(labels.iter().copied()).unwrap())
}

pub fn load_fan(path: &Path) -> Result<Fan> {
    Fan::from_file(&FanFile::read(path)?)
}

pub fn cmd_validate(path: &Path) -> Result<Report> {
    let file = FanFile::read(path)?;
    let report = crate::fan::validate(&file);
    if !report.accepted() {
        return Err(Error::InvalidFan(report));
    }
    let fan = Fan::from_file(&file)?;
    Ok(Report {
        json: json!({ "accepted": true, "dim": fan.dim(), "rays": fan.num_rays(), "max_cones": fan.max_cones().len() }),
        text: format!("accepted: dim {}, {} rays, {} maximal cones", fan.dim(), fan.num_rays(), fan.max_cones().len()),
    })
}

pub fn cmd_classify(path: &Path) -> Result<Report> {
    let fan = load_fan(path)?;
    let c = fano::classify(&fan);
    let bound = fano::check_condition_iii(&fan);
    let relations: Vec<Value> = c
        .certificates
        .iter()
        .map(|r| {
            json!({
                "set": labels(r.set),
                "rhs_weight": int_json(&r.rhs_weight),
                "rhs_ray": r.rhs_ray.map(|i| i + 1),
                "rhs_multiplicity": r.rhs_multiplicity,
            })
        })
        .collect();
    let witness = bound.witness.as_ref().map(|(cone, ray, coords)| {
        json!({ "cone": labels(fan.max_cones()[*cone]), "ray": ray + 1, "coordinates": ints_json(coords) })
    });
    let mut text = format!("tier: {}\n", c.tier);
    text += &format!("coordinate bound: {}\n", if bound.holds { "holds" } else { "fails" });
    if let Some((cone, ray, coords)) = &bound.witness {
        text += &format!("  witness: ray {} in cone {} has coordinates {:?}\n", ray + 1, fan.max_cones()[*cone], coords.iter().map(|x| x.to_string()).collect::<Vec<_>>());
    }
    for r in &c.certificates {
        text += &format!("  {:<12} rhs weight {}\n", r.set.to_string(), r.rhs_weight);
    }
    Ok(Report {
        json: json!({
            "tier": c.tier,
            "relations": relations,
            "coordinate_bound": { "holds": bound.holds, "witness": witness },
        }),
        text,
    })
}

pub fn cmd_primitive(path: &Path) -> Result<Report> {
    let fan = load_fan(path)?;
    let mut rows = Vec::new();
    let mut text = String::new();
    for p in fan.primitive_data() {
        let rhs: Vec<Value> = p.rhs_terms().map(|(j, a)| json!({ "ray": j + 1, "coeff": int_json(a) })).collect();
        rows.push(json!({ "set": labels(p.set), "rhs": rhs, "class": ints_json(&p.cls.0) }));
        let lhs = p.set.iter().map(|i| format!("ρ{}", i + 1)).collect::<Vec<_>>().join(" + ");
        let rhs_text = if p.rhs_cone.is_empty() {
            "0".to_string()
        } else {
            p.rhs_terms()
                .map(|(j, a)| if a == &Int::from(1) { format!("ρ{}", j + 1) } else { format!("{}ρ{}", a, j + 1) })
                .collect::<Vec<_>>()
                .join(" + ")
        };
        text += &format!("{:<24} = {:<16} class {}\n", lhs, rhs_text, p.cls);
    }
    Ok(Report { json: json!({ "primitive_relations": rows }), text })
}

pub fn cmd_present(path: &Path) -> Result<Report> {
    let fan = load_fan(path)?;
    let p = quantum::presentation(&fan)?;
    let deformed: Vec<Value> = p
        .deformed_relations
        .iter()
        .map(|r| {
            json!({
                "set": labels(r.set),
                "rhs": r.rhs.iter().map(|(j, a)| json!([j + 1, int_json(a)])).collect::<Vec<_>>(),
                "beta": ints_json(&r.beta.0),
            })
        })
        .collect();
    let mut text = format!("generators: D1..D{}\nlinear relations:\n", p.generators);
    for rel in &p.linear_relations {
        let terms: Vec<(String, String)> = rel
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (c.to_string(), format!("D{}", i + 1)))
            .collect();
        text += &format!("  {} = 0\n", signed_sum(&terms));
    }
    text += "deformed relations:\n";
    for r in &p.deformed_relations {
        let lhs = r.set.iter().map(|i| format!("D{}", i + 1)).collect::<Vec<_>>().join("*");
        let mut rhs = format!("q^{}", r.beta);
        for (j, a) in &r.rhs {
            rhs += &if a == &Int::from(1) { format!("*D{}", j + 1) } else { format!("*D{}^{}", j + 1, a) };
        }
        text += &format!("  {} = {}\n", lhs, rhs);
    }
    Ok(Report {
        json: json!({
            "generators": p.generators,
            "linear_relations": p.linear_relations.iter().map(|r| ints_json(r)).collect::<Vec<_>>(),
            "deformed_relations": deformed,
        }),
        text,
    })
}

pub fn cmd_giambelli(path: &Path, cone: &[usize]) -> Result<Report> {
    let fan = load_fan(path)?;
    let sigma = label_set(&fan, cone)?;
    let qr = QuantumRing::new(&fan)?;
    let g = qr.giambelli(sigma)?;
    let terms: Vec<Value> = g
        .terms()
        .map(|(b, m, c)| {
            json!({
                "beta": ints_json(&b.0),
                "monomial": m.iter().map(|i| i + 1).collect::<Vec<_>>(),
                "coeff": rational_json(c),
            })
        })
        .collect();
    let value = qr.evaluate(&g)?;
    Ok(Report {
        json: json!({
            "cone": labels(sigma),
            "formula": g.to_string(),
            "terms": terms,
            "value": quantum_json(&value),
            "basis": basis_legend(qr.cohomology()),
        }),
        text: format!("X{} = {}\n", sigma, g),
    })
}

pub fn cmd_multiply(path: &Path, a: &str, b: &str) -> Result<Report> {
    let (ea, eb) = (expr::parse(a)?, expr::parse(b)?);
    let fan = load_fan(path)?;
    let qr = QuantumRing::new(&fan)?;
    let x = ea.evaluate(&qr)?;
    let y = eb.evaluate(&qr)?;
    let p = qr.quantum_product(&x, &y)?;
    let mut json = quantum_json(&p);
    json["basis"] = basis_legend(qr.cohomology());
    Ok(Report { json, text: format!("{}\n", quantum_text(&p, qr.cohomology())) })
}

fn classical(q: &QuantumClass, ring: &CohomologyRing, what: &str) -> Result<CohomologyClass> {
    if q.terms().any(|(b, _)| !b.is_zero()) {
        return Err(Error::Parse(format!("{what} must be a classical class (no q terms)")));
    }
    Ok(q.classical_part().cloned().unwrap_or_else(|| ring.zero()))
}

pub fn cmd_gw(path: &Path, a: &str, b: &str, c: &str, beta: &str) -> Result<Report> {
    let exprs = [expr::parse(a)?, expr::parse(b)?, expr::parse(c)?];
    let fan = load_fan(path)?;
    let beta = parse_curve_class(beta, fan.num_rays())?;
    let qr = QuantumRing::new(&fan)?;
    let ring = qr.cohomology();
    let mut classes = Vec::new();
    for (e, name) in exprs.iter().zip(["first", "second", "third"]) {
        classes.push(classical(&e.evaluate(&qr)?, ring, name)?);
    }
    let v = qr.gw3(&classes[0], &classes[1], &classes[2], &beta)?;
    Ok(Report { json: json!({ "beta": ints_json(&beta.0), "value": rational_json(&v) }), text: format!("{}\n", v) })
}

pub fn cmd_tower(path: &Path, order: Option<&[usize]>) -> Result<Report> {
    let fan = load_fan(path)?;
    let order0 = match order {
        Some(o) => {
            label_set(&fan, o)?;
            Some(o.iter().map(|l| l - 1).collect::<Vec<_>>())
        }
        None => None,
    };
    let tower = fano::blow_down_tower(&fan, order0.as_deref())?;
    let mut steps = Vec::new();
    let mut text = String::new();
    for (k, f) in tower.fans.iter().enumerate() {
        let file = f.to_file();
        let removed = if k == 0 { Value::Null } else { json!(tower.removed[k - 1] + 1) };
        steps.push(json!({
            "removed": removed,
            "origin": tower.origins[k].iter().map(|i| i + 1).collect::<Vec<_>>(),
            "tier": fano::tier(f),
            "fan": serde_json::to_value(&file).unwrap(),
        }));
        if k > 0 {
            text += &format!("contract D{:<3} -> {} rays\n", tower.removed[k - 1] + 1, f.num_rays());
        }
    }
    let dims = fano::is_product_of_projective_spaces(tower.last());
    match &dims {
        Some(d) => text += &format!("terminal: product of projective spaces of dimensions {:?}\n", d),
        None => text += "terminal: not a product of projective spaces\n",
    }
    Ok(Report { json: json!({ "steps": steps, "terminal_factors": dims }), text })
}

pub fn cmd_tree(path: &Path, beta: &str) -> Result<Report> {
    let fan = load_fan(path)?;
    let beta = parse_curve_class(beta, fan.num_rays())?;
    let forest = curves::tree_for_class(&fan, &beta)?;
    let mut text = match forest.root {
        Some(r) => format!("root cone {}\n", fan.max_cones()[r]),
        None => "empty forest\n".to_string(),
    };
    let trees: Vec<Value> = forest
        .trees
        .iter()
        .map(|(t, copies)| {
            text += &format!("{} x tree to D{} (degree {}, class {})\n", copies, t.target + 1, t.degree(), t.cls);
            let edges: Vec<Value> = t
                .edges
                .iter()
                .map(|e| {
                    text += &format!("    edge {:<10} x{} class {}\n", e.cone.to_string(), e.multiplicity, e.cls);
                    json!({ "cone": labels(e.cone), "multiplicity": e.multiplicity, "class": ints_json(&e.cls.0) })
                })
                .collect();
            json!({
                "target": t.target + 1,
                "copies": copies,
                "degree": int_json(&t.degree()),
                "class": ints_json(&t.cls.0),
                "degree_verified": t.degree_verified,
                "edges": edges,
            })
        })
        .collect();
    Ok(Report {
        json: json!({
            "root": forest.root.map(|r| fan.max_cones()[r].labels()),
            "trees": trees,
            "class": ints_json(&forest.cls.0),
        }),
        text,
    })
}

pub fn cmd_census(dim: usize, max_rays: usize) -> Result<Report> {
    let fans = census::census(dim, max_rays)?;
    let mut text = format!("{} isomorphism classes\n", fans.len());
    let list: Vec<Value> = fans
        .iter()
        .map(|f| {
            let file = f.to_file();
            text += &format!("  {} rays: {:?}\n", f.num_rays(), file.rays);
            serde_json::to_value(&file).unwrap()
        })
        .collect();
    Ok(Report { json: json!({ "count": fans.len(), "fans": list }), text })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_rendering() {
        assert_eq!(rational_json(&Rational::from_integer(3.into())), json!(3));
        let half = Rational::new(1.into(), 2.into());
        assert_eq!(rational_json(&half), json!("1/2"));
        assert_eq!(rational_from_json(&json!("1/2")).unwrap(), half);
        assert_eq!(rational_from_json(&json!(-4)).unwrap(), Rational::from_integer((-4).into()));
    }

    #[test]
    fn label_parsing() {
        assert_eq!(parse_labels("1,4").unwrap(), vec![1, 4]);
        assert_eq!(parse_labels("[2, 3]").unwrap(), vec![2, 3]);
        assert!(parse_labels("").unwrap().is_empty());
        assert!(parse_labels("a").is_err());
        assert_eq!(parse_curve_class("1,1,1", 3).unwrap(), CurveClass::from_i64s(&[1, 1, 1]));
        assert!(parse_curve_class("1,1", 3).is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::Parse("x".into())), 2);
        assert_eq!(exit_code(&Error::NotFano), 4);
        assert_eq!(exit_code(&Error::NotEffective("x".into())), 5);
        assert_eq!(error_json(&Error::NotFano)["error"]["kind"], json!("NotFano"));
    }
}
