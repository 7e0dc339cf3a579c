#![allow(dead_code)]

use toric_qh::Fan;

pub fn p2() -> Fan {
    Fan::from_parts(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[1, 2], &[2, 3], &[1, 3]]).unwrap()
}

pub fn p1xp1() -> Fan {
    Fan::from_parts(2, &[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]], &[&[1, 3], &[1, 4], &[2, 3], &[2, 4]]).unwrap()
}

pub fn f1() -> Fan {
    Fan::from_parts(2, &[&[1, 0], &[0, 1], &[-1, -1], &[1, 1]], &[&[1, 4], &[4, 2], &[2, 3], &[3, 1]]).unwrap()
}

pub fn f2() -> Fan {
    Fan::from_parts(2, &[&[1, 0], &[-1, 2], &[0, 1], &[0, -1]], &[&[1, 3], &[2, 3], &[2, 4], &[1, 4]]).unwrap()
}

pub fn bl2_p2() -> Fan {
    Fan::from_parts(
        2,
        &[&[1, 0], &[0, 1], &[-1, -1], &[1, 1], &[-1, 0]],
        &[&[1, 4], &[4, 2], &[2, 5], &[5, 3], &[3, 1]],
    )
    .unwrap()
}

pub fn bl3_p2() -> Fan {
    Fan::from_parts(
        2,
        &[&[1, 0], &[0, 1], &[-1, -1], &[1, 1], &[-1, 0], &[0, -1]],
        &[&[1, 4], &[4, 2], &[2, 5], &[5, 3], &[3, 6], &[6, 1]],
    )
    .unwrap()
}

pub fn corpus() -> Vec<(&'static str, Fan)> {
    vec![("P2", p2()), ("P1xP1", p1xp1()), ("F1", f1()), ("Bl2P2", bl2_p2()), ("Bl3P2", bl3_p2())]
}

/// Coordinates of `v` in the basis `a, b` of `Z^2`, by Cramer's rule.
pub fn coords2(a: [i64; 2], b: [i64; 2], v: [i64; 2]) -> [i64; 2] {
    let det = a[0] * b[1] - a[1] * b[0];
    assert!(det.abs() == 1);
    [(v[0] * b[1] - v[1] * b[0]) / det, (a[0] * v[1] - a[1] * v[0]) / det]
}

pub fn ray2(fan: &Fan, i: usize) -> [i64; 2] {
    let v = fan.ray(i).to_i64s().unwrap();
    [v[0], v[1]]
}
