#![allow(dead_code)]

use std::sync::Arc;

use edsh::algebra::{FieldElement, NumberField};
use edsh::curve::{Curve, Point};
use edsh::eds::AbstractEds;
use rug::Integer;

pub fn curve_i64(k: &Arc<NumberField>, a: [i64; 5]) -> Curve {
    Curve::from_i64(k, a).unwrap()
}

pub fn el(k: &Arc<NumberField>, c: &[i64]) -> FieldElement {
    k.element_i64(c).unwrap()
}

/// y^2 + y = x^3 - x, P = (0, 0).
pub fn curve37() -> (Curve, Point) {
    let k = NumberField::rationals();
    (curve_i64(&k, [0, 0, 1, -1, 0]), Point::affine(k.constant(0), k.constant(0)))
}

/// y^2 = x^3 - 16x + 16, Q = (0, 4): a non-minimal model of the curve above.
pub fn notinmin() -> (Curve, Point) {
    let k = NumberField::rationals();
    (curve_i64(&k, [0, 0, 0, -16, 16]), Point::affine(k.constant(0), k.constant(4)))
}

/// Q(sqrt(-2)), y^2 + y = x^3 - x^2, Q = (2 + t, 1 + 2t).
pub fn silver1() -> (Curve, Point) {
    let k = NumberField::from_i64(&[2, 0, 1]).unwrap();
    (curve_i64(&k, [0, -1, 1, 0, 0]), Point::affine(el(&k, &[2, 1]), el(&k, &[1, 2])))
}

/// Q(i), y^2 + 4y = x^3 + 6i x, Q = (0, 0).
pub fn silver2() -> (Curve, Point) {
    let k = NumberField::from_i64(&[1, 0, 1]).unwrap();
    let e = Curve::new(k.zero(), k.zero(), k.constant(4), el(&k, &[0, 6]), k.zero()).unwrap();
    (e, Point::affine(k.zero(), k.zero()))
}

pub fn silnodo_m() -> Integer {
    let a = Integer::from(Integer::u_pow_u(10, 30)).next_prime();
    let b = Integer::from(Integer::u_pow_u(10, 40)).next_prime();
    a * b
}

/// y^2 = x^3 + m x + m^2, Q = (0, m).
pub fn silnodo() -> (Curve, Point) {
    let k = NumberField::rationals();
    let m = silnodo_m();
    let m2 = Integer::from(&m * &m);
    let e = Curve::new(k.zero(), k.zero(), k.zero(), k.from_integer(m.clone()), k.from_integer(m2)).unwrap();
    (e, Point::affine(k.zero(), k.from_integer(m)))
}

/// K = Q(r), r^17 + r + 996 = 0, theta = 1 - 1728 r^2, y^2 = x^3 + theta x + theta^2, Q = (0, theta).
pub fn stillnodo() -> (Curve, Point) {
    let mut f = vec![0i64; 18];
    f[0] = 996;
    f[1] = 1;
    f[17] = 1;
    let k = NumberField::from_i64(&f).unwrap();
    let theta = el(&k, &[1, 0, -1728]);
    let e = Curve::new(k.zero(), k.zero(), k.zero(), theta.clone(), theta.square()).unwrap();
    (e, Point::affine(k.zero(), theta))
}

/// y^2 + xy + y = x^3 - x^2 - 48x + 147, Q = (13, 33).
pub fn rational_benchmark() -> (Curve, Point) {
    let k = NumberField::rationals();
    (curve_i64(&k, [1, -1, 1, -48, 147]), Point::affine(k.constant(13), k.constant(33)))
}

/// y^2 = x^3 - x, Q = (0, 0), a point of order 2.
pub fn two_torsion() -> (Curve, Point) {
    let k = NumberField::rationals();
    (curve_i64(&k, [0, 0, 0, -1, 0]), Point::affine(k.constant(0), k.constant(0)))
}

/// Q(w) with w^2 + w + 1 = 0; seed 0, 1, 1+w, 1+w, 1+w.
pub fn elp3_seed() -> AbstractEds {
    let k = NumberField::from_i64(&[1, 1, 1]).unwrap();
    let a = el(&k, &[1, 1]);
    AbstractEds::from_terms(a.clone(), a.clone(), a).unwrap()
}

/// Q(u) with u^2 - u - 1 = 0; seed 0, 1, 1-u, -2+u, 5-3u.
pub fn elp5_seed() -> AbstractEds {
    let k = NumberField::from_i64(&[-1, -1, 1]).unwrap();
    AbstractEds::from_terms(el(&k, &[1, -1]), el(&k, &[-2, 1]), el(&k, &[5, -3])).unwrap()
}

/// Q(w), y^2 = x^3 - 243x + 3726 + 10368w, Q = (3 - 12w, -108w^2).
pub fn elp3_curve() -> (Curve, Point) {
    let k = NumberField::from_i64(&[1, 1, 1]).unwrap();
    let e = Curve::new(k.zero(), k.zero(), k.zero(), k.constant(-243), el(&k, &[3726, 10368])).unwrap();
    // w^2 = -1 - w
    (e, Point::affine(el(&k, &[3, -12]), el(&k, &[108, 108])))
}

/// Q(u), y^2 = x^3 + (-2214 + 1215u)x + 40878 - 23328u, Q = (3 - 9u, 108 - 108u).
pub fn elp5_curve() -> (Curve, Point) {
    let k = NumberField::from_i64(&[-1, -1, 1]).unwrap();
    let e = Curve::new(k.zero(), k.zero(), k.zero(), el(&k, &[-2214, 1215]), el(&k, &[40878, -23328])).unwrap();
    (e, Point::affine(el(&k, &[3, -9]), el(&k, &[108, -108])))
}

/// Prime factors of a small integer by trial division.
pub fn small_prime_factors(n: &Integer) -> Vec<Integer> {
    let mut r = n.clone().abs();
    let mut out = Vec::new();
    let mut p = Integer::from(2);
    while Integer::from(&p * &p) <= r {
        if r.is_divisible(&p) {
            out.push(p.clone());
            while r.is_divisible(&p) {
                r /= &p;
            }
        }
        p += 1;
    }
    if r > 1 {
        out.push(r);
    }
    out
}
