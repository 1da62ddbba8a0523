mod common;

use common::*;
use edsh::algebra::NumberField;
use edsh::curve::{clear_denominators, Curve, Point};
use edsh::Error;
use proptest::prelude::*;
use rug::ops::Pow;
use rug::{Integer, Rational};

#[test]
fn invariants_of_the_37_curve() {
    let (c, _) = curve37();
    let q = c.field().clone();
    assert_eq!(c.b2, q.constant(0));
    assert_eq!(c.b4, q.constant(-2));
    assert_eq!(c.b6, q.constant(1));
    assert_eq!(c.b8, q.constant(-1));
    assert_eq!(c.delta, q.constant(37));
    let (c, _) = notinmin();
    assert_eq!(c.delta, q.constant(151552));
    assert_eq!(c.discriminant_norm(), 151552);
    let k = NumberField::rationals();
    assert_eq!(Curve::from_i64(&k, [0, 0, 0, 0, 0]).unwrap_err(), Error::SingularCurve);
}

#[test]
fn rejects_bad_coefficients() {
    let k = NumberField::rationals();
    let half = k.element(&[Rational::from((1, 2))]).unwrap();
    assert_eq!(Curve::new(k.zero(), k.zero(), k.zero(), half, k.one()).unwrap_err(), Error::NonIntegralCoefficients);
    let qi = NumberField::from_i64(&[1, 0, 1]).unwrap();
    assert_eq!(Curve::new(k.zero(), k.zero(), k.zero(), qi.one(), k.one()).unwrap_err(), Error::FieldMismatch);
}

#[test]
fn membership() {
    let (c, p) = curve37();
    let k = c.field().clone();
    assert!(c.is_on_curve(&p));
    assert!(c.is_on_curve(&Point::Infinity));
    assert!(!c.is_on_curve(&Point::affine(k.constant(1), k.constant(1))));
    let (c, q) = silnodo();
    assert!(c.is_on_curve(&q));
    for (c, q) in [silver1(), silver2(), stillnodo(), elp3_curve(), elp5_curve(), rational_benchmark()] {
        assert!(c.is_on_curve(&q));
    }
}

#[test]
fn group_law_examples() {
    let (c, p) = curve37();
    let k = c.field().clone();
    let pt = |x: i64, y: i64| Point::affine(k.constant(x), k.constant(y));
    assert_eq!(c.double(&p).unwrap(), pt(1, 0));
    assert_eq!(c.add(&p, &pt(1, 0)).unwrap(), pt(-1, -1));
    assert_eq!(c.add(&p, &Point::Infinity).unwrap(), p);
    assert_eq!(c.add(&p, &c.negate(&p).unwrap()).unwrap(), Point::Infinity);
    let (t, q) = two_torsion();
    assert_eq!(t.double(&q).unwrap(), Point::Infinity);
    assert_eq!(c.add(&p, &pt(1, 1)).unwrap_err(), Error::PointNotOnCurve);
}

#[test]
fn clearing_examples() {
    let (c, p) = curve37();
    let (c1, p1, u) = clear_denominators(&c, &p).unwrap();
    assert_eq!((c1, p1, u), (c.clone(), p.clone(), Integer::from(1)));

    // (5/4, 3/8) lies on y^2 + 2xy + y = x^3 + 2x - 3
    let k = NumberField::rationals();
    let e = Curve::from_i64(&k, [2, 0, 1, 2, -3]).unwrap();
    let pt = Point::affine(k.element(&[Rational::from((5, 4))]).unwrap(), k.element(&[Rational::from((3, 8))]).unwrap());
    assert!(e.is_on_curve(&pt));
    let (e2, q2, u) = clear_denominators(&e, &pt).unwrap();
    assert_eq!(u, 2);
    assert_eq!(q2, Point::affine(k.constant(5), k.constant(3)));
    assert_eq!(e2, Curve::from_i64(&k, [4, 0, 8, 32, -192]).unwrap());

    // 7P = (-5/9, 8/27) on the 37-curve
    let p7 = c.multiply(&p, 7).unwrap();
    assert_eq!(p7.coords().unwrap().0.denominator(), &9);
    assert_eq!(clear_denominators(&c, &p7).unwrap().2, 3);
}

fn least_u(x: &edsh::algebra::FieldElement, y: &edsh::algebra::FieldElement) -> Integer {
    let mut u = Integer::from(1);
    loop {
        let u2 = Integer::from(&u * &u);
        let u3 = Integer::from(&u2 * &u);
        if x.mul_integer(&u2).is_integral() && y.mul_integer(&u3).is_integral() {
            return u;
        }
        u += 1;
    }
}

fn random_multiples(c: &Curve, base: &Point, k: usize) -> Vec<Point> {
    let mut out = vec![base.clone()];
    for _ in 1..k {
        out.push(c.add(out.last().unwrap(), base).unwrap());
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn invariant_identities(a in prop::collection::vec(-30i64..=30, 5)) {
        let k = NumberField::rationals();
        let c = match Curve::from_i64(&k, [a[0], a[1], a[2], a[3], a[4]]) {
            Ok(c) => c,
            Err(_) => return Ok(()),
        };
        prop_assert_eq!(c.b8.mul_i64(4), &(&c.b2 * &c.b6) - &c.b4.square());
        prop_assert_eq!(&c.c4.cube() - &c.c6.square(), c.delta.mul_i64(1728));
    }

    #[test]
    fn invariant_identities_quadratic(a in prop::collection::vec(-9i64..=9, 10)) {
        let k = NumberField::from_i64(&[2, 0, 1]).unwrap();
        let e = |i: usize| k.element_i64(&a[2 * i..2 * i + 2]).unwrap();
        let c = match Curve::new(e(0), e(1), e(2), e(3), e(4)) {
            Ok(c) => c,
            Err(_) => return Ok(()),
        };
        prop_assert_eq!(c.b8.mul_i64(4), &(&c.b2 * &c.b6) - &c.b4.square());
        prop_assert_eq!(&c.c4.cube() - &c.c6.square(), c.delta.mul_i64(1728));
    }

    #[test]
    fn group_law_on_multiples(i in 0usize..8, j in 0usize..8, l in 0usize..8, which in 0usize..3) {
        let (c, p) = [curve37(), silver1(), rational_benchmark()][which].clone();
        let m = random_multiples(&c, &p, 8);
        let (a, b, d) = (&m[i], &m[j], &m[l]);
        prop_assert_eq!(c.add(a, b).unwrap(), c.add(b, a).unwrap());
        let left = c.add(&c.add(a, b).unwrap(), d).unwrap();
        let right = c.add(a, &c.add(b, d).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(c.add(a, &c.negate(a).unwrap()).unwrap(), Point::Infinity);
        prop_assert_eq!(c.double(a).unwrap(), c.add(a, a).unwrap());
        prop_assert_eq!(c.multiply(&p, (i + 1) as u64).unwrap(), m[i].clone());
    }

    #[test]
    fn clearing_is_an_isomorphism(k in 2u64..6, which in 0usize..2) {
        // multiples of a point on an integral model usually have denominators
        let (c, p) = [curve37(), rational_benchmark()][which].clone();
        let q = c.multiply(&p, k).unwrap();
        let (c2, q2, u) = clear_denominators(&c, &q).unwrap();
        prop_assert!(c2.is_on_curve(&q2));
        prop_assert!(q2.is_integral());
        let (x, y) = q.coords().unwrap();
        prop_assert_eq!(u.clone(), least_u(x, y));
        let u12 = u.pow(12);
        prop_assert_eq!(c2.delta.clone(), c.delta.mul_integer(&u12));
    }
}
