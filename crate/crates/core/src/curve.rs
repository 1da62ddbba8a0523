//! Generalized Weierstrass curves `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6` over a number field.

use std::fmt;
use std::sync::Arc;

use rug::ops::Pow;
use rug::Integer;

use crate::algebra::{FieldElement, NumberField};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Curve {
    pub a1: FieldElement,
    pub a2: FieldElement,
    pub a3: FieldElement,
    pub a4: FieldElement,
    pub a6: FieldElement,
    pub b2: FieldElement,
    pub b4: FieldElement,
    pub b6: FieldElement,
    pub b8: FieldElement,
    pub c4: FieldElement,
    pub c6: FieldElement,
    pub delta: FieldElement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Point {
    Infinity,
    Affine { x: FieldElement, y: FieldElement },
}

impl Point {
    pub fn affine(x: FieldElement, y: FieldElement) -> Self {
        Point::Affine { x, y }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    pub fn coords(&self) -> Result<(&FieldElement, &FieldElement)> {
        match self {
            Point::Infinity => Err(Error::PointAtInfinity),
            Point::Affine { x, y } => Ok((x, y)),
        }
    }

    /// Both coordinates lie in `Z[t]/(f)`.
    pub fn is_integral(&self) -> bool {
        match self {
            Point::Infinity => false,
            Point::Affine { x, y } => x.is_integral() && y.is_integral(),
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Infinity => write!(f, "O"),
            Point::Affine { x, y } => write!(f, "({x}, {y})"),
        }
    }
}

impl Curve {
    /// Builds an integral model and its invariants.
    pub fn new(
        a1: FieldElement,
        a2: FieldElement,
        a3: FieldElement,
        a4: FieldElement,
        a6: FieldElement,
    ) -> Result<Self> {
        for a in [&a2, &a3, &a4, &a6] {
            if !a1.same_field(a) {
                return Err(Error::FieldMismatch);
            }
        }
        if ![&a1, &a2, &a3, &a4, &a6].iter().all(|a| a.is_integral()) {
            return Err(Error::NonIntegralCoefficients);
        }
        Self::build(a1, a2, a3, a4, a6)
    }

    fn build(a1: FieldElement, a2: FieldElement, a3: FieldElement, a4: FieldElement, a6: FieldElement) -> Result<Self> {
        let a1sq = a1.square();
        let b2 = &a1sq + &a2.mul_i64(4);
        let b4 = &a4.mul_i64(2) + &(&a1 * &a3);
        let b6 = &a3.square() + &a6.mul_i64(4);
        let b8 = &(&(&a1sq * &a6) + &(&a2 * &a6).mul_i64(4)) - &(&(&a1 * &a3) * &a4);
        let b8 = &(&b8 + &(&a2 * &a3.square())) - &a4.square();
        let c4 = &b2.square() - &b4.mul_i64(24);
        let c6 = &(&(-&b2.cube()) + &(&b2 * &b4).mul_i64(36)) - &b6.mul_i64(216);
        let delta = &(&(-&(&b2.square() * &b8)) - &b4.cube().mul_i64(8)) - &b6.square().mul_i64(27);
        let delta = &delta + &(&(&b2 * &b4) * &b6).mul_i64(9);
        if delta.is_zero() {
            return Err(Error::SingularCurve);
        }
        Ok(Curve { a1, a2, a3, a4, a6, b2, b4, b6, b8, c4, c6, delta })
    }

    /// Curve over `K` from small integer coefficients `[a1, a2, a3, a4, a6]`.
    pub fn from_i64(field: &Arc<NumberField>, a: [i64; 5]) -> Result<Self> {
        let [a1, a2, a3, a4, a6] = a.map(|v| field.constant(v));
        Self::new(a1, a2, a3, a4, a6)
    }

    pub fn field(&self) -> &Arc<NumberField> {
        self.a1.field()
    }

    pub fn degree(&self) -> usize {
        self.a1.degree()
    }

    /// `D = |N(Delta)|`.
    pub fn discriminant_norm(&self) -> Integer {
        self.delta.numerator_norm_abs()
    }

    fn lhs_minus_rhs(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        let lhs = &(&y.square() + &(&(&self.a1 * x) * y)) + &(&self.a3 * y);
        let x2 = x.square();
        let rhs = &(&(&(&x2 * x) + &(&self.a2 * &x2)) + &(&self.a4 * x)) + &self.a6;
        &lhs - &rhs
    }

    pub fn is_on_curve(&self, p: &Point) -> bool {
        match p {
            Point::Infinity => true,
            Point::Affine { x, y } => x.same_field(&self.a1) && y.same_field(&self.a1) && self.lhs_minus_rhs(x, y).is_zero(),
        }
    }

    fn require(&self, p: &Point) -> Result<()> {
        if let Point::Affine { x, y } = p {
            if !x.same_field(&self.a1) || !y.same_field(&self.a1) {
                return Err(Error::FieldMismatch);
            }
        }
        if self.is_on_curve(p) {
            Ok(())
        } else {
            Err(Error::PointNotOnCurve)
        }
    }

    /// `psi_2 = 2y + a1 x + a3`, the tangent denominator.
    pub fn psi2_at(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        &(&y.mul_i64(2) + &(&self.a1 * x)) + &self.a3
    }

    pub fn negate(&self, p: &Point) -> Result<Point> {
        self.require(p)?;
        Ok(self.negate_unchecked(p))
    }

    pub fn add(&self, p: &Point, q: &Point) -> Result<Point> {
        self.require(p)?;
        self.require(q)?;
        Ok(self.add_unchecked(p, q))
    }

    pub fn double(&self, p: &Point) -> Result<Point> {
        self.require(p)?;
        Ok(self.double_unchecked(p))
    }

    /// `[k] p` by double-and-add, for `k >= 0`.
    pub fn multiply(&self, p: &Point, k: u64) -> Result<Point> {
        self.require(p)?;
        let mut acc = Point::Infinity;
        for bit in (0..64 - k.leading_zeros()).rev() {
            acc = self.double_unchecked(&acc);
            if (k >> bit) & 1 == 1 {
                acc = self.add_unchecked(&acc, p);
            }
        }
        Ok(acc)
    }

    pub(crate) fn negate_unchecked(&self, p: &Point) -> Point {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine { x, y } => {
                let ny = &(&(-y) - &(&self.a1 * x)) - &self.a3;
                Point::Affine { x: x.clone(), y: ny }
            }
        }
    }

    fn finish(&self, lambda: &FieldElement, nu: &FieldElement, x1: &FieldElement, x2: &FieldElement) -> Point {
        let x3 = &(&(&(&lambda.square() + &(&self.a1 * lambda)) - &self.a2) - x1) - x2;
        let y3 = &(&(-&(&(lambda + &self.a1) * &x3)) - nu) - &self.a3;
        Point::Affine { x: x3, y: y3 }
    }

    pub(crate) fn double_unchecked(&self, p: &Point) -> Point {
        let Point::Affine { x, y } = p else {
            return Point::Infinity;
        };
        let den = self.psi2_at(x, y);
        if den.is_zero() {
            return Point::Infinity;
        }
        let inv = den.inverse().expect("non-zero element of a field is invertible");
        let x2 = x.square();
        let lnum = &(&(&x2.mul_i64(3) + &(&self.a2 * x).mul_i64(2)) + &self.a4) - &(&self.a1 * y);
        let nnum = &(&(&(-&(&x2 * x)) + &(&self.a4 * x)) + &self.a6.mul_i64(2)) - &(&self.a3 * y);
        self.finish(&(&lnum * &inv), &(&nnum * &inv), x, x)
    }

    pub(crate) fn add_unchecked(&self, p: &Point, q: &Point) -> Point {
        let (x1, y1, x2, y2) = match (p, q) {
            (Point::Infinity, _) => return q.clone(),
            (_, Point::Infinity) => return p.clone(),
            (Point::Affine { x: x1, y: y1 }, Point::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        if x1 == x2 {
            if self.negate_unchecked(p) == *q {
                return Point::Infinity;
            }
            return self.double_unchecked(p);
        }
        let inv = (x2 - x1).inverse().expect("x2 != x1");
        let lambda = &(y2 - y1) * &inv;
        let nu = &(&(y1 * x2) - &(y2 * x1)) * &inv;
        self.finish(&lambda, &nu, x1, x2)
    }

    /// The model with `a_i` replaced by `u^i a_i`; a point `(x, y)` maps to `(u^2 x, u^3 y)`.
    pub fn scale(&self, u: &Integer) -> Result<Curve> {
        let u2 = Integer::from(u * u);
        let u3 = Integer::from(&u2 * u);
        let u4 = Integer::from(&u2 * &u2);
        let u6 = Integer::from(&u3 * &u3);
        Self::build(
            self.a1.mul_integer(u),
            self.a2.mul_integer(&u2),
            self.a3.mul_integer(&u3),
            self.a4.mul_integer(&u4),
            self.a6.mul_integer(&u6),
        )
    }
}

/// Moves an affine point with denominators to an integral point on a scaled model.
///
/// `u` is the least positive integer with `u^2 x` and `u^3 y` integral whenever
/// the parts of the denominators not removed by small-prime trial division are
/// squarefree; otherwise it is still valid but may not be least.
pub fn clear_denominators(c: &Curve, p: &Point) -> Result<(Curve, Point, Integer)> {
    let (x, y) = p.coords()?;
    if x.is_integral() && y.is_integral() {
        return Ok((c.clone(), p.clone(), Integer::from(1)));
    }
    // x = num/den with gcd(content(num), den) = 1, so u^2 x is integral iff den | u^2
    let u = least_root_multiple(x.denominator(), y.denominator());
    let u2 = Integer::from(&u * &u);
    let u3 = Integer::from(&u2 * &u);
    let scaled = c.scale(&u)?;
    let q = Point::Affine { x: x.mul_integer(&u2), y: y.mul_integer(&u3) };
    Ok((scaled, q, u))
}

const TRIAL_LIMIT: u32 = 1 << 14;

/// Smallest `u` (see [`clear_denominators`]) with `dx | u^2` and `dy | u^3`.
fn least_root_multiple(dx: &Integer, dy: &Integer) -> Integer {
    let mut rx = dx.clone();
    let mut ry = dy.clone();
    let mut u = Integer::from(1);
    let mut p = 2u32;
    while p < TRIAL_LIMIT && (rx != 1 || ry != 1) {
        let e = rx.remove_factor_mut(&Integer::from(p));
        let f = ry.remove_factor_mut(&Integer::from(p));
        let k = e.div_ceil(2).max(f.div_ceil(3));
        if k > 0 {
            u *= Integer::from(p).pow(k);
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rx == 1 && ry == 1 {
        return u;
    }
    for b in coprime_base(vec![rx.clone(), ry.clone()]) {
        // a perfect power c^j contributes through c with scaled exponents
        let (base, j) = perfect_power_root(&b);
        let e = rx.clone().remove_factor_mut(&b) * j;
        let f = ry.clone().remove_factor_mut(&b) * j;
        let k = e.div_ceil(2).max(f.div_ceil(3));
        u *= base.pow(k);
    }
    u
}

fn perfect_power_root(n: &Integer) -> (Integer, u32) {
    let mut base = n.clone();
    let mut exp = 1u32;
    while base > 3 && base.is_perfect_power() {
        for j in 2..=base.significant_bits() {
            let r = Integer::from(base.root_ref(j));
            if r.clone().pow(j) == base {
                base = r;
                exp *= j;
                break;
            }
        }
    }
    (base, exp)
}

/// Pairwise coprime integers `> 1` whose products generate the inputs multiplicatively.
pub(crate) fn coprime_base(inputs: Vec<Integer>) -> Vec<Integer> {
    let mut base: Vec<Integer> = inputs.into_iter().map(|n| n.abs()).filter(|n| *n > 1).collect();
    'outer: loop {
        for i in 0..base.len() {
            for j in (i + 1)..base.len() {
                let g = Integer::from(base[i].gcd_ref(&base[j]));
                if g > 1 {
                    let a = Integer::from(base[i].div_exact_ref(&g));
                    let b = Integer::from(base[j].div_exact_ref(&g));
                    base.swap_remove(j);
                    base.swap_remove(i);
                    base.extend([a, b, g].into_iter().filter(|n| *n > 1));
                    continue 'outer;
                }
            }
        }
        break;
    }
    base.sort();
    base.dedup();
    base
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Rational;

    fn curve37() -> Curve {
        Curve::from_i64(&NumberField::rationals(), [0, 0, 1, -1, 0]).unwrap()
    }

    fn pt(k: &Arc<NumberField>, x: i64, y: i64) -> Point {
        Point::affine(k.constant(x), k.constant(y))
    }

    #[test]
    fn invariants_of_37a() {
        let e = curve37();
        assert_eq!(e.b2, e.field().constant(0));
        assert_eq!(e.b4, e.field().constant(-2));
        assert_eq!(e.b6, e.field().constant(1));
        assert_eq!(e.b8, e.field().constant(-1));
        assert_eq!(e.delta, e.field().constant(37));
    }

    #[test]
    fn invariants_of_nonminimal_model() {
        let e = Curve::from_i64(&NumberField::rationals(), [0, 0, 0, -16, 16]).unwrap();
        assert_eq!(e.delta, e.field().constant(151552));
        assert_eq!(e.discriminant_norm(), 151552);
    }

    #[test]
    fn cusp_is_singular() {
        let r = Curve::from_i64(&NumberField::rationals(), [0, 0, 0, 0, 0]);
        assert_eq!(r.unwrap_err(), Error::SingularCurve);
    }

    #[test]
    fn group_law_examples() {
        let e = curve37();
        let k = e.field().clone();
        let p = pt(&k, 0, 0);
        assert!(e.is_on_curve(&p));
        assert!(!e.is_on_curve(&pt(&k, 1, 1)));
        assert_eq!(e.double(&p).unwrap(), pt(&k, 1, 0));
        assert_eq!(e.add(&p, &pt(&k, 1, 0)).unwrap(), pt(&k, -1, -1));
        assert_eq!(e.add(&p, &Point::Infinity).unwrap(), p);
        assert_eq!(e.add(&p, &e.negate(&p).unwrap()).unwrap(), Point::Infinity);
        assert_eq!(e.add(&pt(&k, 1, 1), &p).unwrap_err(), Error::PointNotOnCurve);
    }

    #[test]
    fn two_torsion_doubles_to_infinity() {
        let e = Curve::from_i64(&NumberField::rationals(), [0, 0, 0, -1, 0]).unwrap();
        let k = e.field().clone();
        assert_eq!(e.double(&pt(&k, 0, 0)).unwrap(), Point::Infinity);
    }

    #[test]
    fn clearing_denominators() {
        let k = NumberField::rationals();
        let e = curve37();
        let (e2, p2, u) = clear_denominators(&e, &pt(&k, 0, 0)).unwrap();
        assert_eq!(u, 1);
        assert_eq!((e2, p2), (e.clone(), pt(&k, 0, 0)));

        let x = k.element(&[Rational::from((5, 4))]).unwrap();
        let y = k.element(&[Rational::from((3, 8))]).unwrap();
        let (e2, p2, u) = clear_denominators(&e, &Point::affine(x, y)).unwrap();
        assert_eq!(u, 2);
        assert_eq!(p2, pt(&k, 5, 3));
        assert_eq!(e2.a3, k.constant(8));
        assert_eq!(e2.a4, k.constant(-16));

        let q2 = NumberField::from_i64(&[2, 0, 1]).unwrap();
        let x = q2.element(&[Rational::from(1), Rational::from((1, 9))]).unwrap();
        let e = Curve::from_i64(&q2, [0, -1, 1, 0, 0]).unwrap();
        let (_, _, u) = clear_denominators(&e, &Point::affine(x, q2.constant(0))).unwrap();
        assert_eq!(u, 3);
    }

    #[test]
    fn least_multiple_beyond_trial_division() {
        let p = Integer::from(1_000_003u32);
        let q = Integer::from(1_000_033u32);
        let dx = Integer::from(p.clone().pow(3u32) * &q);
        let dy = Integer::from(&q * &q);
        // need p^2 (from p^3 | u^2) and q (from q | u^2, q^2 | u^3)
        let u = least_root_multiple(&dx, &dy);
        assert_eq!(u, Integer::from(&p * &p) * &q);
    }

    #[test]
    fn scaling_multiplies_discriminant() {
        let e = curve37();
        let e2 = e.scale(&Integer::from(3)).unwrap();
        assert_eq!(e2.delta, e.delta.mul_integer(&Integer::from(3i64.pow(12))));
        let lhs = &(&e2.c4.cube() - &e2.c6.square()) - &e2.delta.mul_i64(1728);
        assert!(lhs.is_zero());
    }
}
