//! Number fields `Q[t]/(f)` with `f` monic and integral, and their elements.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, RwLock};

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use super::complex::Complex;
use super::poly;
use super::roots::{self, RootEnclosure};
use crate::error::{Error, Result};

pub const DEFAULT_PRECISION: u32 = 128;

/// A complex value together with a radius that bounds its error.
#[derive(Clone, Debug)]
pub struct Embedded {
    pub value: Complex,
    pub radius: Float,
}

/// The field `K = Q[t]/(f)`.
///
/// `f` must be monic with integer coefficients. Squarefreeness is checked;
/// irreducibility is not, and a reducible `f` gives meaningless results.
pub struct NumberField {
    minpoly: Vec<Integer>,
    degree: usize,
    embeddings: RwLock<BTreeMap<u32, Arc<Vec<RootEnclosure>>>>,
}

impl NumberField {
    /// Builds the field from ascending integer coefficients of its defining polynomial.
    pub fn new(minpoly: Vec<Integer>) -> Result<Arc<Self>> {
        let minpoly = poly::trimmed(&minpoly);
        let degree = match poly::degree(&minpoly) {
            None | Some(0) => return Err(Error::ZeroDegree),
            Some(d) => d,
        };
        if minpoly[degree] != 1 {
            return Err(Error::NotMonic);
        }
        // gcd(f, f') is constant exactly when Res(f, f') != 0
        if degree > 1 && poly::resultant(&minpoly, &poly::derivative(&minpoly)) == 0 {
            return Err(Error::NotSquarefree);
        }
        Ok(Arc::new(NumberField { minpoly, degree, embeddings: RwLock::new(BTreeMap::new()) }))
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Arc<Self>> {
        Self::new(coeffs.iter().map(|&c| Integer::from(c)).collect())
    }

    /// `Q` presented as `Q[t]/(t)`.
    pub fn rationals() -> Arc<Self> {
        Self::from_i64(&[0, 1]).expect("t is a valid minimal polynomial")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn minpoly(&self) -> &[Integer] {
        &self.minpoly
    }

    pub fn is_rational(&self) -> bool {
        self.degree == 1
    }

    /// Certified complex roots of the defining polynomial, cached per precision.
    pub fn embeddings(&self, precision_bits: u32) -> Result<Arc<Vec<RootEnclosure>>> {
        if precision_bits < 53 {
            return Err(Error::PrecisionTooLow(precision_bits));
        }
        if let Some(r) = self.embeddings.read().expect("embedding cache poisoned").get(&precision_bits) {
            return Ok(r.clone());
        }
        let computed = Arc::new(roots::certified_roots(&self.minpoly, precision_bits)?);
        let mut cache = self.embeddings.write().expect("embedding cache poisoned");
        Ok(cache.entry(precision_bits).or_insert(computed).clone())
    }

    /// Reduces an integer polynomial of any length modulo the defining polynomial.
    fn reduce(&self, mut p: Vec<Integer>) -> Vec<Integer> {
        let d = self.degree;
        for i in (d..p.len()).rev() {
            if p[i] == 0 {
                continue;
            }
            let c = std::mem::take(&mut p[i]);
            for (j, fj) in self.minpoly[..d].iter().enumerate() {
                if *fj != 0 {
                    p[i - d + j] -= Integer::from(&c * fj);
                }
            }
        }
        p.truncate(d);
        p.resize(d, Integer::new());
        p
    }

    pub fn zero(self: &Arc<Self>) -> FieldElement {
        FieldElement { field: self.clone(), num: vec![Integer::new(); self.degree], den: Integer::from(1) }
    }

    pub fn one(self: &Arc<Self>) -> FieldElement {
        self.from_integer(Integer::from(1))
    }

    pub fn from_integer(self: &Arc<Self>, v: Integer) -> FieldElement {
        let mut num = vec![Integer::new(); self.degree];
        num[0] = v;
        FieldElement { field: self.clone(), num, den: Integer::from(1) }
    }

    pub fn constant(self: &Arc<Self>, v: i64) -> FieldElement {
        self.from_integer(Integer::from(v))
    }

    /// The class of `t`.
    pub fn generator(self: &Arc<Self>) -> FieldElement {
        if self.degree == 1 {
            return self.from_integer(Integer::from(-&self.minpoly[0]));
        }
        let mut num = vec![Integer::new(); self.degree];
        num[1] = Integer::from(1);
        FieldElement { field: self.clone(), num, den: Integer::from(1) }
    }

    /// Element with the given power-basis coefficients; shorter vectors are zero-padded.
    pub fn element(self: &Arc<Self>, coeffs: &[Rational]) -> Result<FieldElement> {
        if coeffs.len() > self.degree {
            return Err(Error::BadLength { expected: self.degree, got: coeffs.len() });
        }
        let mut den = Integer::from(1);
        for c in coeffs {
            den.lcm_mut(c.denom());
        }
        let mut num = vec![Integer::new(); self.degree];
        for (slot, c) in num.iter_mut().zip(coeffs) {
            *slot = Integer::from(c.numer() * Integer::from(&den / c.denom()));
        }
        Ok(FieldElement::normalized(self.clone(), num, den))
    }

    pub fn element_i64(self: &Arc<Self>, coeffs: &[i64]) -> Result<FieldElement> {
        if coeffs.len() > self.degree {
            return Err(Error::BadLength { expected: self.degree, got: coeffs.len() });
        }
        let mut num = vec![Integer::new(); self.degree];
        for (slot, &c) in num.iter_mut().zip(coeffs) {
            *slot = Integer::from(c);
        }
        Ok(FieldElement { field: self.clone(), num, den: Integer::from(1) })
    }
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.minpoly == other.minpoly
    }
}

impl Eq for NumberField {}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NumberField({})", poly_to_string(&self.minpoly, "t"))
    }
}

/// An element of `K`, stored as an integer coefficient vector over a positive
/// common denominator with no common factor between the two.
#[derive(Clone)]
pub struct FieldElement {
    field: Arc<NumberField>,
    num: Vec<Integer>,
    den: Integer,
}

impl FieldElement {
    fn normalized(field: Arc<NumberField>, mut num: Vec<Integer>, mut den: Integer) -> Self {
        debug_assert!(den != 0);
        if den < 0 {
            den = -den;
            for c in num.iter_mut() {
                *c = Integer::from(-&*c);
            }
        }
        if den != 1 {
            let mut g = poly::content(&num);
            if g == 0 {
                den = Integer::from(1);
            } else {
                g.gcd_mut(&den);
                if g != 1 {
                    for c in num.iter_mut() {
                        c.div_exact_mut(&g);
                    }
                    den.div_exact_mut(&g);
                }
            }
        }
        FieldElement { field, num, den }
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn degree(&self) -> usize {
        self.field.degree
    }

    /// Integer numerator vector; the element is `numerator / denominator`.
    pub fn numerator(&self) -> &[Integer] {
        &self.num
    }

    pub fn denominator(&self) -> &Integer {
        &self.den
    }

    /// Power-basis coefficients as rationals.
    pub fn coeffs(&self) -> Vec<Rational> {
        self.num.iter().map(|c| Rational::from((c.clone(), self.den.clone()))).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|c| *c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.den == 1 && self.num[0] == 1 && self.num[1..].iter().all(|c| *c == 0)
    }

    /// Membership in `Z[t]/(f)`.
    pub fn is_integral(&self) -> bool {
        self.den == 1
    }

    /// `Some(q)` when the element is the rational number `q`.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.num[1..].iter().all(|c| *c == 0) {
            Some(Rational::from((self.num[0].clone(), self.den.clone())))
        } else {
            None
        }
    }

    pub fn same_field(&self, other: &FieldElement) -> bool {
        Arc::ptr_eq(&self.field, &other.field) || *self.field == *other.field
    }

    fn check(&self, other: &FieldElement) -> Result<()> {
        if self.same_field(other) {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    fn add_sub(&self, other: &FieldElement, negate: bool) -> FieldElement {
        let apply = |acc: &mut Integer, x: Integer| {
            if negate {
                *acc -= x
            } else {
                *acc += x
            }
        };
        if self.den == other.den {
            let mut num = self.num.clone();
            for (a, b) in num.iter_mut().zip(&other.num) {
                apply(a, b.clone());
            }
            if self.den == 1 {
                return FieldElement { field: self.field.clone(), num, den: Integer::from(1) };
            }
            return Self::normalized(self.field.clone(), num, self.den.clone());
        }
        let mut num: Vec<Integer> = self.num.iter().map(|a| Integer::from(a * &other.den)).collect();
        for (a, b) in num.iter_mut().zip(&other.num) {
            apply(a, Integer::from(b * &self.den));
        }
        Self::normalized(self.field.clone(), num, Integer::from(&self.den * &other.den))
    }

    pub fn checked_add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        Ok(self.add_sub(other, false))
    }

    pub fn checked_sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        Ok(self.add_sub(other, true))
    }

    pub fn checked_mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &FieldElement) -> FieldElement {
        let d = self.field.degree;
        let mut prod = vec![Integer::new(); 2 * d - 1];
        for (i, a) in self.num.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                prod[i + j] += a * b;
            }
        }
        let num = self.field.reduce(prod);
        if self.den == 1 && other.den == 1 {
            FieldElement { field: self.field.clone(), num, den: Integer::from(1) }
        } else {
            Self::normalized(self.field.clone(), num, Integer::from(&self.den * &other.den))
        }
    }

    pub fn square(&self) -> FieldElement {
        self.mul_unchecked(self)
    }

    pub fn cube(&self) -> FieldElement {
        self.square().mul_unchecked(self)
    }

    pub fn pow(&self, mut e: u64) -> FieldElement {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc
    }

    pub fn mul_integer(&self, k: &Integer) -> FieldElement {
        let num = self.num.iter().map(|c| Integer::from(c * k)).collect();
        Self::normalized(self.field.clone(), num, self.den.clone())
    }

    pub fn mul_i64(&self, k: i64) -> FieldElement {
        self.mul_integer(&Integer::from(k))
    }

    /// Multiplicative inverse by the extended Euclidean algorithm against the minimal polynomial.
    pub fn inverse(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f: Vec<Rational> = self.field.minpoly.iter().map(|c| Rational::from(c.clone())).collect();
        let a: Vec<Rational> = self.num.iter().map(|c| Rational::from(c.clone())).collect();
        let (mut r0, mut r1) = (f, rat_trim(a));
        let (mut s0, mut s1) = (Vec::<Rational>::new(), vec![Rational::from(1)]);
        while r1.len() > 1 {
            let (q, r) = rat_divmod(&r0, &r1);
            let s2 = rat_sub(&s0, &rat_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        if r1.is_empty() {
            // only possible when f is reducible
            return Err(Error::DivisionByZero);
        }
        // s1 * a = r1[0] (mod f); the inverse of num/den is den * s1 / r1[0]
        let scale = Rational::from(&self.den / &r1[0]);
        let coeffs: Vec<Rational> = s1.into_iter().map(|c| c * &scale).collect();
        self.field.element(&coeffs)
    }

    pub fn checked_div(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        Ok(self.mul_unchecked(&other.inverse()?))
    }

    /// `N_{K/Q}`, as `Res(f, numerator) / denominator^d`.
    pub fn norm(&self) -> Rational {
        let d = self.field.degree;
        let n = if d == 1 {
            self.num[0].clone()
        } else {
            poly::resultant(&self.field.minpoly, &self.num)
        };
        Rational::from((n, Integer::from(self.den.clone().pow(d as u32))))
    }

    /// `|N(numerator)|` as an integer; for integral elements this is `|N(self)|`.
    pub fn numerator_norm_abs(&self) -> Integer {
        let n = if self.field.degree == 1 {
            self.num[0].clone()
        } else {
            poly::resultant(&self.field.minpoly, &self.num)
        };
        n.abs()
    }

    /// Content of the numerator vector (non-negative gcd of its entries).
    pub fn numerator_content(&self) -> Integer {
        poly::content(&self.num)
    }


    /// Characteristic polynomial of multiplication by `self`, ascending and monic.
    ///
    /// Evaluated as `Res(f, X0*den - num) / den^d` at `X0 = 0..d`, then interpolated.
    pub fn charpoly(&self) -> Vec<Rational> {
        let d = self.field.degree;
        let dpow = Integer::from(self.den.clone().pow(d as u32));
        let mut values: Vec<Rational> = (0..=d)
            .map(|x0| {
                let mut g: Vec<Integer> = self.num.iter().map(|c| Integer::from(-c)).collect();
                g[0] += Integer::from(&self.den * x0 as u64);
                let r = if d == 1 { g[0].clone() } else { poly::resultant(&self.field.minpoly, &g) };
                Rational::from((r, dpow.clone()))
            })
            .collect();
        // Newton divided differences on the nodes 0, 1, ..., d
        for j in 1..=d {
            for i in (j..=d).rev() {
                let diff = Rational::from(&values[i] - &values[i - 1]);
                values[i] = diff / j as u32;
            }
        }
        let mut out = vec![Rational::new(); d + 1];
        out[0] = values[d].clone();
        let mut len = 1;
        for i in (0..d).rev() {
            // out <- out * (X - i) + values[i]
            for k in (0..=len).rev() {
                let lower = if k > 0 { out[k - 1].clone() } else { Rational::new() };
                let cur = Rational::from(&out[k] * i as u32);
                out[k] = lower - cur;
            }
            len += 1;
            out[0] += &values[i];
        }
        out
    }

    /// Image under the `index`-th complex embedding, with a bound on its error.
    pub fn embed(&self, index: usize, precision_bits: u32) -> Result<Embedded> {
        let roots = self.field.embeddings(precision_bits)?;
        let root = roots
            .get(index)
            .ok_or(Error::IndexOutOfRange { index, degree: self.field.degree })?;
        Ok(self.eval_at(root))
    }

    /// Images under all embeddings at the given precision.
    pub fn embed_all(&self, precision_bits: u32) -> Result<Vec<Embedded>> {
        let roots = self.field.embeddings(precision_bits)?;
        Ok(roots.iter().map(|r| self.eval_at(r)).collect())
    }

    pub(crate) fn eval_at(&self, root: &RootEnclosure) -> Embedded {
        let prec = root.center.prec();
        let work = prec + 16;
        let z = root.center.clone().with_prec(work);
        let mut v = Complex::zero(work);
        let mut lip = Float::new(64);
        let mut mag = Float::new(64);
        let az = z.abs_upper(64);
        let az_r = Float::with_val(64, &az + &root.radius);
        for (k, c) in self.num.iter().enumerate().rev() {
            v = v.mul(&z);
            v.re += c;
            // derivative bound on the disk |z'| <= |z| + r, and the magnitude sum for rounding
            lip *= &az_r;
            if k > 0 {
                lip += Float::with_val(64, c).abs() * k as u32;
            }
            mag *= &az;
            mag += Float::with_val(64, c).abs();
        }
        // lip holds sum k|c_k| (|z|+r)^(k) over one extra power; undo it
        if !az_r.is_zero() {
            lip /= &az_r;
        }
        let den = Float::with_val(work, &self.den);
        let value = Complex { re: Float::with_val(prec, &v.re / &den), im: Float::with_val(prec, &v.im / &den) };
        let mut radius = lip * &root.radius;
        radius += mag * (2 * self.num.len() as u32 + 2) >> (work as i32 - 2);
        radius += value.abs_upper(64) >> (prec as i32 - 2);
        radius /= Float::with_val(64, &self.den);
        Embedded { value, radius }
    }

    /// Coefficients in the serialized form: `"n"` or `"p/q"`.
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs().iter().map(rational_to_string).collect()
    }
}

pub fn rational_to_string(q: &Rational) -> String {
    if *q.denom() == 1 {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn rat_trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.last().map_or(false, |c| *c == 0) {
        p.pop();
    }
    p
}

fn rat_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let mut out = vec![Rational::new(); n];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    rat_trim(out)
}

fn rat_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::new(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += Rational::from(x * y);
        }
    }
    rat_trim(out)
}

fn rat_divmod(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut r = rat_trim(a.to_vec());
    let db = b.len() - 1;
    let lb = &b[db];
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![Rational::new(); r.len() - db];
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let c = Rational::from(&r[dr] / lb);
        for (i, bc) in b.iter().enumerate() {
            r[dr - db + i] -= Rational::from(&c * bc);
        }
        q[dr - db] = c;
        r.pop();
        r = rat_trim(r);
    }
    (rat_trim(q), r)
}

pub(crate) fn poly_to_string(p: &[Integer], var: &str) -> String {
    let mut terms = Vec::new();
    for (i, c) in p.iter().enumerate().rev() {
        if *c == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        let s = match (i, c.to_i32()) {
            (0, _) => c.to_string(),
            (_, Some(1)) => mono,
            (_, Some(-1)) => format!("-{mono}"),
            _ => format!("{c}*{mono}"),
        };
        terms.push(s);
    }
    if terms.is_empty() {
        return "0".into();
    }
    terms.join(" + ").replace("+ -", "- ")
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.same_field(other) && self.den == other.den && self.num == other.num
    }
}

impl Eq for FieldElement {}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = poly_to_string(&self.num, "t");
        if self.den == 1 {
            write!(f, "{body}")
        } else {
            write!(f, "({body})/{}", self.den)
        }
    }
}

// Operator forms panic on field mismatch; the checked_* methods report it.
macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: &FieldElement) -> FieldElement {
                assert!(self.same_field(rhs), "field mismatch in arithmetic");
                $body(self, rhs)
            }
        }
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: &FieldElement) -> FieldElement {
                (&self).$m(rhs)
            }
        }
    };
}

binop!(Add, add, |a: &FieldElement, b: &FieldElement| a.add_sub(b, false));
binop!(Sub, sub, |a: &FieldElement, b: &FieldElement| a.add_sub(b, true));
binop!(Mul, mul, |a: &FieldElement, b: &FieldElement| a.mul_unchecked(b));

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        let num = self.num.iter().map(|c| Integer::from(-c)).collect();
        FieldElement { field: self.field.clone(), num, den: self.den.clone() }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}
