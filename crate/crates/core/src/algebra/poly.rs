//! Dense univariate polynomials over Z, stored as ascending coefficient
//! slices. Only what the field arithmetic needs: pseudo-remainders,
//! contents and the subresultant resultant.

use rug::ops::Pow;
use rug::{Integer, Rational};

pub(crate) fn trim(p: &mut Vec<Integer>) {
    while p.last().map_or(false, |c| *c == 0) {
        p.pop();
    }
}

pub(crate) fn trimmed(p: &[Integer]) -> Vec<Integer> {
    let mut v = p.to_vec();
    trim(&mut v);
    v
}

/// Degree of a trimmed polynomial; `None` for the zero polynomial.
pub(crate) fn degree(p: &[Integer]) -> Option<usize> {
    p.iter().rposition(|c| *c != 0)
}

/// Non-negative gcd of all coefficients.
pub fn content(p: &[Integer]) -> Integer {
    let mut g = Integer::new();
    for c in p {
        g.gcd_mut(c);
        if g == 1 {
            break;
        }
    }
    g
}

pub fn derivative(p: &[Integer]) -> Vec<Integer> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| Integer::from(c * i as u64))
        .collect()
}

/// Pseudo-remainder: the remainder of `lc(b)^(deg a - deg b + 1) * a` on division by `b`.
pub(crate) fn prem(a: &[Integer], b: &[Integer]) -> Vec<Integer> {
    let db = degree(b).expect("pseudo-division by zero polynomial");
    let mut r = trimmed(a);
    let Some(da) = degree(&r) else {
        return r;
    };
    if da < db {
        return r;
    }
    let lb = &b[db];
    let mut e = da - db + 1;
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let lr = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c *= lb;
        }
        for (i, bc) in b[..db].iter().enumerate() {
            r[i + shift] -= Integer::from(&lr * bc);
        }
        r[dr] = Integer::new();
        trim(&mut r);
        e -= 1;
    }
    if e > 0 {
        let f = Integer::from(lb.pow(e as u32));
        for c in r.iter_mut() {
            *c *= &f;
        }
    }
    r
}

/// Resultant of two integer polynomials by the subresultant algorithm.
///
/// With `a` monic this equals the product of `b` over the roots of `a`.
pub fn resultant(a: &[Integer], b: &[Integer]) -> Integer {
    let mut a = trimmed(a);
    let mut b = trimmed(b);
    let (Some(mut da), Some(mut db)) = (degree(&a), degree(&b)) else {
        return Integer::new();
    };
    if da == 0 {
        return Integer::from(a[0].clone().pow(db as u32));
    }
    if db == 0 {
        return Integer::from(b[0].clone().pow(da as u32));
    }

    let ca = content(&a);
    let cb = content(&b);
    for c in a.iter_mut() {
        c.div_exact_mut(&ca);
    }
    for c in b.iter_mut() {
        c.div_exact_mut(&cb);
    }
    let t = Integer::from(ca.pow(db as u32)) * Integer::from(cb.pow(da as u32));

    let mut negate = false;
    if da < db {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut da, &mut db);
        if da % 2 == 1 && db % 2 == 1 {
            negate = true;
        }
    }

    let mut g = Integer::from(1);
    let mut h = Integer::from(1);
    loop {
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            negate = !negate;
        }
        let r = prem(&a, &b);
        let Some(dr) = degree(&r) else {
            return Integer::new();
        };
        a = b;
        da = db;
        let divisor = Integer::from(&g * Integer::from(h.clone().pow(delta as u32)));
        b = r
            .into_iter()
            .map(|mut c| {
                c.div_exact_mut(&divisor);
                c
            })
            .collect();
        db = dr;
        g = a[da].clone();
        if delta > 0 {
            let num = Integer::from(g.clone().pow(delta as u32));
            let den = Integer::from(h.clone().pow(delta as u32 - 1));
            h = num.div_exact(&den);
        }
        if db == 0 {
            break;
        }
    }
    let num = Integer::from(b[0].clone().pow(da as u32));
    let den = Integer::from(h.pow(da as u32 - 1));
    let mut res = num.div_exact(&den) * t;
    if negate {
        res = -res;
    }
    res
}

/// Horner evaluation of an integer polynomial at a rational point.
pub fn eval_rational(p: &[Integer], x: &Rational) -> Rational {
    let mut acc = Rational::new();
    for c in p.iter().rev() {
        acc *= x;
        acc += c;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zp(v: &[i64]) -> Vec<Integer> {
        v.iter().map(|&c| Integer::from(c)).collect()
    }

    #[test]
    fn prem_matches_hand_division() {
        // (x^2 + 1) divided by (2x + 1): 4(x^2+1) = (2x+1)(2x-1) + 5
        assert_eq!(prem(&zp(&[1, 0, 1]), &zp(&[1, 2])), zp(&[5]));
    }

    #[test]
    fn small_resultants() {
        // Res(x^2+1, x) = i * (-i) = 1
        assert_eq!(resultant(&zp(&[1, 0, 1]), &zp(&[0, 1])), 1);
        // Res(x^2+2, 2+x) = (2+i√2)(2-i√2) = 6
        assert_eq!(resultant(&zp(&[2, 0, 1]), &zp(&[2, 1])), 6);
        // common root
        assert_eq!(resultant(&zp(&[-1, 0, 1]), &zp(&[-1, 1])), 0);
        // constants
        assert_eq!(resultant(&zp(&[3]), &zp(&[1, 1, 1])), 9);
        assert_eq!(resultant(&zp(&[1, 1, 1]), &zp(&[]),), 0);
    }

    #[test]
    fn discriminant_style_resultant() {
        // Res(x^2 - x - 1, 2x - 1) = (2φ-1)(2φ'-1) = -5
        assert_eq!(resultant(&zp(&[-1, -1, 1]), &zp(&[-1, 2])), -5);
    }
}
