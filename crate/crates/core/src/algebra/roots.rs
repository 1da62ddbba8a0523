//! Complex roots of squarefree integer polynomials by Aberth–Ehrlich iteration,
//! certified afterwards with Weierstrass inclusion disks.

use std::cmp::Ordering;

use rug::float::{Constant, Round};
use rug::ops::AssignRound;
use rug::{Float, Integer};

use super::complex::Complex;
use crate::error::{Error, Result};

/// A disk of the given radius around `center` that contains exactly one root.
#[derive(Clone, Debug)]
pub struct RootEnclosure {
    pub center: Complex,
    pub radius: Float,
}

const WARMUP_PREC: u32 = 64;

/// Horner evaluation of `p` and `p'` at `z`.
fn eval_with_derivative(p: &[Float], z: &Complex) -> (Complex, Complex) {
    let prec = z.prec();
    let mut v = Complex::zero(prec);
    let mut dv = Complex::zero(prec);
    for c in p.iter().rev() {
        dv = dv.mul(z).add(&v);
        v = v.mul(z);
        v.re += c;
    }
    (v, dv)
}

fn float_coeffs(p: &[Integer], prec: u32) -> Vec<Float> {
    p.iter().map(|c| Float::with_val(prec, c)).collect()
}

/// Upper bound on the modulus of every root (Fujiwara), as an f64 of log2.
fn log2_root_bound(p: &[Integer]) -> f64 {
    let d = p.len() - 1;
    let mut best = f64::NEG_INFINITY;
    for k in 1..=d {
        let c = &p[d - k];
        if *c == 0 {
            continue;
        }
        let lg = Float::with_val(64, c).abs().log2().to_f64();
        let lg = if k == d { lg - 1.0 } else { lg };
        best = best.max(lg / k as f64);
    }
    if best.is_finite() {
        best + 1.0
    } else {
        0.0
    }
}

/// Runs Aberth sweeps until every correction is below `2^-tol_bits` relative, or `max_iter` passes.
fn aberth(p: &[Float], z: &mut [Complex], tol_bits: i32, max_iter: usize) -> bool {
    let d = z.len();
    for _ in 0..max_iter {
        let mut done = true;
        for i in 0..d {
            let (v, dv) = eval_with_derivative(p, &z[i]);
            if v.is_zero() {
                continue;
            }
            let ratio = v.div(&dv);
            let mut s = Complex::zero(z[i].prec());
            for j in 0..d {
                if j != i {
                    s = s.add(&z[i].sub(&z[j]).recip());
                }
            }
            let mut denom = ratio.mul(&s);
            denom = Complex::from_f64(denom.prec(), 1.0, 0.0).sub(&denom);
            let w = if denom.is_zero() { ratio } else { ratio.div(&denom) };
            let scale = z[i].abs().max(&Float::with_val(32, 1));
            let mut threshold = Float::with_val(64, &scale);
            threshold >>= tol_bits;
            if w.abs() > threshold {
                done = false;
            }
            z[i] = z[i].sub(&w);
        }
        if done {
            return true;
        }
    }
    false
}

fn initial_guesses(p: &[Integer], prec: u32) -> Vec<Complex> {
    let d = p.len() - 1;
    let radius = Float::with_val(prec, log2_root_bound(p)).exp2();
    let two_pi = Float::with_val(prec, Constant::Pi) * 2u32;
    (0..d)
        .map(|k| {
            let angle = Float::with_val(prec, &two_pi * k as u32) / d as u32 + 0.4f64;
            let (s, c) = angle.sin_cos(Float::new(prec));
            Complex { re: Float::with_val(prec, &c * &radius), im: Float::with_val(prec, &s * &radius) }
        })
        .collect()
}

fn cmp_real_then_imag(a: &RootEnclosure, b: &RootEnclosure) -> Ordering {
    let tol = Float::with_val(64, &a.radius + &b.radius) * 4u32;
    let diff = Float::with_val(a.center.prec(), &a.center.re - &b.center.re);
    if diff.clone().abs() <= tol {
        a.center.im.partial_cmp(&b.center.im).unwrap_or(Ordering::Equal)
    } else {
        a.center.re.partial_cmp(&b.center.re).unwrap_or(Ordering::Equal)
    }
}

/// All complex roots of a monic squarefree integer polynomial, each with an
/// enclosure radius below `2^(-prec/2)`, sorted by real part then imaginary part.
pub fn certified_roots(p: &[Integer], prec: u32) -> Result<Vec<RootEnclosure>> {
    let d = p.len() - 1;
    assert!(d >= 1 && p[d] == 1, "certified_roots expects a monic polynomial");
    if d == 1 {
        let mut re = Float::new(prec);
        let dir = re.assign_round(Integer::from(-&p[0]), Round::Nearest);
        let radius = if dir == Ordering::Equal {
            Float::new(prec)
        } else {
            Float::with_val(prec, re.abs_ref()) >> (prec as i32 - 1)
        };
        return Ok(vec![RootEnclosure { center: Complex { re, im: Float::new(prec) }, radius }]);
    }

    let coeff_bits = p.iter().map(|c| c.significant_bits()).max().unwrap_or(1);
    let work = prec + 64 + coeff_bits;

    let p64 = float_coeffs(p, WARMUP_PREC.max(coeff_bits + 16));
    let mut z = initial_guesses(p, WARMUP_PREC.max(coeff_bits + 16));
    aberth(&p64, &mut z, 40, 2000);

    let pw = float_coeffs(p, work);
    for zi in z.iter_mut() {
        zi.set_prec(work);
    }
    if !aberth(&pw, &mut z, work as i32 - 16, 200) {
        return Err(Error::PrecisionUnreachable(prec));
    }
    // one more sweep after convergence tightens the last few bits
    aberth(&pw, &mut z, work as i32 - 16, 1);

    let roots = certify(p, &pw, &z, prec)?;
    let mut roots = roots;
    // insertion sort: the comparator uses a tolerance, so avoid relying on a total order
    for i in 1..roots.len() {
        let mut j = i;
        while j > 0 && cmp_real_then_imag(&roots[j - 1], &roots[j]) == Ordering::Greater {
            roots.swap(j - 1, j);
            j -= 1;
        }
    }
    Ok(roots)
}

fn certify(p: &[Integer], pw: &[Float], z: &[Complex], prec: u32) -> Result<Vec<RootEnclosure>> {
    let d = z.len();
    let work = z[0].prec();
    let eps = Float::with_val(64, 1) >> (work as i32 - 4);
    let limit = Float::with_val(64, 1) >> (prec as i32 / 2);
    let mut out = Vec::with_capacity(d);
    for i in 0..d {
        let (v, _) = eval_with_derivative(pw, &z[i]);
        // rounding in Horner is at most 2d·eps·Σ|a_k||z|^k
        let az = z[i].abs_upper(64);
        let mut magnitude_sum = Float::new(64);
        for c in p.iter().rev() {
            magnitude_sum *= &az;
            magnitude_sum += Float::with_val_round(64, Integer::from(c.abs_ref()), Round::Up).0;
        }
        let horner_err = magnitude_sum * &eps * (2 * d as u32 + 2);
        let residual = v.abs_upper(64) + horner_err;

        let mut denom = Float::with_val(64, 1);
        for j in 0..d {
            if j != i {
                let mut dist = Float::new(64);
                dist.assign_round(z[i].sub(&z[j]).abs(), Round::Down);
                denom *= dist;
            }
        }
        if denom.is_zero() {
            return Err(Error::PrecisionUnreachable(prec));
        }
        let mut radius = Float::with_val(64, residual * d as u32) / &denom;
        // slack for the rounding of the disk computation itself, plus rounding the centre to `prec`
        radius *= 1.0001f64;
        let mut center = z[i].clone();
        center.set_prec(prec);
        radius += (az >> (prec as i32 - 2)) * 2u32;
        if !(radius < limit) {
            return Err(Error::PrecisionUnreachable(prec));
        }
        out.push(RootEnclosure { center, radius });
    }
    for i in 0..d {
        for j in (i + 1)..d {
            let sep = Float::with_val(64, out[i].center.sub(&out[j].center).abs());
            if sep <= Float::with_val(64, &out[i].radius + &out[j].radius) {
                return Err(Error::PrecisionUnreachable(prec));
            }
        }
    }
    Ok(out)
}
