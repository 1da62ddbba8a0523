//! Doubling blocks at a single complex embedding, kept in range by the
//! homogeneity rescale `u_j -> lambda^(j^2-1) u_j` with a real `lambda`.

use rug::Float;

use crate::algebra::Complex;
use crate::curve::{Curve, Point};
use crate::error::{Error, Result};

use super::block::EdsBlock;
use super::psi::psi_initial_block;
use super::weight;

/// Entries `v_i` with `log|psi_{k-3+i}| = log|v_i| + (j^2-1) * log_scale`.
///
/// `rel_err` holds running relative error bounds for the entries and `psi2_err` for `psi2`.
#[derive(Clone, Debug)]
pub struct FloatBlock {
    pub center: u64,
    pub values: [Complex; 7],
    pub psi2: Complex,
    pub log_scale: Float,
    pub rel_err: [f64; 7],
    pub psi2_err: f64,
    pub precision_bits: u32,
    steps: u32,
}

const RANGE_BITS: i32 = 64;

impl FloatBlock {
    /// Images of an exact block under the embedding with the given index.
    pub fn from_exact(b: &EdsBlock, embedding: usize, precision_bits: u32) -> Result<Self> {
        let mut values: [Complex; 7] = std::array::from_fn(|_| Complex::zero(precision_bits));
        let mut rel_err = [0f64; 7];
        for i in 0..7 {
            let e = b.values[i].embed(embedding, precision_bits)?;
            rel_err[i] = relative(&e.radius, &e.value);
            values[i] = e.value;
        }
        let e2 = b.psi2.embed(embedding, precision_bits)?;
        let psi2_err = relative(&e2.radius, &e2.value);
        if !(psi2_err < 1.0) {
            return Err(Error::PrecisionLoss { step: 0 });
        }
        let mut fb = FloatBlock {
            center: b.center,
            values,
            psi2: e2.value,
            log_scale: Float::new(precision_bits + 64),
            rel_err,
            psi2_err,
            precision_bits,
            steps: 0,
        };
        if !b.scale.is_one() {
            // fold an exact scale s into the ledger: psi_j = s^-(j^2-1) v_j
            let s = b.scale.embed(embedding, precision_bits)?;
            fb.log_scale -= s.value.ln_abs();
        }
        Ok(fb)
    }

    pub fn index(&self, i: usize) -> u64 {
        self.center - 3 + i as u64
    }

    fn unit(&self) -> f64 {
        (-(self.precision_bits as f64) + 1.0).exp2()
    }

    /// Doubles the centre. Fails with `PrecisionLoss` if a difference falls below its error bound.
    pub fn step(&self) -> Result<FloatBlock> {
        let [t, u, v, w, x, y, z] = &self.values;
        let [et, eu, ev, ew, ex, ey, ez] = self.rel_err;
        let unit = self.unit();
        let step = self.steps + 1;
        let loss = || Error::PrecisionLoss { step };

        // a*b^3 - c^3*d with error bounds
        let odd = |a: &Complex, ea: f64, b: &Complex, eb: f64, c: &Complex, ec: f64, d: &Complex, ed: f64| {
            let l = a.mul(&b.cube());
            let r = c.cube().mul(d);
            let out = l.sub(&r);
            let e = difference_error(&l, ea + 3.0 * eb + 5.0 * unit, &r, 3.0 * ec + ed + 5.0 * unit, &out, unit);
            if e.is_finite() && e < 1.0 {
                Ok((out, e))
            } else {
                Err(loss())
            }
        };
        // (o / psi2) (a b^2 - c d^2)
        let even = |o: &Complex, eo: f64, a: &Complex, ea: f64, b: &Complex, eb: f64, c: &Complex, ec: f64, d: &Complex, ed: f64| {
            let l = a.mul(&b.square());
            let r = c.mul(&d.square());
            let inner = l.sub(&r);
            let ei = difference_error(&l, ea + 2.0 * eb + 4.0 * unit, &r, ec + 2.0 * ed + 4.0 * unit, &inner, unit);
            if !(ei.is_finite() && ei < 1.0) {
                return Err(loss());
            }
            let out = o.mul(&inner).div(&self.psi2);
            Ok((out, ei + eo + self.psi2_err + 4.0 * unit))
        };

        let (t1, et1) = odd(w, ew, u, eu, v, ev, t, et)?;
        let (u1, eu1) = even(v, ev, x, ex, u, eu, t, et, w, ew)?;
        let (v1, ev1) = odd(x, ex, v, ev, w, ew, u, eu)?;
        let (w1, ew1) = even(w, ew, y, ey, v, ev, u, eu, x, ex)?;
        let (x1, ex1) = odd(y, ey, w, ew, x, ex, v, ev)?;
        let (y1, ey1) = even(x, ex, z, ez, w, ew, v, ev, y, ey)?;
        let (z1, ez1) = odd(z, ez, x, ex, y, ey, w, ew)?;
        let errs = [et1, eu1, ev1, ew1, ex1, ey1, ez1];
        let limit = (-(self.precision_bits as f64) / 4.0).exp2();
        if errs.iter().any(|e| !(*e <= limit)) {
            return Err(loss());
        }
        let mut out = FloatBlock {
            center: 2 * self.center,
            values: [t1, u1, v1, w1, x1, y1, z1],
            psi2: self.psi2.clone(),
            log_scale: self.log_scale.clone(),
            rel_err: errs,
            psi2_err: self.psi2_err,
            precision_bits: self.precision_bits,
            steps: step,
        };
        out.renormalize()?;
        Ok(out)
    }

    /// Multiplies entry `j` by `exp(s (j^2-1))` and `psi2` by `exp(3 s)`, i.e. `lambda = e^s`.
    pub fn rescale(&self, s: f64) -> FloatBlock {
        let p = self.precision_bits;
        let mut out = self.clone();
        if s == 0.0 {
            return out;
        }
        let unit = self.unit();
        for i in 0..7 {
            // s has 53 bits and the weight at most 64, so the exponent is exact at this precision
            let arg = Float::with_val(p.max(128) + 64, s) * weight(self.index(i));
            let f = Float::with_val(p, arg.exp_ref());
            out.values[i] = out.values[i].scale(&f);
            out.rel_err[i] += 2.0 * unit;
        }
        let f = Float::with_val(p, (Float::with_val(p.max(128) + 64, s) * 3u32).exp_ref());
        out.psi2 = out.psi2.scale(&f);
        out.psi2_err += 2.0 * unit;
        out.log_scale -= s;
        out
    }

    /// Brings the largest entry back to magnitude one once it leaves `[2^-64, 2^64]`.
    pub fn renormalize(&mut self) -> Result<()> {
        let logs: Vec<f64> = self.values.iter().map(|v| if v.is_zero() { f64::NEG_INFINITY } else { v.ln_abs().to_f64() }).collect();
        let max = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if max == f64::NEG_INFINITY {
            return Err(Error::PrecisionLoss { step: self.steps });
        }
        let bound = RANGE_BITS as f64 * std::f64::consts::LN_2;
        if max.abs() <= bound {
            return Ok(());
        }
        let mut s = f64::INFINITY;
        for (i, l) in logs.iter().enumerate() {
            let w = weight(self.index(i));
            if w > 0 && l.is_finite() {
                s = s.min(-l / w as f64);
            }
        }
        *self = self.rescale(s);
        Ok(())
    }

    /// `log|psi_j|` for entry `i`, with the ledger applied.
    pub fn log_abs(&self, i: usize) -> Float {
        let p = self.log_scale.prec();
        let mut l = Float::with_val(p, self.values[i].ln_abs());
        l += Float::with_val(p, &self.log_scale * weight(self.index(i)));
        l
    }

    pub fn max_abs(&self) -> Float {
        self.values.iter().map(|v| v.abs()).fold(Float::new(self.precision_bits), |a, b| if b > a { b } else { a })
    }
}

fn relative(radius: &Float, value: &Complex) -> f64 {
    if value.is_zero() {
        return f64::INFINITY;
    }
    Float::with_val(64, radius / &value.abs()).to_f64()
}

/// Relative error bound of `out = l - r` given relative bounds on `l` and `r`.
fn difference_error(l: &Complex, el: f64, r: &Complex, er: f64, out: &Complex, unit: f64) -> f64 {
    if out.is_zero() {
        return f64::INFINITY;
    }
    let m = out.abs();
    let rl = Float::with_val(64, &l.abs() / &m).to_f64();
    let rr = Float::with_val(64, &r.abs() / &m).to_f64();
    rl * el + rr * er + unit * (1.0 + rl + rr)
}

/// `log|psi_{2^N}(Q)|` at one embedding, at high precision.
pub fn float_track_log(c: &Curve, q: &Point, embedding: usize, n_exp: u32, precision_bits: u32) -> Result<Float> {
    if precision_bits < 53 {
        return Err(Error::PrecisionTooLow(precision_bits));
    }
    if n_exp < 2 {
        return Err(Error::IndexTooSmall { min: 2, got: n_exp as u64 });
    }
    let (_, block) = psi_initial_block(c, q)?;
    if n_exp == 2 {
        let e = block.middle().embed(embedding, precision_bits)?;
        if e.value.is_zero() {
            return Err(Error::TorsionPoint(4));
        }
        return Ok(e.value.ln_abs());
    }
    let mut fb = FloatBlock::from_exact(&block, embedding, precision_bits)?;
    for _ in 2..n_exp {
        fb = fb.step()?;
    }
    Ok(fb.log_abs(3))
}

/// `log|psi_{2^N}(Q)|_v` as a double.
pub fn float_track(c: &Curve, q: &Point, embedding: usize, n_exp: u32, precision_bits: u32) -> Result<f64> {
    Ok(float_track_log(c, q, embedding, n_exp, precision_bits)?.to_f64())
}
