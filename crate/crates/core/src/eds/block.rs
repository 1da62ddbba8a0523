//! Seven-term blocks and the index-doubling step.

use rug::Integer;

use crate::algebra::FieldElement;
use crate::curve::{Curve, Point};
use crate::error::{Error, Result};

use super::psi::psi_initial_block;
use super::weight;

/// `psi_{k-3}, ..., psi_{k+3}` at a point, possibly rescaled.
///
/// When `scale` is `s`, entry `j` holds `s^(j^2-1) psi_j` and `psi2` holds `s^3 psi_2`;
/// the doubling step commutes with this, so `scale` is carried along unchanged.
#[derive(Clone, Debug, PartialEq)]
pub struct EdsBlock {
    pub center: u64,
    pub values: [FieldElement; 7],
    pub psi2: FieldElement,
    pub scale: FieldElement,
    psi2_inv: FieldElement,
}

impl EdsBlock {
    pub fn new(center: u64, values: [FieldElement; 7], psi2: FieldElement) -> Result<Self> {
        if center < 4 {
            return Err(Error::IndexTooSmall { min: 4, got: center });
        }
        if psi2.is_zero() {
            return Err(Error::TorsionPoint2);
        }
        let psi2_inv = psi2.inverse()?;
        let scale = psi2.field().one();
        Ok(EdsBlock { center, values, psi2, scale, psi2_inv })
    }

    /// Index of entry `i`.
    pub fn index(&self, i: usize) -> u64 {
        self.center - 3 + i as u64
    }

    /// The middle entry, `psi_k` up to the recorded scale.
    pub fn middle(&self) -> &FieldElement {
        &self.values[3]
    }

    /// `psi_{index(i)}` with any scaling undone.
    pub fn unscaled(&self, i: usize) -> Result<FieldElement> {
        if self.scale.is_one() {
            return Ok(self.values[i].clone());
        }
        let inv = self.scale.inverse()?;
        Ok(&self.values[i] * &inv.pow(weight(self.index(i))))
    }

    fn integral(&self) -> bool {
        self.psi2.is_integral() && self.values.iter().all(|v| v.is_integral())
    }

    /// Doubles the centre: a block at `k` becomes the block at `2k`.
    pub fn step(&self) -> Result<EdsBlock> {
        let [t, u, v, w, x, y, z] = &self.values;
        let check = self.integral();
        let half = |outer: &FieldElement, inner: FieldElement| -> Result<FieldElement> {
            let r = &(outer * &inner) * &self.psi2_inv;
            if check && !r.is_integral() {
                return Err(Error::InexactDivision);
            }
            Ok(r)
        };
        let t1 = &(w * &u.cube()) - &(&v.cube() * t);
        let u1 = half(v, &(x * &u.square()) - &(t * &w.square()))?;
        let v1 = &(x * &v.cube()) - &(&w.cube() * u);
        let w1 = half(w, &(y * &v.square()) - &(u * &x.square()))?;
        let x1 = &(y * &w.cube()) - &(&x.cube() * v);
        let y1 = half(x, &(z * &w.square()) - &(v * &y.square()))?;
        let z1 = &(z * &x.cube()) - &(&y.cube() * w);
        Ok(EdsBlock {
            center: 2 * self.center,
            values: [t1, u1, v1, w1, x1, y1, z1],
            psi2: self.psi2.clone(),
            scale: self.scale.clone(),
            psi2_inv: self.psi2_inv.clone(),
        })
    }

    /// Multiplies entry `j` by `s^(j^2-1)` and `psi2` by `s^3`, recording `s` in the scale.
    pub fn rescale(&self, s: &FieldElement) -> Result<EdsBlock> {
        if s.is_zero() {
            return Err(Error::ZeroScalar);
        }
        if s.is_one() {
            return Ok(self.clone());
        }
        let mut values = self.values.clone();
        for (i, v) in values.iter_mut().enumerate() {
            *v = &*v * &s.pow(weight(self.index(i)));
        }
        let s3 = s.cube();
        let psi2 = &self.psi2 * &s3;
        let psi2_inv = &self.psi2_inv * &s3.inverse()?;
        Ok(EdsBlock { center: self.center, values, psi2, scale: &self.scale * s, psi2_inv })
    }

    /// Largest integer `g` with `g^(j^2-1)` dividing the content of every entry, found
    /// through a coprime base of the entry contents (no factoring).
    pub fn common_weighted_factor(&self) -> Integer {
        if !self.values.iter().all(|v| v.is_integral()) {
            return Integer::from(1);
        }
        let contents: Vec<Integer> = self.values.iter().map(|v| v.numerator_content()).collect();
        if contents.iter().any(|c| *c == 0) {
            return Integer::from(1);
        }
        let mut g = Integer::new();
        for c in &contents {
            g.gcd_mut(c);
        }
        if g == 1 {
            return g;
        }
        let mut out = Integer::from(1);
        let mut inputs = vec![g];
        inputs.extend(contents.iter().cloned());
        for b in crate::curve::coprime_base(inputs) {
            let mut e = u64::MAX;
            for (i, c) in contents.iter().enumerate() {
                let v = c.clone().remove_factor_mut(&b) as u64;
                e = e.min(v / weight(self.index(i)));
            }
            if e > 0 {
                out *= rug::ops::Pow::pow(b, e as u32);
            }
        }
        out
    }
}

/// `psi_{2^N}(Q)` via `N - 2` doubling steps.
pub fn psi_pow2(c: &Curve, q: &Point, n_exp: u32) -> Result<FieldElement> {
    Ok(final_block(c, q, n_exp, false)?.middle().clone())
}

/// As [`psi_pow2`] but divides out weight-consistent integer factors after every step.
/// Returns `(v, g)` with `psi_{2^N} = g^(4^N - 1) v`.
pub fn psi_pow2_trimmed(c: &Curve, q: &Point, n_exp: u32) -> Result<(FieldElement, Integer)> {
    let b = final_block(c, q, n_exp, true)?;
    // scale is 1/g for an integer g
    let g = b.scale.inverse()?.as_rational().expect("integer scale").numer().clone();
    Ok((b.middle().clone(), g))
}

/// The block centred at `2^N`.
pub fn final_block(c: &Curve, q: &Point, n_exp: u32, trim: bool) -> Result<EdsBlock> {
    if n_exp < 2 {
        return Err(Error::IndexTooSmall { min: 2, got: n_exp as u64 });
    }
    let (_, mut b) = psi_initial_block(c, q)?;
    for _ in 2..n_exp {
        b = b.step()?;
        if trim {
            let g = b.common_weighted_factor();
            if g > 1 {
                let inv = c.field().from_integer(g).inverse()?;
                b = b.rescale(&inv)?;
            }
        }
    }
    Ok(b)
}
