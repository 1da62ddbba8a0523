//! Absolute logarithmic (naive) heights of field elements.

use rug::{Float, Integer};

use super::field::FieldElement;
use crate::error::Result;

/// `h(a) = (1/d) (log lc + sum_j log+ |sigma_j(a)|)` where `lc` is the leading
/// coefficient of the primitive integral multiple of the characteristic polynomial.
///
/// The working precision grows with the size of `a` so that conjugates close
/// to the unit circle are resolved; the result is in nats.
pub fn naive_height(a: &FieldElement, precision_bits: u32) -> Result<f64> {
    let (arch, nonarch) = naive_height_parts(a, precision_bits)?;
    Ok(arch + nonarch)
}

/// The archimedean part `(1/d) sum_j log+ |sigma_j(a)|` and the rest `(1/d) log lc`.
pub fn naive_height_parts(a: &FieldElement, precision_bits: u32) -> Result<(f64, f64)> {
    if a.is_zero() {
        return Ok((0.0, 0.0));
    }
    let d = a.degree();
    let chi = a.charpoly();
    let mut lcm = Integer::from(1);
    for c in &chi {
        lcm.lcm_mut(c.denom());
    }
    let mut content = Integer::new();
    for c in &chi {
        let scaled = Integer::from(c.numer() * Integer::from(&lcm / c.denom()));
        content.gcd_mut(&scaled);
    }
    // chi is monic, so the primitive leading coefficient is lcm / content
    let lead = lcm / content;

    let size_bits = a.numerator().iter().map(|c| c.significant_bits()).max().unwrap_or(0)
        + a.denominator().significant_bits();
    // round up so that repeated calls share cached embeddings
    let work = (precision_bits + size_bits).div_ceil(256) * 256;
    let images = a.embed_all(work)?;
    let nonarch = Float::with_val(work, &lead).ln();
    let mut arch = Float::new(work);
    for img in images {
        let l = img.value.ln_abs();
        if l.is_sign_positive() {
            arch += l;
        }
    }
    Ok((arch.to_f64() / d as f64, nonarch.to_f64() / d as f64))
}
