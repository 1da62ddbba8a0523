//! Searching for sequences of small height.
//!
//! Seeds `0, 1, u2, u3, u4` with coefficient vectors in a box are extended and their norm
//! growth measured exactly as for division values of a point; no curve is reconstructed.

use std::sync::Arc;

use rayon::prelude::*;
use rug::ops::Pow;
use rug::Integer;

use crate::algebra::{FieldElement, NumberField};
use crate::eds::AbstractEds;
use crate::error::{Error, Result};
use crate::height::{gcd_trim, ln_integer, HeightEstimate, Method, ERROR_ORDER};

/// Growth below this ratio `log E_n / log E_{n/2}` (quadratic growth gives about 4) marks a seed as degenerate.
pub const DEGENERACY_RATIO: f64 = 3.0;

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub field: Arc<NumberField>,
    pub coeff_bound: i64,
    pub extend_to: u64,
    pub prune_threshold: f64,
    pub max_candidates: usize,
    pub prepass_n: u64,
}

impl SearchConfig {
    pub fn new(field: Arc<NumberField>, coeff_bound: i64, extend_to: u64) -> Self {
        SearchConfig { field, coeff_bound, extend_to, prune_threshold: 0.05, max_candidates: 20, prepass_n: 32 }
    }

    fn validate(&self) -> Result<()> {
        if self.coeff_bound < 1 {
            return Err(Error::Validation("coefficient bound must be at least 1".into()));
        }
        if self.extend_to < 8 {
            return Err(Error::IndexTooSmall { min: 8, got: self.extend_to });
        }
        if self.prepass_n < 4 {
            return Err(Error::IndexTooSmall { min: 4, got: self.prepass_n });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    pub initial_terms: [FieldElement; 3],
    pub estimate: HeightEstimate,
    /// `d * estimate.total`.
    pub normalized: f64,
    /// Whether the seed comes from a genuine curve and point is not checked.
    pub caveat: &'static str,
}

pub const CANDIDATE_CAVEAT: &str = "sequence only; not verified to come from a non-singular curve";

#[derive(Clone, Debug, PartialEq)]
pub struct SkippedSeed {
    pub initial_terms: [FieldElement; 3],
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct SearchOutcome {
    pub candidates: Vec<Candidate>,
    pub skipped: Vec<SkippedSeed>,
    pub pruned: usize,
    pub evaluated: usize,
}

/// Brings `u_n` into `Z[t]/(f)` by the weight rescale with `lambda = |N(u_2)|^e`; returns the
/// rescaled absolute norm. `None` when no `e <= 64` suffices.
fn rescaled_norm(u: &FieldElement, w: u64, base: &Integer, e: u32) -> Option<Integer> {
    let d = u.degree() as u32;
    let lambda = base.clone().pow(e);
    if u.denominator() != &1 {
        let wi = Integer::from(w);
        let m = lambda.clone().pow_mod(&wi, u.denominator()).ok()?;
        if m != 0 {
            return None;
        }
    }
    // |N(lambda^w u)| = lambda^(w d) |N(num)| / den^d
    let num = u.numerator_norm_abs();
    let big = lambda.pow(u32::try_from(w).ok()?.checked_mul(d)?);
    let den = u.denominator().clone().pow(d);
    let prod = num * big;
    if prod.is_divisible(&den) {
        Some(prod.div_exact(&den))
    } else {
        None
    }
}

/// Height-growth estimate `(1/(d n^2)) log(E_n / gcd(E_n, E_{n+1}))` of a sequence.
pub fn growth_estimate(s: &AbstractEds, n: u64) -> Result<HeightEstimate> {
    if n < 2 {
        return Err(Error::IndexTooSmall { min: 2, got: n });
    }
    let d = s.field().degree();
    let mut rec = s.recurrence()?;
    let un = rec.term(n);
    let un1 = rec.term(n + 1);
    let uh = rec.term(n / 2);
    if let Some(j) = rec.first_zero() {
        return Err(Error::ZeroTerm(j));
    }
    let mut warnings = Vec::new();
    let integral = un.is_integral() && un1.is_integral() && uh.is_integral();
    let (e_n, e_n1, e_h) = if integral {
        (un.numerator_norm_abs(), un1.numerator_norm_abs(), uh.numerator_norm_abs())
    } else {
        let base = s.terms()[2].norm().numer().clone().abs();
        if base <= 1 {
            return Err(Error::NonIntegralTerms);
        }
        let w = |j: u64| j * j - 1;
        let found = (1..=64u32).find_map(|e| {
            Some((e, rescaled_norm(&un, w(n), &base, e)?, rescaled_norm(&un1, w(n + 1), &base, e)?, rescaled_norm(&uh, w(n / 2), &base, e)?))
        });
        let Some((e, a, b, c)) = found else {
            return Err(Error::NonIntegralTerms);
        };
        warnings.push(format!("terms rescaled by lambda = {base}^{e} to clear denominators"));
        (a, b, c)
    };
    let scale = (d as f64) * (n as f64).powi(2);
    let arch = ln_integer(&e_n).to_f64() / scale;
    let total = ln_integer(&gcd_trim(&e_n, &e_n1)?).to_f64() / scale;
    let half = ln_integer(&e_h).to_f64();
    let full = ln_integer(&e_n).to_f64();
    if !(full >= DEGENERACY_RATIO * half) || full == 0.0 {
        warnings.push(format!("suspect degenerate: log E_n / log E_(n/2) = {:.3}", full / half));
    }
    Ok(HeightEstimate {
        total,
        arch,
        nonarch: total - arch,
        per_prime: None,
        n_used: n,
        d,
        method: Method::GcdConsecutive,
        error_order: ERROR_ORDER,
        torsion: false,
        warnings,
        extrapolated: None,
        spread: None,
    })
}

fn is_degenerate(h: &HeightEstimate) -> bool {
    h.warnings.iter().any(|w| w.starts_with("suspect degenerate"))
}

/// `true` (reject) iff some `u_n` vanishes for `1 < n <= horizon`.
pub fn torsion_filter(s: &AbstractEds, horizon: u64) -> bool {
    let mut t = s.clone();
    match t.extend(horizon) {
        Ok(()) => false,
        Err(Error::ZeroTerm(j)) => j > 1 && j <= horizon,
        Err(_) => true,
    }
}

/// Every integer coefficient vector in `[-b, b]^d`, lexicographically.
fn box_elements(k: &Arc<NumberField>, b: i64) -> Vec<FieldElement> {
    let d = k.degree();
    let side = (2 * b + 1) as usize;
    let count = side.pow(d as u32);
    (0..count)
        .map(|mut idx| {
            let mut c = vec![0i64; d];
            for slot in c.iter_mut().rev() {
                *slot = (idx % side) as i64 - b;
                idx /= side;
            }
            k.element_i64(&c).expect("length matches degree")
        })
        .collect()
}

enum Verdict {
    Keep(Candidate),
    Skip(String),
    Pruned,
}

fn evaluate(cfg: &SearchConfig, terms: [FieldElement; 3]) -> Verdict {
    let [u2, u3, u4] = terms.clone();
    let s = match AbstractEds::from_terms(u2, u3, u4) {
        Ok(s) => s,
        Err(e) => return Verdict::Skip(e.to_string()),
    };
    if torsion_filter(&s, cfg.prepass_n) {
        return Verdict::Skip("vanishing term".into());
    }
    match growth_estimate(&s, cfg.prepass_n) {
        Err(e) => return Verdict::Skip(e.to_string()),
        Ok(h) if is_degenerate(&h) => return Verdict::Skip("degenerate growth".into()),
        Ok(h) if h.total > cfg.prune_threshold => return Verdict::Pruned,
        Ok(_) => {}
    }
    match growth_estimate(&s, cfg.extend_to) {
        Err(e) => Verdict::Skip(e.to_string()),
        Ok(h) if is_degenerate(&h) => Verdict::Skip("degenerate growth".into()),
        Ok(h) if h.total <= 0.0 => Verdict::Skip("no growth".into()),
        Ok(h) => {
            let normalized = h.d as f64 * h.total;
            Verdict::Keep(Candidate { initial_terms: terms, estimate: h, normalized, caveat: CANDIDATE_CAVEAT })
        }
    }
}

/// Enumerates the seed box, prunes at `prepass_n`, and ranks survivors by `d * h` ascending.
pub fn search(cfg: &SearchConfig) -> Result<SearchOutcome> {
    cfg.validate()?;
    let elems = box_elements(&cfg.field, cfg.coeff_bound);
    let mut seeds = Vec::new();
    for u2 in elems.iter().filter(|u| !u.is_zero()) {
        for u3 in &elems {
            for u4 in &elems {
                seeds.push([u2.clone(), u3.clone(), u4.clone()]);
            }
        }
    }
    let verdicts: Vec<Verdict> = seeds.par_iter().map(|t| evaluate(cfg, t.clone())).collect();
    let mut out = SearchOutcome { evaluated: seeds.len(), ..Default::default() };
    let mut ranked: Vec<(usize, Candidate)> = Vec::new();
    for (i, v) in verdicts.into_iter().enumerate() {
        match v {
            Verdict::Keep(c) => ranked.push((i, c)),
            Verdict::Skip(reason) => out.skipped.push(SkippedSeed { initial_terms: seeds[i].clone(), reason }),
            Verdict::Pruned => out.pruned += 1,
        }
    }
    // ties fall back to enumeration order, which is lexicographic in the seed coefficients
    ranked.sort_by(|a, b| a.1.normalized.total_cmp(&b.1.normalized).then(a.0.cmp(&b.0)));
    out.candidates = ranked.into_iter().take(cfg.max_candidates).map(|(_, c)| c).collect();
    Ok(out)
}
