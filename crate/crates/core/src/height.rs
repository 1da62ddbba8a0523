//! Canonical-height estimates from norms of division values.
//!
//! For an integral point `Q` of infinite order on an integral model over a field of degree `d`,
//! `E_n = |N(psi_n(Q))|` grows like `exp(d n^2 h(Q))` once the part of `E_n` supported on bad
//! primes is removed. The removal is done either by `gcd(E_n, E_{n+1})` or by the primes of
//! `D = |N(Delta)|`, both without factoring. Errors behave like `O(1/n^2)` in practice.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use rug::{Float, Integer};

use crate::algebra::{naive_height_parts, FieldElement};
use crate::curve::{Curve, Point};
use crate::eds::{float_track_log, psi_initial_block, psi_seeds, DivisionValues};
use crate::error::{Error, Result};

pub const ERROR_ORDER: &str = "O(1/n^2) empirical";

/// Estimates from the two trimming methods that differ by more than this raise a warning.
pub const METHOD_AGREEMENT: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    GcdConsecutive,
    DPower,
    TateOracle,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::GcdConsecutive => "gcd-consecutive",
            Method::DPower => "d-power",
            Method::TateOracle => "tate-oracle",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gcd" | "gcd-consecutive" => Ok(Method::GcdConsecutive),
            "dpower" | "d-power" => Ok(Method::DPower),
            "tate" | "tate-oracle" => Ok(Method::TateOracle),
            _ => Err(Error::Validation(format!("unknown method {s:?}"))),
        }
    }
}

/// `E_n = |N(psi_n(Q))|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormSequenceEntry {
    pub n: u64,
    pub e: Integer,
}

/// `D = |N(Delta)|` and optionally some of its prime factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BadPrimeData {
    pub d: Integer,
    pub known_primes: Vec<Integer>,
}

impl BadPrimeData {
    pub fn new(c: &Curve, known_primes: Vec<Integer>) -> Result<Self> {
        let d = c.discriminant_norm();
        for p in &known_primes {
            if *p < 2 || !d.is_divisible(p) {
                return Err(Error::PrimeDoesNotDivideD(p.to_string()));
            }
        }
        Ok(BadPrimeData { d, known_primes })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HeightEstimate {
    pub total: f64,
    pub arch: f64,
    pub nonarch: f64,
    pub per_prime: Option<BTreeMap<Integer, f64>>,
    pub n_used: u64,
    pub d: usize,
    pub method: Method,
    pub error_order: &'static str,
    pub torsion: bool,
    pub warnings: Vec<String>,
    /// Richardson combination of two estimates, when two indices were run.
    pub extrapolated: Option<f64>,
    /// `|h_{n1} - h_{n2}|`, when two indices were run.
    pub spread: Option<f64>,
}

impl HeightEstimate {
    fn new(total: f64, arch: f64, n_used: u64, d: usize, method: Method) -> Self {
        HeightEstimate {
            total,
            arch,
            nonarch: total - arch,
            per_prime: None,
            n_used,
            d,
            method,
            error_order: ERROR_ORDER,
            torsion: false,
            warnings: Vec::new(),
            extrapolated: None,
            spread: None,
        }
    }

    /// The estimate for a torsion point: exactly zero.
    pub fn torsion(n_used: u64, d: usize, method: Method, why: String) -> Self {
        let mut h = Self::new(0.0, 0.0, n_used, d, method);
        h.torsion = true;
        h.warnings.push(why);
        h
    }

    /// `d * total`, the normalization used for small-height comparisons.
    pub fn normalized(&self) -> f64 {
        self.d as f64 * self.total
    }
}

/// Natural log of a positive integer of any size.
pub fn ln_integer(x: &Integer) -> Float {
    const KEEP: u32 = 256;
    let bits = x.significant_bits();
    if bits <= KEEP {
        return Float::with_val(128, x).ln();
    }
    let shift = bits - KEEP;
    let top = Integer::from(x >> shift);
    let mut l = Float::with_val(128, &top).ln();
    l += Float::with_val(128, rug::float::Constant::Log2) * shift;
    l
}

fn scaled_ln(x: &Integer, d: usize, n: u64) -> f64 {
    let denom = Float::with_val(128, d as u64) * Integer::from(n) * Integer::from(n);
    (ln_integer(x) / denom).to_f64()
}

fn require_integral(c: &Curve, q: &Point) -> Result<()> {
    if q.is_infinity() {
        return Ok(());
    }
    if !c.is_on_curve(q) {
        return Err(Error::PointNotOnCurve);
    }
    if !q.is_integral() {
        return Err(Error::PointNotIntegral);
    }
    Ok(())
}

/// `psi_n(Q)` and `psi_{n+1}(Q)`, or the index of a vanishing value met on the way.
///
/// Powers of two `n >= 8` go through the doubling block, which carries `psi_{n+1}` as well.
fn psi_pair(c: &Curve, q: &Point, n: u64) -> Result<std::result::Result<(FieldElement, FieldElement), u64>> {
    if n >= 8 && n.is_power_of_two() {
        let (vals, mut b) = psi_initial_block(c, q)?;
        if let Some(j) = (1..vals.len()).find(|&j| vals[j].is_zero()) {
            return Ok(Err(j as u64));
        }
        while b.center < n {
            b = b.step()?;
            if let Some(i) = (0..7).find(|&i| b.values[i].is_zero()) {
                return Ok(Err(b.index(i)));
            }
        }
        return Ok(Ok((b.values[3].clone(), b.values[4].clone())));
    }
    let mut dv = DivisionValues::new(c, q)?;
    let a = dv.get(n);
    let b = dv.get(n + 1);
    match dv.first_zero() {
        Some(j) => Ok(Err(j)),
        None => Ok(Ok((a, b))),
    }
}

fn abs_norm(v: &FieldElement) -> Integer {
    v.numerator_norm_abs()
}

/// Exact `E_n`. With `fast`, `n` must be a power of two and the doubling block is used.
pub fn compute_e(c: &Curve, q: &Point, n: u64, fast: bool) -> Result<NormSequenceEntry> {
    require_integral(c, q)?;
    if n == 0 {
        return Err(Error::IndexTooSmall { min: 1, got: 0 });
    }
    if fast && !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    if q.is_infinity() {
        return Err(Error::PointAtInfinity);
    }
    let v = if n <= 4 {
        psi_seeds(c, q)?[n as usize].clone()
    } else if fast {
        crate::eds::psi_pow2(c, q, n.trailing_zeros())?
    } else {
        crate::eds::psi_naive(c, q, n)?
    };
    if v.is_zero() {
        return Err(Error::TorsionPoint(n));
    }
    Ok(NormSequenceEntry { n, e: abs_norm(&v) })
}

/// `E_n / gcd(E_n, E_{n+1})`.
pub fn gcd_trim(e_n: &Integer, e_n1: &Integer) -> Result<Integer> {
    if *e_n <= 0 || *e_n1 <= 0 {
        return Err(Error::ZeroInput);
    }
    let g = Integer::from(e_n.gcd_ref(e_n1));
    Ok(Integer::from(e_n.div_exact_ref(&g)))
}

/// Splits `e` as `trimmed * removed` where `removed` collects every prime of `e` that divides `d`.
pub fn dpart_extract(e: &Integer, d: &Integer) -> Result<(Integer, Integer)> {
    if *e <= 0 || *d == 0 {
        return Err(Error::ZeroInput);
    }
    // every prime shared by e and d divides gcd(e, d), so only those need chasing
    let mut trimmed = e.clone();
    let mut g = Integer::from(trimmed.gcd_ref(d));
    while g != 1 {
        trimmed.div_exact_mut(&g);
        g.gcd_mut(&trimmed);
    }
    let removed = Integer::from(e.div_exact_ref(&trimmed));
    Ok((trimmed, removed))
}

/// Estimate of the canonical height at index `n`.
///
/// Both trimming methods are evaluated; the one not selected only feeds a disagreement warning.
pub fn canonical_height(c: &Curve, q: &Point, n: u64, method: Method) -> Result<HeightEstimate> {
    require_integral(c, q)?;
    let d = c.degree();
    if method == Method::TateOracle {
        return Err(Error::Validation("the Tate limit is computed by tate_height".into()));
    }
    if n < 1 {
        return Err(Error::IndexTooSmall { min: 1, got: n });
    }
    let (x, y) = match q.coords() {
        Ok(xy) => xy,
        Err(_) => return Ok(HeightEstimate::torsion(n, d, method, "point at infinity".into())),
    };
    if c.psi2_at(x, y).is_zero() {
        return Ok(HeightEstimate::torsion(n, d, method, "psi_2(Q) = 0: 2-torsion point".into()));
    }
    let (psi_n, psi_n1) = match psi_pair(c, q, n)? {
        Ok(p) => p,
        Err(j) => return Ok(HeightEstimate::torsion(n, d, method, format!("psi_{j}(Q) = 0: torsion point"))),
    };
    let (e_n, (e_n1, bad)) = rayon::join(|| abs_norm(&psi_n), || rayon::join(|| abs_norm(&psi_n1), || c.discriminant_norm()));

    let arch = scaled_ln(&e_n, d, n);
    let by_gcd = scaled_ln(&gcd_trim(&e_n, &e_n1)?, d, n);
    let by_d = scaled_ln(&dpart_extract(&e_n, &bad)?.0, d, n);
    let total = if method == Method::GcdConsecutive { by_gcd } else { by_d };
    let mut h = HeightEstimate::new(total, arch, n, d, method);
    if (by_gcd - by_d).abs() > METHOD_AGREEMENT {
        h.warnings.push(format!(
            "gcd-consecutive ({by_gcd:.12}) and d-power ({by_d:.12}) estimates differ by {:.3e}",
            (by_gcd - by_d).abs()
        ));
    }
    Ok(h)
}

/// Runs two indices and attaches the extrapolated value and the spread to the second estimate.
pub fn canonical_height_pair(c: &Curve, q: &Point, n1: u64, n2: u64, method: Method) -> Result<(HeightEstimate, HeightEstimate)> {
    if n1 == n2 {
        return Err(Error::EqualIndices);
    }
    let (a, b) = rayon::join(|| canonical_height(c, q, n1, method), || canonical_height(c, q, n2, method));
    let (a, mut b) = (a?, b?);
    if !a.torsion && !b.torsion {
        b.extrapolated = Some(extrapolate(a.total, n1, b.total, n2)?);
        b.spread = Some((a.total - b.total).abs());
    }
    Ok((a, b))
}

/// `(1/(d 4^N)) sum_v log|psi_{2^N}(Q)|_v` using per-embedding floating-point doubling only.
pub fn archimedean_height(c: &Curve, q: &Point, n_exp: u32, precision_bits: u32) -> Result<f64> {
    require_integral(c, q)?;
    let d = c.degree();
    // torsion of order 1 or 2: the block cannot be started, and the value is zero
    match q.coords() {
        Err(_) => return Ok(0.0),
        Ok((x, y)) if c.psi2_at(x, y).is_zero() => return Ok(0.0),
        _ => {}
    }
    let logs: Vec<Result<Float>> = (0..d)
        .into_par_iter()
        .map(|j| float_track_log(c, q, j, n_exp, precision_bits))
        .collect();
    let mut sum = Float::new(precision_bits + 64);
    for l in logs {
        sum += l?;
    }
    let n = Integer::from(1) << n_exp;
    let denom = Float::with_val(precision_bits + 64, d as u64) * Integer::from(&n * &n);
    Ok((sum / denom).to_f64())
}

/// [`archimedean_height`] at the smallest power of two `>= n`; returns the index used.
pub fn archimedean_height_at(c: &Curve, q: &Point, n: u64, precision_bits: u32) -> Result<(f64, u64)> {
    let used = n.max(4).next_power_of_two();
    Ok((archimedean_height(c, q, used.trailing_zeros(), precision_bits)?, used))
}

/// `-(1/(d n^2)) v_p(E_n) log p` for each supplied prime `p | D`.
pub fn local_decompose(c: &Curve, q: &Point, n: u64, primes: &[Integer]) -> Result<BTreeMap<Integer, f64>> {
    let bad = BadPrimeData::new(c, primes.to_vec())?;
    let e = compute_e(c, q, n, false)?.e;
    let d = c.degree();
    let out = bad
        .known_primes
        .par_iter()
        .map(|p| {
            let v = e.clone().remove_factor_mut(p);
            let lp = ln_integer(p);
            let denom = Float::with_val(128, d as u64) * Integer::from(n) * Integer::from(n);
            let contrib = -(lp * v / denom).to_f64();
            (p.clone(), if v == 0 { 0.0 } else { contrib })
        })
        .collect::<Vec<_>>();
    Ok(out.into_iter().collect())
}

/// `(1/2) 4^-k h(x(2^k Q))`; the archimedean and non-archimedean parts are those of the naive height.
pub fn tate_height(c: &Curve, q: &Point, iterations: u32, precision_bits: u32) -> Result<HeightEstimate> {
    if !c.is_on_curve(q) {
        return Err(Error::PointNotOnCurve);
    }
    if iterations < 1 {
        return Err(Error::IndexTooSmall { min: 1, got: 0 });
    }
    let d = c.degree();
    let n = 1u64 << iterations.min(63);
    let mut p = q.clone();
    for i in 0..iterations {
        p = c.double_unchecked(&p);
        if p.is_infinity() {
            return Ok(HeightEstimate::torsion(n, d, Method::TateOracle, format!("[2^{}]Q is the point at infinity", i + 1)));
        }
    }
    let (x, _) = p.coords()?;
    let (arch, nonarch) = naive_height_parts(x, precision_bits)?;
    let factor = 0.5 * 0.25f64.powi(iterations as i32);
    let mut h = HeightEstimate::new(factor * (arch + nonarch), factor * arch, n, d, Method::TateOracle);
    h.nonarch = factor * nonarch;
    Ok(h)
}

/// `(n2^2 h2 - n1^2 h1) / (n2^2 - n1^2)`, which removes an `O(1/n^2)` error term.
pub fn extrapolate(h_n1: f64, n1: u64, h_n2: f64, n2: u64) -> Result<f64> {
    if n1 == n2 {
        return Err(Error::EqualIndices);
    }
    let (a, b) = ((n1 as f64).powi(2), (n2 as f64).powi(2));
    Ok((b * h_n2 - a * h_n1) / (b - a))
}
