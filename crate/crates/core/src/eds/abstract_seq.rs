//! Elliptic divisibility sequences given by their first five terms.

use std::sync::Arc;

use crate::algebra::{FieldElement, NumberField};
use crate::error::{Error, Result};

use super::recurrence::Recurrence;

/// `u_0, u_1, ...` with `u_0 = 0`, `u_1 = 1`, `u_2 != 0`, extended by the floor-index relation.
#[derive(Clone, Debug)]
pub struct AbstractEds {
    field: Arc<NumberField>,
    terms: Vec<FieldElement>,
    u2_inv: FieldElement,
}

impl AbstractEds {
    /// Takes at least `u_0..u_4`; any further terms are ignored and recomputed.
    pub fn new(seed: &[FieldElement]) -> Result<Self> {
        if seed.len() < 5 {
            return Err(Error::BadSeed);
        }
        let field = seed[0].field().clone();
        if seed.iter().any(|u| !u.same_field(&seed[0])) {
            return Err(Error::FieldMismatch);
        }
        if !seed[0].is_zero() || !seed[1].is_one() || seed[2].is_zero() {
            return Err(Error::BadSeed);
        }
        let u2_inv = seed[2].inverse()?;
        Ok(AbstractEds { field, terms: seed[..5].to_vec(), u2_inv })
    }

    /// Seed `0, 1, u2, u3, u4`.
    pub fn from_terms(u2: FieldElement, u3: FieldElement, u4: FieldElement) -> Result<Self> {
        let k = u2.field().clone();
        Self::new(&[k.zero(), k.one(), u2, u3, u4])
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn terms(&self) -> &[FieldElement] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn seed(&self) -> [FieldElement; 5] {
        std::array::from_fn(|i| self.terms[i].clone())
    }

    /// Computes every term through `upto`. Stops with `ZeroTerm(n)` at the first vanishing `u_n`, `n >= 1`;
    /// the terms before it are kept.
    pub fn extend(&mut self, upto: u64) -> Result<()> {
        if let Some(n) = (1..self.terms.len().min(upto as usize + 1)).find(|&n| self.terms[n].is_zero()) {
            return Err(Error::ZeroTerm(n as u64));
        }
        while (self.terms.len() as u64) <= upto {
            let n = self.terms.len() as u64;
            let g = |j: u64| &self.terms[j as usize];
            let a = &(g((n + 4) / 2) * g(n / 2)) * &g((n - 1) / 2).square();
            let b = &(g((n + 1) / 2) * g((n - 3) / 2)) * &g((n + 2) / 2).square();
            let mut v = &a - &b;
            if n % 2 == 0 {
                v = &v * &self.u2_inv;
            }
            if v.is_zero() {
                return Err(Error::ZeroTerm(n));
            }
            self.terms.push(v);
        }
        Ok(())
    }

    /// `u_n` without computing the whole prefix (O(log n) indices), checking that none of the
    /// touched terms vanishes.
    pub fn term_sparse(&self, n: u64) -> Result<FieldElement> {
        if let Some(v) = self.terms.get(n as usize) {
            return Ok(v.clone());
        }
        let mut rec = self.recurrence()?;
        let v = rec.term(n);
        if let Some(j) = rec.first_zero() {
            return Err(Error::ZeroTerm(j));
        }
        Ok(v)
    }

    /// Sparse evaluator seeded with this sequence.
    pub fn recurrence(&self) -> Result<Recurrence> {
        Recurrence::new(self.seed())
    }
}

impl PartialEq for AbstractEds {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

/// Extends `s` through index `upto`.
pub fn eds_extend(mut s: AbstractEds, upto: u64) -> Result<AbstractEds> {
    s.extend(upto)?;
    Ok(s)
}
