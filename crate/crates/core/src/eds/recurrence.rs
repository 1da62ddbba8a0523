//! Top-down evaluation of a sequence from `u_0..u_4` through the single floor-index relation
//!
//! `u_n u_{n / floor((n+1)/2)} = u_{(n+4)/2} u_{n/2} u_{(n-1)/2}^2 - u_{(n+1)/2} u_{(n-3)/2} u_{(n+2)/2}^2`
//!
//! (all indices floored). The divisor is `u_1` for odd `n` and `u_2` for even `n`.

use std::collections::HashMap;

use crate::algebra::FieldElement;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Recurrence {
    memo: HashMap<u64, FieldElement>,
    u2_inv: FieldElement,
}

impl Recurrence {
    /// Seeds `u_0..u_4`; requires `u_0 = 0`, `u_1 = 1` and `u_2 != 0`.
    pub fn new(seeds: [FieldElement; 5]) -> Result<Self> {
        if !seeds[0].is_zero() || !seeds[1].is_one() || seeds[2].is_zero() {
            return Err(Error::BadSeed);
        }
        let u2_inv = seeds[2].inverse()?;
        let memo = seeds.into_iter().enumerate().map(|(i, v)| (i as u64, v)).collect();
        Ok(Recurrence { memo, u2_inv })
    }

    pub fn u2_inverse(&self) -> &FieldElement {
        &self.u2_inv
    }

    /// `u_n`, computing and caching the O(log n) indices it depends on.
    pub fn term(&mut self, n: u64) -> FieldElement {
        if let Some(v) = self.memo.get(&n) {
            return v.clone();
        }
        // explicit stack keeps deep chains off the call stack
        let mut stack = vec![n];
        while let Some(&m) = stack.last() {
            if self.memo.contains_key(&m) {
                stack.pop();
                continue;
            }
            let deps = dependencies(m);
            let missing: Vec<u64> = deps.iter().copied().filter(|j| !self.memo.contains_key(j)).collect();
            if missing.is_empty() {
                let v = self.evaluate(m);
                self.memo.insert(m, v);
                stack.pop();
            } else {
                stack.extend(missing);
            }
        }
        self.memo[&n].clone()
    }

    fn evaluate(&self, n: u64) -> FieldElement {
        let g = |j: u64| &self.memo[&j];
        let a = &(g((n + 4) / 2) * g(n / 2)) * &g((n - 1) / 2).square();
        let b = &(g((n + 1) / 2) * g((n - 3) / 2)) * &g((n + 2) / 2).square();
        let diff = &a - &b;
        if n % 2 == 1 {
            diff
        } else {
            &diff * &self.u2_inv
        }
    }

    /// Smallest index `n >= 1` evaluated so far with `u_n = 0`.
    pub fn first_zero(&self) -> Option<u64> {
        self.memo.iter().filter(|(k, v)| **k >= 1 && v.is_zero()).map(|(k, _)| *k).min()
    }

    /// Every index evaluated so far, in ascending order.
    pub fn computed(&self) -> Vec<(u64, &FieldElement)> {
        let mut v: Vec<_> = self.memo.iter().map(|(k, v)| (*k, v)).collect();
        v.sort_by_key(|e| e.0);
        v
    }
}

fn dependencies(n: u64) -> [u64; 6] {
    [(n + 4) / 2, n / 2, (n - 1) / 2, (n + 1) / 2, (n - 3) / 2, (n + 2) / 2]
}
