//! Division-polynomial values `psi_n(Q)` at a point.

use crate::algebra::FieldElement;
use crate::curve::{Curve, Point};
use crate::error::{Error, Result};

use super::block::EdsBlock;
use super::recurrence::Recurrence;

/// `psi_0 .. psi_4` evaluated at an affine point.
pub fn psi_seeds(c: &Curve, q: &Point) -> Result<[FieldElement; 5]> {
    let (x, y) = q.coords()?;
    let k = c.field();
    let psi2 = c.psi2_at(x, y);
    let x2 = x.square();
    let x3 = &x2 * x;
    let x4 = x2.square();
    let psi3 = &(&(&(&x4.mul_i64(3) + &(&c.b2 * &x3)) + &(&c.b4 * &x2).mul_i64(3)) + &(&c.b6 * x).mul_i64(3)) + &c.b8;
    let x5 = &x4 * x;
    let x6 = &x3.square();
    let inner = &x6.mul_i64(2) + &(&c.b2 * &x5);
    let inner = &inner + &(&c.b4 * &x4).mul_i64(5);
    let inner = &inner + &(&c.b6 * &x3).mul_i64(10);
    let inner = &inner + &(&c.b8 * &x2).mul_i64(10);
    let inner = &inner + &(&(&(&c.b2 * &c.b8) - &(&c.b4 * &c.b6)) * x);
    let inner = &inner + &(&(&c.b4 * &c.b8) - &c.b6.square());
    let psi4 = &psi2 * &inner;
    Ok([k.zero(), k.one(), psi2, psi3, psi4])
}

/// `psi_0 .. psi_7` and the initial block centred at 4.
pub fn psi_initial_block(c: &Curve, q: &Point) -> Result<(Vec<FieldElement>, EdsBlock)> {
    let seeds = psi_seeds(c, q)?;
    if seeds[2].is_zero() {
        return Err(Error::TorsionPoint2);
    }
    let mut rec = Recurrence::new(seeds)?;
    let values: Vec<FieldElement> = (0..=7).map(|n| rec.term(n)).collect();
    let block = EdsBlock::new(4, values[1..=7].to_vec().try_into().expect("seven entries"), values[2].clone())?;
    Ok((values, block))
}

/// Memoized `psi_n(Q)` for arbitrary `n`.
#[derive(Clone, Debug)]
pub struct DivisionValues {
    rec: Recurrence,
}

impl DivisionValues {
    pub fn new(c: &Curve, q: &Point) -> Result<Self> {
        let seeds = psi_seeds(c, q)?;
        if seeds[2].is_zero() {
            return Err(Error::TorsionPoint2);
        }
        Ok(DivisionValues { rec: Recurrence::new(seeds)? })
    }

    pub fn get(&mut self, n: u64) -> FieldElement {
        self.rec.term(n)
    }

    /// Smallest index evaluated so far at which `psi` vanishes.
    pub fn first_zero(&self) -> Option<u64> {
        self.rec.first_zero()
    }
}

/// `psi_n(Q)`. Beyond `n = 4` this needs `psi_2(Q) != 0`.
pub fn psi_naive(c: &Curve, q: &Point, n: u64) -> Result<FieldElement> {
    let seeds = psi_seeds(c, q)?;
    if n <= 4 {
        return Ok(seeds[n as usize].clone());
    }
    if seeds[2].is_zero() {
        return Err(Error::TorsionPoint2);
    }
    Ok(Recurrence::new(seeds)?.term(n))
}
