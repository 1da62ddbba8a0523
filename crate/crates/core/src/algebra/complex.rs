//! A small multiprecision complex type on top of MPFR floats.

use std::fmt;

use rug::float::Round;
use rug::ops::AssignRound;
use rug::{Float, Integer, Rational};

#[derive(Clone, PartialEq)]
pub struct Complex {
    pub re: Float,
    pub im: Float,
}

impl Complex {
    pub fn zero(prec: u32) -> Self {
        Complex { re: Float::new(prec), im: Float::new(prec) }
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        Complex { re: Float::with_val(prec, re), im: Float::with_val(prec, im) }
    }

    pub fn from_integer(prec: u32, v: &Integer) -> Self {
        Complex { re: Float::with_val(prec, v), im: Float::new(prec) }
    }

    pub fn from_rational(prec: u32, v: &Rational) -> Self {
        Complex { re: Float::with_val(prec, v), im: Float::new(prec) }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn set_prec(&mut self, prec: u32) {
        self.re.set_prec(prec);
        self.im.set_prec(prec);
    }

    pub fn with_prec(mut self, prec: u32) -> Self {
        self.set_prec(prec);
        self
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &Complex) -> Complex {
        let p = self.prec();
        Complex { re: Float::with_val(p, &self.re + &o.re), im: Float::with_val(p, &self.im + &o.im) }
    }

    pub fn sub(&self, o: &Complex) -> Complex {
        let p = self.prec();
        Complex { re: Float::with_val(p, &self.re - &o.re), im: Float::with_val(p, &self.im - &o.im) }
    }

    pub fn neg(&self) -> Complex {
        Complex { re: Float::with_val(self.prec(), -&self.re), im: Float::with_val(self.prec(), -&self.im) }
    }

    pub fn mul(&self, o: &Complex) -> Complex {
        let p = self.prec();
        let rr = Float::with_val(p + 8, &self.re * &o.re);
        let ii = Float::with_val(p + 8, &self.im * &o.im);
        let ri = Float::with_val(p + 8, &self.re * &o.im);
        let ir = Float::with_val(p + 8, &self.im * &o.re);
        Complex { re: Float::with_val(p, rr - ii), im: Float::with_val(p, ri + ir) }
    }

    pub fn square(&self) -> Complex {
        self.mul(self)
    }

    pub fn cube(&self) -> Complex {
        self.mul(self).mul(self)
    }

    pub fn scale(&self, f: &Float) -> Complex {
        let p = self.prec();
        Complex { re: Float::with_val(p, &self.re * f), im: Float::with_val(p, &self.im * f) }
    }

    pub fn scale_integer(&self, f: &Integer) -> Complex {
        let p = self.prec();
        Complex { re: Float::with_val(p, &self.re * f), im: Float::with_val(p, &self.im * f) }
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        let a = Float::with_val(p, self.re.square_ref());
        let b = Float::with_val(p, self.im.square_ref());
        a + b
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    /// log |z|, computed without squaring so huge exponents stay safe.
    pub fn ln_abs(&self) -> Float {
        self.abs().ln()
    }

    pub fn recip(&self) -> Complex {
        let p = self.prec();
        let n = self.norm_sqr();
        Complex {
            re: Float::with_val(p, &self.re / &n),
            im: Float::with_val(p, -Float::with_val(p, &self.im / &n)),
        }
    }

    pub fn div(&self, o: &Complex) -> Complex {
        // Scale the divisor first so |o|^2 cannot leave the exponent range.
        let e = o.re.get_exp().unwrap_or(0).max(o.im.get_exp().unwrap_or(0));
        let shift = -(e as i32);
        let mut os = o.clone();
        os.re <<= shift;
        os.im <<= shift;
        let mut q = self.mul(&os.recip());
        q.re <<= shift;
        q.im <<= shift;
        q
    }

    /// Rounds towards +inf; used where a certified upper bound is needed.
    pub fn abs_upper(&self, prec: u32) -> Float {
        let mut f = Float::new(prec);
        f.assign_round(self.re.hypot_ref(&self.im), Round::Up);
        f
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_f64_pair();
        write!(f, "({re:.17e} {im:+.17e}i)")
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_f64_pair();
        if im >= 0.0 {
            write!(f, "{re}+{im}i")
        } else {
            write!(f, "{re}{im}i")
        }
    }
}
