// SPDX-License-Identifier: Apache-2.0
//! Exact real quadratic irrationals `p + q√D`.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

/// The number `p + q√D` with rational `p`, `q` and a positive non-square `D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadIrr {
    p: BigRational,
    q: BigRational,
    d: i64,
}

impl QuadIrr {
    /// Build `p + q√D`; `D` must be positive and not a perfect square.
    pub fn new(p: BigRational, q: BigRational, d: i64) -> Result<Self> {
        if d <= 0 || crate::arith::is_square(d as i128) {
            return Err(Error::invalid(format!("{d} is not a positive non-square")));
        }
        Ok(QuadIrr { p, q, d })
    }

    /// `(p_num + q_num √D) / den` from integers.
    pub fn from_ints(p_num: impl Into<BigInt>, q_num: impl Into<BigInt>, den: impl Into<BigInt>, d: i64) -> Result<Self> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::invalid("zero denominator"));
        }
        QuadIrr::new(
            BigRational::new(p_num.into(), den.clone()),
            BigRational::new(q_num.into(), den),
            d,
        )
    }

    /// The rational number `p` viewed in the same field.
    pub fn rational(p: BigRational, d: i64) -> Result<Self> {
        QuadIrr::new(p, BigRational::zero(), d)
    }

    pub fn p(&self) -> &BigRational {
        &self.p
    }
    pub fn q(&self) -> &BigRational {
        &self.q
    }
    pub fn radicand(&self) -> i64 {
        self.d
    }

    /// Exact sign, decided by comparing `p²` with `q²D`.
    pub fn signum(&self) -> Ordering {
        let zero = BigRational::zero();
        let ps = self.p.cmp(&zero);
        let qs = self.q.cmp(&zero);
        use Ordering::*;
        match (ps, qs) {
            (Equal, Equal) => Equal,
            (Greater | Equal, Greater | Equal) => Greater,
            (Less | Equal, Less | Equal) => Less,
            (Greater, Less) => {
                let lhs = &self.p * &self.p;
                let rhs = &self.q * &self.q * BigRational::from_integer(self.d.into());
                lhs.cmp(&rhs)
            }
            (Less, Greater) => {
                let lhs = &self.q * &self.q * BigRational::from_integer(self.d.into());
                let rhs = &self.p * &self.p;
                lhs.cmp(&rhs)
            }
        }
    }

    /// Galois conjugate `p - q√D`.
    pub fn conjugate(&self) -> QuadIrr {
        QuadIrr { p: self.p.clone(), q: -self.q.clone(), d: self.d }
    }

    /// Field norm `p² - q²D`.
    pub fn norm(&self) -> BigRational {
        &self.p * &self.p - &self.q * &self.q * BigRational::from_integer(self.d.into())
    }

    /// Multiplicative inverse; fails on zero.
    pub fn inverse(&self) -> Result<QuadIrr> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::invalid("inverse of zero"));
        }
        Ok(QuadIrr { p: &self.p / &n, q: -(&self.q / &n), d: self.d })
    }

    /// Quotient `self / other`.
    pub fn div(&self, other: &QuadIrr) -> Result<QuadIrr> {
        Ok(self * &other.inverse()?)
    }

    /// Scale by an integer.
    pub fn scale(&self, k: &BigInt) -> QuadIrr {
        let k = BigRational::from_integer(k.clone());
        QuadIrr { p: &self.p * &k, q: &self.q * &k, d: self.d }
    }

    /// Integer power (`k >= 0`).
    pub fn pow(&self, k: u32) -> QuadIrr {
        let mut acc = QuadIrr { p: BigRational::one(), q: BigRational::zero(), d: self.d };
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Compare with another element of the same field.
    pub fn cmp_exact(&self, other: &QuadIrr) -> Ordering {
        (self - other).signum()
    }

    /// Floating approximation for reporting only.
    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.p.to_f64().unwrap_or(f64::NAN) + self.q.to_f64().unwrap_or(f64::NAN) * (self.d as f64).sqrt()
    }
}

impl<'a> Add for &'a QuadIrr {
    type Output = QuadIrr;
    fn add(self, o: &'a QuadIrr) -> QuadIrr {
        debug_assert_eq!(self.d, o.d);
        QuadIrr { p: &self.p + &o.p, q: &self.q + &o.q, d: self.d }
    }
}

impl<'a> Sub for &'a QuadIrr {
    type Output = QuadIrr;
    fn sub(self, o: &'a QuadIrr) -> QuadIrr {
        debug_assert_eq!(self.d, o.d);
        QuadIrr { p: &self.p - &o.p, q: &self.q - &o.q, d: self.d }
    }
}

impl<'a> Mul for &'a QuadIrr {
    type Output = QuadIrr;
    fn mul(self, o: &'a QuadIrr) -> QuadIrr {
        debug_assert_eq!(self.d, o.d);
        let dd = BigRational::from_integer(self.d.into());
        QuadIrr {
            p: &self.p * &o.p + &self.q * &o.q * dd,
            q: &self.p * &o.q + &self.q * &o.p,
            d: self.d,
        }
    }
}

impl Neg for QuadIrr {
    type Output = QuadIrr;
    fn neg(self) -> QuadIrr {
        QuadIrr { p: -self.p, q: -self.q, d: self.d }
    }
}

/// `true` when the value is strictly positive.
pub fn is_positive(x: &QuadIrr) -> bool {
    x.signum() == Ordering::Greater
}
