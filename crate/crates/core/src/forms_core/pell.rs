// SPDX-License-Identifier: Apache-2.0
//! The equation `u² - D w² = 4` and its fundamental solution.

use super::quadirr::QuadIrr;
use crate::arith::{self, isqrt};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

/// Fundamental solution of `u² - D w² = 4` and the unit `ε = (u0 + w0√D)/2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PellData {
    pub d: i64,
    pub u0: BigInt,
    pub w0: BigInt,
    pub epsilon: QuadIrr,
}

impl PellData {
    /// `ln ε` in floating point.
    pub fn log_epsilon(&self) -> f64 {
        big_ln(&self.u0, &self.w0, self.d)
    }

    /// `(U, W)` with `ε^k = (U + W√D)/2`, for `k >= 0`.
    pub fn power(&self, k: u32) -> (BigInt, BigInt) {
        let d = BigInt::from(self.d);
        let two = BigInt::from(2);
        let (mut u, mut w) = (two.clone(), BigInt::zero());
        for _ in 0..k {
            let nu = (&u * &self.u0 + &d * &w * &self.w0) / &two;
            let nw = (&u * &self.w0 + &w * &self.u0) / &two;
            u = nu;
            w = nw;
        }
        (u, w)
    }
}

fn big_ln(u: &BigInt, w: &BigInt, d: i64) -> f64 {
    // ε = (u + w√D)/2; scale down by a power of two to stay in f64 range.
    let bits = u.bits().saturating_sub(900);
    let us = (u >> bits).to_f64().unwrap_or(f64::INFINITY);
    let ws = (w >> bits).to_f64().unwrap_or(f64::INFINITY);
    ((us + ws * (d as f64).sqrt()) / 2.0).ln() + bits as f64 * std::f64::consts::LN_2
}

/// Minimal positive solution of `u² - D w² = 4` for positive non-square `D`.
///
/// For `D ≡ 1 (mod 4)` the continued fraction of `(1 + √D)/2` is searched; its
/// convergents `p/q` give candidates `(2p - q, q)`. Otherwise the equation
/// reduces to `x² - D' y² = 1` for `D' = D/4` or `D' = D`, and the convergents
/// of `√D'` are searched. Small `w` are tried directly first.
pub fn pell_fundamental(d: i64) -> Result<PellData> {
    if d <= 0 || arith::is_square(d as i128) {
        return Err(Error::invalid(format!("{d} is not a positive non-square")));
    }
    let dd = d as i128;
    for w in 1..=64i128 {
        let v = dd * w * w + 4;
        if arith::is_square(v) {
            return finish(d, BigInt::from(isqrt(v)), BigInt::from(w));
        }
    }
    let big_d = BigInt::from(d);
    let four = BigInt::from(4);
    let (p0, q0, radicand) = match arith::rem(dd, 4) {
        1 => (1i128, 2i128, dd),
        0 => (0, 1, dd / 4),
        _ => (0, 1, dd),
    };
    let root = isqrt(radicand);
    // Continued fraction of (P + √R)/Q with Q | R - P².
    let (mut p, mut q) = (p0, q0);
    if arith::rem(radicand - p * p, q) != 0 {
        // Scale so that the divisibility invariant holds.
        return Err(Error::invalid("continued fraction setup"));
    }
    let (mut h_prev, mut h) = (BigInt::zero(), BigInt::one());
    let (mut k_prev, mut k) = (BigInt::one(), BigInt::zero());
    for _ in 0..10_000_000u64 {
        let a = arith::fdiv(p + root, q);
        let a_big = BigInt::from(a);
        let h_next = &a_big * &h + &h_prev;
        let k_next = &a_big * &k + &k_prev;
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
        let (u, w) = match arith::rem(dd, 4) {
            1 => (BigInt::from(2) * &h - &k, k.clone()),
            0 => (BigInt::from(2) * &h, k.clone()),
            _ => (BigInt::from(2) * &h, BigInt::from(2) * &k),
        };
        if &u * &u - &big_d * &w * &w == four {
            return finish(d, u, w);
        }
        p = a * q - p;
        q = (radicand - p * p) / q;
    }
    Err(Error::Budget(format!("no Pell solution found for D = {d}")))
}

fn finish(d: i64, u0: BigInt, w0: BigInt) -> Result<PellData> {
    let epsilon = QuadIrr::new(
        num_rational::BigRational::new(u0.clone(), BigInt::from(2)),
        num_rational::BigRational::new(w0.clone(), BigInt::from(2)),
        d,
    )?;
    Ok(PellData { d, u0, w0, epsilon })
}

/// How a Pell solution was certified minimal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MinimalityCertificate {
    /// Every `1 <= w < w0` was checked directly.
    Exhaustive,
    /// `ε` is not a `k`-th power of another solution for any prime `k` up to
    /// the stated bound, so no smaller solution exists.
    NotAPower { max_prime: u32 },
}

/// Independent minimality check of a Pell solution.
///
/// Solutions with `w0 <= exhaustive_limit` are confirmed by scanning every
/// smaller `w`. Larger ones are confirmed through the group structure: every
/// positive solution is a power of the fundamental one, so it suffices that
/// `ε` has no `k`-th root among solutions for primes `k` below
/// `ln ε / ln((3 + √5)/2)`.
pub fn verify_pell_minimal(data: &PellData, exhaustive_limit: u64) -> Result<MinimalityCertificate> {
    let d = BigInt::from(data.d);
    if &data.u0 * &data.u0 - &d * &data.w0 * &data.w0 != BigInt::from(4) {
        return Err(Error::invalid("not a solution"));
    }
    if data.w0 <= BigInt::zero() || data.u0 <= BigInt::zero() {
        return Err(Error::invalid("solution not positive"));
    }
    if data.w0 <= BigInt::from(exhaustive_limit) {
        let w0 = data.w0.to_i128().expect("bounded");
        let dd = data.d as i128;
        for w in 1..w0 {
            if arith::is_square(dd * w * w + 4) {
                return Err(Error::invalid(format!("smaller solution at w = {w}")));
            }
        }
        return Ok(MinimalityCertificate::Exhaustive);
    }
    let bound = (data.log_epsilon() / ((3.0 + 5f64.sqrt()) / 2.0).ln()).ceil() as u32 + 1;
    let mut max_prime = 2;
    for k in arith::primes_up_to(bound as u64) {
        let k = k as u32;
        max_prime = k;
        // A k-th root has trace u with u ≈ ε^(1/k), and ε ∈ (u0 - 1, u0).
        let base = (&data.u0 - BigInt::one()).nth_root(k);
        for delta in 0..3 {
            let u = &base + delta;
            let num = &u * &u - BigInt::from(4);
            if num <= BigInt::zero() || (&num % &d) != BigInt::zero() {
                continue;
            }
            let w2: BigInt = &num / &d;
            let w = w2.sqrt();
            if &w * &w != w2 {
                continue;
            }
            let cand = PellData { d: data.d, u0: u, w0: w, epsilon: data.epsilon.clone() };
            if cand.power(k) == (data.u0.clone(), data.w0.clone()) {
                return Err(Error::invalid(format!("solution is a {k}-th power")));
            }
        }
    }
    Ok(MinimalityCertificate::NotAPower { max_prime })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sol(d: i64) -> (BigInt, BigInt) {
        let p = pell_fundamental(d).unwrap();
        (p.u0, p.w0)
    }

    #[test]
    fn examples() {
        assert_eq!(sol(5), (3.into(), 1.into()));
        assert_eq!(sol(8), (6.into(), 2.into()));
        assert_eq!(sol(12), (4.into(), 1.into()));
        assert!(pell_fundamental(9).is_err());
        assert!(pell_fundamental(-3).is_err());
    }

    #[test]
    fn large_solution() {
        let p = pell_fundamental(661).unwrap();
        let d = BigInt::from(661);
        assert_eq!(&p.u0 * &p.u0 - &d * &p.w0 * &p.w0, BigInt::from(4));
        assert!(p.w0 > BigInt::from(1_000_000));
        assert!(matches!(verify_pell_minimal(&p, 1_000_000).unwrap(), MinimalityCertificate::NotAPower { .. }));
    }

    #[test]
    fn non_fundamental_solution_is_rejected() {
        let p = pell_fundamental(5).unwrap();
        let (u, w) = p.power(3);
        let fake = PellData { d: 5, u0: u, w0: w, epsilon: p.epsilon.clone() };
        assert!(verify_pell_minimal(&fake, 0).is_err());
        assert!(verify_pell_minimal(&fake, 100).is_err());
    }

    #[test]
    fn powers() {
        let p = pell_fundamental(5).unwrap();
        assert_eq!(p.power(2), (7.into(), 3.into()));
        assert!((p.log_epsilon() - ((3.0 + 5f64.sqrt()) / 2.0).ln()).abs() < 1e-12);
    }
}
