// SPDX-License-Identifier: Apache-2.0
//! Main-term coefficients: Dirichlet L-values at 1, Euler products with
//! truncation tails, and the constants `C` and `κ`.
//!
//! Everything here is double precision. Sums use Neumaier compensation, and
//! every truncated product comes with an interval that contains the limit.

use crate::arith::{self, is_square, kronecker, primes_up_to};
use crate::error::{Error, Result};
use crate::forms_core::{
    is_ambiguous, narrow_class_number, pell_fundamental, so_q_info, QuadForm,
};
use crate::maximality::{admissible_shape_disc, mu_p, Density};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::digamma;
use std::f64::consts::PI;


/// Euler's constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Default prime bound for truncated Euler products.
pub const DEFAULT_PRIME_BOUND: u64 = 100_000;

/// Default absolute tolerance for `L(1, χ_D)`.
pub const DEFAULT_L_TOL: f64 = 1e-12;

/// Largest `|D|` accepted by [`l_one_chi`]; the cost is linear in `|D|`.
pub const L_MAX_MODULUS: i64 = 100_000_000;

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// A value together with an interval known to contain the exact limit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bounded {
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
}

impl Bounded {
    fn exact(v: f64) -> Self {
        Bounded { value: v, lo: v, hi: v }
    }

    /// Half the width of the enclosing interval.
    pub fn tail(&self) -> f64 {
        (self.hi - self.lo) / 2.0
    }

    fn scale(self, k: f64) -> Self {
        let (a, b) = (self.lo * k, self.hi * k);
        Bounded { value: self.value * k, lo: a.min(b), hi: a.max(b) }
    }

    fn plus(self, o: Bounded) -> Self {
        Bounded { value: self.value + o.value, lo: self.lo + o.lo, hi: self.hi + o.hi }
    }
}

fn check_nonsquare_disc(d: i64) -> Result<()> {
    if d == 0 || arith::rem(d as i128, 4) > 1 {
        return Err(Error::invalid(format!("{d} is not a discriminant")));
    }
    if d > 0 && is_square(d as i128) {
        return Err(Error::invalid(format!("{d} is a square")));
    }
    Ok(())
}

/// `L(1, χ_D) = Σ (D/n)/n` with the Kronecker symbol.
///
/// The symbol is periodic modulo `k = |D|`, so the series folds into
/// `Σ_{a≤k} χ(a)/a - (1/k) Σ_{a≤k} χ(a) ψ(1 + a/k)`. The rounding error of
/// that finite sum is estimated up front and compared with `tol`.
pub fn l_one_chi(d: i64, tol: f64) -> Result<f64> {
    check_nonsquare_disc(d)?;
    let k = d.unsigned_abs();
    if k > L_MAX_MODULUS as u64 {
        return Err(Error::Budget(format!("|D| = {k} exceeds the L-value budget")));
    }
    let kf = k as f64;
    let mut harmonic = CompensatedSum::default();
    let mut psi = CompensatedSum::default();
    let mut magnitude = 0.0;
    for a in 1..=k {
        let chi = kronecker(d as i128, a as u128);
        if chi == 0 {
            continue;
        }
        let c = chi as f64;
        harmonic.add(c / a as f64);
        let ps = digamma(1.0 + a as f64 / kf);
        psi.add(c * ps);
        magnitude += 1.0 / a as f64 + ps.abs() / kf;
    }
    // Each term carries a few ulps from the division and the digamma routine.
    let error = 8.0 * f64::EPSILON * magnitude.max(1.0);
    if error > tol {
        return Err(Error::Budget(format!(
            "L(1, chi_{d}) cannot reach tolerance {tol:e} (error estimate {error:e})"
        )));
    }
    Ok(harmonic.value() - psi.value() / kf)
}

/// `3^α` with `α = 1` when `3 | D` and 0 otherwise.
pub fn alpha01(d: i64) -> i32 {
    i32::from(d % 3 == 0)
}

/// `α = 1` when `3 | D` and 2 otherwise (the geometric convention).
pub fn alpha12(d: i64) -> i32 {
    if d % 3 == 0 {
        1
    } else {
        2
    }
}

/// `β = 1` when `D > -4`.
pub fn beta(d: i64) -> i32 {
    i32::from(d > -4)
}

/// Number of roots of unity in the quadratic order of discriminant `D < 0`.
pub fn roots_of_unity(d: i64) -> u32 {
    match d {
        -3 => 6,
        -4 => 4,
        _ => 2,
    }
}

fn pow3(e: f64) -> f64 {
    3f64.powf(e)
}

/// Oriented order count coefficient from `h(D)` and `L(1, χ_D)`.
pub fn analytic_coeff(d: i64) -> Result<f64> {
    analytic_coeff_tol(d, DEFAULT_L_TOL)
}

/// As [`analytic_coeff`] with an explicit tolerance for the L-value.
pub fn analytic_coeff_tol(d: i64, tol: f64) -> Result<f64> {
    check_nonsquare_disc(d)?;
    let l = l_one_chi(d, tol)?;
    let h = narrow_class_number(d)?.h as f64;
    let e = (alpha01(d) + beta(d)) as f64 - 1.5;
    Ok(pow3(e) * l / (h * (d.unsigned_abs() as f64).sqrt()))
}

/// Oriented order count coefficient from the volume of the fundamental domain.
pub fn geometric_coeff(q: &QuadForm) -> Result<f64> {
    let d = q.disc();
    check_nonsquare_disc(d)?;
    let info = so_q_info(q)?;
    let a = pow3(alpha12(d) as f64);
    if d < 0 {
        let c = info.cubes_order.unwrap_or(1) as f64;
        Ok(2.0 * PI * 3f64.sqrt() / (a * c * (-d) as f64))
    } else {
        let pell = info.pell.ok_or_else(|| Error::invalid("indefinite shape without a unit"))?;
        Ok(3.0 * 3f64.sqrt() * pell.log_epsilon() / (a * d as f64))
    }
}

/// `Π_{p ≤ P, (D/p) = 1} (1 - 2/(p(p+1)))` and its limit interval.
///
/// The omitted factors lie in `(1 - 2/(p(p+1)), 1]` and `Σ_{p>P} 2/p² < 2/P`,
/// so the limit lies in `[v (1 - 2/P), v]`.
pub fn split_product(d: i64, prime_bound: u64) -> Bounded {
    let mut log = CompensatedSum::default();
    for p in primes_up_to(prime_bound) {
        if kronecker(d as i128, p as u128) == 1 {
            let pf = p as f64;
            log.add((-2.0 / (pf * (pf + 1.0))).ln_1p());
        }
    }
    let v = log.value().exp();
    Bounded { value: v, lo: v * (1.0 - 2.0 / prime_bound as f64), hi: v }
}

/// `Π_{p | D, p ≠ 3} p/(p+1)` (exact, finite).
pub fn ramified_product(d: i64) -> Result<f64> {
    let factors = arith::factor(d.unsigned_abs() as u128)?;
    Ok(factors
        .iter()
        .filter(|(p, _)| *p != 3)
        .map(|(p, _)| *p as f64 / (*p as f64 + 1.0))
        .product())
}

fn density_f64(x: Density) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

/// Whether some ramified prime has density zero, which forces no maximal points.
fn has_zero_density(d: i64) -> Result<bool> {
    let factors = arith::factor(d.unsigned_abs() as u128)?;
    Ok(factors.iter().any(|(p, _)| mu_p(d, *p as u64).is_zero()))
}

/// Coefficient for maximal orders of a fixed shape of discriminant `D`.
///
/// Zero when `D` is not admissible or some ramified density vanishes.
pub fn maximal_coeff(d: i64, prime_bound: u64) -> Result<Bounded> {
    check_nonsquare_disc(d)?;
    if !admissible_shape_disc(d) || has_zero_density(d)? {
        return Ok(Bounded::exact(0.0));
    }
    let l = l_one_chi(d, DEFAULT_L_TOL)?;
    let h = narrow_class_number(d)?.h as f64;
    let mu3 = density_f64(mu_p(d, 3));
    let e = (alpha01(d) + beta(d)) as f64 + 1.5;
    let ad = (d.unsigned_abs() as f64).sqrt();
    let k = pow3(e) * mu3 / (4.0 * PI * PI * ad) * l / h * ramified_product(d)?;
    // The product here runs over split primes other than 3.
    let three = if kronecker(d as i128, 3) == 1 { 6.0 / 5.0 } else { 1.0 };
    Ok(split_product(d, prime_bound).scale(k * three))
}

/// `C₀` for a fundamental `d ≠ -3`.
pub fn c0(d: i64) -> f64 {
    match arith::rem(d as i128, 9) {
        3 => 5.0 / 3.0,
        6 => 7.0 / 5.0,
        _ => 11.0 / 9.0,
    }
}

/// The shape discriminant attached to a quadratic resolvent discriminant `d`.
pub fn resolvent_shape_disc(d: i64) -> i64 {
    if d % 3 == 0 {
        -d / 3
    } else {
        -3 * d
    }
}

/// Coefficient for cubic fields whose quadratic resolvent has discriminant `d`.
pub fn resolvent_field_coeff(d: i64, prime_bound: u64) -> Result<Bounded> {
    if d == -3 || !arith::is_fundamental_discriminant(d as i128) {
        return Err(Error::invalid(format!("{d} is not a fundamental discriminant other than -3")));
    }
    let big_d = resolvent_shape_disc(d);
    let l = l_one_chi(big_d, DEFAULT_L_TOL)?;
    let ld = split_product(big_d, prime_bound).scale(l);
    let factors = arith::factor(big_d.unsigned_abs() as u128)?;
    let ram: f64 = factors.iter().map(|(p, _)| *p as f64 / (*p as f64 + 1.0)).product();
    let e = (alpha01(big_d) + beta(big_d)) as f64 - 0.5;
    let k = pow3(e) * c0(d) / (PI * PI * (big_d.unsigned_abs() as f64).sqrt()) * ram;
    Ok(ld.scale(k))
}

/// `Σ ½ h(D) · maximal_coeff(D)` over the one or two shape discriminants feeding `N(d, X)`.
pub fn resolvent_field_coeff_by_shapes(d: i64, prime_bound: u64) -> Result<Bounded> {
    let mut discs = vec![-3 * d];
    if d % 3 == 0 {
        discs.push(-d / 3);
    }
    let mut total = Bounded::exact(0.0);
    for big_d in discs {
        let h = narrow_class_number(big_d)?.h as f64;
        total = total.plus(maximal_coeff(big_d, prime_bound)?.scale(h / 2.0));
    }
    Ok(total)
}

/// Cohn's constant for cyclic-resolvent cubic fields counted by conductor.
pub fn cohn_coeff(prime_bound: u64) -> Bounded {
    split_product(-3, prime_bound).scale(11.0 * 3f64.sqrt() / (36.0 * PI))
}

/// The constants `C` and `κ` truncated at a prime bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniversalConstants {
    pub prime_bound: u64,
    /// `Π_p (1 - 3/p² + 2/p³)`.
    pub c: Bounded,
    /// `Σ_p log p / (p² + p - 2)`.
    pub kappa: Bounded,
    pub euler_gamma: f64,
    pub pi: f64,
}

/// `C` and `κ` over primes up to `P`, with intervals for the omitted primes.
///
/// Each omitted factor of `C` lies in `[1 - 3/p², 1)`, so its logarithm is
/// at least `-3/(p² - 3)`; the sum over `p > P` is below `3/(P - 3/P)`.
/// The omitted part of `κ` is at most `Σ_{n>P} log n / n² ≤ (log P + 1)/P`.
pub fn universal_constants(prime_bound: u64) -> Result<UniversalConstants> {
    if prime_bound < 100 {
        return Err(Error::invalid("the prime bound for C and kappa must be at least 100"));
    }
    let mut log_c = CompensatedSum::default();
    let mut kappa = CompensatedSum::default();
    for p in primes_up_to(prime_bound) {
        let pf = p as f64;
        log_c.add((-3.0 / (pf * pf) + 2.0 / (pf * pf * pf)).ln_1p());
        kappa.add(pf.ln() / (pf * pf + pf - 2.0));
    }
    let pb = prime_bound as f64;
    let c = log_c.value().exp();
    let k = kappa.value();
    Ok(UniversalConstants {
        prime_bound,
        c: Bounded { value: c, lo: c * (-3.0 / (pb - 3.0 / pb)).exp(), hi: c },
        kappa: Bounded { value: k, lo: k, hi: k + (pb.ln() + 1.0) / pb },
        euler_gamma: EULER_GAMMA,
        pi: PI,
    })
}

/// A two-term prediction `main + second` at a given `X`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoTerm {
    pub main: f64,
    pub second: f64,
}

impl TwoTerm {
    pub fn total(&self) -> f64 {
        self.main + self.second
    }
}

/// Oriented order count for a square shape discriminant `D`.
pub fn square_order_prediction(d: i64, x: f64) -> Result<TwoTerm> {
    if d <= 0 || !is_square(d as i128) {
        return Err(Error::invalid(format!("{d} is not a positive square")));
    }
    let df = d as f64;
    let k = pow3(alpha01(d) as f64 - 1.5);
    let sx = x.sqrt();
    Ok(TwoTerm {
        main: k / (2.0 * df) * sx * x.ln(),
        second: k / df * (2.0 * EULER_GAMMA - 1.0 + 1.5 * (df / 3.0).ln()) * sx,
    })
}

/// Which pure-field count to predict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PureTarget {
    /// Maximal orders of the shape of discriminant 1.
    Q1,
    /// Maximal orders of one shape of discriminant 9.
    Q9,
    /// All pure cubic fields.
    All,
}

/// Pure cubic field prediction: `k √X (log X + c)` split into two terms.
pub fn pure_field_prediction(target: PureTarget, x: f64, u: &UniversalConstants) -> TwoTerm {
    let s3 = 3f64.sqrt();
    let (k, log3) = match target {
        PureTarget::Q1 => (u.c.value / (15.0 * s3), 16.0 / 5.0),
        PureTarget::Q9 => (u.c.value / (40.0 * s3), 1.0 / 5.0),
        PureTarget::All => (7.0 * u.c.value / (60.0 * s3), 67.0 / 35.0),
    };
    let rest = -log3 * 3f64.ln() + 4.0 * EULER_GAMMA + 12.0 * u.kappa.value - 2.0;
    let sx = x.sqrt();
    TwoTerm { main: k * sx * x.ln(), second: k * sx * rest }
}

/// Everything that enters the main terms for one shape discriminant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionCoefficients {
    pub d: i64,
    pub alpha01: i32,
    pub alpha12: i32,
    pub beta: i32,
    /// `(shape, γ)` for every class representative.
    pub gamma_ambiguous: Vec<((i64, i64, i64), u8)>,
    pub h: usize,
    pub l1: f64,
    /// `μ₃(D)` as numerator and denominator.
    pub mu3: (i64, i64),
    pub euler_split_product: Bounded,
    pub euler_ramified_product: f64,
    /// `C₀` for the resolvent discriminant attached to `D`, when there is one.
    pub c0: Option<f64>,
    /// `L(D) = L(1, χ_D) Π_{(D/p)=1} (1 - 2/(p(p+1)))`.
    pub ld: Bounded,
    pub prime_bound: u64,
    pub tail_bound: f64,
    pub analytic: f64,
    pub maximal: Bounded,
}

/// The resolvent discriminant `d` with [`resolvent_shape_disc`]`(d) = D`, if any.
pub fn resolvent_of_shape_disc(d: i64) -> Option<i64> {
    let fundamental = |v: i64| v != -3 && arith::is_fundamental_discriminant(v as i128);
    if d % 3 == 0 && fundamental(-d / 3) && (-d / 3) % 3 != 0 {
        Some(-d / 3)
    } else if d % 3 != 0 && fundamental(-3 * d) {
        Some(-3 * d)
    } else {
        None
    }
}

/// Collect the coefficients for a non-square shape discriminant.
pub fn prediction_coefficients(d: i64, prime_bound: u64) -> Result<PredictionCoefficients> {
    check_nonsquare_disc(d)?;
    let group = narrow_class_number(d)?;
    let gamma_ambiguous = group
        .reps
        .iter()
        .map(|q| Ok((q.coeffs(), u8::from(is_ambiguous(q)?))))
        .collect::<Result<Vec<_>>>()?;
    let l1 = l_one_chi(d, DEFAULT_L_TOL)?;
    let mu3 = mu_p(d, 3);
    let split = split_product(d, prime_bound);
    let maximal = maximal_coeff(d, prime_bound)?;
    Ok(PredictionCoefficients {
        d,
        alpha01: alpha01(d),
        alpha12: alpha12(d),
        beta: beta(d),
        gamma_ambiguous,
        h: group.h,
        l1,
        mu3: (*mu3.numer(), *mu3.denom()),
        euler_split_product: split,
        euler_ramified_product: ramified_product(d)?,
        c0: resolvent_of_shape_disc(d).map(c0),
        ld: split.scale(l1),
        prime_bound,
        tail_bound: split.tail().max(maximal.tail()),
        analytic: analytic_coeff(d)?,
        maximal,
    })
}

/// Relative error of the analytic class number formula for `D`.
pub fn class_number_formula_check(d: i64) -> Result<f64> {
    check_nonsquare_disc(d)?;
    if d.unsigned_abs() > 10_000 {
        return Err(Error::invalid("class number check is limited to |D| <= 10^4"));
    }
    let h = narrow_class_number(d)?.h as f64;
    let l = l_one_chi(d, DEFAULT_L_TOL)?;
    let rhs = if d < 0 {
        roots_of_unity(d) as f64 * ((-d) as f64).sqrt() / (2.0 * PI) * l
    } else {
        (d as f64).sqrt() / pell_fundamental(d)?.log_epsilon() * l
    };
    Ok((h - rhs).abs() / h)
}
