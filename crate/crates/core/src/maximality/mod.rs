// SPDX-License-Identifier: Apache-2.0
//! Local maximality of cubic rings, p-adic density tables, the pure-cubic
//! maximality predicates and admissibility of shape discriminants.

use crate::arith::{self, rem};
use crate::error::{Error, Result};
use crate::forms_core::{CubicForm, QuadForm};
use crate::shape_param::{lattice_for, LatticeKind, ShapePoint};
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

/// Exact rational density.
pub type Density = Ratio<i64>;

/// Primes below this bound are tested by scanning all of `ℙ¹(𝔽_p)`.
const SCAN_BELOW: i128 = 5;

fn mulmod(a: i128, b: i128, m: i128) -> i128 {
    if m < (1i128 << 62) {
        rem(a * b, m)
    } else {
        let v = num_bigint::BigInt::from(a) * num_bigint::BigInt::from(b) % num_bigint::BigInt::from(m);
        let v: i128 = v.try_into().expect("reduced below modulus");
        rem(v, m)
    }
}

/// Values `f(u,v)`, `f_x(u,v)`, `f_y(u,v)` modulo `m`.
fn eval_with_partials(c: &[i128; 4], u: i128, v: i128, m: i128) -> (i128, i128, i128) {
    let [a, b, cc, d] = *c;
    let u2 = mulmod(u, u, m);
    let v2 = mulmod(v, v, m);
    let uv = mulmod(u, v, m);
    let f = rem(
        mulmod(a, mulmod(u2, u, m), m)
            + mulmod(b, mulmod(u2, v, m), m)
            + mulmod(cc, mulmod(u, v2, m), m)
            + mulmod(d, mulmod(v2, v, m), m),
        m,
    );
    let fx = rem(mulmod(3 * a, u2, m) + mulmod(2 * b, uv, m) + mulmod(cc, v2, m), m);
    let fy = rem(mulmod(b, u2, m) + mulmod(2 * cc, uv, m) + mulmod(3 * d, v2, m), m);
    (f, fx, fy)
}

/// Candidate multiple roots of `f` modulo `p` as integer pairs `(u, v)`.
fn multiple_root_candidates(c: &[i128; 4], p: i128) -> Vec<(i128, i128)> {
    if p < SCAN_BELOW {
        let mut pts: Vec<(i128, i128)> = (0..p).map(|x| (x, 1)).collect();
        pts.push((1, 0));
        return pts;
    }
    // For p >= 5 a multiple root is the root of the Hessian, which is then
    // the square of a linear form; a triple root kills the Hessian.
    let [a, b, cc, d] = c.map(|v| rem(v, p));
    let ha = rem(b * b - 3 * a * cc, p);
    let hb = rem(b * cc - 9 * a * d, p);
    let hc = rem(cc * cc - 3 * b * d, p);
    let root = |num: i128, den: i128| -> (i128, i128) {
        if den == 0 {
            (1, 0)
        } else {
            let inv = arith::mod_inverse(den, p).expect("prime modulus");
            (rem(num * inv, p), 1)
        }
    };
    if ha == 0 && hb == 0 && hc == 0 {
        // f ≡ λ(γx + δy)³ with root (b : -3a).
        return vec![root(b, rem(-3 * a, p))];
    }
    if rem(hb * hb - 4 * ha * hc, p) != 0 {
        return Vec::new();
    }
    vec![root(hb, rem(-2 * ha, p))]
}

/// Test on raw coefficients; depends only on `f mod p²`.
pub(crate) fn maximal_at_raw(coeffs: &[i128; 4], p: i128) -> bool {
    let p2 = p * p;
    let c = coeffs.map(|v| rem(v, p2));
    if c.iter().all(|&v| v % p == 0) {
        return false;
    }
    for (u, v) in multiple_root_candidates(&c, p) {
        let (fp, fxp, fyp) = eval_with_partials(&c, u, v, p);
        if fp != 0 || fxp != 0 || fyp != 0 {
            continue;
        }
        if moved_form_is_nonmaximal(&c, u, v, p) {
            return false;
        }
    }
    true
}

/// Move the root `(u : v)` to `(1 : 0)` with a Bezout completion and test the
/// leading two coefficients of the moved form.
fn moved_form_is_nonmaximal(c: &[i128; 4], u: i128, v: i128, p: i128) -> bool {
    let (_, x, y) = arith::bezout(u, v);
    // Rows (u, v) and (-y, x): u x + v y = 1.
    let (lead, second) = moved_leading(c, u, v, -y, x, p);
    lead == 0 && second % p == 0
}

/// Leading coefficient (mod p²) and second coefficient (mod p) of
/// `f((x, y)γ)` for `γ = ((u, v), (w, z))`.
fn moved_leading(c: &[i128; 4], u: i128, v: i128, w: i128, z: i128, p: i128) -> (i128, i128) {
    let p2 = p * p;
    let (f, _, _) = eval_with_partials(c, rem(u, p2), rem(v, p2), p2);
    let (_, fx, fy) = eval_with_partials(c, rem(u, p), rem(v, p), p);
    let second = rem(mulmod(rem(w, p), fx, p) + mulmod(rem(z, p), fy, p), p);
    (f, second)
}

/// Whether the ring of `f` is maximal at the prime `p`.
pub fn is_maximal_at(f: &CubicForm, p: u64) -> Result<bool> {
    if !arith::is_prime(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    if f.disc() == 0 {
        return Err(Error::invalid(format!("{f} has zero discriminant")));
    }
    Ok(maximal_at_raw(&f.coeffs_i128(), p as i128))
}

/// Which primes the maximality test examines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[derive(Default)]
pub enum SieveConfig {
    /// Every prime whose square divides the discriminant.
    #[default]
    Exact,
    /// Only primes up to the bound.
    Truncated { prime_bound: u64 },
}


/// Whether the ring of `f` is maximal (at all primes, or at `p <= Y`).
pub fn is_maximal(f: &CubicForm, cfg: SieveConfig) -> Result<bool> {
    let disc = f.disc();
    if disc == 0 {
        return Err(Error::invalid(format!("{f} has zero discriminant")));
    }
    let coeffs = f.coeffs_i128();
    match cfg {
        SieveConfig::Exact => {
            for (p, e) in arith::factor(disc.unsigned_abs())? {
                if e >= 2 && !maximal_at_raw(&coeffs, p as i128) {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        SieveConfig::Truncated { prime_bound } => {
            let mut n = disc.unsigned_abs();
            for p in arith::primes_up_to(prime_bound) {
                let p = p as u128;
                let mut e = 0;
                while n.is_multiple_of(p) {
                    n /= p;
                    e += 1;
                }
                if e >= 2 && !maximal_at_raw(&coeffs, p as i128) {
                    return Ok(false);
                }
                if n == 1 {
                    break;
                }
            }
            Ok(true)
        }
    }
}

/// Maximality when the candidate primes are already known (used by counting).
pub(crate) fn is_maximal_with_primes(f: &CubicForm, primes: &[u64]) -> bool {
    let disc = f.disc();
    let coeffs = f.coeffs_i128();
    primes.iter().all(|&p| {
        let p = p as i128;
        disc % (p * p) != 0 || maximal_at_raw(&coeffs, p)
    })
}

/// Row of the density table a prime falls into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DensityCase {
    /// `(D/p) = -1`.
    Inert,
    /// `(D/p) = 1`.
    Split,
    /// `p ‖ D`.
    Ramified1,
    /// `p² ‖ D`; for `p = 2` the residue of `D/4` modulo 4 is recorded.
    Ramified2 { m_mod4: Option<u8> },
    /// `p³ ‖ D`.
    Ramified3,
    /// `p⁴ | D`.
    Ramified4,
}

/// One entry of the density table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DensityEntry {
    pub p: u64,
    pub case: DensityCase,
    pub density: Density,
}

/// Classify `p` against `D`.
pub fn density_case(d: i64, p: u64) -> DensityCase {
    let v = arith::valuation(d as i128, p as i128);
    match v {
        0 => {
            if arith::kronecker(d as i128, p as u128) == 1 {
                DensityCase::Split
            } else {
                DensityCase::Inert
            }
        }
        1 => DensityCase::Ramified1,
        2 => DensityCase::Ramified2 {
            m_mod4: (p == 2).then(|| rem(d as i128 / 4, 4) as u8),
        },
        3 => DensityCase::Ramified3,
        _ => DensityCase::Ramified4,
    }
}

/// Table value of the density of points maximal at `p`.
pub fn mu_p(d: i64, p: u64) -> Density {
    mu_entry(d, p).density
}

/// Table entry with its case.
pub fn mu_entry(d: i64, p: u64) -> DensityEntry {
    let case = density_case(d, p);
    let pi = p as i64;
    let r = |n: i64, m: i64| Density::new(n, m);
    let density = match (p, case) {
        (2, DensityCase::Inert) => r(3, 4),
        (2, DensityCase::Split) => r(1, 2),
        (2, DensityCase::Ramified2 { m_mod4 }) => {
            if m_mod4 == Some(3) {
                r(1, 2)
            } else {
                r(0, 1)
            }
        }
        (2, DensityCase::Ramified3) => r(1, 2),
        (3, DensityCase::Inert | DensityCase::Split) => r(16, 27),
        (3, DensityCase::Ramified1) => r(22, 27),
        (3, DensityCase::Ramified2 { .. }) => r(2, 3),
        (_, DensityCase::Inert) => r(pi * pi - 1, pi * pi),
        (_, DensityCase::Split) => r((pi - 1) * (pi - 1) * (pi + 2), pi * pi * pi),
        (_, DensityCase::Ramified1) if p != 2 => r(pi - 1, pi),
        _ => r(0, 1),
    };
    DensityEntry { p, case, density }
}

/// Density of lattice points maximal at `p`, by exhaustive enumeration of
/// lattice residues modulo `p²`.
pub fn empirical_mu_p(q: &QuadForm, p: u64) -> Result<Density> {
    if !arith::is_prime(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    let lat = lattice_for(q)?;
    let [v1, v2] = lat.basis();
    let form_of = |x: i64, y: i64| -> Result<[i128; 4]> {
        // Linear in the coordinates, so degenerate points are fine here.
        let (r, s, t) = (q.r() as i128, q.s() as i128, q.t() as i128);
        let (x, y) = (x as i128, y as i128);
        Ok(match lat.kind() {
            LatticeKind::Nonsquare => [(s * x - r * y) / (3 * t), x, y, (s * y - t * x) / (3 * r)],
            LatticeKind::Square => [x, 3 * r * r * y / (s * s), 3 * r * y / s, y],
        })
    };
    let f1 = form_of(v1.0, v1.1)?;
    let f2 = form_of(v2.0, v2.1)?;
    let p = p as i128;
    let p2 = p * p;
    let mut good: i64 = 0;
    for i in 0..p2 {
        for j in 0..p2 {
            let c = [0, 1, 2, 3].map(|k| rem(i * f1[k] + j * f2[k], p2));
            if maximal_at_raw(&c, p) {
                good += 1;
            }
        }
    }
    Ok(Density::new(good, (p2 * p2) as i64))
}

/// Whether `D` (or `-D/3`) is a fundamental discriminant; squares must be 1 or 9.
pub fn admissible_shape_disc(d: i64) -> bool {
    let dd = d as i128;
    if dd > 0 && arith::is_square(dd) {
        return d == 1 || d == 9;
    }
    arith::is_fundamental_discriminant(dd)
        || (dd % 3 == 0 && arith::is_fundamental_discriminant(-dd / 3))
}

/// Quantities behind the pure-cubic maximality criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PureMaxData {
    /// `d' = d/3` (shape discriminant 9), or `d` (shape discriminant 1).
    pub d_prime: i128,
    /// `a' = r³d' - 9a` (shape discriminant 9), or `a` (shape discriminant 1).
    pub a_prime: i128,
    /// Dedekind's factor: the ring discriminant is `-3k²`.
    pub k: i128,
}

/// Pure-cubic data of a point on a square-discriminant lattice.
pub fn pure_max_data(p: &ShapePoint<'_>) -> Result<PureMaxData> {
    let lat = p.lattice();
    let shape = lat.shape();
    let (a, d) = (p.coords().0 as i128, p.coords().1 as i128);
    match (lat.kind(), shape.disc()) {
        (LatticeKind::Square, 1) => Ok(PureMaxData { d_prime: d, a_prime: a, k: 3 * (a * d).abs() }),
        (LatticeKind::Square, 9) => {
            let r = shape.r() as i128;
            let dp = d / 3;
            let ap = r * r * r * dp - 9 * a;
            Ok(PureMaxData { d_prime: dp, a_prime: ap, k: (ap * dp).abs() })
        }
        _ => Err(Error::invalid("pure-cubic data needs shape discriminant 1 or 9")),
    }
}

/// Maximality of a pure cubic ring from coefficient conditions alone.
///
/// Shape discriminant 1 (`a x³ + d y³`): `a`, `d` squarefree, coprime, and
/// `a² ≢ d² (mod 9)`. Shape discriminant 9: `a'`, `d'` squarefree and coprime.
pub fn is_maximal_pure(p: &ShapePoint<'_>) -> Result<bool> {
    let data = pure_max_data(p)?;
    let (a, d) = (data.a_prime, data.d_prime);
    if a == 0 || d == 0 || arith::gcd(a, d) != 1 {
        return Ok(false);
    }
    if !arith::is_squarefree(a)? || !arith::is_squarefree(d)? {
        return Ok(false);
    }
    if p.lattice().disc() == 1 {
        return Ok(rem(a * a - d * d, 9) != 0);
    }
    Ok(true)
}

#[cfg(test)]
mod tests;
