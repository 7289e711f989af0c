// SPDX-License-Identifier: Apache-2.0
//! Fundamental domains for the cubic action of the automorphism group.
//!
//! The group acts on lattice coordinates through cubes: a point `v` moves to
//! `γ³ v`. For definite shapes the cube subgroup is finite and the designated
//! representative of an orbit is its lexicographically least point. For
//! indefinite shapes with `r, t > 0` the cube subgroup is `{±M^(3k)}` and the
//! representatives are the points with `ξ > 0` and `1 <= η/ξ < ε⁶`, where
//! `ξ = b - θc`, `η = b - θ'c` and `θ, θ' = (s ± √D)/(2t)`.

use super::lattice::{LatticeKind, ShapePoint};
use crate::arith;
use crate::error::{Error, Result};
use crate::forms_core::{so_q_info, BigMatrix, GroupOrder, PellData, QuadForm, QuadIrr, UnimodularMatrix};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use std::cmp::Ordering;

/// Exponent of `ε` bounding the sector: the cube of the generator scales
/// `η/ξ` by `ε⁶`.
pub const SECTOR_POWER: u32 = 6;

#[derive(Debug, Clone)]
pub(crate) enum Domain {
    Definite { cubes: Vec<UnimodularMatrix> },
    Indefinite(Box<Sector>),
    /// Indefinite shape without `r, t > 0`: the lattice is usable, the sector is not.
    Unnormalized,
    Square,
}

/// Exact description of the indefinite sector.
#[derive(Debug, Clone)]
pub struct Sector {
    pub pell: PellData,
    /// Generator `M` of the automorphism group (acting on columns).
    pub generator: BigMatrix,
    pub theta: QuadIrr,
    pub theta_conj: QuadIrr,
    /// The fundamental sector `1 <= η/ξ < ε⁶`.
    pub full: Wedge,
    /// The wedge `1 <= η/ξ < ε²`; `M` maps it onto the next third of the sector.
    pub short: Wedge,
    /// `M` or its inverse, whichever multiplies `η/ξ` by `ε²`.
    pub raise: BigMatrix,
}

/// Points with `c >= 0`, `ξ > 0` and `η < Eξ` for a ratio bound `E > 1`.
#[derive(Debug, Clone)]
pub struct Wedge {
    /// `E` as an element of `ℚ(√D)`.
    pub e: QuadIrr,
    /// `λ = (Eθ - θ')/(E - 1)`: inside iff `c >= 0` and `b > λc`.
    pub lambda: QuadIrr,
    /// `Q'(λ, 1)`: row `c` meets `Q' <= m` above `λc` iff `c² K < m`.
    pub row_constant: QuadIrr,
    /// `λ = (A + B√D)/C` with `C > 0`, when it fits 128 bits.
    pub lambda_int: Option<(i128, i128, i128)>,
    theta: QuadIrr,
    theta_conj: QuadIrr,
}

impl Domain {
    pub(crate) fn build(q: &QuadForm) -> Result<Domain> {
        let info = so_q_info(q)?;
        match info.order {
            GroupOrder::Finite(n) => {
                let g = info.generator_i64()?;
                let mut cubes = Vec::new();
                for k in 0..n as i64 {
                    let m = g.pow(3 * k)?;
                    if !cubes.contains(&m) {
                        cubes.push(m);
                    }
                }
                Ok(Domain::Definite { cubes })
            }
            GroupOrder::Infinite => {
                if q.r() <= 0 || q.t() <= 0 {
                    return Ok(Domain::Unnormalized);
                }
                let pell = info.pell.expect("indefinite group carries Pell data");
                Ok(Domain::Indefinite(Box::new(Sector::new(q, pell, info.generator)?)))
            }
        }
    }
}

impl Sector {
    fn new(q: &QuadForm, pell: PellData, generator: BigMatrix) -> Result<Sector> {
        let d = q.disc();
        let theta = QuadIrr::from_ints(q.s(), 1, 2 * q.t(), d)?;
        let theta_conj = theta.conjugate();
        let wedge = |power: u32| -> Result<Wedge> {
            let (u, w) = pell.power(power);
            Wedge::new(q, QuadIrr::from_ints(u, w, 2, d)?)
        };
        let full = wedge(SECTOR_POWER)?;
        let short = wedge(2)?;
        // (1, 0) has ξ = η = 1; its image has η' - ξ' = (θ - θ') M₁₀.
        let raise = if generator[1][0] > BigInt::from(0) { generator.clone() } else { big_inverse(&generator) };
        Ok(Sector { pell, generator, theta, theta_conj, full, short, raise })
    }

    /// `ε⁶`.
    pub fn e(&self) -> &QuadIrr {
        &self.full.e
    }

    /// Whether `(b, c)` is a designated representative (plus-cone assumed).
    pub fn contains(&self, b: i64, c: i64) -> Result<bool> {
        self.full.contains(b, c)
    }

    /// See [`Wedge::last_row`] for the full sector.
    pub fn last_row(&self, m: i128) -> Result<i128> {
        self.full.last_row(m)
    }

    /// See [`Wedge::floor_c_lambda`] for the full sector.
    pub fn floor_c_lambda(&self, c: i128) -> Result<i128> {
        self.full.floor_c_lambda(c)
    }
}

impl Wedge {
    fn new(q: &QuadForm, e: QuadIrr) -> Result<Wedge> {
        let d = q.disc();
        let (r, s, t) = (q.r(), q.s(), q.t());
        let theta = QuadIrr::from_ints(s, 1, 2 * t, d)?;
        let theta_conj = theta.conjugate();
        let one = QuadIrr::rational(BigRational::one(), d)?;
        let lambda = (&(&e * &theta) - &theta_conj).div(&(&e - &one))?;
        let big = |v: i64| BigInt::from(v);
        let row_constant = &(&lambda * &lambda).scale(&big(t)) - &lambda.scale(&big(s));
        let row_constant = &row_constant + &QuadIrr::rational(BigRational::from_integer(big(r)), d)?;
        let lambda_int = integer_form(&lambda);
        Ok(Wedge { e, lambda, row_constant, lambda_int, theta, theta_conj })
    }

    /// Exact membership test.
    pub fn contains(&self, b: i64, c: i64) -> Result<bool> {
        if c < 0 {
            return Ok(false);
        }
        let d = self.e.radicand();
        let bq = QuadIrr::rational(BigRational::from_integer(b.into()), d)?;
        let cb = BigInt::from(c);
        let xi = &bq - &self.theta.scale(&cb);
        if xi.signum() != Ordering::Greater {
            return Ok(false);
        }
        let eta = &bq - &self.theta_conj.scale(&cb);
        Ok((&(&self.e * &xi) - &eta).signum() == Ordering::Greater)
    }

    /// Largest row index `c >= 0` whose real interval above `λc` is non-empty for `Q' <= m`.
    pub fn last_row(&self, m: i128) -> Result<i128> {
        if m <= 0 {
            return Ok(-1);
        }
        let d = self.e.radicand();
        let below = |c: i128| -> Result<bool> {
            // c² K < m
            let mq = QuadIrr::rational(BigRational::from_integer(m.into()), d)?;
            let ck = self.row_constant.scale(&(BigInt::from(c) * BigInt::from(c)));
            Ok((&mq - &ck).signum() == Ordering::Greater)
        };
        let mut hi: i128 = 1;
        while below(hi)? {
            hi = hi.checked_mul(2).ok_or(Error::Overflow("sector rows"))?;
        }
        let mut lo: i128 = 0;
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if below(mid)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(lo)
    }

    /// `floor(c λ)` for `c >= 0` using only integer arithmetic.
    pub fn floor_c_lambda(&self, c: i128) -> Result<i128> {
        const C: &str = "sector boundary";
        let (a, b, den) = self.lambda_int.ok_or(Error::Overflow(C))?;
        let d = self.e.radicand() as i128;
        let ca = arith::mul(c, a, C)?;
        let cb = arith::mul(c, b, C)?;
        let rad = arith::mul(arith::mul(cb, cb, C)?, d, C)?;
        let root = arith::isqrt(rad);
        let num = if cb >= 0 {
            arith::add(ca, root, C)?
        } else if root * root == rad {
            arith::sub(ca, root, C)?
        } else {
            arith::sub(arith::sub(ca, root, C)?, 1, C)?
        };
        Ok(arith::fdiv(num, den))
    }
}

/// `(A, B, C)` with `x = (A + B√D)/C`, `C > 0`, if it fits in `i128`.
fn integer_form(x: &QuadIrr) -> Option<(i128, i128, i128)> {
    let (p, q) = (x.p(), x.q());
    let den = p.denom().lcm(q.denom());
    let a = p.numer() * (&den / p.denom());
    let b = q.numer() * (&den / q.denom());
    Some((a.to_i128()?, b.to_i128()?, den.to_i128()?))
}

/// Whether the point is the designated representative of its cubic-action orbit.
pub fn is_fundamental_rep(p: &ShapePoint<'_>) -> Result<bool> {
    if !p.is_plus() {
        return Err(Error::invalid("point is not in the positive cone"));
    }
    let (x, y) = p.coords();
    match p.lattice().domain() {
        Domain::Square => Ok(y > 0),
        Domain::Definite { cubes } => {
            for m in cubes {
                let (u, v) = m.apply_column(x as i128, y as i128)?;
                if (u, v) < (x as i128, y as i128) {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Domain::Indefinite(sector) => sector.contains(x, y),
        Domain::Unnormalized => Err(Error::unsupported(format!(
            "indefinite shape {} must have r, t > 0",
            p.lattice().shape()
        ))),
    }
}

/// Images of `v` under the cube subgroup (indefinite: `±M^(3k)` for `|k| <= span`).
pub fn cubic_orbit(p: &ShapePoint<'_>, span: u32) -> Result<Vec<(i64, i64)>> {
    let (x, y) = p.coords();
    let mut out = Vec::new();
    match p.lattice().domain() {
        Domain::Square => {
            out.push((x, y));
            out.push((-x, -y));
        }
        Domain::Definite { cubes } => {
            for m in cubes {
                let (u, v) = m.apply_column(x as i128, y as i128)?;
                out.push((arith::to_i64(u, "orbit")?, arith::to_i64(v, "orbit")?));
            }
        }
        Domain::Indefinite(sector) => {
            let g = &sector.generator;
            let cube = big_mul(&big_mul(g, g), g);
            let inv = big_inverse(&cube);
            for (step, count) in [(&cube, span), (&inv, span)] {
                let (mut u, mut v) = (BigInt::from(x), BigInt::from(y));
                for _ in 0..count {
                    let nu = &step[0][0] * &u + &step[0][1] * &v;
                    let nv = &step[1][0] * &u + &step[1][1] * &v;
                    u = nu;
                    v = nv;
                    if let (Some(a), Some(b)) = (u.to_i64(), v.to_i64()) {
                        out.push((a, b));
                        out.push((-a, -b));
                    }
                }
            }
            out.push((x, y));
            out.push((-x, -y));
        }
        Domain::Unnormalized => return Err(Error::unsupported("unnormalized indefinite shape")),
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

pub(crate) fn big_mul(a: &BigMatrix, b: &BigMatrix) -> BigMatrix {
    let e = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

pub(crate) fn big_inverse(a: &BigMatrix) -> BigMatrix {
    let det = &a[0][0] * &a[1][1] - &a[0][1] * &a[1][0];
    [
        [&a[1][1] * &det, -(&a[0][1] * &det)],
        [-(&a[1][0] * &det), &a[0][0] * &det],
    ]
}

/// Kind check helper used by counting.
pub(crate) fn sector_of(lat: &super::ShapeLattice) -> Option<&Sector> {
    match lat.domain() {
        Domain::Indefinite(s) if lat.kind() == LatticeKind::Nonsquare => Some(s),
        _ => None,
    }
}
