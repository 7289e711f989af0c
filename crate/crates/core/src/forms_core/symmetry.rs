// SPDX-License-Identifier: Apache-2.0
//! The proper automorphism group of a quadratic form.

use super::forms::{big_matrix_fixes, QuadForm, UnimodularMatrix};
use super::pell::{pell_fundamental, PellData};
use crate::error::{Error, Result};
use num_bigint::BigInt;

/// Order of the proper automorphism group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupOrder {
    Finite(u32),
    Infinite,
}

/// A 2×2 matrix with arbitrary-precision entries.
pub type BigMatrix = [[BigInt; 2]; 2];

/// Symmetry data of a shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SoQInfo {
    pub order: GroupOrder,
    /// A generator of the group (for definite forms, of maximal order).
    pub generator: BigMatrix,
    /// Order of the subgroup of cubes (finite groups only).
    pub cubes_order: Option<u32>,
    /// Pell data behind the generator of an indefinite group.
    pub pell: Option<PellData>,
}

impl SoQInfo {
    /// The generator narrowed to 64-bit entries.
    pub fn generator_i64(&self) -> Result<UnimodularMatrix> {
        let e = |i: usize, j: usize| -> Result<i64> {
            i64::try_from(&self.generator[i][j]).map_err(|_| Error::Overflow("generator entry"))
        };
        UnimodularMatrix::new(e(0, 0)?, e(0, 1)?, e(1, 0)?, e(1, 1)?)
    }
}

/// The matrix attached to a solution `(U, W)` of `U² - D W² = 4`:
/// `((U + sW)/2, -rW; tW, (U - sW)/2)`.
pub fn automorph(q: &QuadForm, u: &BigInt, w: &BigInt) -> BigMatrix {
    let (r, s, t) = (BigInt::from(q.r()), BigInt::from(q.s()), BigInt::from(q.t()));
    let two = BigInt::from(2);
    [
        [(u + &s * w) / &two, -(&r * w)],
        [&t * w, (u - &s * w) / &two],
    ]
}

/// Group order, a generator and the order of the cube subgroup.
///
/// Square discriminants have only `±I`.
pub fn so_q_info(q: &QuadForm) -> Result<SoQInfo> {
    if !q.is_primitive() {
        return Err(Error::invalid(format!("{q} is not primitive")));
    }
    let d = q.disc();
    let big = |v: i64| BigInt::from(v);
    let finite = |order: u32, u: i64, w: i64| -> SoQInfo {
        let generator = automorph(q, &big(u), &big(w));
        let cubes = order / num_integer::gcd(order, 3);
        SoQInfo { order: GroupOrder::Finite(order), generator, cubes_order: Some(cubes), pell: None }
    };
    if d < 0 {
        return Ok(match d {
            -3 => finite(6, 1, 1),
            -4 => finite(4, 0, 1),
            _ => finite(2, -2, 0),
        });
    }
    if crate::arith::is_square(d as i128) {
        return Ok(finite(2, -2, 0));
    }
    let pell = pell_fundamental(d)?;
    let generator = automorph(q, &pell.u0, &pell.w0);
    debug_assert!(big_matrix_fixes(&generator, q));
    Ok(SoQInfo { order: GroupOrder::Infinite, generator, cubes_order: None, pell: Some(pell) })
}

/// Whether an arbitrary-precision matrix of determinant ±1 fixes `q`.
pub fn fixes(m: &BigMatrix, q: &QuadForm) -> bool {
    big_matrix_fixes(m, q)
}
