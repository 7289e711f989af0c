// SPDX-License-Identifier: Apache-2.0
//! Field counts by quadratic resolvent, assembled from per-shape counts.

use super::{count_orbits, pure_field_counts, CountOptions, Filter};
use crate::arith;
use crate::error::{Error, Result};
use crate::forms_core::{narrow_class_number, normalize_shape};
use crate::maximality::{admissible_shape_disc, SieveConfig};

/// Cubic fields of `|disc| < X` whose ring of integers has a shape of
/// discriminant `D` (non-square `D`).
pub fn m3_d(d: i64, x: u64) -> Result<u64> {
    m3_d_with(d, x, None)
}

pub(crate) fn m3_d_with(d: i64, x: u64, threads: Option<usize>) -> Result<u64> {
    if d > 0 && arith::is_square(d as i128) {
        return Err(Error::unsupported("square discriminants are counted by pure_field_counts"));
    }
    if !admissible_shape_disc(d) {
        return Ok(0);
    }
    let classes = narrow_class_number(d)?;
    let opts = CountOptions {
        filter: Filter::Maximal { sieve: SieveConfig::Exact },
        threads,
        ..CountOptions::default()
    };
    let mut oriented = 0u64;
    for q in &classes.reps {
        let shape = normalize_shape(q)?.form;
        oriented += count_orbits(&shape, x, opts)?.maximal_oriented.unwrap_or(0);
    }
    if !oriented.is_multiple_of(2) {
        return Err(Error::invalid(format!("odd oriented field count {oriented} for D={d}")));
    }
    Ok(oriented / 2)
}

/// Cubic fields of `|disc| < X` with quadratic resolvent of discriminant `d`.
pub fn n_d(d: i64, x: u64) -> Result<u64> {
    if !arith::is_fundamental_discriminant(d as i128) {
        return Err(Error::invalid(format!("{d} is not a fundamental discriminant")));
    }
    if d == -3 {
        return Ok(pure_field_counts(x)?.total);
    }
    let mut total = m3_d(-3 * d, x)?;
    if d % 3 == 0 {
        total += m3_d(-d / 3, x)?;
    }
    Ok(total)
}
