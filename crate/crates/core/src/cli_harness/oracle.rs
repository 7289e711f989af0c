// SPDX-License-Identifier: Apache-2.0
//! Randomized checks of the Hessian identities.

use crate::error::Result;
use crate::forms_core::{act_on_cubic_twisted, act_on_quadratic, CubicForm, UnimodularMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Outcome of [`check_hessian_identities`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IdentityTally {
    pub pairs: u64,
    /// Pairs with `disc(H_f) = -3 disc(f)`.
    pub disc_ok: u64,
    /// Pairs with `H_{g·f} = g·H_f`.
    pub covariance_ok: u64,
}

/// A random matrix of determinant ±1 with entries bounded by `bound`.
pub fn random_matrix(rng: &mut impl Rng, bound: i64) -> Result<UnimodularMatrix> {
    let mut g = UnimodularMatrix::identity();
    if rng.gen_bool(0.5) {
        g = UnimodularMatrix::new(1, 0, 0, -1)?;
    }
    for _ in 0..rng.gen_range(0..8) {
        let step = if rng.gen_bool(0.5) {
            UnimodularMatrix::new(0, -1, 1, 0)?
        } else {
            UnimodularMatrix::new(1, rng.gen_range(-3..=3), 0, 1)?
        };
        let next = g.mul(&step)?;
        if next.entries().iter().flatten().any(|v| v.abs() > bound) {
            break;
        }
        g = next;
    }
    Ok(g)
}

/// A random nonzero cubic form with coefficients in `[-bound, bound]`.
pub fn random_cubic(rng: &mut impl Rng, bound: i64) -> Result<CubicForm> {
    loop {
        let c: [i64; 4] = std::array::from_fn(|_| rng.gen_range(-bound..=bound));
        let f = CubicForm::new(c[0], c[1], c[2], c[3])?;
        if !f.is_zero() {
            return Ok(f);
        }
    }
}

/// Check both identities on `pairs` random `(f, g)` with a fixed seed.
pub fn check_hessian_identities(pairs: u64, seed: u64) -> Result<IdentityTally> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tally = IdentityTally { pairs, disc_ok: 0, covariance_ok: 0 };
    for _ in 0..pairs {
        let f = random_cubic(&mut rng, 1000)?;
        let g = random_matrix(&mut rng, 30)?;
        let (r, s, t) = f.hessian_coeffs();
        tally.disc_ok += u64::from(s * s - 4 * r * t == -3 * f.disc());
        let moved = act_on_cubic_twisted(&g, &f)?;
        let ok = if (r, s, t) == (0, 0, 0) {
            moved.hessian_coeffs() == (0, 0, 0)
        } else {
            moved.hessian()? == act_on_quadratic(&g, &f.hessian()?)?
        };
        tally.covariance_ok += u64::from(ok);
    }
    Ok(tally)
}
