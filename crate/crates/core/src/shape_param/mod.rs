// SPDX-License-Identifier: Apache-2.0
//! Shape lattices, the bijection between lattice points and cubic forms of a
//! given shape, discriminant formulas and fundamental-domain representatives.

mod domain;
mod lattice;

pub use domain::{cubic_orbit, is_fundamental_rep, Sector, Wedge, SECTOR_POWER};
pub(crate) use domain::{big_inverse, big_mul, sector_of};
pub use lattice::{form_to_point, lattice_for, point_to_form, LatticeKind, ShapeLattice, ShapePoint};

use crate::arith;
use crate::error::{Error, Result};
use crate::forms_core::{canonical_sl2, normalize_square, CubicForm, QuadForm};

/// The shape class of a cubic form: canonical representative of the primitive
/// part of its Hessian, and the Hessian's content.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShapeOf {
    /// Canonical SL₂ representative (square discriminants use `r x² + s xy`, `0 <= r < s`).
    pub shape: QuadForm,
    /// Content of the Hessian.
    pub n: i64,
}

/// Shape and multiplier of a cubic form of nonzero discriminant.
pub fn shape_of_cubic(f: &CubicForm) -> Result<ShapeOf> {
    if f.disc() == 0 {
        return Err(Error::invalid(format!("{f} has zero discriminant")));
    }
    let h = f.hessian()?;
    let (n, prim) = h.content_primitive();
    let d = prim.disc() as i128;
    let shape = if d > 0 && arith::is_square(d) {
        normalize_square(&prim)?.form
    } else {
        canonical_sl2(&prim)?
    };
    Ok(ShapeOf { shape, n })
}
