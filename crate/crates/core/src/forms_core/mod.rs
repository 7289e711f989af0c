// SPDX-License-Identifier: Apache-2.0
//! Binary quadratic and cubic forms: discriminants, the Hessian, group
//! actions, reduction, class numbers, Pell equations and symmetry groups.

mod forms;
mod pell;
mod quadirr;
mod reduction;
mod symmetry;

pub use forms::{
    act_on_cubic_twisted, act_on_quadratic, adjoint, content_primitive_cubic,
    content_primitive_quadratic, disc_cubic, disc_quadratic, hessian, is_irreducible_cubic,
    CubicForm, QuadForm, UnimodularMatrix,
};
pub use pell::{pell_fundamental, verify_pell_minimal, MinimalityCertificate, PellData};
pub use quadirr::{is_positive, QuadIrr};
pub use reduction::{
    canonical_sl2, canonical_sl2_with_transform, check_discriminant, is_ambiguous,
    is_reduced_square, narrow_class_number, normalize_shape, normalize_square, ClassGroupData,
    Reduced,
};
pub use symmetry::{automorph, fixes, so_q_info, BigMatrix, GroupOrder, SoQInfo};

/// Kronecker symbol `(D/n)` for `n >= 1`.
pub fn kronecker_symbol(d: i64, n: u64) -> i32 {
    crate::arith::kronecker(d as i128, n as u128)
}
