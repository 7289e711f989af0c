// SPDX-License-Identifier: Apache-2.0
//! Cubic rings of fixed lattice shape.

pub mod arith;
pub mod asymptotics;
pub mod cli_harness;
pub mod counting;
pub mod error;
pub mod forms_core;

pub use error::{Error, Result};
pub mod maximality;
pub mod shape_param;

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/introduction.md")]
mod book_introduction {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/forms.md")]
mod book_forms {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/shapes.md")]
mod book_shapes {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/counting.md")]
mod book_counting {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/maximality.md")]
mod book_maximality {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/asymptotics.md")]
mod book_asymptotics {}
#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book_cli {}
