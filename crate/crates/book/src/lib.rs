//! The guide's Rust listings, compiled and run as doctests.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/stencils.md")]
pub mod stencils {}

#[doc = include_str!("../../../book/src/closed_forms.md")]
pub mod closed_forms {}

#[doc = include_str!("../../../book/src/stepping.md")]
pub mod stepping {}

#[doc = include_str!("../../../book/src/boundaries.md")]
pub mod boundaries {}

#[doc = include_str!("../../../book/src/errors.md")]
pub mod errors {}

#[doc = include_str!("../../../book/src/baseline.md")]
pub mod baseline {}

#[doc = include_str!("../../../book/src/plans.md")]
pub mod plans {}

#[doc = include_str!("../../../README.md")]
pub mod readme {}
