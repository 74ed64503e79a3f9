//! Hankel operators on the Hardy spaces of the unit disc and the upper
//! half-plane, their Carleson measures, and the reflection-positivity
//! identities that connect them.
//!
//! Normalizations: kernels carry the factor `1/(2 pi)`, circle integrals use
//! arc length (total `2 pi`), and coefficient vectors live in `l^2`, so that
//! `||f||^2` on the circle equals `2 pi * sum |a_n|^2`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod hankel;
pub mod kernels;
pub mod linalg;
pub mod measure;
pub mod outer;
pub mod pick;
pub mod quadrature;
pub mod search;

pub use error::{Error, Result};
