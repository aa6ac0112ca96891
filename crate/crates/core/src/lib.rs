//! Verification and search toolkit for the equation
//! `F_n^(k) - 2^m = F_{n1}^(k) - 2^{m1}` over k-generalized Fibonacci numbers.

pub mod algebraic;
pub mod bounds;
pub mod cache;
pub mod error;
pub mod kfib;
pub mod reduction;
pub mod search;

pub use error::{Error, Result};
