//! Certified real arithmetic: dyadic numbers, outward-rounded intervals,
//! logarithms and the dominant root of the characteristic polynomial.

pub mod dyadic;
pub mod interval;
pub mod log;
pub mod root;

pub use dyadic::{Dyadic, Rounding};
pub use interval::DyadicInterval;
pub use log::{ln2, ln_point, log_interval};
pub use root::{binet_residual, dominant_root, f_k_value, psi_eval, psi_interval, DominantRoot};
