//! Certified real arithmetic: dyadic intervals with outward rounding and
//! exact linear combinations of logarithms.

mod dyadic;
mod interval;
mod ln;
mod logsum;

pub use dyadic::{Dyadic, Round};
pub use interval::{Certainty, Interval, DEFAULT_PRECISION};
pub use logsum::{LogSum, EXACT_SIGN_BIT_CAP};
