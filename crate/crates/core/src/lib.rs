//! Exact arithmetic dynamics of rational maps on the projective line over Q.

pub mod error;
pub mod numeric;
pub mod places;
pub mod poly;
pub mod proj1;
pub mod ratmap;
pub mod words;
pub mod heights;
pub mod orbits;
pub mod integrality;
pub mod bounds;
pub mod cli;

pub use error::{Error, Result};
