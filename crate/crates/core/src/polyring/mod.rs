//! Exact univariate polynomial arithmetic over the rationals.

mod poly;
mod rat;

pub use poly::Poly;
pub use rat::{format_rat, parse_rat, rat, rat_int, Rat};
