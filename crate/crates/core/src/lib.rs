//! Exact construction and verification of multi-parameter exceptional
//! Legendre polynomial families.
//!
//! A family is indexed by distinct levels `m = (m_1, ..., m_n)` and rational
//! deformation parameters `t`. Everything is computed over the rationals, so
//! every identity is checked with zero tolerance.

pub mod admissibility;
pub mod cli;
pub mod error;
pub mod legendre;
pub mod operator;
pub mod polyring;
pub mod ratfun;
pub mod report;
pub mod xfamily;

pub use error::{Error, Result};
pub use polyring::{format_rat, parse_rat, Poly, Rat};
pub use ratfun::RatFun;
pub use xfamily::{FamilyKey, XFamily};
