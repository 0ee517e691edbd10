//! Dimensions of p-adic closures of finitely generated subgroups of
//! commutative algebraic groups, with certified rank brackets.

pub mod algebra;
pub mod arith;
pub mod cli;
pub mod closure;
pub mod elliptic;
pub mod error;
pub mod fp_poly;
pub mod lattice;
pub mod linalg;
pub mod number_field;
pub mod padic;
pub mod poly;
pub mod properties;
pub mod search;

pub use error::{Error, ErrorClass, Result};
