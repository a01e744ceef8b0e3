//! Exact polynomial arithmetic used to check the combinatorial engine.

pub mod decompose;
pub mod field;
pub mod matrix;
pub mod poly;
pub mod substitute;
