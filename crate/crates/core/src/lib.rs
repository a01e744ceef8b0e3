pub mod acceptance;
pub mod algebra;
pub mod bounds;
pub mod equiv;
pub mod error;
pub mod extremal;
pub mod omega;
pub mod paths;
pub mod quiver;
pub mod sweep;
pub mod validate;
pub mod word;

pub use equiv::{equiv_zero, Characteristic, Engine, EngineConfig};
pub use error::{Error, Result};
pub use quiver::Quiver;
pub use word::{CyclicWord, Multidegree};

/// Exact rationals.
pub type Rational = num::BigRational;
pub type Gf2 = algebra::field::Gf<2>;
pub type Gf3 = algebra::field::Gf<3>;
pub type RationalPoly = algebra::poly::SparsePolynomial<Rational>;
pub type Gf2Poly = algebra::poly::SparsePolynomial<Gf2>;
pub type Gf3Poly = algebra::poly::SparsePolynomial<Gf3>;
