//! Exact arithmetic over ℚ(i): scalars, polynomials, rational functions,
//! quasi-rational functions and Wronskians.

mod gaussian;
mod poly;
mod qrf;
mod ratfunc;
mod ring;
mod wronskian;

pub use gaussian::GaussianRational;
pub use poly::Polynomial;
pub use qrf::QuasiRationalFunction;
pub use ratfunc::{NumericRationalFunction, RationalFunction};
pub use ring::Ring;
pub use wronskian::{determinant, poly_wronskian, scalar_determinant, wronskian, WRONSKIAN_SIZE_CAP};
