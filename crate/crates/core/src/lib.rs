pub mod central_ops;
pub mod comm_algebra;
pub mod io;
pub mod jobs;
pub mod lie;
pub mod linear;
pub mod scalar;
pub mod selftest;
pub mod tau;
pub mod weight_modules;

pub use num_rational::BigRational;

/// Exact rationals; the scalar every tool and report uses.
pub type Q = BigRational;

/// Machine-word rationals; faster, but may overflow on deep computations.
pub type SmallQ = num_rational::Ratio<i64>;
