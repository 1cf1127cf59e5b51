//! Exact SO(5) ⊃ SU(2)×SU(2) Clebsch-Gordan coefficients, their isospin and
//! angular-momentum reductions, and a content-addressed table store.

pub mod batch;
pub mod chain;
pub mod error;
pub mod exact;
pub mod format;
pub mod halfint;
pub mod racah;
pub mod so4;
pub mod so5;
pub mod store;
pub mod su2;

pub use error::{Error, Result};
pub use exact::{ExactMatrix, Radical, RadicalSum};
pub use halfint::HalfInt;
pub use so4::So4Irrep;
pub use so5::So5Irrep;
