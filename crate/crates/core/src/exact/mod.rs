//! Exact arithmetic on sums of square roots of rationals.

mod matrix;
pub(crate) mod primes;
mod radical;
mod sparse;
mod sum;

pub use matrix::{axpy, dot, gram_schmidt, orthogonalize, scale_vec, ExactMatrix};
pub use radical::Radical;
pub use sparse::SparseMatrix;
pub use sum::RadicalSum;
