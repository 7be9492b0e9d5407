//! Matrices, states, eigendecomposition and random ensembles.

pub mod density;
pub mod eig;
pub mod matrix;
pub mod random;

pub use density::{partial_trace, tensor, DensityMatrix, DEFAULT_TOL};
pub use eig::{eig_hermitian, eigvals_hermitian, EigenDecomposition};
pub use matrix::ComplexMatrix;
pub use random::{random_density, random_probabilities, random_unitary, SeededRng};
