//! Hermitian eigendecomposition.
//!
//! Backed by nalgebra's tridiagonalization + implicit QR solver. Results are
//! re-sorted ascending and the eigenvector columns permuted to match.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// Hermiticity tolerance accepted by [`eig_hermitian`], relative to the
/// largest entry (absolute for matrices with entries below 1).
pub const HERMITIAN_TOL: f64 = 1e-10;

const MAX_SWEEPS_PER_DIM: usize = 1000;

/// Ascending eigenvalues with matching orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// `V diag(λ) V^dagger`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let n = v.rows();
        ComplexMatrix::from_fn(n, n, |i, j| {
            self.eigenvalues
                .iter()
                .enumerate()
                .map(|(k, &l)| v[(i, k)] * v[(j, k)].conj() * l)
                .sum()
        })
    }

    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        self.eigenvectors.column(k)
    }
}

fn check_hermitian(m: &ComplexMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let deviation = m.hermiticity_deviation();
    if deviation > HERMITIAN_TOL * m.max_abs().max(1.0) {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(())
}

/// Full eigendecomposition of a Hermitian matrix.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<EigenDecomposition> {
    check_hermitian(m)?;
    let n = m.rows();
    if n == 0 {
        return Ok(EigenDecomposition {
            eigenvalues: Vec::new(),
            eigenvectors: ComplexMatrix::zeros(0, 0),
        });
    }
    let eig = m
        .hermitian_part()
        .to_nalgebra()
        .try_symmetric_eigen(f64::EPSILON, MAX_SWEEPS_PER_DIM * n)
        .ok_or(Error::NoConvergence { dim: n })?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors: ComplexMatrix::from_nalgebra(&vectors),
    })
}

/// Ascending eigenvalues only.
pub fn eigvals_hermitian(m: &ComplexMatrix) -> Result<Vec<f64>> {
    check_hermitian(m)?;
    Ok(eigvals_unchecked(m))
}

/// Eigenvalues of a matrix already known to be Hermitian; only the lower
/// triangle is read.
pub(crate) fn eigvals_unchecked(m: &ComplexMatrix) -> Vec<f64> {
    let n = m.rows();
    match n {
        0 => Vec::new(),
        1 => vec![m[(0, 0)].re],
        2 => {
            let a = m[(0, 0)].re;
            let d = m[(1, 1)].re;
            let b = m[(1, 0)].norm();
            let mean = 0.5 * (a + d);
            let radius = (0.25 * (a - d) * (a - d) + b * b).sqrt();
            vec![mean - radius, mean + radius]
        }
        _ => {
            let mut vals: Vec<f64> = m.to_nalgebra().symmetric_eigenvalues().iter().copied().collect();
            vals.sort_by(f64::total_cmp);
            vals
        }
    }
}
