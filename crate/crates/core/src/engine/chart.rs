//! Real-vector charts over measurement bases.
//!
//! A parameter vector of length `n(n-1)` is read as one `(θ, φ)` pair per
//! index pair `i < j` (lexicographic order). The unitary is
//! `V0 · G_01 · G_02 · ... · G_{n-2,n-1}` where `G_ij` is the complex
//! Givens rotation
//!
//! ```text
//! col_i <- cos θ col_i + e^{iφ} sin θ col_j
//! col_j <- -e^{-iφ} sin θ col_i + cos θ col_j
//! ```
//!
//! Every unitary factors as such a product times a diagonal phase matrix on
//! the right, and those phases do not change the rank-1 projectors built
//! from the columns, so the chart reaches every projective measurement.

use num_complex::Complex64;

use crate::qstate::ComplexMatrix;

pub fn parameter_count(n: usize) -> usize {
    n * n.saturating_sub(1)
}

/// Applies the rotations encoded by `params` to the columns of `base`.
pub fn rotate(base: &ComplexMatrix, params: &[f64]) -> ComplexMatrix {
    let n = base.cols();
    debug_assert_eq!(params.len(), parameter_count(n));
    let mut u = base.clone();
    let mut k = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            let (s, c) = params[k].sin_cos();
            let phase = Complex64::from_polar(1.0, params[k + 1]);
            k += 2;
            for r in 0..u.rows() {
                let a = u[(r, i)];
                let b = u[(r, j)];
                u[(r, i)] = a * c + phase * b * s;
                u[(r, j)] = b * c - phase.conj() * a * s;
            }
        }
    }
    u
}

/// Element vectors of the measurement: the first `d` entries of each column.
pub fn measurement_vectors(u: &ComplexMatrix, d: usize) -> Vec<Vec<Complex64>> {
    (0..u.cols())
        .map(|j| (0..d).map(|i| u[(i, j)]).collect())
        .collect()
}
