use num_complex::Complex64;

use super::eig::eigvals_unchecked;
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// Validation tolerance used for states built internally from valid inputs.
pub const DEFAULT_TOL: f64 = 1e-10;

/// A Hermitian, unit-trace, positive-semidefinite matrix together with the
/// dimensions of the subsystems it is composed of.
///
/// Subsystem `k` of `dims` is the `k`-th tensor factor, with the last
/// factor varying fastest in the row-major index.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    dims: Vec<usize>,
    tol: f64,
}

impl DensityMatrix {
    /// Validates `matrix` against every density-matrix invariant at `tol`.
    ///
    /// The stored matrix is the Hermitian part of the input.
    pub fn new(matrix: ComplexMatrix, dims: Vec<usize>, tol: f64) -> Result<Self> {
        check_dims(&matrix, &dims)?;
        let deviation = matrix.hermiticity_deviation();
        if deviation > tol {
            return Err(Error::NotHermitian { deviation });
        }
        let matrix = matrix.hermitian_part();
        let tr = matrix.trace().re;
        if (tr - 1.0).abs() > tol {
            return Err(Error::Trace {
                deviation: (tr - 1.0).abs(),
            });
        }
        let min_eigenvalue = eigvals_unchecked(&matrix).first().copied().unwrap_or(0.0);
        if min_eigenvalue < -tol {
            return Err(Error::NotPositive { min_eigenvalue });
        }
        Ok(DensityMatrix { matrix, dims, tol })
    }

    /// Wraps a matrix that is a valid state by construction (a partial trace,
    /// a conjugation of a valid state, ...). Hermitizes and renormalizes.
    pub(crate) fn from_trusted(matrix: ComplexMatrix, dims: Vec<usize>) -> Self {
        debug_assert_eq!(matrix.rows(), dims.iter().product::<usize>());
        let matrix = matrix.hermitian_part();
        let tr = matrix.trace().re;
        let matrix = if tr > 0.0 { matrix.scale_real(1.0 / tr) } else { matrix };
        DensityMatrix {
            matrix,
            dims,
            tol: DEFAULT_TOL,
        }
    }

    /// `|psi><psi| / <psi|psi>`.
    pub fn pure(psi: &[Complex64], dims: Vec<usize>) -> Result<Self> {
        let norm_sqr: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if norm_sqr.is_nan() || norm_sqr <= 0.0 {
            return Err(Error::DimensionMismatch("zero state vector".into()));
        }
        let m = ComplexMatrix::outer(psi).scale_real(1.0 / norm_sqr);
        Self::new(m, dims, DEFAULT_TOL)
    }

    /// `I_d / d`.
    pub fn maximally_mixed(dims: Vec<usize>) -> Result<Self> {
        let d: usize = dims.iter().product();
        Self::new(ComplexMatrix::identity(d).scale_real(1.0 / d as f64), dims, DEFAULT_TOL)
    }

    /// A state diagonal in the computational basis.
    pub fn diagonal(probs: &[f64], dims: Vec<usize>) -> Result<Self> {
        Self::new(ComplexMatrix::diagonal(probs), dims, DEFAULT_TOL)
    }

    /// Reinterprets the state with a different subsystem split of the same
    /// total dimension.
    pub fn with_dims(mut self, dims: Vec<usize>) -> Result<Self> {
        check_dims(&self.matrix, &dims)?;
        self.dims = dims;
        Ok(self)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Total Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn num_subsystems(&self) -> usize {
        self.dims.len()
    }

    /// Fails with [`Error::Arity`] unless the state has `n` subsystems.
    pub fn expect_subsystems(&self, n: usize) -> Result<()> {
        if self.dims.len() != n {
            return Err(Error::Arity {
                expected: n,
                found: self.dims.len(),
            });
        }
        Ok(())
    }

    /// Kronecker product; subsystem dimensions concatenate.
    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        DensityMatrix {
            matrix: self.matrix.kron(&other.matrix),
            dims,
            tol: self.tol.max(other.tol),
        }
    }

    /// Reduced state on the subsystems in `keep`, in their original order.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let n = self.dims.len();
        if keep.is_empty() {
            return Err(Error::InvalidSubsystems("nothing to keep".into()));
        }
        let mut kept = keep.to_vec();
        kept.sort_unstable();
        kept.dedup();
        if kept.len() != keep.len() {
            return Err(Error::InvalidSubsystems(format!("duplicate index in {keep:?}")));
        }
        if let Some(&bad) = kept.iter().find(|&&k| k >= n) {
            return Err(Error::InvalidSubsystems(format!(
                "index {bad} out of range for {n} subsystems"
            )));
        }
        let traced: Vec<usize> = (0..n).filter(|k| !kept.contains(k)).collect();

        let strides = strides(&self.dims);
        let offsets = |subsystems: &[usize]| -> Vec<usize> {
            let sub_dims: Vec<usize> = subsystems.iter().map(|&k| self.dims[k]).collect();
            let total: usize = sub_dims.iter().product();
            (0..total)
                .map(|mut idx| {
                    let mut off = 0;
                    for (pos, &k) in subsystems.iter().enumerate().rev() {
                        off += (idx % sub_dims[pos]) * strides[k];
                        idx /= sub_dims[pos];
                    }
                    off
                })
                .collect()
        };
        let kept_off = offsets(&kept);
        let traced_off = offsets(&traced);

        let dk = kept_off.len();
        let mut out = ComplexMatrix::zeros(dk, dk);
        for (r, &ro) in kept_off.iter().enumerate() {
            for (c, &co) in kept_off.iter().enumerate() {
                out[(r, c)] = traced_off
                    .iter()
                    .map(|&t| self.matrix[(ro + t, co + t)])
                    .sum();
            }
        }
        let dims = kept.iter().map(|&k| self.dims[k]).collect();
        Ok(DensityMatrix {
            matrix: out.hermitian_part(),
            dims,
            tol: self.tol,
        })
    }

    /// Reorders subsystems: subsystem `order[k]` of `self` becomes subsystem
    /// `k` of the result.
    pub fn permute(&self, order: &[usize]) -> Result<DensityMatrix> {
        let n = self.dims.len();
        let mut check = order.to_vec();
        check.sort_unstable();
        if check != (0..n).collect::<Vec<_>>() {
            return Err(Error::InvalidSubsystems(format!(
                "{order:?} is not a permutation of {n} subsystems"
            )));
        }
        let old_strides = strides(&self.dims);
        let new_dims: Vec<usize> = order.iter().map(|&k| self.dims[k]).collect();
        let d = self.dim();
        // new flat index -> old flat index
        let map: Vec<usize> = (0..d)
            .map(|mut idx| {
                let mut old = 0;
                for pos in (0..n).rev() {
                    old += (idx % new_dims[pos]) * old_strides[order[pos]];
                    idx /= new_dims[pos];
                }
                old
            })
            .collect();
        let matrix = ComplexMatrix::from_fn(d, d, |i, j| self.matrix[(map[i], map[j])]);
        Ok(DensityMatrix {
            matrix,
            dims: new_dims,
            tol: self.tol,
        })
    }

    /// Exchanges the two halves of a bipartite state.
    pub fn swap(&self) -> Result<DensityMatrix> {
        self.expect_subsystems(2)?;
        self.permute(&[1, 0])
    }

    /// `U rho U^dagger` for a unitary on the full space.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Result<DensityMatrix> {
        if u.rows() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} unitary on a {}-dimensional state",
                u.rows(),
                u.cols(),
                self.dim()
            )));
        }
        u.ensure_unitary(1e-9)?;
        Ok(DensityMatrix::from_trusted(self.matrix.conjugate_by(u), self.dims.clone()))
    }

    /// `tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        let m = &self.matrix;
        m.as_slice().iter().map(|z| z.norm_sqr()).sum()
    }
}

fn check_dims(matrix: &ComplexMatrix, dims: &[usize]) -> Result<()> {
    if !matrix.is_square() {
        return Err(Error::NotSquare {
            rows: matrix.rows(),
            cols: matrix.cols(),
        });
    }
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::DimensionMismatch(format!(
            "subsystem dimensions {dims:?} must be nonempty and each >= 1"
        )));
    }
    let product: usize = dims.iter().product();
    if product != matrix.rows() {
        return Err(Error::DimensionMismatch(format!(
            "dims {dims:?} multiply to {product}, matrix side is {}",
            matrix.rows()
        )));
    }
    Ok(())
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

/// Kronecker product of two states.
pub fn tensor(a: &DensityMatrix, b: &DensityMatrix) -> DensityMatrix {
    a.tensor(b)
}

/// Reduced state on `keep`.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    rho.partial_trace(keep)
}
