//! Base-2 Shannon and von Neumann entropies and the information quantities
//! built from them.

use crate::error::{Error, Result};
use crate::qstate::eig::eigvals_unchecked;
use crate::qstate::DensityMatrix;

/// Entries above `-PROB_CLIP` are clipped to zero on construction.
pub const PROB_CLIP: f64 = 1e-12;
/// Allowed deviation of a probability vector's sum from one.
pub const PROB_SUM_TOL: f64 = 1e-10;
/// Eigenvalues in `[-EIGEN_CLIP, 0]` are treated as zero; anything more
/// negative is rejected.
pub const EIGEN_CLIP: f64 = 1e-10;
/// Eigenvalues at or below this contribute nothing to an entropy.
pub const LOG_FLOOR: f64 = 1e-12;

/// A normalized discrete distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector(Vec<f64>);

impl ProbabilityVector {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        let mut probs = probs;
        for p in probs.iter_mut() {
            if !p.is_finite() || *p < -PROB_CLIP {
                return Err(Error::InvalidProbabilities(format!("entry {p} is negative")));
            }
            *p = p.max(0.0);
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::InvalidProbabilities(format!("sum is {total}")));
        }
        Ok(ProbabilityVector(probs))
    }

    /// Builds the vector without the sum check; entries are still clipped.
    pub(crate) fn unnormalized(probs: Vec<f64>) -> Self {
        ProbabilityVector(probs.into_iter().map(|p| p.max(0.0)).collect())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[inline]
fn plogp(p: f64) -> f64 {
    if p <= LOG_FLOOR {
        0.0
    } else {
        p * p.log2()
    }
}

/// `-Σ p log2 p`, with `0 log 0 = 0`.
pub fn shannon(p: &ProbabilityVector) -> f64 {
    -p.0.iter().map(|&x| plogp(x)).sum::<f64>()
}

/// Shannon entropy of a spectrum after the eigenvalue clipping rule.
pub fn spectrum_entropy(eigenvalues: &[f64]) -> Result<f64> {
    if let Some(&bad) = eigenvalues.iter().find(|&&l| l < -EIGEN_CLIP) {
        return Err(Error::NotPositive { min_eigenvalue: bad });
    }
    Ok(-eigenvalues.iter().map(|&l| plogp(l)).sum::<f64>())
}

/// `-tr(rho log2 rho)`.
pub fn von_neumann(rho: &DensityMatrix) -> Result<f64> {
    spectrum_entropy(&eigvals_unchecked(rho.matrix()))
}

fn marginal_entropy(rho: &DensityMatrix, keep: &[usize]) -> Result<f64> {
    von_neumann(&rho.partial_trace(keep)?)
}

/// `H(A) + H(B) - H(AB)`.
pub fn mutual_information(rho_ab: &DensityMatrix) -> Result<f64> {
    rho_ab.expect_subsystems(2)?;
    Ok(marginal_entropy(rho_ab, &[0])? + marginal_entropy(rho_ab, &[1])? - von_neumann(rho_ab)?)
}

/// `H(AB) - H(B)`; negative for some entangled states.
pub fn conditional_entropy(rho_ab: &DensityMatrix) -> Result<f64> {
    rho_ab.expect_subsystems(2)?;
    Ok(von_neumann(rho_ab)? - marginal_entropy(rho_ab, &[1])?)
}

/// `H(AB) + H(BC) - H(ABC) - H(B)`, the strong-subadditivity gap of a
/// tripartite state ordered `A, B, C`.
///
/// Reported as computed; tiny negative values from rounding are not clipped.
pub fn ssa_quantity(rho_abc: &DensityMatrix) -> Result<f64> {
    rho_abc.expect_subsystems(3)?;
    Ok(marginal_entropy(rho_abc, &[0, 1])? + marginal_entropy(rho_abc, &[1, 2])?
        - von_neumann(rho_abc)?
        - marginal_entropy(rho_abc, &[1])?)
}

/// `p H(sigma / p)` for an unnormalized positive block `sigma` with trace
/// `p`, expressed through the eigenvalues of `sigma`:
/// `-Σ μ log2 μ + p log2 p`.
pub(crate) fn weighted_block_entropy(block_eigenvalues: &[f64], weight: f64) -> f64 {
    -block_eigenvalues.iter().map(|&m| plogp(m)).sum::<f64>() + plogp(weight)
}
