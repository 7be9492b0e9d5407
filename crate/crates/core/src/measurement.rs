//! Rank-1 measurements on the second subsystem of a bipartite state and the
//! ensembles of conditional states they produce.

use num_complex::Complex64;

use crate::entropy::{von_neumann, weighted_block_entropy, ProbabilityVector};
use crate::error::{Error, Result};
use crate::qstate::eig::{eig_hermitian, eigvals_unchecked};
use crate::qstate::{ComplexMatrix, DensityMatrix};

/// Completeness and rank tolerance for POVMs.
pub const POVM_TOL: f64 = 1e-9;
/// Outcomes with probability at or below this are treated as never occurring.
pub const NEGLIGIBLE_PROB: f64 = 1e-12;
/// Index of the measured subsystem in a bipartite state.
pub const MEASURED_SUBSYSTEM: usize = 1;

/// A rank-1 POVM `{|v_i><v_i|}` with `Σ_i |v_i><v_i| = I`.
///
/// Elements are stored as their (generally subnormalized) vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    vectors: Vec<Vec<Complex64>>,
    subsystem: usize,
}

impl Povm {
    /// Builds a POVM from the vectors `v_i` of its elements `|v_i><v_i|`.
    pub fn from_vectors(vectors: Vec<Vec<Complex64>>) -> Result<Self> {
        let d = vectors.first().map_or(0, Vec::len);
        if d == 0 || vectors.iter().any(|v| v.len() != d) {
            return Err(Error::InvalidPovm("elements must share a nonzero dimension".into()));
        }
        let povm = Povm {
            vectors,
            subsystem: MEASURED_SUBSYSTEM,
        };
        let deviation = povm.completeness_deviation();
        if deviation > POVM_TOL {
            return Err(Error::InvalidPovm(format!(
                "elements sum to identity only within {deviation:e}"
            )));
        }
        Ok(povm)
    }

    /// Builds a POVM from element matrices, checking each is PSD with rank 1.
    pub fn from_elements(elements: &[ComplexMatrix]) -> Result<Self> {
        let mut vectors = Vec::with_capacity(elements.len());
        for (i, e) in elements.iter().enumerate() {
            let eig = eig_hermitian(e)?;
            let n = eig.eigenvalues.len();
            let top = eig.eigenvalues[n - 1];
            if eig.eigenvalues[0] < -POVM_TOL {
                return Err(Error::InvalidPovm(format!("element {i} is not positive")));
            }
            if n > 1 && eig.eigenvalues[n - 2] > POVM_TOL {
                return Err(Error::InvalidPovm(format!("element {i} has rank above 1")));
            }
            let scale = top.max(0.0).sqrt();
            vectors.push(eig.eigenvector(n - 1).into_iter().map(|z| z * scale).collect());
        }
        Self::from_vectors(vectors)
    }

    pub(crate) fn from_vectors_trusted(vectors: Vec<Vec<Complex64>>) -> Self {
        Povm {
            vectors,
            subsystem: MEASURED_SUBSYSTEM,
        }
    }

    pub fn dim(&self) -> usize {
        self.vectors[0].len()
    }

    pub fn outcome_count(&self) -> usize {
        self.vectors.len()
    }

    pub fn subsystem(&self) -> usize {
        self.subsystem
    }

    pub fn vectors(&self) -> &[Vec<Complex64>] {
        &self.vectors
    }

    pub fn elements(&self) -> Vec<ComplexMatrix> {
        self.vectors.iter().map(|v| ComplexMatrix::outer(v)).collect()
    }

    /// Largest entrywise modulus of `Σ_i Π_i - I`.
    pub fn completeness_deviation(&self) -> f64 {
        let d = self.dim();
        let sum = ComplexMatrix::from_fn(d, d, |i, j| {
            self.vectors.iter().map(|v| v[i] * v[j].conj()).sum()
        });
        sum.max_abs_diff(&ComplexMatrix::identity(d))
    }

    /// True when every element is a rank-1 projector onto mutually
    /// orthogonal unit vectors.
    pub fn is_projective(&self) -> bool {
        self.outcome_count() == self.dim()
            && self
                .vectors
                .iter()
                .all(|v| (v.iter().map(|z| z.norm_sqr()).sum::<f64>() - 1.0).abs() <= POVM_TOL)
    }

    /// The same POVM with its elements reordered.
    pub fn permuted(&self, order: &[usize]) -> Result<Povm> {
        let mut check = order.to_vec();
        check.sort_unstable();
        if check != (0..self.outcome_count()).collect::<Vec<_>>() {
            return Err(Error::InvalidPovm(format!("{order:?} is not a permutation")));
        }
        Ok(Povm {
            vectors: order.iter().map(|&k| self.vectors[k].clone()).collect(),
            subsystem: self.subsystem,
        })
    }
}

/// Projectors onto the columns of a unitary.
pub fn projective_from_unitary(u: &ComplexMatrix) -> Result<Povm> {
    u.ensure_unitary(POVM_TOL)?;
    Ok(Povm::from_vectors_trusted(
        (0..u.cols()).map(|j| u.column(j)).collect(),
    ))
}

/// Rank-1 POVM realized by a projective measurement on an extended space:
/// for a `K x K` unitary `W` and `d <= K`, the vectors are the first `d`
/// entries of each column of `W`.
pub fn neumark_povm(w: &ComplexMatrix, d: usize) -> Result<Povm> {
    w.ensure_unitary(POVM_TOL)?;
    if d == 0 || d > w.rows() {
        return Err(Error::InvalidPovm(format!(
            "cannot compress a {}-dimensional unitary to dimension {d}",
            w.rows()
        )));
    }
    Ok(Povm::from_vectors_trusted(
        (0..w.cols()).map(|j| w.column(j)[..d].to_vec()).collect(),
    ))
}

/// Qubit projective measurement onto `cos(θ/2)|0> + e^{iφ} sin(θ/2)|1>`
/// and its orthogonal complement.
pub fn bloch_projective(theta: f64, phi: f64) -> Povm {
    let (s, c) = (0.5 * theta).sin_cos();
    let phase = Complex64::from_polar(1.0, phi);
    let up = vec![Complex64::new(c, 0.0), phase * s];
    let down = vec![Complex64::new(-s, 0.0), phase * c];
    Povm::from_vectors_trusted(vec![up, down])
}

/// `(I_A ⊗ <left|) rho (I_A ⊗ |right>)` for a bipartite `rho`.
pub(crate) fn b_block(
    rho: &ComplexMatrix,
    d_a: usize,
    d_b: usize,
    left: &[Complex64],
    right: &[Complex64],
) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(d_a, d_a);
    for a in 0..d_a {
        for a2 in 0..d_a {
            let mut acc = Complex64::new(0.0, 0.0);
            for (b, l) in left.iter().enumerate() {
                let row = a * d_b + b;
                let mut inner = Complex64::new(0.0, 0.0);
                for (b2, r) in right.iter().enumerate() {
                    inner += rho[(row, a2 * d_b + b2)] * r;
                }
                acc += l.conj() * inner;
            }
            out[(a, a2)] = acc;
        }
    }
    out
}

fn check_compatible(rho_ab: &DensityMatrix, povm: &Povm) -> Result<(usize, usize)> {
    rho_ab.expect_subsystems(2)?;
    let (d_a, d_b) = (rho_ab.dims()[0], rho_ab.dims()[1]);
    if povm.dim() != d_b {
        return Err(Error::DimensionMismatch(format!(
            "POVM on dimension {} applied to a subsystem of dimension {d_b}",
            povm.dim()
        )));
    }
    Ok((d_a, d_b))
}

/// One outcome of a measurement on B.
#[derive(Debug, Clone)]
pub struct ConditionalState {
    /// `ρ_{A|i}`; the maximally mixed placeholder when `negligible`.
    pub state: DensityMatrix,
    /// Set when `p_i <= NEGLIGIBLE_PROB`; such outcomes carry no weight.
    pub negligible: bool,
}

/// Outcome probabilities and the conditional states of A.
#[derive(Debug, Clone)]
pub struct ConditionalEnsemble {
    pub probs: ProbabilityVector,
    pub states: Vec<ConditionalState>,
}

impl ConditionalEnsemble {
    pub fn outcome_count(&self) -> usize {
        self.states.len()
    }

    /// `Σ_i p_i ρ_{A|i}`, which must equal the marginal `ρ_A`.
    pub fn mixture(&self) -> ComplexMatrix {
        let d = self.states[0].state.dim();
        self.probs
            .as_slice()
            .iter()
            .zip(&self.states)
            .filter(|(_, s)| !s.negligible)
            .fold(ComplexMatrix::zeros(d, d), |acc, (&p, s)| {
                &acc + &s.state.matrix().scale_real(p)
            })
    }

    /// `Σ_i p_i H(ρ_{A|i})`, skipping negligible outcomes.
    pub fn average_entropy(&self) -> Result<f64> {
        let mut total = 0.0;
        for (&p, s) in self.probs.as_slice().iter().zip(&self.states) {
            if !s.negligible {
                total += p * von_neumann(&s.state)?;
            }
        }
        Ok(total)
    }
}

/// Outcome probabilities `p_i = tr[(I ⊗ Π_i) ρ]` and conditional states
/// `ρ_{A|i} = tr_B[(I ⊗ Π_i) ρ] / p_i`.
pub fn post_measurement_ensemble(rho_ab: &DensityMatrix, povm: &Povm) -> Result<ConditionalEnsemble> {
    let (d_a, d_b) = check_compatible(rho_ab, povm)?;
    let mut probs = Vec::with_capacity(povm.outcome_count());
    let mut states = Vec::with_capacity(povm.outcome_count());
    for v in povm.vectors() {
        let block = b_block(rho_ab.matrix(), d_a, d_b, v, v);
        let p = block.trace().re.max(0.0);
        probs.push(p);
        if p > NEGLIGIBLE_PROB {
            states.push(ConditionalState {
                state: DensityMatrix::from_trusted(block, vec![d_a]),
                negligible: false,
            });
        } else {
            states.push(ConditionalState {
                state: DensityMatrix::maximally_mixed(vec![d_a])?,
                negligible: true,
            });
        }
    }
    let total: f64 = probs.iter().sum();
    let probs = ProbabilityVector::new(probs.clone())
        .or_else(|_| {
            if (total - 1.0).abs() <= POVM_TOL {
                Ok(ProbabilityVector::unnormalized(probs))
            } else {
                Err(Error::Internal(format!("outcome probabilities sum to {total}")))
            }
        })?;
    Ok(ConditionalEnsemble { probs, states })
}

/// `Σ_i p_i H(ρ_{A|i})` for the measurement `povm` on B.
pub fn measured_conditional_entropy(rho_ab: &DensityMatrix, povm: &Povm) -> Result<f64> {
    post_measurement_ensemble(rho_ab, povm)?.average_entropy()
}

/// Measured conditional entropy straight from the element vectors, without
/// building validated conditional states. Used inside optimizer loops.
pub(crate) fn measured_entropy_fast(
    rho: &ComplexMatrix,
    d_a: usize,
    d_b: usize,
    vectors: &[Vec<Complex64>],
) -> f64 {
    vectors
        .iter()
        .map(|v| {
            let block = b_block(rho, d_a, d_b, v, v);
            let p = block.trace().re;
            if p <= NEGLIGIBLE_PROB {
                0.0
            } else {
                weighted_block_entropy(&eigvals_unchecked(&block), p)
            }
        })
        .sum()
}
