//! Seeded random ensembles: Ginibre density matrices and Haar unitaries.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use super::density::DensityMatrix;
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// Deterministic random source: ChaCha20 keyed by a 64-bit seed.
///
/// The seed expands through `ChaCha20Rng::seed_from_u64`; independent
/// streams for the same seed are selected with the ChaCha stream counter,
/// so `(seed, stream)` pairs reproduce identical sequences on every
/// platform.
#[derive(Debug, Clone)]
pub struct SeededRng {
    seed: u64,
    inner: ChaCha20Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    /// Independent stream `stream` derived from `seed`.
    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha20Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        SeededRng { seed, inner }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn uniform(&mut self) -> f64 {
        self.inner.random::<f64>()
    }

    pub fn normal(&mut self) -> f64 {
        self.inner.sample(StandardNormal)
    }

    /// Standard complex Gaussian, `E|z|^2 = 1`.
    pub fn complex_normal(&mut self) -> Complex64 {
        let re = self.normal();
        let im = self.normal();
        Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.random()
    }
}

/// A `rows x cols` matrix of i.i.d. standard complex Gaussians.
pub fn ginibre(rows: usize, cols: usize, rng: &mut SeededRng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| rng.complex_normal())
}

/// `G G^dagger / tr(G G^dagger)` with `G` a `d x rank` Ginibre matrix.
pub fn random_density(d: usize, rank: usize, rng: &mut SeededRng) -> Result<DensityMatrix> {
    if rank == 0 || rank > d {
        return Err(Error::RankOutOfRange { rank, dim: d });
    }
    let g = ginibre(d, rank, rng);
    let w = g.matmul(&g.adjoint());
    let tr = w.trace().re;
    DensityMatrix::new(w.scale_real(1.0 / tr), vec![d], 1e-10)
}

/// Haar-distributed unitary from the QR factorization of a Ginibre matrix,
/// with the phases of `R`'s diagonal moved into `Q`.
pub fn random_unitary(d: usize, rng: &mut SeededRng) -> ComplexMatrix {
    let g = ginibre(d, d, rng).to_nalgebra();
    let qr = g.qr();
    let q = qr.q();
    let r = qr.r();
    let mut u = ComplexMatrix::from_nalgebra(&q);
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 {
            rjj / rjj.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..d {
            u[(i, j)] *= phase;
        }
    }
    u
}

/// A random point on the probability simplex (flat Dirichlet).
pub fn random_probabilities(n: usize, rng: &mut SeededRng) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| -(1.0 - rng.uniform()).ln()).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::eig::eig_hermitian;

    #[test]
    fn one_dimensional_state_is_one() {
        let rho = random_density(1, 1, &mut SeededRng::new(3)).unwrap();
        assert!((rho.matrix()[(0, 0)] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn full_rank_state_spectrum() {
        let rho = random_density(4, 4, &mut SeededRng::new(11)).unwrap();
        let vals = eig_hermitian(rho.matrix()).unwrap().eigenvalues;
        assert!(vals.iter().all(|&l| l > 0.0));
        assert!((vals.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rank_one_state_is_pure() {
        let rho = random_density(3, 1, &mut SeededRng::new(5)).unwrap();
        let purity = rho.matrix().matmul(rho.matrix()).trace().re;
        assert!((purity - 1.0).abs() < 1e-10);
    }

    #[test]
    fn rank_out_of_range() {
        let mut rng = SeededRng::new(0);
        assert!(matches!(random_density(3, 0, &mut rng), Err(Error::RankOutOfRange { .. })));
        assert!(matches!(random_density(3, 4, &mut rng), Err(Error::RankOutOfRange { .. })));
    }

    #[test]
    fn unitary_scalar_and_determinant() {
        let u = random_unitary(1, &mut SeededRng::new(1));
        assert!((u[(0, 0)].norm() - 1.0).abs() < 1e-12);

        let u = random_unitary(2, &mut SeededRng::new(2));
        let det = u[(0, 0)] * u[(1, 1)] - u[(0, 1)] * u[(1, 0)];
        assert!((det.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn unitary_columns_orthonormal() {
        let u = random_unitary(4, &mut SeededRng::new(9));
        for a in 0..4 {
            for b in 0..4 {
                let ip: Complex64 = (0..4).map(|i| u[(i, a)].conj() * u[(i, b)]).sum();
                let expected = if a == b { 1.0 } else { 0.0 };
                assert!((ip - Complex64::new(expected, 0.0)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<u64> = (0..4).map(|_| SeededRng::with_stream(7, 2).next_u64()).collect();
        assert!(a.windows(2).all(|w| w[0] == w[1]));
        let mut s0 = SeededRng::with_stream(7, 0);
        let mut s1 = SeededRng::with_stream(7, 1);
        assert_ne!(s0.next_u64(), s1.next_u64());
    }
}
