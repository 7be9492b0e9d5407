//! Recording a measurement on B in a fresh apparatus system C.
//!
//! For a basis `{|e_j>}` of B and the computational basis `{|f_j>}` of C,
//!
//! ```text
//! ρ'_ABC = Σ_{j,k} <e_j|ρ_AB|e_k> ⊗ |e_j><e_k| ⊗ |f_j><f_k|
//! ```
//!
//! where `<e_j|ρ_AB|e_k>` is the `dA x dA` block `(I ⊗ <e_j|) ρ_AB (I ⊗ |e_k>)`.
//! The map `|a, e_j> -> |a, e_j, f_j>` is an isometry, so `ρ'_ABC` has the
//! spectrum of `ρ_AB` padded with zeros. Its marginals satisfy
//!
//! ```text
//! H(ρ'_AB) = H(p) + Σ_j p_j H(ρ_{A|j}),   H(ρ'_BC) = H(ρ_B),   H(ρ'_B) = H(p)
//! ```
//!
//! and so strong subadditivity on `ρ'_ABC` reduces to
//! `Σ_j p_j H(ρ_{A|j}) >= H(AB) - H(B)`.

use crate::entropy::{shannon, von_neumann};
use crate::error::{Error, Result};
use crate::measurement::{b_block, post_measurement_ensemble, projective_from_unitary, POVM_TOL};
use crate::qstate::{ComplexMatrix, DensityMatrix};

/// `ρ'_ABC` together with the measurement basis that produced it.
#[derive(Debug, Clone)]
pub struct ApparatusExtension {
    /// Tripartite state with dims `[dA, dB, dB]`.
    pub rho_abc: DensityMatrix,
    /// Unitary whose columns are the measured basis `|e_j>` of B.
    pub measurement_basis: ComplexMatrix,
}

pub fn extend_with_apparatus(rho_ab: &DensityMatrix, basis: &ComplexMatrix) -> Result<ApparatusExtension> {
    rho_ab.expect_subsystems(2)?;
    let (d_a, d_b) = (rho_ab.dims()[0], rho_ab.dims()[1]);
    if basis.rows() != d_b || basis.cols() != d_b {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} basis for a subsystem of dimension {d_b}",
            basis.rows(),
            basis.cols()
        )));
    }
    basis.ensure_unitary(POVM_TOL)?;

    let e: Vec<_> = (0..d_b).map(|j| basis.column(j)).collect();
    let blocks: Vec<Vec<ComplexMatrix>> = (0..d_b)
        .map(|j| (0..d_b).map(|k| b_block(rho_ab.matrix(), d_a, d_b, &e[j], &e[k])).collect())
        .collect();

    // index (a, b, c) -> a dB dC + b dC + c with dC = dB; only c selects a block
    let d_c = d_b;
    let n = d_a * d_b * d_c;
    let m = ComplexMatrix::from_fn(n, n, |row, col| {
        let (a, b, c) = (row / (d_b * d_c), (row / d_c) % d_b, row % d_c);
        let (a2, b2, c2) = (col / (d_b * d_c), (col / d_c) % d_b, col % d_c);
        blocks[c][c2][(a, a2)] * e[c][b] * e[c2][b2].conj()
    });
    Ok(ApparatusExtension {
        rho_abc: DensityMatrix::from_trusted(m, vec![d_a, d_b, d_c]),
        measurement_basis: basis.clone(),
    })
}

/// Entropies of `ρ'_ABC` and its marginals next to the closed forms they
/// must equal.
#[derive(Debug, Clone, PartialEq)]
pub struct ProofIdentityReport {
    pub h_abc: f64,
    pub h_ab_reduced: f64,
    pub h_bc_reduced: f64,
    pub h_b_reduced: f64,
    /// `H(ρ_AB)`, the target for `h_abc`.
    pub target_h_ab: f64,
    /// `H(p) + Σ_j p_j H(ρ_{A|j})`, the target for `h_ab_reduced`.
    pub target_h_p_plus_average: f64,
    /// `H(ρ_B)`, the target for `h_bc_reduced`.
    pub target_h_b: f64,
    /// `H(p)`, the target for `h_b_reduced`.
    pub target_h_p: f64,
    pub max_deviation: f64,
    /// `h_ab_reduced + h_bc_reduced - h_abc - h_b_reduced`.
    pub ssa_gap: f64,
    /// `Σ_j p_j H(ρ_{A|j}) - (H(ρ_AB) - H(ρ_B))`, which `ssa_gap` must equal.
    pub measured_minus_conditional: f64,
}

pub fn verify_proof_identities(rho_ab: &DensityMatrix, basis: &ComplexMatrix) -> Result<ProofIdentityReport> {
    let ext = extend_with_apparatus(rho_ab, basis)?;
    let abc = &ext.rho_abc;
    let h_abc = von_neumann(abc)?;
    let h_ab_reduced = von_neumann(&abc.partial_trace(&[0, 1])?)?;
    let h_bc_reduced = von_neumann(&abc.partial_trace(&[1, 2])?)?;
    let h_b_reduced = von_neumann(&abc.partial_trace(&[1])?)?;

    let ensemble = post_measurement_ensemble(rho_ab, &projective_from_unitary(basis)?)?;
    let h_p = shannon(&ensemble.probs);
    let average = ensemble.average_entropy()?;
    let target_h_ab = von_neumann(rho_ab)?;
    let target_h_b = von_neumann(&rho_ab.partial_trace(&[1])?)?;

    let max_deviation = [
        (h_abc - target_h_ab).abs(),
        (h_ab_reduced - (h_p + average)).abs(),
        (h_bc_reduced - target_h_b).abs(),
        (h_b_reduced - h_p).abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max);

    Ok(ProofIdentityReport {
        h_abc,
        h_ab_reduced,
        h_bc_reduced,
        h_b_reduced,
        target_h_ab,
        target_h_p_plus_average: h_p + average,
        target_h_b,
        target_h_p: h_p,
        max_deviation,
        ssa_gap: h_ab_reduced + h_bc_reduced - h_abc - h_b_reduced,
        measured_minus_conditional: average - (target_h_ab - target_h_b),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::eig::eigvals_hermitian;
    use crate::qstate::{random_density, random_unitary, SeededRng};
    use num_complex::Complex64;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn bell() -> DensityMatrix {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let z = Complex64::new(0.0, 0.0);
        DensityMatrix::pure(&[h, z, z, h], vec![2, 2]).unwrap()
    }

    #[test]
    fn bell_becomes_ghz() {
        let ext = extend_with_apparatus(&bell(), &ComplexMatrix::identity(2)).unwrap();
        let mut ghz = vec![Complex64::new(0.0, 0.0); 8];
        ghz[0] = Complex64::new(FRAC_1_SQRT_2, 0.0);
        ghz[7] = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let expected = ComplexMatrix::outer(&ghz);
        assert!(ext.rho_abc.matrix().max_abs_diff(&expected) < 1e-15);
        assert_eq!(ext.rho_abc.dims(), &[2, 2, 2]);
    }

    #[test]
    fn single_block_product() {
        let mut rng = SeededRng::new(2);
        let a = random_density(3, 3, &mut rng).unwrap();
        let u = random_unitary(2, &mut rng);
        let e0 = DensityMatrix::pure(&u.column(0), vec![2]).unwrap();
        let ext = extend_with_apparatus(&a.tensor(&e0), &u).unwrap();
        let f0 = DensityMatrix::diagonal(&[1.0, 0.0], vec![2]).unwrap();
        let expected = a.tensor(&e0).tensor(&f0);
        assert!(ext.rho_abc.matrix().max_abs_diff(expected.matrix()) < 1e-12);
    }

    #[test]
    fn spectrum_is_preserved() {
        let mut rng = SeededRng::new(17);
        let rho = random_density(6, 4, &mut rng).unwrap().with_dims(vec![3, 2]).unwrap();
        let ext = extend_with_apparatus(&rho, &random_unitary(2, &mut rng)).unwrap();
        let mut original = eigvals_hermitian(rho.matrix()).unwrap();
        let extended = eigvals_hermitian(ext.rho_abc.matrix()).unwrap();
        original.splice(0..0, std::iter::repeat_n(0.0, extended.len() - original.len()));
        for (x, y) in original.iter().zip(&extended) {
            assert!((x - y).abs() < 1e-9);
        }
        assert!((ext.rho_abc.purity() - rho.purity()).abs() < 1e-9);
    }

    #[test]
    fn dephased_marginal() {
        let mut rng = SeededRng::new(23);
        let rho = random_density(4, 4, &mut rng).unwrap().with_dims(vec![2, 2]).unwrap();
        let u = random_unitary(2, &mut rng);
        let ext = extend_with_apparatus(&rho, &u).unwrap();
        let ab = ext.rho_abc.partial_trace(&[0, 1]).unwrap();
        // Σ_j (I ⊗ P_j) ρ (I ⊗ P_j)
        let mut dephased = ComplexMatrix::zeros(4, 4);
        for j in 0..2 {
            let p = ComplexMatrix::identity(2).kron(&ComplexMatrix::outer(&u.column(j)));
            dephased = &dephased + &p.matmul(rho.matrix()).matmul(&p);
        }
        assert!(ab.matrix().max_abs_diff(&dephased) < 1e-9);
    }

    #[test]
    fn bell_report() {
        let r = verify_proof_identities(&bell(), &ComplexMatrix::identity(2)).unwrap();
        assert!(r.max_deviation < 1e-9);
        assert!((r.ssa_gap - 1.0).abs() < 1e-8);
        assert!((r.measured_minus_conditional - 1.0).abs() < 1e-8);
    }

    #[test]
    fn product_report() {
        let mut rng = SeededRng::new(31);
        let rho = random_density(2, 2, &mut rng)
            .unwrap()
            .tensor(&random_density(3, 3, &mut rng).unwrap());
        let r = verify_proof_identities(&rho, &random_unitary(3, &mut rng)).unwrap();
        assert!(r.max_deviation <= 1e-9);
        assert!(r.ssa_gap.abs() < 1e-8);
    }

    #[test]
    fn rejects_bad_basis() {
        let bad = ComplexMatrix::from_real(2, 2, &[1.0, 1.0, 0.0, 1.0]).unwrap();
        assert!(matches!(extend_with_apparatus(&bell(), &bad), Err(Error::NotUnitary { .. })));
        assert!(matches!(
            extend_with_apparatus(&bell(), &ComplexMatrix::identity(3)),
            Err(Error::DimensionMismatch(_))
        ));
    }
}
