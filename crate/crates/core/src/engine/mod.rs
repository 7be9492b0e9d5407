//! Quantum discord by multi-start minimization of the measured conditional
//! entropy over measurements on B.
//!
//! For a bipartite state the engine evaluates
//!
//! ```text
//! J(A:B) = H(A) - min_Π Σ_i p_i H(ρ_{A|i})
//! D(A:B) = I(A:B) - J(A:B) = H(B) - H(AB) + min_Π Σ_i p_i H(ρ_{A|i})
//! ```
//!
//! The minimum is taken over rank-1 measurements, searched with Nelder–Mead
//! from Haar-random starting bases. The reported discord is an upper bound on
//! the true value: a missed global minimum can only make it larger.

pub mod chart;
mod oracle;
pub mod simplex;

use rayon::prelude::*;

pub use oracle::brute_force_min_conditional_entropy;

use crate::entropy::{mutual_information, von_neumann};
use crate::error::{Error, Result};
use crate::measurement::{measured_conditional_entropy, measured_entropy_fast, Povm, POVM_TOL};
use crate::qstate::{random_unitary, ComplexMatrix, DensityMatrix, SeededRng};
use simplex::{minimize, SimplexOptions};

/// Search settings for [`discord`].
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    /// Number of independent Haar-random starts.
    pub starts: usize,
    /// Simplex iteration budget per start.
    pub max_iterations: usize,
    /// Number of best starts that continue searching after every start has
    /// spent `max_iterations`.
    pub refine_top: usize,
    /// Additional simplex iterations for each refined start.
    pub refine_iterations: usize,
    /// Convergence tolerance on the objective, in bits.
    pub tol: f64,
    /// `None` searches projective measurements (`dB` outcomes). `Some(k)` with
    /// `dB <= k <= dB²` searches rank-1 POVMs with `k` outcomes realized as a
    /// projective measurement on a `k`-dimensional extension of B.
    pub outcome_count: Option<usize>,
    pub seed: u64,
    /// Grid resolution per Bloch angle for the brute-force oracle.
    pub grid_resolution: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            starts: 32,
            max_iterations: 500,
            refine_top: 4,
            refine_iterations: 10_000,
            tol: 1e-9,
            outcome_count: None,
            seed: 0,
            grid_resolution: 256,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.starts == 0 || self.max_iterations == 0 || self.grid_resolution == 0 {
            return Err(Error::InvalidConfig("counts must be at least 1".into()));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::InvalidConfig(format!("tol must be positive, got {}", self.tol)));
        }
        Ok(())
    }

    fn search_dimension(&self, d_b: usize) -> Result<usize> {
        match self.outcome_count {
            None => Ok(d_b),
            Some(k) if (d_b..=d_b * d_b).contains(&k) => Ok(k),
            Some(k) => Err(Error::InvalidConfig(format!(
                "outcome count {k} outside [{d_b}, {}]",
                d_b * d_b
            ))),
        }
    }
}

/// Which family of measurements the search ran over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasurementFamily {
    Projective,
    Povm { outcomes: usize },
}

#[derive(Debug, Clone)]
pub struct DiscordResult {
    pub discord: f64,
    pub classical_correlations: f64,
    pub mutual_information: f64,
    pub optimal_povm: Povm,
    pub min_measured_conditional_entropy: f64,
    pub starts_used: usize,
    /// The two best starts agree within `10 * tol`.
    pub converged: bool,
    /// Objective gap between the second-best and best start.
    pub residual_spread: f64,
    pub family: MeasurementFamily,
    /// Whether the optimal measurement is projective (orthonormal, `dB`
    /// nonzero elements), regardless of the family searched.
    pub optimum_is_projective: bool,
    pub evaluations: usize,
}

struct StartOutcome {
    value: f64,
    base: ComplexMatrix,
    params: Vec<f64>,
    evaluations: usize,
}

/// Lowest objective first; ties go to the lowest start index.
fn ranking(outcomes: &[StartOutcome]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..outcomes.len()).collect();
    order.sort_by(|&a, &b| outcomes[a].value.total_cmp(&outcomes[b].value).then(a.cmp(&b)));
    order
}

/// Discord `D(A:B)` of a bipartite state with the measurement on B.
pub fn discord(rho_ab: &DensityMatrix, cfg: &OptimizerConfig) -> Result<DiscordResult> {
    cfg.validate()?;
    rho_ab.expect_subsystems(2)?;
    let (d_a, d_b) = (rho_ab.dims()[0], rho_ab.dims()[1]);
    if d_b < 2 {
        return Err(Error::InvalidConfig(format!(
            "measured subsystem has dimension {d_b}; at least 2 required"
        )));
    }
    let k = cfg.search_dimension(d_b)?;
    let family = if cfg.outcome_count.is_none() {
        MeasurementFamily::Projective
    } else {
        MeasurementFamily::Povm { outcomes: k }
    };
    let opts = SimplexOptions {
        max_iterations: cfg.max_iterations,
        f_tol: cfg.tol,
        ..SimplexOptions::default()
    };
    let matrix = rho_ab.matrix();
    let n_params = chart::parameter_count(k);

    let objective = |base: &ComplexMatrix, x: &[f64]| {
        let u = chart::rotate(base, x);
        measured_entropy_fast(matrix, d_a, d_b, &chart::measurement_vectors(&u, d_b))
    };

    let mut outcomes: Vec<StartOutcome> = (0..cfg.starts)
        .into_par_iter()
        .map(|start| {
            let mut rng = SeededRng::with_stream(cfg.seed, start as u64);
            let base = random_unitary(k, &mut rng);
            let out = minimize(|x| objective(&base, x), &vec![0.0; n_params], &opts);
            StartOutcome {
                value: out.f,
                base,
                params: out.x,
                evaluations: out.evaluations,
            }
        })
        .collect();

    let refine_opts = SimplexOptions {
        max_iterations: cfg.refine_iterations,
        initial_step: 0.1,
        ..opts
    };
    let order = ranking(&outcomes);
    let refined: Vec<(usize, f64, Vec<f64>, usize)> = order
        .iter()
        .take(if cfg.refine_iterations > 0 { cfg.refine_top } else { 0 })
        .copied()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|i| {
            let o = &outcomes[i];
            let out = minimize(|x| objective(&o.base, x), &o.params, &refine_opts);
            (i, out.f, out.x, out.evaluations)
        })
        .collect();
    for (i, value, params, evaluations) in refined {
        let o = &mut outcomes[i];
        o.evaluations += evaluations;
        if value <= o.value {
            o.value = value;
            o.params = params;
        }
    }

    let order = ranking(&outcomes);
    let best = &outcomes[order[0]];
    let residual_spread = order
        .get(1)
        .map_or(0.0, |&i| outcomes[i].value - best.value);
    let converged = residual_spread <= 10.0 * cfg.tol;
    let best_vectors = chart::measurement_vectors(&chart::rotate(&best.base, &best.params), d_b);

    let optimal_povm = Povm::from_vectors(best_vectors)?;
    let min_h = measured_conditional_entropy(rho_ab, &optimal_povm)?;
    let h_a = von_neumann(&rho_ab.partial_trace(&[0])?)?;
    let mutual = mutual_information(rho_ab)?;
    let classical = h_a - min_h;
    let optimum_is_projective = is_projective_up_to_zeros(&optimal_povm);

    Ok(DiscordResult {
        discord: mutual - classical,
        classical_correlations: classical,
        mutual_information: mutual,
        optimal_povm,
        min_measured_conditional_entropy: min_h,
        starts_used: cfg.starts,
        converged,
        residual_spread,
        family,
        optimum_is_projective,
        evaluations: outcomes.iter().map(|o| o.evaluations).sum(),
    })
}

/// `J(A:B)`, the classical correlations extracted by the best measurement on B.
pub fn classical_correlations(rho_ab: &DensityMatrix, cfg: &OptimizerConfig) -> Result<f64> {
    Ok(discord(rho_ab, cfg)?.classical_correlations)
}

fn is_projective_up_to_zeros(povm: &Povm) -> bool {
    let nonzero: Vec<f64> = povm
        .vectors()
        .iter()
        .map(|v| v.iter().map(|z| z.norm_sqr()).sum::<f64>())
        .filter(|&n| n > POVM_TOL)
        .collect();
    nonzero.len() == povm.dim() && nonzero.iter().all(|n| (n - 1.0).abs() <= 1e-6)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::conditional_entropy;
    use crate::measurement::projective_from_unitary;
    use crate::qstate::random_density;
    use num_complex::Complex64;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn small_cfg() -> OptimizerConfig {
        OptimizerConfig {
            starts: 8,
            ..OptimizerConfig::default()
        }
    }

    fn bell() -> DensityMatrix {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let z = Complex64::new(0.0, 0.0);
        DensityMatrix::pure(&[h, z, z, h], vec![2, 2]).unwrap()
    }

    #[test]
    fn product_state_has_zero_discord() {
        let mut rng = SeededRng::new(1);
        let rho = random_density(2, 2, &mut rng)
            .unwrap()
            .tensor(&random_density(3, 3, &mut rng).unwrap());
        let r = discord(&rho, &small_cfg()).unwrap();
        assert!(r.discord.abs() < 1e-7, "{}", r.discord);
        assert!(r.classical_correlations.abs() < 1e-7);
        assert!(r.converged);
    }

    #[test]
    fn bell_state_constants() {
        let r = discord(&bell(), &small_cfg()).unwrap();
        assert!((r.discord - 1.0).abs() < 1e-6);
        assert!((r.classical_correlations - 1.0).abs() < 1e-6);
        assert!((r.mutual_information - 2.0).abs() < 1e-12);
        assert!(r.optimum_is_projective);
    }

    #[test]
    fn classically_correlated_state() {
        let rho = DensityMatrix::diagonal(&[0.5, 0.0, 0.0, 0.5], vec![2, 2]).unwrap();
        let r = discord(&rho, &small_cfg()).unwrap();
        assert!(r.discord.abs() < 1e-6);
        assert!((r.classical_correlations - 1.0).abs() < 1e-6);
    }

    #[test]
    fn bookkeeping_identities() {
        let rho = random_density(6, 6, &mut SeededRng::new(77))
            .unwrap()
            .with_dims(vec![3, 2])
            .unwrap();
        let r = discord(&rho, &small_cfg()).unwrap();
        assert!((r.discord - (r.mutual_information - r.classical_correlations)).abs() < 1e-9);
        let again = measured_conditional_entropy(&rho, &r.optimal_povm).unwrap();
        assert!((again - r.min_measured_conditional_entropy).abs() < 1e-12);
        assert!(r.discord >= -1e-7);
        let h_ab_given = conditional_entropy(&rho).unwrap();
        assert!((r.discord - (r.min_measured_conditional_entropy - h_ab_given)).abs() < 1e-9);
    }

    #[test]
    fn never_above_an_achievable_value() {
        let mut rng = SeededRng::new(5);
        let rho = random_density(4, 4, &mut rng).unwrap().with_dims(vec![2, 2]).unwrap();
        let r = discord(&rho, &small_cfg()).unwrap();
        let offset = -conditional_entropy(&rho).unwrap();
        for _ in 0..50 {
            let povm = projective_from_unitary(&random_unitary(2, &mut rng)).unwrap();
            let achievable = offset + measured_conditional_entropy(&rho, &povm).unwrap();
            assert!(achievable >= r.discord - 1e-9);
        }
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let rho = random_density(4, 4, &mut SeededRng::new(3)).unwrap().with_dims(vec![2, 2]).unwrap();
        let a = discord(&rho, &small_cfg()).unwrap();
        let b = discord(&rho, &small_cfg()).unwrap();
        assert_eq!(a.discord.to_bits(), b.discord.to_bits());
        assert_eq!(a.residual_spread.to_bits(), b.residual_spread.to_bits());
        assert_eq!(a.optimal_povm, b.optimal_povm);
    }

    #[test]
    fn povm_mode_never_worse_than_projective() {
        let rho = random_density(4, 4, &mut SeededRng::new(14)).unwrap().with_dims(vec![2, 2]).unwrap();
        let proj = discord(&rho, &small_cfg()).unwrap();
        let cfg = OptimizerConfig {
            outcome_count: Some(4),
            max_iterations: 3000,
            ..small_cfg()
        };
        let povm = discord(&rho, &cfg).unwrap();
        assert_eq!(povm.family, MeasurementFamily::Povm { outcomes: 4 });
        assert_eq!(povm.optimal_povm.outcome_count(), 4);
        assert!(povm.discord <= proj.discord + 1e-6);
        assert!(povm.discord >= -1e-7);
    }

    #[test]
    fn config_and_input_errors() {
        let q = DensityMatrix::maximally_mixed(vec![2, 1]).unwrap();
        assert!(matches!(discord(&q, &small_cfg()), Err(Error::InvalidConfig(_))));
        let single = DensityMatrix::maximally_mixed(vec![4]).unwrap();
        assert!(matches!(discord(&single, &small_cfg()), Err(Error::Arity { .. })));
        let bad = OptimizerConfig {
            outcome_count: Some(5),
            ..small_cfg()
        };
        assert!(discord(&bell(), &bad).is_err());
        let bad = OptimizerConfig {
            starts: 0,
            ..small_cfg()
        };
        assert!(discord(&bell(), &bad).is_err());
    }
}
