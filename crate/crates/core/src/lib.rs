//! Quantum discord of finite-dimensional bipartite states.
//!
//! The crate computes `D(A:B)` by minimizing the measured conditional entropy
//! over rank-1 measurements on B, checks the entropy identities that tie
//! discord positivity to strong subadditivity through an apparatus
//! extension, and decides whether a state is classical on B (zero discord).
//!
//! All entropies are in bits.
//!
//! ```
//! use discord_core::prelude::*;
//!
//! let rho = DensityMatrix::diagonal(&[0.5, 0.0, 0.0, 0.5], vec![2, 2]).unwrap();
//! let cert = certify_zero_discord(&rho, DEFAULT_CERTIFY_TOL).unwrap();
//! assert!(cert.accepted());
//! ```

#![forbid(unsafe_code)]

pub mod engine;
pub mod entropy;
pub mod error;
pub mod measurement;
pub mod qstate;
pub mod structure;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::engine::{
        brute_force_min_conditional_entropy, classical_correlations, discord, DiscordResult,
        MeasurementFamily, OptimizerConfig,
    };
    pub use crate::entropy::{
        conditional_entropy, mutual_information, shannon, ssa_quantity, von_neumann, ProbabilityVector,
    };
    pub use crate::error::{Error, Result};
    pub use crate::measurement::{
        bloch_projective, measured_conditional_entropy, neumark_povm, post_measurement_ensemble,
        projective_from_unitary, ConditionalEnsemble, Povm,
    };
    pub use crate::qstate::{
        eig_hermitian, partial_trace, random_density, random_unitary, tensor, ComplexMatrix,
        DensityMatrix, EigenDecomposition, SeededRng,
    };
    pub use crate::structure::{
        certify_zero_discord, classify_correlations, extend_with_apparatus, generate_zero_discord,
        verify_proof_identities, CorrelationClass, Verdict, ZeroDiscordCertificate, DEFAULT_CERTIFY_TOL,
        DEFAULT_CLASSIFY_TOL,
    };
}
