//! Apparatus extension, zero-discord certification and the sign classifier
//! for the strong-subadditivity quantity.

mod certify;
mod classify;
mod extension;

pub use certify::{
    certify_zero_discord, certify_zero_discord_seeded, generate_classical_quantum, generate_zero_discord,
    ClassicalQuantumState, Verdict, ZeroDiscordCertificate, DEFAULT_CERTIFY_SEED, DEFAULT_CERTIFY_TOL,
};
pub use classify::{classify_correlations, Classification, CorrelationClass, DEFAULT_CLASSIFY_TOL};
pub use extension::{extend_with_apparatus, verify_proof_identities, ApparatusExtension, ProofIdentityReport};
