use crate::entropy::ssa_quantity;
use crate::error::{Error, Result};
use crate::qstate::DensityMatrix;

pub const DEFAULT_CLASSIFY_TOL: f64 = 1e-8;

/// Sign class of `H(AB) + H(BC) - H(ABC) - H(B)`.
///
/// There is no negative class: strong subadditivity rules it out for every
/// density matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorrelationClass {
    QuantumPositive,
    ClassicalZero,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Classification {
    pub class: CorrelationClass,
    pub ssa_quantity: f64,
}

/// `ClassicalZero` iff `|ssa_quantity| <= tol`. A value below `-tol` can only
/// come from corrupted input or arithmetic and is reported as
/// [`Error::Internal`].
pub fn classify_correlations(rho_abc: &DensityMatrix, tol: f64) -> Result<Classification> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidConfig(format!("tolerance must be positive, got {tol}")));
    }
    let value = ssa_quantity(rho_abc)?;
    if value < -tol {
        return Err(Error::Internal(format!(
            "strong subadditivity violated: H(AB) + H(BC) - H(ABC) - H(B) = {value:e}"
        )));
    }
    let class = if value.abs() <= tol {
        CorrelationClass::ClassicalZero
    } else {
        CorrelationClass::QuantumPositive
    };
    Ok(Classification {
        class,
        ssa_quantity: value,
    })
}
