use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::measurement::{bloch_projective, measured_entropy_fast, Povm};
use crate::qstate::DensityMatrix;

/// Exhaustive sweep of qubit projective measurements on B.
///
/// The grid is `θ = π i / N` for `i = 0..=N` and `φ = 2π j / N` for
/// `j = 0..N`, so the grid for `N` contains the grid for every divisor of
/// `N` and refining by an integer factor never raises the minimum.
pub fn brute_force_min_conditional_entropy(
    rho_ab: &DensityMatrix,
    grid_resolution: usize,
) -> Result<(f64, Povm)> {
    rho_ab.expect_subsystems(2)?;
    let (d_a, d_b) = (rho_ab.dims()[0], rho_ab.dims()[1]);
    if d_b != 2 {
        return Err(Error::InvalidConfig(format!(
            "grid oracle needs a qubit on B, found dimension {d_b}"
        )));
    }
    if grid_resolution == 0 {
        return Err(Error::InvalidConfig("grid resolution must be at least 1".into()));
    }
    let n = grid_resolution as f64;
    let mut best: Option<(f64, Povm)> = None;
    for i in 0..=grid_resolution {
        let theta = PI * i as f64 / n;
        // At the poles every φ gives the same measurement.
        let phis = if i == 0 || i == grid_resolution { 1 } else { grid_resolution };
        for j in 0..phis {
            let povm = bloch_projective(theta, 2.0 * PI * j as f64 / n);
            let h = measured_entropy_fast(rho_ab.matrix(), d_a, d_b, povm.vectors());
            if best.as_ref().is_none_or(|(b, _)| h < *b) {
                best = Some((h, povm));
            }
        }
    }
    Ok(best.expect("grid is nonempty"))
}
