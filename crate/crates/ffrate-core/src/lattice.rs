//! Dimensionless dipolar lattice sum, spin density, and the pair coupling
//! scale.
//!
//! Partner spins sit on substitutional sites; summing the r⁻⁶ dipolar weight
//! over a simple cubic grid of unit spacing gives a dimensionless coefficient
//! c = Σ 1/(m² + n² + p²)³ that multiplies n_s² in the rate. The sum runs over
//! all grid points inside a ball of radius `layers` (0 < m² + n² + p² ≤
//! layers²) and converges fast: radius 10 is within 0.05% of the limit.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constants::{H_PLANCK, MU_B, MU_0_OVER_4PI};

#[derive(Debug, Error)]
pub enum LatticeError {
    #[error("lattice sum needs at least one layer")]
    ZeroLayers,
    #[error("concentration must be finite and non-negative, got {0} ppm")]
    InvalidConcentration(f64),
    #[error("cation density must be finite and positive, got {0} per m^3")]
    InvalidDensity(f64),
    #[error("isotopic fraction must be in (0, 1], got {0}")]
    InvalidFraction(f64),
}

/// One value of the squared radius s = m² + n² + p² with its site count and
/// total contribution count/s³. Radii with no lattice sites appear with count
/// zero so the shell list has no gaps.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ShellContribution {
    pub s: u32,
    pub count: u32,
    pub contribution: f64,
}

/// Converged value and per-shell breakdown of the dipolar lattice sum.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct LatticeSumResult {
    pub layers: u32,
    pub coefficient: f64,
    pub shells: Vec<ShellContribution>,
}

/// Sums 1/(m² + n² + p²)³ over grid points with 0 < m² + n² + p² ≤ layers².
pub fn lattice_sum(layers: u32) -> Result<LatticeSumResult, LatticeError> {
    if layers == 0 {
        return Err(LatticeError::ZeroLayers);
    }
    let l = layers as i64;
    let s_max = (l * l) as usize;
    let mut counts = vec![0u32; s_max + 1];
    for m in -l..=l {
        for n in -l..=l {
            for p in -l..=l {
                let s = (m * m + n * n + p * p) as usize;
                if s > 0 && s <= s_max {
                    counts[s] += 1;
                }
            }
        }
    }
    let shells: Vec<ShellContribution> = (1..=s_max)
        .map(|s| {
            let sf = s as f64;
            ShellContribution {
                s: s as u32,
                count: counts[s],
                contribution: counts[s] as f64 / (sf * sf * sf),
            }
        })
        .collect();
    // Summing small shells (large s) first keeps rounding error negligible.
    let coefficient = shells.iter().rev().map(|sh| sh.contribution).sum();
    Ok(LatticeSumResult {
        layers,
        coefficient,
        shells,
    })
}

/// Resonant partner density derived from a dopant concentration.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct SpinDensity {
    pub n_s_per_m3: f64,
    pub concentration_ppm: f64,
    pub cation_density_per_m3: f64,
    pub isotopic_fraction: f64,
}

/// n_s = (1/2) f c n_cation: half the even-isotope dopants are in the right
/// Zeeman state to flip-flop with a given spin. Zero concentration is legal
/// and yields a zero rate upstream.
pub fn spin_density(
    concentration_ppm: f64,
    cation_density_per_m3: f64,
    isotopic_fraction: f64,
) -> Result<SpinDensity, LatticeError> {
    if !(concentration_ppm.is_finite() && concentration_ppm >= 0.0) {
        return Err(LatticeError::InvalidConcentration(concentration_ppm));
    }
    if !(cation_density_per_m3.is_finite() && cation_density_per_m3 > 0.0) {
        return Err(LatticeError::InvalidDensity(cation_density_per_m3));
    }
    if !(isotopic_fraction > 0.0 && isotopic_fraction <= 1.0) {
        return Err(LatticeError::InvalidFraction(isotopic_fraction));
    }
    Ok(SpinDensity {
        n_s_per_m3: 0.5 * isotopic_fraction * concentration_ppm * 1e-6 * cation_density_per_m3,
        concentration_ppm,
        cation_density_per_m3,
        isotopic_fraction,
    })
}

/// Order-of-magnitude dipolar coupling (Hz) between two spins of scalar
/// g-factor `g` at the mean partner spacing n_s^(-1/3):
/// (μ₀/4π) g² μ_B² / (h r³). Used for sanity reporting, not in the rate.
pub fn pair_coupling_scale_hz(g: f64, n_s_per_m3: f64) -> f64 {
    MU_0_OVER_4PI * g * g * MU_B * MU_B * n_s_per_m3 / H_PLANCK
}
