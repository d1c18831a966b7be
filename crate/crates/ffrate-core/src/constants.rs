//! Physical constants (CODATA-2018), SI units.
//!
//! Every dimensioned number in the crate funnels through this table so that a
//! constants update touches exactly one file. `K_B` is listed for completeness
//! but unused: nothing here models thermal occupation.

/// Bohr magneton, J/T.
pub const MU_B: f64 = 9.274_010_078_3e-24;

/// Vacuum permeability, N/A^2.
pub const MU_0: f64 = 1.256_637_062_12e-6;

/// Planck constant, J s (exact by SI definition).
pub const H_PLANCK: f64 = 6.626_070_15e-34;

/// Reduced Planck constant, J s.
pub const HBAR: f64 = 1.054_571_817e-34;

/// Boltzmann constant, J/K (exact by SI definition; unused, see module docs).
pub const K_B: f64 = 1.380_649e-23;

/// mu_0 / 4 pi, the dipolar coupling prefactor, N/A^2.
pub const MU_0_OVER_4PI: f64 = 1e-7;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mu0_over_4pi_consistent() {
        assert!((MU_0 / (4.0 * std::f64::consts::PI) - MU_0_OVER_4PI).abs() < 1e-16);
    }

    #[test]
    fn hbar_is_h_over_2pi() {
        let hbar = H_PLANCK / (2.0 * std::f64::consts::PI);
        assert!((hbar - HBAR).abs() / HBAR < 1e-9);
    }
}
