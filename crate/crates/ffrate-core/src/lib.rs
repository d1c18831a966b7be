//! Orientation-dependent flip-flop cross-relaxation rates for anisotropic
//! effective spin-1/2 dopants in crystals.
//!
//! Paramagnetic dopants with a strongly anisotropic g-tensor relax by resonant
//! pair flip-flops whose rate depends sharply on the magnetic field direction.
//! This crate computes that dependence from first inputs: a g-tensor, a dopant
//! concentration, a host cation density, and a spin linewidth. The golden-rule
//! rate is
//!
//! R = (2π/ħ²) (μ₀/4π · n_s μ_B²)² · c · Ξ(ḡ, B⃗) / Γ,
//!
//! where n_s is the resonant partner density, c the dimensionless dipolar
//! lattice sum, Γ the linewidth in angular units, and Ξ the variance of the
//! flip-flop matrix element over pair directions. Ξ is what makes lifetimes
//! move by four orders of magnitude as the field rotates.
//!
//! Module map:
//!
//! * [`constants`]: CODATA-2018 values.
//! * [`spin`]: g-tensor handling, effective field (g_eff, Θ, Φ), Zeeman
//!   eigenstates and splittings.
//! * [`coupling`]: flip-flop matrix elements 𝒜, ℬ and the closed-form Ξ,
//!   plus an exact quadrature cross-check.
//! * [`lattice`]: dipolar lattice sum, spin density, pair coupling scale.
//! * [`registry`]: named material parameter sets with provenance, JSON load
//!   and save, compiled-in defaults.
//! * [`rate`]: rates, angular sweeps, orientation maps, concentration scans.
//! * [`oracle`]: independent brute-force, Monte-Carlo, and random-placement
//!   checks of the closed forms.
//! * [`fit`]: multi-exponential decay fits for transient absorption data.
//!
//! # Example
//!
//! ```
//! use ffrate_core::rate::{flipflop_rate, RateQuery, DEFAULT_LAYERS};
//! use ffrate_core::registry::builtin_registry;
//! use ffrate_core::spin::FieldSpec;
//!
//! let query = RateQuery {
//!     material: "er_linbo3".into(),
//!     concentration_ppm: 10.0,
//!     field: FieldSpec { magnitude_mt: 0.3, phi_deg: 0.0, theta_deg: 0.0 },
//!     gamma_mhz: None,
//!     gamma_range_mhz: None,
//!     layers: DEFAULT_LAYERS,
//! };
//! let result = flipflop_rate(builtin_registry(), &query).unwrap();
//! let t_ff = result.t_ff_s.unwrap();
//! assert!((t_ff - 15.5e-3).abs() / 15.5e-3 < 0.01);
//! ```

pub mod constants;
pub mod coupling;
pub mod fit;
pub mod lattice;
pub mod oracle;
pub mod rate;
pub mod registry;
pub mod spin;
