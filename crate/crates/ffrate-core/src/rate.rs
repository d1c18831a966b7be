//! Flip-flop rate engine: single rates, angular sweeps, orientation maps,
//! concentration scans.
//!
//! The golden-rule rate for resonant flip-flops between identical spins is
//!
//! R = (2π/ħ²) (μ₀/4π · n_s μ_B²)² · c · Ξ(ḡ, B⃗) / Γ,
//!
//! with c the dipolar lattice-sum coefficient, Ξ the orientation variance of
//! the flip-flop matrix element and Γ the spin linewidth in angular units
//! (Γ = 2π × linewidth in Hz), so R ∝ n_s²/Γ. Rates are reported as lifetimes
//! T_ff = 1/R; a zero rate (e.g. zero concentration) yields `None`, which
//! serializes as JSON null.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constants::{HBAR, MU_B, MU_0_OVER_4PI};
use crate::coupling::xi_analytic;
use crate::lattice::{lattice_sum, pair_coupling_scale_hz, LatticeError};
use crate::registry::{Material, Registry, RegistryError, SweepFrame};
use crate::spin::{angle_grid, splitting_hz, EffectiveField, FieldSpec, GTensor, SpinError};

/// Human-readable statement of the linewidth convention used by the engine.
pub const GAMMA_CONVENTION: &str = "angular (Gamma = 2*pi * linewidth_Hz)";

/// Default lattice-sum ball radius; converged to well under 0.1%.
pub const DEFAULT_LAYERS: u32 = 10;

#[derive(Debug, Error)]
pub enum RateError {
    #[error(transparent)]
    Registry(#[from] RegistryError),
    #[error(transparent)]
    Spin(#[from] SpinError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("field magnitude must be positive, got {0} mT")]
    NonPositiveField(f64),
    #[error("linewidth must be positive, got {0} MHz")]
    NonPositiveGamma(f64),
    #[error("linewidth range [{0}, {1}] MHz must satisfy 0 < lo <= hi")]
    BadGammaRange(f64, f64),
    #[error("angle range start {start} to stop {stop} with step {step} is not a valid grid")]
    BadAngleRange { start: f64, stop: f64, step: f64 },
    #[error("concentration range [{0}, {1}] ppm must satisfy 0 < lo <= hi")]
    BadConcentrationRange(f64, f64),
    #[error("scan needs at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("material {material:?} sweeps its {expected:?} frame; requested {requested:?}")]
    PlaneMismatch {
        material: String,
        expected: SweepFrame,
        requested: SweepFrame,
    },
}

/// Inputs for a single-orientation rate evaluation.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RateQuery {
    pub material: String,
    pub concentration_ppm: f64,
    pub field: FieldSpec,
    /// Linewidth in MHz; `None` uses the material default.
    pub gamma_mhz: Option<f64>,
    /// Optional linewidth range for lifetime bands.
    pub gamma_range_mhz: Option<[f64; 2]>,
    pub layers: u32,
}

/// Output of a single-orientation rate evaluation. Input echoes make the
/// serialized form self-describing.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RateResult {
    pub query: RateQuery,
    pub g_eff: f64,
    pub theta_eff_deg: f64,
    pub phi_eff_deg: f64,
    pub splitting_hz: f64,
    pub xi: f64,
    pub n_s_per_m3: f64,
    pub lattice_coefficient: f64,
    pub gamma_mhz: f64,
    pub gamma_convention: String,
    pub r_per_s: f64,
    /// 1/R; `None` means the rate is zero and the lifetime infinite.
    pub t_ff_s: Option<f64>,
    /// Lifetime at the low end of the linewidth range, if one was given.
    pub t_low_s: Option<f64>,
    /// Lifetime at the high end of the linewidth range, if one was given.
    pub t_high_s: Option<f64>,
    pub warnings: Vec<String>,
}

fn check_field(b_mt: f64) -> Result<(), RateError> {
    if !(b_mt.is_finite() && b_mt > 0.0) {
        return Err(RateError::NonPositiveField(b_mt));
    }
    Ok(())
}

fn check_gamma(gamma_mhz: f64) -> Result<(), RateError> {
    if !(gamma_mhz.is_finite() && gamma_mhz > 0.0) {
        return Err(RateError::NonPositiveGamma(gamma_mhz));
    }
    Ok(())
}

fn resolve_gamma(material: &Material, gamma_mhz: Option<f64>) -> Result<f64, RateError> {
    let gamma = gamma_mhz.unwrap_or(material.gamma_default_mhz.value);
    check_gamma(gamma)?;
    Ok(gamma)
}

fn check_gamma_range(range: Option<[f64; 2]>) -> Result<(), RateError> {
    if let Some([lo, hi]) = range {
        if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && lo <= hi) {
            return Err(RateError::BadGammaRange(lo, hi));
        }
    }
    Ok(())
}

/// Rate in 1/s from the assembled pieces; `gamma_hz` is the linewidth in Hz
/// (the 2π of the angular convention cancels against the golden-rule 2π).
pub fn rate_per_s(xi: f64, n_s_per_m3: f64, lattice_coefficient: f64, gamma_hz: f64) -> f64 {
    let k = MU_0_OVER_4PI * MU_B * MU_B * n_s_per_m3;
    k * k * lattice_coefficient * xi / (HBAR * HBAR * gamma_hz)
}

fn lifetime(r: f64) -> Option<f64> {
    (r > 0.0).then(|| 1.0 / r)
}

/// Ξ for a material tensor and a crystal-frame field orientation.
fn xi_for(g: &GTensor, field: &FieldSpec) -> Result<(EffectiveField, f64), RateError> {
    let eff = g.effective_field(field.direction())?;
    let xi = xi_analytic(g.principal(), eff.theta_rad, eff.phi_rad);
    Ok((eff, xi))
}

/// Evaluates the flip-flop rate for one material, field, and concentration.
pub fn flipflop_rate(registry: &Registry, query: &RateQuery) -> Result<RateResult, RateError> {
    let material = registry.get_required(&query.material)?;
    check_field(query.field.magnitude_mt)?;
    check_gamma_range(query.gamma_range_mhz)?;
    let gamma_mhz = resolve_gamma(material, query.gamma_mhz)?;
    let g = material.g_tensor()?;
    let density = material.spin_density(query.concentration_ppm)?;
    let lattice = lattice_sum(query.layers)?;
    let (eff, xi) = xi_for(&g, &query.field)?;

    let r = rate_per_s(xi, density.n_s_per_m3, lattice.coefficient, gamma_mhz * 1e6);
    let band = query.gamma_range_mhz.map(|[lo, hi]| {
        // T grows with Gamma, so the range maps monotonically onto [t_low, t_high].
        (
            lifetime(rate_per_s(xi, density.n_s_per_m3, lattice.coefficient, lo * 1e6)),
            lifetime(rate_per_s(xi, density.n_s_per_m3, lattice.coefficient, hi * 1e6)),
        )
    });

    let nu = splitting_hz(eff.g_eff, query.field.b_tesla());
    let pair_hz = pair_coupling_scale_hz(eff.g_eff, density.n_s_per_m3);
    let mut warnings = Vec::new();
    if pair_hz >= 0.1 * nu {
        warnings.push(format!(
            "dipolar pair coupling ({pair_hz:.3e} Hz) is at least 10% of the Zeeman splitting \
             ({nu:.3e} Hz); the perturbative rate may be unreliable at this field/concentration"
        ));
    }

    Ok(RateResult {
        query: query.clone(),
        g_eff: eff.g_eff,
        theta_eff_deg: eff.theta_rad.to_degrees(),
        phi_eff_deg: eff.phi_rad.to_degrees(),
        splitting_hz: nu,
        xi,
        n_s_per_m3: density.n_s_per_m3,
        lattice_coefficient: lattice.coefficient,
        gamma_mhz,
        gamma_convention: GAMMA_CONVENTION.to_string(),
        r_per_s: r,
        t_ff_s: lifetime(r),
        t_low_s: band.and_then(|(lo, _)| lo),
        t_high_s: band.and_then(|(_, hi)| hi),
        warnings,
    })
}

/// Inputs for an in-plane angular sweep. The plane is the material's sweep
/// frame; `plane` may restate it and errors if it disagrees.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SweepQuery {
    pub material: String,
    pub concentration_ppm: f64,
    pub b_mt: f64,
    pub start_deg: f64,
    pub stop_deg: f64,
    pub step_deg: f64,
    pub gamma_mhz: Option<f64>,
    pub gamma_range_mhz: Option<[f64; 2]>,
    pub layers: u32,
    pub plane: Option<SweepFrame>,
}

/// One sweep angle with its lifetime (and band when a range was given).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SweepPoint {
    pub angle_deg: f64,
    pub g_eff: f64,
    pub xi: f64,
    pub t_ff_s: Option<f64>,
    pub t_low_s: Option<f64>,
    pub t_high_s: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SweepResult {
    pub material: String,
    pub frame: SweepFrame,
    pub concentration_ppm: f64,
    pub b_mt: f64,
    pub gamma_mhz: f64,
    pub gamma_range_mhz: Option<[f64; 2]>,
    pub gamma_convention: String,
    pub points: Vec<SweepPoint>,
}

fn sweep_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>, RateError> {
    if !(step > 0.0 && stop >= start && step.is_finite() && start.is_finite() && stop.is_finite()) {
        return Err(RateError::BadAngleRange { start, stop, step });
    }
    Ok(angle_grid(start, stop, step))
}

/// Sweeps the field direction through the material's plane at fixed magnitude.
pub fn angular_sweep(registry: &Registry, query: &SweepQuery) -> Result<SweepResult, RateError> {
    let material = registry.get_required(&query.material)?;
    if let Some(requested) = query.plane {
        if requested != material.sweep_frame {
            return Err(RateError::PlaneMismatch {
                material: material.name.clone(),
                expected: material.sweep_frame,
                requested,
            });
        }
    }
    check_field(query.b_mt)?;
    check_gamma_range(query.gamma_range_mhz)?;
    let gamma_mhz = resolve_gamma(material, query.gamma_mhz)?;
    let g = material.g_tensor()?;
    let density = material.spin_density(query.concentration_ppm)?;
    let lattice = lattice_sum(query.layers)?;
    let grid = sweep_grid(query.start_deg, query.stop_deg, query.step_deg)?;

    let points = grid
        .into_iter()
        .map(|angle_deg| {
            let (phi_deg, theta_deg) = material.sweep_frame.orientation(angle_deg);
            let field = FieldSpec {
                magnitude_mt: query.b_mt,
                phi_deg,
                theta_deg,
            };
            let (eff, xi) = xi_for(&g, &field)?;
            let r = rate_per_s(xi, density.n_s_per_m3, lattice.coefficient, gamma_mhz * 1e6);
            let (t_low_s, t_high_s) = match query.gamma_range_mhz {
                Some([lo, hi]) => (
                    lifetime(rate_per_s(xi, density.n_s_per_m3, lattice.coefficient, lo * 1e6)),
                    lifetime(rate_per_s(xi, density.n_s_per_m3, lattice.coefficient, hi * 1e6)),
                ),
                None => (None, None),
            };
            Ok(SweepPoint {
                angle_deg,
                g_eff: eff.g_eff,
                xi,
                t_ff_s: lifetime(r),
                t_low_s,
                t_high_s,
            })
        })
        .collect::<Result<Vec<_>, RateError>>()?;

    Ok(SweepResult {
        material: material.name.clone(),
        frame: material.sweep_frame,
        concentration_ppm: query.concentration_ppm,
        b_mt: query.b_mt,
        gamma_mhz,
        gamma_range_mhz: query.gamma_range_mhz,
        gamma_convention: GAMMA_CONVENTION.to_string(),
        points,
    })
}

/// Inputs for a full-sphere lifetime map.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MapQuery {
    pub material: String,
    pub concentration_ppm: f64,
    pub b_mt: f64,
    pub phi_step_deg: f64,
    pub theta_step_deg: f64,
    pub gamma_mhz: Option<f64>,
    pub layers: u32,
}

/// Lifetimes over the sphere of field orientations. `t_ff_s[i][j]` belongs to
/// `theta_deg[i]` and `phi_deg[j]`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MapResult {
    pub material: String,
    pub concentration_ppm: f64,
    pub b_mt: f64,
    pub gamma_mhz: f64,
    pub gamma_convention: String,
    pub phi_deg: Vec<f64>,
    pub theta_deg: Vec<f64>,
    pub t_ff_s: Vec<Vec<Option<f64>>>,
}

/// Evaluates T_ff on the inclusive grid φ ∈ [0°, 360°], θ ∈ [0°, 180°].
pub fn lifetime_map(registry: &Registry, query: &MapQuery) -> Result<MapResult, RateError> {
    let material = registry.get_required(&query.material)?;
    check_field(query.b_mt)?;
    let gamma_mhz = resolve_gamma(material, query.gamma_mhz)?;
    let g = material.g_tensor()?;
    let density = material.spin_density(query.concentration_ppm)?;
    let lattice = lattice_sum(query.layers)?;
    let phi = sweep_grid(0.0, 360.0, query.phi_step_deg)?;
    let theta = sweep_grid(0.0, 180.0, query.theta_step_deg)?;

    let t_ff_s = theta
        .iter()
        .map(|&theta_deg| {
            phi.iter()
                .map(|&phi_deg| {
                    let field = FieldSpec {
                        magnitude_mt: query.b_mt,
                        phi_deg,
                        theta_deg,
                    };
                    let (_, xi) = xi_for(&g, &field)?;
                    Ok(lifetime(rate_per_s(
                        xi,
                        density.n_s_per_m3,
                        lattice.coefficient,
                        gamma_mhz * 1e6,
                    )))
                })
                .collect::<Result<Vec<_>, RateError>>()
        })
        .collect::<Result<Vec<_>, RateError>>()?;

    Ok(MapResult {
        material: material.name.clone(),
        concentration_ppm: query.concentration_ppm,
        b_mt: query.b_mt,
        gamma_mhz,
        gamma_convention: GAMMA_CONVENTION.to_string(),
        phi_deg: phi,
        theta_deg: theta,
        t_ff_s,
    })
}

/// The sweep angle minimizing Ξ (maximizing T_ff), found by a 1° scan over
/// [0°, 180°) refined by golden-section search. Deterministic: fixed grid,
/// fixed iteration count.
pub fn best_orientation(material: &Material) -> Result<(f64, f64), RateError> {
    let g = material.g_tensor()?;
    let xi_at = |angle_deg: f64| -> Result<f64, RateError> {
        let (phi_deg, theta_deg) = material.sweep_frame.orientation(angle_deg);
        let field = FieldSpec {
            magnitude_mt: 1.0,
            phi_deg,
            theta_deg,
        };
        Ok(xi_for(&g, &field)?.1)
    };

    let mut best_angle = 0.0;
    let mut best_xi = f64::INFINITY;
    // Xi is 180-degree periodic in the sweep angle, so [0, 180) covers it.
    for i in 0..180 {
        let angle = i as f64;
        let xi = xi_at(angle)?;
        if xi < best_xi {
            best_xi = xi;
            best_angle = angle;
        }
    }

    let phi_ratio = (5.0_f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (best_angle - 1.0, best_angle + 1.0);
    let mut x1 = b - phi_ratio * (b - a);
    let mut x2 = a + phi_ratio * (b - a);
    let mut f1 = xi_at(x1)?;
    let mut f2 = xi_at(x2)?;
    for _ in 0..48 {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi_ratio * (b - a);
            f1 = xi_at(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi_ratio * (b - a);
            f2 = xi_at(x2)?;
        }
    }
    let (angle, xi) = if f1 < f2 { (x1, f1) } else { (x2, f2) };
    let angle = angle.rem_euclid(180.0);
    Ok(if xi < best_xi { (angle, xi) } else { (best_angle, best_xi) })
}

/// How a concentration scan orients the field.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub enum ScanOrientation {
    /// Use the sweep angle that maximizes T_ff.
    Best,
    /// Use a fixed orientation (degrees).
    Fixed { phi_deg: f64, theta_deg: f64 },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ScanQuery {
    pub material: String,
    pub conc_lo_ppm: f64,
    pub conc_hi_ppm: f64,
    /// Number of log-spaced concentrations, endpoints included.
    pub points: usize,
    pub b_mt: f64,
    pub gamma_mhz: Option<f64>,
    pub layers: u32,
    pub orientation: ScanOrientation,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ScanPoint {
    pub concentration_ppm: f64,
    pub t_ff_s: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ScanResult {
    pub material: String,
    pub phi_deg: f64,
    pub theta_deg: f64,
    pub b_mt: f64,
    pub gamma_mhz: f64,
    pub gamma_convention: String,
    pub points: Vec<ScanPoint>,
}

/// T_ff versus concentration at fixed orientation (best by default). Pure
/// n_s² scaling, so the curve is a straight line of slope −2 on log axes.
pub fn concentration_scan(registry: &Registry, query: &ScanQuery) -> Result<ScanResult, RateError> {
    let material = registry.get_required(&query.material)?;
    check_field(query.b_mt)?;
    let gamma_mhz = resolve_gamma(material, query.gamma_mhz)?;
    if !(query.conc_lo_ppm > 0.0 && query.conc_lo_ppm <= query.conc_hi_ppm) {
        return Err(RateError::BadConcentrationRange(
            query.conc_lo_ppm,
            query.conc_hi_ppm,
        ));
    }
    if query.points < 2 {
        return Err(RateError::TooFewPoints(query.points));
    }

    let (phi_deg, theta_deg) = match query.orientation {
        ScanOrientation::Best => {
            let (angle, _) = best_orientation(material)?;
            material.sweep_frame.orientation(angle)
        }
        ScanOrientation::Fixed { phi_deg, theta_deg } => (phi_deg, theta_deg),
    };

    let g = material.g_tensor()?;
    let lattice = lattice_sum(query.layers)?;
    let field = FieldSpec {
        magnitude_mt: query.b_mt,
        phi_deg,
        theta_deg,
    };
    let (_, xi) = xi_for(&g, &field)?;

    let log_lo = query.conc_lo_ppm.ln();
    let log_hi = query.conc_hi_ppm.ln();
    let n = query.points;
    let points = (0..n)
        .map(|i| {
            // Endpoints exactly as requested; log interpolation between.
            let concentration_ppm = if i == 0 {
                query.conc_lo_ppm
            } else if i == n - 1 {
                query.conc_hi_ppm
            } else {
                let frac = i as f64 / (n - 1) as f64;
                (log_lo + frac * (log_hi - log_lo)).exp()
            };
            let density = material.spin_density(concentration_ppm)?;
            let r = rate_per_s(xi, density.n_s_per_m3, lattice.coefficient, gamma_mhz * 1e6);
            Ok(ScanPoint {
                concentration_ppm,
                t_ff_s: lifetime(r),
            })
        })
        .collect::<Result<Vec<_>, RateError>>()?;

    Ok(ScanResult {
        material: material.name.clone(),
        phi_deg,
        theta_deg,
        b_mt: query.b_mt,
        gamma_mhz,
        gamma_convention: GAMMA_CONVENTION.to_string(),
        points,
    })
}

/// Concentration (ppm) at which the best-orientation lifetime equals
/// `t_target_s`. Exact inversion of the R ∝ n_s² law: evaluate at 1 ppm and
/// rescale.
pub fn concentration_for_lifetime(
    registry: &Registry,
    material_name: &str,
    t_target_s: f64,
    gamma_mhz: Option<f64>,
    layers: u32,
) -> Result<f64, RateError> {
    let material = registry.get_required(material_name)?;
    let gamma = resolve_gamma(material, gamma_mhz)?;
    let (_, xi) = best_orientation(material)?;
    let density = material.spin_density(1.0)?;
    let lattice = lattice_sum(layers)?;
    let r_at_1ppm = rate_per_s(xi, density.n_s_per_m3, lattice.coefficient, gamma * 1e6);
    Ok((1.0 / (r_at_1ppm * t_target_s)).sqrt())
}
