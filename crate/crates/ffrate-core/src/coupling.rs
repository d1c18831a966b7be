//! Flip-flop matrix elements of the magnetic dipole-dipole interaction and
//! their orientation average.
//!
//! For two identical effective spins quantized along (Θ, Φ) in the g-tensor
//! principal frame, the secular flip-flop amplitude between |+−⟩ and |−+⟩ for
//! a pair separated along the unit vector u(θ, φ) is (1 − 3cos²θ_u-like
//! geometry folded in) proportional to 𝒜(θ, φ) − ℬ, where 𝒜 depends on the
//! pair direction and ℬ = ⟨𝒜⟩ is its sphere average. The rate engine needs the
//! variance over pair directions,
//!
//! Ξ(ḡ, B⃗) = ⟨(𝒜 − ℬ)²⟩ = ⟨𝒜²⟩ − ℬ²,
//!
//! which has a closed form in the invariants S = g_x² + g_y²,
//! Δ₁ = S − 2 g_z², Δ₂ = g_x² − g_y² and t = sin²Θ. All functions here are
//! pure math in the principal frame; field handling lives in [`crate::spin`].

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CouplingError {
    #[error("field has no in-plane component; the perpendicular special case needs B_x or B_y nonzero")]
    ZeroInPlaneField,
}

/// Quadratic g-tensor invariants entering every closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnisotropyParams {
    /// S = g_x² + g_y².
    pub s: f64,
    /// Δ₁ = S − 2 g_z².
    pub delta1: f64,
    /// Δ₂ = g_x² − g_y².
    pub delta2: f64,
}

/// Invariants (S, Δ₁, Δ₂) of the principal values.
pub fn anisotropy_params(g: [f64; 3]) -> AnisotropyParams {
    let (gx2, gy2, gz2) = (g[0] * g[0], g[1] * g[1], g[2] * g[2]);
    let s = gx2 + gy2;
    AnisotropyParams {
        s,
        delta1: s - 2.0 * gz2,
        delta2: gx2 - gy2,
    }
}

/// Real and imaginary parts of the pair-direction phase factor
/// (g_x cos φ + i g_y sin φ) e^{−iΦ}.
fn pair_gamma(g: [f64; 3], phi_big: f64, pair_phi: f64) -> (f64, f64) {
    let (sp, cp) = pair_phi.sin_cos();
    let (sf, cf) = phi_big.sin_cos();
    // (gx cp + i gy sp) (cosΦ − i sinΦ)
    let re = g[0] * cp * cf + g[1] * sp * sf;
    let im = g[1] * sp * cf - g[0] * cp * sf;
    (re, im)
}

/// Direction-dependent flip-flop amplitude 𝒜 for a pair separated along the
/// principal-frame direction (θ, φ) (radians), for spins quantized along
/// (Θ, Φ).
pub fn matrix_element_a(
    g: [f64; 3],
    theta_big: f64,
    phi_big: f64,
    pair_theta: f64,
    pair_phi: f64,
) -> f64 {
    let (st_big, ct_big) = theta_big.sin_cos();
    let (st, ct) = pair_theta.sin_cos();
    let (re, im) = pair_gamma(g, phi_big, pair_phi);
    0.75 * (st * st * ct_big * ct_big * re * re + g[2] * g[2] * ct * ct * st_big * st_big
        - 2.0 * g[2] * st * ct * st_big * ct_big * re
        + st * st * im * im)
}

/// Sphere average ℬ = ⟨𝒜⟩ over pair directions.
pub fn matrix_element_b(g: [f64; 3], theta_big: f64, phi_big: f64) -> f64 {
    let p = anisotropy_params(g);
    let t = theta_big.sin().powi(2);
    0.125 * (2.0 * p.s - t * p.delta1 - t * (2.0 * phi_big).cos() * p.delta2)
}

/// Sphere average ⟨𝒜²⟩ over pair directions, closed form.
pub fn a_squared_mean(g: [f64; 3], theta_big: f64, phi_big: f64) -> f64 {
    let p = anisotropy_params(g);
    let t = theta_big.sin().powi(2);
    let c2f = (2.0 * phi_big).cos();
    let s2f = (2.0 * phi_big).sin();
    let u = 1.0 - t; // cos²Θ
    let term1 = (2.0 / 3.0) * p.s - 0.5 * t * p.delta1 + 0.5 * (u - 1.0 / 3.0) * c2f * p.delta2;
    let term2 = p.s - c2f * p.delta2;
    (9.0 / 80.0)
        * (term1 * term1 + (2.0 / 9.0) * term2 * term2 + (1.0 / 3.0) * u * s2f * s2f * p.delta2 * p.delta2)
}

/// Orientation variance Ξ = ⟨𝒜²⟩ − ℬ² of the flip-flop amplitude over pair
/// directions. Non-negative up to rounding; vanishes only when 𝒜 is
/// direction-independent.
pub fn xi_analytic(g: [f64; 3], theta_big: f64, phi_big: f64) -> f64 {
    let b = matrix_element_b(g, theta_big, phi_big);
    a_squared_mean(g, theta_big, phi_big) - b * b
}

/// Ξ for the field along the principal z axis (Θ = 0):
/// (g_x⁴ + g_y⁴ − g_x² g_y²)/20.
pub fn xi_special_parallel(gx: f64, gy: f64) -> f64 {
    let (a, b) = (gx * gx, gy * gy);
    (a * a + b * b - a * b) / 20.0
}

/// Ξ for the field in the principal xy plane (Θ = π/2), where the transverse
/// g-factor g_⊥ depends on the in-plane field components:
/// 1/g_⊥² = (B_x²/g_y² + B_y²/g_x²)/B². Result is
/// (g_z⁴ + g_⊥⁴ − g_z² g_⊥²)/20.
pub fn xi_special_perpendicular(g: [f64; 3], bx: f64, by: f64) -> Result<f64, CouplingError> {
    let b2 = bx * bx + by * by;
    if !(b2.is_finite() && b2 > 0.0) {
        return Err(CouplingError::ZeroInPlaneField);
    }
    let g_perp2 = b2 / (bx * bx / (g[1] * g[1]) + by * by / (g[0] * g[0]));
    let gz2 = g[2] * g[2];
    Ok((gz2 * gz2 + g_perp2 * g_perp2 - gz2 * g_perp2) / 20.0)
}

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1], by Newton
/// iteration on the Legendre recurrence.
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut rule = Vec::with_capacity(n);
    for i in 0..n {
        // Chebyshev-like initial guess.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        rule.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    rule.sort_by(|a, b| a.0.total_cmp(&b.0));
    rule
}

/// Ξ by direct quadrature of ⟨(𝒜 − ℬ)²⟩ over pair directions. The integrand
/// is a trigonometric polynomial of low degree, so the fixed product rule
/// (24-point Gauss-Legendre in cos θ times 64 uniform azimuths) is exact to
/// rounding. Debug path for [`xi_analytic`].
pub fn xi_quadrature(g: [f64; 3], theta_big: f64, phi_big: f64) -> f64 {
    const N_PHI: usize = 64;
    let b = matrix_element_b(g, theta_big, phi_big);
    let rule = gauss_legendre(24);
    let mut total = 0.0;
    for &(ct, w) in &rule {
        let pair_theta = ct.acos();
        let mut ring = 0.0;
        for j in 0..N_PHI {
            let pair_phi = 2.0 * std::f64::consts::PI * j as f64 / N_PHI as f64;
            let d = matrix_element_a(g, theta_big, phi_big, pair_theta, pair_phi) - b;
            ring += d * d;
        }
        total += w * ring / N_PHI as f64;
    }
    // w integrates dcosθ over [-1, 1]; the sphere mean divides by 2.
    total / 2.0
}

/// Sphere mean ⟨𝒜⟩ by the same exact product rule as [`xi_quadrature`].
/// Debug path for [`matrix_element_b`].
pub fn a_mean_quadrature(g: [f64; 3], theta_big: f64, phi_big: f64) -> f64 {
    const N_PHI: usize = 64;
    let rule = gauss_legendre(24);
    let mut total = 0.0;
    for &(ct, w) in &rule {
        let pair_theta = ct.acos();
        let mut ring = 0.0;
        for j in 0..N_PHI {
            let pair_phi = 2.0 * std::f64::consts::PI * j as f64 / N_PHI as f64;
            ring += matrix_element_a(g, theta_big, phi_big, pair_theta, pair_phi);
        }
        total += w * ring / N_PHI as f64;
    }
    total / 2.0
}
