//! Effective-field construction for an anisotropic effective spin-1/2.
//!
//! A dopant with g-tensor ḡ in a field B⃗ behaves like an isotropic spin in an
//! effective field: the Zeeman splitting is g_eff μ_B B with
//!
//! g_eff = sqrt(g_x² B_x² + g_y² B_y² + g_z² B_z²) / B,
//!
//! and the quantization direction seen by the spin is the unit vector along
//! (g_x B_x, g_y B_y, g_z B_z) in the g-tensor principal frame, written in
//! polar form as (Θ, Φ). Everything downstream (matrix elements, rates) is a
//! function of (principal values, Θ, Φ) only, so this module is the single
//! place where lab-frame field orientations get converted.

use nalgebra::{Complex, Matrix3, Vector3};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constants::{H_PLANCK, MU_B};

/// Degrees to radians.
pub fn deg_to_rad(deg: f64) -> f64 {
    deg * std::f64::consts::PI / 180.0
}

/// Radians to degrees.
pub fn rad_to_deg(rad: f64) -> f64 {
    rad * 180.0 / std::f64::consts::PI
}

#[derive(Debug, Error)]
pub enum SpinError {
    #[error("g-tensor matrix is not symmetric: |G - G^T| max deviation {deviation:.3e} exceeds tolerance")]
    NotSymmetric { deviation: f64 },
    #[error("g-tensor principal value {index} is {value}; all three must be positive and finite")]
    NonPositivePrincipal { index: usize, value: f64 },
    #[error("magnetic field vector is zero or non-finite; orientation is undefined")]
    ZeroField,
}

/// Serializable description of a g-tensor, either as a full symmetric matrix in
/// crystal coordinates or as principal values plus the active ZYZ Euler angles
/// (degrees) rotating the crystal frame onto the principal frame.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum GTensorSpec {
    Principal {
        /// Principal values (g_x, g_y, g_z). Order is preserved: the third
        /// entry defines the Θ = 0 axis.
        principal: [f64; 3],
        /// Euler angles (α, β, γ) in degrees, convention R = Rz(α) Ry(β) Rz(γ).
        /// Columns of R are the principal axes expressed in crystal coordinates.
        euler_zyz_deg: [f64; 3],
    },
    Matrix { matrix: [[f64; 3]; 3] },
}

/// A validated g-tensor in canonical form: principal values and the proper
/// rotation whose columns are the principal axes in crystal coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct GTensor {
    principal: [f64; 3],
    rotation: Matrix3<f64>,
}

/// Active rotation R = Rz(α) Ry(β) Rz(γ), angles in degrees.
pub fn rotation_zyz_deg(alpha_deg: f64, beta_deg: f64, gamma_deg: f64) -> Matrix3<f64> {
    let (sa, ca) = deg_to_rad(alpha_deg).sin_cos();
    let (sb, cb) = deg_to_rad(beta_deg).sin_cos();
    let (sg, cg) = deg_to_rad(gamma_deg).sin_cos();
    let rz_a = Matrix3::new(ca, -sa, 0.0, sa, ca, 0.0, 0.0, 0.0, 1.0);
    let ry_b = Matrix3::new(cb, 0.0, sb, 0.0, 1.0, 0.0, -sb, 0.0, cb);
    let rz_g = Matrix3::new(cg, -sg, 0.0, sg, cg, 0.0, 0.0, 0.0, 1.0);
    rz_a * ry_b * rz_g
}

/// ZYZ Euler angles (degrees) of a proper rotation. Gimbal-locked inputs
/// (β ≈ 0 or π) return γ = 0 with the residual z-rotation folded into α.
pub fn euler_zyz_deg(r: &Matrix3<f64>) -> [f64; 3] {
    let beta = r[(2, 2)].clamp(-1.0, 1.0).acos();
    let sb = beta.sin();
    if sb > 1e-12 {
        let alpha = r[(1, 2)].atan2(r[(0, 2)]);
        let gamma = r[(2, 1)].atan2(-r[(2, 0)]);
        [rad_to_deg(alpha), rad_to_deg(beta), rad_to_deg(gamma)]
    } else {
        // beta ~ 0: R ~ Rz(alpha + gamma) so R00 = cos, R10 = sin.
        // beta ~ pi: R ~ Rz(alpha - gamma) Ry(pi) so R00 = -cos, R10 = -sin.
        let alpha = if r[(2, 2)] > 0.0 {
            r[(1, 0)].atan2(r[(0, 0)])
        } else {
            (-r[(1, 0)]).atan2(-r[(0, 0)])
        };
        [rad_to_deg(alpha), rad_to_deg(beta), 0.0]
    }
}

fn check_principal(values: [f64; 3]) -> Result<(), SpinError> {
    for (index, &value) in values.iter().enumerate() {
        if !(value.is_finite() && value > 0.0) {
            return Err(SpinError::NonPositivePrincipal { index, value });
        }
    }
    Ok(())
}

/// Validates a g-tensor description and brings it to canonical form.
///
/// Matrix input is eigen-decomposed; principal values are sorted ascending and
/// the eigenvector basis is flipped if needed so the rotation is proper
/// (det = +1). Principal-value input keeps the given axis order.
pub fn diagonalize_g(spec: &GTensorSpec) -> Result<GTensor, SpinError> {
    match spec {
        GTensorSpec::Principal {
            principal,
            euler_zyz_deg: euler,
        } => {
            check_principal(*principal)?;
            Ok(GTensor {
                principal: *principal,
                rotation: rotation_zyz_deg(euler[0], euler[1], euler[2]),
            })
        }
        GTensorSpec::Matrix { matrix } => {
            let m = Matrix3::from_fn(|i, j| matrix[i][j]);
            let scale = m.amax().max(f64::MIN_POSITIVE);
            let asym = (m - m.transpose()).amax();
            if !asym.is_finite() || asym > 1e-9 * scale {
                return Err(SpinError::NotSymmetric { deviation: asym });
            }
            let sym = (m + m.transpose()) * 0.5;
            let eig = sym.symmetric_eigen();
            let mut order = [0usize, 1, 2];
            order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
            let mut principal = [0.0; 3];
            let mut rotation = Matrix3::zeros();
            for (col, &src) in order.iter().enumerate() {
                principal[col] = eig.eigenvalues[src];
                rotation.set_column(col, &eig.eigenvectors.column(src).into_owned());
            }
            if rotation.determinant() < 0.0 {
                let flipped = -rotation.column(2);
                rotation.set_column(2, &flipped);
            }
            check_principal(principal)?;
            Ok(GTensor {
                principal,
                rotation,
            })
        }
    }
}

impl GTensor {
    /// Principal values (g_x, g_y, g_z).
    pub fn principal(&self) -> [f64; 3] {
        self.principal
    }

    /// Proper rotation whose columns are the principal axes in crystal
    /// coordinates.
    pub fn rotation(&self) -> &Matrix3<f64> {
        &self.rotation
    }

    /// ZYZ Euler angles (degrees) of the principal-axis rotation.
    pub fn euler_zyz_deg(&self) -> [f64; 3] {
        euler_zyz_deg(&self.rotation)
    }

    /// The tensor as a symmetric matrix in crystal coordinates: R diag(g) Rᵀ.
    pub fn matrix(&self) -> Matrix3<f64> {
        self.rotation * Matrix3::from_diagonal(&Vector3::from(self.principal)) * self.rotation.transpose()
    }

    /// A crystal-frame vector expressed in the principal frame (Rᵀ v).
    pub fn to_principal(&self, v_crystal: Vector3<f64>) -> Vector3<f64> {
        self.rotation.transpose() * v_crystal
    }

    /// Effective field for a crystal-frame field vector (any magnitude unit).
    pub fn effective_field(&self, b_crystal: Vector3<f64>) -> Result<EffectiveField, SpinError> {
        effective_field(self.principal, self.to_principal(b_crystal))
    }
}

/// Magnetic field at the interface level: magnitude in millitesla and a
/// crystal-frame orientation in spherical angles (degrees). The direction is
/// (sin θ cos φ, sin θ sin φ, cos θ), so θ = 90° sweeps the crystal xy plane
/// and φ = 0°, θ variable sweeps the xz plane.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct FieldSpec {
    pub magnitude_mt: f64,
    pub phi_deg: f64,
    pub theta_deg: f64,
}

impl FieldSpec {
    pub fn b_tesla(&self) -> f64 {
        self.magnitude_mt * 1e-3
    }

    /// Crystal-frame unit vector of the field direction.
    pub fn direction(&self) -> Vector3<f64> {
        let (sp, cp) = deg_to_rad(self.phi_deg).sin_cos();
        let (st, ct) = deg_to_rad(self.theta_deg).sin_cos();
        Vector3::new(st * cp, st * sp, ct)
    }

    /// Crystal-frame field vector in tesla.
    pub fn vector_tesla(&self) -> Vector3<f64> {
        self.direction() * self.b_tesla()
    }
}

/// The effective field seen by the spin: scalar g-factor and the quantization
/// direction (Θ, Φ) in the g-tensor principal frame.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct EffectiveField {
    pub g_eff: f64,
    pub theta_rad: f64,
    pub phi_rad: f64,
}

/// Computes (g_eff, Θ, Φ) from principal values and the field vector expressed
/// in the principal frame. The field magnitude cancels out of the direction,
/// so any unit works; a zero or non-finite field is an error.
pub fn effective_field(
    principal: [f64; 3],
    b_principal: Vector3<f64>,
) -> Result<EffectiveField, SpinError> {
    check_principal(principal)?;
    let b = b_principal.norm();
    if !(b.is_finite() && b > 0.0) {
        return Err(SpinError::ZeroField);
    }
    let gb = Vector3::new(
        principal[0] * b_principal.x,
        principal[1] * b_principal.y,
        principal[2] * b_principal.z,
    );
    let g_eff = gb.norm() / b;
    let theta_rad = (gb.z / (g_eff * b)).clamp(-1.0, 1.0).acos();
    let phi_rad = if gb.x == 0.0 && gb.y == 0.0 {
        0.0
    } else {
        gb.y.atan2(gb.x)
    };
    Ok(EffectiveField {
        g_eff,
        theta_rad,
        phi_rad,
    })
}

/// Zeeman eigenstates of the effective field. `plus` is the ground state for a
/// spin with Zeeman energy -μ_B g_eff B (n̂·S⃗); `minus` the excited state.
/// Components are in the principal-frame S_z basis (|↑⟩, |↓⟩).
#[derive(Debug, Clone, PartialEq)]
pub struct ZeemanEigenpair {
    pub splitting_j: f64,
    pub splitting_hz: f64,
    pub plus: [Complex<f64>; 2],
    pub minus: [Complex<f64>; 2],
}

/// Eigenstates and splitting for an effective field at magnitude `b_tesla`.
pub fn zeeman_eigenpair(eff: &EffectiveField, b_tesla: f64) -> ZeemanEigenpair {
    let half = eff.theta_rad / 2.0;
    let (sh, ch) = half.sin_cos();
    let phase = Complex::new(0.0, eff.phi_rad).exp();
    let splitting_j = eff.g_eff * MU_B * b_tesla;
    ZeemanEigenpair {
        splitting_j,
        splitting_hz: splitting_j / H_PLANCK,
        plus: [Complex::new(ch, 0.0), phase * sh],
        minus: [-phase.conj() * sh, Complex::new(ch, 0.0)],
    }
}

/// Zeeman splitting in Hz for a bare g-factor at `b_tesla`.
pub fn splitting_hz(g_eff: f64, b_tesla: f64) -> f64 {
    g_eff * MU_B * b_tesla / H_PLANCK
}

/// Range (min, max) of the Zeeman splitting in Hz over a set of crystal-frame
/// orientations (φ in degrees, θ in degrees), at fixed magnitude. Returns
/// `None` for an empty set.
pub fn zeeman_range<I>(g: &GTensor, b_tesla: f64, orientations: I) -> Result<Option<(f64, f64)>, SpinError>
where
    I: IntoIterator<Item = (f64, f64)>,
{
    let mut range: Option<(f64, f64)> = None;
    for (phi_deg, theta_deg) in orientations {
        let dir = FieldSpec {
            magnitude_mt: 1.0,
            phi_deg,
            theta_deg,
        }
        .direction();
        let eff = g.effective_field(dir)?;
        let nu = splitting_hz(eff.g_eff, b_tesla);
        range = Some(match range {
            None => (nu, nu),
            Some((lo, hi)) => (lo.min(nu), hi.max(nu)),
        });
    }
    Ok(range)
}

/// Evenly spaced angles in degrees, inclusive of both endpoints.
pub fn angle_grid(start_deg: f64, stop_deg: f64, step_deg: f64) -> Vec<f64> {
    assert!(step_deg > 0.0, "angle step must be positive");
    let n = ((stop_deg - start_deg) / step_deg).round() as usize;
    (0..=n).map(|i| start_deg + i as f64 * step_deg).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn isotropic_tensor_gives_bare_g() {
        let g = diagonalize_g(&GTensorSpec::Principal {
            principal: [2.0, 2.0, 2.0],
            euler_zyz_deg: [0.0, 0.0, 0.0],
        })
        .unwrap();
        let eff = g.effective_field(Vector3::new(0.3, -0.1, 0.9)).unwrap();
        assert_relative_eq!(eff.g_eff, 2.0, max_relative = 1e-14);
    }

    #[test]
    fn effective_field_matches_reference_point() {
        // g = (1, 2, 3), B along (1, 1, 1)/sqrt(3).
        let b = Vector3::new(1.0, 1.0, 1.0).normalize();
        let eff = effective_field([1.0, 2.0, 3.0], b).unwrap();
        assert_relative_eq!(eff.g_eff, 2.160_246_899_469_287_4, max_relative = 1e-13);
        assert_relative_eq!(rad_to_deg(eff.theta_rad), 36.699_225_2, epsilon = 1e-6);
        assert_relative_eq!(rad_to_deg(eff.phi_rad), 63.434_948_82, epsilon = 1e-6);
    }

    #[test]
    fn splitting_reference_values() {
        // g_eff = 2 at 1 mT -> 27.99 MHz; 11.7 at 0.3 mT -> 49.13 MHz.
        assert_relative_eq!(splitting_hz(2.0, 1e-3), 27.992_489_87e6, max_relative = 1e-8);
        assert_relative_eq!(splitting_hz(11.7, 0.3e-3), 49.126_8e6, max_relative = 1e-5);
        assert_relative_eq!(splitting_hz(1.7, 0.3e-3), 7.138_1e6, max_relative = 1e-4);
    }

    #[test]
    fn zeeman_eigenpair_is_orthonormal_and_diagonalizes() {
        let eff = EffectiveField {
            g_eff: 3.4,
            theta_rad: 1.1,
            phi_rad: -2.3,
        };
        let pair = zeeman_eigenpair(&eff, 0.5e-3);
        let norm_p: f64 = pair.plus.iter().map(|c| c.norm_sqr()).sum();
        let norm_m: f64 = pair.minus.iter().map(|c| c.norm_sqr()).sum();
        let overlap = pair.plus[0].conj() * pair.minus[0] + pair.plus[1].conj() * pair.minus[1];
        assert_relative_eq!(norm_p, 1.0, max_relative = 1e-14);
        assert_relative_eq!(norm_m, 1.0, max_relative = 1e-14);
        assert!(overlap.norm() < 1e-14);

        // n̂·S⃗ |±⟩ = ±(1/2)|±⟩ with n̂ = (sinΘcosΦ, sinΘsinΦ, cosΘ).
        let (st, ct) = eff.theta_rad.sin_cos();
        let (sp, cp) = eff.phi_rad.sin_cos();
        let nx = st * cp;
        let ny = st * sp;
        let nz = ct;
        let h00 = Complex::new(0.5 * nz, 0.0);
        let h01 = Complex::new(0.5 * nx, -0.5 * ny);
        for (state, sign) in [(&pair.plus, 1.0), (&pair.minus, -1.0)] {
            let r0 = h00 * state[0] + h01 * state[1];
            let r1 = h01.conj() * state[0] - h00 * state[1];
            assert!((r0 - state[0] * 0.5 * sign).norm() < 1e-14);
            assert!((r1 - state[1] * 0.5 * sign).norm() < 1e-14);
        }
    }

    #[test]
    fn matrix_roundtrip_recovers_effective_field() {
        let spec = GTensorSpec::Principal {
            principal: [0.49, 1.40, 14.64],
            euler_zyz_deg: [112.16, 58.67, 22.47],
        };
        let g = diagonalize_g(&spec).unwrap();
        let m = g.matrix();
        let g2 = diagonalize_g(&GTensorSpec::Matrix {
            matrix: [
                [m[(0, 0)], m[(0, 1)], m[(0, 2)]],
                [m[(1, 0)], m[(1, 1)], m[(1, 2)]],
                [m[(2, 0)], m[(2, 1)], m[(2, 2)]],
            ],
        })
        .unwrap();
        // Axis labels may differ after eigen-sorting, but g_eff must not.
        for dir in [
            Vector3::new(1.0, 0.0, 0.0),
            Vector3::new(0.2, -0.7, 0.4).normalize(),
            Vector3::new(0.0, 0.0, 1.0),
        ] {
            let a = g.effective_field(dir).unwrap().g_eff;
            let b = g2.effective_field(dir).unwrap().g_eff;
            assert_relative_eq!(a, b, max_relative = 1e-10);
        }
    }

    #[test]
    fn euler_roundtrip() {
        for angles in [[112.16, 58.67, 22.47], [10.0, 0.0, 0.0], [0.0, 180.0, 0.0], [-40.0, 90.0, 170.0]] {
            let r = rotation_zyz_deg(angles[0], angles[1], angles[2]);
            let e = euler_zyz_deg(&r);
            let r2 = rotation_zyz_deg(e[0], e[1], e[2]);
            assert!((r - r2).amax() < 1e-12, "angles {angles:?} -> {e:?}");
        }
    }

    #[test]
    fn rejects_bad_tensors() {
        assert!(matches!(
            diagonalize_g(&GTensorSpec::Principal {
                principal: [2.0, -1.0, 3.0],
                euler_zyz_deg: [0.0; 3],
            }),
            Err(SpinError::NonPositivePrincipal { index: 1, .. })
        ));
        assert!(matches!(
            diagonalize_g(&GTensorSpec::Matrix {
                matrix: [[2.0, 0.5, 0.0], [0.1, 2.0, 0.0], [0.0, 0.0, 1.0]],
            }),
            Err(SpinError::NotSymmetric { .. })
        ));
        assert!(matches!(
            effective_field([1.0, 1.0, 1.0], Vector3::zeros()),
            Err(SpinError::ZeroField)
        ));
    }

    #[test]
    fn angle_grid_hits_endpoints() {
        let grid = angle_grid(0.0, 180.0, 1.0);
        assert_eq!(grid.len(), 181);
        assert_eq!(grid[0], 0.0);
        assert_eq!(*grid.last().unwrap(), 180.0);
    }
}
