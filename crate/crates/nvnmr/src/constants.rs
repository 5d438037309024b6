//! Physical constants shared by every model in the crate.

use std::f64::consts::PI;

/// Vacuum permeability µ0 in T m A^-1 (CODATA 2018).
pub const MU_0: f64 = 1.256_637_062_12e-6;

/// Reduced Planck constant in J s (CODATA 2018).
pub const HBAR: f64 = 1.054_571_817e-34;

/// NV electron gyromagnetic ratio in rad s^-1 T^-1 (2π · 28.0249 GHz/T).
///
/// Only the decoherence model's sensitivity scale depends on this value.
pub const GAMMA_E: f64 = 2.0 * PI * 28.0249e9;

/// Angle between the NV symmetry axis and the surface normal of a
/// <100>-cut diamond, in radians. Stored as exactly 54.7°; the magic angle
/// arccos(1/sqrt(3)) = 54.7356° differs by 0.07%, which shifts the
/// single-spin plane integral by 0.035% relative to the closed-form layer
/// constants. That offset is absorbed by the Monte-Carlo and quadrature
/// tolerances.
pub const THETA_0_DEG: f64 = 54.7;

/// Constant bundle passed to the field and coherence models.
///
/// Immutable after construction; safe to share across threads.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Vacuum permeability, T m A^-1.
    pub mu0: f64,
    /// Reduced Planck constant, J s.
    pub hbar: f64,
    /// NV electron gyromagnetic ratio, rad s^-1 T^-1.
    pub gamma_e: f64,
    /// NV-axis tilt from the surface normal, rad.
    pub theta0: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            mu0: MU_0,
            hbar: HBAR,
            gamma_e: GAMMA_E,
            theta0: THETA_0_DEG.to_radians(),
        }
    }
}
