//! Closed-form rms dipolar field models for nuclear-spin baths.
//!
//! A nuclear spin precessing in the plane perpendicular to the NV axis
//! produces a fluctuating field along that axis. For a single spin at
//! position (x, y, z) in the surface frame (z measured into the bath from
//! the NV) the squared rms field is
//!
//! ```text
//! b² = (µ0 µI / 4π)² · 9 / r^10 · a² (y² + t²)
//!      a = x sinθ0 + z cosθ0,  t = x cosθ0 − z sinθ0,  r² = x² + y² + z²
//! ```
//!
//! with µI = ħγ/2 for spin-1/2 and θ0 the NV-axis tilt. Both transverse
//! precession quadratures enter at full moment, so the numerator carries
//! 9 = 3², not 9/2. Integrating over a uniform slab z ∈ [d, d+Δ] of
//! volumetric density ρ gives
//!
//! ```text
//! B² = 5 µ0² ħ² γ² / (1536 π) · ρ/d³ · (1 − d³/(d+Δ)³)
//! ```
//!
//! and over a plane of areal density ρ2D at height d
//!
//! ```text
//! B² = 5 µ0² ħ² γ² / (512 π) · ρ2D/d⁴.
//! ```
//!
//! The printed layer/2D prefactors absorb the spin-1/2 moment convention;
//! the Monte-Carlo module pins the consistent normalization empirically
//! (the single-spin plane integral reproduces the 2D constant to 0.04%,
//! limited only by θ0 being stored as exactly 54.7°).

use serde::{Deserialize, Serialize};

use crate::constants::PhysicalConstants;
use crate::species::NuclearSpecies;
use crate::{Error, Result};

/// Adsorbate layer thickness: finite in meters, or a half-space.
///
/// The half-space is a distinguished variant rather than a large float so
/// the correction factor is exactly 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Thickness {
    /// Finite layer thickness in meters.
    Finite(f64),
    /// Infinitely thick bath.
    HalfSpace,
}

impl Thickness {
    pub fn is_half_space(&self) -> bool {
        matches!(self, Thickness::HalfSpace)
    }

    /// Thickness in meters; `None` for the half-space.
    pub fn meters(&self) -> Option<f64> {
        match self {
            Thickness::Finite(d) => Some(*d),
            Thickness::HalfSpace => None,
        }
    }
}

/// Position of one bath spin in the surface frame, meters.
///
/// z is measured from the NV into the bath; spins above the surface have
/// z at least the NV depth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinPosition {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl SpinPosition {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn r_squared(&self) -> f64 {
        self.x * self.x + self.y * self.y + self.z * self.z
    }
}

/// Geometry of a nuclear-spin bath near one NV.
///
/// The two variants enforce that exactly one of the volumetric / areal
/// densities is set, matching the model being evaluated.
#[derive(Debug, Clone, PartialEq)]
pub enum BathGeometry {
    /// Uniform slab z ∈ [depth, depth + thickness] with volumetric density
    /// rho3d (m^-3).
    Layer {
        depth: f64,
        thickness: Thickness,
        rho3d: f64,
        species: NuclearSpecies,
    },
    /// 2D plane of spins at z = depth with areal density rho2d (m^-2).
    Surface2d {
        depth: f64,
        rho2d: f64,
        species: NuclearSpecies,
    },
}

impl BathGeometry {
    /// Finite-layer or half-space bath. `depth` > 0 m, `rho3d` >= 0 m^-3,
    /// finite thickness > 0 m.
    pub fn layer(
        depth: f64,
        thickness: Thickness,
        rho3d: f64,
        species: NuclearSpecies,
    ) -> Result<Self> {
        if !(depth > 0.0) {
            return Err(Error::InvalidParameter {
                name: "depth",
                value: depth,
                reason: "must be positive",
            });
        }
        if let Thickness::Finite(t) = thickness {
            if !(t > 0.0) {
                return Err(Error::InvalidParameter {
                    name: "thickness",
                    value: t,
                    reason: "must be positive or the half-space",
                });
            }
        }
        if !(rho3d >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "rho3d",
                value: rho3d,
                reason: "must be non-negative",
            });
        }
        Ok(Self::Layer {
            depth,
            thickness,
            rho3d,
            species,
        })
    }

    /// 2D surface bath. `depth` > 0 m, `rho2d` >= 0 m^-2.
    pub fn surface2d(depth: f64, rho2d: f64, species: NuclearSpecies) -> Result<Self> {
        if !(depth > 0.0) {
            return Err(Error::InvalidParameter {
                name: "depth",
                value: depth,
                reason: "must be positive",
            });
        }
        if !(rho2d >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "rho2d",
                value: rho2d,
                reason: "must be non-negative",
            });
        }
        Ok(Self::Surface2d {
            depth,
            rho2d,
            species,
        })
    }

    pub fn depth(&self) -> f64 {
        match self {
            Self::Layer { depth, .. } | Self::Surface2d { depth, .. } => *depth,
        }
    }

    pub fn species(&self) -> &NuclearSpecies {
        match self {
            Self::Layer { species, .. } | Self::Surface2d { species, .. } => species,
        }
    }
}

/// Squared rms field (T²) of a single spin at `pos`.
///
/// Errors if the position coincides with the sensor.
pub fn single_spin_brms2(
    pos: &SpinPosition,
    species: &NuclearSpecies,
    consts: &PhysicalConstants,
) -> Result<f64> {
    let r2 = pos.r_squared();
    if r2 == 0.0 {
        return Err(Error::ZeroRadiusPosition);
    }
    let mu_i = consts.hbar * species.gamma() / 2.0;
    let pref = consts.mu0 * mu_i / (4.0 * std::f64::consts::PI);
    Ok(pref * pref * single_spin_shape(pos, consts.theta0) / (r2 * r2 * r2 * r2 * r2))
}

/// Geometric part of the single-spin field: 9 a² (y² + t²), degree 4.
#[inline]
pub(crate) fn single_spin_shape(pos: &SpinPosition, theta0: f64) -> f64 {
    let (s, c) = theta0.sin_cos();
    let axial = pos.x * s + pos.z * c;
    let trans = pos.x * c - pos.z * s;
    9.0 * axial * axial * (pos.y * pos.y + trans * trans)
}

/// Single-spin integrand with the common (µ0 µI/4π)² prefactor divided
/// out: 9 a² (y² + t²) / r^10. Used by the sensitivity quadrature, where
/// only relative weights matter.
#[inline]
pub(crate) fn single_spin_reduced(pos: &SpinPosition, theta0: f64) -> f64 {
    let r2 = pos.r_squared();
    single_spin_shape(pos, theta0) / (r2 * r2 * r2 * r2 * r2)
}

/// Finite-thickness correction 1 − d³/(d+Δ)³.
///
/// Exactly 1 for the half-space, 0 at zero thickness, strictly increasing
/// in Δ. Requires d > 0.
pub fn layer_correction_factor(depth: f64, thickness: Thickness) -> f64 {
    debug_assert!(depth > 0.0);
    match thickness {
        Thickness::HalfSpace => 1.0,
        Thickness::Finite(delta) => {
            let ratio = depth / (depth + delta);
            1.0 - ratio * ratio * ratio
        }
    }
}

/// Squared-field constant 5 µ0² ħ² γ² / (1536 π) of the layer model, SI.
pub(crate) fn layer_constant_si(species: &NuclearSpecies, consts: &PhysicalConstants) -> f64 {
    let g = consts.mu0 * consts.hbar * species.gamma();
    5.0 * g * g / (1536.0 * std::f64::consts::PI)
}

/// Squared-field constant 5 µ0² ħ² γ² / (512 π) of the 2D model, SI.
pub(crate) fn surface2d_constant_si(species: &NuclearSpecies, consts: &PhysicalConstants) -> f64 {
    let g = consts.mu0 * consts.hbar * species.gamma();
    5.0 * g * g / (512.0 * std::f64::consts::PI)
}

/// rms field (T) of a finite layer or half-space bath.
pub fn layer_brms(geom: &BathGeometry, consts: &PhysicalConstants) -> Result<f64> {
    match geom {
        BathGeometry::Layer {
            depth,
            thickness,
            rho3d,
            species,
        } => {
            let c = layer_constant_si(species, consts);
            let corr = layer_correction_factor(*depth, *thickness);
            Ok((c * rho3d / (depth * depth * depth) * corr).sqrt())
        }
        BathGeometry::Surface2d { .. } => Err(Error::WrongBathModel {
            needed: "layer",
            found: "2D surface",
        }),
    }
}

/// rms field (T) of a 2D surface bath.
pub fn surface2d_brms(geom: &BathGeometry, consts: &PhysicalConstants) -> Result<f64> {
    match geom {
        BathGeometry::Surface2d {
            depth,
            rho2d,
            species,
        } => {
            let c = surface2d_constant_si(species, consts);
            let d2 = depth * depth;
            Ok((c * rho2d / (d2 * d2)).sqrt())
        }
        BathGeometry::Layer { .. } => Err(Error::WrongBathModel {
            needed: "2D surface",
            found: "layer",
        }),
    }
}

/// T m³ to µT nm³ (the scale in which ρ is per nm³ or nm² and d in nm).
const T_M3_TO_UT_NM3: f64 = 1e33;

/// Layer-model field prefactor sqrt(5 µ0² ħ² γ² / 1536π) in µT nm³.
///
/// 1.14 µT nm³ for protons.
pub fn prefactor_3d(species: &NuclearSpecies, consts: &PhysicalConstants) -> f64 {
    layer_constant_si(species, consts).sqrt() * T_M3_TO_UT_NM3
}

/// 2D-model field prefactor sqrt(5 µ0² ħ² γ² / 512π) in µT nm³.
///
/// 1.86 µT nm³ for fluorine-19.
pub fn prefactor_2d(species: &NuclearSpecies, consts: &PhysicalConstants) -> f64 {
    surface2d_constant_si(species, consts).sqrt() * T_M3_TO_UT_NM3
}
