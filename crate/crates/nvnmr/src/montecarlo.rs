//! Stochastic spin-bath oracle for the closed-form field models.
//!
//! Spins are placed at random positions with the configured density and
//! their single-spin contributions summed; averaging over realizations
//! estimates B_rms² together with a realization-level standard error.
//! Positions are static within a realization (quasi-static rms picture).
//!
//! Reproducibility: the generator is ChaCha12, a counter-based stream
//! cipher RNG with a documented algorithm. Realization `i` uses stream `i`
//! of the master seed, so results are bit-identical for a given seed and
//! parameter set regardless of thread scheduling; the seed is part of
//! every report.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;

use crate::constants::PhysicalConstants;
use crate::dipolar::{self, BathGeometry, SpinPosition, Thickness};
use crate::units::m_to_nm;
use crate::{Error, Result};

/// Half-space baths are sampled up to z = depth + HALF_SPACE_CUTOFF_FACTOR
/// × depth; the remainder is added analytically via the correction factor.
const HALF_SPACE_CUTOFF_FACTOR: f64 = 50.0;

/// Minimum lateral extent in units of depth (keeps truncation below 1%).
const MIN_EXTENT_FACTOR: f64 = 20.0;

/// One realization of discrete spin positions.
#[derive(Debug, Clone)]
pub struct BathSample {
    pub positions: Vec<SpinPosition>,
    /// Half-width L of the sampled square region, m.
    pub lateral_extent: f64,
    pub seed: u64,
}

/// Monte-Carlo estimate of the rms field.
#[derive(Debug, Clone, Copy)]
pub struct McEstimate {
    /// rms field, T.
    pub brms: f64,
    /// Standard error of `brms` from realization-to-realization scatter, T.
    pub std_error: f64,
    pub n_realizations: u32,
}

fn check_extent(geom: &BathGeometry, lateral_extent: f64) -> Result<()> {
    let min = MIN_EXTENT_FACTOR * geom.depth();
    if lateral_extent < min {
        return Err(Error::ExtentTooSmall {
            extent_nm: m_to_nm(lateral_extent),
            min_nm: m_to_nm(min),
        });
    }
    Ok(())
}

/// z-slab sampled for a geometry: [depth, depth + slab] with slab finite.
fn sampled_slab(depth: f64, thickness: Thickness) -> f64 {
    match thickness {
        Thickness::Finite(delta) => delta,
        Thickness::HalfSpace => HALF_SPACE_CUTOFF_FACTOR * depth,
    }
}

fn rng_for_realization(seed: u64, realization: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(realization);
    rng
}

fn draw_count(rng: &mut ChaCha12Rng, mean: f64) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    Poisson::new(mean).expect("positive mean").sample(rng) as u64
}

/// Draw one realization of spin positions for a layer bath.
///
/// The spin count is Poisson with mean ρ·(2L)²·Δ; positions are uniform in
/// the slab. Half-space baths are truncated at 50 depths (see
/// [`estimate_brms`] for the analytic tail).
pub fn sample_layer(geom: &BathGeometry, lateral_extent: f64, seed: u64) -> Result<BathSample> {
    check_extent(geom, lateral_extent)?;
    let (depth, thickness, rho3d) = match geom {
        BathGeometry::Layer {
            depth,
            thickness,
            rho3d,
            ..
        } => (*depth, *thickness, *rho3d),
        BathGeometry::Surface2d { .. } => {
            return Err(Error::WrongBathModel {
                needed: "layer",
                found: "2D surface",
            })
        }
    };
    let slab = sampled_slab(depth, thickness);
    let side = 2.0 * lateral_extent;
    let mut rng = rng_for_realization(seed, 0);
    let n = draw_count(&mut rng, rho3d * side * side * slab);
    let mut positions = Vec::with_capacity(n as usize);
    for _ in 0..n {
        positions.push(SpinPosition::new(
            rng.gen_range(-lateral_extent..lateral_extent),
            rng.gen_range(-lateral_extent..lateral_extent),
            depth + rng.gen::<f64>() * slab,
        ));
    }
    Ok(BathSample {
        positions,
        lateral_extent,
        seed,
    })
}

/// Exact B_rms (T) of a fixed set of spin positions (density-free mode).
pub fn brms_from_positions(
    positions: &[SpinPosition],
    species: &crate::species::NuclearSpecies,
    consts: &PhysicalConstants,
) -> Result<f64> {
    let mut sum = 0.0;
    for p in positions {
        sum += dipolar::single_spin_brms2(p, species, consts)?;
    }
    Ok(sum.sqrt())
}

/// Estimate B_rms for a layer or 2D bath by averaging realizations.
///
/// brms = sqrt(mean over realizations of Σ_spins b²); the standard error
/// follows from the realization variance via the delta method,
/// se(brms) = se(B²)/(2 brms). Realizations stream their spins, so memory
/// stays O(1) per realization.
pub fn estimate_brms(
    geom: &BathGeometry,
    lateral_extent: f64,
    n_realizations: u32,
    seed: u64,
    consts: &PhysicalConstants,
) -> Result<McEstimate> {
    if n_realizations < 2 {
        return Err(Error::InvalidParameter {
            name: "n_realizations",
            value: n_realizations as f64,
            reason: "at least 2 required for an error bar",
        });
    }
    check_extent(geom, lateral_extent)?;

    let side = 2.0 * lateral_extent;
    let (mean_count, depth, slab_or_plane, analytic_tail) = match geom {
        BathGeometry::Layer {
            depth,
            thickness,
            rho3d,
            species,
        } => {
            let slab = sampled_slab(*depth, *thickness);
            // half-space: add the analytic remainder beyond the cutoff
            let tail = if thickness.is_half_space() {
                let zc = depth + slab;
                dipolar::layer_constant_si(species, consts) * rho3d / (zc * zc * zc)
            } else {
                0.0
            };
            (rho3d * side * side * slab, *depth, Some(slab), tail)
        }
        BathGeometry::Surface2d { depth, rho2d, .. } => {
            (rho2d * side * side, *depth, None, 0.0)
        }
    };
    let species = geom.species();

    let sums: Vec<f64> = (0..n_realizations as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for_realization(seed, i);
            let n = draw_count(&mut rng, mean_count);
            let mut sum = 0.0;
            for _ in 0..n {
                let pos = SpinPosition::new(
                    rng.gen_range(-lateral_extent..lateral_extent),
                    rng.gen_range(-lateral_extent..lateral_extent),
                    match slab_or_plane {
                        Some(slab) => depth + rng.gen::<f64>() * slab,
                        None => depth,
                    },
                );
                // positions never coincide with the sensor: z >= depth > 0
                sum += dipolar::single_spin_brms2(&pos, species, consts)
                    .expect("bath spin at positive depth");
            }
            sum
        })
        .collect();

    let n = n_realizations as f64;
    let mean = sums.iter().sum::<f64>() / n + analytic_tail;
    let var = sums
        .iter()
        .map(|s| {
            let d = s + analytic_tail - mean;
            d * d
        })
        .sum::<f64>()
        / (n - 1.0);
    let se_mean = (var / n).sqrt();
    let brms = mean.max(0.0).sqrt();
    let std_error = if brms > 0.0 { se_mean / (2.0 * brms) } else { 0.0 };
    Ok(McEstimate {
        brms,
        std_error,
        n_realizations,
    })
}

/// [`estimate_brms`] restricted to 2D surface baths (positions confined to
/// the plane z = depth).
pub fn estimate_brms_2d(
    geom: &BathGeometry,
    lateral_extent: f64,
    n_realizations: u32,
    seed: u64,
    consts: &PhysicalConstants,
) -> Result<McEstimate> {
    match geom {
        BathGeometry::Surface2d { .. } => {
            estimate_brms(geom, lateral_extent, n_realizations, seed, consts)
        }
        BathGeometry::Layer { .. } => Err(Error::WrongBathModel {
            needed: "2D surface",
            found: "layer",
        }),
    }
}

/// Dump sampled positions as `x_nm,y_nm,z_nm` CSV for debugging.
pub fn dump_positions_csv<W: std::io::Write>(sample: &BathSample, mut w: W) -> Result<()> {
    writeln!(w, "x_nm,y_nm,z_nm")?;
    for p in &sample.positions {
        writeln!(w, "{},{},{}", m_to_nm(p.x), m_to_nm(p.y), m_to_nm(p.z))?;
    }
    Ok(())
}
