//! Inversion of rms-field measurements into NV depth, surface density and
//! molecule counts, with thickness-assumption sensitivity analysis.

use serde::{Deserialize, Serialize};

use crate::constants::PhysicalConstants;
use crate::dipolar::{
    layer_brms, layer_constant_si, surface2d_constant_si, BathGeometry, Thickness,
};
use crate::profile;
use crate::species::NuclearSpecies;
use crate::units::{m_to_nm, m2_to_nm2, per_m2_to_per_nm2, t_to_nt};
use crate::{Error, Result};

/// Bisection bracket and convergence for the depth inversion.
const BRACKET_LO: f64 = 0.1e-9;
const BRACKET_HI: f64 = 100e-9;
const BRACKET_LIMIT: f64 = 1.0; // 1 m: beyond this the input is unphysical
const DEPTH_REL_TOL: f64 = 1e-12;

/// Result of inverting one layer-model B_rms into a depth.
#[derive(Debug, Clone, Copy)]
pub struct DepthEstimate {
    /// NV depth, m.
    pub depth: f64,
    pub assumed_thickness: Thickness,
    /// Assumed volumetric density, m^-3.
    pub assumed_rho3d: f64,
    /// The inverted rms field, T.
    pub brms_in: f64,
    /// One-sigma depth uncertainty, m (0 when no brms sigma was given).
    pub uncertainty: f64,
}

fn forward_brms(
    depth: f64,
    thickness: Thickness,
    rho3d: f64,
    species: &NuclearSpecies,
    consts: &PhysicalConstants,
) -> f64 {
    let geom = BathGeometry::layer(depth, thickness, rho3d, species.clone())
        .expect("bracket depths are positive");
    layer_brms(&geom, consts).expect("layer geometry")
}

/// Unique depth with layer_brms(depth) = brms, by bisection on the
/// strictly decreasing forward map. Relative residual is at most 1e-10.
///
/// brms = 0 has no finite solution and errors as "infinite depth".
pub fn depth_from_brms(
    brms: f64,
    thickness: Thickness,
    rho3d: f64,
    species: &NuclearSpecies,
    consts: &PhysicalConstants,
) -> Result<DepthEstimate> {
    if brms == 0.0 {
        return Err(Error::InfiniteDepth);
    }
    if !(brms > 0.0) {
        return Err(Error::InvalidParameter {
            name: "brms",
            value: brms,
            reason: "must be positive",
        });
    }
    if !(rho3d > 0.0) {
        return Err(Error::InvalidParameter {
            name: "rho3d",
            value: rho3d,
            reason: "must be positive for a depth inversion",
        });
    }
    let f = |d: f64| forward_brms(d, thickness, rho3d, species, consts);

    // expand the bracket geometrically if the default does not contain
    // the root; f is unbounded for d -> 0 and -> 0 for d -> inf
    let mut lo = BRACKET_LO;
    let mut hi = BRACKET_HI;
    while f(lo) < brms {
        lo /= 2.0;
        if lo < 1e-15 {
            return Err(Error::Numerical(format!(
                "no depth above 1e-6 nm reproduces B_rms = {:.3} nT",
                t_to_nt(brms)
            )));
        }
    }
    while f(hi) > brms {
        hi *= 2.0;
        if hi > BRACKET_LIMIT {
            return Err(Error::BracketExpansionFailed {
                brms_nt: t_to_nt(brms),
                limit_nm: m_to_nm(BRACKET_LIMIT),
            });
        }
    }

    let mut mid = 0.5 * (lo + hi);
    while (hi - lo) > DEPTH_REL_TOL * mid {
        mid = 0.5 * (lo + hi);
        if f(mid) > brms {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let depth = 0.5 * (lo + hi);

    let residual = (f(depth) - brms).abs() / brms;
    if residual > 1e-10 {
        return Err(Error::Numerical(format!(
            "depth inversion residual {residual:.2e} exceeds 1e-10"
        )));
    }
    Ok(DepthEstimate {
        depth,
        assumed_thickness: thickness,
        assumed_rho3d: rho3d,
        brms_in: brms,
        uncertainty: 0.0,
    })
}

/// First-order depth uncertainty from a brms uncertainty.
///
/// With B(d)² = K u(d), u = 1/d³ − 1/(d+Δ)³, the analytic derivative is
/// dB/dd = B u′/(2u), so σ_d = σ_B · 2u / (B |u′|).
pub fn depth_sigma(
    estimate: &DepthEstimate,
    brms_sigma: f64,
    species: &NuclearSpecies,
    consts: &PhysicalConstants,
) -> f64 {
    let _ = (species, consts); // derivative depends only on the geometry
    if brms_sigma == 0.0 {
        return 0.0;
    }
    let d = estimate.depth;
    let (u, du) = match estimate.assumed_thickness {
        Thickness::HalfSpace => (d.powi(-3), -3.0 * d.powi(-4)),
        Thickness::Finite(delta) => (
            d.powi(-3) - (d + delta).powi(-3),
            -3.0 * d.powi(-4) + 3.0 * (d + delta).powi(-4),
        ),
    };
    brms_sigma * 2.0 * u / (estimate.brms_in * du.abs())
}

/// Exact algebraic inversion of the 2D model:
/// ρ2D = B² d⁴ · 512π / (5 µ0² (γħ)²), in m^-2.
pub fn density2d_from_brms(
    brms: f64,
    depth: f64,
    species: &NuclearSpecies,
    consts: &PhysicalConstants,
) -> Result<f64> {
    if !(brms >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "brms",
            value: brms,
            reason: "must be non-negative",
        });
    }
    if !(depth > 0.0) {
        return Err(Error::InvalidParameter {
            name: "depth",
            value: depth,
            reason: "must be positive",
        });
    }
    let d2 = depth * depth;
    Ok(brms * brms * d2 * d2 / surface2d_constant_si(species, consts))
}

/// One-sigma density uncertainty. At fixed depth σ_ρ/ρ = 2 σ_B/B; a depth
/// uncertainty adds 4 σ_d/d in quadrature (ρ ∝ B² d⁴).
pub fn density2d_sigma(rho2d: f64, brms: f64, brms_sigma: f64, depth: f64, depth_sigma: f64) -> f64 {
    if rho2d == 0.0 {
        return 0.0;
    }
    let field_term = if brms > 0.0 { 2.0 * brms_sigma / brms } else { 0.0 };
    let depth_term = 4.0 * depth_sigma / depth;
    rho2d * (field_term * field_term + depth_term * depth_term).sqrt()
}

/// Molecules contributing to the signal:
/// (ρ_spins / atoms_per_molecule) × A with A = 0.735 d² from the profile
/// module. Full precision; round only for display.
pub fn molecule_count(rho2d_spins: f64, atoms_per_molecule: u32, depth: f64) -> Result<f64> {
    if atoms_per_molecule < 1 {
        return Err(Error::InvalidParameter {
            name: "atoms_per_molecule",
            value: atoms_per_molecule as f64,
            reason: "must be at least 1",
        });
    }
    Ok(rho2d_spins / atoms_per_molecule as f64 * profile::sensitive_area(depth))
}

/// One row of the thickness-sensitivity table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ThicknessRow {
    /// Assumed layer thickness, nm; `null` encodes the half-space.
    pub delta_nm: Option<f64>,
    pub depth_nm: f64,
    pub rho_f_nm2: f64,
    pub rho_mol_nm2: f64,
    pub molecules: f64,
}

/// Re-run the full depth → density → count chain for each assumed
/// thickness.
#[allow(clippy::too_many_arguments)]
pub fn thickness_table(
    brms_h: f64,
    brms_f: f64,
    rho3d: f64,
    h_species: &NuclearSpecies,
    f_species: &NuclearSpecies,
    atoms_per_molecule: u32,
    deltas: &[Thickness],
    consts: &PhysicalConstants,
) -> Result<Vec<ThicknessRow>> {
    if deltas.is_empty() {
        return Err(Error::InvalidParameter {
            name: "delta_grid",
            value: 0.0,
            reason: "must be non-empty",
        });
    }
    let mut rows = Vec::with_capacity(deltas.len());
    for &delta in deltas {
        let est = depth_from_brms(brms_h, delta, rho3d, h_species, consts)?;
        let rho_f = density2d_from_brms(brms_f, est.depth, f_species, consts)?;
        let molecules = molecule_count(rho_f, atoms_per_molecule, est.depth)?;
        rows.push(ThicknessRow {
            delta_nm: delta.meters().map(m_to_nm),
            depth_nm: m_to_nm(est.depth),
            rho_f_nm2: per_m2_to_per_nm2(rho_f),
            rho_mol_nm2: per_m2_to_per_nm2(rho_f) / atoms_per_molecule as f64,
            molecules,
        });
    }
    Ok(rows)
}

/// Relative depth error when the assumed thickness differs from the true
/// one: forward-compute brms at (d_true, Δ_true), invert with each
/// assumed Δ, report (d_inferred − d_true)/d_true.
pub fn thickness_error_curve(
    d_true: f64,
    delta_true: Thickness,
    rho3d: f64,
    species: &NuclearSpecies,
    assumed: &[Thickness],
    consts: &PhysicalConstants,
) -> Result<Vec<(Thickness, f64)>> {
    let brms = forward_brms(d_true, delta_true, rho3d, species, consts);
    assumed
        .iter()
        .map(|&delta| {
            let est = depth_from_brms(brms, delta, rho3d, species, consts)?;
            Ok((delta, (est.depth - d_true) / d_true))
        })
        .collect()
}

/// Full per-NV analysis: depth from the proton branch, surface density,
/// molecule count and thickness table from the fluorine branch.
#[derive(Debug, Clone)]
pub struct SurfaceReport {
    pub nv_label: String,
    pub depth: DepthEstimate,
    /// Fluorine-branch rms field that produced the density, T.
    pub brms_f_in: f64,
    /// Areal spin density, m^-2.
    pub rho2d_spins: f64,
    /// Areal molecular density, m^-2.
    pub rho2d_molecules: f64,
    pub atoms_per_molecule: u32,
    /// Sensitive area 0.735 d², m².
    pub sensitive_area: f64,
    /// Molecules in the sensitive area, full precision.
    pub molecule_count: f64,
    pub sigma_depth: f64,
    pub sigma_rho2d: f64,
    pub sigma_molecules: f64,
    pub thickness_table: Vec<ThicknessRow>,
}

/// Inputs for [`surface_report`], SI units.
#[derive(Debug, Clone)]
pub struct ReportInputs<'a> {
    pub nv_label: String,
    /// One or more proton-branch B_rms measurements, T. Multiple values
    /// are averaged before inversion.
    pub brms_h: Vec<f64>,
    pub brms_h_sigma: f64,
    /// Fluorine-branch B_rms, T.
    pub brms_f: f64,
    pub brms_f_sigma: f64,
    pub thickness: Thickness,
    pub rho3d: f64,
    pub atoms_per_molecule: u32,
    pub h_species: &'a NuclearSpecies,
    pub f_species: &'a NuclearSpecies,
    /// Thickness grid for the sensitivity table.
    pub delta_grid: Vec<Thickness>,
}

pub fn surface_report(inputs: &ReportInputs, consts: &PhysicalConstants) -> Result<SurfaceReport> {
    if inputs.brms_h.is_empty() {
        return Err(Error::InvalidParameter {
            name: "brms_h",
            value: 0.0,
            reason: "at least one proton measurement required",
        });
    }
    let brms_h = inputs.brms_h.iter().sum::<f64>() / inputs.brms_h.len() as f64;
    let mut depth = depth_from_brms(
        brms_h,
        inputs.thickness,
        inputs.rho3d,
        inputs.h_species,
        consts,
    )?;
    depth.uncertainty = depth_sigma(&depth, inputs.brms_h_sigma, inputs.h_species, consts);

    let rho2d_spins = density2d_from_brms(inputs.brms_f, depth.depth, inputs.f_species, consts)?;
    let rho2d_molecules = rho2d_spins / inputs.atoms_per_molecule as f64;
    let area = profile::sensitive_area(depth.depth);
    let count = molecule_count(rho2d_spins, inputs.atoms_per_molecule, depth.depth)?;

    let sigma_rho = density2d_sigma(
        rho2d_spins,
        inputs.brms_f,
        inputs.brms_f_sigma,
        depth.depth,
        depth.uncertainty,
    );
    // count ∝ B_f² d⁶ through the chained depth
    let sigma_count = if count > 0.0 {
        let field_term = if inputs.brms_f > 0.0 {
            2.0 * inputs.brms_f_sigma / inputs.brms_f
        } else {
            0.0
        };
        let depth_term = 6.0 * depth.uncertainty / depth.depth;
        count * (field_term * field_term + depth_term * depth_term).sqrt()
    } else {
        0.0
    };

    let table = thickness_table(
        brms_h,
        inputs.brms_f,
        inputs.rho3d,
        inputs.h_species,
        inputs.f_species,
        inputs.atoms_per_molecule,
        &inputs.delta_grid,
        consts,
    )?;

    Ok(SurfaceReport {
        nv_label: inputs.nv_label.clone(),
        depth,
        brms_f_in: inputs.brms_f,
        rho2d_spins,
        rho2d_molecules,
        atoms_per_molecule: inputs.atoms_per_molecule,
        sensitive_area: area,
        molecule_count: count,
        sigma_depth: depth.uncertainty,
        sigma_rho2d: sigma_rho,
        sigma_molecules: sigma_count,
        thickness_table: table,
    })
}

/// JSON form of a [`SurfaceReport`], lab units.
#[derive(Debug, Serialize, Deserialize)]
pub struct ReportJson {
    pub nv_label: String,
    pub inputs: ReportInputsJson,
    pub outputs: ReportOutputsJson,
    pub thickness_table: Vec<ThicknessRow>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ReportInputsJson {
    pub brms_h_nT: f64,
    pub brms_f_nT: f64,
    pub b0_mT: f64,
    pub assumed: AssumedJson,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct AssumedJson {
    /// `null` encodes the half-space.
    pub delta_nm: Option<f64>,
    pub rho3d_nm3: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ReportOutputsJson {
    pub depth_nm: f64,
    pub sigma_depth_nm: f64,
    pub rho2d_f_nm2: f64,
    pub rho2d_mol_nm2: f64,
    pub area_nm2: f64,
    /// Full precision; display rounds to the nearest integer.
    pub molecules: f64,
    pub sigma_molecules: f64,
}

impl SurfaceReport {
    pub fn to_json(&self, b0_mt: f64, rho3d_nm3: f64) -> ReportJson {
        ReportJson {
            nv_label: self.nv_label.clone(),
            inputs: ReportInputsJson {
                brms_h_nT: t_to_nt(self.depth.brms_in),
                brms_f_nT: t_to_nt(self.brms_f_in),
                b0_mT: b0_mt,
                assumed: AssumedJson {
                    delta_nm: self.depth.assumed_thickness.meters().map(m_to_nm),
                    rho3d_nm3,
                },
            },
            outputs: ReportOutputsJson {
                depth_nm: m_to_nm(self.depth.depth),
                sigma_depth_nm: m_to_nm(self.sigma_depth),
                rho2d_f_nm2: per_m2_to_per_nm2(self.rho2d_spins),
                rho2d_mol_nm2: per_m2_to_per_nm2(self.rho2d_molecules),
                area_nm2: m2_to_nm2(self.sensitive_area),
                molecules: self.molecule_count,
                sigma_molecules: self.sigma_molecules,
            },
            thickness_table: self.thickness_table.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::species::SpeciesRegistry;
    use crate::units::{nm_to_m, nt_to_t, per_nm3_to_per_m3};

    fn setup() -> (SpeciesRegistry, PhysicalConstants) {
        (SpeciesRegistry::default(), PhysicalConstants::default())
    }

    const RHO_WATER: f64 = 60.0; // nm^-3

    #[test]
    fn depth_from_331_nt_is_6_3_nm() {
        let (reg, c) = setup();
        let est = depth_from_brms(
            nt_to_t(331.0),
            Thickness::Finite(nm_to_m(1.0)),
            per_nm3_to_per_m3(RHO_WATER),
            reg.get("1H").unwrap(),
            &c,
        )
        .unwrap();
        let d_nm = m_to_nm(est.depth);
        assert!((d_nm - 6.3).abs() < 0.1, "depth = {d_nm} nm");
        // frozen full-precision value for regression
        assert!((d_nm - 6.3319).abs() < 0.002, "depth = {d_nm} nm");
    }

    #[test]
    fn depth_round_trip_1e9() {
        let (reg, c) = setup();
        let h = reg.get("1H").unwrap();
        let rho = per_nm3_to_per_m3(RHO_WATER);
        for thickness in [
            Thickness::Finite(nm_to_m(0.25)),
            Thickness::Finite(nm_to_m(1.0)),
            Thickness::HalfSpace,
        ] {
            let d_true = nm_to_m(5.0);
            let brms = forward_brms(d_true, thickness, rho, h, &c);
            let est = depth_from_brms(brms, thickness, rho, h, &c).unwrap();
            assert!(((est.depth - d_true) / d_true).abs() < 1e-9);
        }
    }

    #[test]
    fn half_space_depth_exceeds_finite_layer_depth() {
        let (reg, c) = setup();
        let h = reg.get("1H").unwrap();
        let rho = per_nm3_to_per_m3(RHO_WATER);
        let brms = nt_to_t(331.0);
        let d1 = depth_from_brms(brms, Thickness::Finite(nm_to_m(1.0)), rho, h, &c)
            .unwrap()
            .depth;
        let d2 = depth_from_brms(brms, Thickness::HalfSpace, rho, h, &c)
            .unwrap()
            .depth;
        assert!(d2 > d1);
    }

    #[test]
    fn zero_brms_is_infinite_depth() {
        let (reg, c) = setup();
        let err = depth_from_brms(
            0.0,
            Thickness::HalfSpace,
            per_nm3_to_per_m3(RHO_WATER),
            reg.get("1H").unwrap(),
            &c,
        );
        assert!(matches!(err, Err(Error::InfiniteDepth)));
    }

    #[test]
    fn tiny_brms_fails_bracket_expansion() {
        let (reg, c) = setup();
        let err = depth_from_brms(
            1e-20,
            Thickness::HalfSpace,
            per_nm3_to_per_m3(RHO_WATER),
            reg.get("1H").unwrap(),
            &c,
        );
        assert!(matches!(err, Err(Error::BracketExpansionFailed { .. })));
    }

    #[test]
    fn density_reference_values() {
        let (reg, c) = setup();
        let f = reg.get("19F").unwrap();
        // 102 nT at 6.4 nm: 5.0(2) F/nm²
        let rho = density2d_from_brms(nt_to_t(102.0), nm_to_m(6.4), f, &c).unwrap();
        assert!((per_m2_to_per_nm2(rho) - 5.0).abs() < 0.2);
        // 163 nT at 6.3 nm: 12.1(3) F/nm²
        let rho = density2d_from_brms(nt_to_t(163.0), nm_to_m(6.3), f, &c).unwrap();
        assert!((per_m2_to_per_nm2(rho) - 12.1).abs() < 0.3);
        // zero field, any depth
        assert_eq!(
            density2d_from_brms(0.0, nm_to_m(5.0), f, &c).unwrap(),
            0.0
        );
    }

    #[test]
    fn density_inversion_is_exact() {
        let (reg, c) = setup();
        let f = reg.get("19F").unwrap().clone();
        let d = nm_to_m(6.4);
        let rho_true = crate::units::per_nm2_to_per_m2(5.05);
        let g = BathGeometry::surface2d(d, rho_true, f.clone()).unwrap();
        let brms = crate::dipolar::surface2d_brms(&g, &c).unwrap();
        let rho_back = density2d_from_brms(brms, d, &f, &c).unwrap();
        assert!(((rho_back - rho_true) / rho_true).abs() < 1e-14);
    }

    #[test]
    fn molecule_count_reference_values() {
        // (5.05 nm^-2, 3, 6.4 nm) -> 51 and (12.1 nm^-2, 3, 6.3 nm) -> 117
        let n = molecule_count(
            crate::units::per_nm2_to_per_m2(5.05),
            3,
            nm_to_m(6.4),
        )
        .unwrap();
        assert_eq!(n.round() as i64, 51);
        let n = molecule_count(
            crate::units::per_nm2_to_per_m2(12.1),
            3,
            nm_to_m(6.3),
        )
        .unwrap();
        assert_eq!(n.round() as i64, 117);
    }

    /// The ten published (molecular density, depth) pairs and their counts.
    pub(crate) const MOLECULE_TABLE: [(f64, f64, i64); 10] = [
        (1.7, 6.4, 51),
        (2.9, 7.3, 114),
        (0.8, 5.3, 17),
        (0.3, 4.3, 4),
        (6.9, 9.1, 420),
        (4.0, 6.3, 117),
        (6.9, 7.2, 263),
        (2.3, 5.5, 51),
        (1.3, 4.7, 21),
        (16.0, 8.9, 932),
    ];

    #[test]
    fn molecule_table_reproduced_exactly() {
        for &(rho_mol, d_nm, expected) in &MOLECULE_TABLE {
            // counts use the molecular density directly: 1 atom per "molecule"
            let n = molecule_count(
                crate::units::per_nm2_to_per_m2(rho_mol),
                1,
                nm_to_m(d_nm),
            )
            .unwrap();
            assert_eq!(
                n.round() as i64,
                expected,
                "rho_mol {rho_mol} nm^-2 at {d_nm} nm gave {n}"
            );
        }
    }

    #[test]
    fn thickness_error_curve_zero_at_true_and_monotone() {
        let (reg, c) = setup();
        let h = reg.get("1H").unwrap();
        let rho = per_nm3_to_per_m3(RHO_WATER);
        let assumed: Vec<Thickness> = [0.25, 0.5, 1.0, 2.0]
            .iter()
            .map(|&d| Thickness::Finite(nm_to_m(d)))
            .chain([Thickness::HalfSpace])
            .collect();
        for d_true_nm in [3.0, 5.0, 8.0] {
            let curve = thickness_error_curve(
                nm_to_m(d_true_nm),
                Thickness::Finite(nm_to_m(1.0)),
                rho,
                h,
                &assumed,
                &c,
            )
            .unwrap();
            // zero error at the true thickness
            let at_true = curve
                .iter()
                .find(|(t, _)| *t == Thickness::Finite(nm_to_m(1.0)))
                .unwrap()
                .1;
            assert!(at_true.abs() < 1e-9, "error at true delta: {at_true}");
            // strictly increasing in the assumed thickness
            for pair in curve.windows(2) {
                assert!(
                    pair[1].1 > pair[0].1,
                    "not monotone at d_true = {d_true_nm} nm: {:?}",
                    curve
                );
            }
            // positive error above, negative below the true thickness
            assert!(curve[0].1 < 0.0 && curve.last().unwrap().1 > 0.0);
        }
    }

    #[test]
    fn depth_ordering_in_thickness_table() {
        let (reg, c) = setup();
        let rows = thickness_table(
            nt_to_t(245.0),
            nt_to_t(102.0),
            per_nm3_to_per_m3(RHO_WATER),
            reg.get("1H").unwrap(),
            reg.get("19F").unwrap(),
            3,
            &[
                Thickness::Finite(nm_to_m(0.25)),
                Thickness::Finite(nm_to_m(0.5)),
                Thickness::Finite(nm_to_m(1.0)),
                Thickness::Finite(nm_to_m(2.0)),
                Thickness::HalfSpace,
            ],
            &c,
        )
        .unwrap();
        for pair in rows.windows(2) {
            assert!(pair[1].depth_nm > pair[0].depth_nm);
            assert!(pair[1].rho_f_nm2 > pair[0].rho_f_nm2);
        }
    }

    #[test]
    fn sigma_zero_for_zero_input_sigma() {
        let (reg, c) = setup();
        let est = depth_from_brms(
            nt_to_t(300.0),
            Thickness::Finite(nm_to_m(1.0)),
            per_nm3_to_per_m3(RHO_WATER),
            reg.get("1H").unwrap(),
            &c,
        )
        .unwrap();
        assert_eq!(depth_sigma(&est, 0.0, reg.get("1H").unwrap(), &c), 0.0);
        assert_eq!(density2d_sigma(1.0, 1.0, 0.0, 1.0, 0.0), 0.0);
    }

    #[test]
    fn depth_sigma_matches_finite_difference() {
        let (reg, c) = setup();
        let h = reg.get("1H").unwrap();
        let rho = per_nm3_to_per_m3(RHO_WATER);
        let thickness = Thickness::Finite(nm_to_m(1.0));
        let brms = nt_to_t(331.0);
        let est = depth_from_brms(brms, thickness, rho, h, &c).unwrap();
        let sigma_b = nt_to_t(12.0);
        let analytic = depth_sigma(&est, sigma_b, h, &c);
        // finite-difference of the inversion
        let d_plus = depth_from_brms(brms + sigma_b, thickness, rho, h, &c)
            .unwrap()
            .depth;
        let d_minus = depth_from_brms(brms - sigma_b, thickness, rho, h, &c)
            .unwrap()
            .depth;
        let fd = (d_minus - d_plus).abs() / 2.0;
        assert!(
            ((analytic - fd) / fd).abs() < 0.02,
            "analytic {analytic:e} vs fd {fd:e}"
        );
    }

    #[test]
    fn density_sigma_fixed_depth_is_twice_relative() {
        let sigma = density2d_sigma(10.0, 2.0, 0.1, 5.0, 0.0);
        assert!((sigma - 10.0 * 2.0 * 0.05).abs() < 1e-12);
    }

    #[test]
    fn report_nv6_chain() {
        let (reg, c) = setup();
        let inputs = ReportInputs {
            nv_label: "NV 6".into(),
            brms_h: vec![nt_to_t(331.0)],
            brms_h_sigma: nt_to_t(12.0),
            brms_f: nt_to_t(163.0),
            brms_f_sigma: nt_to_t(7.0),
            thickness: Thickness::Finite(nm_to_m(1.0)),
            rho3d: per_nm3_to_per_m3(RHO_WATER),
            atoms_per_molecule: 3,
            h_species: reg.get("1H").unwrap(),
            f_species: reg.get("19F").unwrap(),
            delta_grid: vec![
                Thickness::Finite(nm_to_m(0.25)),
                Thickness::Finite(nm_to_m(0.5)),
                Thickness::Finite(nm_to_m(1.0)),
                Thickness::Finite(nm_to_m(2.0)),
                Thickness::HalfSpace,
            ],
        };
        let report = surface_report(&inputs, &c).unwrap();
        assert!((m_to_nm(report.depth.depth) - 6.3).abs() < 0.1);
        assert!((per_m2_to_per_nm2(report.rho2d_spins) - 12.1).abs() < 0.3);
        assert_eq!(report.thickness_table.len(), 5);
        assert!(report.sigma_depth > 0.0);
        assert!(report.sigma_rho2d > 0.0);
        // report JSON units
        let json = report.to_json(40.0, RHO_WATER);
        assert_eq!(json.inputs.assumed.delta_nm, Some(1.0));
        assert!((json.outputs.depth_nm - 6.3319).abs() < 0.01);
    }

    #[test]
    fn averaging_multiple_brms_measurements() {
        let (reg, c) = setup();
        let mk = |brms_h: Vec<f64>| ReportInputs {
            nv_label: "avg".into(),
            brms_h,
            brms_h_sigma: 0.0,
            brms_f: nt_to_t(100.0),
            brms_f_sigma: 0.0,
            thickness: Thickness::Finite(nm_to_m(1.0)),
            rho3d: per_nm3_to_per_m3(RHO_WATER),
            atoms_per_molecule: 3,
            h_species: reg.get("1H").unwrap(),
            f_species: reg.get("19F").unwrap(),
            delta_grid: vec![Thickness::Finite(nm_to_m(1.0))],
        };
        let triple = surface_report(&mk(vec![nt_to_t(300.0), nt_to_t(320.0), nt_to_t(340.0)]), &c)
            .unwrap();
        let single = surface_report(&mk(vec![nt_to_t(320.0)]), &c).unwrap();
        assert!((triple.depth.depth - single.depth.depth).abs() < 1e-15 * single.depth.depth);
    }
}
