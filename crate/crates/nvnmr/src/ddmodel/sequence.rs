//! Dynamical-decoupling sequence description.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Phase cycling applied to the π-pulse train.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PhaseCycle {
    #[serde(rename = "CPMG")]
    Cpmg,
    #[serde(rename = "XY8")]
    Xy8,
    #[serde(rename = "XY16")]
    Xy16,
}

impl PhaseCycle {
    /// Pulses per phase-cycle block; 1 for plain CPMG.
    pub fn block_length(&self) -> u32 {
        match self {
            PhaseCycle::Cpmg => 1,
            PhaseCycle::Xy8 => 8,
            PhaseCycle::Xy16 => 16,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            PhaseCycle::Cpmg => "CPMG",
            PhaseCycle::Xy8 => "XY8",
            PhaseCycle::Xy16 => "XY16",
        }
    }
}

impl std::str::FromStr for PhaseCycle {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "CPMG" => Ok(PhaseCycle::Cpmg),
            "XY8" => Ok(PhaseCycle::Xy8),
            "XY16" => Ok(PhaseCycle::Xy16),
            _ => Err(Error::Config(format!(
                "unknown phase cycle `{s}` (expected CPMG, XY8 or XY16)"
            ))),
        }
    }
}

/// A train of `n_pulses` π pulses with the given phase cycle.
///
/// `pulse_length` is the duration of each π pulse in seconds; 0 means
/// ideal instantaneous pulses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SequenceSpec {
    pub n_pulses: u32,
    pub phase_cycle: PhaseCycle,
    pub pulse_length: f64,
}

impl SequenceSpec {
    pub fn new(n_pulses: u32, phase_cycle: PhaseCycle, pulse_length: f64) -> Result<Self> {
        if n_pulses == 0 {
            return Err(Error::InvalidParameter {
                name: "n_pulses",
                value: 0.0,
                reason: "must be positive",
            });
        }
        let block = phase_cycle.block_length();
        if n_pulses % block != 0 {
            return Err(Error::PulseCountMismatch {
                n: n_pulses,
                cycle: phase_cycle.name(),
                block,
            });
        }
        if !(pulse_length >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "pulse_length",
                value: pulse_length,
                reason: "must be non-negative",
            });
        }
        Ok(Self {
            n_pulses,
            phase_cycle,
            pulse_length,
        })
    }

    /// Pulse numbers outside 96-384 work but deserve a second look.
    pub fn is_typical(&self) -> bool {
        (96..=384).contains(&self.n_pulses)
    }

    /// Total evolution time for an inter-pulse delay `tau`.
    pub fn total_time(&self, tau: f64) -> f64 {
        self.n_pulses as f64 * tau
    }
}
