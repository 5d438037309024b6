//! Coherence traces: normalization, CSV format and metadata sidecar.

use std::io::{BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::ddmodel::sequence::{PhaseCycle, SequenceSpec};
use crate::units::{mt_to_t, ns_to_s, s_to_us, us_to_s};
use crate::{Error, Result};

/// Photon-count columns recorded alongside the signal.
#[derive(Debug, Clone, PartialEq)]
pub struct RawCounts {
    pub signal: Vec<f64>,
    pub bright: Vec<f64>,
    pub dark: Vec<f64>,
}

/// Measured or synthetic contrast vs inter-pulse delay.
#[derive(Debug, Clone)]
pub struct CoherenceTrace {
    /// Inter-pulse delays, s, strictly increasing.
    pub tau: Vec<f64>,
    /// Normalized contrast, one value per delay.
    pub signal: Vec<f64>,
    pub raw: Option<RawCounts>,
    pub sequence: SequenceSpec,
    /// Bias field, T.
    pub b0: f64,
}

/// Allowed normalized-contrast band.
const SIGNAL_LO: f64 = -0.2;
const SIGNAL_HI: f64 = 1.2;

impl CoherenceTrace {
    pub fn new(
        tau: Vec<f64>,
        signal: Vec<f64>,
        raw: Option<RawCounts>,
        sequence: SequenceSpec,
        b0: f64,
    ) -> Result<Self> {
        if tau.len() != signal.len() {
            return Err(Error::InconsistentMetadata(format!(
                "tau has {} points, signal has {}",
                tau.len(),
                signal.len()
            )));
        }
        if tau.is_empty() {
            return Err(Error::NotEnoughPoints(0, 1));
        }
        for w in tau.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::InvalidParameter {
                    name: "tau",
                    value: w[1],
                    reason: "must be strictly increasing",
                });
            }
        }
        if tau[0] <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "tau",
                value: tau[0],
                reason: "must be positive",
            });
        }
        for &s in &signal {
            if !(SIGNAL_LO..=SIGNAL_HI).contains(&s) {
                return Err(Error::InvalidParameter {
                    name: "signal",
                    value: s,
                    reason: "normalized contrast must lie in [-0.2, 1.2]",
                });
            }
        }
        if let Some(r) = &raw {
            if r.signal.len() != tau.len() || r.bright.len() != tau.len() || r.dark.len() != tau.len()
            {
                return Err(Error::InconsistentMetadata(
                    "raw count columns must match the tau length".into(),
                ));
            }
        }
        Ok(Self {
            tau,
            signal,
            raw,
            sequence,
            b0,
        })
    }

    /// Ratio of the longest to shortest total evolution time.
    pub fn time_span_factor(&self) -> f64 {
        self.tau.last().unwrap() / self.tau[0]
    }
}

/// Normalize raw counts: (signal − dark)/(bright − dark) per point.
///
/// The bright reference must exceed the dark reference everywhere.
pub fn normalize_trace(
    tau: Vec<f64>,
    raw: RawCounts,
    sequence: SequenceSpec,
    b0: f64,
) -> Result<CoherenceTrace> {
    let mut signal = Vec::with_capacity(tau.len());
    for i in 0..raw.signal.len() {
        let span = raw.bright[i] - raw.dark[i];
        if span <= 0.0 {
            return Err(Error::DegenerateReference {
                index: i,
                bright: raw.bright[i],
                dark: raw.dark[i],
            });
        }
        signal.push((raw.signal[i] - raw.dark[i]) / span);
    }
    CoherenceTrace::new(tau, signal, Some(raw), sequence, b0)
}

/// Metadata sidecar accompanying a trace CSV.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TraceMeta {
    pub n_pulses: u32,
    pub phase_cycle: PhaseCycle,
    #[serde(rename = "b0_mT")]
    pub b0_mt: f64,
    pub pulse_length_ns: f64,
}

impl TraceMeta {
    pub fn sequence(&self) -> Result<SequenceSpec> {
        SequenceSpec::new(self.n_pulses, self.phase_cycle, ns_to_s(self.pulse_length_ns))
    }

    pub fn from_trace(trace: &CoherenceTrace) -> Self {
        Self {
            n_pulses: trace.sequence.n_pulses,
            phase_cycle: trace.sequence.phase_cycle,
            b0_mt: trace.b0 * 1e3,
            pulse_length_ns: trace.sequence.pulse_length * 1e9,
        }
    }
}

const HEADER_NORMALIZED: &str = "tau_us,signal";
const HEADER_RAW: &str = "tau_us,counts_signal,counts_bright,counts_dark";

/// Columns parsed from a trace CSV.
#[derive(Debug)]
pub enum TraceColumns {
    Normalized(Vec<f64>),
    Raw(RawCounts),
}

/// Parse a trace CSV (either header form). Delays come back in seconds.
pub fn read_trace_csv<R: BufRead>(reader: R) -> Result<(Vec<f64>, TraceColumns)> {
    let mut lines = reader.lines().enumerate();
    let header = match lines.next() {
        Some((_, line)) => line?,
        None => {
            return Err(Error::MalformedCsv {
                line: 1,
                reason: "empty file".into(),
            })
        }
    };
    let raw_mode = match header.trim_end() {
        HEADER_NORMALIZED => false,
        HEADER_RAW => true,
        other => {
            return Err(Error::MalformedCsv {
                line: 1,
                reason: format!(
                    "unexpected header `{other}` (expected `{HEADER_NORMALIZED}` or `{HEADER_RAW}`)"
                ),
            })
        }
    };

    let mut tau = Vec::new();
    let mut cols: Vec<Vec<f64>> = vec![Vec::new(); if raw_mode { 3 } else { 1 }];
    for (idx, line) in lines {
        let line = line?;
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let expected = 1 + cols.len();
        if fields.len() != expected {
            return Err(Error::MalformedCsv {
                line: lineno,
                reason: format!("expected {expected} fields, found {}", fields.len()),
            });
        }
        let parse = |s: &str| -> Result<f64> {
            s.trim().parse::<f64>().map_err(|_| Error::MalformedCsv {
                line: lineno,
                reason: format!("`{s}` is not a number"),
            })
        };
        tau.push(us_to_s(parse(fields[0])?));
        for (c, field) in cols.iter_mut().zip(&fields[1..]) {
            c.push(parse(field)?);
        }
    }
    if tau.is_empty() {
        return Err(Error::MalformedCsv {
            line: 2,
            reason: "no data rows".into(),
        });
    }
    let columns = if raw_mode {
        TraceColumns::Raw(RawCounts {
            signal: cols[0].clone(),
            bright: cols[1].clone(),
            dark: cols[2].clone(),
        })
    } else {
        TraceColumns::Normalized(cols[0].clone())
    };
    Ok((tau, columns))
}

/// Load a trace plus its metadata sidecar. Raw columns are normalized.
pub fn load_trace(csv_path: &Path, meta_path: &Path) -> Result<CoherenceTrace> {
    if !meta_path.exists() {
        return Err(Error::MissingMetadata(meta_path.display().to_string()));
    }
    let meta: TraceMeta = serde_json::from_str(&std::fs::read_to_string(meta_path)?)?;
    let sequence = meta.sequence()?;
    let file = std::fs::File::open(csv_path)?;
    let (tau, columns) = read_trace_csv(std::io::BufReader::new(file))?;
    let b0 = mt_to_t(meta.b0_mt);
    match columns {
        TraceColumns::Normalized(signal) => CoherenceTrace::new(tau, signal, None, sequence, b0),
        TraceColumns::Raw(raw) => normalize_trace(tau, raw, sequence, b0),
    }
}

/// Write a trace CSV with the bit-exact header for its column set.
pub fn write_trace_csv<W: Write>(trace: &CoherenceTrace, mut w: W) -> Result<()> {
    match &trace.raw {
        Some(raw) => {
            writeln!(w, "{HEADER_RAW}")?;
            for i in 0..trace.tau.len() {
                writeln!(
                    w,
                    "{},{},{},{}",
                    s_to_us(trace.tau[i]),
                    raw.signal[i],
                    raw.bright[i],
                    raw.dark[i]
                )?;
            }
        }
        None => {
            writeln!(w, "{HEADER_NORMALIZED}")?;
            for i in 0..trace.tau.len() {
                writeln!(w, "{},{}", s_to_us(trace.tau[i]), trace.signal[i])?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq() -> SequenceSpec {
        SequenceSpec::new(192, PhaseCycle::Xy8, 0.0).unwrap()
    }

    #[test]
    fn normalize_bright_dark_midpoint() {
        let tau = vec![1e-7, 2e-7, 3e-7];
        let mk = |signal: Vec<f64>| RawCounts {
            signal,
            bright: vec![120.0; 3],
            dark: vec![80.0; 3],
        };
        // signal == bright -> 1
        let t = normalize_trace(tau.clone(), mk(vec![120.0; 3]), seq(), 0.04).unwrap();
        assert!(t.signal.iter().all(|&s| s == 1.0));
        // signal == dark -> 0
        let t = normalize_trace(tau.clone(), mk(vec![80.0; 3]), seq(), 0.04).unwrap();
        assert!(t.signal.iter().all(|&s| s == 0.0));
        // midpoint -> 0.5
        let t = normalize_trace(tau, mk(vec![100.0; 3]), seq(), 0.04).unwrap();
        assert!(t.signal.iter().all(|&s| s == 0.5));
    }

    #[test]
    fn degenerate_reference_rejected() {
        let raw = RawCounts {
            signal: vec![1.0, 1.0],
            bright: vec![2.0, 1.0],
            dark: vec![1.0, 1.0],
        };
        let err = normalize_trace(vec![1e-7, 2e-7], raw, seq(), 0.04);
        assert!(matches!(err, Err(Error::DegenerateReference { index: 1, .. })));
    }

    #[test]
    fn tau_must_increase() {
        let err = CoherenceTrace::new(vec![1e-7, 1e-7], vec![1.0, 1.0], None, seq(), 0.04);
        assert!(err.is_err());
        let err = CoherenceTrace::new(vec![2e-7, 1e-7], vec![1.0, 1.0], None, seq(), 0.04);
        assert!(err.is_err());
    }

    #[test]
    fn signal_band_enforced() {
        let err = CoherenceTrace::new(vec![1e-7, 2e-7], vec![1.5, 1.0], None, seq(), 0.04);
        assert!(err.is_err());
    }

    #[test]
    fn csv_round_trip_normalized() {
        let trace =
            CoherenceTrace::new(vec![1e-7, 2e-7], vec![0.9, 0.8], None, seq(), 0.04).unwrap();
        let mut buf = Vec::new();
        write_trace_csv(&trace, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("tau_us,signal\n"));
        let (tau, cols) = read_trace_csv(std::io::Cursor::new(buf)).unwrap();
        assert!((tau[0] - 1e-7).abs() < 1e-19);
        match cols {
            TraceColumns::Normalized(s) => assert_eq!(s, vec![0.9, 0.8]),
            _ => panic!("expected normalized columns"),
        }
    }

    #[test]
    fn csv_raw_header() {
        let raw = RawCounts {
            signal: vec![100.0],
            bright: vec![120.0],
            dark: vec![80.0],
        };
        let trace = normalize_trace(vec![1e-7], raw, seq(), 0.04).unwrap();
        let mut buf = Vec::new();
        write_trace_csv(&trace, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("tau_us,counts_signal,counts_bright,counts_dark\n"));
    }

    #[test]
    fn csv_errors_carry_line_numbers() {
        let err = read_trace_csv(std::io::Cursor::new("tau_us,signal\n0.1,0.9\nbad,row,extra\n"));
        match err {
            Err(Error::MalformedCsv { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        let err = read_trace_csv(std::io::Cursor::new(""));
        assert!(matches!(err, Err(Error::MalformedCsv { line: 1, .. })));
        let err = read_trace_csv(std::io::Cursor::new("wrong,header\n"));
        assert!(matches!(err, Err(Error::MalformedCsv { line: 1, .. })));
    }

    #[test]
    fn meta_json_field_names() {
        let meta = TraceMeta {
            n_pulses: 192,
            phase_cycle: PhaseCycle::Xy8,
            b0_mt: 40.0,
            pulse_length_ns: 0.0,
        };
        let json = serde_json::to_string(&meta).unwrap();
        assert!(json.contains("\"n_pulses\""));
        assert!(json.contains("\"phase_cycle\":\"XY8\""));
        assert!(json.contains("\"b0_mT\""));
        assert!(json.contains("\"pulse_length_ns\""));
    }
}
