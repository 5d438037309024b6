//! Surface-NMR analysis for shallow nitrogen-vacancy (NV) centers in diamond.
//!
//! A single NV center a few nanometers below the diamond surface senses the
//! fluctuating dipolar field of nuclear spins above it. Under a CPMG/XY8
//! dynamical-decoupling sequence the sensor acts as a narrowband noise filter:
//! tuning the inter-pulse delay to a nuclear Larmor frequency produces a
//! contrast dip whose strength encodes the root-mean-square field B_rms of
//! that spin species. This crate implements the full analysis pipeline:
//!
//! - [`dipolar`] — closed-form B_rms models for single spins, finite adsorbate
//!   layers, half-spaces, and 2D surface layers.
//! - [`montecarlo`] — stochastic spin-bath sampling that validates every
//!   closed form by direct summation over discrete spins.
//! - [`ddmodel`] — coherence decay under dynamical decoupling with nuclear
//!   noise dips; trace synthesis, normalization, and least-squares extraction
//!   of B_rms, T2 and resonance frequencies.
//! - [`inversion`] — numerical inversion of B_rms into NV depth, 2D surface
//!   density and molecule counts, with thickness-assumption sensitivity.
//! - [`profile`] — quadrature of the single-spin sensitivity integrand to
//!   find the minimal surface area (volume) contributing a target fraction
//!   of the signal.
//! - [`cli`] — the `nvnmr` command-line pipeline with reproducible JSON
//!   reports.
//!
//! Internally everything is SI; external IO uses lab units (nm, nT, µs, kHz,
//! mT). Conversions live in [`units`].

pub mod cli;
pub mod constants;
pub mod ddmodel;
pub mod dipolar;
mod error;
pub mod inversion;
pub mod montecarlo;
pub mod profile;
pub mod species;
pub mod units;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
