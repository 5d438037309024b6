//! Unit conversions between internal SI and external lab units.
//!
//! All computation in this crate is done in SI (m, T, s, Hz, m^-2, m^-3).
//! Files, CLI flags and printed output use nm, nT, µs, kHz, mT and nm-based
//! densities. Only the pairs below are supported; this is not a general
//! units library.

pub fn nm_to_m(x: f64) -> f64 {
    x * 1e-9
}

pub fn m_to_nm(x: f64) -> f64 {
    x * 1e9
}

pub fn nt_to_t(x: f64) -> f64 {
    x * 1e-9
}

pub fn t_to_nt(x: f64) -> f64 {
    x * 1e9
}

pub fn ut_to_t(x: f64) -> f64 {
    x * 1e-6
}

pub fn t_to_ut(x: f64) -> f64 {
    x * 1e6
}

pub fn us_to_s(x: f64) -> f64 {
    x * 1e-6
}

pub fn s_to_us(x: f64) -> f64 {
    x * 1e6
}

pub fn ns_to_s(x: f64) -> f64 {
    x * 1e-9
}

pub fn khz_to_hz(x: f64) -> f64 {
    x * 1e3
}

pub fn hz_to_khz(x: f64) -> f64 {
    x * 1e-3
}

pub fn mt_to_t(x: f64) -> f64 {
    x * 1e-3
}

pub fn t_to_mt(x: f64) -> f64 {
    x * 1e3
}

/// nm^-3 to m^-3.
pub fn per_nm3_to_per_m3(x: f64) -> f64 {
    x * 1e27
}

pub fn per_m3_to_per_nm3(x: f64) -> f64 {
    x * 1e-27
}

/// nm^-2 to m^-2.
pub fn per_nm2_to_per_m2(x: f64) -> f64 {
    x * 1e18
}

pub fn per_m2_to_per_nm2(x: f64) -> f64 {
    x * 1e-18
}

/// nm^2 to m^2.
pub fn nm2_to_m2(x: f64) -> f64 {
    x * 1e-18
}

pub fn m2_to_nm2(x: f64) -> f64 {
    x * 1e18
}
