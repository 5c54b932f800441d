//! Physical constants and the unit conventions shared by every module.
//!
//! Lengths are meters, frequencies GHz, angles degrees, powers dB/dBm.
//! Complex amplitudes use the `exp(+j 2 pi f t)` time convention, so a
//! propagation delay contributes `exp(-j k d)`.

use std::f64::consts::PI;

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Free-space wavelength in meters.
pub fn wavelength(f_ghz: f64) -> f64 {
    SPEED_OF_LIGHT / (f_ghz * 1e9)
}

/// Free-space wavenumber in rad/m.
pub fn wavenumber(f_ghz: f64) -> f64 {
    2.0 * PI / wavelength(f_ghz)
}

/// Propagation delay of a path of `length_m`, in nanoseconds.
pub fn delay_ns(length_m: f64) -> f64 {
    length_m / SPEED_OF_LIGHT * 1e9
}

pub fn db_to_amplitude(db: f64) -> f64 {
    10f64.powf(db / 20.0)
}

pub fn power_to_db(p: f64) -> f64 {
    10.0 * p.log10()
}

/// Normalize an azimuth to `[0, 360)`.
pub fn normalize_deg(deg: f64) -> f64 {
    let r = deg.rem_euclid(360.0);
    if r >= 360.0 {
        0.0
    } else {
        r
    }
}

/// Signed angular difference `a - b` wrapped to `(-180, 180]`.
pub fn wrap_offset_deg(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(360.0);
    if d > 180.0 {
        d - 360.0
    } else {
        d
    }
}
