//! Parametric antenna patterns: parabolic-in-dB main lobe with a flat floor.

use serde::{Deserialize, Serialize};

use crate::units::normalize_deg;

pub const DEFAULT_SIDELOBE_FLOOR_DB: f64 = 25.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PatternKind {
    Omni,
    Horn,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AntennaPattern {
    pub kind: PatternKind,
    pub boresight_gain_dbi: f64,
    pub hpbw_az_deg: f64,
    pub hpbw_el_deg: f64,
    pub sidelobe_floor_db: f64,
}

impl AntennaPattern {
    pub fn horn(gain_dbi: f64, hpbw_az_deg: f64, hpbw_el_deg: f64) -> Self {
        Self {
            kind: PatternKind::Horn,
            boresight_gain_dbi: gain_dbi,
            hpbw_az_deg,
            hpbw_el_deg,
            sidelobe_floor_db: DEFAULT_SIDELOBE_FLOOR_DB,
        }
    }

    pub fn omni(gain_dbi: f64, hpbw_el_deg: f64) -> Self {
        Self {
            kind: PatternKind::Omni,
            boresight_gain_dbi: gain_dbi,
            hpbw_az_deg: 360.0,
            hpbw_el_deg,
            sidelobe_floor_db: DEFAULT_SIDELOBE_FLOOR_DB,
        }
    }

    /// 22.5 dBi pyramidal horn, 13 x 10 degree beam.
    pub fn measurement_horn() -> Self {
        Self::horn(22.5, 13.0, 10.0)
    }

    /// 2 dBi azimuth-omni with a 30 degree elevation opening.
    pub fn measurement_omni() -> Self {
        Self::omni(2.0, 30.0)
    }

    pub fn with_floor(mut self, floor_db: f64) -> Self {
        self.sidelobe_floor_db = floor_db;
        self
    }

    pub fn check(&self) -> std::result::Result<(), String> {
        if !self.boresight_gain_dbi.is_finite() {
            return Err("boresight gain must be finite".into());
        }
        if !(self.hpbw_az_deg > 0.0 && self.hpbw_el_deg > 0.0) {
            return Err("beamwidths must be positive".into());
        }
        if !(self.sidelobe_floor_db > 0.0 && self.sidelobe_floor_db.is_finite()) {
            return Err("sidelobe floor must be positive".into());
        }
        Ok(())
    }
}

/// Gain in dBi at the given offsets from boresight.
pub fn gain_dbi(p: &AntennaPattern, offset_az_deg: f64, offset_el_deg: f64) -> f64 {
    let el = 12.0 * (offset_el_deg / p.hpbw_el_deg).powi(2);
    let az = match p.kind {
        PatternKind::Horn => 12.0 * (offset_az_deg / p.hpbw_az_deg).powi(2),
        PatternKind::Omni => 0.0,
    };
    p.boresight_gain_dbi - (az + el).min(p.sidelobe_floor_db)
}

/// Azimuth pointing direction in the scene frame, counter-clockwise from +x.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Orientation {
    azimuth_deg: f64,
}

impl Orientation {
    pub fn new(azimuth_deg: f64) -> Self {
        Self {
            azimuth_deg: normalize_deg(azimuth_deg),
        }
    }

    pub fn azimuth_deg(self) -> f64 {
        self.azimuth_deg
    }
}

/// How antenna gains enter a link budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum GainView {
    /// Full pattern including boresight gain.
    Absolute,
    /// Pattern shape only: boresight gain subtracted at both ends, so a
    /// boresight-aligned link reports channel path loss.
    #[default]
    BoresightRemoved,
    /// 0 dBi in every direction.
    Isotropic,
}

impl GainView {
    pub fn gain_db(self, p: &AntennaPattern, offset_az_deg: f64, offset_el_deg: f64) -> f64 {
        match self {
            Self::Absolute => gain_dbi(p, offset_az_deg, offset_el_deg),
            Self::BoresightRemoved => {
                gain_dbi(p, offset_az_deg, offset_el_deg) - p.boresight_gain_dbi
            }
            Self::Isotropic => 0.0,
        }
    }
}
