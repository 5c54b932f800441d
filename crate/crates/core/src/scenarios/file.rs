//! TOML scenario files.
//!
//! ```toml
//! name = "meeting_room_los"
//! room_height_m = 2.5
//!
//! [scene]
//! polarization = "tm"                  # "te" or "tm"
//!
//! [scene.frequency_plan]
//! fc_ghz = 60.0
//! bandwidth_ghz = 2.0
//! n_points = 401
//! tx_power_dbm = 0.0
//!
//! [scene.materials.plasterboard]
//! name = "plasterboard"
//! model = "dielectric"                 # perfect_conductor | fixed_loss | dielectric
//! eps_re = 2.73
//! eps_im = 0.02                        # eps_r = eps_re - j eps_im
//!
//! [[scene.segments]]
//! a = [0.0, 0.0]
//! b = [3.15, 0.0]
//! material_id = "plasterboard"
//! kind = "wall"                        # wall | flat_panel | reflectarray_panel | absorber_screen
//! # panel_id = "groove"                # reflectarray_panel only
//!
//! [scene.panels.groove]                # either a cell table ...
//! design_frequency_ghz = 60.0
//! size_x_m = 0.2
//! size_y_m = 0.2
//! conductivity_s_per_m = 37.8e6
//! cells = [{ pitch_mm = 2.5, width_mm = 2.0, depth_mm = 2.3 }, ...]
//! # ... or a design request:
//! # design = { frequency_ghz = 60.0, n_cells = 80, mode = "table2" }
//!
//! [[scene.blockers]]
//! center = [4.15, 0.86]
//! width_m = 0.45
//! thickness_m = 0.13
//! height_m = 1.72
//! top_height_m = 2.18
//! facing_az_deg = 0.0
//!
//! [[tx]]                               # and [[rx]]
//! label = "Tx"
//! position = [2.65, 0.86]
//! height_m = 1.71
//! orientation_deg = 0.0
//! # sweep_step_deg = 6.0
//! pattern = { kind = "horn", boresight_gain_dbi = 22.5, hpbw_az_deg = 13.0, hpbw_el_deg = 10.0, sidelobe_floor_db = 25.0 }
//! ```
//!
//! Every `[scene]` key is optional; omitted ones take the defaults above with
//! empty segment, material, panel and blocker lists. Units are fixed: meters,
//! GHz, dBm, degrees.

use std::path::Path;

use super::Scenario;
use crate::error::{Error, Result};

fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

/// Parse and validate a scenario from TOML text.
pub fn parse(text: &str) -> Result<Scenario> {
    let scenario: Scenario = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((0, 0), |s| line_column(text, s.start));
        Error::Parse {
            line,
            column,
            message: e.message().trim().to_string(),
        }
    })?;
    scenario.validated()
}

pub fn load(path: impl AsRef<Path>) -> Result<Scenario> {
    parse(&std::fs::read_to_string(path)?)
}

pub fn to_toml_string(s: &Scenario) -> Result<String> {
    toml::to_string(s).map_err(|e| Error::Domain(format!("cannot serialize scenario: {e}")))
}

pub fn save(s: &Scenario, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, to_toml_string(s)?)?;
    Ok(())
}
