//! Deterministic site-specific simulator for indoor 60 GHz links.
//!
//! The crate traces image-method paths through planar scenes with walls,
//! flat metal panels, groove reflectarrays and human blockers, assembles their
//! complex gains, and synthesizes the wideband channel seen by a vector
//! network analyzer: averaged path loss, angle-of-arrival sweeps and power
//! delay profiles.

pub mod antenna;
pub mod channel;
pub mod diffraction;
pub mod error;
pub mod fresnel;
pub mod geometry;
pub mod materials;
pub mod raytrace;
pub mod reflectarray;
pub mod scenarios;
pub mod units;

pub use antenna::{gain_dbi, AntennaPattern, GainView, Orientation, PatternKind};
pub use channel::{
    average_path_loss, normalize_relative, pdp, pdp_padded, synthesize, ChannelResponse, FlatTerm,
    FrequencyPlan, Normalization, PathTerm, Pdp, Window,
};
pub use diffraction::{
    fresnel_radius, fresnel_v, knife_edge_loss, screen_blockage_loss, BlockerScreen, FresnelParam,
};
pub use error::{Error, Result};
pub use geometry::{
    intersect, mirror, validate_scene, Hit, Point2, Scene, Segment, SegmentKind, Violation,
};
pub use materials::{reflection_coefficient, Material, MaterialModel, Polarization};
pub use raytrace::{
    aoa_sweep, channel_response, coverage_sweep, find_paths, friis_path_loss, path_amplitude,
    path_gain, AoaSample, AoaSweep, Endpoint, Interaction, InteractionKind, LinkBudgetTerm,
    PropagationPath,
};
pub use reflectarray::{
    cell_phase, design_panel, peak_directions, scattered_amplitude, GrooveCell, GroovePanel,
    PanelMode, ScatterPattern,
};
pub use scenarios::{Scenario, Terminal};
