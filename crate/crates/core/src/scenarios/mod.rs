//! Built-in measurement environments and the scenario type.
//!
//! Coordinates are meters in the propagation plane; azimuths are degrees
//! counter-clockwise from `+x`.
//!
//! * **L-corridor**: part A spans `x in [0, 4.19]`, `y in [0, 2]`; part B
//!   spans `x in [0, 1.62]`, `y in [2, 6.7]`. The receiver horn sits 0.5 m
//!   from the end wall of A and aims at the panel center `M = (0.81, 1.0)`;
//!   the panel makes 45 degrees with both corridor axes so the specular point
//!   for every transmitter on the axis of B is `M`.
//! * **T-corridor**: a 1.43 m wide crossbar along `x` and a stem of the same
//!   width along `-y`. The reflectarray faces the stem, 0.215 m in front of
//!   the crossbar's far wall; the transmitter is on the stem axis.
//! * **Meeting room**: 6.5 x 2.2 m. The whiteboard occupies the middle of the
//!   `y = 0` wall. Both horns are 0.86 m from that wall on a line parallel to
//!   it, 3 m apart and symmetric about the board center, so the reflected
//!   path is `2 sqrt(1.5^2 + 0.86^2) = 3.46` m long.

pub mod file;

pub use file::{load, parse, save, to_toml_string};

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::antenna::AntennaPattern;
use crate::channel::FrequencyPlan;
use crate::diffraction::BlockerScreen;
use crate::error::{Error, Result};
use crate::geometry::{validate_scene, Point2, Scene, Segment, SegmentKind, Violation};
use crate::materials::{Material, Polarization};
use crate::raytrace::Endpoint;
use crate::reflectarray::{design_panel, PanelMode};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Terminal {
    pub label: String,
    pub position: Point2,
    pub height_m: f64,
    pub pattern: AntennaPattern,
    pub orientation_deg: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep_step_deg: Option<f64>,
}

impl Terminal {
    pub fn endpoint(&self) -> Endpoint {
        Endpoint {
            position: self.position,
            height_m: self.height_m,
            pattern: self.pattern,
            orientation_deg: self.orientation_deg,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    /// Kept for reference; propagation is planar.
    pub room_height_m: f64,
    pub scene: Scene,
    pub tx: Vec<Terminal>,
    pub rx: Vec<Terminal>,
}

impl Scenario {
    /// Position labels of all terminals.
    pub fn labels(&self) -> BTreeMap<String, Point2> {
        self.tx
            .iter()
            .chain(&self.rx)
            .map(|t| (t.label.clone(), t.position))
            .collect()
    }

    pub fn terminal(&self, label: &str) -> Option<&Terminal> {
        self.tx.iter().chain(&self.rx).find(|t| t.label == label)
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut v = validate_scene(&self.scene);
        let term = |label: &str, reason: &str| Violation::Terminal {
            label: label.to_string(),
            reason: reason.to_string(),
        };
        if self.tx.is_empty() {
            v.push(term("", "scenario needs at least one transmitter"));
        }
        if self.rx.is_empty() {
            v.push(term("", "scenario needs at least one receiver"));
        }
        let mut seen = std::collections::BTreeSet::new();
        for t in self.tx.iter().chain(&self.rx) {
            if !seen.insert(t.label.as_str()) {
                v.push(term(&t.label, "duplicate label"));
            }
            if !t.position.is_finite() {
                v.push(term(&t.label, "position must be finite"));
            }
            if !(t.height_m > 0.0 && t.height_m.is_finite()) {
                v.push(term(&t.label, "height must be positive"));
            }
            if !t.orientation_deg.is_finite() {
                v.push(term(&t.label, "orientation must be finite"));
            }
            if let Err(reason) = t.pattern.check() {
                v.push(term(&t.label, &reason));
            }
            if let Some(step) = t.sweep_step_deg {
                let n = 360.0 / step;
                if !(step > 0.0) || (n - n.round()).abs() > 1e-9 {
                    v.push(term(&t.label, "sweep step must divide 360 degrees"));
                }
            }
        }
        v
    }

    pub fn validated(self) -> Result<Self> {
        let v = self.validate();
        if v.is_empty() {
            Ok(self)
        } else {
            Err(Error::Invalid(v))
        }
    }
}

macro_rules! string_enum {
    ($name:ident { $($var:ident => $s:literal),+ $(,)? }) => {
        impl $name {
            pub const ALL: &'static [Self] = &[$(Self::$var),+];

            pub fn as_str(self) -> &'static str {
                match self { $(Self::$var => $s),+ }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($s => Ok(Self::$var),)+
                    _ => Err(Error::Unknown { what: stringify!($name), name: s.to_string() }),
                }
            }
        }
    };
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum LVariant {
    None,
    Horizontal,
    #[default]
    Vertical,
}

string_enum!(LVariant { None => "none", Horizontal => "horizontal", Vertical => "vertical" });

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum MeetingCase {
    #[default]
    Los,
    Blocked,
    BlockedTxDepointed,
    BlockedBothDepointed,
}

string_enum!(MeetingCase {
    Los => "los",
    Blocked => "blocked",
    BlockedTxDepointed => "blocked_tx_depointed",
    BlockedBothDepointed => "blocked_both_depointed",
});

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum TVariant {
    #[default]
    Panel,
    NoPanel,
}

string_enum!(TVariant { Panel => "panel", NoPanel => "no_panel" });

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TCorridorConfig {
    pub with_panel: bool,
    pub panel_mode: PanelMode,
    pub tx_p0_distance_m: f64,
}

/// Transmitter-to-P0 distance that reproduces the free-space received power
/// of -82.18 dBm at 0 dBm with antenna gains removed.
pub const TX_P0_DISTANCE_M: f64 = 5.10;

impl Default for TCorridorConfig {
    fn default() -> Self {
        Self {
            with_panel: true,
            panel_mode: PanelMode::Table2,
            tx_p0_distance_m: TX_P0_DISTANCE_M,
        }
    }
}

const PLASTER: &str = "plasterboard";
const ALUMINUM: &str = "aluminum";
const WHITEBOARD: &str = "whiteboard";

fn p(x: f64, y: f64) -> Point2 {
    Point2::new(x, y)
}

/// Closed outline of plasterboard walls through `pts`.
fn outline(pts: &[Point2]) -> Vec<Segment> {
    (0..pts.len())
        .map(|i| Segment::new(pts[i], pts[(i + 1) % pts.len()], PLASTER, SegmentKind::Wall))
        .collect()
}

fn base_scene(plan: FrequencyPlan) -> Scene {
    let mut scene = Scene {
        frequency_plan: plan,
        polarization: Polarization::TM,
        ..Scene::default()
    };
    scene
        .materials
        .insert(PLASTER.into(), Material::plasterboard());
    scene
}

pub const L_HEIGHT_M: f64 = 1.37;
pub const L_PANEL_LENGTH_M: f64 = 0.982;
pub const L_PANEL_WIDTH_M: f64 = 0.595;

pub fn l_corridor(variant: LVariant) -> Scenario {
    let mut scene = base_scene(FrequencyPlan::measurement());
    scene.segments = outline(&[
        p(0.0, 0.0),
        p(4.19, 0.0),
        p(4.19, 2.0),
        p(1.62, 2.0),
        p(1.62, 6.7),
        p(0.0, 6.7),
    ]);
    let m = p(0.81, 1.0);
    let len = match variant {
        LVariant::None => None,
        LVariant::Horizontal => Some(L_PANEL_LENGTH_M),
        LVariant::Vertical => Some(L_PANEL_WIDTH_M),
    };
    if let Some(len) = len {
        scene
            .materials
            .insert(ALUMINUM.into(), Material::perfect_conductor(ALUMINUM));
        let half = Point2::new(1.0, -1.0).normalized() * (0.5 * len);
        scene.segments.push(Segment::new(
            m - half,
            m + half,
            ALUMINUM,
            SegmentKind::FlatPanel,
        ));
    }
    let rx_pos = p(3.69, 1.0);
    let rx = Terminal {
        label: "Rx".into(),
        position: rx_pos,
        height_m: L_HEIGHT_M,
        pattern: AntennaPattern::measurement_horn(),
        orientation_deg: (m - rx_pos).azimuth_deg(),
        sweep_step_deg: None,
    };
    let tx = (1..=16)
        .map(|k| Terminal {
            label: format!("Tx{k}"),
            position: p(0.81, 2.6 + 0.25 * (k - 1) as f64),
            height_m: L_HEIGHT_M,
            pattern: AntennaPattern::measurement_omni(),
            orientation_deg: 270.0,
            sweep_step_deg: None,
        })
        .collect();
    Scenario {
        name: format!("l_corridor_{variant}"),
        room_height_m: 3.0,
        scene,
        tx,
        rx: vec![rx],
    }
}

pub const T_HEIGHT_M: f64 = 1.7;
pub const T_HALF_WIDTH_M: f64 = 0.715;
pub const T_PANEL_Y_M: f64 = 0.5;
pub const T_SWEEP_STEP_DEG: f64 = 6.0;
pub const PANEL_ID: &str = "groove";

pub fn t_corridor(cfg: TCorridorConfig) -> Result<Scenario> {
    let mut scene = base_scene(FrequencyPlan::dense());
    let w = T_HALF_WIDTH_M;
    let d = cfg.tx_p0_distance_m;
    let bottom = -(d + 0.5).max(5.6);
    scene.segments = outline(&[
        p(-w, bottom),
        p(w, bottom),
        p(w, -w),
        p(6.0, -w),
        p(6.0, w),
        p(-11.0, w),
        p(-11.0, -w),
        p(-w, -w),
    ]);
    let panel_center = p(0.0, T_PANEL_Y_M);
    if cfg.with_panel {
        let panel = design_panel(60.0, 80, cfg.panel_mode)?;
        let half = 0.5 * panel.size_x_m;
        scene
            .materials
            .insert(ALUMINUM.into(), Material::perfect_conductor(ALUMINUM));
        scene.segments.push(
            Segment::new(
                p(half, T_PANEL_Y_M),
                p(-half, T_PANEL_Y_M),
                ALUMINUM,
                SegmentKind::ReflectarrayPanel,
            )
            .with_panel(PANEL_ID),
        );
        scene.panels.insert(PANEL_ID.into(), panel);
    }
    let tx = Terminal {
        label: "Tx".into(),
        position: p(0.0, -d),
        height_m: T_HEIGHT_M,
        pattern: AntennaPattern::measurement_horn(),
        orientation_deg: 90.0,
        sweep_step_deg: None,
    };
    let mut rx_pos = vec![("P0".to_string(), p(0.0, 0.0))];
    rx_pos.extend((1..=4).map(|k| (format!("R{k}"), p(k as f64, 0.0))));
    rx_pos.extend((1..=9).map(|k| (format!("L{k}"), p(-(k as f64), 0.0))));
    let rx = rx_pos
        .into_iter()
        .map(|(label, pos)| {
            let toward = if label == "P0" {
                tx.position
            } else {
                panel_center
            };
            Terminal {
                label,
                position: pos,
                height_m: T_HEIGHT_M,
                pattern: AntennaPattern::measurement_horn(),
                orientation_deg: (toward - pos).azimuth_deg(),
                sweep_step_deg: Some(T_SWEEP_STEP_DEG),
            }
        })
        .collect();
    let variant = if cfg.with_panel {
        TVariant::Panel
    } else {
        TVariant::NoPanel
    };
    Ok(Scenario {
        name: format!("t_corridor_{variant}"),
        room_height_m: 3.0,
        scene,
        tx: vec![tx],
        rx,
    })
}

pub const MEETING_HEIGHT_M: f64 = 1.71;
pub const MEETING_OFFSET_M: f64 = 0.86;
pub const DEPOINTING_DEG: f64 = 30.0;

/// Standing person: 0.45 m shoulders, 0.13 m thick, 1.72 m tall, chest at
/// antenna height. The head and shoulders put the top edge 0.47 m above the
/// chest.
pub fn meeting_blocker() -> BlockerScreen {
    BlockerScreen {
        center: p(4.15, MEETING_OFFSET_M),
        width_m: 0.45,
        thickness_m: 0.13,
        height_m: 1.72,
        top_height_m: MEETING_HEIGHT_M + 0.47,
        facing_az_deg: 0.0,
    }
}

pub fn meeting_room(case: MeetingCase) -> Scenario {
    let mut scene = base_scene(FrequencyPlan::measurement());
    scene
        .materials
        .insert(WHITEBOARD.into(), Material::whiteboard());
    let (x0, x1) = (3.15, 5.15);
    scene.segments = vec![
        Segment::new(p(0.0, 0.0), p(x0, 0.0), PLASTER, SegmentKind::Wall),
        Segment::new(p(x0, 0.0), p(x1, 0.0), WHITEBOARD, SegmentKind::FlatPanel),
        Segment::new(p(x1, 0.0), p(6.5, 0.0), PLASTER, SegmentKind::Wall),
        Segment::new(p(6.5, 0.0), p(6.5, 2.2), PLASTER, SegmentKind::Wall),
        Segment::new(p(6.5, 2.2), p(0.0, 2.2), PLASTER, SegmentKind::Wall),
        Segment::new(p(0.0, 2.2), p(0.0, 0.0), PLASTER, SegmentKind::Wall),
    ];
    if case != MeetingCase::Los {
        scene.blockers.push(meeting_blocker());
    }
    let (tx_az, rx_az) = match case {
        MeetingCase::Los | MeetingCase::Blocked => (0.0, 180.0),
        MeetingCase::BlockedTxDepointed => (360.0 - DEPOINTING_DEG, 180.0),
        MeetingCase::BlockedBothDepointed => (360.0 - DEPOINTING_DEG, 180.0 + DEPOINTING_DEG),
    };
    let term = |label: &str, x: f64, az: f64| Terminal {
        label: label.into(),
        position: p(x, MEETING_OFFSET_M),
        height_m: MEETING_HEIGHT_M,
        pattern: AntennaPattern::measurement_horn(),
        orientation_deg: az,
        sweep_step_deg: None,
    };
    Scenario {
        name: format!("meeting_room_{case}"),
        room_height_m: 2.5,
        scene,
        tx: vec![term("Tx", 2.65, tx_az)],
        rx: vec![term("Rx", 5.65, rx_az)],
    }
}

pub const BUILTIN_NAMES: &[&str] = &["l_corridor", "t_corridor", "meeting_room"];

/// Built-in scenario by name. `variant` selects the panel variant or the
/// meeting-room case; `panel_mode` overrides the T-corridor panel design.
pub fn builtin(
    name: &str,
    variant: Option<&str>,
    panel_mode: Option<PanelMode>,
) -> Result<Scenario> {
    match name {
        "l_corridor" => Ok(l_corridor(
            variant.map(str::parse).transpose()?.unwrap_or_default(),
        )),
        "t_corridor" => {
            let v: TVariant = variant.map(str::parse).transpose()?.unwrap_or_default();
            t_corridor(TCorridorConfig {
                with_panel: v == TVariant::Panel,
                panel_mode: panel_mode.unwrap_or(PanelMode::Table2),
                ..TCorridorConfig::default()
            })
        }
        "meeting_room" => Ok(meeting_room(
            variant.map(str::parse).transpose()?.unwrap_or_default(),
        )),
        _ => Err(Error::Unknown {
            what: "scenario",
            name: name.to_string(),
        }),
    }
}

/// Every built-in variant, named as in the shipped golden files.
pub fn golden_set() -> Vec<Scenario> {
    let mut out: Vec<Scenario> = LVariant::ALL.iter().map(|&v| l_corridor(v)).collect();
    for &v in TVariant::ALL {
        out.push(
            builtin("t_corridor", Some(v.as_str()), None).expect("built-in panel design is valid"),
        );
    }
    out.extend(MeetingCase::ALL.iter().map(|&c| meeting_room(c)));
    out
}
