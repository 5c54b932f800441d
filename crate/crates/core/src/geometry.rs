//! Planar scene representation and the geometric kernels used by the image
//! method.
//!
//! Propagation happens in one horizontal plane at antenna height. Every
//! scenario places both terminals, reflector centers and the blocker chest
//! center at a common height, so in-plane distances equal 3-D distances.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::channel::FrequencyPlan;
use crate::diffraction::BlockerScreen;
use crate::materials::{Material, Polarization};
use crate::reflectarray::GroovePanel;

/// Distance tolerance for ray/segment tests, in meters.
pub const INTERSECT_TOL: f64 = 1e-9;
/// Hits closer than this to the ray origin are ignored (bounce points).
pub const MIN_HIT_T: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, o: Self) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3-D cross product.
    pub fn cross(self, o: Self) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, o: Self) -> f64 {
        (self - o).norm()
    }

    pub fn normalized(self) -> Self {
        let n = self.norm();
        Self::new(self.x / n, self.y / n)
    }

    /// Counter-clockwise perpendicular.
    pub fn perp(self) -> Self {
        Self::new(-self.y, self.x)
    }

    /// Azimuth of this vector in degrees, counter-clockwise from +x, `[0, 360)`.
    pub fn azimuth_deg(self) -> f64 {
        crate::units::normalize_deg(self.y.atan2(self.x).to_degrees())
    }

    pub fn from_azimuth_deg(az: f64) -> Self {
        let r = az.to_radians();
        Self::new(r.cos(), r.sin())
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn lerp(self, o: Self, t: f64) -> Self {
        self + (o - self) * t
    }
}

impl From<[f64; 2]> for Point2 {
    fn from([x, y]: [f64; 2]) -> Self {
        Self { x, y }
    }
}

impl From<Point2> for [f64; 2] {
    fn from(p: Point2) -> Self {
        [p.x, p.y]
    }
}

impl Add for Point2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.x * s, self.y * s)
    }
}

impl Neg for Point2 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SegmentKind {
    Wall,
    FlatPanel,
    ReflectarrayPanel,
    AbsorberScreen,
}

impl SegmentKind {
    /// Whether the image method treats this segment as a mirror.
    pub fn is_specular(self) -> bool {
        matches!(self, Self::Wall | Self::FlatPanel)
    }
}

/// An oriented planar boundary. The front side of a reflectarray is the left
/// of `a → b`; cells are laid out from `a` to `b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub a: Point2,
    pub b: Point2,
    pub material_id: String,
    pub kind: SegmentKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub panel_id: Option<String>,
}

impl Segment {
    pub fn new(a: Point2, b: Point2, material_id: impl Into<String>, kind: SegmentKind) -> Self {
        Self {
            a,
            b,
            material_id: material_id.into(),
            kind,
            panel_id: None,
        }
    }

    pub fn with_panel(mut self, panel_id: impl Into<String>) -> Self {
        self.panel_id = Some(panel_id.into());
        self
    }

    pub fn length(&self) -> f64 {
        self.a.distance(self.b)
    }

    pub fn direction(&self) -> Point2 {
        (self.b - self.a).normalized()
    }

    /// Unit normal on the left of `a → b`.
    pub fn normal(&self) -> Point2 {
        self.direction().perp()
    }

    pub fn midpoint(&self) -> Point2 {
        self.a.lerp(self.b, 0.5)
    }

    pub fn is_degenerate(&self) -> bool {
        self.length() <= INTERSECT_TOL
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hit {
    /// Distance along the (unit) ray direction.
    pub t: f64,
    pub point: Point2,
    /// Fractional position along the segment, `0` at `a` and `1` at `b`.
    pub s: f64,
}

/// Smallest `t > MIN_HIT_T` at which the ray crosses `seg`, if any.
///
/// Parallel and collinear configurations never report a hit.
pub fn intersect(ray_origin: Point2, ray_dir: Point2, seg: &Segment) -> Option<Hit> {
    let e = seg.b - seg.a;
    let len = e.norm();
    let denom = ray_dir.cross(e);
    if denom.abs() <= INTERSECT_TOL * len {
        return None;
    }
    let ao = seg.a - ray_origin;
    let t = ao.cross(e) / denom;
    let s = ao.cross(ray_dir) / denom;
    let s_tol = INTERSECT_TOL / len;
    if t <= MIN_HIT_T || s < -s_tol || s > 1.0 + s_tol {
        return None;
    }
    Some(Hit {
        t,
        point: ray_origin + ray_dir * t,
        s: s.clamp(0.0, 1.0),
    })
}

/// Reflection of `p` across the infinite line through `seg`.
pub fn mirror(p: Point2, seg: &Segment) -> Point2 {
    let d = seg.direction();
    let ap = p - seg.a;
    let foot = seg.a + d * ap.dot(d);
    foot * 2.0 - p
}

/// Intersection of the open segment `p → q` with `seg`, returned as the
/// distance from `p`. Ends within `MIN_HIT_T` of `p` or `q` are excluded.
pub fn segment_crossing(p: Point2, q: Point2, seg: &Segment) -> Option<Hit> {
    let len = p.distance(q);
    if len <= MIN_HIT_T {
        return None;
    }
    let dir = (q - p) * (1.0 / len);
    intersect(p, dir, seg).filter(|h| h.t < len - MIN_HIT_T)
}

/// Planar scene: boundaries, material table, reflectarray panels, human
/// blockers and the frequency plan. Omitted fields take their defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Scene {
    pub segments: Vec<Segment>,
    pub materials: BTreeMap<String, Material>,
    pub panels: BTreeMap<String, GroovePanel>,
    pub blockers: Vec<BlockerScreen>,
    pub frequency_plan: FrequencyPlan,
    pub polarization: Polarization,
}

impl Default for Scene {
    fn default() -> Self {
        Self {
            segments: Vec::new(),
            materials: BTreeMap::new(),
            panels: BTreeMap::new(),
            blockers: Vec::new(),
            frequency_plan: FrequencyPlan::measurement(),
            polarization: Polarization::TM,
        }
    }
}

impl Scene {
    pub fn material_of(&self, seg: &Segment) -> Option<&Material> {
        self.materials.get(&seg.material_id)
    }

    pub fn panel_of(&self, seg: &Segment) -> Option<&GroovePanel> {
        seg.panel_id.as_ref().and_then(|id| self.panels.get(id))
    }
}

/// One breach of a scene invariant.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NonFinite {
        segment: usize,
    },
    DegenerateSegment {
        segment: usize,
    },
    MissingMaterial {
        segment: usize,
        material_id: String,
    },
    MissingPanel {
        segment: usize,
    },
    PanelSizeMismatch {
        segment: usize,
        segment_len: f64,
        panel_len: f64,
    },
    SelfIntersection {
        first: usize,
        second: usize,
        at: Point2,
    },
    InvalidMaterial {
        material_id: String,
        reason: String,
    },
    InvalidPanel {
        panel_id: String,
        reason: String,
    },
    InvalidBlocker {
        blocker: usize,
        reason: String,
    },
    FrequencyPlan {
        reason: String,
    },
    Terminal {
        label: String,
        reason: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NonFinite { segment } => write!(f, "segment {segment}: non-finite coordinate"),
            Self::DegenerateSegment { segment } => write!(f, "segment {segment}: degenerate segment"),
            Self::MissingMaterial { segment, material_id } => {
                write!(f, "segment {segment}: missing material '{material_id}'")
            }
            Self::MissingPanel { segment } => write!(f, "segment {segment}: missing panel"),
            Self::PanelSizeMismatch { segment, segment_len, panel_len } => write!(
                f,
                "segment {segment}: panel size mismatch (segment {segment_len} m, panel {panel_len} m)"
            ),
            Self::SelfIntersection { first, second, at } => {
                write!(f, "segments {first} and {second} intersect at {at}")
            }
            Self::InvalidMaterial { material_id, reason } => {
                write!(f, "material '{material_id}': {reason}")
            }
            Self::InvalidPanel { panel_id, reason } => write!(f, "panel '{panel_id}': {reason}"),
            Self::InvalidBlocker { blocker, reason } => write!(f, "blocker {blocker}: {reason}"),
            Self::FrequencyPlan { reason } => write!(f, "frequency plan: {reason}"),
            Self::Terminal { label, reason } => write!(f, "terminal '{label}': {reason}"),
        }
    }
}

const PANEL_SIZE_TOL: f64 = 1e-6;

/// Checks every scene invariant; the result is empty iff the scene is valid.
pub fn validate_scene(scene: &Scene) -> Vec<Violation> {
    let mut out = Vec::new();

    for reason in scene.frequency_plan.violations() {
        out.push(Violation::FrequencyPlan { reason });
    }
    for (id, m) in &scene.materials {
        if let Err(reason) = m.check() {
            out.push(Violation::InvalidMaterial {
                material_id: id.clone(),
                reason,
            });
        }
    }
    for (id, p) in &scene.panels {
        if let Err(reason) = p.check() {
            out.push(Violation::InvalidPanel {
                panel_id: id.clone(),
                reason,
            });
        }
    }
    for (i, b) in scene.blockers.iter().enumerate() {
        if let Err(reason) = b.check() {
            out.push(Violation::InvalidBlocker { blocker: i, reason });
        }
    }

    for (i, seg) in scene.segments.iter().enumerate() {
        if !seg.a.is_finite() || !seg.b.is_finite() {
            out.push(Violation::NonFinite { segment: i });
            continue;
        }
        if seg.is_degenerate() {
            out.push(Violation::DegenerateSegment { segment: i });
        }
        if !scene.materials.contains_key(&seg.material_id) {
            out.push(Violation::MissingMaterial {
                segment: i,
                material_id: seg.material_id.clone(),
            });
        }
        if seg.kind == SegmentKind::ReflectarrayPanel {
            match scene.panel_of(seg) {
                None => out.push(Violation::MissingPanel { segment: i }),
                Some(p) if (p.size_x_m - seg.length()).abs() > PANEL_SIZE_TOL => {
                    out.push(Violation::PanelSizeMismatch {
                        segment: i,
                        segment_len: seg.length(),
                        panel_len: p.size_x_m,
                    })
                }
                Some(_) => {}
            }
        }
    }

    for i in 0..scene.segments.len() {
        for j in (i + 1)..scene.segments.len() {
            let (s, t) = (&scene.segments[i], &scene.segments[j]);
            if s.is_degenerate() || t.is_degenerate() || !s.a.is_finite() || !t.a.is_finite() {
                continue;
            }
            if let Some(at) = improper_crossing(s, t) {
                out.push(Violation::SelfIntersection {
                    first: i,
                    second: j,
                    at,
                });
            }
        }
    }
    out
}

fn shares_endpoint(p: Point2, seg: &Segment) -> bool {
    p.distance(seg.a) <= INTERSECT_TOL || p.distance(seg.b) <= INTERSECT_TOL
}

/// Crossing or overlap between two segments other than at a shared endpoint.
fn improper_crossing(s: &Segment, t: &Segment) -> Option<Point2> {
    let e = s.b - s.a;
    let f = t.b - t.a;
    let denom = e.cross(f);
    let st = t.a - s.a;
    let scale = e.norm() * f.norm();
    if denom.abs() <= INTERSECT_TOL * scale {
        // Parallel: overlapping only if collinear with a shared interior span.
        if st.cross(e).abs() > INTERSECT_TOL * e.norm() {
            return None;
        }
        let d = e.normalized();
        let (lo_s, hi_s) = (0.0f64, e.norm());
        let p0 = st.dot(d);
        let p1 = (t.b - s.a).dot(d);
        let (lo_t, hi_t) = (p0.min(p1), p0.max(p1));
        let lo = lo_s.max(lo_t);
        let hi = hi_s.min(hi_t);
        return (hi - lo > INTERSECT_TOL).then(|| s.a + d * (0.5 * (lo + hi)));
    }
    let u = st.cross(f) / denom;
    let v = st.cross(e) / denom;
    let tol_u = INTERSECT_TOL / e.norm();
    let tol_v = INTERSECT_TOL / f.norm();
    if u < -tol_u || u > 1.0 + tol_u || v < -tol_v || v > 1.0 + tol_v {
        return None;
    }
    let at = s.a + e * u;
    if shares_endpoint(at, s) && shares_endpoint(at, t) {
        None
    } else {
        Some(at)
    }
}
