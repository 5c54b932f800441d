//! Image-method path enumeration and link budgets.
//!
//! Paths are built from specular chains (mirror images over walls and flat
//! panels), single corner diffractions of the direct ray, and reflectarray
//! bounces at the panel center reached through specular chains on either side.
//! Every leg is ray-marched against the scene: walls, panels and reflectarrays
//! obstruct it; absorber screens and human blockers attenuate it and appear as
//! collinear diffraction vertices.

use num_complex::Complex64;
use rayon::prelude::*;
use std::cmp::Ordering;
use std::f64::consts::PI;

use crate::antenna::{AntennaPattern, GainView};
use crate::channel::{average_path_loss, synthesize, ChannelResponse, FrequencyPlan, PathTerm};
use crate::diffraction::{corner_coefficient, screen_transmission, BlockerScreen};
use crate::error::{domain, Result};
use crate::geometry::{
    mirror, segment_crossing, Point2, Scene, Segment, SegmentKind, INTERSECT_TOL,
};
use crate::materials::reflection_coefficient;
use crate::reflectarray::scattered_amplitude;
use crate::units::{delay_ns, power_to_db, wavelength, wavenumber, wrap_offset_deg};

pub const DEFAULT_MAX_ORDER: usize = 2;
pub const MAX_ORDER_LIMIT: usize = 3;
const MAX_INCIDENCE_DEG: f64 = 89.999_999;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InteractionKind {
    Specular,
    Reflectarray,
    Diffraction,
}

impl InteractionKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Specular => "specular",
            Self::Reflectarray => "reflectarray",
            Self::Diffraction => "diffraction",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Interaction {
    Specular {
        segment: usize,
    },
    Reflectarray {
        segment: usize,
    },
    /// Diffraction at an endpoint of `segment`.
    Corner {
        segment: usize,
    },
    /// Transmission past a human blocker.
    Blocker {
        blocker: usize,
    },
    /// Transmission past an absorber-screen segment.
    Screen {
        segment: usize,
    },
}

impl Interaction {
    pub fn kind(self) -> InteractionKind {
        match self {
            Self::Specular { .. } => InteractionKind::Specular,
            Self::Reflectarray { .. } => InteractionKind::Reflectarray,
            _ => InteractionKind::Diffraction,
        }
    }

    /// Whether the interaction changes the ray direction.
    pub fn is_bounce(self) -> bool {
        !matches!(self, Self::Blocker { .. } | Self::Screen { .. })
    }

    fn sort_id(self) -> (u8, usize) {
        match self {
            Self::Specular { segment } => (0, segment),
            Self::Reflectarray { segment } => (1, segment),
            Self::Corner { segment } => (2, segment),
            Self::Blocker { blocker } => (3, blocker),
            Self::Screen { segment } => (4, segment),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropagationPath {
    pub vertices: Vec<Point2>,
    /// One entry per interior vertex.
    pub interactions: Vec<Interaction>,
    pub length_m: f64,
    pub departure_az_deg: f64,
    /// Azimuth from the receiver toward where the wave comes from.
    pub arrival_az_deg: f64,
}

impl PropagationPath {
    fn new(vertices: Vec<Point2>, interactions: Vec<Interaction>) -> Self {
        debug_assert_eq!(interactions.len() + 2, vertices.len());
        let length_m = vertices.windows(2).map(|w| w[0].distance(w[1])).sum();
        let n = vertices.len();
        Self {
            departure_az_deg: (vertices[1] - vertices[0]).azimuth_deg(),
            arrival_az_deg: (vertices[n - 2] - vertices[n - 1]).azimuth_deg(),
            vertices,
            interactions,
            length_m,
        }
    }

    /// Number of direction-changing interactions.
    pub fn order(&self) -> usize {
        self.interactions.iter().filter(|i| i.is_bounce()).count()
    }

    pub fn delay_ns(&self) -> f64 {
        delay_ns(self.length_m)
    }

    fn sort_key(&self) -> (usize, i64, Vec<(u8, usize)>) {
        (
            self.order(),
            (self.length_m * 1e9).round() as i64,
            self.interactions.iter().map(|i| i.sort_id()).collect(),
        )
    }
}

/// Free-space path loss in dB.
pub fn friis_path_loss(f_ghz: f64, d_m: f64) -> Result<f64> {
    if !(d_m > 0.0) {
        return Err(domain(format!("distance must be positive, got {d_m}")));
    }
    if !(f_ghz > 0.0) {
        return Err(domain(format!("frequency must be positive, got {f_ghz}")));
    }
    Ok(20.0 * (4.0 * PI * d_m / wavelength(f_ghz)).log10())
}

/// Result of marching one leg: the transmissions it picks up, in order.
fn march_leg(scene: &Scene, p: Point2, q: Point2) -> Option<Vec<(f64, Point2, Interaction)>> {
    let mut hits = Vec::new();
    for (i, seg) in scene.segments.iter().enumerate() {
        if let Some(h) = segment_crossing(p, q, seg) {
            if seg.kind == SegmentKind::AbsorberScreen {
                hits.push((h.t, h.point, Interaction::Screen { segment: i }));
            } else {
                return None;
            }
        }
    }
    for (i, b) in scene.blockers.iter().enumerate() {
        let (a, c) = b.footprint();
        let foot = Segment::new(a, c, "", SegmentKind::AbsorberScreen);
        if let Some(h) = segment_crossing(p, q, &foot) {
            hits.push((h.t, h.point, Interaction::Blocker { blocker: i }));
        }
    }
    hits.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.2.cmp(&y.2)));
    Some(hits)
}

/// Ray-march a skeleton (terminals plus bounce points) and expand it into a
/// full path with transmission vertices, or reject it if a leg is obstructed.
fn realize(scene: &Scene, skeleton: &[Point2], bounces: &[Interaction]) -> Option<PropagationPath> {
    let mut vertices = vec![skeleton[0]];
    let mut interactions = Vec::new();
    for (k, w) in skeleton.windows(2).enumerate() {
        for (_, pt, it) in march_leg(scene, w[0], w[1])? {
            vertices.push(pt);
            interactions.push(it);
        }
        vertices.push(w[1]);
        if k < bounces.len() {
            interactions.push(bounces[k]);
        }
    }
    Some(PropagationPath::new(vertices, interactions))
}

/// Specular chains from `from` to `to` with exactly `order` bounces, as lists
/// of bounce points and segment ids. Chains are not ray-marched here.
fn specular_chains(
    scene: &Scene,
    from: Point2,
    to: Point2,
    order: usize,
) -> Vec<(Vec<Point2>, Vec<usize>)> {
    let mirrors: Vec<usize> = scene
        .segments
        .iter()
        .enumerate()
        .filter(|(_, s)| s.kind.is_specular() && !s.is_degenerate())
        .map(|(i, _)| i)
        .collect();
    let mut out = Vec::new();
    let mut seq = Vec::with_capacity(order);
    let mut images = Vec::with_capacity(order);
    enumerate(
        scene,
        &mirrors,
        from,
        to,
        order,
        &mut seq,
        &mut images,
        &mut out,
    );
    out
}

#[allow(clippy::too_many_arguments)]
fn enumerate(
    scene: &Scene,
    mirrors: &[usize],
    from: Point2,
    to: Point2,
    order: usize,
    seq: &mut Vec<usize>,
    images: &mut Vec<Point2>,
    out: &mut Vec<(Vec<Point2>, Vec<usize>)>,
) {
    if seq.len() == order {
        if let Some(points) = backtrack(scene, to, seq, images) {
            out.push((points, seq.clone()));
        }
        return;
    }
    let prev_image = images.last().copied().unwrap_or(from);
    for &m in mirrors {
        if seq.last() == Some(&m) {
            continue;
        }
        seq.push(m);
        images.push(mirror(prev_image, &scene.segments[m]));
        enumerate(scene, mirrors, from, to, order, seq, images, out);
        seq.pop();
        images.pop();
    }
}

fn backtrack(scene: &Scene, to: Point2, seq: &[usize], images: &[Point2]) -> Option<Vec<Point2>> {
    let mut points = vec![Point2::default(); seq.len()];
    let mut target = to;
    for j in (0..seq.len()).rev() {
        let hit = segment_crossing(target, images[j], &scene.segments[seq[j]])?;
        points[j] = hit.point;
        target = hit.point;
    }
    Some(points)
}

fn skeleton(from: Point2, bounce_points: &[Point2], to: Point2) -> Vec<Point2> {
    let mut v = Vec::with_capacity(bounce_points.len() + 2);
    v.push(from);
    v.extend_from_slice(bounce_points);
    v.push(to);
    v
}

fn specular_paths(
    scene: &Scene,
    tx: Point2,
    rx: Point2,
    max_order: usize,
    out: &mut Vec<PropagationPath>,
) {
    for order in 0..=max_order {
        for (points, seq) in specular_chains(scene, tx, rx, order) {
            let bounces: Vec<Interaction> = seq
                .iter()
                .map(|&segment| Interaction::Specular { segment })
                .collect();
            if let Some(p) = realize(scene, &skeleton(tx, &points, rx), &bounces) {
                out.push(p);
            }
        }
    }
}

fn corner_paths(scene: &Scene, tx: Point2, rx: Point2, out: &mut Vec<PropagationPath>) {
    let obstructing: Vec<usize> = scene
        .segments
        .iter()
        .enumerate()
        .filter(|(_, s)| {
            s.kind != SegmentKind::AbsorberScreen && segment_crossing(tx, rx, s).is_some()
        })
        .map(|(i, _)| i)
        .collect();
    if obstructing.is_empty() {
        return;
    }
    let mut corners: Vec<(Point2, usize)> = Vec::new();
    for &i in &obstructing {
        let s = &scene.segments[i];
        for c in [s.a, s.b] {
            if !corners.iter().any(|(p, _)| p.distance(c) <= INTERSECT_TOL) {
                corners.push((c, i));
            }
        }
    }
    for (c, segment) in corners {
        if c.distance(tx) <= INTERSECT_TOL || c.distance(rx) <= INTERSECT_TOL {
            continue;
        }
        if let Some(p) = realize(scene, &[tx, c, rx], &[Interaction::Corner { segment }]) {
            out.push(p);
        }
    }
}

fn reflectarray_paths(
    scene: &Scene,
    tx: Point2,
    rx: Point2,
    max_order: usize,
    out: &mut Vec<PropagationPath>,
) {
    if max_order == 0 {
        return;
    }
    for (r, seg) in scene.segments.iter().enumerate() {
        if seg.kind != SegmentKind::ReflectarrayPanel || scene.panel_of(seg).is_none() {
            continue;
        }
        let center = seg.midpoint();
        let n = seg.normal();
        for a in 0..max_order {
            let ins = specular_chains(scene, tx, center, a);
            if ins.is_empty() {
                continue;
            }
            for b in 0..(max_order - a) {
                let outs = specular_chains(scene, center, rx, b);
                for (pin, sin) in &ins {
                    let before = pin.last().copied().unwrap_or(tx);
                    if (center - before).dot(n) >= 0.0 {
                        continue;
                    }
                    for (pout, sout) in &outs {
                        let after = pout.first().copied().unwrap_or(rx);
                        if (after - center).dot(n) <= 0.0 {
                            continue;
                        }
                        let mut points = pin.clone();
                        points.push(center);
                        points.extend_from_slice(pout);
                        let mut bounces: Vec<Interaction> = sin
                            .iter()
                            .map(|&segment| Interaction::Specular { segment })
                            .collect();
                        bounces.push(Interaction::Reflectarray { segment: r });
                        bounces.extend(
                            sout.iter()
                                .map(|&segment| Interaction::Specular { segment }),
                        );
                        if let Some(p) = realize(scene, &skeleton(tx, &points, rx), &bounces) {
                            out.push(p);
                        }
                    }
                }
            }
        }
    }
}

/// All paths from `tx` to `rx` with at most `max_order` bounces, ordered by
/// (order, length, interaction ids).
pub fn find_paths(
    scene: &Scene,
    tx: Point2,
    rx: Point2,
    max_order: usize,
) -> Result<Vec<PropagationPath>> {
    if !tx.is_finite() || !rx.is_finite() {
        return Err(domain("terminal positions must be finite"));
    }
    if tx.distance(rx) <= INTERSECT_TOL {
        return Err(domain("transmitter and receiver coincide"));
    }
    if max_order > MAX_ORDER_LIMIT {
        return Err(domain(format!(
            "max order is limited to {MAX_ORDER_LIMIT}, got {max_order}"
        )));
    }
    let mut paths = Vec::new();
    specular_paths(scene, tx, rx, max_order, &mut paths);
    if max_order >= 1 {
        corner_paths(scene, tx, rx, &mut paths);
    }
    reflectarray_paths(scene, tx, rx, max_order, &mut paths);
    paths.sort_by_cached_key(|p| p.sort_key());
    Ok(paths)
}

/// A radiating or receiving end of a link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Endpoint {
    pub position: Point2,
    pub height_m: f64,
    pub pattern: AntennaPattern,
    pub orientation_deg: f64,
}

impl Endpoint {
    pub fn rotated(mut self, by_deg: f64) -> Self {
        self.orientation_deg = crate::units::normalize_deg(self.orientation_deg + by_deg);
        self
    }
}

/// Antenna-height at each vertex, interpolated along the unfolded path.
fn vertex_heights(path: &PropagationPath, tx_h: f64, rx_h: f64) -> Vec<f64> {
    let mut acc = 0.0;
    let mut out = vec![tx_h];
    for w in path.vertices.windows(2) {
        acc += w[0].distance(w[1]);
        out.push(tx_h + (rx_h - tx_h) * acc / path.length_m);
    }
    out
}

fn screen_for_segment(seg: &Segment) -> BlockerScreen {
    BlockerScreen {
        center: seg.midpoint(),
        width_m: seg.length(),
        thickness_m: 0.0,
        height_m: f64::INFINITY,
        top_height_m: f64::INFINITY,
        facing_az_deg: seg.normal().azimuth_deg(),
    }
}

fn interaction_factor(
    scene: &Scene,
    path: &PropagationPath,
    heights: &[f64],
    i: usize,
    f_ghz: f64,
) -> Complex64 {
    let v = &path.vertices;
    let here = v[i + 1];
    let d_in = (here - v[i]).normalized();
    let d_out = (v[i + 2] - here).normalized();
    let zero = Complex64::new(0.0, 0.0);
    match path.interactions[i] {
        Interaction::Specular { segment } => {
            let seg = &scene.segments[segment];
            let Some(m) = scene.material_of(seg) else {
                return zero;
            };
            let cos_in = d_in.dot(seg.normal()).abs().min(1.0);
            let theta = cos_in.acos().to_degrees().min(MAX_INCIDENCE_DEG);
            reflection_coefficient(m, theta, scene.polarization, f_ghz).unwrap_or(zero)
        }
        Interaction::Reflectarray { segment } => {
            let seg = &scene.segments[segment];
            let Some(panel) = scene.panel_of(seg) else {
                return zero;
            };
            let (x, n) = (seg.direction(), seg.normal());
            let inc = Point2::new(d_in.dot(x), d_in.dot(n));
            let obs = d_out.dot(x).atan2(d_out.dot(n)).to_degrees();
            scattered_amplitude(panel, inc, obs, f_ghz)
        }
        Interaction::Corner { .. } => {
            let direct = v[0].distance(v[v.len() - 1]);
            corner_coefficient(path.length_m - direct, f_ghz)
        }
        Interaction::Blocker { blocker } => {
            transmission(&scene.blockers[blocker], path, heights, i + 1, f_ghz)
        }
        Interaction::Screen { segment } => transmission(
            &screen_for_segment(&scene.segments[segment]),
            path,
            heights,
            i + 1,
            f_ghz,
        ),
    }
}

/// Field factor of a screen at vertex `k`, evaluated over the enclosing leg.
fn transmission(
    screen: &BlockerScreen,
    path: &PropagationPath,
    heights: &[f64],
    k: usize,
    f_ghz: f64,
) -> Complex64 {
    let is_leg_end =
        |j: usize| j == 0 || j == path.vertices.len() - 1 || path.interactions[j - 1].is_bounce();
    let mut a = k - 1;
    while !is_leg_end(a) {
        a -= 1;
    }
    let mut b = k + 1;
    while !is_leg_end(b) {
        b += 1;
    }
    let p = screen_transmission(
        screen,
        path.vertices[a],
        heights[a],
        path.vertices[b],
        heights[b],
        f_ghz,
    )
    .unwrap_or(1.0);
    Complex64::new(p.min(1.0).sqrt(), 0.0)
}

/// Complex path amplitude excluding the propagation phase `exp(-j k L)`.
pub fn path_amplitude(
    path: &PropagationPath,
    scene: &Scene,
    tx: &Endpoint,
    rx: &Endpoint,
    f_ghz: f64,
    view: GainView,
) -> Complex64 {
    let heights = vertex_heights(path, tx.height_m, rx.height_m);
    let mut a = Complex64::new(wavelength(f_ghz) / (4.0 * PI * path.length_m), 0.0);
    for i in 0..path.interactions.len() {
        a *= interaction_factor(scene, path, &heights, i, f_ghz);
    }
    let gt = view.gain_db(
        &tx.pattern,
        wrap_offset_deg(path.departure_az_deg, tx.orientation_deg),
        0.0,
    );
    let gr = view.gain_db(
        &rx.pattern,
        wrap_offset_deg(path.arrival_az_deg, rx.orientation_deg),
        0.0,
    );
    a * 10f64.powf((gt + gr) / 20.0)
}

/// Complex path gain at `f_ghz`, including the propagation phase.
pub fn path_gain(
    path: &PropagationPath,
    scene: &Scene,
    tx: &Endpoint,
    rx: &Endpoint,
    f_ghz: f64,
    view: GainView,
) -> Complex64 {
    path_amplitude(path, scene, tx, rx, f_ghz, view)
        * Complex64::from_polar(1.0, -wavenumber(f_ghz) * path.length_m)
}

/// One path bound to its link, usable as a channel term.
#[derive(Debug, Clone, Copy)]
pub struct LinkBudgetTerm<'a> {
    pub path: &'a PropagationPath,
    pub scene: &'a Scene,
    pub tx: &'a Endpoint,
    pub rx: &'a Endpoint,
    pub view: GainView,
}

impl PathTerm for LinkBudgetTerm<'_> {
    fn delay_ns(&self) -> f64 {
        self.path.delay_ns()
    }

    fn gain(&self, f_ghz: f64) -> Complex64 {
        path_amplitude(self.path, self.scene, self.tx, self.rx, f_ghz, self.view)
    }
}

pub fn link_terms<'a>(
    paths: &'a [PropagationPath],
    scene: &'a Scene,
    tx: &'a Endpoint,
    rx: &'a Endpoint,
    view: GainView,
) -> Vec<LinkBudgetTerm<'a>> {
    paths
        .iter()
        .map(|path| LinkBudgetTerm {
            path,
            scene,
            tx,
            rx,
            view,
        })
        .collect()
}

/// Wideband response of the link over the scene's frequency plan.
pub fn channel_response(
    scene: &Scene,
    tx: &Endpoint,
    rx: &Endpoint,
    max_order: usize,
    view: GainView,
) -> Result<ChannelResponse> {
    let paths = find_paths(scene, tx.position, rx.position, max_order)?;
    Ok(response_from_paths(
        &paths,
        scene,
        tx,
        rx,
        view,
        &scene.frequency_plan,
    ))
}

pub fn response_from_paths(
    paths: &[PropagationPath],
    scene: &Scene,
    tx: &Endpoint,
    rx: &Endpoint,
    view: GainView,
    plan: &FrequencyPlan,
) -> ChannelResponse {
    synthesize(&link_terms(paths, scene, tx, rx, view), plan)
}

/// Averaged path loss in dB for each transmitter position, in input order.
/// Positions without any path report `+inf`.
pub fn coverage_sweep(
    scene: &Scene,
    txs: &[Endpoint],
    rx: &Endpoint,
    max_order: usize,
    view: GainView,
) -> Result<Vec<f64>> {
    txs.par_iter()
        .map(|tx| channel_response(scene, tx, rx, max_order, view).map(|r| average_path_loss(&r)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AoaSample {
    /// Rotation applied to the receiver's nominal orientation.
    pub rotation_deg: f64,
    /// Resulting receiver azimuth.
    pub azimuth_deg: f64,
    pub power_dbm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AoaSweep {
    pub samples: Vec<AoaSample>,
    /// Index of the strongest sample (earliest on ties).
    pub argmax: usize,
}

impl AoaSweep {
    pub fn max(&self) -> AoaSample {
        self.samples[self.argmax]
    }
}

/// Rotate the receiver through 360 degrees in `step_deg` increments and
/// record the received power at the center frequency.
pub fn aoa_sweep(
    scene: &Scene,
    tx: &Endpoint,
    rx: &Endpoint,
    step_deg: f64,
    max_order: usize,
    view: GainView,
) -> Result<AoaSweep> {
    let n = 360.0 / step_deg;
    if !(step_deg > 0.0) || (n - n.round()).abs() > 1e-9 {
        return Err(domain(format!(
            "sweep step must divide 360 degrees, got {step_deg}"
        )));
    }
    let n = n.round() as usize;
    let paths = find_paths(scene, tx.position, rx.position, max_order)?;
    let fc = scene.frequency_plan.fc_ghz;
    let pt = scene.frequency_plan.tx_power_dbm;
    let samples: Vec<AoaSample> = (0..n)
        .map(|i| {
            let rotation_deg = i as f64 * step_deg;
            let r = rx.rotated(rotation_deg);
            let p: f64 = paths
                .iter()
                .map(|path| path_amplitude(path, scene, tx, &r, fc, view).norm_sqr())
                .sum();
            AoaSample {
                rotation_deg,
                azimuth_deg: r.orientation_deg,
                power_dbm: pt + power_to_db(p),
            }
        })
        .collect();
    let mut argmax = 0;
    for (i, s) in samples.iter().enumerate() {
        if s.power_dbm > samples[argmax].power_dbm {
            argmax = i;
        }
    }
    Ok(AoaSweep { samples, argmax })
}

impl PartialOrd for AoaSample {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.power_dbm.partial_cmp(&other.power_dbm)
    }
}
