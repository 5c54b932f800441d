//! Randomized link scenes for reciprocity checks.

#![allow(dead_code)]

use mmwsim::{
    design_panel, AntennaPattern, BlockerScreen, Endpoint, Material, PanelMode, Point2, Scene,
    Segment, SegmentKind,
};
use proptest::prelude::*;

#[derive(Debug, Clone)]
pub struct Link {
    pub scene: Scene,
    pub tx: Endpoint,
    pub rx: Endpoint,
}

fn material(kind: u8, x: f64) -> Material {
    match kind {
        0 => Material::perfect_conductor("m"),
        1 => Material::fixed_loss("m", 3.0 * x),
        _ => Material::dielectric("m", 1.5 + 5.0 * x, 0.3 * x),
    }
}

fn endpoint(p: Point2, horn: bool, az: f64, h: f64) -> Endpoint {
    Endpoint {
        position: p,
        height_m: h,
        pattern: if horn {
            AntennaPattern::horn(20.0, 30.0, 20.0)
        } else {
            AntennaPattern::omni(2.0, 30.0)
        },
        orientation_deg: az,
    }
}

/// Rectangular room, an interior wall, optionally a blocker and a groove
/// panel on the south wall, and two terminals with random patterns.
pub fn link() -> impl Strategy<Value = Link> {
    (
        (3.0..8.0f64, 2.0..5.0f64, 0u8..3, 0.0..1.0f64),
        (0.1..0.9f64, 0.1..0.9f64, 0.1..0.9f64, 0.1..0.9f64),
        (
            0.2..0.8f64,
            0.3..0.7f64,
            0.0..180.0f64,
            0.1..0.4f64,
            any::<bool>(),
        ),
        (
            any::<bool>(),
            any::<bool>(),
            any::<bool>(),
            0.0..360.0f64,
            0.0..360.0f64,
        ),
        (any::<bool>(), 1.2..2.0f64),
    )
        .prop_filter_map(
            "terminals must clear the interior wall",
            |(
                (w, h, mk, mx),
                (tx_u, tx_v, rx_u, rx_v),
                (wx, wy, wang, wlen, wall_on),
                (blk, th, rh, taz, raz),
                (ra, height),
            )| {
                let mut scene = Scene::default();
                scene.materials.insert("m".into(), material(mk, mx));
                scene
                    .materials
                    .insert("pec".into(), Material::perfect_conductor("pec"));
                let c = [
                    Point2::new(0.0, 0.0),
                    Point2::new(w, 0.0),
                    Point2::new(w, h),
                    Point2::new(0.0, h),
                ];
                for i in 0..4 {
                    scene
                        .segments
                        .push(Segment::new(c[i], c[(i + 1) % 4], "m", SegmentKind::Wall));
                }
                let tx = Point2::new(tx_u * w, tx_v * h);
                let rx = Point2::new(rx_u * w, rx_v * h);
                if tx.distance(rx) < 0.3 {
                    return None;
                }
                if wall_on {
                    let center = Point2::new(wx * w, wy * h);
                    let half = Point2::from_azimuth_deg(wang) * (0.5 * wlen * h);
                    let seg = Segment::new(center - half, center + half, "pec", SegmentKind::Wall);
                    let clear = |p: Point2| {
                        let d = seg.direction();
                        let rel = p - seg.a;
                        let along = rel.dot(d).clamp(0.0, seg.length());
                        (seg.a + d * along).distance(p) > 0.05
                    };
                    if !(clear(tx) && clear(rx)) {
                        return None;
                    }
                    scene.segments.push(seg);
                }
                if ra {
                    let panel = design_panel(60.0, 80, PanelMode::Table2).ok()?;
                    let mid = Point2::new(0.5 * w, 0.0);
                    let half = 0.5 * panel.size_x_m;
                    scene.segments[0] = Segment::new(
                        Point2::new(0.0, 0.0),
                        Point2::new(mid.x - half, 0.0),
                        "m",
                        SegmentKind::Wall,
                    );
                    scene.segments.insert(
                        1,
                        Segment::new(
                            Point2::new(mid.x + half, 0.0),
                            Point2::new(w, 0.0),
                            "m",
                            SegmentKind::Wall,
                        ),
                    );
                    // Front side faces into the room (left of a -> b).
                    let p = Segment::new(
                        Point2::new(mid.x - half, 0.0),
                        Point2::new(mid.x + half, 0.0),
                        "pec",
                        SegmentKind::ReflectarrayPanel,
                    )
                    .with_panel("ra");
                    scene.segments.push(p);
                    scene.panels.insert("ra".into(), panel);
                }
                if blk {
                    let mid = tx.lerp(rx, 0.5);
                    scene.blockers.push(BlockerScreen {
                        center: mid,
                        width_m: 0.45,
                        thickness_m: 0.13,
                        height_m: 1.72,
                        top_height_m: height + 0.47,
                        facing_az_deg: (rx - tx).azimuth_deg(),
                    });
                }
                if !mmwsim::validate_scene(&scene).is_empty() {
                    return None;
                }
                Some(Link {
                    scene,
                    tx: endpoint(tx, th, taz, height),
                    rx: endpoint(rx, rh, raz, height),
                })
            },
        )
}
