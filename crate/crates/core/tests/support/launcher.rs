//! Brute-force angular ray launcher used as an independent check of the
//! image method in convex rooms with perfectly reflecting walls.
//!
//! Rays leave the transmitter on a uniform angular grid and bounce
//! specularly. For every leg the signed miss distance of the receiver from
//! the leg's line is sampled; a sign change between neighbouring launch
//! angles with an unchanged bounce history and the receiver within the leg
//! brackets a path, which is then refined by bisection.

#![allow(dead_code)]

use mmwsim::Point2;

pub type Wall = (Point2, Point2);

#[derive(Debug, Clone, PartialEq)]
pub struct LaunchedPath {
    pub walls: Vec<usize>,
    pub length: f64,
}

#[derive(Clone)]
struct LegSample {
    walls: Vec<usize>,
    miss: f64,
    along: f64,
    leg_len: f64,
    unfolded: f64,
}

fn cross(a: Point2, b: Point2) -> f64 {
    a.x * b.y - a.y * b.x
}

fn dot(a: Point2, b: Point2) -> f64 {
    a.x * b.x + a.y * b.y
}

fn nearest_wall(walls: &[Wall], o: Point2, d: Point2, skip: Option<usize>) -> Option<(f64, usize)> {
    let mut best: Option<(f64, usize)> = None;
    for (j, &(a, b)) in walls.iter().enumerate() {
        if Some(j) == skip {
            continue;
        }
        let e = Point2::new(b.x - a.x, b.y - a.y);
        let den = cross(d, e);
        if den.abs() < 1e-15 {
            continue;
        }
        let ao = Point2::new(a.x - o.x, a.y - o.y);
        let t = cross(ao, e) / den;
        let s = cross(ao, d) / den;
        if t > 1e-12 && (0.0..=1.0).contains(&s) && best.map_or(true, |(bt, _)| t < bt) {
            best = Some((t, j));
        }
    }
    best
}

fn trace(walls: &[Wall], tx: Point2, rx: Point2, theta: f64, max_order: usize) -> Vec<LegSample> {
    let mut o = tx;
    let mut d = Point2::new(theta.cos(), theta.sin());
    let mut seq = Vec::new();
    let mut unfolded = 0.0;
    let mut out = Vec::with_capacity(max_order + 1);
    for k in 0..=max_order {
        let Some((t, j)) = nearest_wall(walls, o, d, seq.last().copied()) else {
            break;
        };
        let r = Point2::new(rx.x - o.x, rx.y - o.y);
        out.push(LegSample {
            walls: seq.clone(),
            miss: cross(d, r),
            along: dot(d, r),
            leg_len: t,
            unfolded,
        });
        if k == max_order {
            break;
        }
        let (a, b) = walls[j];
        let e = Point2::new(b.x - a.x, b.y - a.y);
        let el = (e.x * e.x + e.y * e.y).sqrt();
        let n = Point2::new(-e.y / el, e.x / el);
        let dn = dot(d, n);
        o = Point2::new(o.x + d.x * t, o.y + d.y * t);
        d = Point2::new(d.x - 2.0 * dn * n.x, d.y - 2.0 * dn * n.y);
        seq.push(j);
        unfolded += t;
    }
    out
}

fn inside(s: &LegSample) -> bool {
    s.along > 0.0 && s.along < s.leg_len
}

/// All specular paths up to `max_order` bounces found with `n_angles` launch
/// directions, sorted by (order, length).
pub fn launch(
    walls: &[Wall],
    tx: Point2,
    rx: Point2,
    max_order: usize,
    n_angles: usize,
) -> Vec<LaunchedPath> {
    let step = 2.0 * std::f64::consts::PI / n_angles as f64;
    let first = trace(walls, tx, rx, 0.0, max_order);
    let mut prev = first.clone();
    let mut found = Vec::new();
    for i in 1..=n_angles {
        let th1 = i as f64 * step;
        let cur = if i == n_angles {
            first.clone()
        } else {
            trace(walls, tx, rx, th1, max_order)
        };
        for k in 0..prev.len().min(cur.len()) {
            let (a, b) = (&prev[k], &cur[k]);
            if a.walls != b.walls || a.miss.signum() == b.miss.signum() || !(inside(a) && inside(b))
            {
                continue;
            }
            let (mut lo, mut hi) = (th1 - step, th1);
            let lo_sign = a.miss.signum();
            let mut sample = a.clone();
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                let Some(s) = trace(walls, tx, rx, mid, max_order).get(k).cloned() else {
                    break;
                };
                if s.walls != a.walls {
                    break;
                }
                if s.miss.signum() == lo_sign {
                    lo = mid;
                } else {
                    hi = mid;
                }
                sample = s;
            }
            found.push(LaunchedPath {
                walls: sample.walls.clone(),
                length: sample.unfolded + sample.along,
            });
        }
        prev = cur;
    }
    found.sort_by(|x, y| {
        x.walls
            .len()
            .cmp(&y.walls.len())
            .then(x.length.total_cmp(&y.length))
    });
    found
}
