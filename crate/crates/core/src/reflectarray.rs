//! Metal-only groove reflectarray.
//!
//! Each groove is a short-circuited parallel-plate waveguide; its TEM round
//! trip fixes the cell reflection phase. The panel scatters as a linear array
//! of such cells with a uniform-aperture element factor.
//!
//! Panel frame: `x` runs along the panel (cell 0 first), `y` is the front
//! normal. Directions are unit vectors in this frame; an incident propagation
//! direction coming from the front has `y < 0`. Observation angles are measured
//! from the normal, positive toward `+x`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{domain, Result};
use crate::geometry::Point2;
use crate::units::{wavelength, wavenumber, wrap_offset_deg};

pub const ALUMINUM_CONDUCTIVITY: f64 = 37.8e6;
const SIZE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrooveCell {
    pub pitch_mm: f64,
    pub width_mm: f64,
    pub depth_mm: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PanelMode {
    /// Depths 0 and a quarter wavelength, pitch half a wavelength.
    IdealTem,
    /// The fabricated cell pair: 2.5 mm pitch, 2 mm grooves, 2.3 / 0.48 mm deep.
    Table2,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PanelSource")]
pub struct GroovePanel {
    pub cells: Vec<GrooveCell>,
    pub design_frequency_ghz: f64,
    pub size_x_m: f64,
    pub size_y_m: f64,
    pub conductivity_s_per_m: f64,
}

/// On-disk panel description: an explicit cell table or a design request.
#[derive(Deserialize)]
#[serde(untagged)]
enum PanelSource {
    Design {
        design: DesignSpec,
    },
    Cells {
        cells: Vec<GrooveCell>,
        design_frequency_ghz: f64,
        size_x_m: f64,
        size_y_m: f64,
        conductivity_s_per_m: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DesignSpec {
    pub frequency_ghz: f64,
    pub n_cells: usize,
    pub mode: PanelMode,
}

impl TryFrom<PanelSource> for GroovePanel {
    type Error = String;

    fn try_from(src: PanelSource) -> std::result::Result<Self, String> {
        match src {
            PanelSource::Design { design } => {
                design_panel(design.frequency_ghz, design.n_cells, design.mode)
                    .map_err(|e| e.to_string())
            }
            PanelSource::Cells {
                cells,
                design_frequency_ghz,
                size_x_m,
                size_y_m,
                conductivity_s_per_m,
            } => Ok(Self {
                cells,
                design_frequency_ghz,
                size_x_m,
                size_y_m,
                conductivity_s_per_m,
            }),
        }
    }
}

impl GroovePanel {
    pub fn from_cells(cells: Vec<GrooveCell>, design_frequency_ghz: f64, size_y_m: f64) -> Self {
        let size_x_m = cells.iter().map(|c| c.pitch_mm).sum::<f64>() * 1e-3;
        Self {
            cells,
            design_frequency_ghz,
            size_x_m,
            size_y_m,
            conductivity_s_per_m: ALUMINUM_CONDUCTIVITY,
        }
    }

    /// Panel with every cell identical (a corrugated flat plate).
    pub fn uniform(n_cells: usize, cell: GrooveCell, design_frequency_ghz: f64) -> Self {
        Self::from_cells(vec![cell; n_cells], design_frequency_ghz, 0.2)
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Cell center abscissae in meters, centered on the panel midpoint.
    pub fn cell_centers_m(&self) -> Vec<f64> {
        let mut x = -0.5 * self.size_x_m;
        self.cells
            .iter()
            .map(|c| {
                let p = c.pitch_mm * 1e-3;
                let center = x + 0.5 * p;
                x += p;
                center
            })
            .collect()
    }

    pub fn check(&self) -> std::result::Result<(), String> {
        if self.cells.is_empty() {
            return Err("panel has no cells".into());
        }
        for (i, c) in self.cells.iter().enumerate() {
            if !(c.width_mm > 0.0 && c.width_mm < c.pitch_mm) {
                return Err(format!("cell {i}: width must satisfy 0 < b < p"));
            }
            if !(c.depth_mm >= 0.0 && c.depth_mm.is_finite()) {
                return Err(format!("cell {i}: depth must be >= 0"));
            }
        }
        let sum = self.cells.iter().map(|c| c.pitch_mm).sum::<f64>() * 1e-3;
        if (sum - self.size_x_m).abs() > SIZE_TOL {
            return Err(format!(
                "size_x {} m differs from the summed pitch {} m",
                self.size_x_m, sum
            ));
        }
        if !(self.design_frequency_ghz > 0.0
            && self.size_y_m > 0.0
            && self.conductivity_s_per_m > 0.0)
        {
            return Err("frequency, height and conductivity must be positive".into());
        }
        Ok(())
    }
}

/// Reflection phase of a groove in degrees, `(-180, 180]`.
pub fn cell_phase(cell: &GrooveCell, f_ghz: f64) -> f64 {
    let round_trip = 2.0 * wavenumber(f_ghz) * cell.depth_mm * 1e-3;
    wrap_offset_deg(180.0 - round_trip.to_degrees(), 0.0)
}

pub fn design_panel(f_ghz: f64, n_cells: usize, mode: PanelMode) -> Result<GroovePanel> {
    if !(f_ghz > 0.0 && f_ghz.is_finite()) {
        return Err(domain(format!(
            "design frequency must be positive, got {f_ghz}"
        )));
    }
    if n_cells == 0 || n_cells % 2 != 0 {
        return Err(domain(format!(
            "cell count must be even and positive, got {n_cells}"
        )));
    }
    let (pitch, width, depths, size_y) = match mode {
        PanelMode::IdealTem => {
            let lambda_mm = wavelength(f_ghz) * 1e3;
            let p = 0.5 * lambda_mm;
            (
                p,
                0.8 * p,
                [0.0, 0.25 * lambda_mm],
                n_cells as f64 * p * 1e-3,
            )
        }
        PanelMode::Table2 => (2.5, 2.0, [2.3, 0.48], 0.2),
    };
    let cells = (0..n_cells)
        .map(|i| GrooveCell {
            pitch_mm: pitch,
            width_mm: width,
            depth_mm: depths[i % 2],
        })
        .collect();
    Ok(GroovePanel::from_cells(cells, f_ghz, size_y))
}

/// Whether the element factor is applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ElementFactor {
    #[default]
    On,
    Off,
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Bistatic amplitude relative to a same-size conducting plate at normal
/// incidence (which scores `-1` in the specular direction).
pub fn scattered_amplitude(
    panel: &GroovePanel,
    inc_dir: Point2,
    obs_angle_deg: f64,
    f_ghz: f64,
) -> Complex64 {
    scattered_amplitude_with(panel, inc_dir, obs_angle_deg, f_ghz, ElementFactor::On)
}

pub fn scattered_amplitude_with(
    panel: &GroovePanel,
    inc_dir: Point2,
    obs_angle_deg: f64,
    f_ghz: f64,
    ef: ElementFactor,
) -> Complex64 {
    if inc_dir.y >= 0.0 || panel.is_empty() {
        return Complex64::new(0.0, 0.0);
    }
    let k = wavenumber(f_ghz);
    let (so, co) = obs_angle_deg.to_radians().sin_cos();
    let u = so - inc_dir.x;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut x = -0.5 * panel.size_x_m;
    for cell in &panel.cells {
        let p = cell.pitch_mm * 1e-3;
        let xn = x + 0.5 * p;
        x += p;
        let gamma = Complex64::from_polar(1.0, cell_phase(cell, f_ghz).to_radians());
        let element = match ef {
            ElementFactor::On => sinc(0.5 * k * cell.width_mm * 1e-3 * u),
            ElementFactor::Off => 1.0,
        };
        sum += gamma * element * Complex64::from_polar(1.0, k * xn * u);
    }
    let obliquity = match ef {
        ElementFactor::On => co * (-inc_dir.y),
        ElementFactor::Off => 1.0,
    };
    sum * (obliquity / panel.len() as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScatterPattern {
    pub angles_deg: Vec<f64>,
    pub amplitude: Vec<Complex64>,
}

impl ScatterPattern {
    pub fn magnitude_db(&self) -> Vec<f64> {
        self.amplitude
            .iter()
            .map(|a| 20.0 * a.norm().max(1e-15).log10())
            .collect()
    }
}

pub const PATTERN_STEP_DEG: f64 = 0.1;

/// Pattern on the open grid `(-90, 90)` with the given step.
pub fn scatter_pattern(
    panel: &GroovePanel,
    inc_dir: Point2,
    f_ghz: f64,
    step_deg: f64,
    ef: ElementFactor,
) -> ScatterPattern {
    let n = (180.0 / step_deg).round() as usize;
    let angles_deg: Vec<f64> = (1..n).map(|i| -90.0 + i as f64 * step_deg).collect();
    let amplitude = angles_deg
        .iter()
        .map(|&a| scattered_amplitude_with(panel, inc_dir, a, f_ghz, ef))
        .collect();
    ScatterPattern {
        angles_deg,
        amplitude,
    }
}

/// Local maxima of the pattern magnitude on a 0.1 degree grid, strongest first.
pub fn peak_directions(panel: &GroovePanel, inc_dir: Point2, f_ghz: f64) -> Vec<f64> {
    peak_directions_with(panel, inc_dir, f_ghz, ElementFactor::On)
}

pub fn peak_directions_with(
    panel: &GroovePanel,
    inc_dir: Point2,
    f_ghz: f64,
    ef: ElementFactor,
) -> Vec<f64> {
    let pat = scatter_pattern(panel, inc_dir, f_ghz, PATTERN_STEP_DEG, ef);
    let mag: Vec<f64> = pat.amplitude.iter().map(|a| a.norm()).collect();
    let n = mag.len();
    let mut peaks: Vec<(f64, f64)> = Vec::new();
    for i in 0..n {
        let left = if i == 0 { 0.0 } else { mag[i - 1] };
        let right = if i + 1 == n { 0.0 } else { mag[i + 1] };
        if mag[i] > 0.0 && mag[i] >= left && mag[i] > right {
            peaks.push((pat.angles_deg[i], mag[i]));
        }
    }
    peaks.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.total_cmp(&b.0)));
    peaks.into_iter().map(|(a, _)| a).collect()
}

/// Strongest peak on each side of the normal lying at least `min_sep_deg`
/// away from the specular direction, as `(positive, negative)` angles.
pub fn off_specular_pair(
    panel: &GroovePanel,
    inc_dir: Point2,
    f_ghz: f64,
    min_sep_deg: f64,
) -> Option<(f64, f64)> {
    let specular = inc_dir.x.clamp(-1.0, 1.0).asin().to_degrees();
    let peaks = peak_directions(panel, inc_dir, f_ghz);
    let far = |a: &&f64| (**a - specular).abs() >= min_sep_deg;
    let plus = *peaks.iter().filter(far).find(|a| **a > 0.0)?;
    let minus = *peaks.iter().filter(far).find(|a| **a < 0.0)?;
    Some((plus, minus))
}

/// Half-power beamwidth in degrees of the lobe peaking at `peak_deg`.
///
/// Each -3 dB edge is bracketed on a 0.01 degree walk and refined by bisection.
/// Returns `None` if an edge is not reached before the visible-range limit.
pub fn half_power_beamwidth(
    panel: &GroovePanel,
    inc_dir: Point2,
    f_ghz: f64,
    peak_deg: f64,
) -> Option<f64> {
    let p = |a: f64| scattered_amplitude(panel, inc_dir, a, f_ghz).norm_sqr();
    let half = 0.5 * p(peak_deg);
    let edge = |dir: f64| -> Option<f64> {
        let step = 0.01 * dir;
        let mut a = peak_deg;
        loop {
            let b = a + step;
            if b.abs() >= 90.0 {
                return None;
            }
            if p(b) < half {
                let (mut lo, mut hi) = (a, b);
                for _ in 0..50 {
                    let mid = 0.5 * (lo + hi);
                    if p(mid) >= half {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                return Some(0.5 * (lo + hi));
            }
            a = b;
        }
    };
    Some(edge(1.0)? - edge(-1.0)?)
}

/// Ratio of scattered to intercepted power for a wave arriving from
/// `inc_angle_deg`, by trapezoidal integration over the visible range.
pub fn scattered_power_ratio(panel: &GroovePanel, inc_angle_deg: f64, f_ghz: f64) -> f64 {
    let (s, c) = inc_angle_deg.to_radians().sin_cos();
    let inc = Point2::new(-s, -c);
    let n = 36_000;
    let h = PI / n as f64;
    let mut acc = 0.0;
    for i in 0..=n {
        let th = -0.5 * PI + i as f64 * h;
        let w = if i == 0 || i == n { 0.5 } else { 1.0 };
        acc += w * scattered_amplitude(panel, inc, th.to_degrees(), f_ghz).norm_sqr() * th.cos();
    }
    wavenumber(f_ghz) * panel.size_x_m / (2.0 * PI * c) * acc * h
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const NORMAL: Point2 = Point2::new(0.0, -1.0);

    #[test]
    fn cell_phase_examples() {
        let bare = GrooveCell {
            pitch_mm: 2.5,
            width_mm: 2.0,
            depth_mm: 0.0,
        };
        assert_eq!(cell_phase(&bare, 60.0), 180.0);
        let quarter = GrooveCell {
            depth_mm: 0.25 * wavelength(60.0) * 1e3,
            ..bare
        };
        assert!(cell_phase(&quarter, 60.0).abs() < 1e-9);

        let deep = GrooveCell {
            depth_mm: 2.3,
            ..bare
        };
        let shallow = GrooveCell {
            depth_mm: 0.48,
            ..bare
        };
        // Oracle: 2 k0 (h1 - h2) in degrees.
        let k0 = 2.0 * PI * 60e9 / 299_792_458.0;
        assert!((k0 - 1257.5).abs() < 0.1);
        let step = (2.0 * k0 * (2.3 - 0.48) * 1e-3).to_degrees();
        assert!((step - 262.2).abs() < 0.1);
        let d = wrap_offset_deg(cell_phase(&shallow, 60.0), cell_phase(&deep, 60.0));
        assert!((d - wrap_offset_deg(step, 0.0)).abs() < 1e-9);
    }

    #[test]
    fn design_modes() {
        let t = design_panel(60.0, 80, PanelMode::Table2).unwrap();
        assert_eq!(t.len(), 80);
        assert!((t.size_x_m - 0.2).abs() < 1e-12);
        assert_eq!(t.cells[0].depth_mm, 2.3);
        assert_eq!(t.cells[1].depth_mm, 0.48);
        assert!(t.check().is_ok());

        let ideal = design_panel(60.0, 80, PanelMode::IdealTem).unwrap();
        assert!((ideal.cells[1].depth_mm - 1.249).abs() < 1e-3);
        for w in ideal.cells.windows(2) {
            let d = wrap_offset_deg(cell_phase(&w[0], 60.0), cell_phase(&w[1], 60.0)).abs();
            assert!((d - 180.0).abs() < 1e-9);
        }

        let two = design_panel(60.0, 2, PanelMode::IdealTem).unwrap();
        assert!((two.size_x_m - 5.0e-3).abs() < 1e-5);
        assert!(design_panel(60.0, 3, PanelMode::Table2).is_err());
        assert!(design_panel(60.0, 0, PanelMode::Table2).is_err());
    }

    #[test]
    fn uniform_panel_reflects_specularly() {
        let cell = GrooveCell {
            pitch_mm: 2.5,
            width_mm: 2.0,
            depth_mm: 0.0,
        };
        let panel = GroovePanel::uniform(80, cell, 60.0);
        let peaks = peak_directions(&panel, NORMAL, 60.0);
        assert!(peaks[0].abs() < 1e-9);
        let a = scattered_amplitude(&panel, NORMAL, 0.0, 60.0);
        assert!((a + 1.0).norm() < 1e-12);
    }

    #[test]
    fn designed_panel_has_symmetric_quasi_endfire_pair() {
        let t = design_panel(60.0, 80, PanelMode::Table2).unwrap();
        let (plus, minus) = off_specular_pair(&t, NORMAL, 60.0, 30.0).unwrap();
        assert!((plus + minus).abs() <= 0.5, "{plus} {minus}");
        assert!(plus >= 70.0 && plus < 90.0);
        for peak in [plus, minus] {
            let bw = half_power_beamwidth(&t, NORMAL, 60.0, peak).unwrap();
            assert!((5.0..=20.0).contains(&bw), "{bw}");
        }
    }

    #[test]
    fn ideal_array_factor_obeys_grating_equation() {
        let ideal = design_panel(60.0, 80, PanelMode::IdealTem).unwrap();
        let peaks = peak_directions_with(&ideal, NORMAL, 60.0, ElementFactor::Off);
        let th = peaks[0].abs();
        let target = wavelength(60.0) / (2.0 * ideal.cells[0].pitch_mm * 1e-3);
        assert!((target - 1.0).abs() < 1e-12);
        assert!(th > 87.0, "{th}");
        let grid = PATTERN_STEP_DEG.to_radians();
        assert!(
            (th.to_radians().sin() - target).abs() <= th.to_radians().cos() * grid + 1e-3 * grid
        );
    }

    #[test]
    fn unlit_side_is_dark() {
        let t = design_panel(60.0, 80, PanelMode::Table2).unwrap();
        assert_eq!(
            scattered_amplitude(&t, Point2::new(0.0, 1.0), 0.0, 60.0),
            Complex64::new(0.0, 0.0)
        );
    }

    #[test]
    fn passive_for_dense_and_fabricated_panels() {
        for panel in [
            design_panel(60.0, 80, PanelMode::Table2).unwrap(),
            design_panel(60.0, 40, PanelMode::IdealTem).unwrap(),
            GroovePanel::uniform(
                64,
                GrooveCell {
                    pitch_mm: 2.0,
                    width_mm: 1.5,
                    depth_mm: 0.7,
                },
                60.0,
            ),
        ] {
            for inc in [0.0, 20.0, 45.0, 70.0] {
                let r = scattered_power_ratio(&panel, inc, 60.0);
                assert!(r <= 1.01, "ratio {r} at {inc} deg");
            }
        }
    }

    fn unit_front_dir() -> impl Strategy<Value = Point2> {
        (-89.0..89.0f64).prop_map(|a| {
            let (s, c) = a.to_radians().sin_cos();
            Point2::new(s, -c)
        })
    }

    proptest! {
        #[test]
        fn reciprocity(a in unit_front_dir(), b_deg in -89.0..89.0f64, f in 55.0..65.0f64, table2 in any::<bool>()) {
            let mode = if table2 { PanelMode::Table2 } else { PanelMode::IdealTem };
            let panel = design_panel(60.0, 80, mode).unwrap();
            let fwd = scattered_amplitude(&panel, a, b_deg, f);
            // Reverse: arrive from B's direction, observe toward where A came from.
            let (sb, cb) = b_deg.to_radians().sin_cos();
            let back_inc = Point2::new(-sb, -cb);
            let a_obs = (-a.x).atan2(-a.y).to_degrees();
            let rev = scattered_amplitude(&panel, back_inc, a_obs, f);
            prop_assert!((fwd - rev).norm() < 1e-9);
        }

        #[test]
        fn mirror_symmetric_pattern(th in 0.0..89.9f64, f in 55.0..65.0f64) {
            // 2N cells alternating A,B,...,A,B is mirror symmetric up to a
            // relabeling; build an explicitly palindromic sequence.
            let mut panel = design_panel(60.0, 80, PanelMode::Table2).unwrap();
            let n = panel.cells.len();
            for i in n / 2..n {
                panel.cells[i] = panel.cells[n - 1 - i];
            }
            let p = scattered_amplitude(&panel, NORMAL, th, f);
            let m = scattered_amplitude(&panel, NORMAL, -th, f);
            prop_assert!((p - m).norm() < 1e-9);
        }

        #[test]
        fn phase_period_is_half_wavelength(h in 0.0..5.0f64, f in 30.0..90.0f64) {
            let c = GrooveCell { pitch_mm: 2.5, width_mm: 2.0, depth_mm: h };
            let c2 = GrooveCell { depth_mm: h + 0.5 * wavelength(f) * 1e3, ..c };
            prop_assert!(wrap_offset_deg(cell_phase(&c, f), cell_phase(&c2, f)).abs() < 1e-6);
        }
    }
}
