//! Wideband channel synthesis, linear path-loss averaging and power delay
//! profiles.

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

pub const DEFAULT_PAD: usize = 4;
/// Bins below this power are reported at this level.
pub const PDP_FLOOR_DB: f64 = -300.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencyPlan {
    pub fc_ghz: f64,
    pub bandwidth_ghz: f64,
    pub n_points: usize,
    pub tx_power_dbm: f64,
}

impl FrequencyPlan {
    /// 60 GHz, 2 GHz span, 401 points, 0 dBm.
    pub const fn measurement() -> Self {
        Self {
            fc_ghz: 60.0,
            bandwidth_ghz: 2.0,
            n_points: 401,
            tx_power_dbm: 0.0,
        }
    }

    /// Same band sampled at 801 points.
    pub const fn dense() -> Self {
        Self {
            n_points: 801,
            ..Self::measurement()
        }
    }

    pub fn step_ghz(&self) -> f64 {
        self.bandwidth_ghz / (self.n_points - 1) as f64
    }

    pub fn frequency_ghz(&self, i: usize) -> f64 {
        self.fc_ghz - 0.5 * self.bandwidth_ghz + i as f64 * self.step_ghz()
    }

    pub fn frequencies_ghz(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.frequency_ghz(i)).collect()
    }

    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        if self.n_points < 2 {
            v.push(format!("n_points must be >= 2, got {}", self.n_points));
        }
        if !(self.fc_ghz > 0.0 && self.fc_ghz.is_finite()) {
            v.push(format!("fc must be positive, got {} GHz", self.fc_ghz));
        }
        if !(self.bandwidth_ghz > 0.0 && self.bandwidth_ghz.is_finite()) {
            v.push(format!(
                "bandwidth must be positive, got {} GHz",
                self.bandwidth_ghz
            ));
        } else if self.bandwidth_ghz >= 2.0 * self.fc_ghz {
            v.push("band extends below 0 Hz".into());
        }
        if !self.tx_power_dbm.is_finite() {
            v.push("tx power must be finite".into());
        }
        v
    }
}

/// A contribution to the channel: complex amplitude per frequency (excluding
/// the propagation delay phase) and a delay.
pub trait PathTerm {
    fn delay_ns(&self) -> f64;
    fn gain(&self, f_ghz: f64) -> Complex64;
}

/// Frequency-flat term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlatTerm {
    pub delay_ns: f64,
    pub gain: Complex64,
}

impl PathTerm for FlatTerm {
    fn delay_ns(&self) -> f64 {
        self.delay_ns
    }

    fn gain(&self, _f_ghz: f64) -> Complex64 {
        self.gain
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelResponse {
    pub plan: FrequencyPlan,
    pub samples: Vec<Complex64>,
}

/// `H(f_i) = sum_p gain_p(f_i) exp(-j 2 pi f_i tau_p)`.
pub fn synthesize<T: PathTerm>(terms: &[T], plan: &FrequencyPlan) -> ChannelResponse {
    let samples = plan
        .frequencies_ghz()
        .into_iter()
        .map(|f| {
            terms
                .iter()
                .map(|t| t.gain(f) * Complex64::from_polar(1.0, -2.0 * PI * f * t.delay_ns()))
                .sum()
        })
        .collect();
    ChannelResponse {
        plan: *plan,
        samples,
    }
}

/// Path loss in dB from the linear mean of `|H|^2`.
pub fn average_path_loss(resp: &ChannelResponse) -> f64 {
    let mean = resp.samples.iter().map(|h| h.norm_sqr()).sum::<f64>() / resp.samples.len() as f64;
    -10.0 * mean.log10()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Window {
    #[default]
    Rectangular,
    Hann,
}

impl Window {
    fn weights(self, n: usize) -> Vec<f64> {
        match self {
            Self::Rectangular => vec![1.0; n],
            Self::Hann => (0..n)
                .map(|i| 0.5 - 0.5 * (2.0 * PI * i as f64 / (n - 1) as f64).cos())
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Normalization {
    Absolute,
    #[default]
    RelativeToGlobalMax,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Pdp {
    pub delays_ns: Vec<f64>,
    pub power_db: Vec<f64>,
    pub normalization: Normalization,
}

impl Pdp {
    pub fn step_ns(&self) -> f64 {
        self.delays_ns[1] - self.delays_ns[0]
    }

    /// Strongest bin as `(delay_ns, power_db)`; the earliest wins ties.
    pub fn peak(&self) -> (f64, f64) {
        let mut best = 0;
        for (i, &p) in self.power_db.iter().enumerate() {
            if p > self.power_db[best] {
                best = i;
            }
        }
        (self.delays_ns[best], self.power_db[best])
    }

    pub fn max_db(&self) -> f64 {
        self.power_db
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    fn shift(&mut self, db: f64) {
        for p in &mut self.power_db {
            *p = (*p - db).max(PDP_FLOOR_DB);
        }
    }
}

/// Power delay profile with the default zero-padding factor.
pub fn pdp(resp: &ChannelResponse, window: Window, normalization: Normalization) -> Pdp {
    pdp_padded(resp, window, normalization, DEFAULT_PAD)
}

/// Inverse transform of the windowed response, zero-padded to `pad * N`
/// points. The delay grid step is `1 / (pad * N * df)`. Amplitudes are scaled
/// by the window sum so a single path of gain `g` peaks at `|g|^2`.
pub fn pdp_padded(
    resp: &ChannelResponse,
    window: Window,
    normalization: Normalization,
    pad: usize,
) -> Pdp {
    let n = resp.samples.len();
    let m = n * pad.max(1);
    let w = window.weights(n);
    let wsum: f64 = w.iter().sum();
    let mut buf: Vec<Complex64> = resp.samples.iter().zip(&w).map(|(h, wi)| h * *wi).collect();
    buf.resize(m, Complex64::new(0.0, 0.0));
    FftPlanner::new().plan_fft_inverse(m).process(&mut buf);

    let dt = 1.0 / (m as f64 * resp.plan.step_ghz());
    let delays_ns = (0..m).map(|i| i as f64 * dt).collect();
    let power_db = buf
        .iter()
        .map(|h| (10.0 * (h.norm_sqr() / (wsum * wsum)).log10()).max(PDP_FLOOR_DB))
        .collect();
    let mut out = Pdp {
        delays_ns,
        power_db,
        normalization: Normalization::Absolute,
    };
    if normalization == Normalization::RelativeToGlobalMax {
        normalize_relative(std::slice::from_mut(&mut out));
    }
    out
}

/// Subtract the maximum over the whole set so the strongest bin is 0 dB.
pub fn normalize_relative(set: &mut [Pdp]) {
    let max = set
        .iter()
        .map(Pdp::max_db)
        .fold(f64::NEG_INFINITY, f64::max);
    for p in set.iter_mut() {
        if p.normalization == Normalization::Absolute {
            p.shift(max);
            p.normalization = Normalization::RelativeToGlobalMax;
        }
    }
}
