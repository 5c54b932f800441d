//! Reflection coefficients for walls, metal panels and the whiteboard.
//!
//! Permittivity uses `eps_r = eps_re - j eps_im` with `eps_im >= 0` for a
//! lossy medium under the `exp(+j 2 pi f t)` convention. Conductors reflect
//! with phase 180 degrees. The TM coefficient is signed so that TE and TM agree
//! at normal incidence.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::units::db_to_amplitude;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Polarization {
    #[serde(rename = "te")]
    TE,
    #[serde(rename = "tm")]
    TM,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaterialModel {
    PerfectConductor,
    FixedLoss,
    Dielectric,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Material {
    pub name: String,
    pub model: MaterialModel,
    /// Used by `fixed_loss` only.
    #[serde(default)]
    pub reflection_loss_db: f64,
    /// Used by `dielectric` only.
    #[serde(default = "one")]
    pub eps_re: f64,
    #[serde(default)]
    pub eps_im: f64,
}

fn one() -> f64 {
    1.0
}

pub const PLASTERBOARD_EPS: (f64, f64) = (2.73, 0.02);
pub const WHITEBOARD_LOSS_DB: f64 = 0.55;

impl Material {
    pub fn perfect_conductor(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            model: MaterialModel::PerfectConductor,
            reflection_loss_db: 0.0,
            eps_re: 1.0,
            eps_im: 0.0,
        }
    }

    pub fn fixed_loss(name: impl Into<String>, loss_db: f64) -> Self {
        Self {
            model: MaterialModel::FixedLoss,
            reflection_loss_db: loss_db,
            ..Self::perfect_conductor(name)
        }
    }

    pub fn dielectric(name: impl Into<String>, eps_re: f64, eps_im: f64) -> Self {
        Self {
            model: MaterialModel::Dielectric,
            eps_re,
            eps_im,
            ..Self::perfect_conductor(name)
        }
    }

    pub fn plasterboard() -> Self {
        Self::dielectric("plasterboard", PLASTERBOARD_EPS.0, PLASTERBOARD_EPS.1)
    }

    pub fn whiteboard() -> Self {
        Self::fixed_loss("whiteboard", WHITEBOARD_LOSS_DB)
    }

    pub fn eps_r(&self) -> Complex64 {
        Complex64::new(self.eps_re, -self.eps_im)
    }

    pub fn check(&self) -> std::result::Result<(), String> {
        match self.model {
            MaterialModel::PerfectConductor => Ok(()),
            MaterialModel::FixedLoss => {
                if self.reflection_loss_db.is_finite() && self.reflection_loss_db >= 0.0 {
                    Ok(())
                } else {
                    Err(format!(
                        "reflection loss must be >= 0 dB, got {}",
                        self.reflection_loss_db
                    ))
                }
            }
            MaterialModel::Dielectric => {
                if !(self.eps_re.is_finite() && self.eps_re >= 1.0) {
                    Err(format!("Re(eps_r) must be >= 1, got {}", self.eps_re))
                } else if !(self.eps_im.is_finite() && self.eps_im >= 0.0) {
                    Err(format!(
                        "loss term eps_im must be >= 0, got {}",
                        self.eps_im
                    ))
                } else {
                    Ok(())
                }
            }
        }
    }
}

/// Complex reflection coefficient at `incidence_deg` from the surface normal.
pub fn reflection_coefficient(
    m: &Material,
    incidence_deg: f64,
    pol: Polarization,
    _f_ghz: f64,
) -> Result<Complex64> {
    if !(0.0..90.0).contains(&incidence_deg) {
        return Err(domain(format!(
            "incidence angle must lie in [0, 90) degrees, got {incidence_deg}"
        )));
    }
    Ok(match m.model {
        MaterialModel::PerfectConductor => Complex64::new(-1.0, 0.0),
        MaterialModel::FixedLoss => Complex64::new(-db_to_amplitude(-m.reflection_loss_db), 0.0),
        MaterialModel::Dielectric => {
            let th = incidence_deg.to_radians();
            let (s, c) = th.sin_cos();
            let eps = m.eps_r();
            let root = (eps - s * s).sqrt();
            match pol {
                Polarization::TE => (c - root) / (c + root),
                Polarization::TM => (root - eps * c) / (eps * c + root),
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn conductor_and_fixed_loss() {
        let pec = Material::perfect_conductor("al");
        for th in [0.0, 30.0, 89.0] {
            let g = reflection_coefficient(&pec, th, Polarization::TE, 60.0).unwrap();
            assert!((g.norm() - 1.0).abs() < 1e-15);
            assert!((g.arg().abs() - std::f64::consts::PI).abs() < 1e-15);
        }
        let g =
            reflection_coefficient(&Material::whiteboard(), 20.0, Polarization::TM, 60.0).unwrap();
        assert!((g.norm() - 0.9387).abs() < 1e-4);
    }

    #[test]
    fn plasterboard_normal_incidence_oracle() {
        // sqrt(eps) in polar form, independent of the complex sqrt in the model.
        let (re, im) = (2.73f64, -0.02f64);
        let r = re.hypot(im).sqrt();
        let phi = im.atan2(re) / 2.0;
        let (sr, si) = (r * phi.cos(), r * phi.sin());
        // (1 - s)/(1 + s) for complex s.
        let (nr, ni) = (1.0 - sr, -si);
        let (dr, di) = (1.0 + sr, si);
        let den = dr * dr + di * di;
        let oracle = Complex64::new((nr * dr + ni * di) / den, (ni * dr - nr * di) / den);
        assert!((oracle.re + 0.246).abs() < 1e-3);

        let m = Material::plasterboard();
        for pol in [Polarization::TE, Polarization::TM] {
            let g = reflection_coefficient(&m, 0.0, pol, 60.0).unwrap();
            assert!((g - oracle).norm() < 1e-12, "{pol:?}: {g}");
        }
        let loss = -20.0 * oracle.norm().log10();
        assert!((loss - 12.2).abs() < 0.05);
    }

    #[test]
    fn grazing_rejected() {
        assert!(
            reflection_coefficient(&Material::plasterboard(), 90.0, Polarization::TE, 60.0)
                .is_err()
        );
        assert!(
            reflection_coefficient(&Material::plasterboard(), -1.0, Polarization::TE, 60.0)
                .is_err()
        );
    }

    proptest! {
        #[test]
        fn passive_materials_never_amplify(eps_re in 1.0..40.0f64, eps_im in 0.0..40.0f64,
                                           loss in 0.0..60.0f64, th in 0.0..89.999f64, f in 1.0..300.0f64) {
            for m in [Material::dielectric("d", eps_re, eps_im), Material::fixed_loss("f", loss), Material::perfect_conductor("p")] {
                for pol in [Polarization::TE, Polarization::TM] {
                    let g = reflection_coefficient(&m, th, pol, f).unwrap();
                    prop_assert!(g.norm() <= 1.0 + 1e-12);
                }
            }
        }

        #[test]
        fn dielectric_tends_to_total_reflection_at_grazing(eps_re in 1.0..20.0f64, eps_im in 0.0..5.0f64) {
            let m = Material::dielectric("d", eps_re, eps_im);
            for pol in [Polarization::TE, Polarization::TM] {
                let g = reflection_coefficient(&m, 89.9999, pol, 60.0).unwrap();
                prop_assert!(g.norm() > 0.99);
            }
        }
    }
}
