//! Planck spectrum as a probability density over frequency or wavelength.
//!
//! Internally everything lives in the dimensionless variables `u = h nu / (k T)`
//! and `l = k T lambda / (h c)`; the physical scale enters only when a
//! [`Density1D`] in Hz or m is built.

use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::constants::{BOLTZMANN, PLANCK, SPEED_OF_LIGHT};
use crate::dist::{Cdf1D, Density1D};
use crate::error::{domain, Error, Result};
use crate::numerics::{Interval, Quadrature, QuadratureConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Representation {
    Frequency,
    Wavelength,
}

impl Representation {
    pub fn unit(&self) -> &'static str {
        match self {
            Representation::Frequency => "Hz",
            Representation::Wavelength => "m",
        }
    }

    /// Physical size of one dimensionless unit at temperature `t`.
    pub fn scale(&self, t: f64) -> f64 {
        match self {
            Representation::Frequency => BOLTZMANN * t / PLANCK,
            Representation::Wavelength => PLANCK * SPEED_OF_LIGHT / (BOLTZMANN * t),
        }
    }

    fn shape(&self, v: f64) -> f64 {
        if !(v > 0.0) {
            return 0.0;
        }
        match self {
            Representation::Frequency => v.powi(3) / v.exp_m1(),
            Representation::Wavelength => {
                let u = 1.0 / v;
                // u^5 e^{-u} / (1 - e^{-u})
                (5.0 * u.ln() - u).exp() / -(-u).exp_m1()
            }
        }
    }

    fn typical(&self) -> f64 {
        match self {
            Representation::Frequency => 3.0,
            Representation::Wavelength => 0.3,
        }
    }

    fn moments(&self) -> &'static Moments {
        static FREQ: OnceLock<Moments> = OnceLock::new();
        static WAVE: OnceLock<Moments> = OnceLock::new();
        let cell = match self {
            Representation::Frequency => &FREQ,
            Representation::Wavelength => &WAVE,
        };
        cell.get_or_init(|| Moments::compute(*self))
    }
}

/// Normalization and mean of the dimensionless shape.
#[derive(Debug)]
struct Moments {
    norm: f64,
    mean: f64,
}

impl Moments {
    fn compute(rep: Representation) -> Self {
        let cfg = QuadratureConfig::with_tolerances(1e-13, 1e-15);
        let q = Quadrature::new(Interval::half_line(), &cfg).scale(rep.typical());
        // the shapes are smooth and positive; failure here is a programming error
        let norm = q
            .integrate(|v| rep.shape(v))
            .expect("Planck normalization integral")
            .value;
        let first = q
            .integrate(|v| v * rep.shape(v))
            .expect("Planck first moment integral")
            .value;
        Self {
            norm,
            mean: first / norm,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlackbodyParams {
    /// Kelvin.
    pub temperature: f64,
    pub representation: Representation,
}

impl BlackbodyParams {
    pub fn new(temperature: f64, representation: Representation) -> Result<Self> {
        if !(temperature > 0.0 && temperature.is_finite()) {
            return domain(format!("temperature must be > 0, got {temperature}"));
        }
        Ok(Self {
            temperature,
            representation,
        })
    }

    pub fn scale(&self) -> f64 {
        self.representation.scale(self.temperature)
    }
}

/// Normalized Planck density in Hz or m.
pub fn planck_pdf(params: BlackbodyParams) -> Density1D {
    let rep = params.representation;
    let s = params.scale();
    let norm = rep.moments().norm;
    Density1D::new(
        format!("planck {:?} T={}", rep, params.temperature),
        Interval::half_line(),
        move |x| rep.shape(x / s) / (norm * s),
    )
    .with_scale(rep.typical() * s)
}

/// The dimensionless density (`s = 1`), used for dominance checks.
fn dimensionless_cdf(rep: Representation) -> Cdf1D {
    let norm = rep.moments().norm;
    let d = Density1D::new("planck", Interval::half_line(), move |v| rep.shape(v) / norm)
        .with_scale(rep.typical());
    Cdf1D::from_density(&d, &QuadratureConfig::default())
}

/// Mean of the dimensionless density: `<u> = 360 zeta(5) / pi^4` for
/// frequency, `<l> = 30 zeta(3) / pi^4` for wavelength.
pub fn mean_constant(rep: Representation) -> f64 {
    rep.moments().mean
}

/// Normalization of the dimensionless shape (both equal `pi^4 / 15`).
pub fn normalization_constant(rep: Representation) -> f64 {
    rep.moments().norm
}

/// Physical mean: `C k T / h` or `C h c / (k T)`.
pub fn planck_mean(params: BlackbodyParams) -> f64 {
    mean_constant(params.representation) * params.scale()
}

/// `W_1` between two Planck densities in the same representation.
///
/// The two are members of one scale family, so their CDFs are ordered and
/// `W_1` is the mean difference; the ordering is confirmed on a grid first.
pub fn blackbody_w1(t1: f64, t2: f64, rep: Representation) -> Result<f64> {
    let p1 = BlackbodyParams::new(t1, rep)?;
    let p2 = BlackbodyParams::new(t2, rep)?;
    if t1 == t2 {
        return Ok(0.0);
    }
    check_scale_ordering(p1.scale(), p2.scale(), rep)?;
    Ok(mean_constant(rep) * (p1.scale() - p2.scale()).abs())
}

fn check_scale_ordering(s1: f64, s2: f64, rep: Representation) -> Result<()> {
    let cdf = dimensionless_cdf(rep);
    let base = rep.typical();
    let mut sign = 0.0;
    for j in 0..48 {
        let x = base * 1.2f64.powi(j - 24) * s1.max(s2);
        let d = cdf.eval(x / s1) - cdf.eval(x / s2);
        if d.abs() <= 1e-14 {
            continue;
        }
        if sign == 0.0 {
            sign = d.signum();
        } else if d.signum() != sign {
            return Err(Error::DominanceViolated {
                first_crossing: j as usize,
            });
        }
    }
    Ok(())
}

/// `pi^4 / 15`.
pub fn exact_normalization() -> f64 {
    PI.powi(4) / 15.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::{bhattacharyya_continuous, kl_continuous, wasserstein1_cdf};

    const ZETA3: f64 = 1.202_056_903_159_594_3;
    const ZETA5: f64 = 1.036_927_755_143_369_9;

    #[test]
    fn constants_match_zeta_values() {
        for rep in [Representation::Frequency, Representation::Wavelength] {
            assert!((normalization_constant(rep) / exact_normalization() - 1.0).abs() < 1e-12);
        }
        let c = mean_constant(Representation::Frequency);
        assert!((c - 360.0 * ZETA5 / PI.powi(4)).abs() < 1e-11);
        assert!((c - 3.83223).abs() < 1e-5);
        let cw = mean_constant(Representation::Wavelength);
        assert!((cw - 30.0 * ZETA3 / PI.powi(4)).abs() < 1e-11);
    }

    #[test]
    fn normalized_and_scale_family() {
        let cfg = QuadratureConfig::default();
        for rep in [Representation::Frequency, Representation::Wavelength] {
            let p = planck_pdf(BlackbodyParams::new(300.0, rep).unwrap());
            assert!((p.integrate(&cfg, |_, v| v).unwrap() - 1.0).abs() < 1e-9);
        }
        let a = planck_pdf(BlackbodyParams::new(300.0, Representation::Frequency).unwrap());
        let b = planck_pdf(BlackbodyParams::new(600.0, Representation::Frequency).unwrap());
        let s = Representation::Frequency.scale(300.0);
        for i in 1..60 {
            let nu = i as f64 * 0.2 * s;
            let lhs = b.pdf(2.0 * nu) * 2.0;
            assert!((lhs - a.pdf(nu)).abs() <= 1e-10 * a.pdf(nu), "nu={nu}");
        }
    }

    #[test]
    fn mean_frequency_matches_quadrature() {
        let p = BlackbodyParams::new(250.0, Representation::Frequency).unwrap();
        let m = planck_pdf(p).mean(&QuadratureConfig::default()).unwrap();
        assert!((m / planck_mean(p) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn w1_ratios() {
        let f = Representation::Frequency;
        assert_eq!(blackbody_w1(100.0, 100.0, f).unwrap(), 0.0);
        let r = blackbody_w1(100.0, 200.0, f).unwrap() / blackbody_w1(100.0, 300.0, f).unwrap();
        assert!((r - 0.5).abs() < 1e-6);
        let w = Representation::Wavelength;
        let r = blackbody_w1(100.0, 200.0, w).unwrap() / blackbody_w1(100.0, 400.0, w).unwrap();
        assert!((r - 2.0 / 3.0).abs() < 1e-6);
        assert!(blackbody_w1(0.0, 1.0, f).is_err());
    }

    #[test]
    fn shortcut_matches_area_between_cdfs() {
        let cfg = QuadratureConfig::default();
        for rep in [Representation::Frequency, Representation::Wavelength] {
            let a = Cdf1D::from_density(&planck_pdf(BlackbodyParams::new(200.0, rep).unwrap()), &cfg);
            let b = Cdf1D::from_density(&planck_pdf(BlackbodyParams::new(300.0, rep).unwrap()), &cfg);
            let numeric = wasserstein1_cdf(&a, &b).unwrap();
            let shortcut = blackbody_w1(200.0, 300.0, rep).unwrap();
            assert!((numeric / shortcut - 1.0).abs() < 1e-7, "{rep:?}: {numeric} vs {shortcut}");
        }
    }

    #[test]
    fn divergences_are_dimensionless() {
        // KL and B are invariant under the change of variables nu -> c / nu,
        // while W1 carries units
        let cfg = QuadratureConfig::default();
        let get = |rep| {
            let a = planck_pdf(BlackbodyParams::new(200.0, rep).unwrap());
            let b = planck_pdf(BlackbodyParams::new(300.0, rep).unwrap());
            (
                kl_continuous(&a, &b, &cfg).unwrap().value(),
                bhattacharyya_continuous(&a, &b, &cfg).unwrap().value(),
            )
        };
        let (kf, bf) = get(Representation::Frequency);
        let (kw, bw) = get(Representation::Wavelength);
        assert!((kf - kw).abs() < 1e-9 && kf > 0.0);
        assert!((bf - bw).abs() < 1e-9 && bf > 0.0);
    }
}
