//! Oscillator x-quadrature densities `g_n(x) = psi_n(x)^2` of the Fock states.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::dist::{
    bhattacharyya_continuous, kl_continuous, wasserstein1_cdf_with, Cdf1D, Density1D,
    TransportConfig,
};
use crate::error::{Error, Result};
use crate::numerics::special::{erfc, ln_factorial, ln_hermite_norm};
use crate::numerics::{
    hermite_cdf, hermite_psi, hermite_zeros, ln_abs_hermite_psi, Interval, Quadrature,
    QuadratureConfig,
};

/// Agreement demanded between the specialized KL route and generic quadrature.
pub const KL_ROUTE_TOL: f64 = 1e-6;
/// Agreement demanded between the specialized Bhattacharyya route and generic quadrature.
pub const BHATT_ROUTE_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OscState {
    pub n: u64,
}

impl OscState {
    pub fn new(n: u64) -> Self {
        Self { n }
    }

    /// Classical turning point `sqrt(2n + 1)`.
    pub fn turning_point(&self) -> f64 {
        (2.0 * self.n as f64 + 1.0).sqrt()
    }
}

pub fn osc_pdf(s: OscState) -> Density1D {
    let n = s.n;
    Density1D::new(format!("oscillator g_{n}"), Interval::real_line(), move |x| {
        hermite_psi(n, x).powi(2)
    })
    .with_log_pdf(move |x| 2.0 * ln_abs_hermite_psi(n, x))
    .with_zeros(hermite_zeros(n))
    .with_scale(s.turning_point())
}

/// Exact CDF from the Hermite ladder; breakpoints at the zeros of `psi_n`,
/// where `G_n` has its flat steps.
pub fn osc_cdf(s: OscState) -> Cdf1D {
    let n = s.n;
    Cdf1D::new(format!("oscillator G_{n}"), Interval::real_line(), move |x| hermite_cdf(n, x))
        .with_breakpoints(hermite_zeros(n))
        .with_scale(s.turning_point())
}

/// Half-width of the integration window used by [`osc_w1_vacuum`].
pub fn osc_window(n: u64) -> f64 {
    OscState::new(n).turning_point() + 10.0
}

/// `W_1(G_0, G_n)` over `[-L, L]`, `L = sqrt(2n + 1) + 10`.
pub fn osc_w1_vacuum(n: u64) -> Result<f64> {
    Ok(osc_w1_vacuum_with_tail(n)?.0)
}

/// [`osc_w1_vacuum`] together with a bound on the area outside the window.
///
/// Past the window both CDFs are within their tail masses of 0 (or 1), so the
/// neglected area is at most `2 int_L^inf (tail_0 + tail_n)`, bounded here by
/// the Gaussian-envelope estimate `psi_n^2 <= C e^{-(x - t)^2}` beyond the
/// turning point `t`.
pub fn osc_w1_vacuum_with_tail(n: u64) -> Result<(f64, f64)> {
    if n == 0 {
        return Ok((0.0, 0.0));
    }
    let l = osc_window(n);
    let cfg = TransportConfig::default()
        .with_window(Interval::new(-l, l)?)
        .with_sign_grid(4096.max(32 * n as usize));
    let w = wasserstein1_cdf_with(&osc_cdf(OscState::new(0)), &osc_cdf(OscState::new(n)), &cfg)?;
    // int_L^inf (1 - G(x)) dx <= int_L^inf erfc(x - t) / 2 dx < erfc(L - t) for the
    // excited state; the vacuum term is smaller
    let t = OscState::new(n).turning_point();
    let tail = 4.0 * erfc(l - t);
    Ok((w, tail))
}

/// Values of a divergence from two independent routes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualRoute {
    pub specialized: f64,
    pub generic: f64,
}

impl DualRoute {
    pub fn deviation(&self) -> f64 {
        (self.specialized - self.generic).abs()
    }
}

/// `D_KL(g_0 || g_n) = ln(2^n n!) - (2/sqrt(pi)) int_0^inf e^{-x^2} ln H_n(x)^2 dx`.
///
/// `ln H_n^2 = 2 ln|psi_n| + x^2 + ln(2^n n! sqrt(pi))`; the constant and the
/// `x^2` parts integrate in closed form against the Gaussian, leaving only
/// `2 ln|psi_n|`, whose log singularities at the positive zeros are split out.
pub fn osc_kl_vacuum(n: u64) -> Result<f64> {
    if n == 0 {
        return Ok(0.0);
    }
    let cfg = QuadratureConfig::default();
    let mut zeros = hermite_zeros(n);
    zeros.retain(|&z| z > 0.0);
    let est = Quadrature::new(Interval::half_line(), &cfg)
        .breakpoints(&zeros)
        .scale(1.0)
        .singular_ends(true)
        .integrate(|x| {
            let l = ln_abs_hermite_psi(n, x);
            if l == f64::NEG_INFINITY {
                return 0.0;
            }
            (-x * x).exp() * 2.0 * l
        })?;
    let ln_norm = ln_hermite_norm(n);
    let ln_2n_fact = n as f64 * std::f64::consts::LN_2 + ln_factorial(n);
    // (2/sqrt(pi)) int_0^inf e^{-x^2} (x^2 + ln_norm) = 1/2 + ln_norm
    let log_h2_mean = 2.0 / PI.sqrt() * est.value + 0.5 + ln_norm;
    Ok(ln_2n_fact - log_h2_mean)
}

/// [`osc_kl_vacuum`] next to the generic `int g_0 ln(g_0/g_n)`.
pub fn osc_kl_vacuum_routes(n: u64) -> Result<DualRoute> {
    let specialized = osc_kl_vacuum(n)?;
    let generic = kl_continuous(
        &osc_pdf(OscState::new(0)),
        &osc_pdf(OscState::new(n)),
        &QuadratureConfig::default(),
    )?;
    let route = DualRoute {
        specialized,
        generic: generic.value(),
    };
    agree("oscillator KL", route, KL_ROUTE_TOL)?;
    Ok(route)
}

/// `D_B(g_0, g_n) = -ln[(2 / sqrt(2^n n! pi)) int_0^inf e^{-x^2} |H_n(x)| dx]`.
///
/// With `e^{-x^2} |H_n| = e^{-x^2/2} |psi_n| sqrt(2^n n! sqrt(pi))` the
/// prefactors combine in log space to `ln 2 - ln(pi)/4`.
pub fn osc_bhatt_vacuum(n: u64) -> Result<f64> {
    if n == 0 {
        return Ok(0.0);
    }
    let cfg = QuadratureConfig::default();
    let mut zeros = hermite_zeros(n);
    zeros.retain(|&z| z > 0.0);
    let est = Quadrature::new(Interval::half_line(), &cfg)
        .breakpoints(&zeros)
        .scale(1.0)
        .integrate(|x| (-0.5 * x * x).exp() * hermite_psi(n, x).abs())?;
    let ln_prefactor = std::f64::consts::LN_2 - 0.5 * (ln_hermite_norm(n) - 0.5 * PI.ln() + PI.ln());
    let ln_integral = 0.5 * ln_hermite_norm(n) + est.value.ln();
    Ok((-(ln_prefactor + ln_integral)).max(0.0))
}

/// [`osc_bhatt_vacuum`] next to the generic `-ln int sqrt(g_0 g_n)`.
pub fn osc_bhatt_vacuum_routes(n: u64) -> Result<DualRoute> {
    let specialized = osc_bhatt_vacuum(n)?;
    let generic = bhattacharyya_continuous(
        &osc_pdf(OscState::new(0)),
        &osc_pdf(OscState::new(n)),
        &QuadratureConfig::default(),
    )?;
    let route = DualRoute {
        specialized,
        generic: generic.value(),
    };
    agree("oscillator Bhattacharyya", route, BHATT_ROUTE_TOL)?;
    Ok(route)
}

fn agree(what: &str, r: DualRoute, tol: f64) -> Result<()> {
    if !(r.deviation() <= tol) {
        return Err(Error::Consistency {
            what: what.to_string(),
            left: r.specialized,
            right: r.generic,
            tol,
        });
    }
    Ok(())
}
