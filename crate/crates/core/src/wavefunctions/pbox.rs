//! Particle in a unit box: `g_n(x) = 2 sin^2(n pi x)`, `G_n(x) = x - sin(2 n pi x) / (2 n pi)`.

use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::dist::{
    bhattacharyya_continuous, kl_continuous, wasserstein1_cdf_with, Cdf1D, Density1D,
    TransportConfig,
};
use crate::error::{domain, Error, Result};
use crate::numerics::{Interval, QuadratureConfig};

/// Agreement demanded between `1/(n pi^2)` and the numeric area between CDFs.
pub const CLASSICAL_W1_TOL: f64 = 1e-9;
/// Agreement demanded between the closed-form KL/B values and quadrature.
pub const CLASSICAL_DIVERGENCE_TOL: f64 = 1e-8;
/// Quantum numbers used to confirm that the KL/B values do not depend on `n`.
pub const N_INDEPENDENCE_PROBES: [u32; 3] = [1, 5, 20];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxState {
    pub n: u32,
}

impl BoxState {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 {
            return domain("box quantum number must be >= 1");
        }
        Ok(Self { n })
    }

    /// `n^2 pi^2 / 2` in units of `hbar^2 / (m L^2)`.
    pub fn energy(&self) -> f64 {
        let n = self.n as f64;
        0.5 * n * n * PI * PI
    }
}

pub fn pbox_pdf(s: BoxState) -> Density1D {
    let k = s.n as f64 * PI;
    let zeros = (1..s.n).map(|j| j as f64 / s.n as f64).collect();
    Density1D::new(format!("box g_{}", s.n), Interval::unit(), move |x| {
        2.0 * (k * x).sin().powi(2)
    })
    .with_log_pdf(move |x| LN_2 + 2.0 * (k * x).sin().abs().ln())
    .with_zeros(zeros)
    .with_scale(1.0)
}

/// Exact antiderivative of [`pbox_pdf`]; breakpoints sit where `G_n` crosses
/// the classical CDF.
pub fn pbox_cdf(s: BoxState) -> Cdf1D {
    let w = 2.0 * s.n as f64 * PI;
    let bps = (1..2 * s.n).map(|j| j as f64 / (2 * s.n) as f64).collect();
    Cdf1D::new(format!("box G_{}", s.n), Interval::unit(), move |x| x - (w * x).sin() / w)
        .with_breakpoints(bps)
        .with_scale(1.0)
}

/// Uniform density on `[0, 1]`, the classical limit.
pub fn classical_pdf() -> Density1D {
    Density1D::new("classical", Interval::unit(), |_| 1.0)
        .with_log_pdf(|_| 0.0)
        .with_scale(1.0)
}

pub fn classical_cdf() -> Cdf1D {
    Cdf1D::new("classical", Interval::unit(), |x| x).with_scale(1.0)
}

/// `W_1(F_cl, G_n) = 1/(n pi^2)`, checked against the numeric area between
/// the CDFs.
pub fn pbox_w1_classical(n: u32) -> Result<f64> {
    let s = BoxState::new(n)?;
    let exact = 1.0 / (n as f64 * PI * PI);
    let numeric = wasserstein1_cdf_with(&classical_cdf(), &pbox_cdf(s), &box_transport(n))?;
    check("W1(classical, box)", numeric, exact, CLASSICAL_W1_TOL)?;
    Ok(exact)
}

/// `W_1(G_m, G_n)` by exact integration of `|G_m - G_n|` between its roots.
///
/// `h = G_m - G_n` has `h' = cos(2 n pi x) - cos(2 m pi x)`, whose zeros at
/// `k/(n+m)` and `k/|n-m|` cut `[0, 1]` into pieces on which `h` is monotone
/// and so has at most one root. Each sign-definite piece then contributes
/// `|A(b) - A(a)|` with `A = cos(2 m pi x)/(2 m pi)^2 - cos(2 n pi x)/(2 n pi)^2`.
pub fn pbox_pair_w1(m: u32, n: u32) -> Result<f64> {
    BoxState::new(m)?;
    BoxState::new(n)?;
    Ok(exact_w1(Some(m), n))
}

/// The same distance through the generic CDF-area routine.
pub fn pbox_pair_w1_numeric(m: u32, n: u32) -> Result<f64> {
    let a = pbox_cdf(BoxState::new(m)?);
    let b = pbox_cdf(BoxState::new(n)?);
    wasserstein1_cdf_with(&a, &b, &box_transport(m.max(n)))
}

/// Exact `W_1(F_cl, G_n)`, through the same piecewise route as pairs.
pub fn pbox_w1_classical_exact(n: u32) -> Result<f64> {
    BoxState::new(n)?;
    Ok(exact_w1(None, n))
}

fn box_transport(n: u32) -> TransportConfig {
    TransportConfig::default().with_sign_grid(4096.max(16 * n as usize))
}

/// `m = None` stands for the classical CDF `F(x) = x`.
fn exact_w1(m: Option<u32>, n: u32) -> f64 {
    if m == Some(n) {
        return 0.0;
    }
    let wn = 2.0 * PI * n as f64;
    let wm = m.map(|m| 2.0 * PI * m as f64);
    let h = |x: f64| {
        let gm = match wm {
            Some(w) => x - (w * x).sin() / w,
            None => x,
        };
        gm - (x - (wn * x).sin() / wn)
    };
    let anti = |x: f64| {
        let am = match wm {
            Some(w) => (w * x).cos() / (w * w),
            None => 0.0,
        };
        am - (wn * x).cos() / (wn * wn)
    };

    let mut pts = vec![0.0, 1.0];
    match m {
        Some(m) => {
            let sum = m + n;
            let diff = m.abs_diff(n);
            pts.extend((1..sum).map(|k| k as f64 / sum as f64));
            pts.extend((1..diff).map(|k| k as f64 / diff as f64));
        }
        None => {
            // zeros of cos(2 n pi x)
            pts.extend((0..2 * n).map(|k| (2 * k + 1) as f64 / (4 * n) as f64));
        }
    }
    pts.sort_by(|a, b| a.total_cmp(b));
    pts.dedup_by(|a, b| (*a - *b).abs() < 1e-15);

    let mut cuts = Vec::with_capacity(2 * pts.len());
    for w in pts.windows(2) {
        let (a, b) = (w[0], w[1]);
        cuts.push(a);
        let (ha, hb) = (h(a), h(b));
        if ha * hb < 0.0 {
            cuts.push(root(&h, a, b, ha));
        }
    }
    cuts.push(1.0);

    let mut terms: Vec<f64> = cuts.windows(2).map(|w| (anti(w[1]) - anti(w[0])).abs()).collect();
    terms.sort_by(|a, b| a.total_cmp(b));
    terms.iter().sum()
}

fn root<H: Fn(f64) -> f64>(h: &H, mut a: f64, mut b: f64, mut ha: f64) -> f64 {
    while b - a > 4.0 * f64::EPSILON {
        let mid = 0.5 * (a + b);
        let hm = h(mid);
        if hm == 0.0 {
            return mid;
        }
        if hm * ha > 0.0 {
            a = mid;
            ha = hm;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KlDirection {
    /// `D_KL(f_cl || g_n) = ln 2`
    ClassicalToState,
    /// `D_KL(g_n || f_cl) = 1 - ln 2`
    StateToClassical,
}

/// Closed-form KL divergence between the uniform density and any `g_n`,
/// confirmed by quadrature for each of [`N_INDEPENDENCE_PROBES`].
pub fn pbox_kl_classical(direction: KlDirection) -> Result<f64> {
    let exact = match direction {
        KlDirection::ClassicalToState => LN_2,
        KlDirection::StateToClassical => 1.0 - LN_2,
    };
    let cfg = QuadratureConfig::default();
    let cl = classical_pdf();
    for n in N_INDEPENDENCE_PROBES {
        let g = pbox_pdf(BoxState::new(n)?);
        let d = match direction {
            KlDirection::ClassicalToState => kl_continuous(&cl, &g, &cfg)?,
            KlDirection::StateToClassical => kl_continuous(&g, &cl, &cfg)?,
        };
        check(&format!("KL box n={n}"), d.value(), exact, CLASSICAL_DIVERGENCE_TOL)?;
    }
    Ok(exact)
}

/// `D_B(f_cl, g_n) = ln(pi / sqrt 8)`, confirmed like [`pbox_kl_classical`].
pub fn pbox_bhatt_classical() -> Result<f64> {
    let exact = (PI / 8f64.sqrt()).ln();
    let cfg = QuadratureConfig::default();
    let cl = classical_pdf();
    for n in N_INDEPENDENCE_PROBES {
        let g = pbox_pdf(BoxState::new(n)?);
        let d = bhattacharyya_continuous(&cl, &g, &cfg)?;
        check(&format!("Bhattacharyya box n={n}"), d.value(), exact, CLASSICAL_DIVERGENCE_TOL)?;
    }
    Ok(exact)
}

fn check(what: &str, numeric: f64, exact: f64, tol: f64) -> Result<()> {
    let deviation = (numeric - exact).abs();
    if deviation > tol || deviation.is_nan() {
        return Err(Error::ToleranceExceeded {
            what: what.to_string(),
            deviation,
            tol,
        });
    }
    Ok(())
}
