//! Photon-number distributions of single-mode states of light.
//!
//! Every generator truncates adaptively: it keeps the smallest prefix whose
//! certified tail mass and tail mean both fall below [`TAIL_TARGET`], and
//! gives up with [`Error::Truncation`] past [`MAX_TRUNCATION`] terms.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::constants::{BOLTZMANN, PLANCK};
use crate::dist::DiscretePmf;
use crate::error::{domain, Error, Result};
use crate::numerics::special::{bessel_i0e, ln_factorial};
use crate::numerics::{Interval, Quadrature, QuadratureConfig};

/// Certified bound on the discarded tail mass (and tail mean).
pub const TAIL_TARGET: f64 = 1e-15;
/// Largest truncation length a generator may use.
pub const MAX_TRUNCATION: usize = 1 << 16;
/// Elementwise agreement demanded between the two Glauber-Lachs routes.
pub const GLAUBER_LACHS_ROUTE_TOL: f64 = 1e-9;

fn check_nonneg(what: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        domain(format!("{what} must be finite and >= 0, got {v}"))
    }
}

/// Coherent state `|alpha>`; only `|alpha|^2` matters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoherentParams {
    pub mean_photons: f64,
}

impl CoherentParams {
    pub fn new(mean_photons: f64) -> Result<Self> {
        Ok(Self {
            mean_photons: check_nonneg("coherent mean photon number", mean_photons)?,
        })
    }
}

/// Squeezed vacuum with squeeze magnitude `r = |zeta|`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SqueezeParams {
    pub r: f64,
}

impl SqueezeParams {
    pub fn new(r: f64) -> Result<Self> {
        Ok(Self {
            r: check_nonneg("squeeze parameter", r)?,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThermalParams {
    pub mean_photons: f64,
}

impl ThermalParams {
    pub fn new(mean_photons: f64) -> Result<Self> {
        Ok(Self {
            mean_photons: check_nonneg("thermal mean photon number", mean_photons)?,
        })
    }

    /// Occupation of a mode of frequency `nu` (Hz) at temperature `t` (K).
    pub fn from_temperature(nu: f64, t: f64) -> Result<Self> {
        Self::new(thermal_mean_from_temperature(nu, t)?)
    }
}

/// Displaced thermal state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GlauberLachsParams {
    pub coherent_mean: f64,
    pub thermal_mean: f64,
}

impl GlauberLachsParams {
    pub fn new(coherent_mean: f64, thermal_mean: f64) -> Result<Self> {
        Ok(Self {
            coherent_mean: check_nonneg("coherent mean photon number", coherent_mean)?,
            thermal_mean: check_nonneg("thermal mean photon number", thermal_mean)?,
        })
    }
}

pub fn fock_pmf(j: usize) -> DiscretePmf {
    DiscretePmf::delta(j)
}

/// Poisson PMF with mean `|alpha|^2`.
pub fn coherent_pmf(params: CoherentParams) -> Result<DiscretePmf> {
    coherent_pmf_len(params, 0)
}

fn coherent_pmf_len(params: CoherentParams, min_len: usize) -> Result<DiscretePmf> {
    let lam = params.mean_photons;
    if lam == 0.0 {
        return Ok(DiscretePmf::delta(0));
    }
    // Chernoff with z = N / lam:
    //   P(X >= N)         <= exp(lam (z - 1) - N ln z)
    //   E[X; X >= N]      <= lam P(X >= N - 1)
    let chernoff = |n: f64| {
        if n <= lam {
            1.0
        } else {
            let z = n / lam;
            (lam * (z - 1.0) - n * z.ln()).exp()
        }
    };
    let bounds = |len: usize| {
        let tail = chernoff(len as f64);
        (tail, (lam * chernoff(len as f64 - 1.0)).min(lam))
    };
    let mut len = (lam.ceil() as usize).max(1);
    loop {
        let (tail, tail_mean) = bounds(len);
        if tail <= TAIL_TARGET && tail_mean <= TAIL_TARGET {
            break;
        }
        len += 1;
        if len > MAX_TRUNCATION {
            return Err(Error::Truncation {
                cap: MAX_TRUNCATION,
                bound: tail,
            });
        }
    }
    let len = len.max(min_len);
    let (tail, tail_mean) = bounds(len);
    let ln_lam = lam.ln();
    let probs = (0..len)
        .map(|n| (n as f64 * ln_lam - lam - ln_factorial(n as u64)).exp())
        .collect();
    DiscretePmf::with_tail(probs, tail, tail_mean)
}

/// Squeezed-vacuum PMF: all mass on even photon numbers,
/// `p(2m) = (2m)! / (4^m m!^2) tanh^{2m} r / cosh r`.
pub fn squeezed_vacuum_pmf(params: SqueezeParams) -> Result<DiscretePmf> {
    squeezed_vacuum_pmf_len(params, 0)
}

fn squeezed_vacuum_pmf_len(params: SqueezeParams, min_len: usize) -> Result<DiscretePmf> {
    let r = params.r;
    if r == 0.0 {
        return Ok(DiscretePmf::delta(0));
    }
    let t2 = r.tanh().powi(2);
    let ln_t2 = t2.ln();
    let ln_sech = -r.cosh().ln();
    let ln_pair = |m: u64| {
        ln_factorial(2 * m) - 2.0 * ln_factorial(m) - (2 * m) as f64 * std::f64::consts::LN_2
            + m as f64 * ln_t2
            + ln_sech
    };
    // p(2m + 2) / p(2m) = (2m + 1) / (2m + 2) * t^2 < t^2, so from pair M on
    // the tail is dominated by a geometric series in t^2
    let one_minus = 1.0 / r.cosh().powi(2);
    let bounds = |m: u64| {
        let head = ln_pair(m).exp();
        let tail = head / one_minus;
        (tail, head * (2.0 * m as f64 / one_minus + 2.0 * t2 / (one_minus * one_minus)))
    };
    let mut m = 1u64;
    loop {
        let (tail, tail_mean) = bounds(m);
        if tail <= TAIL_TARGET && tail_mean <= TAIL_TARGET {
            break;
        }
        m += 1;
        if 2 * m as usize > MAX_TRUNCATION {
            return Err(Error::Truncation {
                cap: MAX_TRUNCATION,
                bound: tail,
            });
        }
    }
    let m = m.max(min_len.div_ceil(2) as u64);
    let (tail, tail_mean) = bounds(m);
    let len = 2 * m as usize;
    let mut probs = vec![0.0; len];
    for k in 0..m {
        probs[2 * k as usize] = ln_pair(k).exp();
    }
    DiscretePmf::with_tail(probs, tail, tail_mean)
}

/// Geometric PMF `p(n) = nbar^n / (nbar + 1)^{n + 1}`.
pub fn thermal_pmf(params: ThermalParams) -> Result<DiscretePmf> {
    thermal_pmf_len(params, 0)
}

fn thermal_pmf_len(params: ThermalParams, min_len: usize) -> Result<DiscretePmf> {
    let nbar = params.mean_photons;
    if nbar == 0.0 {
        return Ok(DiscretePmf::delta(0));
    }
    let ln_q = -(1.0 / nbar).ln_1p();
    let ln_p0 = -nbar.ln_1p();
    // exact: P(X >= N) = q^N and E[X; X >= N] = q^N (N + nbar)
    let bounds = |len: usize| {
        let tail = (len as f64 * ln_q).exp();
        (tail, tail * (len as f64 + nbar))
    };
    let mut len = 1usize;
    loop {
        let (tail, tail_mean) = bounds(len);
        if tail <= TAIL_TARGET && tail_mean <= TAIL_TARGET {
            break;
        }
        len = if tail > 1e-3 { len * 2 } else { len + 1 };
        if len > MAX_TRUNCATION {
            return Err(Error::Truncation {
                cap: MAX_TRUNCATION,
                bound: tail,
            });
        }
    }
    let len = len.max(min_len);
    let (tail, tail_mean) = bounds(len);
    let probs = (0..len).map(|n| (ln_p0 + n as f64 * ln_q).exp()).collect();
    DiscretePmf::with_tail(probs, tail, tail_mean)
}

/// Glauber-Lachs PMF from the Laguerre closed form, cross-checked term by
/// term against the coherent-state mixture integral.
pub fn glauber_lachs_pmf(params: GlauberLachsParams) -> Result<DiscretePmf> {
    glauber_lachs_pmf_len(params, 0)
}

fn glauber_lachs_pmf_len(params: GlauberLachsParams, min_len: usize) -> Result<DiscretePmf> {
    let closed = glauber_lachs_closed_len(params, min_len)?;
    let mixture = glauber_lachs_mixture(params, closed.len())?;
    for (n, (a, b)) in closed.probs().iter().zip(&mixture).enumerate() {
        if (a - b).abs() > GLAUBER_LACHS_ROUTE_TOL {
            return Err(Error::Consistency {
                what: format!("Glauber-Lachs p({n}): closed form vs mixture integral"),
                left: *a,
                right: *b,
                tol: GLAUBER_LACHS_ROUTE_TOL,
            });
        }
    }
    Ok(closed)
}

/// `p(n) = nbar^n / (1 + nbar)^{n+1} exp(-a / (1 + nbar)) L_n(-a / (nbar (1 + nbar)))`
/// with `a = |alpha|^2`, evaluated in log space.
pub fn glauber_lachs_pmf_closed(params: GlauberLachsParams) -> Result<DiscretePmf> {
    glauber_lachs_closed_len(params, 0)
}

fn glauber_lachs_closed_len(params: GlauberLachsParams, min_len: usize) -> Result<DiscretePmf> {
    let a = params.coherent_mean;
    let nbar = params.thermal_mean;
    if nbar == 0.0 {
        return coherent_pmf_len(CoherentParams::new(a)?, min_len);
    }
    if a == 0.0 {
        return thermal_pmf_len(ThermalParams::new(nbar)?, min_len);
    }
    let (tail, tail_mean, len) = glauber_lachs_truncation(a, nbar, min_len)?;
    let c = a / (nbar * (1.0 + nbar));
    let ln_laguerre = ln_laguerre_negative(len, c);
    let ln_q = -(1.0 / nbar).ln_1p();
    let ln_pre = -nbar.ln_1p() - a / (1.0 + nbar);
    let probs = ln_laguerre
        .iter()
        .enumerate()
        .map(|(n, l)| (ln_pre + n as f64 * ln_q + l).exp())
        .collect();
    DiscretePmf::with_tail(probs, tail, tail_mean)
}

/// First `len` terms of the Glauber-Lachs PMF by quadrature of the radial
/// coherent-state mixture
/// `p(n) = (2/nbar) int_0^inf rho exp(-(rho - |alpha|)^2/nbar - rho^2) rho^{2n}/n! I0e(2|alpha| rho/nbar) d rho`.
pub fn glauber_lachs_mixture(params: GlauberLachsParams, len: usize) -> Result<Vec<f64>> {
    let a = params.coherent_mean;
    let nbar = params.thermal_mean;
    if nbar == 0.0 {
        let p = coherent_pmf(CoherentParams::new(a)?)?;
        return Ok((0..len).map(|n| p.get(n)).collect());
    }
    let amp = a.sqrt();
    let cfg = QuadratureConfig::with_tolerances(1e-12, 1e-16);
    (0..len)
        .map(|n| {
            let nf = n as f64;
            let ln_nf = ln_factorial(n as u64);
            let integrand = |rho: f64| {
                if rho <= 0.0 {
                    return 0.0;
                }
                let d = rho - amp;
                let ln = -d * d / nbar - rho * rho + 2.0 * nf * rho.ln() - ln_nf + rho.ln();
                2.0 / nbar * ln.exp() * bessel_i0e(2.0 * amp * rho / nbar)
            };
            let peak = (nf + a + nbar).sqrt();
            let est = Quadrature::new(Interval::half_line(), &cfg)
                .breakpoints(&[amp, nf.sqrt(), peak])
                .scale(peak.max(1.0))
                .integrate(integrand)?;
            Ok(est.value)
        })
        .collect()
}

/// Truncation via the probability generating function
/// `G(z) = exp(a (z-1) / w) / w`, `w = 1 - nbar (z-1)`:
/// `P(X >= N) <= G(z) z^{-N}` and `E[X; X >= N] <= G'(z) z^{1-N}` for
/// `1 < z < 1 + 1/nbar`.
fn glauber_lachs_truncation(a: f64, nbar: f64, min_len: usize) -> Result<(f64, f64, usize)> {
    let ln_bounds = |n: f64, z: f64| {
        let w = 1.0 - nbar * (z - 1.0);
        let ln_g = a * (z - 1.0) / w - w.ln();
        let ln_dg = ln_g + (a / (w * w) + nbar / w).ln();
        (ln_g - n * z.ln(), ln_dg - (n - 1.0) * z.ln())
    };
    let zmax = 1.0 + 1.0 / nbar;
    let best = |n: f64| {
        // coarse scan of z followed by golden refinement of the larger bound
        let obj = |z: f64| {
            let (t, m) = ln_bounds(n, z);
            t.max(m)
        };
        let (mut lo, mut hi) = (1.0, zmax);
        let phi = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..100 {
            let x1 = hi - phi * (hi - lo);
            let x2 = lo + phi * (hi - lo);
            if obj(x1) < obj(x2) {
                hi = x2;
            } else {
                lo = x1;
            }
        }
        let (t, m) = ln_bounds(n, 0.5 * (lo + hi));
        (t.exp().min(1.0), m.exp().min(a + nbar))
    };
    let target = TAIL_TARGET;
    let mut len = ((a + nbar).ceil() as usize).max(1);
    loop {
        let (tail, tail_mean) = best(len as f64);
        if tail <= target && tail_mean <= target {
            let len = len.max(min_len);
            let (tail, tail_mean) = best(len as f64);
            return Ok((tail, tail_mean, len));
        }
        len = if tail > 1e-3 { len + len / 2 + 1 } else { len + 1 };
        if len > MAX_TRUNCATION {
            return Err(Error::Truncation {
                cap: MAX_TRUNCATION,
                bound: tail,
            });
        }
    }
}

/// `ln L_k(-c)` for `k < len`, `c >= 0`, from the forward recurrence
/// `(k+1) L_{k+1} = (2k+1+c) L_k - k L_{k-1}`. All coefficients of `L_k(-c)`
/// are positive, so the recurrence is stable; values are kept as a mantissa
/// ratio to avoid overflow.
fn ln_laguerre_negative(len: usize, c: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(len);
    if len == 0 {
        return out;
    }
    out.push(0.0);
    if len == 1 {
        return out;
    }
    // prev = L_{k-1}, cur = L_k, both divided by exp(ln_scale)
    let (mut prev, mut cur, mut ln_scale) = (1.0f64, 1.0 + c, 0.0f64);
    out.push(cur.ln());
    for k in 1..len - 1 {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + c) * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
        if cur > 1e100 {
            prev /= cur;
            ln_scale += cur.ln();
            cur = 1.0;
        }
        out.push(cur.ln() + ln_scale);
    }
    out
}

/// `sum n p(n)` and the bound on its truncation error.
pub fn mean_photon(p: &DiscretePmf) -> (f64, f64) {
    p.mean_with_error()
}

/// Bose-Einstein occupation `1 / (e^x - 1)` at `x = h nu / (k T)`.
pub fn bose_einstein_occupation(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return domain(format!("h nu / k T must be > 0, got {x}"));
    }
    Ok(1.0 / x.exp_m1())
}

/// Mean thermal occupation of a mode of frequency `nu` (Hz) at `t` (K).
pub fn thermal_mean_from_temperature(nu: f64, t: f64) -> Result<f64> {
    if !(nu > 0.0 && t > 0.0) {
        return domain(format!("frequency and temperature must be > 0, got nu={nu}, T={t}"));
    }
    bose_einstein_occupation(PLANCK * nu / (BOLTZMANN * t))
}

/// Any of the supported single-mode states.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum PhotonState {
    Fock { j: usize },
    Coherent(CoherentParams),
    Squeezed(SqueezeParams),
    Thermal(ThermalParams),
    GlauberLachs(GlauberLachsParams),
}

impl PhotonState {
    pub const VACUUM: PhotonState = PhotonState::Fock { j: 0 };

    pub fn pmf(&self) -> Result<DiscretePmf> {
        self.pmf_min_len(0)
    }

    /// The PMF with at least `min_len` stored terms (more terms only tighten
    /// the tail bounds). Fock states are exact and keep their own length.
    pub fn pmf_min_len(&self, min_len: usize) -> Result<DiscretePmf> {
        match *self {
            PhotonState::Fock { j } => Ok(fock_pmf(j)),
            PhotonState::Coherent(p) => coherent_pmf_len(p, min_len),
            PhotonState::Squeezed(p) => squeezed_vacuum_pmf_len(p, min_len),
            PhotonState::Thermal(p) => thermal_pmf_len(p, min_len),
            PhotonState::GlauberLachs(p) => glauber_lachs_pmf_len(p, min_len),
        }
    }

    pub fn analytic_mean(&self) -> f64 {
        match *self {
            PhotonState::Fock { j } => j as f64,
            PhotonState::Coherent(p) => p.mean_photons,
            PhotonState::Squeezed(p) => p.r.sinh().powi(2),
            PhotonState::Thermal(p) => p.mean_photons,
            PhotonState::GlauberLachs(p) => p.coherent_mean + p.thermal_mean,
        }
    }

    /// `-ln p(0)`, the KL divergence from the vacuum, when it has a closed form.
    pub fn analytic_kl_from_vacuum(&self) -> Option<f64> {
        match *self {
            PhotonState::Fock { j: 0 } => Some(0.0),
            PhotonState::Fock { .. } => None,
            PhotonState::Coherent(p) => Some(p.mean_photons),
            PhotonState::Squeezed(p) => Some(p.r.cosh().ln()),
            PhotonState::Thermal(p) => Some(p.mean_photons.ln_1p()),
            PhotonState::GlauberLachs(p) => {
                Some(p.thermal_mean.ln_1p() + p.coherent_mean / (1.0 + p.thermal_mean))
            }
        }
    }
}

impl fmt::Display for PhotonState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhotonState::Fock { j: 0 } => write!(f, "vacuum"),
            PhotonState::Fock { j } => write!(f, "fock:{j}"),
            PhotonState::Coherent(p) => write!(f, "coherent:{}", p.mean_photons),
            PhotonState::Squeezed(p) => write!(f, "squeezed:{}", p.r),
            PhotonState::Thermal(p) => write!(f, "thermal:{}", p.mean_photons),
            PhotonState::GlauberLachs(p) => {
                write!(f, "glauber_lachs:{},{}", p.coherent_mean, p.thermal_mean)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn coherent_basics() {
        assert_eq!(coherent_pmf(CoherentParams::new(0.0).unwrap()).unwrap(), DiscretePmf::delta(0));
        let p = coherent_pmf(CoherentParams::new(1.0).unwrap()).unwrap();
        assert!(close(p.get(0), (-1.0f64).exp(), 1e-16));
        let p = coherent_pmf(CoherentParams::new(2.5).unwrap()).unwrap();
        assert!(close(p.mean(), 2.5, 1e-12));
        let p = coherent_pmf(CoherentParams::new(3.2).unwrap()).unwrap();
        let (m, err) = mean_photon(&p);
        assert!(close(m, 3.2, 1e-10) && err < 1e-12);
    }

    #[test]
    fn large_coherent_mean_stays_finite() {
        let p = coherent_pmf(CoherentParams::new(5000.0).unwrap()).unwrap();
        assert!(close(p.total_mass(), 1.0, 1e-11));
        assert!(close(p.mean(), 5000.0, 1e-7));
    }

    #[test]
    fn squeezed_basics() {
        let p = squeezed_vacuum_pmf(SqueezeParams::new(1.0).unwrap()).unwrap();
        assert!(close(p.get(0), 1.0 / 1f64.cosh(), 1e-15));
        assert!(close(p.mean(), 1f64.sinh().powi(2), 1e-10));
        assert!(p.probs().iter().skip(1).step_by(2).all(|&x| x == 0.0));
        let p = squeezed_vacuum_pmf(SqueezeParams::new(0.5).unwrap()).unwrap();
        assert!(close(p.mean(), 0.5f64.sinh().powi(2), 1e-12));
        assert_eq!(squeezed_vacuum_pmf(SqueezeParams::new(0.0).unwrap()).unwrap(), DiscretePmf::delta(0));
    }

    #[test]
    fn thermal_basics() {
        let p = thermal_pmf(ThermalParams::new(1.0).unwrap()).unwrap();
        for n in 0..30 {
            assert!(close(p.get(n), 0.5f64.powi(n as i32 + 1), 1e-16));
        }
        let p = thermal_pmf(ThermalParams::new(2.0).unwrap()).unwrap();
        assert!(close(p.mean(), 2.0, 1e-12));
    }

    #[test]
    fn glauber_lachs_limits_and_mean() {
        let gl = glauber_lachs_pmf(GlauberLachsParams::new(0.0, 1.5).unwrap()).unwrap();
        let th = thermal_pmf(ThermalParams::new(1.5).unwrap()).unwrap();
        assert_eq!(gl, th);
        let gl = glauber_lachs_pmf(GlauberLachsParams::new(1.0, 2.0).unwrap()).unwrap();
        assert!(close(gl.mean(), 3.0, 1e-8));
        assert!(close(gl.total_mass(), 1.0, 1e-10));
        // nearly undisplaced and nearly cold cases stay close to the limits
        let gl = glauber_lachs_pmf_closed(GlauberLachsParams::new(2.0, 1e-9).unwrap()).unwrap();
        let co = coherent_pmf(CoherentParams::new(2.0).unwrap()).unwrap();
        for n in 0..co.len() {
            assert!(close(gl.get(n), co.get(n), 1e-8), "n={n}");
        }
    }

    #[test]
    fn glauber_lachs_routes_agree() {
        for &(a, nbar) in &[(1.0, 2.0), (2.0, 0.5), (10.0, 0.1)] {
            let params = GlauberLachsParams::new(a, nbar).unwrap();
            let closed = glauber_lachs_pmf_closed(params).unwrap();
            let mixture = glauber_lachs_mixture(params, closed.len()).unwrap();
            for (n, (x, y)) in closed.probs().iter().zip(&mixture).enumerate() {
                assert!(close(*x, *y, 1e-12), "a={a} nbar={nbar} n={n}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn longer_truncation_tightens_bounds() {
        for s in [
            PhotonState::Coherent(CoherentParams::new(2.0).unwrap()),
            PhotonState::Squeezed(SqueezeParams::new(0.7).unwrap()),
            PhotonState::Thermal(ThermalParams::new(1.0).unwrap()),
            PhotonState::GlauberLachs(GlauberLachsParams::new(1.0, 0.5).unwrap()),
        ] {
            let short = s.pmf().unwrap();
            let long = s.pmf_min_len(short.len() + 41).unwrap();
            assert!(long.len() >= short.len() + 41, "{s}");
            assert!(long.tail_bound() <= short.tail_bound());
            assert_eq!(&long.probs()[..short.len()], short.probs());
        }
    }

    #[test]
    fn occupation() {
        assert!(close(bose_einstein_occupation(2f64.ln()).unwrap(), 1.0, 1e-15));
        assert!(close(bose_einstein_occupation(1.0).unwrap(), 0.581_976_706_869_326_4, 1e-15));
        assert_eq!(bose_einstein_occupation(1e4).unwrap(), 0.0);
        let nu = 2f64.ln() * BOLTZMANN * 300.0 / PLANCK;
        assert!(close(thermal_mean_from_temperature(nu, 300.0).unwrap(), 1.0, 1e-12));
        assert!(thermal_mean_from_temperature(-1.0, 300.0).is_err());
    }

    #[test]
    fn invalid_parameters() {
        assert!(CoherentParams::new(-1.0).is_err());
        assert!(SqueezeParams::new(f64::NAN).is_err());
        assert!(GlauberLachsParams::new(1.0, -0.1).is_err());
    }

    #[test]
    fn vacuum_kl_matches_first_probability() {
        let states = [
            PhotonState::Coherent(CoherentParams::new(2.5).unwrap()),
            PhotonState::Squeezed(SqueezeParams::new(1.0).unwrap()),
            PhotonState::Thermal(ThermalParams::new(2.0).unwrap()),
            PhotonState::GlauberLachs(GlauberLachsParams::new(1.0, 2.0).unwrap()),
        ];
        for s in states {
            let p = s.pmf().unwrap();
            assert!(close(-p.get(0).ln(), s.analytic_kl_from_vacuum().unwrap(), 1e-12), "{s}");
        }
    }
}
