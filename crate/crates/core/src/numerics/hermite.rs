//! Normalized Hermite functions `psi_n(x) = H_n(x) e^{-x^2/2} / sqrt(2^n n! sqrt(pi))`.
//!
//! Values come from the normalized three-term recurrence
//! `psi_{k+1} = x sqrt(2/(k+1)) psi_k - sqrt(k/(k+1)) psi_{k-1}`, carried as a
//! mantissa plus a running log-scale so that neither the Gaussian factor nor
//! the polynomial growth can under- or overflow (n up to 10^4, |x| up to 200).

use std::f64::consts::PI;

use super::special::erfc;

const RESCALE_HI: f64 = 1e100;
const RESCALE_LO: f64 = 1e-100;

/// Scaled ladder state: `psi_k = cur * exp(log_scale)`, `psi_{k-1} = prev * exp(log_scale)`.
#[derive(Clone, Copy, Debug)]
struct Ladder {
    k: u64,
    x: f64,
    prev: f64,
    cur: f64,
    log_scale: f64,
}

impl Ladder {
    fn start(x: f64) -> Self {
        Self {
            k: 0,
            x,
            prev: 0.0,
            cur: 1.0,
            log_scale: -0.5 * x * x - 0.25 * PI.ln(),
        }
    }

    /// Advances to `k + 1`; returns the factor by which the mantissas were
    /// divided (1 when no rescale happened).
    fn step(&mut self) -> f64 {
        let k = self.k as f64;
        let next = self.x * (2.0 / (k + 1.0)).sqrt() * self.cur - (k / (k + 1.0)).sqrt() * self.prev;
        self.prev = self.cur;
        self.cur = next;
        self.k += 1;
        let m = self.cur.abs().max(self.prev.abs());
        if m > RESCALE_HI || (m < RESCALE_LO && m > 0.0) {
            self.prev /= m;
            self.cur /= m;
            self.log_scale += m.ln();
            m
        } else {
            1.0
        }
    }

    fn value(&self) -> f64 {
        if self.cur == 0.0 {
            0.0
        } else {
            self.cur * self.log_scale.exp()
        }
    }

    fn ln_abs(&self) -> f64 {
        self.cur.abs().ln() + self.log_scale
    }
}

fn ladder_to(n: u64, x: f64) -> Ladder {
    let mut l = Ladder::start(x);
    while l.k < n {
        l.step();
    }
    l
}

/// `psi_n(x)`; `psi_n(x)^2` is the x-quadrature density of the Fock state `|n>`.
pub fn hermite_psi(n: u64, x: f64) -> f64 {
    ladder_to(n, x).value()
}

/// `ln|psi_n(x)|`, finite wherever `psi_n(x) != 0` even when `psi_n` itself
/// underflows.
pub fn ln_abs_hermite_psi(n: u64, x: f64) -> f64 {
    ladder_to(n, x).ln_abs()
}

/// `(psi_{n-1}(x), psi_n(x))`, with `psi_{-1} = 0`.
pub fn hermite_psi_pair(n: u64, x: f64) -> (f64, f64) {
    let l = ladder_to(n, x);
    if l.cur == 0.0 && l.prev == 0.0 {
        return (0.0, 0.0);
    }
    let s = l.log_scale.exp();
    (l.prev * s, l.cur * s)
}

/// All of `psi_0(x), ..., psi_n(x)`.
pub fn hermite_psi_all(n: u64, x: f64) -> Vec<f64> {
    let mut l = Ladder::start(x);
    let mut out = Vec::with_capacity(n as usize + 1);
    out.push(l.value());
    while l.k < n {
        l.step();
        out.push(l.value());
    }
    out
}

/// Exact CDF of `psi_n^2`:
/// `G_n(x) = erfc(-x)/2 - sum_{k=1}^{n} psi_k(x) psi_{k-1}(x) / sqrt(2k)`,
/// from `psi_k^2 = psi_{k-1}^2 - (2k)^{-1/2} d/dx (psi_k psi_{k-1})`.
/// The right half uses `G_n(x) = 1 - G_n(-x)`.
pub fn hermite_cdf(n: u64, x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x > 0.0 {
        return 1.0 - left_cdf(n, -x);
    }
    left_cdf(n, x)
}

fn left_cdf(n: u64, x: f64) -> f64 {
    if x == f64::NEG_INFINITY {
        return 0.0;
    }
    let mut l = Ladder::start(x);
    // sum of psi_k psi_{k-1} / sqrt(2k) in units of exp(2 * log_scale)
    let mut acc = 0.0;
    while l.k < n {
        let m = l.step();
        if m != 1.0 {
            acc /= m * m;
        }
        acc += l.cur * l.prev / (2.0 * l.k as f64).sqrt();
    }
    let correction = if acc == 0.0 {
        0.0
    } else {
        acc.signum() * (acc.abs().ln() + 2.0 * l.log_scale).exp()
    };
    (0.5 * erfc(-x) - correction).clamp(0.0, 1.0)
}

/// Zeros of `psi_n` in increasing order (there are exactly `n`).
pub fn hermite_zeros(n: u64) -> Vec<f64> {
    if n == 0 {
        return Vec::new();
    }
    let edge = (2.0 * n as f64 + 1.0).sqrt();
    let step = PI / (24.0 * edge);
    let mut positive = Vec::with_capacity(n as usize / 2);
    let mut a = if n % 2 == 1 { step * 0.5 } else { 0.0 };
    let mut fa = hermite_psi_scaled_sign(n, a);
    while a < edge + 1.0 && positive.len() < (n as usize) / 2 {
        let b = a + step;
        let fb = hermite_psi_scaled_sign(n, b);
        if fa * fb < 0.0 {
            positive.push(bisect_zero(n, a, b, fa));
        }
        a = b;
        fa = fb;
    }
    let mut zeros: Vec<f64> = positive.iter().rev().map(|z| -z).collect();
    if n % 2 == 1 {
        zeros.push(0.0);
    }
    zeros.extend(positive);
    zeros
}

/// Sign-carrying mantissa of `psi_n(x)`; never underflows.
fn hermite_psi_scaled_sign(n: u64, x: f64) -> f64 {
    ladder_to(n, x).cur
}

fn bisect_zero(n: u64, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if !(mid > a && mid < b) {
            break;
        }
        let fm = hermite_psi_scaled_sign(n, mid);
        if fm == 0.0 {
            return mid;
        }
        if fm * fa > 0.0 {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::quadrature::{integrate_adaptive, Interval, Quadrature, QuadratureConfig};

    #[test]
    fn low_order_values() {
        assert!((hermite_psi(0, 0.0) - PI.powf(-0.25)).abs() < 1e-15);
        assert_eq!(hermite_psi(1, 0.0), 0.0);
        // psi_2(x) = (4x^2 - 2) e^{-x^2/2} / sqrt(8 sqrt(pi))
        let x = 0.7f64;
        let exact = (4.0 * x * x - 2.0) * (-0.5 * x * x).exp() / (8.0 * PI.sqrt()).sqrt();
        assert!((hermite_psi(2, x) - exact).abs() < 1e-14);
    }

    #[test]
    fn matches_raw_polynomial_recurrence_at_moderate_n() {
        // H_{k+1} = 2x H_k - 2k H_{k-1}, fine in f64 for n = 30
        let x = 1.3f64;
        let (mut h0, mut h1) = (1.0f64, 2.0 * x);
        for k in 1..30 {
            let h2 = 2.0 * x * h1 - 2.0 * k as f64 * h0;
            h0 = h1;
            h1 = h2;
        }
        let norm = (0.5 * crate::numerics::special::ln_hermite_norm(30)).exp();
        let naive = h1 * (-0.5 * x * x).exp() / norm;
        assert!((hermite_psi(30, x) - naive).abs() < 1e-13);
    }

    #[test]
    fn finite_over_wide_range() {
        for &n in &[0u64, 1, 150, 1000, 10_000] {
            for &x in &[-200.0, -141.0, -40.0, 0.0, 3.3, 100.0, 200.0] {
                let v = hermite_psi(n, x);
                assert!(v.is_finite(), "n={n} x={x}");
                assert!(v.abs() < 1.0);
            }
        }
        // well inside the classically allowed region the value is not underflowed
        let v = hermite_psi(10_000, 100.0);
        assert!(v != 0.0 && v.abs() > 1e-6, "{v}");
    }

    #[test]
    fn recurrence_residual() {
        for &x in &[-7.5, -1.1, 0.0, 0.3, 2.9, 12.0] {
            let psi = hermite_psi_all(1001, x);
            for n in 1..1000usize {
                let nf = n as f64;
                let r = psi[n + 1] - x * (2.0 / (nf + 1.0)).sqrt() * psi[n]
                    + (nf / (nf + 1.0)).sqrt() * psi[n - 1];
                assert!(r.abs() < 1e-12, "n={n} x={x} r={r}");
            }
            // the single-n entry point agrees with the bulk one
            assert!((hermite_psi(1000, x) - psi[1000]).abs() < 1e-14);
        }
    }

    #[test]
    fn psi_50_normalized() {
        let cfg = QuadratureConfig::default();
        let v = integrate_adaptive(|x| hermite_psi(50, x).powi(2), Interval::real_line(), &cfg).unwrap();
        assert!((v - 1.0).abs() < 1e-9, "{v}");
    }

    #[test]
    fn orthonormal_spot_checks() {
        let cfg = QuadratureConfig::default();
        for &(m, n) in &[(0u64, 0u64), (3, 5), (7, 7), (10, 12), (40, 41), (99, 100), (100, 100), (60, 98)] {
            let edge = (2.0 * n.max(m) as f64 + 1.0).sqrt();
            let v = Quadrature::new(Interval::real_line(), &cfg)
                .breakpoints(&[-edge, 0.0, edge])
                .scale(edge)
                .integrate(|x| {
                    let (_, a) = hermite_psi_pair(m, x);
                    let (_, b) = hermite_psi_pair(n, x);
                    a * b
                })
                .unwrap()
                .value;
            let expect = if m == n { 1.0 } else { 0.0 };
            assert!((v - expect).abs() < 1e-8, "({m},{n}) -> {v}");
        }
    }

    #[test]
    fn ln_abs_agrees_and_survives_underflow() {
        assert!((ln_abs_hermite_psi(5, 1.2) - hermite_psi(5, 1.2).abs().ln()).abs() < 1e-13);
        let deep = ln_abs_hermite_psi(3, 60.0);
        assert!(deep.is_finite() && deep < -1700.0);
        assert_eq!(ln_abs_hermite_psi(1, 0.0), f64::NEG_INFINITY);
    }

    #[test]
    fn cdf_matches_quadrature() {
        let cfg = QuadratureConfig::default();
        for &n in &[0u64, 1, 2, 7, 30] {
            for &x in &[-6.0, -2.5, -0.3, 0.0, 0.8, 4.0] {
                let q = integrate_adaptive(
                    |t| hermite_psi(n, t).powi(2),
                    Interval::new(f64::NEG_INFINITY, x).unwrap(),
                    &cfg,
                )
                .unwrap();
                assert!((hermite_cdf(n, x) - q).abs() < 1e-11, "n={n} x={x}");
            }
        }
    }

    #[test]
    fn cdf_symmetry_and_limits() {
        for &n in &[0u64, 3, 50, 400] {
            for &x in &[0.1, 1.0, 5.5, 20.0, 30.0] {
                let s = hermite_cdf(n, -x) + hermite_cdf(n, x);
                assert!((s - 1.0).abs() < 1e-12);
            }
            assert!((hermite_cdf(n, 0.0) - 0.5).abs() < 1e-13);
            assert!(hermite_cdf(n, -60.0) < 1e-300);
        }
    }

    #[test]
    fn zeros_are_zeros() {
        for &n in &[1u64, 2, 5, 20, 101, 200] {
            let z = hermite_zeros(n);
            assert_eq!(z.len(), n as usize);
            assert!(z.windows(2).all(|w| w[0] < w[1]));
            for &x in &z {
                // sign change across each zero
                let h = 1e-9;
                let a = hermite_psi_scaled_sign(n, x - h);
                let b = hermite_psi_scaled_sign(n, x + h);
                assert!(a * b <= 0.0, "n={n} x={x}");
            }
        }
    }
}
