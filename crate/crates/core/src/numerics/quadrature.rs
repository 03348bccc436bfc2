//! Adaptive Gauss-Kronrod integration on finite and infinite intervals.
//!
//! Infinite endpoints are folded onto a bounded parameter `t` before any
//! subdivision happens, so every integral is handled by the same globally
//! adaptive G10/K21 loop. Known breakpoints (kinks, zeros, log singularities)
//! seed the initial partition; pieces flagged as singular at their ends are
//! additionally smoothed with `t = c + (d - c)(3u^2 - 2u^3)`, which turns an
//! endpoint `ln|x - c|` into a bounded `u ln u` integrand.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Integration interval on the extended real line.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo >= hi {
            return domain(format!("interval requires lo < hi, got [{lo}, {hi}]"));
        }
        if lo == f64::INFINITY || hi == f64::NEG_INFINITY {
            return domain("interval endpoints point the wrong way");
        }
        Ok(Self { lo, hi })
    }

    pub const fn unit() -> Self {
        Self { lo: 0.0, hi: 1.0 }
    }

    pub const fn real_line() -> Self {
        Self {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
        }
    }

    pub const fn half_line() -> Self {
        Self {
            lo: 0.0,
            hi: f64::INFINITY,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Smallest interval covering both.
    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo < hi).then_some(Interval { lo, hi })
    }
}

/// Tolerances and work limit for [`integrate_adaptive`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_subdivisions: 10_000,
        }
    }
}

impl QuadratureConfig {
    pub fn with_tolerances(rel_tol: f64, abs_tol: f64) -> Self {
        Self {
            rel_tol,
            abs_tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return domain("quadrature tolerances must be positive");
        }
        if self.max_subdivisions == 0 {
            return domain("max_subdivisions must be at least 1");
        }
        Ok(())
    }
}

/// Value, error estimate and work counters of one integration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadEstimate {
    pub value: f64,
    pub error: f64,
    pub subdivisions: usize,
    pub evaluations: usize,
}

/// Integrates `f` over `domain` to `max(abs_tol, rel_tol * |I|)`.
pub fn integrate_adaptive<F>(f: F, domain: Interval, cfg: &QuadratureConfig) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    Quadrature::new(domain, cfg).integrate(f).map(|e| e.value)
}

/// Configurable integration job: breakpoints, infinite-domain scale and
/// endpoint-singularity handling.
#[derive(Clone, Debug)]
pub struct Quadrature<'a> {
    domain: Interval,
    cfg: &'a QuadratureConfig,
    breakpoints: Vec<f64>,
    scale: f64,
    singular_ends: bool,
}

impl<'a> Quadrature<'a> {
    pub fn new(domain: Interval, cfg: &'a QuadratureConfig) -> Self {
        Self {
            domain,
            cfg,
            breakpoints: Vec::new(),
            scale: 1.0,
            singular_ends: false,
        }
    }

    /// Interior points where the integrand is non-smooth. Points outside the
    /// open domain are ignored.
    pub fn breakpoints(mut self, pts: &[f64]) -> Self {
        self.breakpoints.extend_from_slice(pts);
        self
    }

    /// Characteristic length used by the infinite-endpoint maps.
    pub fn scale(mut self, scale: f64) -> Self {
        if scale.is_finite() && scale > 0.0 {
            self.scale = scale;
        }
        self
    }

    /// Treat every piece endpoint as a possible integrable singularity.
    pub fn singular_ends(mut self, yes: bool) -> Self {
        self.singular_ends = yes;
        self
    }

    pub fn integrate<F>(&self, f: F) -> Result<QuadEstimate>
    where
        F: Fn(f64) -> f64,
    {
        self.cfg.validate()?;
        let map = DomainMap::new(self.domain, self.scale);
        let (t_lo, t_hi) = map.t_range(self.domain);

        let mut knots: Vec<f64> = self
            .breakpoints
            .iter()
            .filter(|&&x| x > self.domain.lo && x < self.domain.hi)
            .map(|&x| map.to_t(x))
            .filter(|&t| t > t_lo && t < t_hi)
            .collect();
        knots.push(t_lo);
        knots.push(t_hi);
        knots.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
        knots.dedup_by(|a, b| (*a - *b).abs() <= 4.0 * f64::EPSILON * a.abs().max(b.abs()));

        let pieces: Vec<(f64, f64)> = knots.windows(2).map(|w| (w[0], w[1])).collect();
        let smooth = self.singular_ends;

        let eval = |piece: usize, s: f64| -> Result<f64> {
            let (c, d) = pieces[piece];
            let (t, dt) = if smooth {
                (c + (d - c) * s * s * (3.0 - 2.0 * s), 6.0 * (d - c) * s * (1.0 - s))
            } else {
                (s, 1.0)
            };
            let (x, jac) = map.to_x(t);
            let y = f(x);
            if !y.is_finite() {
                return Err(Error::NonFinite(x));
            }
            let w = jac * dt;
            Ok(if y == 0.0 || w == 0.0 { 0.0 } else { y * w })
        };

        let mut heap = BinaryHeap::new();
        let mut evaluations = 0usize;
        let mut value = 0.0;
        let mut error = 0.0;
        for (i, &(c, d)) in pieces.iter().enumerate() {
            let (a, b) = if smooth { (0.0, 1.0) } else { (c, d) };
            let seg = gk21(|s| eval(i, s), i, a, b)?;
            evaluations += 21;
            value += seg.value;
            error += seg.error;
            heap.push(seg);
        }

        let mut settled_value = 0.0;
        let mut settled_error = 0.0;
        let mut subdivisions = 0usize;
        loop {
            let tol = self.cfg.abs_tol.max(self.cfg.rel_tol * value.abs());
            if error <= tol {
                break;
            }
            let Some(worst) = heap.pop() else {
                break;
            };
            let mid = 0.5 * (worst.a + worst.b);
            if !(mid > worst.a && mid < worst.b)
                || (worst.b - worst.a) <= 64.0 * f64::EPSILON * worst.a.abs().max(worst.b.abs())
            {
                // interval can no longer be split in floating point
                settled_value += worst.value;
                settled_error += worst.error;
                continue;
            }
            if subdivisions >= self.cfg.max_subdivisions {
                heap.push(worst);
                let (v, e) = totals(&heap, settled_value, settled_error);
                return Err(Error::NonConvergence {
                    estimate: v,
                    error: e,
                    subdivisions,
                });
            }
            subdivisions += 1;
            let left = gk21(|s| eval(worst.piece, s), worst.piece, worst.a, mid)?;
            let right = gk21(|s| eval(worst.piece, s), worst.piece, mid, worst.b)?;
            evaluations += 42;
            value += left.value + right.value - worst.value;
            error += left.error + right.error - worst.error;
            heap.push(left);
            heap.push(right);
            if subdivisions % 256 == 0 {
                // resum to stop drift in the running totals
                let (v, e) = totals(&heap, settled_value, settled_error);
                value = v;
                error = e;
            }
        }

        let (value, error) = totals(&heap, settled_value, settled_error);
        let tol = self.cfg.abs_tol.max(self.cfg.rel_tol * value.abs());
        if error > tol {
            return Err(Error::NonConvergence {
                estimate: value,
                error,
                subdivisions,
            });
        }
        Ok(QuadEstimate {
            value,
            error,
            subdivisions,
            evaluations,
        })
    }
}

fn totals(heap: &BinaryHeap<Segment>, v0: f64, e0: f64) -> (f64, f64) {
    // sort by magnitude so the sum is independent of heap layout
    let mut parts: Vec<(f64, f64)> = heap.iter().map(|s| (s.value, s.error)).collect();
    parts.sort_by(|a, b| {
        a.0.abs()
            .partial_cmp(&b.0.abs())
            .unwrap_or(Ordering::Equal)
            .then(a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal))
    });
    parts
        .iter()
        .fold((v0, e0), |(v, e), &(pv, pe)| (v + pv, e + pe))
}

/// Maps the (possibly infinite) domain onto a bounded parameter interval.
#[derive(Clone, Copy, Debug)]
enum DomainMap {
    Finite,
    Upper { a: f64, s: f64 },
    Lower { b: f64, s: f64 },
    Both { s: f64 },
}

impl DomainMap {
    fn new(d: Interval, s: f64) -> Self {
        match (d.lo.is_finite(), d.hi.is_finite()) {
            (true, true) => DomainMap::Finite,
            (true, false) => DomainMap::Upper { a: d.lo, s },
            (false, true) => DomainMap::Lower { b: d.hi, s },
            (false, false) => DomainMap::Both { s },
        }
    }

    fn t_range(&self, d: Interval) -> (f64, f64) {
        match self {
            DomainMap::Finite => (d.lo, d.hi),
            DomainMap::Upper { .. } | DomainMap::Lower { .. } => (0.0, 1.0),
            DomainMap::Both { .. } => (-1.0, 1.0),
        }
    }

    fn to_x(&self, t: f64) -> (f64, f64) {
        match *self {
            DomainMap::Finite => (t, 1.0),
            DomainMap::Upper { a, s } => {
                let r = 1.0 - t;
                (a + s * t / r, s / (r * r))
            }
            DomainMap::Lower { b, s } => (b - s * (1.0 - t) / t, s / (t * t)),
            DomainMap::Both { s } => {
                let r = 1.0 - t * t;
                (s * t / r, s * (1.0 + t * t) / (r * r))
            }
        }
    }

    fn to_t(&self, x: f64) -> f64 {
        match *self {
            DomainMap::Finite => x,
            DomainMap::Upper { a, s } => {
                let y = (x - a) / s;
                y / (1.0 + y)
            }
            DomainMap::Lower { b, s } => 1.0 / (1.0 + (b - x) / s),
            DomainMap::Both { s } => {
                let y = x / s;
                2.0 * y / (1.0 + (1.0 + 4.0 * y * y).sqrt())
            }
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Segment {
    piece: usize,
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .partial_cmp(&other.error)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.a.partial_cmp(&self.a).unwrap_or(Ordering::Equal))
    }
}

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_060,
    0.865_063_366_688_984_510_732_096_688_423,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_115,
    0.562_757_134_668_604_683_339_000_099_273,
    0.433_395_394_129_247_190_799_265_943_166,
    0.294_392_862_701_460_198_131_126_603_104,
    0.148_874_338_981_631_210_884_826_001_130,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062,
    0.032_558_162_307_964_727_478_818_972_459,
    0.054_755_896_574_351_996_031_381_300_245,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_326,
    0.123_491_976_262_065_851_077_208_620_813,
    0.134_709_217_311_473_325_928_054_001_772,
    0.142_775_938_577_060_080_797_094_273_139,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_390,
];

// 10-point Gauss weights for XGK[1], XGK[3], ..., XGK[9]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_658,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

fn gk21<G>(g: G, piece: usize, a: f64, b: f64) -> Result<Segment>
where
    G: Fn(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = g(center)?;
    let mut res_k = fc * WGK[10];
    let mut res_abs = res_k.abs();
    let mut res_g = 0.0;
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = g(center - dx)?;
        let f2 = g(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok(Segment {
        piece,
        a,
        b,
        value,
        error: err,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn gaussian_over_real_line() {
        let v = integrate_adaptive(|x| (-x * x).exp(), Interval::real_line(), &cfg()).unwrap();
        assert!((v - PI.sqrt()).abs() < 1e-12, "{v}");
    }

    #[test]
    fn box_ground_state_is_normalized() {
        let v = integrate_adaptive(
            |x| 2.0 * (PI * x).sin().powi(2),
            Interval::unit(),
            &cfg(),
        )
        .unwrap();
        assert!((v - 1.0).abs() < 1e-13);
    }

    #[test]
    fn rectified_sine_with_and_without_breakpoints() {
        let f = |x: f64| (2.0 * PI * x).sin().abs();
        let plain = integrate_adaptive(f, Interval::unit(), &cfg()).unwrap();
        let split = Quadrature::new(Interval::unit(), &cfg())
            .breakpoints(&[0.5])
            .integrate(f)
            .unwrap();
        assert!((plain - 2.0 / PI).abs() < 1e-10);
        assert!((split.value - 2.0 / PI).abs() < 1e-14);
        assert_eq!(split.subdivisions, 0);
    }

    #[test]
    fn half_infinite_domains() {
        let up = integrate_adaptive(|x| (-x).exp(), Interval::half_line(), &cfg()).unwrap();
        assert!((up - 1.0).abs() < 1e-12);
        let down = integrate_adaptive(
            |x| x.exp(),
            Interval::new(f64::NEG_INFINITY, 2.0).unwrap(),
            &cfg(),
        )
        .unwrap();
        assert!((down - 2f64.exp()).abs() < 1e-10 * 2f64.exp());
    }

    #[test]
    fn large_scale_half_line() {
        let s = 2.0e12;
        let est = Quadrature::new(Interval::half_line(), &cfg())
            .scale(s)
            .integrate(|x| (-x / s).exp() / s)
            .unwrap();
        assert!((est.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn log_singularities_with_smoothing() {
        // int_0^1 ln x dx = -1, singular at 0
        let est = Quadrature::new(Interval::unit(), &cfg())
            .singular_ends(true)
            .integrate(|x| x.ln())
            .unwrap();
        assert!((est.value + 1.0).abs() < 1e-11, "{}", est.value);
        // int_0^1 ln|x - 1/3| dx, interior singularity
        let exact = (2.0 / 3.0) * (2.0f64 / 3.0).ln() + (1.0 / 3.0) * (1.0f64 / 3.0).ln() - 1.0;
        let est = Quadrature::new(Interval::unit(), &cfg())
            .breakpoints(&[1.0 / 3.0])
            .singular_ends(true)
            .integrate(|x| (x - 1.0 / 3.0).abs().ln())
            .unwrap();
        assert!((est.value - exact).abs() < 1e-11);
    }

    #[test]
    fn non_convergence_reports_partial_estimate() {
        let tight = QuadratureConfig {
            rel_tol: 1e-15,
            abs_tol: 1e-300,
            max_subdivisions: 3,
        };
        let err = integrate_adaptive(|x| (1.0 / x).sin(), Interval::new(1e-3, 1.0).unwrap(), &tight)
            .unwrap_err();
        match err {
            Error::NonConvergence {
                estimate,
                subdivisions,
                ..
            } => {
                assert!(estimate.is_finite());
                assert_eq!(subdivisions, 3);
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(Interval::new(1.0, 1.0).is_err());
        assert!(Interval::new(f64::NAN, 1.0).is_err());
        let bad = QuadratureConfig {
            rel_tol: 0.0,
            ..Default::default()
        };
        assert!(integrate_adaptive(|x| x, Interval::unit(), &bad).is_err());
        assert!(matches!(
            integrate_adaptive(|_| f64::NAN, Interval::unit(), &cfg()),
            Err(Error::NonFinite(_))
        ));
    }
}
