//! Reproducible scans over the distance routines, emitted as tables.
//!
//! Rows are computed in parallel on the current rayon pool and assembled in
//! input order, so a given [`ExperimentSpec`] always yields the same table.
//! Any row whose numeric value strays from its analytic reference beyond the
//! run tolerance aborts the run with [`Error::ToleranceExceeded`].

mod runs;
mod table;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::photon::{
    CoherentParams, GlauberLachsParams, PhotonState, SqueezeParams, ThermalParams,
};

pub use runs::{
    check_osc_fits, run, run_blackbody_scan, run_osc_scan, run_pbox_scan, run_photon_table,
    EXPONENT_TARGET, EXPONENT_TOL, LOG_FIT_REL_RMS,
};
pub(crate) use runs::{collinearity, relative_rms};
pub use table::{format_cell, Column, ExperimentTable, NamedFit, OutputFormat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Pbox,
    Osc,
    Photon,
    Blackbody,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub experiment: ExperimentKind,
    pub n_min: u64,
    pub n_max: u64,
    pub n_step: u64,
    /// Box reference state; `None` compares against the classical density.
    pub m: Option<u32>,
    pub temperatures: Vec<f64>,
    pub state_pairs: Vec<(PhotonState, PhotonState)>,
    /// Window of the `c n^gamma` fit to oscillator `W_1`.
    pub fit_window: Option<(u64, u64)>,
    /// Window of the `a ln n + b` fits to oscillator KL and Bhattacharyya.
    pub log_fit_window: Option<(u64, u64)>,
    /// Overrides every per-run tolerance.
    pub tolerance: Option<f64>,
    /// Whether the oscillator fits must meet the asymptotic-law thresholds.
    pub check_fits: bool,
}

/// Default `W_1` power-law window, the large-n regime.
pub const DEFAULT_FIT_WINDOW: (u64, u64) = (50, 400);
/// Default window for the logarithmic KL / Bhattacharyya fits.
pub const DEFAULT_LOG_FIT_WINDOW: (u64, u64) = (10, 200);

impl ExperimentSpec {
    fn base(experiment: ExperimentKind) -> Self {
        Self {
            experiment,
            n_min: 1,
            n_max: 1,
            n_step: 1,
            m: None,
            temperatures: Vec::new(),
            state_pairs: Vec::new(),
            fit_window: None,
            log_fit_window: None,
            tolerance: None,
            check_fits: true,
        }
    }

    /// `W_1(F_cl, G_n)` for `n = 1..=n_max`.
    pub fn pbox_classical(n_max: u64) -> Self {
        Self {
            n_max,
            ..Self::base(ExperimentKind::Pbox)
        }
    }

    /// `W_1(G_m, G_n)` for `n = 1..=n_max`.
    pub fn pbox_pair(m: u32, n_max: u64) -> Self {
        Self {
            n_max,
            m: Some(m),
            ..Self::base(ExperimentKind::Pbox)
        }
    }

    pub fn osc(n_max: u64) -> Self {
        Self {
            n_min: 1,
            n_max,
            ..Self::base(ExperimentKind::Osc)
        }
    }

    pub fn photon(state_pairs: Vec<(PhotonState, PhotonState)>) -> Self {
        Self {
            state_pairs,
            ..Self::base(ExperimentKind::Photon)
        }
    }

    /// Vacuum against each family, two coherent states and two Fock states.
    pub fn photon_default() -> Self {
        let v = PhotonState::VACUUM;
        let c = |m| PhotonState::Coherent(CoherentParams { mean_photons: m });
        let s = |r| PhotonState::Squeezed(SqueezeParams { r });
        let t = |m| PhotonState::Thermal(ThermalParams { mean_photons: m });
        let gl = PhotonState::GlauberLachs(GlauberLachsParams {
            coherent_mean: 1.0,
            thermal_mean: 2.0,
        });
        Self::photon(vec![
            (v, c(0.5)),
            (v, c(2.5)),
            (v, s(0.5)),
            (v, s(1.0)),
            (v, t(1.0)),
            (v, t(2.0)),
            (v, gl),
            (c(4.0), c(1.0)),
            (PhotonState::Fock { j: 3 }, PhotonState::Fock { j: 7 }),
        ])
    }

    pub fn blackbody(temperatures: Vec<f64>) -> Self {
        Self {
            temperatures,
            ..Self::base(ExperimentKind::Blackbody)
        }
    }

    pub fn with_n_range(mut self, n_min: u64, n_max: u64, n_step: u64) -> Self {
        self.n_min = n_min;
        self.n_max = n_max;
        self.n_step = n_step;
        self
    }

    pub fn with_fit_window(mut self, lo: u64, hi: u64) -> Self {
        self.fit_window = Some((lo, hi));
        self
    }

    pub fn with_log_fit_window(mut self, lo: u64, hi: u64) -> Self {
        self.log_fit_window = Some((lo, hi));
        self
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tolerance = Some(tol);
        self
    }

    pub fn with_check_fits(mut self, yes: bool) -> Self {
        self.check_fits = yes;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidSpec(m));
        if let Some(tol) = self.tolerance {
            if !(tol > 0.0 && tol.is_finite()) {
                return bad(format!("tolerance must be > 0, got {tol}"));
            }
        }
        match self.experiment {
            ExperimentKind::Pbox | ExperimentKind::Osc => {
                if self.n_step == 0 || self.n_min > self.n_max {
                    return bad(format!(
                        "empty n range {}..={} step {}",
                        self.n_min, self.n_max, self.n_step
                    ));
                }
                if self.experiment == ExperimentKind::Pbox {
                    if self.n_min == 0 {
                        return bad("box quantum numbers start at 1".into());
                    }
                    if self.m == Some(0) {
                        return bad("box reference state m must be >= 1".into());
                    }
                    if self.n_max > u32::MAX as u64 {
                        return bad(format!("n_max {} too large", self.n_max));
                    }
                }
                for w in [self.fit_window, self.log_fit_window].into_iter().flatten() {
                    if w.0 > w.1 || w.0 < self.n_min.max(1) || w.1 > self.n_max {
                        return bad(format!(
                            "fit window {}:{} not inside the scanned range {}..={}",
                            w.0, w.1, self.n_min, self.n_max
                        ));
                    }
                }
            }
            ExperimentKind::Photon => {
                if self.state_pairs.is_empty() {
                    return bad("photon table needs at least one state pair".into());
                }
            }
            ExperimentKind::Blackbody => {
                if self.temperatures.is_empty() {
                    return bad("blackbody scan needs at least one temperature".into());
                }
                if let Some(t) = self.temperatures.iter().find(|t| !(**t > 0.0 && t.is_finite())) {
                    return bad(format!("temperatures must be > 0, got {t}"));
                }
            }
        }
        Ok(())
    }

    /// Scanned `n` values.
    pub fn n_values(&self) -> Vec<u64> {
        (self.n_min..=self.n_max).step_by(self.n_step.max(1) as usize).collect()
    }

    /// Short content hash identifying this spec in table metadata.
    pub fn provenance(&self) -> String {
        // serializing plain data cannot fail
        let bytes = serde_json::to_vec(self).unwrap_or_default();
        let digest = Sha256::digest(&bytes);
        let hex: String = digest.iter().take(8).map(|b| format!("{b:02x}")).collect();
        format!("qdist-core/{}+spec.{hex}", env!("CARGO_PKG_VERSION"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(ExperimentSpec::pbox_classical(20).validate().is_ok());
        assert!(ExperimentSpec::pbox_classical(20).with_n_range(5, 4, 1).validate().is_err());
        assert!(ExperimentSpec::pbox_pair(0, 20).validate().is_err());
        assert!(ExperimentSpec::osc(100).with_fit_window(50, 400).validate().is_err());
        assert!(ExperimentSpec::osc(400).with_fit_window(50, 400).validate().is_ok());
        assert!(ExperimentSpec::photon(vec![]).validate().is_err());
        assert!(ExperimentSpec::blackbody(vec![100.0, -1.0]).validate().is_err());
        assert!(ExperimentSpec::blackbody(vec![100.0]).with_tolerance(0.0).validate().is_err());
    }

    #[test]
    fn provenance_tracks_content() {
        let a = ExperimentSpec::pbox_classical(20);
        assert_eq!(a.provenance(), ExperimentSpec::pbox_classical(20).provenance());
        assert_ne!(a.provenance(), ExperimentSpec::pbox_classical(21).provenance());
    }

    #[test]
    fn n_values_respect_step() {
        let s = ExperimentSpec::osc(10).with_n_range(2, 10, 4);
        assert_eq!(s.n_values(), vec![2, 6, 10]);
    }
}
