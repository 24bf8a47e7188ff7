//! JSON run configuration for the `integrate` subcommand.
//!
//! The file is a single object; unknown keys are rejected so a typo cannot
//! silently fall back to a default. Range rules live in the library
//! (`MassRatio`, `MassConfig`, `Settings`); this module only decides which
//! field to blame when one of them fires.

use std::path::{Path, PathBuf};

use hill4bp::hill::MassRatio;
use hill4bp::integrate::{HillDynamics, R4bpDynamics};
use hill4bp::{Dynamics, MassConfig, R4bp, Settings, SpatialState};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemKind {
    /// Hill-type limit field at mass ratio `mu`.
    Limit,
    /// Full four-body field with masses (1 - mu - m3, mu, m3).
    Full,
}

fn default_tol() -> f64 {
    1e-12
}

fn default_max_steps() -> usize {
    1_000_000
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub problem: ProblemKind,
    pub mu: f64,
    #[serde(default)]
    pub m3: Option<f64>,
    pub state0: [f64; 6],
    pub t_span: [f64; 2],
    #[serde(default = "default_tol")]
    pub rel_tol: f64,
    #[serde(default = "default_tol")]
    pub abs_tol: f64,
    #[serde(default)]
    pub max_step: Option<f64>,
    #[serde(default = "default_max_steps")]
    pub max_steps: usize,
    #[serde(default)]
    pub samples: Option<usize>,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Failure(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
    }

    pub fn mass_ratio(&self) -> Result<MassRatio, CliError> {
        MassRatio::new(self.mu).map_err(|e| CliError::Usage(format!("config mu: {e}")))
    }

    /// The field to integrate. `full` needs `m3`; `limit` must not carry one.
    pub fn dynamics(&self) -> Result<Box<dyn Dynamics>, CliError> {
        let mu = self.mass_ratio()?;
        match (self.problem, self.m3) {
            (ProblemKind::Limit, None) => Ok(Box::new(HillDynamics::new(mu))),
            (ProblemKind::Limit, Some(_)) => Err(CliError::Usage(
                "config m3: only valid when problem = \"full\"".into(),
            )),
            (ProblemKind::Full, None) => Err(CliError::Usage(
                "config m3: required when problem = \"full\"".into(),
            )),
            (ProblemKind::Full, Some(m3)) => {
                let masses = MassConfig::with_third_mass(mu, m3)
                    .map_err(|e| CliError::Usage(format!("config m3: {e}")))?;
                let problem =
                    R4bp::new(masses).map_err(|e| CliError::Usage(format!("config m3: {e}")))?;
                Ok(Box::new(R4bpDynamics::new(problem)))
            }
        }
    }

    pub fn settings(&self) -> Result<Settings, CliError> {
        let settings = Settings {
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            max_step: self.max_step,
            max_steps: self.max_steps,
        };
        settings.validate().map_err(|e| {
            CliError::Usage(format!("config rel_tol/abs_tol/max_step/max_steps: {e}"))
        })?;
        Ok(settings)
    }

    pub fn start(&self) -> Result<SpatialState, CliError> {
        let state = SpatialState::from_array(self.state0);
        if !state.is_finite() {
            return Err(CliError::Usage(
                "config state0: all six components must be finite".into(),
            ));
        }
        Ok(state)
    }

    /// Dense sample times, evenly spaced across the span endpoints.
    pub fn sample_times(&self) -> Result<Option<Vec<f64>>, CliError> {
        match self.samples {
            None => Ok(None),
            Some(n) if n < 2 => Err(CliError::Usage(
                "config samples: need at least 2 sample times".into(),
            )),
            Some(n) => {
                let [t0, t1] = self.t_span;
                let times = (0..n)
                    .map(|k| t0 + (t1 - t0) * k as f64 / (n - 1) as f64)
                    .collect();
                Ok(Some(times))
            }
        }
    }
}
