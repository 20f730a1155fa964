//! TOML configuration files describing a batch of simulation studies.
//!
//! A file holds one `[run]` section (master seed, optional thread count and
//! output directory) and any number of `[[experiment]]` sections.  Unknown
//! keys are rejected so typos fail loudly.
//!
//! ```toml
//! [run]
//! seed = 20260815
//! threads = 4
//! out = "results"
//!
//! [[experiment]]
//! mode = "basic"
//! densities = ["gauss", "mixgamma"]
//! noises = ["laplace"]
//! n = [100, 500]
//! s2n = [4, 10]
//! reps = 200
//! ```
//!
//! Omitted experiment keys fall back to the catalog defaults (sample sizes
//! `[100, 250, 500, 1000, 2500]`, signal-to-noise ratios
//! `[2, 4, 10, 100, 1000]`, 1000 replications, `m = 8`, `delta = 0.1`,
//! automatic ISE method).  The density list accepts the special entry
//! `"all"` for the whole catalog.

use crate::densities::DensityId;
use crate::error::{Error, Result};
use crate::experiments::{ExperimentConfig, IseChoice, Mode};
use crate::noise::NoiseKind;
use serde::Deserialize;
use std::path::Path;

/// Top-level structure of a configuration file.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub run: RunSection,
    #[serde(default, rename = "experiment")]
    pub experiments: Vec<ExperimentSection>,
}

/// The `[run]` section.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    /// Master seed for every random channel.
    pub seed: u64,
    /// Rayon thread count (default: rayon's choice).
    #[serde(default)]
    pub threads: Option<usize>,
    /// Output directory for tables (the CLI's `--out` takes precedence).
    #[serde(default)]
    pub out: Option<String>,
}

/// One `[[experiment]]` section.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    pub mode: String,
    /// Density keys, or the single entry `"all"`.
    pub densities: Vec<String>,
    /// Noise kinds (default: laplace and gauss).
    #[serde(default)]
    pub noises: Option<Vec<String>>,
    /// Sample sizes.
    #[serde(default)]
    pub n: Option<Vec<usize>>,
    /// Signal-to-noise ratios.
    #[serde(default)]
    pub s2n: Option<Vec<f64>>,
    #[serde(default)]
    pub reps: Option<usize>,
    /// Transform size exponent.
    #[serde(default)]
    pub m: Option<u32>,
    /// Bandwidth grid step.
    #[serde(default)]
    pub delta: Option<f64>,
    /// ISE method: `auto`, `e1` or `e2`.
    #[serde(default)]
    pub ise: Option<String>,
    /// AR coefficient for the dependent mode.
    #[serde(default)]
    pub dependence_a: Option<f64>,
    /// Bandwidth cap of the model grid.
    #[serde(default)]
    pub ell_max: Option<f64>,
    /// Penalty cap of the model grid.
    #[serde(default)]
    pub pen_max: Option<f64>,
    /// Interval-ISE grid size.
    #[serde(default)]
    pub e1_points: Option<usize>,
}

impl ConfigFile {
    /// Parse a TOML string.
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::config(format!("invalid config file: {e}")))
    }

    /// Read and parse a file.
    pub fn from_path<P: AsRef<Path>>(path: P) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        ConfigFile::parse(&text)
    }

    /// Resolve every experiment section into a runnable config, sharing the
    /// master seed of the `[run]` section.
    pub fn experiment_configs(&self) -> Result<Vec<ExperimentConfig>> {
        self.experiments
            .iter()
            .map(|s| s.resolve(self.run.seed))
            .collect()
    }
}

impl ExperimentSection {
    /// Resolve this section against the catalog defaults.
    pub fn resolve(&self, master_seed: u64) -> Result<ExperimentConfig> {
        let mode = Mode::parse(&self.mode)?;
        let mut cfg = ExperimentConfig::new(mode);
        cfg.master_seed = master_seed;

        if self.densities.len() == 1 && self.densities[0] == "all" {
            cfg.densities = DensityId::ALL.to_vec();
        } else {
            cfg.densities = self
                .densities
                .iter()
                .map(|s| DensityId::parse(s))
                .collect::<Result<Vec<_>>>()?;
        }
        cfg.noises = match &self.noises {
            Some(list) => list
                .iter()
                .map(|s| NoiseKind::parse(s))
                .collect::<Result<Vec<_>>>()?,
            None => vec![NoiseKind::Laplace, NoiseKind::Gaussian],
        };
        if let Some(n) = &self.n {
            cfg.n_values = n.clone();
        }
        if let Some(s2n) = &self.s2n {
            cfg.s2n_values = s2n.clone();
        }
        if let Some(reps) = self.reps {
            cfg.reps = reps;
        }
        if let Some(m) = self.m {
            cfg.m_exp = m;
        }
        if let Some(delta) = self.delta {
            cfg.delta_grid = delta;
        }
        if let Some(ise) = &self.ise {
            cfg.ise = IseChoice::parse(ise)?;
        }
        cfg.dependence_a = self.dependence_a;
        if let Some(ell_max) = self.ell_max {
            cfg.ell_max = ell_max;
        }
        if let Some(pen_max) = self.pen_max {
            cfg.pen_max = pen_max;
        }
        if let Some(p) = self.e1_points {
            cfg.e1_points = p;
        }
        Ok(cfg)
    }
}
