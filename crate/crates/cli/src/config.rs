//! Run configuration: a TOML file whose every field is optional, then
//! command-line overrides on top.

use std::path::Path;

use acqdesign::dataset::SamplingRanges;
use acqdesign::designer::DesignConfig;
use acqdesign::em::{AntennaPlacement, ForwardConfig};
use acqdesign::neural::{LossKind, TrainConfig};
use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DataSection {
    pub samples: usize,
    pub seed: u64,
    pub workers: usize,
    pub rho_range: [f64; 2],
    pub distance_range: [f64; 2],
    pub dip_range: [f64; 2],
    /// "any-layer" or "host-only".
    pub placement: String,
}

impl Default for DataSection {
    fn default() -> Self {
        let r = SamplingRanges::default();
        Self {
            samples: 30_000,
            seed: 2024,
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            rho_range: [r.rho.0, r.rho.1],
            distance_range: [r.distance.0, r.distance.1],
            dip_range: [r.dip.0, r.dip.1],
            placement: "any-layer".into(),
        }
    }
}

/// Optional overrides of a network's training settings.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NetworkSection {
    pub hidden: Option<Vec<usize>>,
    pub epochs: Option<usize>,
    pub batch_size: Option<usize>,
    pub learning_rate: Option<f64>,
    pub final_lr_fraction: Option<f64>,
    pub seed: Option<u64>,
    /// "mae" or "mse".
    pub loss: Option<String>,
}

impl NetworkSection {
    pub fn resolve(&self, base: TrainConfig) -> Result<TrainConfig> {
        let loss = match self.loss.as_deref() {
            None => base.loss,
            Some("mae") => LossKind::Mae,
            Some("mse") => LossKind::Mse,
            Some(other) => bail!("unknown loss '{other}' (mae, mse)"),
        };
        let c = TrainConfig {
            hidden: self.hidden.clone().unwrap_or(base.hidden),
            epochs: self.epochs.unwrap_or(base.epochs),
            batch_size: self.batch_size.unwrap_or(base.batch_size),
            learning_rate: self.learning_rate.unwrap_or(base.learning_rate),
            final_lr_fraction: self.final_lr_fraction.unwrap_or(base.final_lr_fraction),
            seed: self.seed.unwrap_or(base.seed),
            loss,
        };
        c.validate()?;
        Ok(c)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DesignSection {
    pub initial_channel: String,
    pub threshold: f64,
    pub design_samples: usize,
    pub validation_subsample: usize,
    pub wrap_band: f64,
    /// Seed of the train/validation/test split.
    pub split_seed: u64,
}

impl Default for DesignSection {
    fn default() -> Self {
        let d = DesignConfig::default();
        Self {
            initial_channel: "lwd-short/zz".into(),
            threshold: d.threshold,
            design_samples: 30_000,
            validation_subsample: d.validation_subsample,
            wrap_band: d.wrap_band,
            split_seed: 2024,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrajectorySection {
    /// Logging-position spacing (m).
    pub spacing: f64,
}

impl Default for TrajectorySection {
    fn default() -> Self {
        Self { spacing: 1.0 }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub data: DataSection,
    pub forward: NetworkSection,
    pub inverse: NetworkSection,
    pub design: DesignSection,
    pub trajectory: TrajectorySection,
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        match path {
            None => Ok(Self::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                toml::from_str(&text).with_context(|| format!("parsing {}", p.display()))
            }
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("plain data serializes")
    }

    pub fn ranges(&self) -> Result<SamplingRanges> {
        let r = SamplingRanges {
            rho: (self.data.rho_range[0], self.data.rho_range[1]),
            distance: (self.data.distance_range[0], self.data.distance_range[1]),
            dip: (self.data.dip_range[0], self.data.dip_range[1]),
        };
        r.validate()?;
        Ok(r)
    }

    pub fn simulation(&self) -> Result<ForwardConfig> {
        let placement = match self.data.placement.as_str() {
            "any-layer" => AntennaPlacement::AnyLayer,
            "host-only" => AntennaPlacement::HostOnly,
            other => bail!("unknown placement '{other}' (any-layer, host-only)"),
        };
        Ok(ForwardConfig {
            placement,
            ..ForwardConfig::default()
        })
    }

    pub fn forward_train(&self) -> Result<TrainConfig> {
        self.forward.resolve(TrainConfig::forward_default())
    }

    pub fn inverse_train(&self) -> Result<TrainConfig> {
        self.inverse.resolve(TrainConfig::inverse_default())
    }

    pub fn design_config(&self) -> Result<DesignConfig> {
        Ok(DesignConfig {
            threshold: self.design.threshold,
            validation_subsample: self.design.validation_subsample,
            wrap_band: self.design.wrap_band,
            forward: self.forward_train()?,
            inverse: self.inverse_train()?,
            simulation: self.simulation()?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip_through_toml() {
        let c = RunConfig::default();
        let back: RunConfig = toml::from_str(&c.to_toml()).unwrap();
        assert_eq!(back, c);
        assert_eq!(c.design_config().unwrap(), DesignConfig::default());
    }

    #[test]
    fn partial_files_keep_defaults() {
        let c: RunConfig = toml::from_str("[design]\nthreshold = 0.9\n[inverse]\nepochs = 50\n").unwrap();
        assert_eq!(c.design.threshold, 0.9);
        let inv = c.inverse_train().unwrap();
        assert_eq!(inv.epochs, 50);
        assert_eq!(inv.hidden, vec![128; 5]);
        assert_eq!(c.forward_train().unwrap(), TrainConfig::forward_default());
        assert!(toml::from_str::<RunConfig>("[design]\nthreshhold = 0.9\n").is_err());
    }
}
