use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};

use secmux::dmic::DiscreteInstance;
use secmux::gaussian::{GaussianIC, RegionKind};
use secmux::prob::Rho;
use secmux::sweep::SweepConfig;
use secmux::verify::{Suite, VerifyConfig};
use secmux::Execution;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Workflow {
    Region,
    Verify,
    Simulate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    #[default]
    Nats,
    Bits,
}

impl Units {
    /// Multiplier from nats.
    pub fn scale(self) -> f64 {
        match self {
            Units::Nats => 1.0,
            Units::Bits => 1.0 / std::f64::consts::LN_2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Units::Nats => "nats",
            Units::Bits => "bits",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InstanceSpec {
    #[default]
    Reference,
    Custom(Box<DiscreteInstance>),
}

impl InstanceSpec {
    pub fn resolve(&self) -> DiscreteInstance {
        match self {
            InstanceSpec::Reference => DiscreteInstance::reference(),
            InstanceSpec::Custom(inst) => (**inst).clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulateConfig {
    pub instance: InstanceSpec,
    pub samples: usize,
    /// Back-off `δ` between the channel-code rate and `log|C_1|/n`, nats.
    pub delta: f64,
}

impl Default for SimulateConfig {
    fn default() -> Self {
        Self {
            instance: InstanceSpec::Reference,
            samples: 200,
            delta: 0.01,
        }
    }
}

/// Everything a run needs. Loaded from JSON, then overridden by flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workflow: Option<Workflow>,
    #[serde(default = "default_channel")]
    pub channel: GaussianIC,
    #[serde(default = "default_regions")]
    pub regions: Vec<RegionKind>,
    #[serde(default)]
    pub sweep: SweepConfig,
    #[serde(default)]
    pub units: Units,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_rho")]
    pub rho: Vec<f64>,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub execution: Execution,
    #[serde(default)]
    pub verify: VerifyConfig,
    #[serde(default = "default_suites")]
    pub suites: Vec<Suite>,
    #[serde(default)]
    pub simulate: SimulateConfig,
}

fn default_channel() -> GaussianIC {
    GaussianIC {
        tau1: 0.2,
        tau2: 0.2,
        p1: 10.0,
        p2: 10.0,
    }
}

fn default_regions() -> Vec<RegionKind> {
    RegionKind::ALL.to_vec()
}

fn default_rho() -> Vec<f64> {
    (1..=9).map(|k| k as f64 / 10.0).collect()
}

fn default_suites() -> Vec<Suite> {
    Suite::ALL.to_vec()
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            schema: SCHEMA_VERSION,
            workflow: None,
            channel: default_channel(),
            regions: default_regions(),
            sweep: SweepConfig::default(),
            units: Units::Nats,
            seed: 0,
            rho: default_rho(),
            out: None,
            execution: Execution::Parallel,
            verify: VerifyConfig::default(),
            suites: default_suites(),
            simulate: SimulateConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        if !path.is_file() {
            bail!("config file {} does not exist", path.display());
        }
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let cfg: RunConfig =
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        Ok(cfg)
    }

    pub fn validate(&self, workflow: Workflow) -> anyhow::Result<()> {
        if self.schema != SCHEMA_VERSION {
            bail!("unsupported config schema {} (expected {SCHEMA_VERSION})", self.schema);
        }
        if let Some(w) = self.workflow {
            if w != workflow {
                bail!("config is for workflow {w:?}, command is {workflow:?}");
            }
        }
        if self.rho.is_empty() {
            bail!("rho grid is empty");
        }
        if let Some(r) = self.rho.iter().find(|r| !(**r > 0.0 && **r < 1.0)) {
            bail!("rho grid value {r} outside (0, 1)");
        }
        match workflow {
            Workflow::Region => {
                self.channel.validate()?;
                self.sweep.validate()?;
                if self.regions.is_empty() {
                    bail!("no region kinds requested");
                }
            }
            Workflow::Verify => {
                if self.suites.is_empty() {
                    bail!("no suites selected");
                }
            }
            Workflow::Simulate => {
                self.simulate.instance.resolve().validate()?;
                if self.simulate.samples == 0 {
                    bail!("samples must be positive");
                }
                if self.simulate.delta.is_nan() || self.simulate.delta <= 0.0 {
                    bail!("delta must be positive");
                }
            }
        }
        Ok(())
    }

    pub fn rho_grid(&self) -> anyhow::Result<Vec<Rho>> {
        Ok(self.rho.iter().map(|&r| Rho::new(r)).collect::<Result<_, _>>()?)
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("out"))
    }
}
