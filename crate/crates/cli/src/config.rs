//! Run configuration: JSON schema, preset resolution, and the output header.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use photonic_ssp::{
    CarrierModel, ElectronicModel, GeometryParams, NoiseModel, OpticalParams, RaceModel, SnrModel,
    SspInstance,
};

/// The two signal carriers raced on the same layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Carriers {
    /// The photonic runner.
    pub photon: CarrierModel,
    /// The molecular-motor comparator.
    pub molecular: CarrierModel,
}

impl Default for Carriers {
    fn default() -> Self {
        Carriers { photon: CarrierModel::photon(), molecular: CarrierModel::actin() }
    }
}

/// The electronic platforms enumerating subsets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Electronics {
    /// Desktop core.
    pub cpu: ElectronicModel,
    /// Accelerator.
    pub gpu: ElectronicModel,
    /// Leadership machine.
    pub supercomputer: ElectronicModel,
}

impl Default for Electronics {
    fn default() -> Self {
        Electronics {
            cpu: ElectronicModel::cpu(),
            gpu: ElectronicModel::gpu(),
            supercomputer: ElectronicModel::supercomputer(),
        }
    }
}

/// Everything a run needs, loadable from `--config <file>` and overridable by
/// the global flags. Unknown keys and unknown preset names are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Inline instance; validated on parse.
    pub instance: Option<SspInstance>,
    /// Instance file to load instead of an inline one.
    pub instance_file: Option<PathBuf>,
    /// Optical preset name: `lossless` or `paper-default`.
    pub preset: Option<String>,
    /// Inline optical parameters; used when no preset is named.
    pub optical: Option<OpticalParams>,
    /// Detector noise applied after propagation.
    pub noise: NoiseModel,
    /// Grid layout for the timing models.
    pub geometry: GeometryParams,
    /// Carrier speeds for the race.
    pub carriers: Carriers,
    /// Electronic platforms for the race.
    pub electronics: Electronics,
    /// Signal-decay model for `analyze`.
    pub snr: SnrModel,
    /// Read-out trials per estimate in the estimator columns.
    pub trials: u64,
    /// Inclusive instance-size range for `race` and `analyze`.
    pub n_range: [u32; 2],
    /// Power injected at the source.
    pub input_power: f64,
    /// Explicit decision threshold; band midpoint when absent.
    pub threshold: Option<f64>,
    /// Where output files go.
    pub out_dir: PathBuf,
    /// Seed for budgeted noise; recorded in every output header.
    pub seed: Option<u64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            instance: None,
            instance_file: None,
            preset: None,
            optical: None,
            noise: NoiseModel::default(),
            geometry: GeometryParams::default(),
            carriers: Carriers::default(),
            electronics: Electronics::default(),
            snr: SnrModel::default(),
            trials: 10_000,
            n_range: [1, 30],
            input_power: 1.0,
            threshold: None,
            out_dir: PathBuf::from("out"),
            seed: None,
        }
    }
}

impl RunConfig {
    /// Parses a config file, rejecting unknown keys.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let config: RunConfig =
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        config.validate()?;
        Ok(config)
    }

    /// Checks preset names and numeric settings.
    pub fn validate(&self) -> Result<()> {
        if let Some(name) = &self.preset {
            if OpticalParams::preset(name).is_none() {
                bail!("unknown optical preset {name:?}; known presets: lossless, paper-default");
            }
        }
        if let Some(optical) = &self.optical {
            optical.validate()?;
        }
        self.noise.validate()?;
        self.geometry.validate()?;
        self.carriers.photon.validate()?;
        self.carriers.molecular.validate()?;
        self.electronics.cpu.validate()?;
        self.electronics.gpu.validate()?;
        self.electronics.supercomputer.validate()?;
        self.snr.validate()?;
        if self.trials == 0 {
            bail!("trials must be at least 1");
        }
        if !self.input_power.is_finite() || self.input_power <= 0.0 {
            bail!("input_power must be positive, got {}", self.input_power);
        }
        if let Some(threshold) = self.threshold {
            if !threshold.is_finite() || threshold <= 0.0 {
                bail!("threshold must be positive, got {threshold}");
            }
        }
        Ok(())
    }

    /// The optical parameters this run uses: named preset, else inline
    /// parameters, else lossless.
    pub fn optical_params(&self) -> Result<OpticalParams> {
        let params = match (&self.preset, &self.optical) {
            (Some(name), _) => OpticalParams::preset(name)
                .with_context(|| format!("unknown optical preset {name:?}"))?,
            (None, Some(inline)) => *inline,
            (None, None) => OpticalParams::lossless(),
        };
        params.validate()?;
        Ok(params)
    }

    /// The noise model with the effective seed folded in.
    pub fn noise_model(&self) -> NoiseModel {
        NoiseModel { seed: self.effective_seed(), ..self.noise }
    }

    /// Seed recorded in outputs: the `seed` setting, else the noise seed.
    pub fn effective_seed(&self) -> u64 {
        self.seed.unwrap_or(self.noise.seed)
    }

    /// The race field assembled from the config sections.
    pub fn race_model(&self) -> RaceModel {
        RaceModel {
            geometry: self.geometry,
            photon: self.carriers.photon.clone(),
            molecular: self.carriers.molecular.clone(),
            cpu: self.electronics.cpu.clone(),
            gpu: self.electronics.gpu.clone(),
            supercomputer: self.electronics.supercomputer.clone(),
        }
    }

    /// Hash of the resolved configuration, for the output headers. Two runs
    /// with equal hashes and seeds produce byte-identical outputs.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(canonical.as_bytes());
        let mut hex = String::with_capacity(16);
        for byte in &digest[..8] {
            hex.push_str(&format!("{byte:02x}"));
        }
        hex
    }
}

/// Loads the instance a command should run on.
///
/// Precedence: inline `--elements` beat `--instance <file>`, which beats the
/// config's inline instance, which beats the config's `instance_file`.
pub fn resolve_instance(
    config: &RunConfig,
    flag_elements: &[i64],
    flag_target: Option<i64>,
    flag_file: Option<&Path>,
) -> Result<SspInstance> {
    if !flag_elements.is_empty() {
        return Ok(SspInstance::new(flag_elements, flag_target)?);
    }
    if let Some(path) = flag_file {
        let inst = load_instance_file(path)?;
        return override_target(inst, flag_target);
    }
    if let Some(inst) = &config.instance {
        return override_target(inst.clone(), flag_target);
    }
    if let Some(path) = &config.instance_file {
        let inst = load_instance_file(path)?;
        return override_target(inst, flag_target);
    }
    bail!("no instance given; pass --elements, --instance <file>, or set one in the config")
}

fn load_instance_file(path: &Path) -> Result<SspInstance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(SspInstance::from_json(&text)?)
}

fn override_target(inst: SspInstance, flag_target: Option<i64>) -> Result<SspInstance> {
    match flag_target {
        None => Ok(inst),
        Some(t) => {
            let elements: Vec<i64> = inst.elements().iter().map(|&e| e as i64).collect();
            Ok(SspInstance::new(&elements, Some(t))?)
        }
    }
}
