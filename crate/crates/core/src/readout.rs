//! Threshold read-out: turning a port intensity pattern into an answer.
//!
//! A port is read as *present* when its intensity clears a threshold. The
//! usable threshold range is the gap between the brightest port that should
//! be dark and the dimmest port that should be lit; when that band closes,
//! the read-out can no longer be trusted and the answer is indeterminate.

use serde::{Deserialize, Serialize};

use crate::propagation::{apply_noise, propagate, IntensityDistribution, NoiseModel, OpticalParams};
use crate::network::build_network;
use crate::ssp::{SspInstance, SubsetCountTable};
use crate::{Error, Result};

/// The interval of thresholds that separate lit from dark ports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdBand {
    /// Brightest reading among ports the oracle says are dark.
    pub lower: f64,
    /// Dimmest reading among ports the oracle says are lit.
    pub upper: f64,
    /// Whether the band is open: `lower < upper` strictly.
    pub valid: bool,
}

impl ThresholdBand {
    /// Centre of the band; the natural threshold when the band is open.
    pub fn midpoint(&self) -> Option<f64> {
        self.valid.then(|| 0.5 * (self.lower + self.upper))
    }
}

/// Outcome of a target read-out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Answer {
    /// The target port reads lit: a subset reaches the target.
    Yes,
    /// The target port reads dark.
    No,
    /// No target, or the threshold band is closed.
    Indeterminate,
}

/// Lit-or-dark classification of one port.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PortClass {
    /// Reads at or above threshold / is an achievable sum.
    Present,
    /// Reads below threshold / is not an achievable sum.
    Absent,
}

/// One row of the per-port read-out report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PortReport {
    /// Column index, i.e. the sum this port represents.
    pub port: u64,
    /// Measured intensity.
    pub intensity: f64,
    /// What the threshold read-out concluded.
    pub class: PortClass,
    /// What the counting oracle says.
    pub oracle: PortClass,
}

/// Full read-out of a distribution against an instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionReport {
    /// The decision for the instance target, when one can be made.
    pub answer: Answer,
    /// The threshold band the distribution supports.
    pub band: ThresholdBand,
    /// Per-column classification, every column `0..=total`.
    pub ports: Vec<PortReport>,
    /// Columns where read-out and oracle disagree.
    #[serde(skip)]
    pub mismatches: Vec<u64>,
    /// The threshold the classification used.
    #[serde(skip)]
    pub threshold: f64,
}

impl DecisionReport {
    /// Serializes to the report file format.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Computes the threshold band of a distribution, judged against the oracle.
pub fn tolerance_band(dist: &IntensityDistribution, table: &SubsetCountTable) -> ThresholdBand {
    let mut lower = 0.0f64;
    let mut upper = f64::INFINITY;
    for column in 0..=table.total() {
        let reading = dist.port(column);
        if table.is_achievable(column) {
            upper = upper.min(reading);
        } else {
            lower = lower.max(reading);
        }
    }
    // Sum 0 is always achievable, so `upper` is always finite.
    ThresholdBand { lower, upper, valid: lower < upper }
}

/// Classifies every column of a distribution against `threshold` and decides
/// the instance target.
///
/// The answer is `yes`/`no` by the target port's reading when the instance
/// has a target and the band is open; otherwise `indeterminate`. Mismatches
/// list the columns where the threshold read disagrees with the oracle.
pub fn classify(
    dist: &IntensityDistribution,
    threshold: f64,
    inst: &SspInstance,
) -> Result<DecisionReport> {
    if !threshold.is_finite() || threshold <= 0.0 {
        return Err(Error::InvalidParams(format!("threshold must be positive, got {threshold}")));
    }
    let table = SubsetCountTable::build(inst)?;
    let band = tolerance_band(dist, &table);

    let mut ports = Vec::with_capacity(table.total() as usize + 1);
    let mut mismatches = Vec::new();
    for column in 0..=table.total() {
        let intensity = dist.port(column);
        let class = if intensity >= threshold { PortClass::Present } else { PortClass::Absent };
        let oracle = if table.is_achievable(column) { PortClass::Present } else { PortClass::Absent };
        if class != oracle {
            mismatches.push(column);
        }
        ports.push(PortReport { port: column, intensity, class, oracle });
    }

    let answer = match inst.target() {
        None => Answer::Indeterminate,
        Some(_) if !band.valid => Answer::Indeterminate,
        Some(target) => {
            if dist.port(target) >= threshold {
                Answer::Yes
            } else {
                Answer::No
            }
        }
    };

    Ok(DecisionReport { answer, band, ports, mismatches, threshold })
}

/// Result of the reliable-size search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaxReliableSize {
    /// Largest successive-primes instance size the read-out still resolves.
    pub size: u32,
    /// True when every size up to the cap passed; the true limit may be higher.
    pub cap_reached: bool,
}

/// Finds the largest successive-primes instance a detector can still read.
///
/// Size `n` counts as reliable when the noise floor stays strictly below the
/// dimmest lit port of the propagated distribution, and — when a photon
/// budget is set — a sampled read-out at that budget still leaves the
/// threshold band open. Sizes are tried in order; the first failure ends the
/// search.
pub fn max_reliable_size(params: &OpticalParams, noise: &NoiseModel, cap: u32) -> Result<MaxReliableSize> {
    params.validate()?;
    noise.validate()?;
    if cap == 0 {
        return Err(Error::InvalidParams("size cap must be at least 1".into()));
    }
    for n in 1..=cap {
        let inst = SspInstance::successive_primes(n)?;
        let network = build_network(&inst);
        let dist = propagate(&network, params, 1.0)?;
        let dimmest_lit = dist
            .port_intensity
            .values()
            .copied()
            .fold(f64::INFINITY, f64::min);
        let mut reliable = noise.noise_floor < dimmest_lit;
        if reliable && noise.photon_budget.is_some() {
            let table = SubsetCountTable::build(&inst)?;
            let sampled = apply_noise(&dist, noise)?;
            reliable = tolerance_band(&sampled, &table).valid;
        }
        if !reliable {
            return Ok(MaxReliableSize { size: n - 1, cap_reached: false });
        }
    }
    Ok(MaxReliableSize { size: cap, cap_reached: true })
}
