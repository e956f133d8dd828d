//! Intensity propagation through a junction network.
//!
//! Light is tracked as classical intensity on every edge, visiting nodes in
//! topological order (which node order already is). Streams that meet add
//! incoherently — plain intensity sums, no phase — and every fraction that
//! leaves the guided paths is charged to a named ledger category, so that
//! `input = Σ ports + Σ ledger` holds to rounding error for any parameter set.
//!
//! With [`OpticalParams::lossless`] the arithmetic is exact: every junction
//! multiplies by dyadic rationals only, so port intensities equal
//! `count(s) / 2^N` bit-for-bit (see [`lossless_reference`]).

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::network::{JunctionKind, JunctionNetwork};
use crate::ssp::{SspInstance, SubsetCountTable};
use crate::{Error, Result};

/// Junction behaviour knobs. All loss figures are power fractions in `[0, 1)`
/// except the propagation term, which is dB per grid row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OpticalParams {
    /// Fraction of split input sent to the diagonal (include) arm.
    pub split_diagonal_fraction: f64,
    /// Fraction of diagonal power shed at the split's bend.
    pub bend_excess_loss: f64,
    /// Fraction exchanged between the two streams at a crossing.
    pub pass_crosstalk: f64,
    /// Fraction of diagonal power left travelling straight at a converge.
    pub converge_residual: f64,
    /// Fraction of diagonal power absorbed by the converge coupler.
    pub converge_insertion_loss: f64,
    /// Propagation loss per row of travel, in dB.
    pub propagation_loss_db_per_row: f64,
    /// Route crossing leakage to a dump instead of the other stream.
    /// The physical crossing exchanges power; the dump variant is useful for
    /// worst-case budgeting because it makes loss monotone in the crosstalk.
    pub divert_crosstalk_to_stray: bool,
}

impl Default for OpticalParams {
    fn default() -> Self {
        OpticalParams::lossless()
    }
}

impl OpticalParams {
    /// The ideal benchmark: balanced splits, nothing lost anywhere.
    pub fn lossless() -> Self {
        OpticalParams {
            split_diagonal_fraction: 0.5,
            bend_excess_loss: 0.0,
            pass_crosstalk: 0.0,
            converge_residual: 0.0,
            converge_insertion_loss: 0.0,
            propagation_loss_db_per_row: 0.0,
            divert_crosstalk_to_stray: false,
        }
    }

    /// Published device figures: 5% bend loss compensated by an unbalanced
    /// split ratio `f = 1/(2-b)` (so both arms carry equal power after the
    /// bend), 24 dB crossing extinction, <3% converge residual, 0.5% converge
    /// insertion loss, 0.3 dB/cm propagation at a 50 µm row pitch.
    pub fn paper_default() -> Self {
        let bend = 0.05;
        OpticalParams {
            split_diagonal_fraction: 1.0 / (2.0 - bend),
            bend_excess_loss: bend,
            pass_crosstalk: 10f64.powf(-2.4),
            converge_residual: 0.03,
            converge_insertion_loss: 0.005,
            propagation_loss_db_per_row: 0.0015,
            divert_crosstalk_to_stray: false,
        }
    }

    /// Looks up a named preset: `lossless` or `paper-default`.
    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "lossless" => Some(OpticalParams::lossless()),
            "paper-default" => Some(OpticalParams::paper_default()),
            _ => None,
        }
    }

    /// Checks every knob is finite and within range.
    pub fn validate(&self) -> Result<()> {
        let fraction_fields = [
            ("split_diagonal_fraction", self.split_diagonal_fraction),
            ("bend_excess_loss", self.bend_excess_loss),
            ("pass_crosstalk", self.pass_crosstalk),
            ("converge_residual", self.converge_residual),
            ("converge_insertion_loss", self.converge_insertion_loss),
        ];
        for (name, value) in fraction_fields {
            if !value.is_finite() || !(0.0..1.0).contains(&value) {
                return Err(Error::InvalidParams(format!("{name} must lie in [0, 1), got {value}")));
            }
        }
        if self.split_diagonal_fraction <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "split_diagonal_fraction must be positive, got {}",
                self.split_diagonal_fraction
            )));
        }
        if self.converge_residual + self.converge_insertion_loss >= 1.0 {
            return Err(Error::InvalidParams(
                "converge_residual + converge_insertion_loss must stay below 1".into(),
            ));
        }
        if !self.propagation_loss_db_per_row.is_finite() || self.propagation_loss_db_per_row < 0.0 {
            return Err(Error::InvalidParams(format!(
                "propagation_loss_db_per_row must be non-negative, got {}",
                self.propagation_loss_db_per_row
            )));
        }
        Ok(())
    }
}

/// Where lost power went, by mechanism.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct LossLedger {
    /// Absorbed along waveguide segments.
    pub propagation: f64,
    /// Shed at split bends.
    pub bend: f64,
    /// Absorbed by converge couplers.
    pub converge_insertion: f64,
    /// Diagonal power that failed to fold at a converge.
    pub residual_sink: f64,
    /// Crossing leakage routed to a dump (divert mode only).
    pub crosstalk_stray: f64,
}

impl LossLedger {
    /// Sum over all categories.
    pub fn total(&self) -> f64 {
        self.propagation + self.bend + self.converge_insertion + self.residual_sink + self.crosstalk_stray
    }

    /// `(category, amount)` pairs in a fixed order, for reports.
    pub fn entries(&self) -> [(&'static str, f64); 5] {
        [
            ("propagation", self.propagation),
            ("bend", self.bend),
            ("converge_insertion", self.converge_insertion),
            ("residual_sink", self.residual_sink),
            ("crosstalk_stray", self.crosstalk_stray),
        ]
    }
}

/// Intensity arriving at each output port, plus the loss ledger.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntensityDistribution {
    /// Intensity by port column. Propagation fills only live ports; noise
    /// application widens this to every column in `0..=max`.
    pub port_intensity: BTreeMap<u64, f64>,
    /// Power lost on the way, by mechanism.
    pub ledger: LossLedger,
    /// Power injected at the source.
    pub input_power: f64,
}

impl IntensityDistribution {
    /// Intensity at a column; zero where nothing arrives.
    pub fn port(&self, column: u64) -> f64 {
        self.port_intensity.get(&column).copied().unwrap_or(0.0)
    }

    /// Sum of all port intensities.
    pub fn total_output(&self) -> f64 {
        self.port_intensity.values().sum()
    }

    /// Largest column that carries a value.
    pub fn max_column(&self) -> u64 {
        self.port_intensity.keys().next_back().copied().unwrap_or(0)
    }

    /// How far `input = ports + ledger` is from holding exactly.
    pub fn energy_closure_error(&self) -> f64 {
        (self.input_power - (self.total_output() + self.ledger.total())).abs()
    }
}

/// Propagates `input_power` through the network under the given parameters.
pub fn propagate(
    network: &JunctionNetwork,
    params: &OpticalParams,
    input_power: f64,
) -> Result<IntensityDistribution> {
    params.validate()?;
    if !input_power.is_finite() || input_power <= 0.0 {
        return Err(Error::InvalidParams(format!("input_power must be positive, got {input_power}")));
    }

    let edges = network.edges();
    let mut edge_power = vec![0.0f64; edges.len()];
    let mut ledger = LossLedger::default();
    let mut ports = BTreeMap::new();

    let db_per_row = params.propagation_loss_db_per_row;
    let send = |edge_power: &mut Vec<f64>, ledger: &mut LossLedger, edge: Option<u32>, power: f64| {
        let idx = edge.expect("junction arm is wired") as usize;
        let transmission = 10f64.powf(-(db_per_row * edges[idx].span_rows as f64) / 10.0);
        let arrived = power * transmission;
        ledger.propagation += power - arrived;
        edge_power[idx] = arrived;
    };

    let f = params.split_diagonal_fraction;
    for (idx, node) in network.nodes().iter().enumerate() {
        let io = network.io()[idx];
        let in_v = io.in_v.map_or(0.0, |e| edge_power[e as usize]);
        let in_d = io.in_d.map_or(0.0, |e| edge_power[e as usize]);
        match node.kind {
            JunctionKind::Input => {
                send(&mut edge_power, &mut ledger, io.out_v, input_power);
            }
            JunctionKind::Split => {
                let diagonal = f * in_v;
                let bent = diagonal * params.bend_excess_loss;
                ledger.bend += bent;
                send(&mut edge_power, &mut ledger, io.out_v, in_v - diagonal);
                send(&mut edge_power, &mut ledger, io.out_d, diagonal - bent);
            }
            JunctionKind::Pass => {
                let leak_v = in_v * params.pass_crosstalk;
                let leak_d = in_d * params.pass_crosstalk;
                if params.divert_crosstalk_to_stray {
                    ledger.crosstalk_stray += leak_v + leak_d;
                    send(&mut edge_power, &mut ledger, io.out_v, in_v - leak_v);
                    send(&mut edge_power, &mut ledger, io.out_d, in_d - leak_d);
                } else {
                    send(&mut edge_power, &mut ledger, io.out_v, in_v - leak_v + leak_d);
                    send(&mut edge_power, &mut ledger, io.out_d, in_d - leak_d + leak_v);
                }
            }
            JunctionKind::Converge => {
                let residual = in_d * params.converge_residual;
                let absorbed = in_d * params.converge_insertion_loss;
                ledger.residual_sink += residual;
                ledger.converge_insertion += absorbed;
                send(&mut edge_power, &mut ledger, io.out_v, in_v + (in_d - residual - absorbed));
            }
            JunctionKind::Output => {
                ports.insert(node.col, in_v);
            }
            JunctionKind::LossSink => {
                // Not produced by the builder; anything arriving is stray.
                ledger.crosstalk_stray += in_v + in_d;
            }
        }
    }

    Ok(IntensityDistribution { port_intensity: ports, ledger, input_power })
}

/// The ideal benchmark distribution, `count(s) / 2^N` per port, computed from
/// the counting oracle rather than the network.
pub fn lossless_reference(inst: &SspInstance) -> Result<IntensityDistribution> {
    let table = SubsetCountTable::build(inst)?;
    let denom = table.num_subsets() as f64;
    let port_intensity = table
        .achievable_sums()
        .into_iter()
        .map(|s| (s, table.count(s) as f64 / denom))
        .collect();
    Ok(IntensityDistribution { port_intensity, ledger: LossLedger::default(), input_power: 1.0 })
}

/// Detector imperfections applied on top of a propagated distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NoiseModel {
    /// Constant background added to every column's reading.
    pub noise_floor: f64,
    /// When set, readings become Poisson photon counts at this expectation
    /// scale, normalized back to intensity units.
    pub photon_budget: Option<u64>,
    /// Seed for the budgeted sampler; same seed, same readings.
    pub seed: u64,
}

impl Default for NoiseModel {
    fn default() -> Self {
        NoiseModel { noise_floor: 0.0, photon_budget: None, seed: 0 }
    }
}

impl NoiseModel {
    /// Checks the floor is a finite non-negative value and the budget positive.
    pub fn validate(&self) -> Result<()> {
        if !self.noise_floor.is_finite() || self.noise_floor < 0.0 {
            return Err(Error::InvalidParams(format!(
                "noise_floor must be non-negative, got {}",
                self.noise_floor
            )));
        }
        if self.photon_budget == Some(0) {
            return Err(Error::InvalidParams("photon_budget must be positive".into()));
        }
        Ok(())
    }
}

/// Applies detector noise, producing a reading for *every* column up to the
/// distribution's maximum.
///
/// Without a photon budget the reading is `intensity + floor`, deterministic.
/// With a budget `M`, each column reads `Poisson(M · intensity) / M + floor`,
/// drawn from a seeded generator in ascending column order, so results are
/// reproducible. Noise deliberately breaks energy closure: the floor injects
/// power and sampling redistributes it, so closure is only meaningful on the
/// pre-noise distribution.
pub fn apply_noise(dist: &IntensityDistribution, noise: &NoiseModel) -> Result<IntensityDistribution> {
    noise.validate()?;
    let max = dist.max_column();
    let mut readings = BTreeMap::new();
    match noise.photon_budget {
        None => {
            for column in 0..=max {
                readings.insert(column, dist.port(column) + noise.noise_floor);
            }
        }
        Some(budget) => {
            let mut rng = ChaCha8Rng::seed_from_u64(noise.seed);
            let scale = budget as f64;
            for column in 0..=max {
                let expectation = scale * dist.port(column);
                let counted = if expectation > 0.0 {
                    Poisson::new(expectation)
                        .map_err(|e| Error::InvalidParams(format!("photon expectation: {e}")))?
                        .sample(&mut rng)
                } else {
                    0.0
                };
                readings.insert(column, counted / scale + noise.noise_floor);
            }
        }
    }
    Ok(IntensityDistribution {
        port_intensity: readings,
        ledger: dist.ledger,
        input_power: dist.input_power,
    })
}
