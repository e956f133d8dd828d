//! Timing, signal, and estimation models for the computing race.
//!
//! The photonic answer arrives when light has traversed the longest route —
//! the all-include staircase — so its time is geometric: route length over
//! carrier speed. Electronic enumeration pays for every subset. Comparing the
//! two as instance size grows gives each electronic platform a crossover
//! size, past which the network wins. The signal-side models track how the
//! per-port intensity fades with size (SNR), what that costs an estimator
//! (Fisher information and the Cramér–Rao bound), and what a single-photon
//! source does to the clock.

use serde::{Deserialize, Serialize};

use crate::ssp::{sum_of_first_primes, SspInstance};
use crate::{Error, Result};

/// Physical layout of the junction grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GeometryParams {
    /// Row-to-row spacing, mm.
    pub node_pitch_mm: f64,
    /// Diagonal length per row descended, relative to the pitch.
    pub diagonal_factor: f64,
    /// Extra guide length through a split coupler, mm.
    pub split_coupling_mm: f64,
    /// Extra guide length through a converge coupler, mm.
    pub converge_coupling_mm: f64,
}

impl Default for GeometryParams {
    fn default() -> Self {
        GeometryParams {
            node_pitch_mm: 0.05,
            diagonal_factor: std::f64::consts::SQRT_2,
            split_coupling_mm: 1.8,
            converge_coupling_mm: 3.3,
        }
    }
}

impl GeometryParams {
    /// Checks all lengths are finite and positive.
    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("node_pitch_mm", self.node_pitch_mm),
            ("diagonal_factor", self.diagonal_factor),
        ] {
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::InvalidParams(format!("{name} must be positive, got {value}")));
            }
        }
        for (name, value) in [
            ("split_coupling_mm", self.split_coupling_mm),
            ("converge_coupling_mm", self.converge_coupling_mm),
        ] {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::InvalidParams(format!("{name} must be non-negative, got {value}")));
            }
        }
        Ok(())
    }
}

/// What carries the signal through the network, and how fast.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CarrierModel {
    /// Label used in reports.
    pub name: String,
    /// Propagation speed, mm per second.
    pub speed_mm_per_s: f64,
}

impl CarrierModel {
    /// Light in a silica guide: 2×10¹¹ mm/s.
    pub fn photon() -> Self {
        CarrierModel { name: "photon".into(), speed_mm_per_s: 2e11 }
    }

    /// Actin filaments on myosin, the biological comparator: 5×10⁻³ mm/s.
    pub fn actin() -> Self {
        CarrierModel { name: "actin".into(), speed_mm_per_s: 5e-3 }
    }

    /// Checks the speed is finite and positive.
    pub fn validate(&self) -> Result<()> {
        if !self.speed_mm_per_s.is_finite() || self.speed_mm_per_s <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "carrier speed must be positive, got {}",
                self.speed_mm_per_s
            )));
        }
        Ok(())
    }
}

/// An electronic platform enumerating subsets one by one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElectronicModel {
    /// Label used in reports.
    pub name: String,
    /// Sustained floating-point rate, operations per second.
    pub flops: f64,
    /// Arithmetic operations booked per element per subset.
    pub ops_coefficient: f64,
}

impl ElectronicModel {
    /// A single desktop-class core.
    pub fn cpu() -> Self {
        ElectronicModel { name: "cpu".into(), flops: 8e11, ops_coefficient: 1.0 }
    }

    /// A commodity accelerator.
    pub fn gpu() -> Self {
        ElectronicModel { name: "gpu".into(), flops: 5e13, ops_coefficient: 1.0 }
    }

    /// A leadership-class machine at peak.
    pub fn supercomputer() -> Self {
        ElectronicModel { name: "supercomputer".into(), flops: 2e18, ops_coefficient: 1.0 }
    }

    /// Checks rates are finite and positive.
    pub fn validate(&self) -> Result<()> {
        if !self.flops.is_finite() || self.flops <= 0.0 {
            return Err(Error::InvalidParams(format!("flops must be positive, got {}", self.flops)));
        }
        if !self.ops_coefficient.is_finite() || self.ops_coefficient <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "ops_coefficient must be positive, got {}",
                self.ops_coefficient
            )));
        }
        Ok(())
    }
}

/// Length of the longest route, the all-include staircase: every element
/// descended diagonally, plus one split and one converge coupler per block.
pub fn longest_path_mm(inst: &SspInstance, geometry: &GeometryParams) -> f64 {
    let diagonal_rows = inst.total() as f64;
    let blocks = inst.size() as f64;
    diagonal_rows * geometry.node_pitch_mm * geometry.diagonal_factor
        + blocks * (geometry.split_coupling_mm + geometry.converge_coupling_mm)
}

/// Wall-clock for the network's answer: longest route over carrier speed.
pub fn network_time_s(inst: &SspInstance, geometry: &GeometryParams, carrier: &CarrierModel) -> Result<f64> {
    geometry.validate()?;
    carrier.validate()?;
    Ok(longest_path_mm(inst, geometry) / carrier.speed_mm_per_s)
}

/// Wall-clock for exhaustive electronic enumeration of `n` elements:
/// `ops_coefficient · n · 2^(n-1) / flops`.
pub fn electronic_time_s(n: u32, model: &ElectronicModel) -> Result<f64> {
    model.validate()?;
    if n == 0 {
        return Err(Error::InvalidParams("instance size must be at least 1".into()));
    }
    Ok(model.ops_coefficient * n as f64 * 2f64.powi(n as i32 - 1) / model.flops)
}

/// Emission behaviour of a single-photon source: one usable photon every
/// `slot_multiplier` clock slots, stretching the network's wall-clock by the
/// same factor (a lower bound — detection overheads only add to it).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuantumSourceModel {
    /// Clock-slot stretch factor, at least 1.
    pub slot_multiplier: f64,
}

impl Default for QuantumSourceModel {
    fn default() -> Self {
        QuantumSourceModel { slot_multiplier: 1.0 }
    }
}

impl QuantumSourceModel {
    /// Checks the multiplier is at least 1.
    pub fn validate(&self) -> Result<()> {
        if !self.slot_multiplier.is_finite() || self.slot_multiplier < 1.0 {
            return Err(Error::InvalidParams(format!(
                "slot_multiplier must be at least 1, got {}",
                self.slot_multiplier
            )));
        }
        Ok(())
    }

    /// Network time when fed by this source.
    pub fn stretched_time_s(&self, classical_time_s: f64) -> f64 {
        self.slot_multiplier * classical_time_s
    }
}

/// Per-port signal-to-noise in dB as a function of instance size:
/// `snr(N) = c1·N + c2·S(N) + 10·log10(input/noise)`, with `S(N)` the sum of
/// the first `N` primes (the scaling family's element total).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SnrModel {
    /// dB per element: the splitting cost.
    pub c1: f64,
    /// dB per unit of element total: the length cost.
    pub c2: f64,
    /// Injected power, W.
    pub input_power: f64,
    /// Detector noise power, W.
    pub noise_power: f64,
}

impl Default for SnrModel {
    fn default() -> Self {
        SnrModel { c1: -3.212, c2: -0.0252, input_power: 1.0, noise_power: 1.0 }
    }
}

impl SnrModel {
    /// Checks powers are positive and coefficients finite.
    pub fn validate(&self) -> Result<()> {
        if !self.c1.is_finite() || !self.c2.is_finite() {
            return Err(Error::InvalidParams("snr coefficients must be finite".into()));
        }
        for (name, value) in [("input_power", self.input_power), ("noise_power", self.noise_power)] {
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::InvalidParams(format!("{name} must be positive, got {value}")));
            }
        }
        Ok(())
    }

    /// The constant term, `10·log10(input/noise)` dB.
    pub fn offset_db(&self) -> f64 {
        10.0 * (self.input_power / self.noise_power).log10()
    }

    /// SNR in dB for the size-`n` successive-primes instance.
    pub fn snr_db(&self, n: u32) -> Result<f64> {
        self.validate()?;
        if n == 0 {
            return Err(Error::InvalidParams("instance size must be at least 1".into()));
        }
        Ok(self.c1 * n as f64 + self.c2 * sum_of_first_primes(n) as f64 + self.offset_db())
    }

    /// Detection probability per trial at size `n`: the SNR mapped back to a
    /// linear ratio, `θ(n) = 10^(snr/10)`. Sizes whose SNR is non-negative
    /// would give `θ ≥ 1`, which is not a probability; they are rejected.
    pub fn theta(&self, n: u32) -> Result<f64> {
        let snr = self.snr_db(n)?;
        let theta = 10f64.powf(snr / 10.0);
        if snr >= 0.0 {
            return Err(Error::ThetaOutOfRange { value: theta });
        }
        Ok(theta)
    }
}

/// Estimating a detection probability `θ` from `trials` Bernoulli read-outs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FisherModel {
    /// The probability being estimated.
    pub theta: f64,
    /// Number of independent read-outs.
    pub trials: u64,
}

impl FisherModel {
    /// Checks `theta` is an interior probability and trials is positive.
    pub fn validate(&self) -> Result<()> {
        if !self.theta.is_finite() || self.theta <= 0.0 || self.theta >= 1.0 {
            return Err(Error::ThetaOutOfRange { value: self.theta });
        }
        if self.trials == 0 {
            return Err(Error::InvalidParams("trials must be at least 1".into()));
        }
        Ok(())
    }

    /// Fisher information of one Bernoulli trial: `1 / (θ(1-θ))`.
    pub fn information(&self) -> Result<f64> {
        self.validate()?;
        Ok(1.0 / (self.theta * (1.0 - self.theta)))
    }

    /// Cramér–Rao lower bound on estimator variance: `θ(1-θ) / trials`.
    pub fn variance_bound(&self) -> Result<f64> {
        self.validate()?;
        Ok(self.theta * (1.0 - self.theta) / self.trials as f64)
    }
}

/// The full field for the computing race: one network, two carriers, three
/// electronic platforms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RaceModel {
    /// Grid layout shared by both carriers.
    pub geometry: GeometryParams,
    /// The photonic runner.
    pub photon: CarrierModel,
    /// The molecular-motor runner on the same layout.
    pub molecular: CarrierModel,
    /// Desktop core.
    pub cpu: ElectronicModel,
    /// Accelerator.
    pub gpu: ElectronicModel,
    /// Leadership machine.
    pub supercomputer: ElectronicModel,
}

impl Default for RaceModel {
    fn default() -> Self {
        RaceModel {
            geometry: GeometryParams::default(),
            photon: CarrierModel::photon(),
            molecular: CarrierModel::actin(),
            cpu: ElectronicModel::cpu(),
            gpu: ElectronicModel::gpu(),
            supercomputer: ElectronicModel::supercomputer(),
        }
    }
}

/// One row of the race table: times for the size-`n` successive-primes instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RaceRow {
    /// Instance size.
    pub n: u32,
    /// Photonic network time, s.
    pub photonic_s: f64,
    /// Molecular-motor network time, s.
    pub molecular_s: f64,
    /// Desktop enumeration time, s.
    pub cpu_s: f64,
    /// Accelerator enumeration time, s.
    pub gpu_s: f64,
    /// Leadership-machine enumeration time, s.
    pub super_s: f64,
}

impl RaceModel {
    /// Times every runner on the size-`n` successive-primes instance.
    pub fn row(&self, n: u32) -> Result<RaceRow> {
        let inst = SspInstance::successive_primes(n)?;
        Ok(RaceRow {
            n,
            photonic_s: network_time_s(&inst, &self.geometry, &self.photon)?,
            molecular_s: network_time_s(&inst, &self.geometry, &self.molecular)?,
            cpu_s: electronic_time_s(n, &self.cpu)?,
            gpu_s: electronic_time_s(n, &self.gpu)?,
            super_s: electronic_time_s(n, &self.supercomputer)?,
        })
    }

    /// Smallest size at which the photonic runner beats `platform`, searching
    /// up to `cap`. Errors with [`Error::NoCrossover`] if it never does.
    pub fn crossover_size(&self, platform: &ElectronicModel, cap: u32) -> Result<u32> {
        for n in 1..=cap {
            let inst = SspInstance::successive_primes(n)?;
            let photonic = network_time_s(&inst, &self.geometry, &self.photon)?;
            if photonic < electronic_time_s(n, platform)? {
                return Ok(n);
            }
        }
        Err(Error::NoCrossover { cap })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() < tol, "{a} vs {b}");
    }

    #[test]
    fn longest_path_is_the_staircase() {
        let geometry = GeometryParams::default();
        let inst = SspInstance::new(&[2, 5, 7, 9], None).unwrap();
        // 23 diagonal rows at 50 µm·√2 plus four coupler pairs.
        close(longest_path_mm(&inst, &geometry), 23.0 * 0.05 * std::f64::consts::SQRT_2 + 4.0 * 5.1, 1e-12);
        let single = SspInstance::new(&[5], None).unwrap();
        close(longest_path_mm(&single, &geometry), 5.0 * 0.05 * std::f64::consts::SQRT_2 + 5.1, 1e-12);
    }

    #[test]
    fn network_times_for_the_demonstrator_instances() {
        let geometry = GeometryParams::default();
        let photon = CarrierModel::photon();
        let a = SspInstance::new(&[2, 5, 7, 9], None).unwrap();
        let b = SspInstance::new(&[3, 7, 9, 11], None).unwrap();
        let ta = network_time_s(&a, &geometry, &photon).unwrap();
        let tb = network_time_s(&b, &geometry, &photon).unwrap();
        close(ta, 1.101317279836453e-10, 1e-22);
        close(tb, 1.126066017177982e-10, 1e-22);
        assert!(ta < 1e-9 && tb < 1e-9, "demonstrators answer inside a nanosecond");
        // The same chip driven by molecular motors takes over an hour.
        let tm = network_time_s(&a, &geometry, &CarrierModel::actin()).unwrap();
        assert!(tm > 3600.0, "molecular time {tm}");
    }

    #[test]
    fn electronic_times_follow_the_enumeration_formula() {
        let cpu = ElectronicModel::cpu();
        close(electronic_time_s(4, &cpu).unwrap(), 4.0 * 8.0 / 8e11, 1e-24);
        assert!(electronic_time_s(0, &cpu).is_err());
        // Booking twice the work doubles the clock.
        let padded = ElectronicModel { ops_coefficient: 2.0, ..cpu };
        close(electronic_time_s(4, &padded).unwrap(), 2.0 * 4.0 * 8.0 / 8e11, 1e-24);
    }

    #[test]
    fn crossover_sizes_per_platform() {
        let race = RaceModel::default();
        assert_eq!(race.crossover_size(&race.cpu, 64).unwrap(), 6);
        assert_eq!(race.crossover_size(&race.gpu, 64).unwrap(), 12);
        assert_eq!(race.crossover_size(&race.supercomputer, 64).unwrap(), 28);
        // A hopeless cap reports the search bound.
        assert_eq!(race.crossover_size(&race.supercomputer, 10), Err(Error::NoCrossover { cap: 10 }));
    }

    #[test]
    fn race_rows_are_consistent() {
        let race = RaceModel::default();
        let row = race.row(6).unwrap();
        assert!(row.photonic_s < row.cpu_s, "photonic wins at its cpu crossover");
        assert!(row.photonic_s < row.molecular_s);
        assert!(row.super_s < row.gpu_s && row.gpu_s < row.cpu_s);
    }

    #[test]
    fn snr_declines_with_size() {
        let model = SnrModel::default();
        close(model.snr_db(1).unwrap(), -3.212 - 0.0252 * 2.0, 1e-12);
        // S(4) = 17.
        close(model.snr_db(4).unwrap(), -3.212 * 4.0 - 0.0252 * 17.0, 1e-12);
        assert!(model.snr_db(10).unwrap() < model.snr_db(4).unwrap());
        // A hotter source shifts the whole curve up by its dB ratio.
        let hot = SnrModel { input_power: 100.0, ..model };
        close(hot.snr_db(4).unwrap(), model.snr_db(4).unwrap() + 20.0, 1e-12);
    }

    #[test]
    fn theta_is_a_probability_or_an_error() {
        let model = SnrModel::default();
        close(model.theta(4).unwrap(), 0.047028377970917364, 1e-15);
        // A strong enough source pushes SNR past 0 dB: no valid θ.
        let blinding = SnrModel { input_power: 1e6, ..model };
        assert!(matches!(blinding.theta(1), Err(Error::ThetaOutOfRange { .. })));
    }

    #[test]
    fn fisher_information_and_the_bound() {
        let model = FisherModel { theta: 0.3, trials: 10_000 };
        close(model.information().unwrap(), 1.0 / 0.21, 1e-12);
        close(model.variance_bound().unwrap(), 2.1e-5, 1e-18);
        // Information blows up at the edges of the interval.
        let edge = FisherModel { theta: 1e-6, trials: 1 };
        assert!(edge.information().unwrap() > 0.99e6);
        assert!(FisherModel { theta: 1.0, trials: 1 }.validate().is_err());
        assert!(FisherModel { theta: 0.3, trials: 0 }.validate().is_err());
    }

    #[test]
    fn quantum_source_stretches_the_clock() {
        let q = QuantumSourceModel { slot_multiplier: 4.0 };
        close(q.stretched_time_s(1e-10), 4e-10, 1e-24);
        assert!(QuantumSourceModel { slot_multiplier: 0.5 }.validate().is_err());
    }
}
