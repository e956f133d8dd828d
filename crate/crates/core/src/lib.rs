//! Simulation and analysis toolkit for photonic subset-sum computation.
//!
//! A subset-sum instance compiles into a planar network of waveguide
//! junctions ([`network`]); light injected at the top spreads through every
//! subset route in parallel, and the intensity arriving at the bottom ports
//! encodes which sums are achievable ([`propagation`]). Deciding an instance
//! is then a threshold read-out at the target port ([`readout`]), and the
//! combinatorics behind it all is checked against exact oracles ([`ssp`]).
//! Timing, signal-to-noise and estimation-theory models of the approach live
//! in [`performance`].
//!
//! ```
//! use photonic_ssp::{build_network, propagate, OpticalParams, SspInstance};
//!
//! let inst = SspInstance::new(&[3, 7, 11], Some(10)).unwrap();
//! let network = build_network(&inst);
//! let light = propagate(&network, &OpticalParams::lossless(), 1.0).unwrap();
//! assert_eq!(light.port(10), 0.125); // one subset of eight reaches 10
//! assert_eq!(light.port(12), 0.0);   // no subset reaches 12
//! ```

pub mod error;
pub mod network;
pub mod performance;
pub mod propagation;
pub mod readout;
pub mod ssp;

pub use error::Error;
pub use network::{build_network, Branch, Edge, JunctionKind, JunctionNetwork, NetworkExport, NetworkStats, Node};
pub use performance::{
    electronic_time_s, longest_path_mm, network_time_s, CarrierModel, ElectronicModel, FisherModel,
    GeometryParams, QuantumSourceModel, RaceModel, RaceRow, SnrModel,
};
pub use propagation::{apply_noise, lossless_reference, propagate, IntensityDistribution, LossLedger, NoiseModel, OpticalParams};
pub use readout::{
    classify, max_reliable_size, tolerance_band, Answer, DecisionReport, MaxReliableSize, PortClass,
    PortReport, ThresholdBand,
};
pub use ssp::{decide, enumerate_subsets, SspInstance, SubsetCountTable};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
