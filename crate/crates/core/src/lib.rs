//! Simulator and optimizer for RIS-assisted multi-band heterogeneous
//! cellular networks.
//!
//! The crate models an uplink HCN (4G, two 5G bands, mmWave/THz cells whose
//! base stations carry an N×N reconfigurable intelligent surface) and
//! maximizes the system sum rate over two blocks of decision variables:
//!
//! * the user association and sub-channel allocation, solved by a
//!   transferable-utility coalition formation game ([`optim::coalition_game`]);
//! * the quantized RIS phase shifts, solved by a local discrete search
//!   ([`optim::phase_search`]).
//!
//! The two are alternated by block coordinate descent ([`optim::bcd_optimize`]).
//! Four baselines and an exhaustive traversal oracle live next to it, and
//! [`experiment`] drives parameter sweeps that write CSV/JSON results.

// `!(x > 0.0)` style checks are meant to reject NaN too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod error;
pub mod experiment;
pub mod optim;
pub mod rates;
pub mod rng;
pub mod scenario;

pub use error::{Error, Result};
pub use rates::{Assignment, EvalOptions, Evaluator, PhaseConfig, RateReport};
pub use scenario::{BandProfile, BaseStation, RisPanel, Scenario, ScenarioConfig, User};

/// Index of a base station inside a [`Scenario`].
pub type BsId = usize;
/// Index of a user inside a [`Scenario`].
pub type UserId = usize;
