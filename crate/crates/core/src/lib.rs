//! Transient dynamics of peer-to-peer file-dissemination swarms.
//!
//! Three continuous-time Markov models of a torrent (a general epidemic
//! model with free riders, its fully cooperative special case, and a
//! fixed-request-rate variant) simulated exactly, together with the two
//! analytic approximations used to cross-validate them: a linear
//! birth-death branching process for the early phase and mean-field fluid
//! limits for large populations. A control layer models a content owner
//! investing against unauthorized sharing.
//!
//! Modules:
//!
//! - [`model`]: validated parameter containers and state types
//! - [`sim`]: exact Gillespie-style simulation, ensembles, the hybrid
//!   branching-to-fluid scheme, and an exact small-N oracle
//! - [`branching`]: extinction probability, extinction-time CDF, expected
//!   extinction time of the branching approximation
//! - [`meanfield`]: fluid-limit ODEs, conserved quantity, peak and terminal
//!   torrent metrics, phase transition at theta x_c0 = 1
//! - [`fixed_rate`]: closed-form transients of the fixed-request-rate
//!   model and its two phase transitions
//! - [`control`]: expected acquisition delay and investment optimization
//! - [`report`]: cross-validation suites pinning every tolerance

pub mod branching;
pub mod control;
pub mod error;
pub mod fixed_rate;
pub mod meanfield;
pub mod model;
pub mod numerics;
pub mod report;
pub mod rng;
pub mod sim;

pub use error::{Error, Result};
pub use model::{
    ControlParams, FixedRateParams, FixedRateState, GeneralParams, GeneralState, MeanFieldState,
};
