//! Maximum-likelihood quantum amplitude estimation from closed-form
//! measurement statistics.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only pure
//! computation:
//!
//! * [`schedules`]: Grover-depth schedules (exponential, base-ν exponential,
//!   polynomial, depth-jittered) and their `S1`/`S2` aggregates.
//! * [`planner`]: shot and call budgets for a target precision ε at
//!   confidence 1−δ, Fisher information, and exceptional amplitudes.
//! * [`sampler`]: analytic good-state probabilities and seeded binomial
//!   draws producing a [`MeasurementRecord`].
//! * [`likelihood`]: log-likelihood evaluation and exhaustive grid
//!   maximization.
//! * [`statevector`]: a small dense simulator of the Grover operator used to
//!   cross-check the closed-form probabilities.
//!
//! IO, the experiment harness and the CLI live in the `amplest` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
pub mod likelihood;
pub mod planner;
pub mod rng;
pub mod sampler;
pub mod schedules;
pub mod statevector;

pub use error::{Error, Result};
pub use likelihood::{grid_maximize, log_lik, log_lik_single, run_mlqae, Estimate};
pub use planner::{erf, erfinv, make_plan, Plan};
pub use rng::SplitRng;
pub use sampler::{DepthCount, MeasurementRecord};
pub use schedules::{Fraction, NuBounds, Schedule, ScheduleKind};
pub use statevector::StatePrep;
