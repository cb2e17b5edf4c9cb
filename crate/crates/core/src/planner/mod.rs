//! Resource planning for a target additive precision ε at confidence 1−δ.
//!
//! All budgets follow from the Gaussian approximation of the estimator with
//! variance `1/I(a)`, where `I(a) = N_shot S2² / (a(1-a))` is the Fisher
//! information of the measurement record.

mod erf;

use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

pub use self::erf::{erf, erfc, erfinv};
use crate::schedules::{self, Schedule};
use crate::{Error, Result};

/// Default number of grid points per unit of `1/ε`.
pub const DEFAULT_GRID_MULTIPLIER: f64 = 3.0;
/// Default logarithmic spread coefficient for depth jittering.
pub const DEFAULT_SPREAD_COEFF: f64 = 2.0;

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon < 0.5 {
        Ok(())
    } else {
        Err(Error::domain("epsilon", epsilon, "(0, 0.5)"))
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta < 1.0 {
        Ok(())
    } else {
        Err(Error::domain("delta", delta, "(0, 1)"))
    }
}

fn check_open_unit(name: &'static str, a: f64) -> Result<()> {
    if a > 0.0 && a < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(name, a, "(0, 1)"))
    }
}

/// Fisher information needed so that `|ã - a| <= ε` holds with probability
/// `1 - δ` under the Gaussian approximation: `2 erfinv²(1-δ) / ε²`.
pub fn required_fisher(epsilon: f64, delta: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::domain("epsilon", epsilon, "(0, inf)"));
    }
    check_delta(delta)?;
    let z = erfinv(1.0 - delta)?;
    Ok(2.0 * z * z / (epsilon * epsilon))
}

/// Shots per (unit-fraction) depth needed to reach `epsilon` with failure
/// probability `delta`.
///
/// With `a` given the budget is `a(1-a)` times the required Fisher
/// information over `S2²`; without it the worst case `a = 0.5` is used.
pub fn required_shots(
    epsilon: f64,
    delta: f64,
    schedule: &Schedule,
    a: Option<f64>,
) -> Result<u64> {
    check_epsilon(epsilon)?;
    check_delta(delta)?;
    let variance = match a {
        Some(a) => {
            check_open_unit("a", a)?;
            a * (1.0 - a)
        }
        None => 0.25,
    };
    let shots = variance * required_fisher(epsilon, delta)? / schedules::s2_squared(schedule);
    Ok(ceil_count(shots).max(1))
}

/// Ceiling of a computed count that ignores a few ulps of excess, so an
/// exact integer carrying rounding noise is not bumped to the next one.
pub(crate) fn ceil_count(x: f64) -> u64 {
    libm::ceil(x * (1.0 - 8.0 * f64::EPSILON)) as u64
}

/// Total calls to the state-preparation routine:
/// `Σ_j ceil(F_j n_shot) (2 d_j + 1)`.
pub fn total_calls(schedule: &Schedule, n_shot: u64) -> u64 {
    schedule
        .iter()
        .map(|(d, f)| f.ceil_mul(n_shot) * (2 * d + 1))
        .sum()
}

/// `S2² / S1`: reduction in calls relative to classical sampling at equal
/// precision.
pub fn speedup_factor(schedule: &Schedule) -> f64 {
    schedules::s2_squared(schedule) / schedules::s1(schedule)
}

pub fn fisher_info(a: f64, schedule: &Schedule, n_shot: u64) -> Result<f64> {
    check_open_unit("a", a)?;
    Ok(n_shot as f64 * schedules::s2_squared(schedule) / (a * (1.0 - a)))
}

/// Root-mean-square additive error predicted by the Fisher information.
pub fn expected_avg_error(a: f64, schedule: &Schedule, n_shot: u64) -> Result<f64> {
    check_open_unit("a", a)?;
    if n_shot == 0 {
        return Err(Error::InvalidArgument("n_shot must be >= 1"));
    }
    Ok(libm::sqrt(a * (1.0 - a) / n_shot as f64) / schedules::s2(schedule))
}

/// Fisher information about `a` carried by a single shot at `depth`.
pub fn single_shot_fisher(a: f64, depth: u64) -> Result<f64> {
    check_open_unit("a", a)?;
    let w = (2 * depth + 1) as f64;
    Ok(w * w / (a * (1.0 - a)))
}

/// Amplitudes `sin²(kπ / (2(2d+1)))`, `k = 0..=2d+1`, at which depth `d`
/// yields good states with probability exactly 0 or 1.
pub fn exceptional_values(d: u64) -> Vec<f64> {
    let m = 2 * d + 1;
    (0..=m)
        .map(|k| {
            // sin(π/2) rounds to 1 anyway; pin the endpoint explicitly.
            if k == m {
                1.0
            } else {
                let x = FRAC_PI_2 * (k as f64 / m as f64);
                let s = libm::sin(x);
                s * s
            }
        })
        .collect()
}

/// Everything needed to run one estimation to a target precision.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Plan {
    pub epsilon: f64,
    pub delta: f64,
    pub max_depth: u64,
    pub schedule: Schedule,
    pub n_shot: u64,
    pub n_calls: u64,
    pub grid_size: u64,
    pub grid_multiplier: f64,
}

/// Plans an estimation with the base-ν exponential schedule ending at
/// `max_depth` (`{0}` when it is 0), optionally depth-jittered.
pub fn make_plan(
    epsilon: f64,
    delta: f64,
    max_depth: u64,
    jittered: bool,
    spread_coeff: f64,
) -> Result<Plan> {
    make_plan_with_grid(
        epsilon,
        delta,
        max_depth,
        jittered,
        spread_coeff,
        DEFAULT_GRID_MULTIPLIER,
    )
}

pub fn make_plan_with_grid(
    epsilon: f64,
    delta: f64,
    max_depth: u64,
    jittered: bool,
    spread_coeff: f64,
    grid_multiplier: f64,
) -> Result<Plan> {
    check_epsilon(epsilon)?;
    check_delta(delta)?;
    if !(grid_multiplier.is_finite() && grid_multiplier > 0.0) {
        return Err(Error::domain(
            "grid_multiplier",
            grid_multiplier,
            "(0, inf)",
        ));
    }
    let schedule = if max_depth == 0 {
        Schedule::custom(alloc::vec![0])?
    } else {
        let base = schedules::build_exp_nu(max_depth)?;
        if jittered {
            base.jitter(spread_coeff)?
        } else {
            base
        }
    };
    let n_shot = required_shots(epsilon, delta, &schedule, None)?;
    let n_calls = total_calls(&schedule, n_shot);
    Ok(Plan {
        epsilon,
        delta,
        max_depth,
        schedule,
        n_shot,
        n_calls,
        grid_size: grid_size(epsilon, grid_multiplier),
        grid_multiplier,
    })
}

/// `ceil(multiplier / ε)`, at least 2.
pub fn grid_size(epsilon: f64, multiplier: f64) -> u64 {
    (libm::ceil(multiplier / epsilon) as u64).max(2)
}
