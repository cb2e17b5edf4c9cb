//! Ideal measurement simulation.
//!
//! A circuit with `d` Grover iterations returns a good state with probability
//! `sin²((2d+1)θ)` where `a = sin²θ`. Measurement records are drawn from the
//! corresponding binomial distributions.

use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;

use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::rng::SplitRng;
use crate::schedules::Schedule;
use crate::{Error, Result};

/// `arcsin(√a)` in `[0, π/2]`.
pub fn theta_of_amplitude(a: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::domain("a", a, "[0, 1]"));
    }
    if a == 1.0 {
        return Ok(FRAC_PI_2);
    }
    Ok(libm::asin(libm::sqrt(a)))
}

pub fn amplitude_of_theta(theta: f64) -> f64 {
    let s = libm::sin(theta);
    s * s
}

/// Probability of a good outcome after `depth` Grover iterations.
pub fn good_prob(theta: f64, depth: u64) -> f64 {
    let s = libm::sin((2 * depth + 1) as f64 * theta);
    s * s
}

/// One draw from `Binomial(n, p)`.
pub fn binomial_draw(n: u64, p: f64, rng: &mut SplitRng) -> Result<u64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain("p", p, "[0, 1]"));
    }
    if p == 0.0 || n == 0 {
        return Ok(0);
    }
    if p == 1.0 {
        return Ok(n);
    }
    let dist = Binomial::new(n, p).map_err(|_| Error::domain("p", p, "[0, 1]"))?;
    Ok(dist.sample(rng))
}

/// Good-outcome count observed at one depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthCount {
    pub depth: u64,
    pub shots: u64,
    pub hits: u64,
}

/// Per-depth counts from one estimation run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RecordRepr")]
pub struct MeasurementRecord {
    #[serde(skip_serializing_if = "Option::is_none")]
    a_true: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    entries: Vec<DepthCount>,
}

#[derive(Deserialize)]
struct RecordRepr {
    #[serde(default)]
    a_true: Option<f64>,
    #[serde(default)]
    seed: Option<u64>,
    entries: Vec<DepthCount>,
}

impl TryFrom<RecordRepr> for MeasurementRecord {
    type Error = Error;

    fn try_from(r: RecordRepr) -> Result<Self> {
        let mut rec = MeasurementRecord::new(r.entries)?;
        rec.a_true = r.a_true;
        rec.seed = r.seed;
        Ok(rec)
    }
}

impl MeasurementRecord {
    pub fn new(entries: Vec<DepthCount>) -> Result<Self> {
        if entries.iter().any(|e| e.hits > e.shots) {
            return Err(Error::InvalidArgument("hits exceed shots"));
        }
        if entries.iter().any(|e| e.shots == 0) {
            return Err(Error::InvalidArgument(
                "every entry needs at least one shot",
            ));
        }
        if !entries.windows(2).all(|w| w[0].depth <= w[1].depth) {
            return Err(Error::InvalidArgument(
                "record depths must be non-decreasing",
            ));
        }
        Ok(MeasurementRecord {
            a_true: None,
            seed: None,
            entries,
        })
    }

    pub fn entries(&self) -> &[DepthCount] {
        &self.entries
    }

    pub fn a_true(&self) -> Option<f64> {
        self.a_true
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }
}

/// Simulates one run of the schedule at amplitude `a`.
///
/// Depth `j` of the schedule receives `ceil(F_j n_shot)` shots and draws from
/// the substream `SplitRng::new(seed).split(j)`, so records do not depend on
/// evaluation order.
pub fn draw_record(
    a: f64,
    schedule: &Schedule,
    n_shot: u64,
    seed: u64,
) -> Result<MeasurementRecord> {
    if n_shot == 0 {
        return Err(Error::InvalidArgument("n_shot must be >= 1"));
    }
    let theta = theta_of_amplitude(a)?;
    let root = SplitRng::new(seed);
    let entries = schedule
        .iter()
        .enumerate()
        .map(|(j, (depth, frac))| {
            let shots = frac.ceil_mul(n_shot);
            let mut rng = root.split(j as u64);
            let hits = binomial_draw(shots, good_prob(theta, depth), &mut rng)?;
            Ok(DepthCount { depth, shots, hits })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MeasurementRecord {
        a_true: Some(a),
        seed: Some(seed),
        entries,
    })
}
