//! Log-likelihood of a measurement record and its grid maximization.
//!
//! Probabilities that are exactly 0 or 1 are kept as such: an outcome that
//! is impossible under a candidate angle gives a log-likelihood of `-∞`
//! instead of a clamped finite value.

use core::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::planner::Plan;
use crate::sampler::{self, good_prob, MeasurementRecord};
use crate::{Error, Result};

/// Maximum-likelihood estimate found on a grid of angles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub theta_hat: f64,
    pub a_hat: f64,
    pub grid_index: u64,
    /// `null` in JSON when the maximum is `-∞`.
    #[serde(with = "extended_real")]
    pub log_likelihood: f64,
    pub grid_size: u64,
}

mod extended_real {
    use super::*;

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> core::result::Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> core::result::Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NEG_INFINITY))
    }
}

/// `hits ln p + (shots - hits) ln(1 - p)` for one depth, with `0 ln 0 = 0`.
pub fn log_lik_single(theta: f64, depth: u64, shots: u64, hits: u64) -> Result<f64> {
    if hits > shots {
        return Err(Error::InvalidArgument("hits exceed shots"));
    }
    Ok(log_lik_term(good_prob(theta, depth), shots, hits))
}

#[inline]
fn log_lik_term(p: f64, shots: u64, hits: u64) -> f64 {
    let misses = shots - hits;
    let mut acc = 0.0;
    if hits > 0 {
        acc += hits as f64 * libm::log(p);
    }
    if misses > 0 {
        acc += misses as f64 * libm::log1p(-p);
    }
    acc
}

/// Sum of per-depth log-likelihoods; `0` for an empty record.
pub fn log_lik(theta: f64, record: &MeasurementRecord) -> f64 {
    record
        .entries()
        .iter()
        .map(|e| log_lik_term(good_prob(theta, e.depth), e.shots, e.hits))
        .sum()
}

/// Angle of grid point `index` out of `grid_size` spanning `[0, π/2]`.
pub fn grid_theta(index: u64, grid_size: u64) -> f64 {
    FRAC_PI_2 * (index as f64 / (grid_size - 1) as f64)
}

/// Evaluates the log-likelihood at `grid_size` evenly spaced angles covering
/// `[0, π/2]` inclusive and returns the first maximizer.
pub fn grid_maximize(record: &MeasurementRecord, grid_size: u64) -> Result<Estimate> {
    if grid_size < 2 {
        return Err(Error::InvalidArgument("grid_size must be >= 2"));
    }
    let mut best_index = 0;
    let mut best = f64::NEG_INFINITY;
    for i in 0..grid_size {
        let ll = log_lik(grid_theta(i, grid_size), record);
        // Strict comparison: ties go to the smallest angle.
        if ll > best {
            best = ll;
            best_index = i;
        }
    }
    let theta_hat = grid_theta(best_index, grid_size);
    Ok(Estimate {
        theta_hat,
        a_hat: sampler::amplitude_of_theta(theta_hat),
        grid_index: best_index,
        log_likelihood: best,
        grid_size,
    })
}

/// Simulates one measurement record for `plan` at `a_true` and returns its
/// grid estimate.
pub fn run_mlqae(a_true: f64, plan: &Plan, seed: u64) -> Result<Estimate> {
    let record = sampler::draw_record(a_true, &plan.schedule, plan.n_shot, seed)?;
    grid_maximize(&record, plan.grid_size)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planner::make_plan;
    use crate::sampler::DepthCount;
    use alloc::vec;
    use alloc::vec::Vec;
    use core::f64::consts::FRAC_PI_4;
    use proptest::prelude::*;

    fn rec(entries: &[(u64, u64, u64)]) -> MeasurementRecord {
        MeasurementRecord::new(
            entries
                .iter()
                .map(|&(depth, shots, hits)| DepthCount { depth, shots, hits })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn single_depth_values() {
        assert_eq!(log_lik_single(0.0, 3, 10, 0).unwrap(), 0.0);
        let v = log_lik_single(FRAC_PI_4, 0, 10, 5).unwrap();
        assert!((v - 10.0 * 0.5f64.ln()).abs() < 1e-12);
        assert_eq!(
            log_lik_single(FRAC_PI_2, 0, 10, 9).unwrap(),
            f64::NEG_INFINITY
        );
        assert_eq!(log_lik_single(0.0, 0, 10, 1).unwrap(), f64::NEG_INFINITY);
        assert_eq!(log_lik_single(FRAC_PI_2, 0, 10, 10).unwrap(), 0.0);
        assert!(log_lik_single(0.3, 0, 3, 4).is_err());
    }

    #[test]
    fn combined_values() {
        let empty = MeasurementRecord::new(vec![]).unwrap();
        assert_eq!(log_lik(0.4, &empty), 0.0);
        let one = rec(&[(2, 40, 13)]);
        assert_eq!(log_lik(0.4, &one), log_lik_single(0.4, 2, 40, 13).unwrap());
        let two = rec(&[(0, 10, 0), (2, 40, 13)]);
        assert_eq!(log_lik(0.0, &two), f64::NEG_INFINITY);
    }

    #[test]
    fn endpoint_records() {
        let e = grid_maximize(&rec(&[(0, 100, 0)]), 1000).unwrap();
        assert_eq!((e.theta_hat, e.a_hat, e.grid_index), (0.0, 0.0, 0));
        let e = grid_maximize(&rec(&[(0, 100, 100)]), 1000).unwrap();
        assert_eq!((e.theta_hat, e.a_hat, e.grid_index), (FRAC_PI_2, 1.0, 999));
        assert!(grid_maximize(&rec(&[(0, 1, 0)]), 1).is_err());
    }

    #[test]
    fn all_impossible_record_falls_back_to_first_point() {
        // Depth 0 hit once and missed once is impossible at both endpoints
        // of a two-point grid.
        let e = grid_maximize(&rec(&[(0, 2, 1)]), 2).unwrap();
        assert_eq!(e.grid_index, 0);
        assert_eq!(e.log_likelihood, f64::NEG_INFINITY);
        let json = serde_json::to_value(e).unwrap();
        assert!(json["log_likelihood"].is_null());
        let back: Estimate = serde_json::from_value(json).unwrap();
        assert_eq!(back, e);
    }

    #[test]
    fn endpoint_runs() {
        let plan = make_plan(1e-3, 0.01, 16, false, 2.0).unwrap();
        assert_eq!(run_mlqae(0.0, &plan, 1).unwrap().a_hat, 0.0);
        assert_eq!(run_mlqae(1.0, &plan, 1).unwrap().a_hat, 1.0);
        let plan = make_plan(1e-3, 0.01, 16, true, 2.0).unwrap();
        assert_eq!(run_mlqae(0.0, &plan, 9).unwrap().a_hat, 0.0);
        assert_eq!(run_mlqae(1.0, &plan, 9).unwrap().a_hat, 1.0);
    }

    #[test]
    fn run_is_deterministic() {
        let plan = make_plan(1e-3, 0.01, 16, false, 2.0).unwrap();
        let a = run_mlqae(0.41, &plan, 1234).unwrap();
        assert_eq!(a, run_mlqae(0.41, &plan, 1234).unwrap());
    }

    #[test]
    fn depth_zero_estimate_is_monotone_in_hits() {
        let mut last = -1.0;
        for hits in 0..=50 {
            let e = grid_maximize(&rec(&[(0, 50, hits)]), 501).unwrap();
            assert!(e.a_hat >= last);
            // Within one grid step (in amplitude) of the binomial MLE.
            let step = FRAC_PI_2 / 500.0;
            assert!((e.a_hat - hits as f64 / 50.0).abs() <= step + 1e-12);
            last = e.a_hat;
        }
    }

    #[test]
    fn large_counts_never_nan() {
        let r = rec(&[
            (0, 1_000_000, 3),
            (1, 1_000_000, 999_999),
            (7, 1_000_000, 500_000),
        ]);
        for i in 0..2000 {
            let v = log_lik(grid_theta(i, 2000), &r);
            assert!(!v.is_nan());
            assert!(v.is_finite() || v == f64::NEG_INFINITY);
        }
    }

    proptest! {
        #[test]
        fn argmax_agrees_with_rescan(
            raw in proptest::collection::vec((0u64..6, 1u64..40, 0u64..40), 1..5),
            grid_size in 2u64..2000,
        ) {
            let mut entries: Vec<(u64, u64, u64)> =
                raw.into_iter().map(|(d, s, h)| (d, s, h.min(s))).collect();
            entries.sort();
            let r = rec(&entries);
            let e = grid_maximize(&r, grid_size).unwrap();
            let values: Vec<f64> = (0..grid_size).map(|i| log_lik(grid_theta(i, grid_size), &r)).collect();
            let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let first = values.iter().position(|&v| v == max).unwrap() as u64;
            prop_assert_eq!(e.grid_index, first);
            prop_assert_eq!(e.log_likelihood, max);
            prop_assert!((e.a_hat - e.theta_hat.sin().powi(2)).abs() <= 1e-15);
        }
    }
}
