//! Desk-scale reproductions of the numerical studies: amplitude sweeps,
//! achieved-precision curves, exceptional-region scans and call-ratio
//! tables.
//!
//! Every run seed is `derive_seed(base_seed, [mode tag, point, run])`, so a
//! result depends only on the configuration and never on how work is spread
//! across threads.

use amplest_core::likelihood::{grid_maximize, run_mlqae};
use amplest_core::planner::{
    self, erfinv, exceptional_values, make_plan, make_plan_with_grid, total_calls, Plan,
    DEFAULT_GRID_MULTIPLIER, DEFAULT_SPREAD_COEFF,
};
use amplest_core::rng::{derive_seed, SplitRng};
use amplest_core::sampler::{draw_record, good_prob, theta_of_amplitude};
use amplest_core::schedules;
use amplest_core::statevector::{grover_power_prob, StatePrep};
use amplest_core::{Error, Result};
use rand_core::RngCore;
use rayon::prelude::*;
use serde::Serialize;

/// Grid multiplier used by exceptional-region scans unless overridden.
pub const REGION_GRID_MULTIPLIER: f64 = 30.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Sweep,
    PrecisionCurve,
    ExceptionalRegion,
    CallRatio,
    ExceptionalList,
}

impl Mode {
    /// Label mixed into every run seed.
    pub fn tag(self) -> u64 {
        match self {
            Mode::Sweep => 1,
            Mode::PrecisionCurve => 2,
            Mode::ExceptionalRegion => 3,
            Mode::CallRatio => 4,
            Mode::ExceptionalList => 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Amplitudes {
    List(Vec<f64>),
    /// Evenly spaced over the mode's natural range, endpoints included.
    Even(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub epsilon: f64,
    pub delta: f64,
    pub max_depth: u64,
    pub jittered: bool,
    pub spread_coeff: f64,
    /// `None` picks the mode default: 3, or 30 for exceptional-region scans.
    pub grid_multiplier: Option<f64>,
    pub amplitudes: Amplitudes,
    pub runs_per_point: usize,
    pub n_shot_list: Vec<u64>,
    /// Index `k` of the exceptional amplitude an exceptional-region scan is
    /// centred on.
    pub center_k: u64,
    pub depths: Vec<u64>,
    pub base_seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            mode: Mode::Sweep,
            epsilon: 1e-3,
            delta: 0.01,
            max_depth: 16,
            jittered: false,
            spread_coeff: DEFAULT_SPREAD_COEFF,
            grid_multiplier: None,
            amplitudes: Amplitudes::Even(2000),
            runs_per_point: 1000,
            n_shot_list: Vec::new(),
            center_k: 0,
            depths: Vec::new(),
            base_seed: 0,
        }
    }
}

impl ExperimentConfig {
    pub fn grid_multiplier(&self) -> f64 {
        self.grid_multiplier.unwrap_or(match self.mode {
            Mode::ExceptionalRegion => REGION_GRID_MULTIPLIER,
            _ => DEFAULT_GRID_MULTIPLIER,
        })
    }

    pub fn plan(&self) -> Result<Plan> {
        make_plan_with_grid(
            self.epsilon,
            self.delta,
            self.max_depth,
            self.jittered,
            self.spread_coeff,
            self.grid_multiplier(),
        )
    }

    fn seed(&self, point: usize, run: usize) -> u64 {
        derive_seed(self.base_seed, &[self.mode.tag(), point as u64, run as u64])
    }

    fn runs(&self) -> Result<usize> {
        if self.runs_per_point == 0 {
            return Err(Error::InvalidArgument("runs_per_point must be >= 1"));
        }
        Ok(self.runs_per_point)
    }
}

fn check_amplitudes(list: &[f64]) -> Result<()> {
    if list.is_empty() {
        return Err(Error::InvalidArgument("no amplitudes given"));
    }
    match list.iter().find(|a| !(0.0..=1.0).contains(*a)) {
        Some(&a) => Err(Error::InvalidArgument(if a.is_nan() {
            "amplitude is NaN"
        } else {
            "amplitude outside [0, 1]"
        })),
        None => Ok(()),
    }
}

/// `count` evenly spaced values over `[lo, hi]`; the midpoint when
/// `count == 1`.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![0.5 * (lo + hi)],
        _ => (0..count)
            .map(|i| {
                if i == count - 1 {
                    hi
                } else {
                    lo + (hi - lo) * (i as f64 / (count - 1) as f64)
                }
            })
            .collect(),
    }
}

/// Smallest ε such that at least a `1 - delta` fraction of `errors` are
/// `<= ε`: the order statistic of rank `ceil((1 - delta) R)`.
pub fn achieved_precision(errors: &[f64], delta: f64) -> Result<f64> {
    if errors.is_empty() {
        return Err(Error::InvalidArgument("no errors to summarize"));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::domain("delta", delta, "(0, 1)"));
    }
    if errors.iter().any(|e| e.is_nan() || *e < 0.0) {
        return Err(Error::InvalidArgument("errors must be non-negative"));
    }
    let mut sorted = errors.to_vec();
    sorted.sort_by(f64::total_cmp);
    let r = sorted.len();
    // Guard the product against landing a few ulps above an integer.
    let rank = ((1.0 - delta) * r as f64 * (1.0 - 1e-12)).ceil() as usize;
    Ok(sorted[rank.clamp(1, r) - 1])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub a_true: f64,
    pub a_hat: f64,
    pub abs_err: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PrecisionRow {
    pub a_true: f64,
    pub n_shot: u64,
    pub eps_achieved: f64,
    pub runs: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionRow {
    pub a_true: f64,
    pub eps_achieved: f64,
    pub runs: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CallRatioRow {
    pub d: u64,
    pub n_calls: u64,
    pub n_calls_jittered: u64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExperimentRow {
    Sweep(SweepRow),
    PrecisionCurve(PrecisionRow),
    ExceptionalRegion(RegionRow),
    CallRatio(CallRatioRow),
    Exceptional(f64),
}

/// Runs the experiment selected by `config.mode`.
pub fn run(config: &ExperimentConfig) -> Result<Vec<ExperimentRow>> {
    Ok(match config.mode {
        Mode::Sweep => sweep_amplitudes(config)?
            .into_iter()
            .map(ExperimentRow::Sweep)
            .collect(),
        Mode::PrecisionCurve => precision_curve(config)?
            .into_iter()
            .map(ExperimentRow::PrecisionCurve)
            .collect(),
        Mode::ExceptionalRegion => exceptional_region_scan(config)?
            .into_iter()
            .map(ExperimentRow::ExceptionalRegion)
            .collect(),
        Mode::CallRatio => call_ratio_table(
            &config.depths,
            config.epsilon,
            config.delta,
            config.spread_coeff,
        )?
        .into_iter()
        .map(ExperimentRow::CallRatio)
        .collect(),
        Mode::ExceptionalList => exceptional_values(config.max_depth)
            .into_iter()
            .map(ExperimentRow::Exceptional)
            .collect(),
    })
}

/// One estimation per amplitude, amplitudes evenly spaced over `[0, 1]` (or
/// the explicit list).
pub fn sweep_amplitudes(config: &ExperimentConfig) -> Result<Vec<SweepRow>> {
    let plan = config.plan()?;
    let amps = match &config.amplitudes {
        Amplitudes::List(v) => v.clone(),
        Amplitudes::Even(m) => linspace(0.0, 1.0, *m),
    };
    check_amplitudes(&amps)?;
    amps.par_iter()
        .enumerate()
        .map(|(i, &a)| {
            let seed = config.seed(i, 0);
            let est = run_mlqae(a, &plan, seed)?;
            Ok(SweepRow {
                a_true: a,
                a_hat: est.a_hat,
                abs_err: (est.a_hat - a).abs(),
                seed,
            })
        })
        .collect()
}

/// Absolute errors of `runs` seeded estimations at `a`.
fn run_errors(
    config: &ExperimentConfig,
    plan: &Plan,
    n_shot: u64,
    a: f64,
    point: usize,
    runs: usize,
) -> Result<Vec<f64>> {
    (0..runs)
        .into_par_iter()
        .map(|r| {
            let record = draw_record(a, &plan.schedule, n_shot, config.seed(point, r))?;
            let est = grid_maximize(&record, plan.grid_size)?;
            Ok((est.a_hat - a).abs())
        })
        .collect()
}

/// Achieved precision as a function of the shot count.
///
/// The angle grid is fixed for the whole curve at `ceil(m/ε_min)` points,
/// where `ε_min = erfinv(1-δ) / (S2 √(2 N_max))` is the precision the
/// largest shot count in the list would target.
pub fn precision_curve(config: &ExperimentConfig) -> Result<Vec<PrecisionRow>> {
    let runs = config.runs()?;
    if config.n_shot_list.is_empty() || config.n_shot_list.contains(&0) {
        return Err(Error::InvalidArgument("n_shot_list needs positive entries"));
    }
    let amps = match &config.amplitudes {
        Amplitudes::List(v) => v.clone(),
        Amplitudes::Even(m) => linspace(0.0, 1.0, *m),
    };
    check_amplitudes(&amps)?;
    let mut plan = config.plan()?;
    let n_max = *config.n_shot_list.iter().max().expect("non-empty");
    let eps_min =
        erfinv(1.0 - config.delta)? / (schedules::s2(&plan.schedule) * (2.0 * n_max as f64).sqrt());
    plan.grid_size = planner::grid_size(eps_min, config.grid_multiplier());

    let mut rows = Vec::with_capacity(amps.len() * config.n_shot_list.len());
    for (ai, &a) in amps.iter().enumerate() {
        for (si, &n_shot) in config.n_shot_list.iter().enumerate() {
            let point = ai * config.n_shot_list.len() + si;
            let errors = run_errors(config, &plan, n_shot, a, point, runs)?;
            rows.push(PrecisionRow {
                a_true: a,
                n_shot,
                eps_achieved: achieved_precision(&errors, config.delta)?,
                runs,
            });
        }
    }
    Ok(rows)
}

/// Achieved precision at the planned shot count for amplitudes spanning
/// `[a_k - 4ε, a_k + 4ε]` around the exceptional amplitude `a_k`.
pub fn exceptional_region_scan(config: &ExperimentConfig) -> Result<Vec<RegionRow>> {
    let runs = config.runs()?;
    let plan = config.plan()?;
    let amps = match &config.amplitudes {
        Amplitudes::List(v) => v.clone(),
        Amplitudes::Even(m) => {
            let centers = exceptional_values(config.max_depth);
            let a_k = *centers
                .get(config.center_k as usize)
                .ok_or(Error::InvalidArgument("k exceeds 2d + 1"))?;
            let half = 4.0 * config.epsilon;
            linspace((a_k - half).max(0.0), (a_k + half).min(1.0), *m)
        }
    };
    check_amplitudes(&amps)?;
    amps.iter()
        .enumerate()
        .map(|(i, &a)| {
            let errors = run_errors(config, &plan, plan.n_shot, a, i, runs)?;
            Ok(RegionRow {
                a_true: a,
                eps_achieved: achieved_precision(&errors, config.delta)?,
                runs,
            })
        })
        .collect()
}

/// Calls needed by the jittered versus the unjittered schedule, each with
/// its own planned shot count.
pub fn call_ratio_table(
    d_list: &[u64],
    epsilon: f64,
    delta: f64,
    spread_coeff: f64,
) -> Result<Vec<CallRatioRow>> {
    if d_list.is_empty() {
        return Err(Error::InvalidArgument("no depths given"));
    }
    d_list
        .iter()
        .map(|&d| {
            let plain = make_plan(epsilon, delta, d, false, spread_coeff)?;
            let jittered = make_plan(epsilon, delta, d, true, spread_coeff)?;
            debug_assert_eq!(plain.n_calls, total_calls(&plain.schedule, plain.n_shot));
            Ok(CallRatioRow {
                d,
                n_calls: plain.n_calls,
                n_calls_jittered: jittered.n_calls,
                ratio: jittered.n_calls as f64 / plain.n_calls as f64,
            })
        })
        .collect()
}

/// `true` when `a` lies within `width` of any exceptional amplitude of depth
/// `d`.
pub fn near_exceptional(a: f64, d: u64, width: f64) -> bool {
    exceptional_values(d)
        .iter()
        .any(|&c| (a - c).abs() <= width)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub qubits: u32,
    pub trials: usize,
    pub max_power: u32,
    pub cases: usize,
    pub max_abs_deviation: f64,
}

/// Compares dense Grover iteration against `sin²((2p+1)θ)` for random good
/// sets and amplitudes on 1..=`qubits` qubits.
pub fn validate_oracle(
    qubits: u32,
    trials: usize,
    max_power: u32,
    seed: u64,
) -> Result<OracleReport> {
    if qubits == 0 || qubits > amplest_core::statevector::MAX_QUBITS {
        return Err(Error::InvalidArgument("qubits must lie in [1, 12]"));
    }
    let mut rng = SplitRng::new(seed);
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for n in 1..=qubits {
        let dim = 1usize << n;
        for _ in 0..trials {
            let size = 1 + (rng.next_u64() % (dim as u64 - 1)) as usize;
            // Partial Fisher-Yates shuffle for a random subset of that size.
            let mut idx: Vec<usize> = (0..dim).collect();
            for i in 0..size {
                let j = i + (rng.next_u64() % (dim - i) as u64) as usize;
                idx.swap(i, j);
            }
            let a = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
            let sp = StatePrep::new(n, &idx[..size], a)?;
            let theta = theta_of_amplitude(a)?;
            for p in 0..=max_power {
                let dense = grover_power_prob(&sp, p)?;
                worst = worst.max((dense - good_prob(theta, u64::from(p))).abs());
                cases += 1;
            }
        }
    }
    Ok(OracleReport {
        qubits,
        trials,
        max_power,
        cases,
        max_abs_deviation: worst,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precision_order_statistic() {
        let errors: Vec<f64> = (1..=100).map(f64::from).collect();
        assert_eq!(achieved_precision(&errors, 0.01).unwrap(), 99.0);
        assert_eq!(achieved_precision(&[5.0; 17], 0.3).unwrap(), 5.0);
        assert_eq!(achieved_precision(&[2.0], 0.5).unwrap(), 2.0);
        assert!(achieved_precision(&[], 0.1).is_err());
        assert!(achieved_precision(&[1.0], 0.0).is_err());
        assert!(achieved_precision(&[-1.0], 0.1).is_err());
    }

    #[test]
    fn precision_is_monotone_and_order_free() {
        let mut rng = SplitRng::new(8);
        let errors: Vec<f64> = (0..500).map(|_| (rng.next_u64() >> 11) as f64).collect();
        let mut reversed = errors.clone();
        reversed.reverse();
        let mut last = f64::INFINITY;
        for i in 1..100 {
            let delta = f64::from(i) / 100.0;
            let v = achieved_precision(&errors, delta).unwrap();
            assert_eq!(v, achieved_precision(&reversed, delta).unwrap());
            assert!(v <= last);
            last = v;
        }
    }

    #[test]
    fn half_normal_quantile() {
        // |N(0,1)| via inverse-CDF sampling; its 99% quantile is
        // √2 erfinv(0.99) = 2.5758.
        let mut rng = SplitRng::new(77);
        let errors: Vec<f64> = (0..100_000)
            .map(|_| {
                let u = ((rng.next_u64() >> 11) as f64 + 0.5) / (1u64 << 53) as f64;
                (std::f64::consts::SQRT_2 * erfinv(u).unwrap()).abs()
            })
            .collect();
        let want = std::f64::consts::SQRT_2 * erfinv(0.99).unwrap();
        assert!((want - 2.5758).abs() < 1e-4);
        let got = achieved_precision(&errors, 0.01).unwrap();
        assert!(((got - want) / want).abs() < 0.03, "{got} vs {want}");
    }

    #[test]
    fn linspace_endpoints() {
        assert_eq!(linspace(0.0, 1.0, 3), vec![0.0, 0.5, 1.0]);
        assert_eq!(linspace(0.2, 0.4, 1), vec![0.30000000000000004]);
        assert!(linspace(0.0, 1.0, 0).is_empty());
        let v = linspace(0.1, 0.7, 11);
        assert_eq!(v[10], 0.7);
    }

    #[test]
    fn sweep_endpoints_are_exact() {
        let cfg = ExperimentConfig {
            amplitudes: Amplitudes::Even(3),
            ..Default::default()
        };
        let rows = sweep_amplitudes(&cfg).unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0].a_true, 0.0);
        assert_eq!(rows[0].abs_err, 0.0);
        assert_eq!(rows[1].a_true, 0.5);
        assert_eq!(rows[2].abs_err, 0.0);
        let jit = ExperimentConfig {
            jittered: true,
            ..cfg
        };
        let rows = sweep_amplitudes(&jit).unwrap();
        assert_eq!((rows[0].abs_err, rows[2].abs_err), (0.0, 0.0));
    }

    #[test]
    fn call_ratios() {
        let rows = call_ratio_table(&[16, 1], 1e-3, 0.01, 2.0).unwrap();
        assert_eq!((rows[0].n_calls, rows[0].n_calls_jittered), (75548, 82385));
        assert!((rows[0].ratio - 82385.0 / 75548.0).abs() < 1e-15);
        assert_eq!(rows[1].ratio, 1.0);
        assert!(call_ratio_table(&[], 1e-3, 0.01, 2.0).is_err());
    }

    #[test]
    fn region_needs_valid_k() {
        let cfg = ExperimentConfig {
            mode: Mode::ExceptionalRegion,
            max_depth: 2,
            center_k: 6,
            amplitudes: Amplitudes::Even(3),
            runs_per_point: 2,
            ..Default::default()
        };
        assert!(exceptional_region_scan(&cfg).is_err());
    }

    #[test]
    fn config_errors() {
        let cfg = ExperimentConfig {
            amplitudes: Amplitudes::List(vec![1.5]),
            ..Default::default()
        };
        assert!(sweep_amplitudes(&cfg).is_err());
        let cfg = ExperimentConfig {
            mode: Mode::PrecisionCurve,
            amplitudes: Amplitudes::List(vec![0.5]),
            ..Default::default()
        };
        assert!(precision_curve(&cfg).is_err());
        let cfg = ExperimentConfig {
            n_shot_list: vec![10],
            runs_per_point: 0,
            ..cfg
        };
        assert!(precision_curve(&cfg).is_err());
    }

    #[test]
    fn grid_multiplier_defaults() {
        let mut cfg = ExperimentConfig::default();
        assert_eq!(cfg.grid_multiplier(), 3.0);
        cfg.mode = Mode::ExceptionalRegion;
        assert_eq!(cfg.grid_multiplier(), 30.0);
        cfg.grid_multiplier = Some(7.0);
        assert_eq!(cfg.grid_multiplier(), 7.0);
    }

    #[test]
    fn oracle_report() {
        let r = validate_oracle(3, 5, 8, 1).unwrap();
        assert_eq!(r.cases, 3 * 5 * 9);
        assert!(r.max_abs_deviation < 1e-9);
        assert!(validate_oracle(0, 5, 8, 1).is_err());
        assert!(validate_oracle(13, 1, 1, 1).is_err());
    }

    #[test]
    fn exceptional_list_mode() {
        let cfg = ExperimentConfig {
            mode: Mode::ExceptionalList,
            max_depth: 1,
            ..Default::default()
        };
        let rows = run(&cfg).unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[3], ExperimentRow::Exceptional(1.0));
    }
}
