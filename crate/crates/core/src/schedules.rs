//! Grover-depth schedules.
//!
//! A [`Schedule`] is the list of Grover depths at which measurement batches
//! are taken, together with the fraction of the per-depth shot budget each
//! depth receives. Unjittered schedules carry fraction 1 everywhere; a
//! jittered schedule spreads the shots of one original depth evenly over a
//! contiguous band of nearby depths.

use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Exact shot fraction `num/den` with `0 < num <= den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "(u64, u64)", into = "(u64, u64)")]
pub struct Fraction {
    num: u64,
    den: u64,
}

impl Fraction {
    pub const ONE: Fraction = Fraction { num: 1, den: 1 };

    pub fn new(num: u64, den: u64) -> Result<Self> {
        if num == 0 || den == 0 || num > den {
            return Err(Error::InvalidArgument("shot fraction must lie in (0, 1]"));
        }
        Ok(Fraction { num, den })
    }

    /// `1/group_size`.
    pub fn share(group_size: u64) -> Result<Self> {
        Fraction::new(1, group_size)
    }

    pub fn num(self) -> u64 {
        self.num
    }

    pub fn den(self) -> u64 {
        self.den
    }

    pub fn value(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn is_one(self) -> bool {
        self.num == self.den
    }

    /// `ceil(self * n)` in exact integer arithmetic.
    pub fn ceil_mul(self, n: u64) -> u64 {
        let num = u128::from(self.num) * u128::from(n);
        let den = u128::from(self.den);
        num.div_ceil(den) as u64
    }
}

impl TryFrom<(u64, u64)> for Fraction {
    type Error = Error;

    fn try_from((num, den): (u64, u64)) -> Result<Self> {
        Fraction::new(num, den)
    }
}

impl From<Fraction> for (u64, u64) {
    fn from(f: Fraction) -> Self {
        (f.num, f.den)
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleKind {
    Exp,
    ExpNu,
    Poly,
    Jittered,
    Custom,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ScheduleRepr", into = "ScheduleRepr")]
pub struct Schedule {
    depths: Vec<u64>,
    fractions: Vec<Fraction>,
    kind: ScheduleKind,
    nu: Option<f64>,
    spread_coeff: Option<f64>,
    beta: Option<f64>,
}

#[derive(Serialize, Deserialize)]
struct ScheduleRepr {
    kind: ScheduleKind,
    depths: Vec<u64>,
    fractions: Vec<Fraction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    nu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    spread_coeff: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    beta: Option<f64>,
}

impl From<Schedule> for ScheduleRepr {
    fn from(s: Schedule) -> Self {
        ScheduleRepr {
            kind: s.kind,
            depths: s.depths,
            fractions: s.fractions,
            nu: s.nu,
            spread_coeff: s.spread_coeff,
            beta: s.beta,
        }
    }
}

impl TryFrom<ScheduleRepr> for Schedule {
    type Error = Error;

    fn try_from(r: ScheduleRepr) -> Result<Self> {
        let s = Schedule {
            depths: r.depths,
            fractions: r.fractions,
            kind: r.kind,
            nu: r.nu,
            spread_coeff: r.spread_coeff,
            beta: r.beta,
        };
        s.validate()?;
        Ok(s)
    }
}

impl Schedule {
    /// Unweighted schedule with arbitrary strictly ascending depths.
    pub fn custom(depths: Vec<u64>) -> Result<Self> {
        let fractions = alloc::vec![Fraction::ONE; depths.len()];
        Schedule::with_fractions(depths, fractions)
    }

    /// Custom schedule with explicit shot fractions.
    pub fn with_fractions(depths: Vec<u64>, fractions: Vec<Fraction>) -> Result<Self> {
        let s = Schedule {
            depths,
            fractions,
            kind: ScheduleKind::Custom,
            nu: None,
            spread_coeff: None,
            beta: None,
        };
        s.validate()?;
        Ok(s)
    }

    fn unweighted(depths: Vec<u64>, kind: ScheduleKind) -> Self {
        let fractions = alloc::vec![Fraction::ONE; depths.len()];
        Schedule {
            depths,
            fractions,
            kind,
            nu: None,
            spread_coeff: None,
            beta: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.depths.is_empty() {
            return Err(Error::InvalidArgument("schedule has no depths"));
        }
        if self.depths.len() != self.fractions.len() {
            return Err(Error::InvalidArgument(
                "depths and fractions differ in length",
            ));
        }
        let ordered = if self.kind == ScheduleKind::Poly {
            self.depths.windows(2).all(|w| w[0] <= w[1])
        } else {
            self.depths.windows(2).all(|w| w[0] < w[1])
        };
        if !ordered {
            return Err(Error::InvalidArgument("depths are not ascending"));
        }
        if matches!(self.kind, ScheduleKind::Exp | ScheduleKind::ExpNu) && self.depths[0] != 0 {
            return Err(Error::InvalidArgument(
                "exponential schedules start at depth 0",
            ));
        }
        // Each run of identical non-unit fractions must be made of whole groups.
        for run in self.fractions.chunk_by(|a, b| a == b) {
            let f = run[0];
            if !f.is_one()
                && !(run.len() as u128 * u128::from(f.num)).is_multiple_of(u128::from(f.den))
            {
                return Err(Error::InvalidArgument(
                    "jitter group fractions do not sum to 1",
                ));
            }
        }
        for v in [self.nu, self.spread_coeff].into_iter().flatten() {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidArgument(
                    "nu and spread_coeff must be positive",
                ));
            }
        }
        if let Some(b) = self.beta {
            if !(b > 0.0 && b <= 1.0) {
                return Err(Error::InvalidArgument("beta must lie in (0, 1]"));
            }
        }
        Ok(())
    }

    pub fn depths(&self) -> &[u64] {
        &self.depths
    }

    pub fn fractions(&self) -> &[Fraction] {
        &self.fractions
    }

    pub fn kind(&self) -> ScheduleKind {
        self.kind
    }

    pub fn nu(&self) -> Option<f64> {
        self.nu
    }

    pub fn spread_coeff(&self) -> Option<f64> {
        self.spread_coeff
    }

    pub fn beta(&self) -> Option<f64> {
        self.beta
    }

    pub fn len(&self) -> usize {
        self.depths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.depths.is_empty()
    }

    pub fn max_depth(&self) -> u64 {
        *self.depths.last().expect("validated schedule is non-empty")
    }

    /// `(depth, fraction)` pairs in schedule order.
    pub fn iter(&self) -> impl Iterator<Item = (u64, Fraction)> + '_ {
        self.depths
            .iter()
            .copied()
            .zip(self.fractions.iter().copied())
    }

    /// Appends a depth at or above the current maximum with fraction 1.
    pub fn push(&mut self, depth: u64) -> Result<()> {
        let last = self.max_depth();
        let ok = depth > last || (self.kind == ScheduleKind::Poly && depth == last);
        if !ok {
            return Err(Error::InvalidArgument("appended depth must keep order"));
        }
        self.depths.push(depth);
        self.fractions.push(Fraction::ONE);
        Ok(())
    }

    /// Depth-jittered copy of this schedule with logarithmic spread
    /// coefficient `c`.
    ///
    /// Depths are visited from largest to smallest so larger depths win when
    /// neighbouring bands would collide. A depth `d` is replaced by the band
    /// `[d - s, d + s]` with `s = round(ln(c d))`, clipped to `d` at the top
    /// of the schedule and to 0 at the bottom, unless the band would reach
    /// within one of the next smaller original depth or of a band already
    /// placed above it. Depth 0 is never jittered. Every depth of a band
    /// receives the fraction `1/(band width)`.
    pub fn jitter(&self, c: f64) -> Result<Schedule> {
        if self.depths.len() < 2 {
            return Err(Error::InvalidArgument("jitter needs at least two depths"));
        }
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::InvalidArgument(
                "spread coefficient must be positive",
            ));
        }
        if !self.depths.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument(
                "jitter needs strictly ascending depths",
            ));
        }

        let depths = &self.depths;
        let n = depths.len();
        let (min, max) = (depths[0], depths[n - 1]);
        // Built in descending order, reversed at the end.
        let mut out_depths: Vec<u64> = Vec::new();
        let mut out_fracs: Vec<Fraction> = Vec::new();

        for j in (0..n).rev() {
            let d = depths[j];
            let band = if d == 0 {
                None
            } else {
                let spread = libm::round(libm::log(c * d as f64)) as i64;
                let di = d as i64;
                // Smallest depth placed so far, min(D').
                let floor_above = out_depths.last().map(|&x| x as i64);
                let (lower, upper, ok) = if d == max {
                    let lower = di - spread;
                    (lower, di, lower > depths[j - 1] as i64 + 1)
                } else if min < d && d < max {
                    let (lower, upper) = (di - spread, di + spread);
                    let below = lower > depths[j - 1] as i64 + 1;
                    let above = floor_above.is_some_and(|f| upper < f - 1);
                    (lower, upper, below && above)
                } else {
                    let (lower, upper) = ((di - spread).max(0), di + spread);
                    (lower, upper, floor_above.is_some_and(|f| upper < f - 1))
                };
                (ok && spread >= 0).then_some((lower as u64, upper as u64))
            };
            match band {
                Some((lower, upper)) => {
                    let share = Fraction::share(upper - lower + 1)?;
                    for k in (lower..=upper).rev() {
                        out_depths.push(k);
                        out_fracs.push(share);
                    }
                }
                None => {
                    out_depths.push(d);
                    out_fracs.push(Fraction::ONE);
                }
            }
        }
        out_depths.reverse();
        out_fracs.reverse();

        Ok(Schedule {
            depths: out_depths,
            fractions: out_fracs,
            kind: ScheduleKind::Jittered,
            nu: self.nu,
            spread_coeff: Some(c),
            beta: self.beta,
        })
    }
}

/// Exponential schedule `{0} ∪ {2^(j-1) : j = 1..q-1}`.
pub fn build_exp(q: u32) -> Result<Schedule> {
    if q < 2 {
        return Err(Error::InvalidArgument("exponential schedule needs q >= 2"));
    }
    if q > 64 {
        return Err(Error::InvalidArgument("exponential schedule needs q <= 64"));
    }
    let depths = core::iter::once(0)
        .chain((1..q).map(|j| 1u64 << (j - 1)))
        .collect();
    Ok(Schedule::unweighted(depths, ScheduleKind::Exp))
}

/// Exponential schedule ending exactly at `d` whose base ν is the real
/// number closest to 2 for which `ν^m = d` with integer `m >= 1`.
pub fn build_exp_nu(d: u64) -> Result<Schedule> {
    if d < 1 {
        return Err(Error::InvalidArgument("maximum depth must be >= 1"));
    }
    if d == 1 {
        return Ok(Schedule::unweighted(alloc::vec![0, 1], ScheduleKind::ExpNu));
    }
    let target = d as f64;
    let mut best = (1u32, target, (target - 2.0).abs());
    for m in 2..=64u32 {
        let nu = libm::pow(target, 1.0 / f64::from(m));
        let dist = (nu - 2.0).abs();
        // Strict comparison keeps the smaller m on ties.
        if dist < best.2 {
            best = (m, nu, dist);
        }
    }
    let (m, nu, _) = best;
    let mut depths: Vec<u64> = core::iter::once(0)
        .chain((0..=m).map(|k| libm::round(libm::pow(nu, f64::from(k))) as u64))
        .collect();
    *depths.last_mut().expect("non-empty") = d;
    let mut s = Schedule::unweighted(depths, ScheduleKind::ExpNu);
    s.nu = Some(nu);
    s.validate()?;
    Ok(s)
}

/// Polynomial schedule `{round(j^((1-β)/(2β))) : j = 1..q}` with
/// `q = ceil(max(ε^(-2β), ln(1/ε)))`. Duplicate depths are kept.
pub fn build_poly(beta: f64, eps: f64) -> Result<Schedule> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::domain("beta", beta, "(0, 1]"));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::domain("eps", eps, "(0, 1)"));
    }
    let q = crate::planner::ceil_count(libm::pow(eps, -2.0 * beta).max(libm::log(1.0 / eps)));
    if q > 100_000_000 {
        return Err(Error::InvalidArgument("polynomial schedule is too long"));
    }
    let exponent = (1.0 - beta) / (2.0 * beta);
    let depths = (1..=q)
        .map(|j| libm::round(libm::pow(j as f64, exponent)) as u64)
        .collect();
    let mut s = Schedule::unweighted(depths, ScheduleKind::Poly);
    s.beta = Some(beta);
    Ok(s)
}

/// `Σ F_j (2 d_j + 1)`: calls to the state-preparation routine per unit of
/// `N_shot`.
pub fn s1(schedule: &Schedule) -> f64 {
    schedule
        .iter()
        .map(|(d, f)| f.value() * (2 * d + 1) as f64)
        .sum()
}

/// `sqrt(Σ F_j (2 d_j + 1)^2)`.
pub fn s2(schedule: &Schedule) -> f64 {
    libm::sqrt(s2_squared(schedule))
}

pub fn s2_squared(schedule: &Schedule) -> f64 {
    schedule
        .iter()
        .map(|(d, f)| {
            let w = (2 * d + 1) as f64;
            f.value() * w * w
        })
        .sum()
}

/// Closed forms of `(S1, S2)` for the exponential schedule with maximum
/// depth `d`, a power of two.
pub fn closed_form_s(d: u64) -> Result<(f64, f64)> {
    if d < 2 || !d.is_power_of_two() {
        return Err(Error::InvalidArgument(
            "closed form needs a power of two >= 2",
        ));
    }
    let log2d = f64::from(d.trailing_zeros());
    let df = d as f64;
    let first = 4.0 * df + log2d;
    let second = libm::sqrt(16.0 * df * df / 3.0 + 8.0 * df + log2d - 10.0 / 3.0);
    Ok((first, second))
}

/// Bounds on the base of [`build_exp_nu`] for a schedule of `q` depths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NuBounds {
    pub lower: f64,
    pub upper: f64,
    pub q: u32,
}

pub fn nu_bounds(q: u32) -> Result<NuBounds> {
    if q < 3 {
        return Err(Error::InvalidArgument("nu bounds need q >= 3"));
    }
    let m = f64::from(q - 2);
    Ok(NuBounds {
        lower: libm::pow(2.0, f64::from(q - 3) / m),
        upper: libm::pow(2.0, f64::from(q - 1) / m),
        q,
    })
}
