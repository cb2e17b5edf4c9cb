//! Dense state-vector check of the Grover-iteration probability law.
//!
//! The state-preparation routine is modelled by the vector it prepares,
//! `|A⟩ = √a |A_G⟩ + √(1-a) |A_B⟩`, with uniform weight inside each subset.
//! One Grover iteration flips the sign of the good components and then
//! reflects about `|A⟩`. Flipping the good rather than the bad subspace only
//! changes a global phase, so good-subset probabilities are unaffected.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::{Error, Result};

pub const MAX_QUBITS: u32 = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct StatePrep {
    n_qubits: u32,
    good: Vec<bool>,
    good_count: usize,
    amplitude: f64,
}

impl StatePrep {
    pub fn new(n_qubits: u32, good_set: &[usize], amplitude: f64) -> Result<Self> {
        if !(1..=MAX_QUBITS).contains(&n_qubits) {
            return Err(Error::InvalidArgument("n_qubits must lie in [1, 12]"));
        }
        if !(0.0..=1.0).contains(&amplitude) {
            return Err(Error::domain("amplitude", amplitude, "[0, 1]"));
        }
        let dim = 1usize << n_qubits;
        let mut good = vec![false; dim];
        for &i in good_set {
            if i >= dim {
                return Err(Error::InvalidArgument("good index outside the basis"));
            }
            if core::mem::replace(&mut good[i], true) {
                return Err(Error::InvalidArgument("duplicate good index"));
            }
        }
        let good_count = good_set.len();
        if good_count == 0 || good_count == dim {
            return Err(Error::InvalidArgument(
                "good set must be a non-empty proper subset",
            ));
        }
        Ok(StatePrep {
            n_qubits,
            good,
            good_count,
            amplitude,
        })
    }

    pub fn n_qubits(&self) -> u32 {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.good.len()
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn is_good(&self, index: usize) -> bool {
        self.good[index]
    }

    /// Total probability on the good subset.
    pub fn good_probability(&self, v: &[Complex64]) -> f64 {
        v.iter()
            .zip(&self.good)
            .filter(|(_, &g)| g)
            .map(|(c, _)| c.norm_sqr())
            .sum()
    }
}

pub fn prepare_state(sp: &StatePrep) -> Vec<Complex64> {
    let bad_count = sp.dim() - sp.good_count;
    let g = libm::sqrt(sp.amplitude / sp.good_count as f64);
    let b = libm::sqrt((1.0 - sp.amplitude) / bad_count as f64);
    sp.good
        .iter()
        .map(|&is_good| Complex64::new(if is_good { g } else { b }, 0.0))
        .collect()
}

/// One Grover iteration: oracle sign flip on the good subset followed by the
/// reflection `v ↦ 2⟨A|v⟩|A⟩ - v`.
pub fn apply_grover(v: &[Complex64], sp: &StatePrep) -> Result<Vec<Complex64>> {
    if v.len() != sp.dim() {
        return Err(Error::InvalidArgument("state dimension mismatch"));
    }
    let a = prepare_state(sp);
    let flipped: Vec<Complex64> = v
        .iter()
        .zip(&sp.good)
        .map(|(&c, &g)| if g { -c } else { c })
        .collect();
    let overlap: Complex64 = a.iter().zip(&flipped).map(|(x, y)| x.conj() * y).sum();
    Ok(a.iter()
        .zip(&flipped)
        .map(|(&x, &y)| x * overlap * 2.0 - y)
        .collect())
}

/// Good-subset probability after `power` Grover iterations on `|A⟩`.
pub fn grover_power_prob(sp: &StatePrep, power: u32) -> Result<f64> {
    let mut v = prepare_state(sp);
    for _ in 0..power {
        v = apply_grover(&v, sp)?;
    }
    Ok(sp.good_probability(&v))
}

pub fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum()
}
