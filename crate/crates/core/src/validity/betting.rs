//! The backward-looking betting audit: a bettor starts with unit capital,
//! walks an error stream from the last step to the first, and buys error
//! indicators at price `ε`. Large final capital certifies that errors were
//! more frequent than `ε` allows.

use serde::Serialize;

use crate::error::{Error, Result};

/// Slack for the floating-point comparison of capital with its bound.
const BOUND_TOL: f64 = 1e-9;

/// Capital `𝒦_n` for `n = 0, …, N` (index `n`), with the stake placed on
/// each `e_n` (index `n − 1`).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CapitalTrajectory {
    pub epsilon: f64,
    pub capital: Vec<f64>,
    pub stakes: Vec<f64>,
    /// `𝒦_n − (n/N + (1/N)((Σ_{j>n}(e_j − ε))⁺)²)` at each `n`.
    pub slack: Vec<f64>,
    /// Whether the capital bound held at every `n` (within rounding).
    pub bound_holds: bool,
    pub never_negative: bool,
    /// `Freq_N`.
    pub frequency: f64,
}

impl CapitalTrajectory {
    pub fn len(&self) -> usize {
        self.stakes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stakes.is_empty()
    }

    /// `𝒦_0`.
    pub fn final_capital(&self) -> f64 {
        self.capital[0]
    }

    /// The large-deviation check: when `Freq_N ≥ ε + δ₂`, the final
    /// capital must be at least `Nδ₂²`. `None` when the frequency is below
    /// `ε + δ₂`.
    pub fn deviation_check(&self, delta2: f64) -> Option<bool> {
        let n = self.len() as f64;
        if self.frequency < self.epsilon + delta2 {
            return None;
        }
        let need = n * delta2 * delta2;
        Some(self.final_capital() >= need - BOUND_TOL * need.max(1.0))
    }
}

/// Runs the bettor's strategy over `errors = (e_1, …, e_N)`.
///
/// Going from `n = N` down to 1, with `S = Σ_{j>n}(e_j − ε)`: if `S ≥ ε`
/// buy `2S/N` units of `e_n` at price `ε`; otherwise stay out.
pub fn betting_audit(errors: &[bool], epsilon: f64) -> Result<CapitalTrajectory> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(Error::InvalidLevel(epsilon));
    }
    let big_n = errors.len();
    let nf = big_n as f64;
    let mut capital = vec![0.0; big_n + 1];
    let mut stakes = vec![0.0; big_n];
    let mut slack = vec![0.0; big_n + 1];
    capital[big_n] = 1.0;
    let bound = |n: usize, s: f64| -> f64 {
        let pos = s.max(0.0);
        n as f64 / nf + pos * pos / nf
    };
    let mut s = 0.0;
    slack[big_n] = 1.0 - if big_n == 0 { 1.0 } else { bound(big_n, 0.0) };
    let mut bound_holds = true;
    let mut never_negative = true;
    for n in (1..=big_n).rev() {
        let e = if errors[n - 1] { 1.0 } else { 0.0 };
        let stake = if s >= epsilon { 2.0 * s / nf } else { 0.0 };
        stakes[n - 1] = stake;
        capital[n - 1] = capital[n] + stake * (e - epsilon);
        s += e - epsilon;
        let b = bound(n - 1, s);
        slack[n - 1] = capital[n - 1] - b;
        if slack[n - 1] < -BOUND_TOL * b.max(1.0) {
            bound_holds = false;
        }
        if capital[n - 1] < 0.0 {
            never_negative = false;
        }
    }
    let frequency = if big_n == 0 {
        0.0
    } else {
        errors.iter().filter(|&&e| e).count() as f64 / nf
    };
    Ok(CapitalTrajectory {
        epsilon,
        capital,
        stakes,
        slack,
        bound_holds,
        never_negative,
        frequency,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_errors_never_bets() {
        let t = betting_audit(&[false; 50], 0.1).unwrap();
        assert!(t.stakes.iter().all(|&s| s == 0.0));
        assert_eq!(t.final_capital(), 1.0);
        assert!(t.bound_holds && t.never_negative);
        assert_eq!(t.deviation_check(0.01), None);
    }

    #[test]
    fn all_errors_grow_capital() {
        let t = betting_audit(&[true; 100], 0.1).unwrap();
        assert!(t.final_capital() >= 81.0, "{}", t.final_capital());
        assert!(t.bound_holds);
        assert_eq!(t.deviation_check(0.9), Some(true));
    }

    #[test]
    fn level_must_be_below_half() {
        assert!(betting_audit(&[true], 0.5).is_err());
        assert!(betting_audit(&[true], 0.0).is_err());
    }

    #[test]
    fn single_step_by_hand() {
        // S = 0 < ε at the only step, so nothing is staked.
        let t = betting_audit(&[true], 0.2).unwrap();
        assert_eq!(t.capital, vec![1.0, 1.0]);
        // N = 2, e = (1, 1), ε = 0.2: at n = 1, S = 0.8 ≥ ε, stake 0.8,
        // gain 0.8·0.8.
        let t = betting_audit(&[true, true], 0.2).unwrap();
        assert!((t.final_capital() - 1.64).abs() < 1e-12);
    }
}
