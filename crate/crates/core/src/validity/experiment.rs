//! On-line evaluation, permutation experiments and the strangeness bound.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::example::Example;
use crate::pvalue::count_exceeds;

use super::ledger::{StepOutcome, ValidityLedger};
use super::predictor::RegionPredictor;

/// Predicts every label of `dataset` from its predecessors, then reveals
/// it.
///
/// While fewer than `max(2, predictor.min_history)` examples have been
/// seen the full space is issued and the step is marked as warm-up. A step
/// whose prediction fails is handled the same way, with the failure kept
/// as a warning.
pub fn online_eval(dataset: &[Example], predictor: &dyn RegionPredictor, epsilon: f64) -> ValidityLedger {
    let need = dataset
        .first()
        .map_or(2, |z| predictor.min_history(z).max(2));
    let outcomes = dataset
        .iter()
        .enumerate()
        .map(|(i, z)| {
            let full = || predictor.full_region();
            if i < need {
                return StepOutcome::new(i + 1, z.label.clone(), full(), Vec::new(), true, Vec::new());
            }
            match predictor.predict(&dataset[..i], &z.object, epsilon) {
                Ok(p) => StepOutcome::new(i + 1, z.label.clone(), p.region, p.p_values, false, p.warnings),
                Err(e) => StepOutcome::new(
                    i + 1,
                    z.label.clone(),
                    full(),
                    Vec::new(),
                    true,
                    vec![format!("prediction failed, full space issued: {e}")],
                ),
            }
        })
        .collect();
    ValidityLedger {
        predictor: predictor.describe(),
        epsilon,
        outcomes,
    }
}

/// The order in which trial `trial` visits the examples: a shuffle drawn
/// from stream `trial` of a ChaCha generator seeded with `seed`.
pub fn trial_permutation(n: usize, seed: u64, trial: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    order
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialResult {
    pub trial: u64,
    pub permutation: Vec<usize>,
    pub ledger: ValidityLedger,
}

impl TrialResult {
    pub fn error_rate(&self) -> f64 {
        self.ledger.error_rate()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PermutationReport {
    pub seed: u64,
    pub epsilon: f64,
    /// The stream in its given order.
    pub original: ValidityLedger,
    pub trials: Vec<TrialResult>,
    pub mean_error_rate: f64,
    pub min_error_rate: f64,
    pub max_error_rate: f64,
}

/// Evaluates the stream in its given order and in `trials` random orders.
/// Trials run in parallel; each uses its own generator stream, so the
/// report depends only on the inputs and `seed`.
pub fn permutation_experiment(
    dataset: &[Example],
    predictor: &dyn RegionPredictor,
    epsilon: f64,
    trials: usize,
    seed: u64,
) -> PermutationReport {
    let original = online_eval(dataset, predictor, epsilon);
    let results: Vec<TrialResult> = (0..trials as u64)
        .into_par_iter()
        .map(|trial| {
            let permutation = trial_permutation(dataset.len(), seed, trial);
            let permuted: Vec<Example> = permutation.iter().map(|&i| dataset[i].clone()).collect();
            TrialResult {
                trial,
                ledger: online_eval(&permuted, predictor, epsilon),
                permutation,
            }
        })
        .collect();
    let rates: Vec<f64> = results.iter().map(TrialResult::error_rate).collect();
    let mean = if rates.is_empty() {
        f64::NAN
    } else {
        rates.iter().sum::<f64>() / rates.len() as f64
    };
    PermutationReport {
        seed,
        epsilon,
        original,
        trials: results,
        mean_error_rate: mean,
        min_error_rate: rates.iter().copied().fold(f64::INFINITY, f64::min),
        max_error_rate: rates.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StrangenessCheck {
    /// Examples not covered by the region predicted from the others.
    pub count: usize,
    pub n: usize,
    pub epsilon: f64,
    /// `count ≤ nε`.
    pub pass: bool,
    /// Positions whose prediction failed and so count as not covered.
    pub failures: Vec<usize>,
}

/// Counts the examples `a_i` outside the region predicted from the bag
/// without `a_i`; at most `nε` of them can be that strange.
pub fn lemma1_strangeness_check(
    bag: &[Example],
    predictor: &dyn RegionPredictor,
    epsilon: f64,
) -> StrangenessCheck {
    let n = bag.len();
    let mut count = 0;
    let mut failures = Vec::new();
    for i in 0..n {
        let others: Vec<Example> = bag
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, z)| z.clone())
            .collect();
        match predictor.predict(&others, &bag[i].object, epsilon) {
            Ok(p) if p.region.contains(&bag[i].label) => {}
            Ok(_) => count += 1,
            Err(_) => {
                count += 1;
                failures.push(i);
            }
        }
    }
    StrangenessCheck {
        count,
        n,
        epsilon,
        pass: !count_exceeds(count, n, epsilon),
        failures,
    }
}
