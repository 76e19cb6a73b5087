//! Validity auditing: on-line evaluation ledgers, permutation experiments,
//! the leave-one-out strangeness bound, and the betting audit.

mod betting;
mod experiment;
mod ledger;
mod predictor;

pub use betting::{betting_audit, CapitalTrajectory};
pub use experiment::{
    lemma1_strangeness_check, online_eval, permutation_experiment, trial_permutation,
    PermutationReport, StrangenessCheck, TrialResult,
};
pub use ledger::{Category, LedgerAggregates, RegionSize, StepOutcome, ValidityLedger};
pub use predictor::{
    ConformalClassifier, ConformalRegressor, GaussianPredictor, Prediction, RegionPredictor,
};

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::example::{Example, Label};
    use crate::fixtures::{czuber_values, iris_labels, iris_species, CZUBER_NEXT};
    use crate::nonconformity::{Average, KnnRatio};
    use crate::pvalue::PValue;

    fn iris_classifier() -> ConformalClassifier {
        ConformalClassifier::new(Arc::new(KnnRatio), iris_labels())
    }

    #[test]
    fn iris_stream_ends_with_the_tabulated_pvalues() {
        let ledger = online_eval(&iris_species(), &iris_classifier(), 0.05);
        let last = ledger.outcomes.last().unwrap();
        assert_eq!(
            last.p_values,
            vec![(Label::class("s"), PValue::new(2, 25)), (Label::class("v"), PValue::new(8, 25))]
        );
        assert!(ledger.outcomes[..2].iter().all(|o| o.warm_up));
        assert!(!ledger.outcomes[2].warm_up);
    }

    #[test]
    fn zero_level_always_covers() {
        let ledger = online_eval(&iris_species(), &iris_classifier(), 0.0);
        assert_eq!(ledger.errors(), 0);
        assert!(ledger.outcomes.iter().all(|o| o.region == iris_classifier().full_region()));
    }

    #[test]
    fn constant_label_stream() {
        let zs: Vec<Example> = (0..100)
            .map(|i| Example::classified(&[f64::from(i % 7)], "a"))
            .collect();
        let p = ConformalClassifier::new(Arc::new(KnnRatio), vec![Label::class("a"), Label::class("b")]);
        let ledger = online_eval(&zs, &p, 0.05);
        assert!(ledger.error_rate() <= 0.10, "{}", ledger.error_rate());
    }

    #[test]
    fn single_trial_is_online_eval_of_its_permutation() {
        let zs = iris_species();
        let r = permutation_experiment(&zs, &iris_classifier(), 0.1, 1, 7);
        let order = trial_permutation(zs.len(), 7, 0);
        let permuted: Vec<Example> = order.iter().map(|&i| zs[i].clone()).collect();
        assert_eq!(r.trials[0].ledger, online_eval(&permuted, &iris_classifier(), 0.1));
        assert_eq!(r.original, online_eval(&zs, &iris_classifier(), 0.1));
        let again = permutation_experiment(&zs, &iris_classifier(), 0.1, 1, 7);
        assert_eq!(r, again);
    }

    #[test]
    fn czuber_strangeness_bound() {
        let mut values = czuber_values();
        values.push(CZUBER_NEXT);
        let bag: Vec<Example> = values.iter().map(|&v| Example::regression(&[], v)).collect();
        let p = ConformalRegressor {
            measure: Arc::new(Average),
        };
        let check = lemma1_strangeness_check(&bag, &p, 0.05);
        assert!(check.count <= 1 && check.pass, "{check:?}");
        assert!(lemma1_strangeness_check(&bag, &p, 1.0).pass);
    }
}
