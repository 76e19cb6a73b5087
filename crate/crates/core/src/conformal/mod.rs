//! Region-producing conformal engines.

mod classify;
mod regress;

pub use classify::{
    candidate_pvalues, conformal_classify, conformal_classify_within_label, ClassificationResult,
    ClassificationTask, Comparison,
};
pub use regress::{
    conformal_old_examples, conformal_regress_exact, conformal_regress_family, dominance_set,
    PValueProfile, RegressionResult, RegressionTask,
};
