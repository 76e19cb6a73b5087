//! Nonconformity measures `A(B, z)`: how strange example `z` looks next to
//! bag `B`.
//!
//! Every measure depends on the bag only through its contents. Inputs are
//! put in canonical (sorted) order before any floating-point accumulation,
//! so scores are bit-identical under any reordering of the examples.

mod average;
mod band;
mod knn;
mod label_mean;
mod least_squares;
mod score_fn;

use std::sync::Arc;

use serde::Serialize;

pub use average::{Average, AverageUnpooled};
pub use band::{fit_band, Band, SeparatingBand};
pub use knn::{point_predict_nn, KnnRatio, KnnRegression};
pub use label_mean::LabelMean;
pub use least_squares::{least_squares_affine, least_squares_scores, LeastSquares};
pub use score_fn::{AbsAffine, AffineScoreForm, ScoreFamily, ScoreFunction};

use crate::bag::Bag;
use crate::error::{Error, Result};
use crate::example::Example;

/// How the scores `α_1, …, α_n` of a completed sequence are formed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// `α_i = A(B ∖ {z_i}, z_i)`.
    Deletion,
    /// `α_i = A(B, z_i)` with `z_i ∈ B`.
    Inclusion,
}

pub trait NonconformityMeasure: Send + Sync {
    fn name(&self) -> &'static str;

    fn convention(&self) -> Convention;

    /// `A(bag, z)`. Under [`Convention::Inclusion`] the bag is expected to
    /// contain `z`; if it does not, `z` is added first.
    fn score(&self, bag: &Bag<Example>, z: &Example) -> Result<f64>;

    /// Scores of every example of a completed sequence, formed according
    /// to [`NonconformityMeasure::convention`].
    fn scores(&self, examples: &[Example]) -> Result<Vec<f64>> {
        let full: Bag<Example> = examples.iter().collect();
        examples
            .iter()
            .map(|z| match self.convention() {
                Convention::Deletion => self.score(&full.without(z)?, z),
                Convention::Inclusion => self.score(&full, z),
            })
            .collect()
    }
}

/// A measure for real labels that can express every score of a completed
/// sequence as a function of the last, unknown label.
pub trait RegressionMeasure: NonconformityMeasure {
    /// `α_1(y), …, α_n(y)` for the sequence `old ++ [(x_new, y)]`.
    fn score_family(&self, old: &[Example], x_new: &[f64]) -> Result<ScoreFamily>;
}

/// `A(σ, z)` where `σ` is the bag of the *other* examples, whatever the
/// measure's own convention.
pub fn score_against_others(
    measure: &dyn NonconformityMeasure,
    others: &Bag<Example>,
    z: &Example,
) -> Result<f64> {
    match measure.convention() {
        Convention::Deletion => measure.score(others, z),
        Convention::Inclusion => measure.score(&others.with(z.clone()), z),
    }
}

/// Rounds a finite score to 12 significant digits so that mathematically
/// equal ratios and distances compare equal after floating-point noise.
pub(crate) fn quantize(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    let e = x.abs().log10().floor() as i32;
    let scale = 10f64.powi(11 - e);
    if !scale.is_finite() || scale == 0.0 {
        return x;
    }
    (x * scale).round() / scale
}

/// Indices of `examples` in canonical order.
pub(crate) fn canonical_order(examples: &[Example]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..examples.len()).collect();
    idx.sort_by(|&a, &b| examples[a].cmp(&examples[b]));
    idx
}

pub const CLASSIFICATION_MEASURES: [&str; 3] = ["knn-ratio", "label-mean", "band"];
pub const REGRESSION_MEASURES: [&str; 5] = [
    "average",
    "knn-reg",
    "least-squares",
    "least-squares-deleted",
    "average-unpooled",
];

/// Looks up a measure for categorical labels by name.
pub fn classification_measure(name: &str) -> Result<Arc<dyn NonconformityMeasure>> {
    Ok(match name {
        "knn-ratio" => Arc::new(KnnRatio),
        "label-mean" => Arc::new(LabelMean),
        "band" => Arc::new(SeparatingBand),
        _ => return Err(unknown(name, &CLASSIFICATION_MEASURES)),
    })
}

/// Looks up a measure for real labels by name.
pub fn regression_measure(name: &str) -> Result<Arc<dyn RegressionMeasure>> {
    Ok(match name {
        "average" => Arc::new(Average),
        "average-unpooled" => Arc::new(AverageUnpooled),
        "knn-reg" => Arc::new(KnnRegression),
        "least-squares" => Arc::new(LeastSquares::inclusion()),
        "least-squares-deleted" => Arc::new(LeastSquares::deletion()),
        _ => return Err(unknown(name, &REGRESSION_MEASURES)),
    })
}

fn unknown(name: &str, known: &[&str]) -> Error {
    Error::InvalidArgument(format!(
        "unknown measure `{name}`; expected one of: {}",
        known.join(", ")
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantize_merges_float_noise() {
        assert_eq!(quantize(0.2 / 0.4), quantize(0.1 / 0.2));
        assert_eq!(quantize((6.4f64 - 6.2) / (6.4 - 6.0)), 0.5);
        assert_eq!(quantize(f64::INFINITY), f64::INFINITY);
        assert_eq!(quantize(0.0), 0.0);
        assert_eq!(quantize(13.0), 13.0);
    }

    #[test]
    fn registry_lists_names_on_error() {
        let err = classification_measure("svm").err().unwrap().to_string();
        assert!(err.contains("knn-ratio") && err.contains("band"));
        assert!(regression_measure("least-squares").is_ok());
        assert!(regression_measure("knn-ratio").is_err());
    }
}
