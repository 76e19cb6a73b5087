//! Conformal p-values, label-set regions, confidence and credibility.

use std::fmt;

use num_rational::BigRational;
use serde::{Serialize, Serializer};

use crate::example::Label;
use crate::level::SignificanceLevel;

/// Relative slack used when comparing a count against `nε`, so that
/// decimal levels such as 0.08 with n = 25 tie exactly as written.
const LEVEL_TIE: f64 = 1e-9;

/// An exact conformal p-value `count / n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PValue {
    pub count: usize,
    pub n: usize,
}

impl PValue {
    pub fn new(count: usize, n: usize) -> Self {
        assert!(n > 0 && count <= n, "p-value {count}/{n} out of range");
        PValue { count, n }
    }

    pub fn value(self) -> f64 {
        self.count as f64 / self.n as f64
    }

    pub fn to_rational(self) -> BigRational {
        BigRational::new(self.count.into(), self.n.into())
    }

    /// Whether `p > ε`, decided on the integer count: `count > nε`.
    pub fn exceeds(self, epsilon: f64) -> bool {
        count_exceeds(self.count, self.n, epsilon)
    }

    /// `1 − p` computed without rounding the fraction first.
    pub fn complement(self) -> f64 {
        (self.n - self.count) as f64 / self.n as f64
    }
}

/// `count > nε` with decimal-tie slack.
pub fn count_exceeds(count: usize, n: usize, epsilon: f64) -> bool {
    let threshold = n as f64 * epsilon;
    count as f64 > threshold + LEVEL_TIE * threshold.max(1.0)
}

impl fmt::Display for PValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.count, self.n)
    }
}

impl Serialize for PValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `#{i : α_i ≥ α_n} / n`, where `α_n` is the last score.
///
/// # Panics
///
/// Panics on an empty slice or NaN scores.
pub fn p_value_from_scores(scores: &[f64]) -> PValue {
    let last = *scores.last().expect("at least one score");
    assert!(!last.is_nan(), "scores must not be NaN");
    let count = scores.iter().filter(|&&a| a >= last).count();
    PValue::new(count, scores.len())
}

/// Label-conditional p-value: only positions whose label equals the last
/// position's label are compared.
pub fn p_value_within_label(scores: &[f64], labels: &[Label]) -> PValue {
    assert_eq!(scores.len(), labels.len());
    let last = *scores.last().expect("at least one score");
    let target = labels.last().unwrap();
    let (mut count, mut n) = (0, 0);
    for (a, y) in scores.iter().zip(labels) {
        if y == target {
            n += 1;
            if *a >= last {
                count += 1;
            }
        }
    }
    PValue::new(count, n)
}

/// Candidate labels with their p-values, in canonical label order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PValueReport {
    pub candidates: Vec<(Label, PValue)>,
}

impl PValueReport {
    pub fn new(mut candidates: Vec<(Label, PValue)>) -> Self {
        candidates.sort_by(|a, b| a.0.cmp(&b.0));
        PValueReport { candidates }
    }

    pub fn get(&self, label: &Label) -> Option<PValue> {
        self.candidates
            .iter()
            .find(|(y, _)| y == label)
            .map(|(_, p)| *p)
    }

    pub fn region(&self, epsilon: SignificanceLevel) -> Vec<Label> {
        region_from_pvalues(self, epsilon)
    }

    pub fn confidence(&self) -> f64 {
        confidence_credibility(self).0
    }

    pub fn credibility(&self) -> f64 {
        confidence_credibility(self).1
    }
}

/// Labels whose p-value exceeds `ε`.
pub fn region_from_pvalues(report: &PValueReport, epsilon: SignificanceLevel) -> Vec<Label> {
    region_at(report, epsilon.epsilon())
}

/// As [`region_from_pvalues`] but for any real `ε`; `ε ≤ 0` keeps every
/// candidate and `ε ≥ 1` keeps none.
pub fn region_at(report: &PValueReport, epsilon: f64) -> Vec<Label> {
    report
        .candidates
        .iter()
        .filter(|(_, p)| p.exceeds(epsilon))
        .map(|(y, _)| y.clone())
        .collect()
}

/// Confidence `1 − p₂` and credibility `p₁`, where `p₁ ≥ p₂` are the two
/// largest p-values.
///
/// Confidence is the greatest `1 − ε` whose region is a single label and
/// credibility the greatest `ε` whose region is empty. These readings are
/// inferred from worked examples rather than stated as formulas in the
/// literature. With a single candidate, confidence is 1 by convention.
pub fn confidence_credibility(report: &PValueReport) -> (f64, f64) {
    let mut ps: Vec<PValue> = report.candidates.iter().map(|(_, p)| *p).collect();
    ps.sort_by(|a, b| b.to_rational().cmp(&a.to_rational()));
    let credibility = ps.first().map_or(0.0, |p| p.value());
    let confidence = ps.get(1).map_or(1.0, |p| p.complement());
    (confidence, credibility)
}
