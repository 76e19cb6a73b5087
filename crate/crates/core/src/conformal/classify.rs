//! Conformal classification by sweeping the finite label space.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::example::{check_schema, Example, Label};
use crate::level::SignificanceLevel;
use crate::nonconformity::NonconformityMeasure;
use crate::pvalue::{
    confidence_credibility, p_value_from_scores, p_value_within_label, region_from_pvalues, PValue,
    PValueReport,
};

/// Old examples, the new object, the label space and a measure.
#[derive(Clone, Copy)]
pub struct ClassificationTask<'a> {
    pub old: &'a [Example],
    pub object: &'a [f64],
    pub labels: &'a [Label],
    pub measure: &'a dyn NonconformityMeasure,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassificationResult {
    pub measure: &'static str,
    pub report: PValueReport,
    pub regions: Vec<(f64, Vec<Label>)>,
    pub confidence: f64,
    pub credibility: f64,
    /// Candidates whose scores could not be computed; each was scored as
    /// `+∞`.
    pub warnings: Vec<String>,
}

/// How the candidate's score is compared against the others.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparison {
    /// Against every position.
    All,
    /// Only against positions with the candidate's label.
    WithinLabel,
}

/// p-values of every candidate label, plus warnings for candidates whose
/// scores failed.
pub fn candidate_pvalues(
    task: ClassificationTask<'_>,
    comparison: Comparison,
) -> Result<(PValueReport, Vec<String>)> {
    if task.labels.is_empty() {
        return Err(Error::InvalidArgument("label space is empty".into()));
    }
    check_schema(task.old)?;
    if let Some(z) = task.old.first() {
        if z.arity() != task.object.len() {
            return Err(Error::InvalidArgument(format!(
                "new object has {} features, expected {}",
                task.object.len(),
                z.arity()
            )));
        }
    }
    let mut seq: Vec<Example> = task.old.to_vec();
    seq.push(Example::new(task.object.to_vec(), Label::Absent));
    let n = seq.len();
    let mut warnings = Vec::new();
    let mut candidates = Vec::with_capacity(task.labels.len());
    for y in task.labels {
        seq[n - 1] = Example::new(task.object.to_vec(), y.clone());
        let p = match task.measure.scores(&seq) {
            Ok(scores) => match comparison {
                Comparison::All => p_value_from_scores(&scores),
                Comparison::WithinLabel => {
                    let labels: Vec<Label> = seq.iter().map(|z| z.label.clone()).collect();
                    p_value_within_label(&scores, &labels)
                }
            },
            Err(e) => {
                warnings.push(format!("candidate {y}: {e}; scored as +∞"));
                let comparands = match comparison {
                    Comparison::All => n,
                    Comparison::WithinLabel => seq.iter().filter(|z| &z.label == y).count(),
                };
                PValue::new(1, comparands)
            }
        };
        candidates.push((y.clone(), p));
    }
    Ok((PValueReport::new(candidates), warnings))
}

fn finish(
    task: ClassificationTask<'_>,
    epsilons: &[SignificanceLevel],
    comparison: Comparison,
) -> Result<ClassificationResult> {
    let (report, warnings) = candidate_pvalues(task, comparison)?;
    Ok(ClassificationResult::assemble(task.measure.name(), report, warnings, epsilons))
}

impl ClassificationResult {
    /// Regions, confidence and credibility read off a p-value report.
    pub fn assemble(
        measure: &'static str,
        report: PValueReport,
        warnings: Vec<String>,
        epsilons: &[SignificanceLevel],
    ) -> Self {
        let regions = epsilons
            .iter()
            .map(|&e| (e.epsilon(), region_from_pvalues(&report, e)))
            .collect();
        let (confidence, credibility) = confidence_credibility(&report);
        ClassificationResult {
            measure,
            report,
            regions,
            confidence,
            credibility,
            warnings,
        }
    }
}

/// Conformal p-values for every candidate label, the regions at each
/// level, and confidence/credibility.
pub fn conformal_classify(
    task: ClassificationTask<'_>,
    epsilons: &[SignificanceLevel],
) -> Result<ClassificationResult> {
    finish(task, epsilons, Comparison::All)
}

/// As [`conformal_classify`], but each candidate is compared only with the
/// examples that carry the same label.
pub fn conformal_classify_within_label(
    task: ClassificationTask<'_>,
    epsilons: &[SignificanceLevel],
) -> Result<ClassificationResult> {
    finish(task, epsilons, Comparison::WithinLabel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{iris_labels, iris_species};
    use crate::nonconformity::{KnnRatio, LabelMean, SeparatingBand};

    fn lvl(e: f64) -> SignificanceLevel {
        SignificanceLevel::new(e).unwrap()
    }

    fn iris(measure: &dyn NonconformityMeasure) -> ClassificationResult {
        let zs = iris_species();
        let labels = iris_labels();
        conformal_classify(
            ClassificationTask {
                old: &zs[..24],
                object: &[6.8],
                labels: &labels,
                measure,
            },
            &[lvl(0.08), lvl(0.05), lvl(1.0 / 3.0)],
        )
        .unwrap()
    }

    fn counts(r: &ClassificationResult) -> Vec<usize> {
        r.report.candidates.iter().map(|(_, p)| p.count).collect()
    }

    #[test]
    fn iris_pvalues_for_three_measures() {
        let nn = iris(&KnnRatio);
        assert_eq!(counts(&nn), vec![2, 8]);
        assert_eq!(nn.regions[0].1, vec![Label::class("v")]);
        assert_eq!(nn.regions[1].1.len(), 2);
        assert!(nn.regions[2].1.is_empty());
        assert_eq!(counts(&iris(&LabelMean)), vec![1, 2]);
        let band = iris(&SeparatingBand);
        assert_eq!(counts(&band), vec![2, 25]);
        assert!((band.confidence - 0.92).abs() < 1e-12);
        assert_eq!(band.credibility, 1.0);
    }

    #[test]
    fn single_old_example() {
        let old = [Example::classified(&[1.0], "a")];
        let labels = [Label::class("a"), Label::class("b")];
        let r = conformal_classify(
            ClassificationTask {
                old: &old,
                object: &[1.0],
                labels: &labels,
                measure: &KnnRatio,
            },
            &[lvl(0.4)],
        )
        .unwrap();
        assert!(r.regions[0].1.contains(&Label::class("a")));
    }

    #[test]
    fn measure_failures_become_warnings() {
        let zs = [
            Example::classified(&[0.0], "a"),
            Example::classified(&[1.0], "b"),
        ];
        let labels = [Label::class("a"), Label::class("c")];
        let r = conformal_classify(
            ClassificationTask {
                old: &zs,
                object: &[2.0],
                labels: &labels,
                measure: &SeparatingBand,
            },
            &[lvl(0.1)],
        )
        .unwrap();
        assert_eq!(r.warnings.len(), 1);
        assert_eq!(r.report.get(&Label::class("c")), Some(PValue::new(1, 3)));
    }
}
