//! On-line compression models: a summary updated example by example, and
//! one-step backward kernels describing how the last example could have
//! been drawn from the current summary.
//!
//! Conformal prediction works in any such model: the p-value of a
//! candidate is the kernel probability that a redrawn last example is at
//! least as strange as the actual one.

mod exchangeable;
mod gaussian;
mod tdist;
mod within_label;

use std::fmt::Debug;

pub use exchangeable::ExchangeabilityModel;
pub use gaussian::{
    fisher_interval, fisher_prediction, gaussian_linear_interval, sphere_conditional_sample,
    sphere_conditional_sample_with, t_statistic, GaussianModel, GaussianPrediction,
    GaussianSummary,
};
pub use tdist::{betai, ln_gamma, t_cdf, t_pdf, t_quantile, t_sf, TDistribution};
pub use within_label::{WithinLabelModel, WithinLabelSummary};

use crate::bag::Bag;
use crate::conformal::{ClassificationResult, ClassificationTask};
use crate::error::{Error, Result};
use crate::example::{check_schema, Example};
use crate::level::SignificanceLevel;
use crate::nonconformity::{score_against_others, NonconformityMeasure};
use crate::pvalue::{PValue, PValueReport};

/// Summaries `σ_n`, the empty summary `□`, and updating functions
/// `σ_n = U(σ_{n−1}, z_n)`.
pub trait CompressionModel {
    type Summary: Clone + Debug + PartialEq;

    fn name(&self) -> &'static str;

    fn empty(&self) -> Self::Summary;

    fn update(&self, summary: &Self::Summary, z: &Example) -> Result<Self::Summary>;

    /// `Σ_n(z_1, …, z_n)` by folding [`CompressionModel::update`].
    fn summarize(&self, examples: &[Example]) -> Result<Self::Summary> {
        examples
            .iter()
            .try_fold(self.empty(), |s, z| self.update(&s, z))
    }
}

/// One outcome of a one-step kernel: the previous summary and the last
/// example, with an integer weight.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelAtom<S> {
    pub previous: S,
    pub example: Example,
    pub weight: usize,
}

/// A one-step kernel `R_n(· | σ_n)` with rational probabilities
/// `weight / total`.
#[derive(Clone, Debug, PartialEq)]
pub struct OneStepKernel<S> {
    pub atoms: Vec<KernelAtom<S>>,
    pub total: usize,
}

/// A model whose one-step kernels are finite and can be enumerated.
pub trait DiscreteCompressionModel: CompressionModel {
    fn one_step(&self, summary: &Self::Summary) -> Result<OneStepKernel<Self::Summary>>;

    /// The bag of examples a summary stands for; nonconformity measures
    /// see summaries through this bag.
    fn examples(&self, summary: &Self::Summary) -> Bag<Example>;
}

/// `R_n(A(σ̃_{n−1}, z̃_n) ≥ A(σ_{n−1}, z_n) | σ_n)` where
/// `σ_n = U(previous, z)`.
pub fn ocm_p_value<M: DiscreteCompressionModel>(
    model: &M,
    previous: &M::Summary,
    z: &Example,
    measure: &dyn NonconformityMeasure,
) -> Result<PValue> {
    let actual = score_against_others(measure, &model.examples(previous), z)?;
    let current = model.update(previous, z)?;
    let kernel = model.one_step(&current)?;
    let mut count = 0;
    for atom in &kernel.atoms {
        let a = score_against_others(measure, &model.examples(&atom.previous), &atom.example)?;
        if a >= actual {
            count += atom.weight;
        }
    }
    Ok(PValue::new(count, kernel.total))
}

/// The conformal step in a discrete model: every candidate label is
/// appended to the history and tested with [`ocm_p_value`].
///
/// A candidate whose scores cannot be computed is treated as maximally
/// strange, with p-value `1/total`, and reported in the warnings.
pub fn ocm_classify<M: DiscreteCompressionModel>(
    model: &M,
    task: ClassificationTask<'_>,
    epsilons: &[SignificanceLevel],
) -> Result<ClassificationResult> {
    if task.labels.is_empty() {
        return Err(Error::InvalidArgument("label space is empty".into()));
    }
    check_schema(task.old)?;
    let previous = model.summarize(task.old)?;
    let mut candidates = Vec::with_capacity(task.labels.len());
    let mut warnings = Vec::new();
    for y in task.labels {
        let z = Example::new(task.object.to_vec(), y.clone());
        let p = match ocm_p_value(model, &previous, &z, task.measure) {
            Ok(p) => p,
            Err(e) => {
                warnings.push(format!("candidate {y}: {e}; scored as +∞"));
                let total = model.one_step(&model.update(&previous, &z)?)?.total;
                PValue::new(1, total)
            }
        };
        candidates.push((y.clone(), p));
    }
    Ok(ClassificationResult::assemble(
        task.measure.name(),
        PValueReport::new(candidates),
        warnings,
        epsilons,
    ))
}
