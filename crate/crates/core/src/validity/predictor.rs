//! Region predictors that can be run over a stream.

use std::sync::Arc;

use crate::conformal::{candidate_pvalues, conformal_regress_family, ClassificationTask, Comparison};
use crate::error::Result;
use crate::example::{Example, Label};
use crate::nonconformity::{NonconformityMeasure, RegressionMeasure};
use crate::ocm::GaussianModel;
use crate::pvalue::{region_at, PValue};
use crate::region::{PredictionRegion, RealRegion};

/// A region with the p-values it was read from.
#[derive(Clone, Debug, PartialEq)]
pub struct Prediction {
    pub region: PredictionRegion,
    pub p_values: Vec<(Label, PValue)>,
    pub warnings: Vec<String>,
}

/// Anything that maps old examples and a new object to a region at a
/// given level. Levels are raw reals so that `ε = 0` (full space) and
/// `ε = 1` (empty region) are usable at the edges.
pub trait RegionPredictor: Send + Sync {
    fn describe(&self) -> String;

    /// Fewest old examples needed for a genuine prediction.
    fn min_history(&self, _first: &Example) -> usize {
        2
    }

    /// The region issued during warm-up.
    fn full_region(&self) -> PredictionRegion;

    fn predict(&self, history: &[Example], object: &[f64], epsilon: f64) -> Result<Prediction>;
}

/// Conformal prediction over a finite label space, comparing either with
/// all examples or only within the candidate's label.
#[derive(Clone)]
pub struct ConformalClassifier {
    pub measure: Arc<dyn NonconformityMeasure>,
    pub labels: Vec<Label>,
    pub comparison: Comparison,
}

impl ConformalClassifier {
    pub fn new(measure: Arc<dyn NonconformityMeasure>, labels: Vec<Label>) -> Self {
        ConformalClassifier {
            measure,
            labels,
            comparison: Comparison::All,
        }
    }

    pub fn within_label(measure: Arc<dyn NonconformityMeasure>, labels: Vec<Label>) -> Self {
        ConformalClassifier {
            measure,
            labels,
            comparison: Comparison::WithinLabel,
        }
    }
}

impl RegionPredictor for ConformalClassifier {
    fn describe(&self) -> String {
        let model = match self.comparison {
            Comparison::All => "exchangeable",
            Comparison::WithinLabel => "within-label",
        };
        format!("{} / {model}", self.measure.name())
    }

    fn full_region(&self) -> PredictionRegion {
        PredictionRegion::LabelSet(self.labels.clone())
    }

    fn predict(&self, history: &[Example], object: &[f64], epsilon: f64) -> Result<Prediction> {
        let task = ClassificationTask {
            old: history,
            object,
            labels: &self.labels,
            measure: self.measure.as_ref(),
        };
        let (report, warnings) = candidate_pvalues(task, self.comparison)?;
        Ok(Prediction {
            region: PredictionRegion::LabelSet(region_at(&report, epsilon)),
            p_values: report.candidates,
            warnings,
        })
    }
}

/// Exact conformal regression with a measure that exposes its score
/// family.
#[derive(Clone)]
pub struct ConformalRegressor {
    pub measure: Arc<dyn RegressionMeasure>,
}

impl RegionPredictor for ConformalRegressor {
    fn describe(&self) -> String {
        format!("{} / exchangeable", self.measure.name())
    }

    fn full_region(&self) -> PredictionRegion {
        PredictionRegion::Real(RealRegion::full())
    }

    fn predict(&self, history: &[Example], object: &[f64], epsilon: f64) -> Result<Prediction> {
        let family = self.measure.score_family(history, object)?;
        let (_, regions) = conformal_regress_family(&family, &[epsilon]);
        Ok(Prediction {
            region: PredictionRegion::Real(regions.into_iter().next().expect("one level")),
            p_values: Vec::new(),
            warnings: Vec::new(),
        })
    }
}

/// The t-interval of the Gaussian linear model (Fisher's interval when
/// objects are empty and an intercept is used).
#[derive(Clone, Copy, Debug)]
pub struct GaussianPredictor {
    pub model: GaussianModel,
}

impl RegionPredictor for GaussianPredictor {
    fn describe(&self) -> String {
        if self.model.intercept {
            "residual / gaussian (intercept)".into()
        } else {
            "residual / gaussian".into()
        }
    }

    fn min_history(&self, first: &Example) -> usize {
        self.model.design_row(&first.object).len() + 1
    }

    fn full_region(&self) -> PredictionRegion {
        PredictionRegion::Real(RealRegion::full())
    }

    fn predict(&self, history: &[Example], object: &[f64], epsilon: f64) -> Result<Prediction> {
        let pred = self.model.predict(history, object)?;
        let region = if epsilon <= 0.0 {
            RealRegion::full()
        } else if epsilon >= 1.0 {
            RealRegion::empty()
        } else {
            pred.interval(epsilon)?
        };
        Ok(Prediction {
            region: PredictionRegion::Real(region),
            p_values: Vec::new(),
            warnings: pred.warnings,
        })
    }
}
