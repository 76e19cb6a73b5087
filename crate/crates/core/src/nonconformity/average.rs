use crate::bag::Bag;
use crate::error::{Error, Result};
use crate::example::Example;

use super::score_fn::{AbsAffine, ScoreFamily, ScoreFunction};
use super::{Convention, NonconformityMeasure, RegressionMeasure};

const NAME: &str = "average";
const UNPOOLED: &str = "average-unpooled";

fn labels<'a>(it: impl Iterator<Item = &'a Example>, measure: &'static str) -> Result<Vec<f64>> {
    it.map(|z| z.real_label(measure)).collect()
}

/// Distance from `z`'s label to the mean label of `B ∪ {z}`. Objects are
/// ignored. An empty bag gives 0.
#[derive(Clone, Copy, Debug, Default)]
pub struct Average;

impl NonconformityMeasure for Average {
    fn name(&self) -> &'static str {
        NAME
    }

    fn convention(&self) -> Convention {
        Convention::Deletion
    }

    fn score(&self, bag: &Bag<Example>, z: &Example) -> Result<f64> {
        let y = z.real_label(NAME)?;
        let pooled = bag.with(z.clone());
        let ys = labels(pooled.elements(), NAME)?;
        let mean = ys.iter().sum::<f64>() / ys.len() as f64;
        Ok((mean - y).abs())
    }

    fn scores(&self, examples: &[Example]) -> Result<Vec<f64>> {
        let ys = labels(examples.iter(), NAME)?;
        let mut sorted = examples.to_vec();
        sorted.sort();
        let total: f64 = labels(sorted.iter(), NAME)?.iter().sum();
        let mean = total / ys.len() as f64;
        Ok(ys.iter().map(|y| (mean - y).abs()).collect())
    }
}

impl RegressionMeasure for Average {
    fn score_family(&self, old: &[Example], _x_new: &[f64]) -> Result<ScoreFamily> {
        let ys = labels(old.iter(), NAME)?;
        let mut sorted = old.to_vec();
        sorted.sort();
        let s: f64 = labels(sorted.iter(), NAME)?.iter().sum();
        let n = (ys.len() + 1) as f64;
        // Mean of all n labels is (s + y)/n.
        let mut functions: Vec<ScoreFunction> = ys
            .iter()
            .map(|&yi| ScoreFunction::affine(AbsAffine::new(1.0 / n, s / n - yi)))
            .collect();
        functions.push(ScoreFunction::affine(AbsAffine::new(1.0 / n - 1.0, s / n)));
        Ok(ScoreFamily { functions })
    }
}

/// Distance from `z`'s label to the mean label of `B` alone (`z`
/// excluded). An empty bag gives 0.
#[derive(Clone, Copy, Debug, Default)]
pub struct AverageUnpooled;

impl NonconformityMeasure for AverageUnpooled {
    fn name(&self) -> &'static str {
        UNPOOLED
    }

    fn convention(&self) -> Convention {
        Convention::Deletion
    }

    fn score(&self, bag: &Bag<Example>, z: &Example) -> Result<f64> {
        let y = z.real_label(UNPOOLED)?;
        if bag.is_empty() {
            return Ok(0.0);
        }
        let ys = labels(bag.elements(), UNPOOLED)?;
        Ok((ys.iter().sum::<f64>() / ys.len() as f64 - y).abs())
    }
}

impl RegressionMeasure for AverageUnpooled {
    fn score_family(&self, old: &[Example], _x_new: &[f64]) -> Result<ScoreFamily> {
        if old.is_empty() {
            return Err(Error::precondition(UNPOOLED, "at least one old example"));
        }
        let ys = labels(old.iter(), UNPOOLED)?;
        let mut sorted = old.to_vec();
        sorted.sort();
        let s: f64 = labels(sorted.iter(), UNPOOLED)?.iter().sum();
        let m = ys.len() as f64;
        // For i < n the other labels are the old ones minus y_i, plus y.
        let mut functions: Vec<ScoreFunction> = if ys.len() == 1 {
            vec![ScoreFunction::affine(AbsAffine::new(1.0, -ys[0]))]
        } else {
            ys.iter()
                .map(|&yi| ScoreFunction::affine(AbsAffine::new(1.0 / m, (s - yi) / m - yi)))
                .collect()
        };
        functions.push(ScoreFunction::affine(AbsAffine::new(1.0, -s / m)));
        Ok(ScoreFamily { functions })
    }
}
