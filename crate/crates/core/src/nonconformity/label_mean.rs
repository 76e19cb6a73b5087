use std::collections::BTreeMap;

use crate::bag::Bag;
use crate::error::Result;
use crate::example::{distance, Example, Label};

use super::{quantize, Convention, NonconformityMeasure};

/// Distance from `z`'s object to the mean object of its own label in
/// `B ∪ {z}`.
#[derive(Clone, Copy, Debug, Default)]
pub struct LabelMean;

fn accumulate(sum: &mut Vec<f64>, x: &[f64]) {
    if sum.is_empty() {
        sum.resize(x.len(), 0.0);
    }
    for (s, v) in sum.iter_mut().zip(x) {
        *s += v;
    }
}

fn mean(sum: &[f64], count: usize) -> Vec<f64> {
    sum.iter().map(|s| s / count as f64).collect()
}

impl NonconformityMeasure for LabelMean {
    fn name(&self) -> &'static str {
        "label-mean"
    }

    fn convention(&self) -> Convention {
        Convention::Deletion
    }

    fn score(&self, bag: &Bag<Example>, z: &Example) -> Result<f64> {
        let pooled = bag.with(z.clone());
        let mut sum = Vec::new();
        let mut count = 0;
        for e in pooled.elements().filter(|e| e.label == z.label) {
            accumulate(&mut sum, &e.object);
            count += 1;
        }
        Ok(quantize(distance(&mean(&sum, count), &z.object)))
    }

    fn scores(&self, examples: &[Example]) -> Result<Vec<f64>> {
        let mut sorted: Vec<&Example> = examples.iter().collect();
        sorted.sort();
        let mut sums: BTreeMap<&Label, (Vec<f64>, usize)> = BTreeMap::new();
        for e in sorted {
            let entry = sums.entry(&e.label).or_default();
            accumulate(&mut entry.0, &e.object);
            entry.1 += 1;
        }
        let means: BTreeMap<&Label, Vec<f64>> =
            sums.iter().map(|(y, (s, c))| (*y, mean(s, *c))).collect();
        Ok(examples
            .iter()
            .map(|z| quantize(distance(&means[&z.label], &z.object)))
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::iris_species;

    #[test]
    fn iris_species_average_scores() {
        let mut zs = iris_species();
        zs[24] = Example::classified(&[6.8], "s");
        let a = LabelMean.scores(&zs).unwrap();
        // Two-decimal renderings of the exact scores.
        for (i, want) in [(0, 0.06), (24, 1.74), (14, 1.02), (7, 0.38)] {
            assert!((a[i] - want).abs() < 0.005, "{i}: {}", a[i]);
        }
        zs[24] = Example::classified(&[6.8], "v");
        let a = LabelMean.scores(&zs).unwrap();
        for (i, want) in [(24, 0.7), (14, 1.1), (0, 0.06)] {
            assert!((a[i] - want).abs() < 0.005, "{i}: {}", a[i]);
        }
    }

    #[test]
    fn point_at_its_own_mean_scores_zero() {
        let bag: Bag<Example> = [Example::classified(&[2.0], "a")].into_iter().collect();
        assert_eq!(LabelMean.score(&bag, &Example::classified(&[2.0], "a")).unwrap(), 0.0);
    }

    #[test]
    fn batch_equals_single_bitwise() {
        let zs = iris_species();
        let full: Bag<Example> = zs.iter().collect();
        let batch = LabelMean.scores(&zs).unwrap();
        for (z, a) in zs.iter().zip(batch) {
            assert_eq!(LabelMean.score(&full.without(z).unwrap(), z).unwrap(), a);
        }
    }
}
