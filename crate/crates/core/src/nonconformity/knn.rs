//! Nearest-neighbour measures.

use crate::bag::Bag;
use crate::error::{Error, Result};
use crate::example::{distance, Example};

use super::score_fn::{
    median_sorted, median_with_symbol, AbsAffine, PiecewiseLinear, ScoreFamily, ScoreFunction,
};
use super::{canonical_order, quantize, Convention, NonconformityMeasure, RegressionMeasure};

const RATIO: &str = "knn-ratio";
const REG: &str = "knn-reg";

/// Relative slack under which two neighbour distances count as tied.
const DIST_TIE: f64 = 1e-9;

fn ratio(same: f64, diff: f64) -> f64 {
    if diff == f64::INFINITY {
        // No example with another label: nothing to be confused with.
        0.0
    } else if same == 0.0 {
        0.0
    } else if diff == 0.0 {
        f64::INFINITY
    } else {
        quantize(same / diff)
    }
}

/// Distance to the nearest example with the same label divided by the
/// distance to the nearest example with a different label.
///
/// `0/0` scores 0 and `positive/0` scores `+∞`. Without any same-label
/// neighbour the numerator is `+∞`; without any different-label neighbour
/// the score is 0, as is the score against an empty bag.
#[derive(Clone, Copy, Debug, Default)]
pub struct KnnRatio;

impl NonconformityMeasure for KnnRatio {
    fn name(&self) -> &'static str {
        RATIO
    }

    fn convention(&self) -> Convention {
        Convention::Deletion
    }

    fn score(&self, bag: &Bag<Example>, z: &Example) -> Result<f64> {
        let (mut same, mut diff) = (f64::INFINITY, f64::INFINITY);
        for e in bag.elements() {
            let d = distance(&e.object, &z.object);
            if e.label == z.label {
                same = same.min(d);
            } else {
                diff = diff.min(d);
            }
        }
        Ok(ratio(same, diff))
    }

    fn scores(&self, examples: &[Example]) -> Result<Vec<f64>> {
        if examples.first().is_some_and(|z| z.arity() == 1) {
            return Ok(ratio_scores_1d(examples));
        }
        let n = examples.len();
        let mut out = Vec::with_capacity(n);
        for (i, z) in examples.iter().enumerate() {
            let (mut same, mut diff) = (f64::INFINITY, f64::INFINITY);
            for (j, e) in examples.iter().enumerate() {
                if i == j {
                    continue;
                }
                let d = distance(&e.object, &z.object);
                if e.label == z.label {
                    same = same.min(d);
                } else {
                    diff = diff.min(d);
                }
            }
            out.push(ratio(same, diff));
        }
        Ok(out)
    }
}

/// Sorted-order scan for one-dimensional objects.
fn ratio_scores_1d(examples: &[Example]) -> Vec<f64> {
    let order = canonical_order(examples);
    let xs: Vec<f64> = order.iter().map(|&i| examples[i].object[0]).collect();
    let mut out = vec![0.0; examples.len()];
    for (p, &i) in order.iter().enumerate() {
        let z = &examples[i];
        let x = xs[p];
        let (mut same, mut diff) = (f64::INFINITY, f64::INFINITY);
        // Walk outward; a side is exhausted once its distance exceeds both
        // current minima.
        for q in (0..p).rev() {
            let d = (x - xs[q]).abs();
            if d > same && d > diff {
                break;
            }
            if examples[order[q]].label == z.label {
                same = same.min(d);
            } else {
                diff = diff.min(d);
            }
        }
        for q in p + 1..xs.len() {
            let d = (xs[q] - x).abs();
            if d > same && d > diff {
                break;
            }
            if examples[order[q]].label == z.label {
                same = same.min(d);
            } else {
                diff = diff.min(d);
            }
        }
        out[i] = ratio(same, diff);
    }
    out
}

fn tied(d: f64, dmin: f64) -> bool {
    d - dmin <= DIST_TIE * dmin.max(1.0)
}

/// Prediction of the label at `x`: the label of the nearest object, or the
/// median label over all objects tied at the minimal distance.
pub fn point_predict_nn<'a>(
    neighbours: impl IntoIterator<Item = &'a Example>,
    x: &[f64],
) -> Result<f64> {
    let pts: Vec<(f64, f64)> = neighbours
        .into_iter()
        .map(|e| Ok((distance(&e.object, x), e.real_label(REG)?)))
        .collect::<Result<_>>()?;
    let dmin = pts
        .iter()
        .map(|p| p.0)
        .fold(f64::INFINITY, f64::min);
    if pts.is_empty() {
        return Err(Error::EmptyBag);
    }
    let mut ys: Vec<f64> = pts
        .iter()
        .filter(|p| tied(p.0, dmin))
        .map(|p| p.1)
        .collect();
    ys.sort_by(f64::total_cmp);
    Ok(median_sorted(&ys))
}

/// Absolute residual of the nearest-neighbour prediction.
#[derive(Clone, Copy, Debug, Default)]
pub struct KnnRegression;

impl NonconformityMeasure for KnnRegression {
    fn name(&self) -> &'static str {
        REG
    }

    fn convention(&self) -> Convention {
        Convention::Deletion
    }

    fn score(&self, bag: &Bag<Example>, z: &Example) -> Result<f64> {
        let y = z.real_label(REG)?;
        Ok((y - point_predict_nn(bag.elements(), &z.object)?).abs())
    }

    fn scores(&self, examples: &[Example]) -> Result<Vec<f64>> {
        let order = canonical_order(examples);
        let sorted: Vec<&Example> = order.iter().map(|&i| &examples[i]).collect();
        let mut out = vec![0.0; examples.len()];
        for (p, &i) in order.iter().enumerate() {
            let others = sorted
                .iter()
                .enumerate()
                .filter(|&(q, _)| q != p)
                .map(|(_, e)| *e);
            let y = examples[i].real_label(REG)?;
            out[i] = (y - point_predict_nn(others, &examples[i].object)?).abs();
        }
        Ok(out)
    }
}

impl RegressionMeasure for KnnRegression {
    fn score_family(&self, old: &[Example], x_new: &[f64]) -> Result<ScoreFamily> {
        if old.is_empty() {
            return Err(Error::EmptyBag);
        }
        let ys: Vec<f64> = old.iter().map(|e| e.real_label(REG)).collect::<Result<_>>()?;
        let mut functions = Vec::with_capacity(old.len() + 1);
        for (i, zi) in old.iter().enumerate() {
            let d_new = distance(x_new, &zi.object);
            let dists: Vec<(f64, f64)> = old
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(j, e)| (distance(&e.object, &zi.object), ys[j]))
                .collect();
            let dmin = dists.iter().map(|p| p.0).fold(d_new, f64::min);
            let mut fixed: Vec<f64> = dists
                .iter()
                .filter(|p| tied(p.0, dmin))
                .map(|p| p.1)
                .collect();
            fixed.sort_by(f64::total_cmp);
            let prediction = if tied(d_new, dmin) {
                median_with_symbol(&fixed)
            } else {
                PiecewiseLinear::constant(median_sorted(&fixed))
            };
            functions.push(prediction.residual_from(ys[i]));
        }
        let y_hat = point_predict_nn(old, x_new)?;
        functions.push(ScoreFunction::affine(AbsAffine::new(1.0, -y_hat)));
        Ok(ScoreFamily { functions })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{iris_petal, iris_species};
    use proptest::prelude::*;

    fn with_last(mut v: Vec<Example>, label: &str) -> Vec<Example> {
        let last = v.pop().unwrap();
        v.push(Example::classified(&last.object, label));
        v
    }

    #[test]
    fn iris_ratio_scores() {
        let s = KnnRatio.scores(&with_last(iris_species(), "s")).unwrap();
        assert_eq!(s[7], 0.5);
        assert_eq!(s[0], 0.0);
        assert_eq!(s[14], f64::INFINITY);
        assert_eq!(s[24], 13.0);
        let v = KnnRatio.scores(&with_last(iris_species(), "v")).unwrap();
        assert!((v[24] - 0.1 / 1.3).abs() < 1e-9);
    }

    #[test]
    fn ratio_conventions() {
        let a = Example::classified(&[1.0], "a");
        let empty = Bag::new();
        assert_eq!(KnnRatio.score(&empty, &a).unwrap(), 0.0);
        let only_same: Bag<Example> = [Example::classified(&[3.0], "a")].into_iter().collect();
        assert_eq!(KnnRatio.score(&only_same, &a).unwrap(), 0.0);
        let only_other: Bag<Example> = [Example::classified(&[3.0], "b")].into_iter().collect();
        assert_eq!(KnnRatio.score(&only_other, &a).unwrap(), f64::INFINITY);
        let zero_zero: Bag<Example> = [Example::classified(&[1.0], "a"), Example::classified(&[1.0], "b")]
            .into_iter()
            .collect();
        assert_eq!(KnnRatio.score(&zero_zero, &a).unwrap(), 0.0);
    }

    #[test]
    fn nn_prediction_takes_median_of_ties() {
        let petal = iris_petal();
        let old = &petal[..24];
        assert!((point_predict_nn(old, &[6.8]).unwrap() - 1.55).abs() < 1e-12);
        let single = [Example::regression(&[0.0], 5.0)];
        assert_eq!(point_predict_nn(&single, &[100.0]).unwrap(), 5.0);
        assert_eq!(point_predict_nn(&[], &[0.0]), Err(Error::EmptyBag));
        let scores = KnnRegression.scores(&petal).unwrap();
        assert_eq!(scores[1], 0.0);
        assert!((scores[0] - 0.3).abs() < 1e-12);
        // Neighbours at 5.0 carry 0.2, 0.3, 0.6: median 0.3.
        assert!((scores[14] - 0.7).abs() < 1e-12);
    }

    fn small_classification() -> impl Strategy<Value = Vec<Example>> {
        prop::collection::vec((0u8..6, 0u8..3, 0u8..2), 1..12).prop_map(|v| {
            v.into_iter()
                .map(|(x, w, y)| {
                    Example::classified(&[f64::from(x) * 0.3, f64::from(w)], ["a", "b"][y as usize])
                })
                .collect()
        })
    }

    proptest! {
        #[test]
        fn batch_matches_bag_scores(zs in small_classification(), one_d in any::<bool>()) {
            let zs: Vec<Example> = if one_d {
                zs.into_iter().map(|z| Example::new(vec![z.object[0]], z.label)).collect()
            } else { zs };
            let full: Bag<Example> = zs.iter().collect();
            let batch = KnnRatio.scores(&zs).unwrap();
            for (z, a) in zs.iter().zip(&batch) {
                prop_assert_eq!(KnnRatio.score(&full.without(z).unwrap(), z).unwrap(), *a);
            }
        }

        #[test]
        fn nn_family_matches_numeric(
            pts in prop::collection::vec((0u8..5, 0u8..5), 1..9),
            x_new in 0u8..5,
            y in -10i32..60,
        ) {
            let old: Vec<Example> = pts.iter()
                .map(|&(x, y)| Example::regression(&[f64::from(x)], f64::from(y) * 0.5))
                .collect();
            let y = f64::from(y) / 10.0;
            let fam = KnnRegression.score_family(&old, &[f64::from(x_new)]).unwrap();
            let mut all = old.clone();
            all.push(Example::regression(&[f64::from(x_new)], y));
            let direct = KnnRegression.scores(&all).unwrap();
            for (a, b) in fam.eval(y).iter().zip(&direct) {
                prop_assert!((a - b).abs() < 1e-9);
            }
        }
    }
}
