//! Structural properties of the engines on random small instances.

use std::sync::Arc;

use conformal_core::conformal::{
    candidate_pvalues, conformal_classify, conformal_regress_exact, ClassificationTask, Comparison,
    PValueProfile, RegressionTask,
};
use conformal_core::nonconformity::{
    classification_measure, regression_measure, Average, AverageUnpooled, Convention, KnnRatio,
    NonconformityMeasure, RegressionMeasure, CLASSIFICATION_MEASURES, REGRESSION_MEASURES,
};
use conformal_core::ocm::{
    ocm_classify, ocm_p_value, CompressionModel, ExchangeabilityModel, GaussianModel,
    WithinLabelModel,
};
use conformal_core::pvalue::{p_value_from_scores, region_at};
use conformal_core::validity::{lemma1_strangeness_check, ConformalClassifier, ConformalRegressor};
use conformal_core::{Bag, Example, Label, RealRegion, Result, SignificanceLevel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const LEVELS: [f64; 7] = [0.02, 0.05, 0.1, 0.2, 1.0 / 3.0, 0.5, 0.8];

fn classes() -> Vec<Label> {
    vec![Label::class("a"), Label::class("b"), Label::class("c")]
}

fn random_classified(rng: &mut ChaCha8Rng, n: usize, two_labels: bool) -> Vec<Example> {
    let k = if two_labels { 2 } else { 3 };
    (0..n)
        .map(|_| {
            let x = f64::from(rng.random_range(0..8u8)) * 0.5;
            let y = ["a", "b", "c"][rng.random_range(0..k)];
            Example::classified(&[x], y)
        })
        .collect()
}

fn random_regression(rng: &mut ChaCha8Rng, n: usize, arity: usize) -> Vec<Example> {
    (0..n)
        .map(|_| {
            let x: Vec<f64> = (0..arity).map(|_| f64::from(rng.random_range(0..6u8))).collect();
            let y = f64::from(rng.random_range(-20..20i32)) / 4.0;
            Example::regression(&x, y)
        })
        .collect()
}

fn lvl(e: f64) -> SignificanceLevel {
    SignificanceLevel::new(e).unwrap()
}

#[test]
fn classification_regions_are_nested() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let levels: Vec<SignificanceLevel> = LEVELS.iter().map(|&e| lvl(e)).collect();
    for _ in 0..60 {
        let n = rng.random_range(2..14);
        let two = rng.random_bool(0.5);
        let zs = random_classified(&mut rng, n + 1, two);
        for name in CLASSIFICATION_MEASURES {
            let m = classification_measure(name).unwrap();
            let task = ClassificationTask {
                old: &zs[..n],
                object: &zs[n].object,
                labels: &classes(),
                measure: m.as_ref(),
            };
            for cmp in [Comparison::All, Comparison::WithinLabel] {
                let (report, _) = candidate_pvalues(task, cmp).unwrap();
                for w in levels.windows(2) {
                    let wide = region_at(&report, w[0].epsilon());
                    let narrow = region_at(&report, w[1].epsilon());
                    assert!(narrow.iter().all(|y| wide.contains(y)), "{name}");
                }
            }
        }
    }
}

#[test]
fn regression_regions_are_nested() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..60 {
        let n = rng.random_range(3..12);
        let zs = random_regression(&mut rng, n + 1, 1);
        for name in REGRESSION_MEASURES {
            let m = regression_measure(name).unwrap();
            let Ok(family) = m.score_family(&zs[..n], &zs[n].object) else {
                continue;
            };
            let profile = PValueProfile::from_family(&family);
            for w in LEVELS.windows(2) {
                assert!(profile.region(w[1]).is_subset_of(&profile.region(w[0])), "{name}");
            }
        }
        if let Ok(pred) = GaussianModel::with_intercept().predict(&zs[..n], &zs[n].object) {
            for w in LEVELS.windows(2) {
                let (a, b) = (pred.interval(w[0]).unwrap(), pred.interval(w[1]).unwrap());
                assert!(b.is_subset_of(&a));
            }
        }
    }
}

/// A measure composed with a strictly increasing function.
struct Monotone<F: Fn(f64) -> f64 + Send + Sync> {
    inner: Arc<dyn NonconformityMeasure>,
    f: F,
}

impl<F: Fn(f64) -> f64 + Send + Sync> NonconformityMeasure for Monotone<F> {
    fn name(&self) -> &'static str {
        "monotone"
    }

    fn convention(&self) -> Convention {
        self.inner.convention()
    }

    fn score(&self, bag: &Bag<Example>, z: &Example) -> Result<f64> {
        Ok((self.f)(self.inner.score(bag, z)?))
    }

    fn scores(&self, examples: &[Example]) -> Result<Vec<f64>> {
        Ok(self.inner.scores(examples)?.into_iter().map(&self.f).collect())
    }
}

#[test]
fn monotone_transforms_leave_regions_unchanged() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let levels: Vec<SignificanceLevel> = LEVELS.iter().map(|&e| lvl(e)).collect();
    let transforms: [fn(f64) -> f64; 3] = [|a| a * a * a, |a| 3.0 * a + 1.0, f64::atan];
    for _ in 0..40 {
        let n = rng.random_range(2..12);
        let zs = random_classified(&mut rng, n + 1, true);
        for name in CLASSIFICATION_MEASURES {
            let inner = classification_measure(name).unwrap();
            let base = ClassificationTask {
                old: &zs[..n],
                object: &zs[n].object,
                labels: &classes(),
                measure: inner.as_ref(),
            };
            let want = conformal_classify(base, &levels).unwrap();
            for f in transforms {
                let m = Monotone {
                    inner: inner.clone(),
                    f,
                };
                let got = conformal_classify(ClassificationTask { measure: &m, ..base }, &levels).unwrap();
                assert_eq!(got.regions, want.regions, "{name}");
            }
        }
    }
    // Real labels: p-values from transformed scores match the exact profile.
    for _ in 0..30 {
        let n = rng.random_range(3..10);
        let zs = random_regression(&mut rng, n, 1);
        let x = [2.5];
        let family = KnnLike::family(&zs, &x);
        let profile = PValueProfile::from_family(&family);
        for k in 0..200 {
            let y = -6.0 + f64::from(k) * 0.0613;
            let cubed: Vec<f64> = family.eval(y).iter().map(|a| a * a * a).collect();
            assert_eq!(profile.p_value(y), p_value_from_scores(&cubed));
        }
    }
}

struct KnnLike;

impl KnnLike {
    fn family(old: &[Example], x: &[f64]) -> conformal_core::nonconformity::ScoreFamily {
        regression_measure("knn-reg").unwrap().score_family(old, x).unwrap()
    }
}

fn regions_close(a: &RealRegion, b: &RealRegion) -> bool {
    a.intervals().len() == b.intervals().len()
        && a.intervals().iter().zip(b.intervals()).all(|(p, q)| {
            let close = |u: f64, v: f64| u == v || (u - v).abs() <= 1e-9 * u.abs().max(1.0);
            close(p.lo, q.lo) && close(p.hi, q.hi)
        })
}

#[test]
fn pooled_and_unpooled_averages_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let levels: Vec<SignificanceLevel> = LEVELS.iter().map(|&e| lvl(e)).collect();
    for _ in 0..200 {
        let n = rng.random_range(1..15);
        let old: Vec<Example> = (0..n)
            .map(|_| Example::value(f64::from(rng.random_range(-10..10i32)) / 2.0))
            .collect();
        let run = |m: &dyn RegressionMeasure| {
            conformal_regress_exact(
                RegressionTask {
                    old: &old,
                    object: &[],
                    measure: m,
                },
                &levels,
            )
            .unwrap()
        };
        let (a, b) = (run(&Average), run(&AverageUnpooled));
        for ((_, ra), (_, rb)) in a.regions.iter().zip(&b.regions) {
            assert!(regions_close(ra, rb), "{ra} vs {rb}");
        }
    }
}

#[test]
fn strangeness_bound_on_random_bags() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let reg = ConformalRegressor {
        measure: Arc::new(Average),
    };
    let cls = ConformalClassifier::new(Arc::new(KnnRatio), classes());
    for _ in 0..100 {
        let values: Vec<Example> = (0..10)
            .map(|_| Example::value(f64::from(rng.random_range(0..6u8))))
            .collect();
        let labelled = random_classified(&mut rng, 10, false);
        for eps in [0.1, 0.3] {
            let r = lemma1_strangeness_check(&values, &reg, eps);
            assert!(r.pass, "{r:?}");
            let c = lemma1_strangeness_check(&labelled, &cls, eps);
            assert!(c.pass, "{c:?}");
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

#[test]
fn errors_are_rare_given_the_bag() {
    // For a bag of m examples, every ordering is equally likely; the last
    // prediction errs in at most a fraction ε of them.
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let eps_grid = [0.1, 0.2, 0.25, 1.0 / 3.0, 0.5];
    for m in 1..=6 {
        let perms = permutations(m);
        for _ in 0..6 {
            let values: Vec<f64> = (0..m).map(|_| f64::from(rng.random_range(0..3u8))).collect();
            let labelled = random_classified(&mut rng, m, true);
            for &eps in &eps_grid {
                let (mut reg_err, mut cls_err) = (0usize, 0usize);
                for p in &perms {
                    let seq: Vec<Example> = p.iter().map(|&i| Example::value(values[i])).collect();
                    let r = conformal_regress_exact(
                        RegressionTask {
                            old: &seq[..m - 1],
                            object: &[],
                            measure: &Average,
                        },
                        &[],
                    )
                    .unwrap();
                    if !r.profile.p_value(values[p[m - 1]]).exceeds(eps) {
                        reg_err += 1;
                    }
                    let seq: Vec<Example> = p.iter().map(|&i| labelled[i].clone()).collect();
                    let last = &seq[m - 1];
                    let task = ClassificationTask {
                        old: &seq[..m - 1],
                        object: &last.object,
                        labels: &classes()[..2],
                        measure: &KnnRatio,
                    };
                    let (report, _) = candidate_pvalues(task, Comparison::All).unwrap();
                    if !report.get(&last.label).unwrap().exceeds(eps) {
                        cls_err += 1;
                    }
                }
                let bound = eps * perms.len() as f64 + 1e-9;
                assert!(reg_err as f64 <= bound, "m={m} ε={eps}: {reg_err}/{}", perms.len());
                assert!(cls_err as f64 <= bound, "m={m} ε={eps}: {cls_err}/{}", perms.len());
            }
        }
    }
}

#[test]
fn discrete_models_match_the_conformal_engine_on_random_inputs() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let levels = [lvl(0.1), lvl(0.3)];
    for _ in 0..40 {
        let n = rng.random_range(1..10);
        let zs = random_classified(&mut rng, n + 1, false);
        for name in CLASSIFICATION_MEASURES {
            let m = classification_measure(name).unwrap();
            let task = ClassificationTask {
                old: &zs[..n],
                object: &zs[n].object,
                labels: &classes(),
                measure: m.as_ref(),
            };
            let ex = ocm_classify(&ExchangeabilityModel, task, &levels).unwrap();
            let direct = conformal_classify(task, &levels).unwrap();
            assert_eq!(ex.report, direct.report, "{name}");
            let (wl, _) = candidate_pvalues(task, Comparison::WithinLabel).unwrap();
            assert_eq!(ocm_classify(&WithinLabelModel, task, &levels).unwrap().report, wl);
        }
    }
    // Real labels at probe points off the breakpoints.
    for _ in 0..20 {
        let n = rng.random_range(3..9);
        let zs = random_regression(&mut rng, n, 1);
        for name in REGRESSION_MEASURES {
            let m = regression_measure(name).unwrap();
            let Ok(family) = m.score_family(&zs, &[1.0]) else {
                continue;
            };
            let profile = PValueProfile::from_family(&family);
            let prev = ExchangeabilityModel.summarize(&zs).unwrap();
            for k in 0..40 {
                let y = -5.0 + f64::from(k) * 0.2571;
                let z = Example::regression(&[1.0], y);
                let p = ocm_p_value(&ExchangeabilityModel, &prev, &z, m.as_ref()).unwrap();
                assert_eq!(p, profile.p_value(y), "{name} at {y}");
            }
        }
    }
}

#[test]
fn summaries_fold_to_direct_summaries() {
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    for _ in 0..30 {
        let zs = random_classified(&mut rng, 12, false);
        let bag: Bag<Example> = zs.iter().collect();
        assert_eq!(ExchangeabilityModel.summarize(&zs).unwrap(), bag);
        let mut rev = zs.clone();
        rev.reverse();
        assert_eq!(ExchangeabilityModel.summarize(&rev).unwrap(), bag);
        let wl = WithinLabelModel.summarize(&zs).unwrap();
        assert_eq!(wl.labels, zs.iter().map(|z| z.label.clone()).collect::<Vec<_>>());
        for (y, b) in &wl.bags {
            let direct: Bag<Example> = zs.iter().filter(|z| &z.label == y).collect();
            assert_eq!(b, &direct);
        }
        let rz = random_regression(&mut rng, 12, 2);
        let g = GaussianModel::with_intercept().summarize(&rz).unwrap();
        for j in 0..3 {
            let c: f64 = rz
                .iter()
                .map(|z| {
                    let row = [1.0, z.object[0], z.object[1]];
                    row[j] * z.label.as_real().unwrap()
                })
                .sum();
            assert!((g.xty[j] - c).abs() < 1e-12);
        }
    }
}
