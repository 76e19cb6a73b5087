//! Exact conformal regions for real labels.
//!
//! For each old example `i` the set `S_i = {y : α_i(y) ≥ α_n(y)}` is a
//! finite union of closed intervals, found by solving
//! `(c_i y + d_i)² − (c_n y + d_n)² ≥ 0` piece by piece. The count
//! `1 + #{i : y ∈ S_i}` is then swept over the sorted endpoints, giving an
//! exact p-value profile from which every region `{y : p(y) > ε}` is read
//! off.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::example::{check_schema, Example, Object};
use crate::level::SignificanceLevel;
use crate::nonconformity::{AbsAffine, Average, RegressionMeasure, ScoreFamily, ScoreFunction};
use crate::pvalue::{count_exceeds, PValue};
use crate::region::{Interval, RealRegion};

/// Roots this close to a piece boundary are snapped onto it.
const ROOT_TOL: f64 = 1e-12;

/// Affine pieces whose coefficients agree to this relative precision are
/// the same function up to rounding, and dominate each other everywhere.
const COEF_TIE: f64 = 1e-9;

fn negligible(g: (f64, f64), a: AbsAffine, b: AbsAffine) -> bool {
    g.0.abs() <= COEF_TIE * a.c.abs().max(b.c.abs()).max(1.0)
        && g.1.abs() <= COEF_TIE * a.d.abs().max(b.d.abs()).max(1.0)
}

fn near(a: f64, b: f64) -> bool {
    a.is_finite() && b.is_finite() && (a - b).abs() <= ROOT_TOL * a.abs().max(b.abs()).max(1.0)
}

/// A point strictly inside `(lo, hi)`.
fn probe(lo: f64, hi: f64) -> f64 {
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => lo + (hi - lo) / 2.0,
        (false, true) => hi - 1.0 - hi.abs(),
        (true, false) => lo + 1.0 + lo.abs(),
        (false, false) => 0.0,
    }
}

fn merged_knots(a: &ScoreFunction, b: &ScoreFunction) -> Vec<f64> {
    let mut k: Vec<f64> = a.knots().iter().chain(b.knots()).copied().collect();
    k.sort_by(f64::total_cmp);
    k.dedup();
    k
}

/// `{y ∈ [lo, hi] : |fi(y)| ≥ |fn(y)|}` for single affine pieces.
fn dominance_on_piece(fi: AbsAffine, fnn: AbsAffine, lo: f64, hi: f64, out: &mut Vec<Interval>) {
    if !fi.d.is_finite() || !fnn.d.is_finite() {
        // Constant infinite scores: ∞ ≥ anything, finite < ∞.
        if fi.d.is_infinite() {
            out.push(Interval::new(lo, hi));
        }
        return;
    }
    let g1 = (fi.c - fnn.c, fi.d - fnn.d);
    let g2 = (fi.c + fnn.c, fi.d + fnn.d);
    if negligible(g1, fi, fnn) || negligible(g2, fi, fnn) {
        out.push(Interval::new(lo, hi));
        return;
    }
    let mut pts = vec![lo];
    for (s, t) in [g1, g2] {
        if s != 0.0 {
            let mut r = -t / s;
            if near(r, lo) {
                r = lo;
            } else if near(r, hi) {
                r = hi;
            }
            if r >= lo && r <= hi {
                pts.push(r);
                out.push(Interval::point(r));
            }
        }
    }
    pts.push(hi);
    pts.sort_by(f64::total_cmp);
    for w in pts.windows(2) {
        let (p, q) = (w[0], w[1]);
        if p >= q {
            continue;
        }
        let m = probe(p, q);
        let v1 = g1.0 * m + g1.1;
        let v2 = g2.0 * m + g2.1;
        if v1 == 0.0 || v2 == 0.0 || (v1 > 0.0) == (v2 > 0.0) {
            out.push(Interval::new(p, q));
        }
    }
}

/// Closed set `{y : α_i(y) ≥ α_n(y)}`.
pub fn dominance_set(fi: &ScoreFunction, fnn: &ScoreFunction) -> RealRegion {
    let knots = merged_knots(fi, fnn);
    let mut out = Vec::new();
    let bounds: Vec<f64> = std::iter::once(f64::NEG_INFINITY)
        .chain(knots.iter().copied())
        .chain(std::iter::once(f64::INFINITY))
        .collect();
    for w in bounds.windows(2) {
        let m = probe(w[0], w[1]);
        dominance_on_piece(fi.piece_at(m), fnn.piece_at(m), w[0], w[1], &mut out);
    }
    RealRegion::from_intervals(out)
}

/// The exact conformal p-value `p(y)` as a step function of the candidate
/// label: constant on the open segments between knots, with its own value
/// at each knot.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PValueProfile {
    pub n: usize,
    pub knots: Vec<f64>,
    /// Count `#{i : α_i ≥ α_n}` at each knot.
    pub at_knot: Vec<usize>,
    /// Count on each open segment; `between[j]` covers `(knots[j−1], knots[j])`
    /// with infinite ends, so it has one more entry than `knots`.
    pub between: Vec<usize>,
}

impl PValueProfile {
    pub fn from_family(family: &ScoreFamily) -> Self {
        let n = family.len();
        assert!(n > 0, "empty score family");
        let last = &family.functions[n - 1];
        let sets: Vec<RealRegion> = family.functions[..n - 1]
            .iter()
            .map(|f| dominance_set(f, last))
            .collect();
        let mut knots: Vec<f64> = sets
            .iter()
            .flat_map(|s| s.intervals().iter().flat_map(|iv| [iv.lo, iv.hi]))
            .filter(|v| v.is_finite())
            .map(|v| v + 0.0)
            .collect();
        knots.sort_by(f64::total_cmp);
        knots.dedup();
        let m = knots.len();
        // `+ 0.0` folds `-0.0` into `0.0` so lookups agree with `dedup`.
        let index = |v: f64| knots.binary_search_by(|k| k.total_cmp(&(v + 0.0))).unwrap();
        let mut dk = vec![0i64; m + 1];
        let mut ds = vec![0i64; m + 2];
        for iv in sets.iter().flat_map(|s| s.intervals()) {
            let a = iv.lo.is_finite().then(|| index(iv.lo));
            let b = iv.hi.is_finite().then(|| index(iv.hi));
            let (k0, k1) = (a.unwrap_or(0), b.map_or(m, |b| b + 1));
            if k0 < k1 {
                dk[k0] += 1;
                dk[k1] -= 1;
            }
            let (s0, s1) = (a.map_or(0, |a| a + 1), b.map_or(m + 1, |b| b + 1));
            if s0 < s1 {
                ds[s0] += 1;
                ds[s1] -= 1;
            }
        }
        let prefix = |d: &[i64], len: usize| -> Vec<usize> {
            let mut acc = 0i64;
            (0..len)
                .map(|j| {
                    acc += d[j];
                    1 + acc as usize
                })
                .collect()
        };
        PValueProfile {
            n,
            at_knot: prefix(&dk, m),
            between: prefix(&ds, m + 1),
            knots,
        }
    }

    pub fn p_value(&self, y: f64) -> PValue {
        let j = self.knots.partition_point(|&k| k < y);
        let count = if self.knots.get(j) == Some(&y) {
            self.at_knot[j]
        } else {
            self.between[j]
        };
        PValue::new(count, self.n)
    }

    /// `{y : p(y) > ε}` as a closed region.
    pub fn region(&self, epsilon: f64) -> RealRegion {
        let keep = |c: usize| count_exceeds(c, self.n, epsilon);
        let mut out = Vec::new();
        let mut start: Option<f64> = None;
        let m = self.knots.len();
        for j in 0..=m {
            let seg_lo = if j == 0 { f64::NEG_INFINITY } else { self.knots[j - 1] };
            if keep(self.between[j]) {
                start.get_or_insert(seg_lo);
            } else if let Some(s) = start.take() {
                out.push(Interval::new(s, seg_lo));
            }
            if j == m {
                break;
            }
            let k = self.knots[j];
            if keep(self.at_knot[j]) {
                start.get_or_insert(k);
            } else if let Some(s) = start.take() {
                // Segment included but knot excluded: close at the knot
                // anyway; the sets are closed so this does not occur.
                out.push(Interval::new(s, k));
            }
        }
        if let Some(s) = start {
            out.push(Interval::new(s, f64::INFINITY));
        }
        RealRegion::from_intervals(out)
    }
}

/// Exact regions for a score family, one per level.
pub fn conformal_regress_family(family: &ScoreFamily, epsilons: &[f64]) -> (PValueProfile, Vec<RealRegion>) {
    let profile = PValueProfile::from_family(family);
    let regions = epsilons.iter().map(|&e| profile.region(e)).collect();
    (profile, regions)
}

/// Old examples, the new object, and a measure for real labels.
#[derive(Clone, Copy)]
pub struct RegressionTask<'a> {
    pub old: &'a [Example],
    pub object: &'a [f64],
    pub measure: &'a dyn RegressionMeasure,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegressionResult {
    pub measure: &'static str,
    pub profile: PValueProfile,
    pub regions: Vec<(f64, RealRegion)>,
}

/// Exact conformal regions `{y : #{i : α_i(y) ≥ α_n(y)} > nε}`.
pub fn conformal_regress_exact(
    task: RegressionTask<'_>,
    epsilons: &[SignificanceLevel],
) -> Result<RegressionResult> {
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
    let family = task.measure.score_family(task.old, task.object)?;
    let eps: Vec<f64> = epsilons.iter().map(|e| e.epsilon()).collect();
    let (profile, regions) = conformal_regress_family(&family, &eps);
    Ok(RegressionResult {
        measure: task.measure.name(),
        profile,
        regions: eps.into_iter().zip(regions).collect(),
    })
}

/// Prediction of a number from old numbers alone, using the distance to
/// the pooled average.
pub fn conformal_old_examples(values: &[f64], epsilons: &[SignificanceLevel]) -> Result<Vec<RealRegion>> {
    if values.is_empty() {
        return Err(Error::InsufficientData("at least one old value is required".into()));
    }
    let old: Vec<Example> = values.iter().map(|&v| Example::value(v)).collect();
    let empty: Object = Vec::new().into();
    let r = conformal_regress_exact(
        RegressionTask {
            old: &old,
            object: &empty,
            measure: &Average,
        },
        epsilons,
    )?;
    Ok(r.regions.into_iter().map(|(_, r)| r).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{czuber_values, iris_petal};
    use crate::nonconformity::{KnnRegression, LeastSquares};
    use crate::region::grid_snap;

    fn lvl(e: f64) -> SignificanceLevel {
        SignificanceLevel::new(e).unwrap()
    }

    #[test]
    fn czuber_conformal_interval() {
        let r = conformal_old_examples(&czuber_values(), &[lvl(0.05)]).unwrap();
        let iv = r[0].intervals();
        assert_eq!(iv.len(), 1);
        assert!((iv[0].lo - 10.0).abs() < 1e-9);
        assert!((iv[0].hi - 214.0 / 9.0).abs() < 1e-9);
        let g = grid_snap(&r[0], 1.0, 0.0);
        assert_eq!(g, RealRegion::interval(10.0, 23.0));
    }

    #[test]
    fn rounding_twins_dominate_everywhere() {
        let a = AbsAffine { c: 0.3, d: -0.1 };
        let b = AbsAffine {
            c: 0.3 * (1.0 + 4e-16),
            d: -0.1 * (1.0 - 4e-16),
        };
        let set = dominance_set(&ScoreFunction::affine(a), &ScoreFunction::affine(b));
        assert_eq!(set, RealRegion::full());
    }

    #[test]
    fn all_equal_values_contain_the_value() {
        let r = conformal_old_examples(&[5.0, 5.0, 5.0], &[lvl(0.7)]).unwrap();
        assert!(r[0].contains(5.0));
    }

    #[test]
    fn nearest_neighbour_regions() {
        let zs = iris_petal();
        let task = RegressionTask {
            old: &zs[..24],
            object: &[6.8],
            measure: &KnnRegression,
        };
        let r = conformal_regress_exact(task, &[lvl(0.04), lvl(0.08)]).unwrap();
        let snapped: Vec<String> = r
            .regions
            .iter()
            .map(|(_, reg)| grid_snap(reg, 0.1, 0.0).render(1))
            .collect();
        // Largest old score is 0.70 and the second largest 0.40, both
        // about the prediction 1.55.
        assert_eq!(snapped, vec!["[0.9, 2.2]", "[1.2, 1.9]"]);
    }

    #[test]
    fn least_squares_regions() {
        let zs = iris_petal();
        let task = RegressionTask {
            old: &zs[..24],
            object: &[6.8],
            measure: &LeastSquares::inclusion(),
        };
        let r = conformal_regress_exact(task, &[lvl(0.04), lvl(0.08)]).unwrap();
        let snapped: Vec<String> = r
            .regions
            .iter()
            .map(|(_, reg)| grid_snap(reg, 0.1, 0.0).render(1))
            .collect();
        assert_eq!(snapped, vec!["[1.0, 2.4]", "[1.0, 2.3]"]);
    }

    #[test]
    fn profile_matches_pointwise_counts() {
        let zs = iris_petal();
        let fam = KnnRegression.score_family(&zs[..24], &[6.8]).unwrap();
        let profile = PValueProfile::from_family(&fam);
        for k in -10..40 {
            let y = f64::from(k) * 0.1 + 0.0371;
            let direct = crate::pvalue::p_value_from_scores(&fam.eval(y));
            assert_eq!(profile.p_value(y), direct, "y = {y}");
        }
    }

    #[test]
    fn constant_candidate_score_gives_full_or_empty() {
        let fam = ScoreFamily {
            functions: vec![
                ScoreFunction::constant(1.0),
                ScoreFunction::constant(2.0),
                ScoreFunction::constant(1.5),
            ],
        };
        let p = PValueProfile::from_family(&fam);
        assert_eq!(p.region(0.5), RealRegion::full());
        assert!(p.region(0.7).is_empty());
    }
}
