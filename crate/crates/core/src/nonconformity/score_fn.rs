//! Scores as functions of an unknown real label `y`.
//!
//! Every regression measure here yields, for each example `i`, a continuous
//! piecewise function whose pieces have the form `|c·y + d|`. Most measures
//! need a single piece; nearest-neighbour medians that involve the
//! candidate itself need several.

use serde::Serialize;

/// `|c·y + d|` with `c ≥ 0` (the pair is flipped jointly when needed).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AbsAffine {
    pub c: f64,
    pub d: f64,
}

impl AbsAffine {
    pub fn new(c: f64, d: f64) -> Self {
        if c < 0.0 || (c == 0.0 && d < 0.0) {
            AbsAffine { c: -c, d: -d }
        } else {
            AbsAffine { c: c + 0.0, d: d + 0.0 }
        }
    }

    pub fn constant(v: f64) -> Self {
        AbsAffine::new(0.0, v)
    }

    pub fn eval(&self, y: f64) -> f64 {
        if self.c == 0.0 {
            return self.d.abs();
        }
        (self.c * y + self.d).abs()
    }
}

/// A continuous piecewise `|c·y + d|` function.
///
/// `pieces[k]` applies on `[knots[k-1], knots[k]]`, with `knots[-1] = −∞`
/// and `knots[len] = +∞`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScoreFunction {
    knots: Vec<f64>,
    pieces: Vec<AbsAffine>,
}

impl ScoreFunction {
    pub fn affine(f: AbsAffine) -> Self {
        ScoreFunction {
            knots: Vec::new(),
            pieces: vec![f],
        }
    }

    pub fn constant(v: f64) -> Self {
        Self::affine(AbsAffine::constant(v))
    }

    /// Builds a function from sorted knots, dropping zero-width pieces and
    /// merging equal neighbours.
    pub fn piecewise(knots: Vec<f64>, pieces: Vec<AbsAffine>) -> Self {
        assert_eq!(pieces.len(), knots.len() + 1, "one more piece than knots");
        let mut ks: Vec<f64> = Vec::with_capacity(knots.len());
        let mut ps: Vec<AbsAffine> = vec![pieces[0]];
        for (k, p) in knots.into_iter().zip(pieces.into_iter().skip(1)) {
            if let Some(&last_k) = ks.last() {
                debug_assert!(k >= last_k, "knots must be sorted");
                if k == last_k {
                    *ps.last_mut().unwrap() = p;
                    continue;
                }
            }
            if *ps.last().unwrap() == p {
                continue;
            }
            ks.push(k);
            ps.push(p);
        }
        ScoreFunction {
            knots: ks,
            pieces: ps,
        }
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn pieces(&self) -> &[AbsAffine] {
        &self.pieces
    }

    /// The single affine piece, if the function has one.
    pub fn as_affine(&self) -> Option<AbsAffine> {
        (self.pieces.len() == 1).then(|| self.pieces[0])
    }

    pub fn piece_at(&self, y: f64) -> AbsAffine {
        let k = self.knots.partition_point(|&t| t < y);
        self.pieces[k]
    }

    pub fn eval(&self, y: f64) -> f64 {
        self.piece_at(y).eval(y)
    }
}

/// One score function per example; the last belongs to the example whose
/// label is unknown.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScoreFamily {
    pub functions: Vec<ScoreFunction>,
}

impl ScoreFamily {
    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn eval(&self, y: f64) -> Vec<f64> {
        self.functions.iter().map(|f| f.eval(y)).collect()
    }

    /// Applies `y ↦ a·y + b` to the unknown label: the result scores label
    /// `y` the way `self` scores `a·y + b`.
    pub fn reparametrize(&self, a: f64, b: f64) -> ScoreFamily {
        assert!(a > 0.0);
        ScoreFamily {
            functions: self
                .functions
                .iter()
                .map(|f| {
                    ScoreFunction::piecewise(
                        f.knots.iter().map(|k| (k - b) / a).collect(),
                        f.pieces
                            .iter()
                            .map(|p| AbsAffine::new(p.c * a, p.c * b + p.d))
                            .collect(),
                    )
                })
                .collect(),
        }
    }
}

/// Single-piece scores `α_i(y) = |c_i·y + d_i|`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AffineScoreForm {
    pub coefficients: Vec<AbsAffine>,
}

impl AffineScoreForm {
    pub fn eval(&self, y: f64) -> Vec<f64> {
        self.coefficients.iter().map(|f| f.eval(y)).collect()
    }
}

impl From<AffineScoreForm> for ScoreFamily {
    fn from(form: AffineScoreForm) -> Self {
        ScoreFamily {
            functions: form
                .coefficients
                .into_iter()
                .map(ScoreFunction::affine)
                .collect(),
        }
    }
}

/// A continuous piecewise-linear function `y ↦ a·y + b`.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct PiecewiseLinear {
    pub knots: Vec<f64>,
    pub pieces: Vec<(f64, f64)>,
}

impl PiecewiseLinear {
    pub fn constant(b: f64) -> Self {
        PiecewiseLinear {
            knots: Vec::new(),
            pieces: vec![(0.0, b)],
        }
    }

    /// `|target − f(y)|` as a score function.
    pub fn residual_from(&self, target: f64) -> ScoreFunction {
        ScoreFunction::piecewise(
            self.knots.clone(),
            self.pieces
                .iter()
                .map(|&(a, b)| AbsAffine::new(-a, target - b))
                .collect(),
        )
    }
}

/// Median of `fixed ∪ {y}` as a function of `y`; `fixed` must be sorted.
/// An even count takes the mean of the two middle values.
pub(crate) fn median_with_symbol(fixed: &[f64]) -> PiecewiseLinear {
    let m = fixed.len();
    let total = m + 1;
    // Element at sorted position t when y sits at position r.
    let element = |t: usize, r: usize| -> (f64, f64) {
        match t.cmp(&r) {
            std::cmp::Ordering::Less => (0.0, fixed[t]),
            std::cmp::Ordering::Equal => (1.0, 0.0),
            std::cmp::Ordering::Greater => (0.0, fixed[t - 1]),
        }
    };
    let pieces = (0..=m)
        .map(|r| {
            if total % 2 == 1 {
                element(total / 2, r)
            } else {
                let (a1, b1) = element(total / 2 - 1, r);
                let (a2, b2) = element(total / 2, r);
                ((a1 + a2) / 2.0, (b1 + b2) / 2.0)
            }
        })
        .collect();
    PiecewiseLinear {
        knots: fixed.to_vec(),
        pieces,
    }
}

/// Median of a sorted, nonempty slice.
pub(crate) fn median_sorted(v: &[f64]) -> f64 {
    let m = v.len();
    if m % 2 == 1 {
        v[m / 2]
    } else {
        (v[m / 2 - 1] + v[m / 2]) / 2.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sign_normalization_flips_jointly() {
        assert_eq!(AbsAffine::new(-0.805, 1.345), AbsAffine { c: 0.805, d: -1.345 });
        assert_eq!(AbsAffine::new(0.0, -2.0), AbsAffine { c: 0.0, d: 2.0 });
        assert_eq!(AbsAffine::new(-2.0, 3.0).eval(1.0), 1.0);
    }

    #[test]
    fn piecewise_drops_empty_and_merges() {
        let f = ScoreFunction::piecewise(
            vec![1.0, 1.0, 2.0],
            vec![
                AbsAffine::new(1.0, 0.0),
                AbsAffine::new(0.0, 5.0),
                AbsAffine::new(0.0, 1.0),
                AbsAffine::new(0.0, 1.0),
            ],
        );
        assert_eq!(f.knots(), &[1.0]);
        assert_eq!(f.eval(0.5), 0.5);
        assert_eq!(f.eval(3.0), 1.0);
    }

    fn brute_median(fixed: &[f64], y: f64) -> f64 {
        let mut v = fixed.to_vec();
        v.push(y);
        v.sort_by(f64::total_cmp);
        median_sorted(&v)
    }

    proptest! {
        #[test]
        fn symbolic_median_matches_direct(
            mut fixed in prop::collection::vec(-5i32..5, 0..7),
            y in -60i32..60,
        ) {
            fixed.sort();
            let fixed: Vec<f64> = fixed.into_iter().map(f64::from).collect();
            let y = f64::from(y) / 10.0;
            let pl = median_with_symbol(&fixed);
            let f = pl.residual_from(0.0);
            prop_assert!((f.eval(y) - brute_median(&fixed, y).abs()).abs() < 1e-12);
        }

        #[test]
        fn reparametrize_is_substitution(c in -3.0f64..3.0, d in -3.0f64..3.0, a in 0.1f64..4.0, b in -2.0f64..2.0, y in -5.0f64..5.0) {
            let fam = ScoreFamily { functions: vec![ScoreFunction::affine(AbsAffine::new(c, d))] };
            let r = fam.reparametrize(a, b);
            prop_assert!((r.eval(y)[0] - fam.eval(a * y + b)[0]).abs() < 1e-9);
        }
    }
}
