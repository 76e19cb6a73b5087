//! The on-line Gaussian linear model. The summary is the design together
//! with the moments `X′Y` and `Y′Y`; given it, the label vector is uniform
//! on the sphere `{Y : X′Y = C, Y′Y = r²}`. Conformal regions with the
//! residual measure `|y − ŷ|` are the classical t-intervals, which are
//! computed here in closed form.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::example::{check_schema, Example};
use crate::level::SignificanceLevel;
use crate::region::RealRegion;

use super::tdist::{t_quantile, TDistribution};
use super::CompressionModel;

const NAME: &str = "gaussian";

/// Condition number above which a design counts as rank deficient.
const MAX_CONDITION: f64 = 1e12;

/// Relative residual norm below which the fit counts as exact.
const ZERO_RSS: f64 = 1e-12;

/// `(X_n, X_n′Y_n, Y_n′Y_n)` with the design rows kept in order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GaussianSummary {
    pub rows: Vec<Vec<f64>>,
    pub xty: Vec<f64>,
    pub yty: f64,
}

impl GaussianSummary {
    /// The empty summary for designs with `p` columns.
    pub fn new(p: usize) -> Self {
        GaussianSummary {
            rows: Vec::new(),
            xty: vec![0.0; p],
            yty: 0.0,
        }
    }

    /// A summary given directly by `(X, C, r²)`.
    pub fn from_parts(rows: Vec<Vec<f64>>, c: Vec<f64>, r2: f64) -> Result<Self> {
        if rows.iter().any(|r| r.len() != c.len()) {
            return Err(Error::InvalidArgument(format!(
                "design rows must have {} entries to match X′Y",
                c.len()
            )));
        }
        if !(r2 >= 0.0) {
            return Err(Error::InvalidArgument(format!("Y′Y must be nonnegative, got {r2}")));
        }
        Ok(GaussianSummary { rows, xty: c, yty: r2 })
    }

    pub fn push(&mut self, row: Vec<f64>, y: f64) -> Result<()> {
        if row.len() != self.xty.len() {
            return Err(Error::LengthMismatch {
                expected: self.xty.len(),
                got: row.len(),
            });
        }
        for (c, x) in self.xty.iter_mut().zip(&row) {
            *c += x * y;
        }
        self.yty += y * y;
        self.rows.push(row);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn p(&self) -> usize {
        self.xty.len()
    }
}

/// Least-squares prediction with its t-based spread.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GaussianPrediction {
    /// `β̂`, intercept first when the design has one.
    pub coefficients: Vec<f64>,
    /// `ŷ_n = x_n β̂`.
    pub center: f64,
    /// `s²`, the residual sum of squares over `m − p`.
    pub s2: f64,
    /// `x_n′(X′X)⁻¹x_n`.
    pub leverage: f64,
    /// `s·√(1 + leverage)`.
    pub scale: f64,
    pub df: u32,
    pub warnings: Vec<String>,
}

impl GaussianPrediction {
    pub fn t_distribution(&self) -> TDistribution {
        TDistribution::new(self.df).expect("df ≥ 1 by construction")
    }

    /// `(y − ŷ) / (s √(1 + x′(X′X)⁻¹x))`.
    pub fn t_statistic(&self, y: f64) -> f64 {
        (y - self.center) / self.scale
    }

    /// `ŷ ± t^{ε/2} s √(1 + x′(X′X)⁻¹x)`.
    pub fn interval(&self, epsilon: f64) -> Result<RealRegion> {
        let t = t_quantile(f64::from(self.df), epsilon / 2.0)?;
        if self.scale == 0.0 {
            return Ok(RealRegion::interval(self.center, self.center));
        }
        let half = t * self.scale;
        Ok(RealRegion::interval(self.center - half, self.center + half))
    }

    pub fn half_width(&self, epsilon: f64) -> Result<f64> {
        Ok(t_quantile(f64::from(self.df), epsilon / 2.0)? * self.scale)
    }

    /// Two-sided p-value of a candidate label.
    pub fn p_value(&self, y: f64) -> f64 {
        if self.scale == 0.0 {
            return if y == self.center { 1.0 } else { 0.0 };
        }
        self.t_distribution().two_sided(self.t_statistic(y))
    }
}

fn singular_check(sv: &DVector<f64>) -> Result<()> {
    let (max, min) = (sv.max(), sv.min());
    if !(max > 0.0) || max > MAX_CONDITION * min {
        return Err(Error::DegenerateDesign(format!(
            "{NAME}: the design has condition number above {MAX_CONDITION:e}"
        )));
    }
    Ok(())
}

/// Fits `rows`/`ys` and predicts at `x`.
fn fit(rows: &[&[f64]], ys: &[f64], x: &[f64]) -> Result<GaussianPrediction> {
    let (m, p) = (rows.len(), x.len());
    if p == 0 {
        return Err(Error::InvalidArgument(format!("{NAME}: the design has no columns")));
    }
    if m <= p {
        return Err(Error::InsufficientData(format!(
            "{NAME}: {m} examples leave no residual variance with {p} coefficients"
        )));
    }
    let a = DMatrix::from_fn(m, p, |i, j| rows[i][j]);
    let svd = a.clone().svd(true, true);
    singular_check(&svd.singular_values)?;
    let u = svd.u.as_ref().expect("U requested");
    let v_t = svd.v_t.as_ref().expect("Vᵀ requested");
    let sigma = &svd.singular_values;
    let y = DVector::from_column_slice(ys);
    let uty = u.transpose() * &y;
    let scaled = uty.component_div(sigma);
    let beta = v_t.transpose() * scaled;
    let residuals = &y - &a * &beta;
    let mut rss: f64 = residuals.iter().map(|r| r * r).sum();
    // Residuals at rounding level mean an exact fit.
    let yy: f64 = ys.iter().map(|v| v * v).sum();
    if rss <= ZERO_RSS * ZERO_RSS * yy {
        rss = 0.0;
    }
    let s2 = rss / (m - p) as f64;
    let xv = DVector::from_column_slice(x);
    let w = (v_t * xv).component_div(sigma);
    let leverage = w.norm_squared();
    let center: f64 = x.iter().zip(beta.iter()).map(|(a, b)| a * b).sum();
    let scale = s2.sqrt() * (1.0 + leverage).sqrt();
    let mut warnings = Vec::new();
    if scale == 0.0 {
        warnings.push(format!(
            "{NAME}: zero residual variance; the region degenerates to the point {center}"
        ));
    }
    Ok(GaussianPrediction {
        coefficients: beta.iter().copied().collect(),
        center,
        s2,
        leverage,
        scale,
        df: u32::try_from(m - p).map_err(|_| Error::InvalidArgument("too many examples".into()))?,
        warnings,
    })
}

/// `t_n` of the last position: the standardized residual of `ys[n−1]`
/// against the fit to the first `n − 1` rows.
pub fn t_statistic(rows: &[Vec<f64>], ys: &[f64]) -> Result<f64> {
    if rows.len() != ys.len() || rows.is_empty() {
        return Err(Error::LengthMismatch {
            expected: rows.len(),
            got: ys.len(),
        });
    }
    let n = rows.len();
    let head: Vec<&[f64]> = rows[..n - 1].iter().map(Vec::as_slice).collect();
    Ok(fit(&head, &ys[..n - 1], &rows[n - 1])?.t_statistic(ys[n - 1]))
}

/// The Gaussian linear model over `[1, x]` (with an intercept) or `x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GaussianModel {
    pub intercept: bool,
}

impl Default for GaussianModel {
    fn default() -> Self {
        Self::with_intercept()
    }
}

impl GaussianModel {
    pub fn with_intercept() -> Self {
        GaussianModel { intercept: true }
    }

    pub fn without_intercept() -> Self {
        GaussianModel { intercept: false }
    }

    pub fn design_row(&self, x: &[f64]) -> Vec<f64> {
        if self.intercept {
            std::iter::once(1.0).chain(x.iter().copied()).collect()
        } else {
            x.to_vec()
        }
    }

    /// Prediction of the label of `x` from the labelled `history`.
    pub fn predict(&self, history: &[Example], x: &[f64]) -> Result<GaussianPrediction> {
        check_schema(history)?;
        if let Some(z) = history.first() {
            if z.arity() != x.len() {
                return Err(Error::LengthMismatch {
                    expected: z.arity(),
                    got: x.len(),
                });
            }
        }
        let mut sorted: Vec<&Example> = history.iter().collect();
        sorted.sort();
        let rows: Vec<Vec<f64>> = sorted.iter().map(|z| self.design_row(&z.object)).collect();
        let ys: Vec<f64> = sorted
            .iter()
            .map(|z| z.real_label(NAME))
            .collect::<Result<_>>()?;
        let refs: Vec<&[f64]> = rows.iter().map(Vec::as_slice).collect();
        fit(&refs, &ys, &self.design_row(x))
    }

    /// Conformal regions under the residual measure, one per level.
    pub fn conformal(
        &self,
        history: &[Example],
        x: &[f64],
        epsilons: &[SignificanceLevel],
    ) -> Result<(GaussianPrediction, Vec<(f64, RealRegion)>)> {
        let pred = self.predict(history, x)?;
        let regions = epsilons
            .iter()
            .map(|e| Ok((e.epsilon(), pred.interval(e.epsilon())?)))
            .collect::<Result<_>>()?;
        Ok((pred, regions))
    }
}

impl CompressionModel for GaussianModel {
    type Summary = GaussianSummary;

    fn name(&self) -> &'static str {
        NAME
    }

    /// The empty summary; its width is fixed by the first update.
    fn empty(&self) -> GaussianSummary {
        GaussianSummary::new(0)
    }

    fn update(&self, summary: &GaussianSummary, z: &Example) -> Result<GaussianSummary> {
        let row = self.design_row(&z.object);
        let mut next = if summary.n() == 0 {
            GaussianSummary::new(row.len())
        } else {
            summary.clone()
        };
        next.push(row, z.real_label(NAME)?)?;
        Ok(next)
    }
}

/// Prediction of a new value from old values alone: the Gaussian model
/// with a constant design.
pub fn fisher_prediction(values: &[f64]) -> Result<GaussianPrediction> {
    let old: Vec<Example> = values.iter().map(|&v| Example::value(v)).collect();
    GaussianModel::with_intercept().predict(&old, &[])
}

/// `z̄ ± t_{n−2}^{ε/2} s √(n/(n−1))` from the `n − 1` old values.
pub fn fisher_interval(values: &[f64], epsilon: f64) -> Result<RealRegion> {
    fisher_prediction(values)?.interval(epsilon)
}

/// `ŷ ± t^{ε/2} s √(1 + x′(X′X)⁻¹x)` with an intercept column.
pub fn gaussian_linear_interval(history: &[Example], x: &[f64], epsilon: f64) -> Result<RealRegion> {
    GaussianModel::with_intercept().predict(history, x)?.interval(epsilon)
}

/// A label vector drawn uniformly from `{Y : X′Y = C, Y′Y = r²}`.
pub fn sphere_conditional_sample_with<R: Rng + ?Sized>(
    summary: &GaussianSummary,
    rng: &mut R,
) -> Result<Vec<f64>> {
    let (n, p) = (summary.n(), summary.p());
    if n == 0 {
        return Err(Error::EmptyConstraint("the summary has no positions".into()));
    }
    let (y0, u) = if p == 0 {
        (DVector::zeros(n), None)
    } else {
        if n < p {
            return Err(Error::DegenerateDesign(format!(
                "{NAME}: {n} rows cannot have rank {p}"
            )));
        }
        let a = DMatrix::from_fn(n, p, |i, j| summary.rows[i][j]);
        let svd = a.svd(true, true);
        singular_check(&svd.singular_values)?;
        let u = svd.u.expect("U requested");
        let v_t = svd.v_t.expect("Vᵀ requested");
        let c = DVector::from_column_slice(&summary.xty);
        let y0 = &u * (v_t * c).component_div(&svd.singular_values);
        (y0, Some(u))
    };
    let r2 = summary.yty;
    let rho2 = r2 - y0.norm_squared();
    let tol = 1e-12 * r2.max(1.0);
    if rho2 < -tol {
        return Err(Error::EmptyConstraint(format!(
            "Y′Y = {r2} is smaller than the squared norm {} forced by X′Y",
            y0.norm_squared()
        )));
    }
    if rho2 <= tol {
        return Ok(y0.iter().copied().collect());
    }
    if n == p {
        return Err(Error::EmptyConstraint(
            "X′Y fixes Y exactly but Y′Y asks for more".into(),
        ));
    }
    loop {
        let g = DVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal));
        let perp = match &u {
            Some(u) => &g - u * (u.transpose() * &g),
            None => g,
        };
        let norm = perp.norm();
        if norm > 0.0 {
            let y = y0 + perp * (rho2.sqrt() / norm);
            return Ok(y.iter().copied().collect());
        }
    }
}

/// [`sphere_conditional_sample_with`] driven by a seeded ChaCha generator.
pub fn sphere_conditional_sample(summary: &GaussianSummary, seed: u64) -> Result<Vec<f64>> {
    sphere_conditional_sample_with(summary, &mut ChaCha8Rng::seed_from_u64(seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{czuber_values, iris_petal};

    #[test]
    fn czuber_fisher_interval() {
        let pred = fisher_prediction(&czuber_values()).unwrap();
        assert_eq!(pred.df, 18);
        let mean = czuber_values().iter().sum::<f64>() / 19.0;
        assert!((pred.center - mean).abs() < 1e-12);
        let r = fisher_interval(&czuber_values(), 0.05).unwrap();
        let iv = r.intervals()[0];
        // 314/19 ± t₁₈^{0.025}·s·√(20/19), s² = Σ(z − z̄)²/18.
        assert!((iv.lo - 9.400_169_557_922_919).abs() < 1e-9, "{iv:?}");
        assert!((iv.hi - 23.652_462_021_024_45).abs() < 1e-9, "{iv:?}");
    }

    #[test]
    fn small_hand_example() {
        // Mean 1/4, s² = 1/4, half-width t₃^{0.25}·(1/2)·√(5/4).
        let pred = fisher_prediction(&[0.0, 0.0, 0.0, 1.0]).unwrap();
        assert!((pred.center - 0.25).abs() < 1e-15);
        assert!((pred.s2 - 0.25).abs() < 1e-15);
        let iv = pred.interval(0.5).unwrap().intervals()[0];
        assert!((iv.lo + iv.hi - 0.5).abs() < 1e-12);
        let half = 0.764_892_328_404_345 * 0.5 * 1.25f64.sqrt();
        assert!((iv.hi - 0.25 - half).abs() < 1e-9);
    }

    #[test]
    fn constant_values_degenerate_with_warning() {
        let pred = fisher_prediction(&[3.0, 3.0, 3.0]).unwrap();
        assert_eq!(pred.warnings.len(), 1);
        let iv = pred.interval(0.1).unwrap().intervals()[0];
        assert_eq!(iv.lo, iv.hi);
        assert!((iv.lo - 3.0).abs() < 1e-12);
    }

    #[test]
    fn iris_textbook_interval() {
        let zs = iris_petal();
        let pred = GaussianModel::with_intercept().predict(&zs[..24], &[6.8]).unwrap();
        assert_eq!(pred.df, 22);
        assert!((pred.center - 1.66).abs() < 0.005);
        assert!((pred.scale - 0.311).abs() < 0.0005);
        assert!((pred.coefficients[0] + 2.96).abs() < 0.01);
        assert!((pred.coefficients[1] - 0.68).abs() < 0.01);
        assert!((pred.s2 - 0.0780).abs() < 0.0005);
    }

    #[test]
    fn preconditions() {
        assert!(matches!(fisher_prediction(&[1.0]), Err(Error::InsufficientData(_))));
        let same_x: Vec<Example> = (0..4).map(|i| Example::regression(&[2.0], f64::from(i))).collect();
        assert!(matches!(
            GaussianModel::with_intercept().predict(&same_x, &[2.0]),
            Err(Error::DegenerateDesign(_))
        ));
    }

    #[test]
    fn summary_folds_updates() {
        let zs = iris_petal();
        let m = GaussianModel::with_intercept();
        let s = m.summarize(&zs).unwrap();
        assert_eq!(s.n(), 25);
        assert_eq!(s.p(), 2);
        let yty: f64 = zs.iter().map(|z| z.label.as_real().unwrap().powi(2)).sum();
        assert!((s.yty - yty).abs() < 1e-12);
    }

    #[test]
    fn sphere_samples_satisfy_the_constraints() {
        let zs = iris_petal();
        let s = GaussianModel::with_intercept().summarize(&zs).unwrap();
        for seed in 0..20 {
            let y = sphere_conditional_sample(&s, seed).unwrap();
            let yty: f64 = y.iter().map(|v| v * v).sum();
            assert!((yty - s.yty).abs() < 1e-9);
            for j in 0..2 {
                let c: f64 = s.rows.iter().zip(&y).map(|(r, v)| r[j] * v).sum();
                assert!((c - s.xty[j]).abs() < 1e-9);
            }
        }
        let bad = GaussianSummary::from_parts(vec![vec![1.0], vec![1.0]], vec![4.0], 1.0).unwrap();
        assert!(matches!(sphere_conditional_sample(&bad, 0), Err(Error::EmptyConstraint(_))));
    }
}
