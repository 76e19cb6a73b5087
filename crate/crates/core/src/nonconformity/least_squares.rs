//! Least-squares residual measures, with or without the scored example in
//! the fit.

use nalgebra::{DMatrix, DVector};

use crate::bag::Bag;
use crate::error::{Error, Result};
use crate::example::Example;

use super::score_fn::{AbsAffine, AffineScoreForm, ScoreFamily};
use super::{canonical_order, Convention, NonconformityMeasure, RegressionMeasure};

/// Reciprocal condition number below which a design counts as singular.
const RCOND: f64 = 1e-12;

fn design(rows: &[&[f64]]) -> DMatrix<f64> {
    let q = rows.first().map_or(1, |r| r.len() + 1);
    DMatrix::from_fn(rows.len(), q, |i, j| if j == 0 { 1.0 } else { rows[i][j - 1] })
}

fn check_rank(sv: &DVector<f64>, name: &'static str) -> Result<()> {
    let max = sv.max();
    let min = sv.min();
    if !(max > 0.0) || min <= RCOND * max {
        return Err(Error::DegenerateDesign(format!(
            "{name}: the objects do not determine a unique least-squares fit"
        )));
    }
    Ok(())
}

/// Least-squares coefficients (intercept first) for the given rows.
fn fit(rows: &[&[f64]], ys: &[f64], name: &'static str) -> Result<DVector<f64>> {
    let a = design(rows);
    if a.nrows() < a.ncols() {
        return Err(Error::DegenerateDesign(format!(
            "{name}: {} examples cannot fit {} coefficients",
            a.nrows(),
            a.ncols()
        )));
    }
    let svd = a.svd(true, true);
    check_rank(&svd.singular_values, name)?;
    svd.solve(&DVector::from_column_slice(ys), 0.0)
        .map_err(|e| Error::DegenerateDesign(e.to_string()))
}

fn predict(beta: &DVector<f64>, x: &[f64]) -> f64 {
    beta[0] + x.iter().zip(beta.iter().skip(1)).map(|(a, b)| a * b).sum::<f64>()
}

/// Hat matrix `A(A'A)⁻¹A'` of the design with an intercept column.
fn hat_matrix(rows: &[&[f64]], name: &'static str) -> Result<DMatrix<f64>> {
    let a = design(rows);
    if a.nrows() < a.ncols() {
        return Err(Error::DegenerateDesign(format!("{name}: too few examples")));
    }
    let svd = a.svd(true, false);
    check_rank(&svd.singular_values, name)?;
    let u = svd.u.unwrap();
    Ok(&u * u.transpose())
}

/// Absolute residuals from the least-squares line (or hyperplane, with an
/// intercept).
///
/// With [`Convention::Inclusion`] the line is fitted to all examples
/// including the one scored; with [`Convention::Deletion`] the scored
/// example is left out of the fit.
#[derive(Clone, Copy, Debug)]
pub struct LeastSquares {
    convention: Convention,
}

impl LeastSquares {
    pub fn inclusion() -> Self {
        LeastSquares {
            convention: Convention::Inclusion,
        }
    }

    pub fn deletion() -> Self {
        LeastSquares {
            convention: Convention::Deletion,
        }
    }
}

impl Default for LeastSquares {
    fn default() -> Self {
        Self::inclusion()
    }
}

fn labelled(examples: &[&Example], name: &'static str) -> Result<Vec<f64>> {
    examples.iter().map(|z| z.real_label(name)).collect()
}

fn min_examples(n: usize, name: &'static str) -> Result<()> {
    if n < 3 {
        return Err(Error::precondition(name, "at least 3 examples"));
    }
    Ok(())
}

impl NonconformityMeasure for LeastSquares {
    fn name(&self) -> &'static str {
        match self.convention {
            Convention::Inclusion => "least-squares",
            Convention::Deletion => "least-squares-deleted",
        }
    }

    fn convention(&self) -> Convention {
        self.convention
    }

    fn score(&self, bag: &Bag<Example>, z: &Example) -> Result<f64> {
        let name = self.name();
        let y = z.real_label(name)?;
        let owned;
        let fitted = match self.convention {
            Convention::Inclusion if bag.multiplicity(z) == 0 => {
                owned = bag.with(z.clone());
                &owned
            }
            _ => bag,
        };
        let zs: Vec<&Example> = fitted.elements().collect();
        let rows: Vec<&[f64]> = zs.iter().map(|e| &*e.object).collect();
        let beta = fit(&rows, &labelled(&zs, name)?, name)?;
        Ok((y - predict(&beta, &z.object)).abs())
    }

    fn scores(&self, examples: &[Example]) -> Result<Vec<f64>> {
        let name = self.name();
        min_examples(examples.len(), name)?;
        let order = canonical_order(examples);
        let sorted: Vec<&Example> = order.iter().map(|&i| &examples[i]).collect();
        let ys = labelled(&sorted, name)?;
        let rows: Vec<&[f64]> = sorted.iter().map(|e| &*e.object).collect();
        let mut out = vec![0.0; examples.len()];
        match self.convention {
            Convention::Inclusion => {
                let beta = fit(&rows, &ys, name)?;
                for (p, &i) in order.iter().enumerate() {
                    out[i] = (ys[p] - predict(&beta, rows[p])).abs();
                }
            }
            Convention::Deletion => {
                fn skip<T: Copy>(v: &[T], p: usize) -> Vec<T> {
                    v.iter()
                        .enumerate()
                        .filter(|&(q, _)| q != p)
                        .map(|(_, r)| *r)
                        .collect()
                }
                for (p, &i) in order.iter().enumerate() {
                    let beta = fit(&skip(&rows, p), &skip(&ys, p), name)?;
                    out[i] = (ys[p] - predict(&beta, rows[p])).abs();
                }
            }
        }
        Ok(out)
    }
}

impl RegressionMeasure for LeastSquares {
    fn score_family(&self, old: &[Example], x_new: &[f64]) -> Result<ScoreFamily> {
        Ok(affine_form(old, x_new, self.convention)?.into())
    }
}

fn affine_form(old: &[Example], x_new: &[f64], convention: Convention) -> Result<AffineScoreForm> {
    let name = match convention {
        Convention::Inclusion => "least-squares",
        Convention::Deletion => "least-squares-deleted",
    };
    min_examples(old.len() + 1, name)?;
    let order = canonical_order(old);
    let sorted: Vec<&Example> = order.iter().map(|&i| &old[i]).collect();
    let ys = labelled(&sorted, name)?;
    let mut rows: Vec<&[f64]> = sorted.iter().map(|e| &*e.object).collect();
    rows.push(x_new);
    let h = hat_matrix(&rows, name)?;
    let n = rows.len();
    // Residuals are (I − H)Y with Y = (y_1, …, y_{n−1}, y).
    let coefficient = |p: usize| -> Result<AbsAffine> {
        let m = |q: usize| if p == q { 1.0 - h[(p, q)] } else { -h[(p, q)] };
        let c = m(n - 1);
        let d: f64 = (0..n - 1).map(|q| m(q) * ys[q]).sum();
        match convention {
            Convention::Inclusion => Ok(AbsAffine::new(c, d)),
            Convention::Deletion => {
                let s = 1.0 - h[(p, p)];
                if s <= RCOND {
                    return Err(Error::DegenerateDesign(format!(
                        "{name}: an example has leverage 1"
                    )));
                }
                Ok(AbsAffine::new(c / s, d / s))
            }
        }
    };
    let mut coefficients = vec![AbsAffine::constant(0.0); n];
    for (p, &i) in order.iter().enumerate() {
        coefficients[i] = coefficient(p)?;
    }
    coefficients[n - 1] = coefficient(n - 1)?;
    Ok(AffineScoreForm { coefficients })
}

/// Symbolic inclusion-style least-squares scores `|c_i·y + d_i|` for the
/// sequence `old ++ [(x_new, y)]`.
pub fn least_squares_affine(old: &[Example], x_new: &[f64]) -> Result<AffineScoreForm> {
    affine_form(old, x_new, Convention::Inclusion)
}

/// Inclusion-style least-squares scores of a fully labelled sequence.
pub fn least_squares_scores(examples: &[Example]) -> Result<Vec<f64>> {
    LeastSquares::inclusion().scores(examples)
}
