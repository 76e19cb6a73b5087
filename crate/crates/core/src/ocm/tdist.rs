//! Student's t-distribution: CDF through the regularized incomplete beta
//! function, quantiles by bracketed bisection refined with Newton steps.

use serde::Serialize;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // Reflection: Γ(x)Γ(1−x) = π / sin(πx).
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = LANCZOS[0];
    let t = x + LANCZOS_G + 0.5;
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// Continued fraction for the incomplete beta function (modified Lentz).
fn beta_cf(a: f64, b: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    const EPS: f64 = 1e-16;
    let (qab, qap, qam) = (a + b, a + 1.0, a - 1.0);
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=10_000 {
        let m = f64::from(m);
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// Regularized incomplete beta function `I_x(a, b)`.
pub fn betai(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (1.0 - x).ln();
    let front = ln_front.exp();
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_cf(a, b, x) / a
    } else {
        1.0 - front * beta_cf(b, a, 1.0 - x) / b
    }
}

/// `P(T > t)` for `T` with `df` degrees of freedom.
pub fn t_sf(df: f64, t: f64) -> f64 {
    if t.is_nan() {
        return f64::NAN;
    }
    if t == f64::INFINITY {
        return 0.0;
    }
    if t == f64::NEG_INFINITY {
        return 1.0;
    }
    let x = df / (df + t * t);
    let tail = 0.5 * betai(df / 2.0, 0.5, x);
    if t > 0.0 {
        tail
    } else {
        1.0 - tail
    }
}

/// `P(T ≤ t)` for `T` with `df` degrees of freedom.
pub fn t_cdf(df: f64, t: f64) -> f64 {
    if t.is_nan() {
        return f64::NAN;
    }
    if t == f64::INFINITY {
        return 1.0;
    }
    if t == f64::NEG_INFINITY {
        return 0.0;
    }
    let x = df / (df + t * t);
    let tail = 0.5 * betai(df / 2.0, 0.5, x);
    if t > 0.0 {
        1.0 - tail
    } else {
        tail
    }
}

/// Density of the t-distribution.
pub fn t_pdf(df: f64, t: f64) -> f64 {
    let ln = ln_gamma((df + 1.0) / 2.0)
        - ln_gamma(df / 2.0)
        - 0.5 * (df * std::f64::consts::PI).ln()
        - (df + 1.0) / 2.0 * (t * t / df).ln_1p();
    ln.exp()
}

/// Upper percentile point: the `t` with `P(T > t) = upper`.
pub fn t_quantile(df: f64, upper: f64) -> Result<f64> {
    if !(df > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "degrees of freedom must be positive, got {df}"
        )));
    }
    if !(upper > 0.0 && upper < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "tail probability must lie in (0, 1), got {upper}"
        )));
    }
    if upper == 0.5 {
        return Ok(0.0);
    }
    if upper > 0.5 {
        return Ok(-t_quantile(df, 1.0 - upper)?);
    }
    // Bracket [lo, hi] with sf(lo) ≥ upper > sf(hi).
    let (mut lo, mut hi) = (0.0, 1.0);
    while t_sf(df, hi) >= upper {
        lo = hi;
        hi *= 2.0;
        if !hi.is_finite() {
            return Ok(f64::INFINITY);
        }
    }
    for _ in 0..200 {
        if hi - lo <= 1e-3 * hi.max(1.0) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if t_sf(df, mid) >= upper {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut t = 0.5 * (lo + hi);
    for _ in 0..100 {
        let f = t_sf(df, t) - upper;
        if f > 0.0 {
            lo = lo.max(t);
        } else {
            hi = hi.min(t);
        }
        let step = f / t_pdf(df, t);
        let mut next = t + step;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - t).abs() <= 1e-15 * t.abs().max(1.0) {
            t = next;
            break;
        }
        t = next;
    }
    Ok(t)
}

/// The t-distribution with a positive integer number of degrees of
/// freedom.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TDistribution {
    df: u32,
}

impl TDistribution {
    pub fn new(df: u32) -> Result<Self> {
        if df == 0 {
            return Err(Error::InvalidArgument(
                "the t-distribution needs at least one degree of freedom".into(),
            ));
        }
        Ok(TDistribution { df })
    }

    pub fn df(self) -> u32 {
        self.df
    }

    pub fn cdf(self, t: f64) -> f64 {
        t_cdf(f64::from(self.df), t)
    }

    pub fn sf(self, t: f64) -> f64 {
        t_sf(f64::from(self.df), t)
    }

    pub fn pdf(self, t: f64) -> f64 {
        t_pdf(f64::from(self.df), t)
    }

    /// `t^upper`, the point exceeded with probability `upper`.
    pub fn upper_point(self, upper: f64) -> Result<f64> {
        t_quantile(f64::from(self.df), upper)
    }

    /// Lower quantile: the `t` with `P(T ≤ t) = p`.
    pub fn quantile(self, p: f64) -> Result<f64> {
        if p < 0.5 {
            Ok(-self.upper_point(p)?)
        } else {
            self.upper_point(1.0 - p)
        }
    }

    /// Two-sided p-value `P(|T| ≥ |t|)`.
    pub fn two_sided(self, t: f64) -> f64 {
        (2.0 * self.sf(t.abs())).min(1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::distribution::{ContinuousCDF, StudentsT};

    #[test]
    fn ln_gamma_at_integers_and_halves() {
        assert!((ln_gamma(1.0)).abs() < 1e-14);
        assert!((ln_gamma(5.0) - 24f64.ln()).abs() < 1e-13);
        assert!((ln_gamma(0.5) - std::f64::consts::PI.sqrt().ln()).abs() < 1e-13);
        assert!((ln_gamma(0.1) - 2.252_712_651_734_206).abs() < 1e-12);
    }

    #[test]
    fn textbook_percentile_points() {
        assert!((t_quantile(18.0, 0.025).unwrap() - 2.100_922).abs() < 1e-6);
        assert!((t_quantile(22.0, 0.02).unwrap() - 2.182_892_650).abs() < 1e-8);
        assert!((t_quantile(1.0, 0.25).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(t_quantile(7.0, 0.5).unwrap(), 0.0);
        assert!(t_quantile(3.0, 0.0).is_err());
        assert!(t_quantile(3.0, 1.0).is_err());
    }

    #[test]
    fn cauchy_closed_form() {
        for t in [-30.0, -2.0, -0.3, 0.0, 0.7, 4.0, 1e3] {
            let exact = 0.5 + f64::atan(t) / std::f64::consts::PI;
            assert!((t_cdf(1.0, t) - exact).abs() < 1e-13, "t = {t}");
        }
    }

    #[test]
    fn agrees_with_statrs() {
        for df in [1.0, 2.0, 3.0, 5.0, 10.0, 22.0, 50.0, 300.0] {
            let oracle = StudentsT::new(0.0, 1.0, df).unwrap();
            for t in [-8.0, -2.5, -1.0, -0.1, 0.0, 0.4, 1.3, 2.1, 6.0, 25.0] {
                assert!((t_cdf(df, t) - oracle.cdf(t)).abs() < 1e-10, "df {df} t {t}");
            }
        }
    }

    #[test]
    fn quantile_inverts_cdf() {
        for df in 1..=50 {
            let d = TDistribution::new(df).unwrap();
            for t in [-12.0, -3.0, -1.1, -0.02, 0.5, 1.9, 4.4, 9.0] {
                // Invert through the smaller tail, which carries full precision.
                let back = if t < 0.0 {
                    d.quantile(d.cdf(t)).unwrap()
                } else {
                    d.upper_point(d.sf(t)).unwrap()
                };
                assert!((back - t).abs() < 1e-8 * t.abs().max(1.0), "df {df} t {t} → {back}");
            }
        }
    }
}
