//! Exact separating-band scores for two classes on a line.

use serde::Serialize;

use crate::bag::Bag;
use crate::error::{Error, Result};
use crate::example::{Example, Label};

use super::{Convention, NonconformityMeasure};

const NAME: &str = "band";

/// A band `[a, b]` with `left` examples expected at or below `a` and
/// `right` examples at or above `b`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Band {
    pub a: f64,
    pub b: f64,
    pub left: Label,
    pub right: Label,
    pub mistakes: usize,
}

impl Band {
    /// `∞` on the wrong side, 1 inside, 0 on the right side.
    pub fn score(&self, z: &Example) -> f64 {
        let x = z.object[0];
        if z.label == self.right {
            if x < self.a {
                f64::INFINITY
            } else if x < self.b {
                1.0
            } else {
                0.0
            }
        } else if self.b < x {
            f64::INFINITY
        } else if self.a < x {
            1.0
        } else {
            0.0
        }
    }
}

fn check_objects(examples: &[&Example]) -> Result<()> {
    if examples.iter().any(|z| z.arity() != 1) {
        return Err(Error::precondition(NAME, "one-dimensional objects"));
    }
    Ok(())
}

/// Chooses the band with the fewest mistakes
/// `#{right : x < b} + #{left : x > a}`, trying both orientations. Ties go
/// to the widest band, then the smallest `a`, then the orientation with the
/// canonically first label on the left. Returns `None` when fewer than two
/// labels are present.
pub fn fit_band<'a>(examples: impl IntoIterator<Item = &'a Example>) -> Result<Option<Band>> {
    let zs: Vec<&Example> = examples.into_iter().collect();
    check_objects(&zs)?;
    let mut labels: Vec<&Label> = zs.iter().map(|z| &z.label).collect();
    labels.sort();
    labels.dedup();
    match labels.len() {
        0 | 1 => return Ok(None),
        2 => {}
        _ => return Err(Error::precondition(NAME, "exactly two labels")),
    }
    let split = |l: &Label| {
        let mut v: Vec<f64> = zs.iter().filter(|z| &z.label == l).map(|z| z.object[0]).collect();
        v.sort_by(f64::total_cmp);
        v
    };
    let (first, second) = (labels[0].clone(), labels[1].clone());
    let mut best: Option<Band> = None;
    for (left, right) in [(first.clone(), second.clone()), (second, first)] {
        let (ls, rs) = (split(&left), split(&right));
        let candidates: Vec<f64> = std::iter::once(f64::NEG_INFINITY).chain(ls.iter().copied()).collect();
        let count_l = |a: f64| ls.len() - ls.partition_point(|&x| x <= a);
        let count_r = |b: f64| rs.partition_point(|&x| x < b);
        let m_star = candidates
            .iter()
            .map(|&a| count_l(a) + count_r(a))
            .min()
            .unwrap();
        for &a in &candidates {
            let cl = count_l(a);
            if cl > m_star {
                continue;
            }
            let k = m_star - cl;
            let b = rs.get(k).copied().unwrap_or(f64::INFINITY);
            if b < a {
                continue;
            }
            let band = Band {
                a,
                b,
                left: left.clone(),
                right: right.clone(),
                mistakes: m_star,
            };
            if better(&band, best.as_ref()) {
                best = Some(band);
            }
        }
    }
    Ok(best)
}

fn better(new: &Band, old: Option<&Band>) -> bool {
    let Some(old) = old else { return true };
    if new.mistakes != old.mistakes {
        return new.mistakes < old.mistakes;
    }
    let (wn, wo) = (new.b - new.a, old.b - old.a);
    if wn != wo {
        return wn > wo;
    }
    new.a < old.a
}

/// Separating-band scores: the band is fitted on the whole bag.
#[derive(Clone, Copy, Debug, Default)]
pub struct SeparatingBand;

impl NonconformityMeasure for SeparatingBand {
    fn name(&self) -> &'static str {
        NAME
    }

    fn convention(&self) -> Convention {
        Convention::Inclusion
    }

    fn score(&self, bag: &Bag<Example>, z: &Example) -> Result<f64> {
        let owned;
        let bag = if bag.multiplicity(z) == 0 {
            owned = bag.with(z.clone());
            &owned
        } else {
            bag
        };
        Ok(fit_band(bag.elements())?.map_or(0.0, |band| band.score(z)))
    }

    fn scores(&self, examples: &[Example]) -> Result<Vec<f64>> {
        let mut sorted: Vec<&Example> = examples.iter().collect();
        sorted.sort();
        Ok(match fit_band(sorted)? {
            None => vec![0.0; examples.len()],
            Some(band) => examples.iter().map(|z| band.score(z)).collect(),
        })
    }
}
