//! Prediction regions: finite label sets and finite unions of closed real
//! intervals.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::example::Label;

/// Membership slack for lattice snapping, absolute below 1 and relative
/// above.
const SNAP_TOL: f64 = 1e-12;

/// A closed interval `[lo, hi]`; either endpoint may be infinite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "interval [{lo}, {hi}] is reversed");
        Interval { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    pub fn contains(&self, y: f64) -> bool {
        self.lo <= y && y <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        (finite_or_none(self.lo), finite_or_none(self.hi)).serialize(s)
    }
}

fn finite_or_none(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

/// A sorted union of pairwise disjoint, non-touching closed intervals.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
#[serde(transparent)]
pub struct RealRegion {
    intervals: Vec<Interval>,
}

impl RealRegion {
    pub fn empty() -> Self {
        RealRegion::default()
    }

    pub fn full() -> Self {
        RealRegion {
            intervals: vec![Interval::new(f64::NEG_INFINITY, f64::INFINITY)],
        }
    }

    pub fn interval(lo: f64, hi: f64) -> Self {
        RealRegion {
            intervals: vec![Interval::new(lo, hi)],
        }
    }

    /// Normalizes an arbitrary list of intervals, merging any that overlap
    /// or touch.
    pub fn from_intervals(mut v: Vec<Interval>) -> Self {
        v.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        let mut out: Vec<Interval> = Vec::with_capacity(v.len());
        for iv in v {
            match out.last_mut() {
                Some(last) if iv.lo <= last.hi => last.hi = last.hi.max(iv.hi),
                _ => out.push(iv),
            }
        }
        RealRegion { intervals: out }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, y: f64) -> bool {
        self.intervals.iter().any(|iv| iv.contains(y))
    }

    /// Smallest single interval covering the region.
    pub fn hull(&self) -> Option<Interval> {
        Some(Interval::new(
            self.intervals.first()?.lo,
            self.intervals.last()?.hi,
        ))
    }

    pub fn has_gaps(&self) -> bool {
        self.intervals.len() > 1
    }

    pub fn is_subset_of(&self, other: &RealRegion) -> bool {
        self.intervals.iter().all(|iv| {
            other
                .intervals
                .iter()
                .any(|o| o.lo <= iv.lo && iv.hi <= o.hi)
        })
    }

    /// Renders endpoints with a fixed number of decimals.
    pub fn render(&self, decimals: usize) -> String {
        if self.intervals.is_empty() {
            return "∅".to_string();
        }
        self.intervals
            .iter()
            .map(|iv| {
                if iv.lo == iv.hi {
                    format!("{{{}}}", fmt_end(iv.lo, decimals))
                } else {
                    format!("[{}, {}]", fmt_end(iv.lo, decimals), fmt_end(iv.hi, decimals))
                }
            })
            .collect::<Vec<_>>()
            .join(" ∪ ")
    }
}

fn fmt_end(x: f64, decimals: usize) -> String {
    if x == f64::INFINITY {
        "∞".into()
    } else if x == f64::NEG_INFINITY {
        "-∞".into()
    } else {
        // Avoid printing "-0.00".
        let s = format!("{x:.decimals$}");
        if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
            s.trim_start_matches('-').to_string()
        } else {
            s
        }
    }
}

impl fmt::Display for RealRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(2))
    }
}

/// Region output of a predictor.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum PredictionRegion {
    LabelSet(Vec<Label>),
    Real(RealRegion),
}

impl PredictionRegion {
    pub fn contains(&self, y: &Label) -> bool {
        match (self, y) {
            (PredictionRegion::LabelSet(ls), _) => ls.contains(y),
            (PredictionRegion::Real(r), Label::Real(v)) => r.contains(*v),
            _ => false,
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            PredictionRegion::LabelSet(ls) => ls.is_empty(),
            PredictionRegion::Real(r) => r.is_empty(),
        }
    }

    /// A region is a singleton when it contains exactly one label (or one
    /// real point).
    pub fn is_singleton(&self) -> bool {
        match self {
            PredictionRegion::LabelSet(ls) => ls.len() == 1,
            PredictionRegion::Real(r) => {
                r.intervals().len() == 1 && r.intervals()[0].lo == r.intervals()[0].hi
            }
        }
    }

    pub fn is_subset_of(&self, other: &PredictionRegion) -> bool {
        match (self, other) {
            (PredictionRegion::LabelSet(a), PredictionRegion::LabelSet(b)) => {
                a.iter().all(|y| b.contains(y))
            }
            (PredictionRegion::Real(a), PredictionRegion::Real(b)) => a.is_subset_of(b),
            _ => false,
        }
    }
}

fn tol(x: f64) -> f64 {
    SNAP_TOL * x.abs().max(1.0)
}

/// Lattice points `origin + k·step` inside the closed region, reported as
/// one interval hull per run of consecutive lattice points. Infinite
/// endpoints stay infinite.
///
/// # Panics
///
/// Panics unless `step > 0`.
pub fn grid_snap(region: &RealRegion, step: f64, origin: f64) -> RealRegion {
    assert!(step > 0.0 && step.is_finite(), "grid step must be positive");
    let at = |k: f64| origin + k * step;
    // (first index, last index); infinities carried as ±∞.
    let mut runs: Vec<(f64, f64)> = Vec::new();
    for iv in region.intervals() {
        let kmin = if iv.lo.is_finite() {
            let mut k = ((iv.lo - origin) / step).ceil();
            if at(k - 1.0) >= iv.lo - tol(iv.lo) {
                k -= 1.0;
            }
            while at(k) < iv.lo - tol(iv.lo) {
                k += 1.0;
            }
            k
        } else {
            f64::NEG_INFINITY
        };
        let kmax = if iv.hi.is_finite() {
            let mut k = ((iv.hi - origin) / step).floor();
            if at(k + 1.0) <= iv.hi + tol(iv.hi) {
                k += 1.0;
            }
            while at(k) > iv.hi + tol(iv.hi) {
                k -= 1.0;
            }
            k
        } else {
            f64::INFINITY
        };
        if kmin > kmax {
            continue;
        }
        match runs.last_mut() {
            Some(last) if kmin <= last.1 + 1.0 => last.1 = last.1.max(kmax),
            _ => runs.push((kmin, kmax)),
        }
    }
    RealRegion {
        intervals: runs
            .into_iter()
            .map(|(a, b)| {
                let lo = if a.is_finite() { at(a) } else { a };
                let hi = if b.is_finite() { at(b) } else { b };
                Interval::new(lo, hi)
            })
            .collect(),
    }
}

/// Lattice indices `k` covered by a snapped bounded region.
pub fn lattice_indices(snapped: &RealRegion, step: f64, origin: f64) -> Vec<i64> {
    snapped
        .intervals()
        .iter()
        .filter(|iv| iv.lo.is_finite() && iv.hi.is_finite())
        .flat_map(|iv| {
            let a = ((iv.lo - origin) / step).round() as i64;
            let b = ((iv.hi - origin) / step).round() as i64;
            a..=b
        })
        .collect()
}

/// Number of decimals needed to print lattice points of `step` exactly.
pub fn grid_decimals(step: f64) -> usize {
    (0..=12)
        .find(|&d| {
            let scaled = step * 10f64.powi(d as i32);
            (scaled - scaled.round()).abs() < 1e-9 * scaled.max(1.0)
        })
        .unwrap_or(12)
}
