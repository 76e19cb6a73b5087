//! Per-step outcomes of on-line prediction and their aggregates.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::example::Label;
use crate::pvalue::PValue;
use crate::region::PredictionRegion;

/// Size class of a prediction region.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionSize {
    Empty,
    Singleton,
    /// More than one label, or a real region wider than a point.
    Uncertain,
}

impl RegionSize {
    pub fn of(region: &PredictionRegion) -> Self {
        if region.is_empty() {
            RegionSize::Empty
        } else if region.is_singleton() {
            RegionSize::Singleton
        } else {
            RegionSize::Uncertain
        }
    }
}

/// The five exclusive outcome categories of a prediction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    SingletonHit,
    UncertainHit,
    Empty,
    SingletonError,
    UncertainError,
}

impl Category {
    pub fn classify(size: RegionSize, hit: bool) -> Self {
        match (size, hit) {
            (RegionSize::Empty, _) => Category::Empty,
            (RegionSize::Singleton, true) => Category::SingletonHit,
            (RegionSize::Singleton, false) => Category::SingletonError,
            (RegionSize::Uncertain, true) => Category::UncertainHit,
            (RegionSize::Uncertain, false) => Category::UncertainError,
        }
    }

    pub fn is_hit(self) -> bool {
        matches!(self, Category::SingletonHit | Category::UncertainHit)
    }
}

/// What happened at one step of on-line prediction.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepOutcome {
    /// 1-based position in the stream.
    pub step: usize,
    pub label: Label,
    pub region: PredictionRegion,
    pub size: RegionSize,
    pub hit: bool,
    pub category: Category,
    /// p-values of the candidate labels, when the predictor has them.
    pub p_values: Vec<(Label, PValue)>,
    /// Warm-up steps predict the full label space and are left out of
    /// every rate.
    pub warm_up: bool,
    pub warnings: Vec<String>,
}

impl StepOutcome {
    pub fn new(
        step: usize,
        label: Label,
        region: PredictionRegion,
        p_values: Vec<(Label, PValue)>,
        warm_up: bool,
        warnings: Vec<String>,
    ) -> Self {
        let size = RegionSize::of(&region);
        let hit = region.contains(&label);
        StepOutcome {
            step,
            label,
            size,
            hit,
            category: Category::classify(size, hit),
            region,
            p_values,
            warm_up,
            warnings,
        }
    }

    pub fn is_error(&self) -> bool {
        !self.hit
    }
}

/// Counts in the layout of a hits/errors breakdown table.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct LedgerAggregates {
    pub singleton_hits: usize,
    pub uncertain_hits: usize,
    pub total_hits: usize,
    pub empty: usize,
    pub singleton_errors: usize,
    pub uncertain_errors: usize,
    pub total_errors: usize,
    pub total_examples: usize,
    pub pct_hits: f64,
    pub total_singletons: usize,
    pub pct_singleton_hits: f64,
    pub total_uncertain: usize,
    pub pct_uncertain_hits: f64,
    pub pct_empty_among_errors: f64,
    /// Steps excluded as warm-up.
    pub warm_up: usize,
}

fn pct(num: usize, den: usize) -> f64 {
    if den == 0 {
        f64::NAN
    } else {
        100.0 * num as f64 / den as f64
    }
}

impl LedgerAggregates {
    pub fn from_outcomes<'a>(outcomes: impl IntoIterator<Item = &'a StepOutcome>) -> Self {
        let mut a = LedgerAggregates::default();
        for o in outcomes {
            if o.warm_up {
                a.warm_up += 1;
                continue;
            }
            match o.category {
                Category::SingletonHit => a.singleton_hits += 1,
                Category::UncertainHit => a.uncertain_hits += 1,
                Category::Empty => a.empty += 1,
                Category::SingletonError => a.singleton_errors += 1,
                Category::UncertainError => a.uncertain_errors += 1,
            }
        }
        a.total_hits = a.singleton_hits + a.uncertain_hits;
        a.total_errors = a.empty + a.singleton_errors + a.uncertain_errors;
        a.total_examples = a.total_hits + a.total_errors;
        a.pct_hits = pct(a.total_hits, a.total_examples);
        a.total_singletons = a.singleton_hits + a.singleton_errors;
        a.pct_singleton_hits = pct(a.singleton_hits, a.total_singletons);
        a.total_uncertain = a.uncertain_hits + a.uncertain_errors;
        a.pct_uncertain_hits = pct(a.uncertain_hits, a.total_uncertain);
        a.pct_empty_among_errors = pct(a.empty, a.total_errors);
        a
    }
}

/// All outcomes of one pass over a stream at a fixed level.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValidityLedger {
    pub predictor: String,
    pub epsilon: f64,
    pub outcomes: Vec<StepOutcome>,
}

impl ValidityLedger {
    /// Outcomes that count towards rates.
    pub fn counted(&self) -> impl Iterator<Item = &StepOutcome> {
        self.outcomes.iter().filter(|o| !o.warm_up)
    }

    pub fn errors(&self) -> usize {
        self.counted().filter(|o| o.is_error()).count()
    }

    pub fn counted_steps(&self) -> usize {
        self.counted().count()
    }

    /// `Freq_N`, the error frequency over counted steps (0 when none).
    pub fn error_rate(&self) -> f64 {
        let n = self.counted_steps();
        if n == 0 {
            0.0
        } else {
            self.errors() as f64 / n as f64
        }
    }

    /// Error indicators `e_1, …, e_N` of the counted steps.
    pub fn error_indicators(&self) -> Vec<bool> {
        self.counted().map(StepOutcome::is_error).collect()
    }

    pub fn aggregates(&self) -> LedgerAggregates {
        LedgerAggregates::from_outcomes(&self.outcomes)
    }

    /// Aggregates over steps `from..=to` (1-based).
    pub fn aggregates_between(&self, from: usize, to: usize) -> LedgerAggregates {
        LedgerAggregates::from_outcomes(self.outcomes.iter().filter(|o| o.step >= from && o.step <= to))
    }

    /// `(errors, counted)` for each true label.
    pub fn per_label(&self) -> BTreeMap<Label, (usize, usize)> {
        let mut m: BTreeMap<Label, (usize, usize)> = BTreeMap::new();
        for o in self.counted() {
            let e = m.entry(o.label.clone()).or_default();
            e.0 += usize::from(o.is_error());
            e.1 += 1;
        }
        m
    }

    /// Error rate among counted steps with each true label.
    pub fn per_label_rates(&self) -> BTreeMap<Label, f64> {
        self.per_label()
            .into_iter()
            .map(|(y, (e, n))| (y, e as f64 / n as f64))
            .collect()
    }

    /// Cumulative error count after each step; warm-up steps add nothing.
    pub fn cumulative_errors(&self) -> Vec<usize> {
        let mut acc = 0;
        self.outcomes
            .iter()
            .map(|o| {
                acc += usize::from(!o.warm_up && o.is_error());
                acc
            })
            .collect()
    }
}
