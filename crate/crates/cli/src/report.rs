//! Run reports and their two renderings: an aligned text table and JSON
//! lines (a header record followed by one record per line).

use std::collections::BTreeMap;
use std::fmt::Write as _;

use conformal_core::region::grid_decimals;
use conformal_core::validity::LedgerAggregates;
use conformal_core::{grid_snap, Label, PValue, RealRegion};
use serde::{Serialize, Serializer};

use crate::dataset::Grid;
use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    #[default]
    Table,
    JsonLines,
}

/// Interval endpoint; infinities serialize as the strings `"inf"` and
/// `"-inf"` since JSON has no infinite numbers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Endpoint(pub f64);

impl Serialize for Endpoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0 {
            v if v.is_finite() => s.serialize_f64(v),
            v if v > 0.0 => s.serialize_str("inf"),
            _ => s.serialize_str("-inf"),
        }
    }
}

fn endpoints(region: &RealRegion) -> Vec<[Endpoint; 2]> {
    region
        .intervals()
        .iter()
        .map(|iv| [Endpoint(iv.lo), Endpoint(iv.hi)])
        .collect()
}

/// A real region as reported: continuous endpoints, and, on a grid, the
/// lattice points it covers.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegionView {
    pub continuous: String,
    pub intervals: Vec<[Endpoint; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snapped: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snapped_intervals: Option<Vec<[Endpoint; 2]>>,
    /// Smallest interval holding the region, when it has gaps.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hull: Option<String>,
    pub gaps: bool,
}

impl RegionView {
    pub fn new(region: &RealRegion, grid: Option<Grid>) -> Self {
        let snapped = grid.map(|g| grid_snap(region, g.step, g.origin));
        let decimals = grid.map_or(2, |g| grid_decimals(g.step));
        let gaps = region.has_gaps();
        RegionView {
            continuous: region.render(2),
            intervals: endpoints(region),
            snapped: snapped.as_ref().map(|s| s.render(decimals)),
            snapped_intervals: snapped.as_ref().map(endpoints),
            hull: if gaps {
                region
                    .hull()
                    .map(|h| RealRegion::interval(h.lo, h.hi).render(2))
            } else {
                None
            },
            gaps,
        }
    }

    fn table(&self) -> String {
        let mut s = self.continuous.clone();
        if let Some(g) = &self.snapped {
            let _ = write!(s, "  grid {g}");
        }
        if let Some(h) = &self.hull {
            let _ = write!(s, "  hull {h} (has gaps)");
        }
        s
    }
}

/// Per-step ledger entry.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepRecord {
    pub step: usize,
    pub label: String,
    pub region: String,
    pub hit: bool,
    pub category: String,
    pub warm_up: bool,
    pub cumulative_errors: usize,
}

/// One line of a report.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "record", rename_all = "snake_case")]
pub enum Record {
    PValue {
        subject: String,
        label: String,
        count: usize,
        n: usize,
        value: f64,
    },
    ConfidenceCredibility {
        subject: String,
        confidence: f64,
        credibility: f64,
    },
    LabelRegion {
        subject: String,
        epsilon: f64,
        labels: Vec<String>,
    },
    RealRegion {
        subject: String,
        epsilon: f64,
        #[serde(flatten)]
        region: RegionView,
    },
    Value {
        subject: String,
        name: String,
        value: f64,
    },
    Flag {
        subject: String,
        name: String,
        value: bool,
    },
    Aggregates {
        subject: String,
        epsilon: f64,
        error_rate: f64,
        #[serde(flatten)]
        aggregates: LedgerAggregates,
        per_label_error_rates: BTreeMap<String, f64>,
    },
    Step(StepRecord),
    Trial {
        trial: u64,
        errors: usize,
        counted: usize,
        error_rate: f64,
    },
    Capital {
        n: usize,
        capital: f64,
        stake: Option<f64>,
        slack: f64,
    },
}

impl Record {
    pub fn p_value(subject: &str, label: &Label, p: PValue) -> Self {
        Record::PValue {
            subject: subject.into(),
            label: label.to_string(),
            count: p.count,
            n: p.n,
            value: p.value(),
        }
    }

    pub fn value(subject: &str, name: &str, value: f64) -> Self {
        Record::Value {
            subject: subject.into(),
            name: name.into(),
            value,
        }
    }

    pub fn flag(subject: &str, name: &str, value: bool) -> Self {
        Record::Flag {
            subject: subject.into(),
            name: name.into(),
            value,
        }
    }

    pub fn real_region(subject: &str, epsilon: f64, region: &RealRegion, grid: Option<Grid>) -> Self {
        Record::RealRegion {
            subject: subject.into(),
            epsilon,
            region: RegionView::new(region, grid),
        }
    }

    pub fn label_region(subject: &str, epsilon: f64, labels: &[Label]) -> Self {
        Record::LabelRegion {
            subject: subject.into(),
            epsilon,
            labels: labels.iter().map(Label::to_string).collect(),
        }
    }

    /// Records that only appear in JSON lines, to keep tables short.
    fn is_detail(&self) -> bool {
        matches!(self, Record::Step(_) | Record::Capital { .. })
    }

    fn table(&self) -> String {
        match self {
            Record::PValue {
                subject,
                label,
                count,
                n,
                value,
            } => format!("{subject}  p({label}) = {count}/{n} ({value:.2})"),
            Record::ConfidenceCredibility {
                subject,
                confidence,
                credibility,
            } => format!("{subject}  confidence {confidence:.2}  credibility {credibility:.2}"),
            Record::LabelRegion {
                subject,
                epsilon,
                labels,
            } => format!("{subject}  ε = {}  region {{{}}}", level(*epsilon), labels.join(", ")),
            Record::RealRegion {
                subject,
                epsilon,
                region,
            } => format!("{subject}  ε = {}  region {}", level(*epsilon), region.table()),
            Record::Value { subject, name, value } => format!("{subject}  {name} = {}", number(*value)),
            Record::Flag { subject, name, value } => format!("{subject}  {name} = {value}"),
            Record::Aggregates {
                subject,
                epsilon,
                error_rate,
                aggregates: a,
                per_label_error_rates,
            } => {
                let mut s = format!(
                    "{subject}  ε = {}  error rate {error_rate:.4} ({} of {} counted, {} warm-up)\n",
                    level(*epsilon),
                    a.total_errors,
                    a.total_examples,
                    a.warm_up
                );
                let _ = write!(
                    s,
                    "{subject}  singleton hits {}  uncertain hits {}  total hits {}  empty {}  singleton errors {}  uncertain errors {}  % hits {:.1}",
                    a.singleton_hits,
                    a.uncertain_hits,
                    a.total_hits,
                    a.empty,
                    a.singleton_errors,
                    a.uncertain_errors,
                    a.pct_hits
                );
                for (label, rate) in per_label_error_rates {
                    let _ = write!(s, "\n{subject}  error rate for {label} {rate:.4}");
                }
                s
            }
            Record::Trial {
                trial,
                errors,
                counted,
                error_rate,
            } => format!("trial {trial}  errors {errors} of {counted}  rate {error_rate:.4}"),
            Record::Step(r) => format!("step {}  {}  {}", r.step, r.label, r.region),
            Record::Capital { n, capital, .. } => format!("n = {n}  capital {capital}"),
        }
    }
}

/// Significance levels print with up to 6 decimals, trailing zeros removed.
fn level(e: f64) -> String {
    let s = format!("{e:.6}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn number(v: f64) -> String {
    if v.is_finite() && v == v.round() && v.abs() < 1e15 {
        format!("{v}")
    } else {
        format!("{v:.6}")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
struct Header<'a> {
    record: &'static str,
    command: &'a str,
    seed: Option<u64>,
    model: Option<&'a str>,
    measure: Option<&'a str>,
    epsilons: &'a [f64],
    notes: &'a [String],
}

/// Everything a subcommand prints.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunReport {
    pub command: String,
    pub seed: Option<u64>,
    pub model: Option<String>,
    pub measure: Option<String>,
    pub epsilons: Vec<f64>,
    /// Conventions in force and warnings raised during the run.
    pub notes: Vec<String>,
    pub records: Vec<Record>,
}

impl RunReport {
    pub fn new(command: impl Into<String>) -> Self {
        RunReport {
            command: command.into(),
            ..RunReport::default()
        }
    }

    pub fn push(&mut self, record: Record) {
        self.records.push(record);
    }

    pub fn note(&mut self, note: impl Into<String>) {
        let note = note.into();
        if !self.notes.contains(&note) {
            self.notes.push(note);
        }
    }

    pub fn render(&self, format: Format) -> CliResult<String> {
        match format {
            Format::Table => Ok(self.table()),
            Format::JsonLines => self.json_lines(),
        }
    }

    fn table(&self) -> String {
        let mut out = format!("# {}\n", self.command);
        if let Some(seed) = self.seed {
            let _ = writeln!(out, "# seed {seed}");
        }
        if let Some(m) = &self.model {
            let _ = writeln!(out, "# model {m}");
        }
        if let Some(m) = &self.measure {
            let _ = writeln!(out, "# measure {m}");
        }
        if !self.epsilons.is_empty() {
            let levels: Vec<String> = self.epsilons.iter().map(|&e| level(e)).collect();
            let _ = writeln!(out, "# ε {}", levels.join(", "));
        }
        for n in &self.notes {
            let _ = writeln!(out, "# note: {n}");
        }
        for r in self.records.iter().filter(|r| !r.is_detail()) {
            out.push_str(&r.table());
            out.push('\n');
        }
        out
    }

    fn json_lines(&self) -> CliResult<String> {
        let header = Header {
            record: "header",
            command: &self.command,
            seed: self.seed,
            model: self.model.as_deref(),
            measure: self.measure.as_deref(),
            epsilons: &self.epsilons,
            notes: &self.notes,
        };
        let mut out = json_line(&header)?;
        for r in &self.records {
            out.push_str(&json_line(r)?);
        }
        Ok(out)
    }
}

fn json_line<T: Serialize>(v: &T) -> CliResult<String> {
    let mut s = serde_json::to_string(v).map_err(|e| CliError::Internal(e.to_string()))?;
    s.push('\n');
    Ok(s)
}
