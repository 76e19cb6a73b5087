//! Examples `z = (x, y)`: a real feature tuple plus an optional label.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

/// Feature tuple of an example. May be empty when predicting from old
/// examples alone.
pub type Object = Arc<[f64]>;

/// Label of an example.
///
/// Real labels are normalized so that `-0.0` becomes `0.0`; NaN is
/// rejected by [`Label::real`]. Ordering is total: `Absent < Class < Real`,
/// classes compare as strings and reals by value.
#[derive(Clone, Debug)]
pub enum Label {
    Absent,
    Class(Arc<str>),
    Real(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LabelKind {
    Absent,
    Categorical,
    Real,
}

impl Label {
    pub fn class(symbol: &str) -> Self {
        Label::Class(Arc::from(symbol))
    }

    /// # Panics
    ///
    /// Panics on NaN.
    pub fn real(value: f64) -> Self {
        assert!(!value.is_nan(), "real labels must not be NaN");
        Label::Real(if value == 0.0 { 0.0 } else { value })
    }

    pub fn kind(&self) -> LabelKind {
        match self {
            Label::Absent => LabelKind::Absent,
            Label::Class(_) => LabelKind::Categorical,
            Label::Real(_) => LabelKind::Real,
        }
    }

    pub fn as_real(&self) -> Option<f64> {
        match self {
            Label::Real(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_class(&self) -> Option<&str> {
        match self {
            Label::Class(s) => Some(s),
            _ => None,
        }
    }

    fn rank(&self) -> u8 {
        match self {
            Label::Absent => 0,
            Label::Class(_) => 1,
            Label::Real(_) => 2,
        }
    }
}

impl PartialEq for Label {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Label {}

impl PartialOrd for Label {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Label {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Label::Class(a), Label::Class(b)) => a.cmp(b),
            (Label::Real(a), Label::Real(b)) => a.total_cmp(b),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Absent => f.write_str("?"),
            Label::Class(s) => f.write_str(s),
            Label::Real(v) => write!(f, "{v}"),
        }
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Label::Absent => serializer.serialize_none(),
            Label::Class(s) => serializer.serialize_str(s),
            Label::Real(v) => serializer.serialize_f64(*v),
        }
    }
}

/// A single example `z_i = (x_i, y_i)`.
#[derive(Clone, Debug)]
pub struct Example {
    pub object: Object,
    pub label: Label,
}

impl Example {
    pub fn new(object: impl Into<Object>, label: Label) -> Self {
        Example {
            object: object.into(),
            label,
        }
    }

    /// An example with no features and a real label, as used when
    /// predicting a number from old examples alone.
    pub fn value(v: f64) -> Self {
        Example::new(Vec::new(), Label::real(v))
    }

    pub fn classified(object: &[f64], class: &str) -> Self {
        Example::new(object.to_vec(), Label::class(class))
    }

    pub fn regression(object: &[f64], y: f64) -> Self {
        Example::new(object.to_vec(), Label::real(y))
    }

    pub fn with_label(&self, label: Label) -> Self {
        Example {
            object: self.object.clone(),
            label,
        }
    }

    pub fn arity(&self) -> usize {
        self.object.len()
    }

    pub(crate) fn real_label(&self, measure: &'static str) -> crate::Result<f64> {
        self.label
            .as_real()
            .ok_or_else(|| crate::Error::precondition(measure, "real-valued labels"))
    }
}

fn cmp_objects(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    a.len().cmp(&b.len())
}

impl PartialEq for Example {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Example {}

impl PartialOrd for Example {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Example {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_objects(&self.object, &other.object).then_with(|| self.label.cmp(&other.label))
    }
}

impl fmt::Display for Example {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.object.is_empty() {
            return write!(f, "{}", self.label);
        }
        f.write_str("(")?;
        for (i, v) in self.object.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "; {})", self.label)
    }
}

/// Euclidean distance between feature tuples. One-dimensional objects use
/// the plain absolute difference.
pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    if a.len() == 1 {
        return (a[0] - b[0]).abs();
    }
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Checks that all examples share feature arity and label kind.
pub fn check_schema(examples: &[Example]) -> crate::Result<()> {
    let Some(first) = examples.first() else {
        return Ok(());
    };
    for (i, z) in examples.iter().enumerate() {
        if z.arity() != first.arity() {
            return Err(crate::Error::InvalidArgument(format!(
                "example {} has {} features, expected {}",
                i + 1,
                z.arity(),
                first.arity()
            )));
        }
        let (k, k0) = (z.label.kind(), first.label.kind());
        if k != k0 && k != LabelKind::Absent && k0 != LabelKind::Absent {
            return Err(crate::Error::InvalidArgument(format!(
                "example {} mixes label kinds",
                i + 1
            )));
        }
    }
    Ok(())
}
