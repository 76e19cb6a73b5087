//! CSV datasets with an optional TOML sidecar.
//!
//! A dataset file has a header row naming its columns; one column holds
//! labels and the others (or a chosen subset) hold decimal features. The
//! sidecar `<file>.toml`, when present, fixes the label kind and the grid
//! on which real labels are reported:
//!
//! ```toml
//! label_kind = "real"     # or "class"
//! grid_step = 0.1
//! grid_origin = 0.0
//! ```
//!
//! Without a sidecar the label kind is inferred: all-numeric labels are
//! real, all-non-numeric labels are classes, anything else is an error.

use std::fs;
use std::path::{Path, PathBuf};

use conformal_core::{Example, Label, LabelKind};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Label kind as written in a sidecar.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Class,
    Real,
}

impl Kind {
    pub fn of(kind: LabelKind) -> Option<Self> {
        match kind {
            LabelKind::Categorical => Some(Kind::Class),
            LabelKind::Real => Some(Kind::Real),
            LabelKind::Absent => None,
        }
    }
}

/// Lattice `origin + k·step` on which real regions are reported.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub step: f64,
    #[serde(default)]
    pub origin: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label_kind: Option<Kind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_step: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_origin: Option<f64>,
}

/// Which columns to read.
#[derive(Clone, Debug, Default)]
pub struct Schema {
    /// Label column name; defaults to the last column.
    pub label_column: Option<String>,
    /// Feature columns in order; defaults to every other column.
    pub features: Option<Vec<String>>,
}

/// A validated, ordered dataset.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    pub features: Vec<String>,
    pub label: String,
    pub kind: Kind,
    pub grid: Option<Grid>,
    pub examples: Vec<Example>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    /// Distinct class labels in canonical order.
    pub fn classes(&self) -> Vec<Label> {
        let mut labels: Vec<Label> = self.examples.iter().map(|z| z.label.clone()).collect();
        labels.sort();
        labels.dedup();
        labels
    }

    pub fn values(&self) -> Vec<f64> {
        self.examples
            .iter()
            .filter_map(|z| z.label.as_real())
            .collect()
    }

    fn sidecar(&self) -> Sidecar {
        Sidecar {
            label_kind: Some(self.kind),
            grid_step: self.grid.map(|g| g.step),
            grid_origin: self.grid.map(|g| g.origin),
        }
    }
}

/// The sidecar path for a dataset file: `data.csv` → `data.csv.toml`.
pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".toml");
    PathBuf::from(s)
}

/// Reads a dataset file and, if present, its sidecar.
pub fn ingest(path: &Path, schema: &Schema) -> CliResult<Dataset> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let side = sidecar_path(path);
    let sidecar = if side.exists() {
        let raw = fs::read_to_string(&side).map_err(|e| CliError::io(&side, e))?;
        toml::from_str(&raw).map_err(|e| CliError::Input(format!("{}: {e}", side.display())))?
    } else {
        Sidecar::default()
    };
    parse(&text, schema, &sidecar).map_err(|e| e.in_file(path))
}

/// Parses dataset text. Rows and columns in errors are 1-based, with the
/// header as row 1.
pub fn parse(text: &str, schema: &Schema, sidecar: &Sidecar) -> CliResult<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| CliError::Input(format!("unreadable header: {e}")))?
        .iter()
        .map(str::to_string)
        .collect();
    if header.is_empty() || header.iter().all(String::is_empty) {
        return Err(CliError::Input("empty file: a header row is required".into()));
    }
    let find = |name: &str| {
        header.iter().position(|h| h == name).ok_or_else(|| {
            CliError::Input(format!("no column named `{name}`; columns are {}", header.join(", ")))
        })
    };
    let label_col = match &schema.label_column {
        Some(name) => find(name)?,
        None => header.len() - 1,
    };
    let feature_cols: Vec<usize> = match &schema.features {
        Some(names) => names.iter().map(|n| find(n)).collect::<CliResult<_>>()?,
        None => (0..header.len()).filter(|&c| c != label_col).collect(),
    };
    if feature_cols.contains(&label_col) {
        return Err(CliError::Input("the label column cannot also be a feature".into()));
    }

    let mut rows: Vec<(usize, Vec<f64>, String)> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 2;
        let record = record.map_err(|e| CliError::Input(format!("row {row}: {e}")))?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        if record.len() != header.len() {
            return Err(CliError::at(
                row,
                record.len().min(header.len()) + 1,
                format!("expected {} fields, found {}", header.len(), record.len()),
            ));
        }
        let mut x = Vec::with_capacity(feature_cols.len());
        for &c in &feature_cols {
            let v = parse_number(&record[c]).ok_or_else(|| {
                CliError::at(row, c + 1, format!("`{}` is not a finite decimal", &record[c]))
            })?;
            x.push(v);
        }
        let y = record[label_col].to_string();
        if y.is_empty() {
            return Err(CliError::at(row, label_col + 1, "missing label"));
        }
        rows.push((row, x, y));
    }
    if rows.is_empty() {
        return Err(CliError::Input("no data rows".into()));
    }

    let kind = match sidecar.label_kind {
        Some(k) => k,
        None => infer_kind(&rows, label_col)?,
    };
    let examples = rows
        .into_iter()
        .map(|(row, x, y)| {
            let label = match kind {
                Kind::Class => Label::class(&y),
                Kind::Real => Label::real(parse_number(&y).ok_or_else(|| {
                    CliError::at(row, label_col + 1, format!("real label expected, found `{y}`"))
                })?),
            };
            Ok(Example::new(x, label))
        })
        .collect::<CliResult<Vec<_>>>()?;
    let grid = match (sidecar.grid_step, sidecar.grid_origin) {
        (Some(step), origin) if step > 0.0 && step.is_finite() => Some(Grid {
            step,
            origin: origin.unwrap_or(0.0),
        }),
        (Some(step), _) => return Err(CliError::Input(format!("grid_step must be positive, got {step}"))),
        (None, _) => None,
    };
    Ok(Dataset {
        features: feature_cols.iter().map(|&c| header[c].clone()).collect(),
        label: header[label_col].clone(),
        kind,
        grid,
        examples,
    })
}

fn parse_number(s: &str) -> Option<f64> {
    s.parse::<f64>().ok().filter(|v| v.is_finite())
}

fn infer_kind(rows: &[(usize, Vec<f64>, String)], label_col: usize) -> CliResult<Kind> {
    let numeric = |y: &str| parse_number(y).is_some();
    let first = numeric(&rows[0].2);
    match rows.iter().find(|(_, _, y)| numeric(y) != first) {
        None if first => Ok(Kind::Real),
        None => Ok(Kind::Class),
        Some((row, _, y)) => Err(CliError::at(
            *row,
            label_col + 1,
            format!("mixed label kinds: `{y}` differs from row 2's `{}`", rows[0].2),
        )),
    }
}

/// Writes a dataset as CSV text plus its sidecar text.
pub fn emit(dataset: &Dataset) -> CliResult<(String, String)> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = dataset.features.clone();
    header.push(dataset.label.clone());
    let io = |e: csv::Error| CliError::Internal(e.to_string());
    w.write_record(&header).map_err(io)?;
    for z in &dataset.examples {
        let mut rec: Vec<String> = z.object.iter().map(|v| v.to_string()).collect();
        rec.push(z.label.to_string());
        w.write_record(&rec).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Internal(e.to_string()))?;
    let csv = String::from_utf8(bytes).map_err(|e| CliError::Internal(e.to_string()))?;
    let side = toml::to_string(&dataset.sidecar()).map_err(|e| CliError::Internal(e.to_string()))?;
    Ok((csv, side))
}

/// Writes `path` and its sidecar.
pub fn write(dataset: &Dataset, path: &Path) -> CliResult<()> {
    let (csv, side) = emit(dataset)?;
    fs::write(path, csv).map_err(|e| CliError::io(path, e))?;
    let sp = sidecar_path(path);
    fs::write(&sp, side).map_err(|e| CliError::io(&sp, e))
}
