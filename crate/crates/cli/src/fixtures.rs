//! Datasets compiled into the binary.

use std::path::Path;

use crate::dataset::{parse, Dataset, Schema, Sidecar};
use crate::error::CliResult;

pub const CZUBER_CSV: &str = include_str!("../data/czuber.csv");
pub const CZUBER_SIDECAR: &str = include_str!("../data/czuber.csv.toml");
pub const IRIS25_CSV: &str = include_str!("../data/iris25.csv");

/// The value that followed the nineteen bundled Czuber observations.
pub const CZUBER_NEXT: f64 = 16.0;

/// Bundled files by name.
pub fn bundled(name: &str) -> Option<(&'static str, &'static str)> {
    match name {
        "czuber.csv" => Some((CZUBER_CSV, CZUBER_SIDECAR)),
        "iris25.csv" => Some((IRIS25_CSV, "")),
        _ => None,
    }
}

/// Looks up a bundled file by the final component of `path`; used when
/// `path` does not exist on disk.
pub fn load_bundled(path: &Path, schema: &Schema) -> Option<CliResult<Dataset>> {
    let name = path.file_name()?.to_str()?;
    let (csv, side) = bundled(name)?;
    Some(parse_bundled(csv, side, schema))
}

fn parse_bundled(csv: &str, side: &str, schema: &Schema) -> CliResult<Dataset> {
    let sidecar: Sidecar = toml::from_str(side).expect("bundled sidecar parses");
    parse(csv, schema, &sidecar)
}

pub fn czuber() -> Dataset {
    parse_bundled(CZUBER_CSV, CZUBER_SIDECAR, &Schema::default()).expect("bundled data parses")
}

fn iris(label: &str, grid: &str) -> Dataset {
    let schema = Schema {
        label_column: Some(label.into()),
        features: Some(vec!["sepal_length".into()]),
    };
    parse_bundled(IRIS25_CSV, grid, &schema).expect("bundled data parses")
}

/// Sepal length → species.
pub fn iris_class() -> Dataset {
    iris("species", "")
}

/// Sepal length → petal width, reported on a 0.1 grid.
pub fn iris_reg() -> Dataset {
    iris("petal_width", "label_kind = \"real\"\ngrid_step = 0.1\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use conformal_core::fixtures;

    #[test]
    fn bundled_files_match_the_library_fixtures() {
        assert_eq!(czuber().values(), fixtures::czuber_values());
        assert_eq!(czuber().grid.map(|g| g.step), Some(1.0));
        assert_eq!(iris_class().examples, fixtures::iris_species());
        assert_eq!(iris_reg().examples, fixtures::iris_petal());
        assert_eq!(CZUBER_NEXT, fixtures::CZUBER_NEXT);
    }
}
