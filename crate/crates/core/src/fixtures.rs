//! Small reference datasets used throughout the tests and by the CLI.

use crate::example::{Example, Label};

/// Nineteen integer observations, followed by the twentieth.
pub const CZUBER: [f64; 19] = [
    17.0, 20.0, 10.0, 17.0, 12.0, 15.0, 19.0, 22.0, 17.0, 19.0, 14.0, 22.0, 18.0, 17.0, 13.0,
    12.0, 18.0, 15.0, 17.0,
];

/// The twentieth Czuber observation.
pub const CZUBER_NEXT: f64 = 16.0;

/// Twenty-five iris flowers: sepal length, petal width, species
/// (`s` setosa, `v` versicolor). The last row is the flower to predict.
pub const IRIS25: [(f64, f64, &str); 25] = [
    (5.0, 0.3, "s"),
    (4.4, 0.2, "s"),
    (4.9, 0.2, "s"),
    (4.4, 0.2, "s"),
    (5.1, 0.4, "s"),
    (5.9, 1.5, "v"),
    (5.0, 0.2, "s"),
    (6.4, 1.3, "v"),
    (6.7, 1.4, "v"),
    (6.2, 1.5, "v"),
    (5.1, 0.2, "s"),
    (4.6, 0.2, "s"),
    (5.0, 0.6, "s"),
    (5.4, 0.4, "s"),
    (5.0, 1.0, "v"),
    (6.7, 1.7, "v"),
    (5.8, 1.2, "v"),
    (5.5, 0.2, "s"),
    (5.8, 1.0, "v"),
    (5.4, 0.4, "s"),
    (5.1, 0.3, "s"),
    (5.7, 1.3, "v"),
    (4.6, 0.3, "s"),
    (4.6, 0.2, "s"),
    (6.8, 1.4, "v"),
];

pub fn czuber_values() -> Vec<f64> {
    CZUBER.to_vec()
}

/// Sepal length → species, all 25 rows.
pub fn iris_species() -> Vec<Example> {
    IRIS25
        .iter()
        .map(|&(x, _, y)| Example::classified(&[x], y))
        .collect()
}

/// Sepal length → petal width, all 25 rows.
pub fn iris_petal() -> Vec<Example> {
    IRIS25
        .iter()
        .map(|&(x, y, _)| Example::regression(&[x], y))
        .collect()
}

pub fn iris_labels() -> Vec<Label> {
    vec![Label::class("s"), Label::class("v")]
}
