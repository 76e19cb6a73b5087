use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// A significance level `ε` strictly between 0 and 1.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct SignificanceLevel(f64);

impl SignificanceLevel {
    pub fn new(epsilon: f64) -> Result<Self> {
        if epsilon > 0.0 && epsilon < 1.0 {
            Ok(SignificanceLevel(epsilon))
        } else {
            Err(Error::InvalidLevel(epsilon))
        }
    }

    pub fn epsilon(self) -> f64 {
        self.0
    }

    /// The matching confidence level `1 − ε`.
    pub fn confidence(self) -> f64 {
        1.0 - self.0
    }
}

impl TryFrom<f64> for SignificanceLevel {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        SignificanceLevel::new(value)
    }
}

impl fmt::Display for SignificanceLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds_are_strict() {
        assert!(SignificanceLevel::new(0.05).is_ok());
        for bad in [0.0, 1.0, -0.1, 1.5, f64::NAN] {
            assert!(SignificanceLevel::new(bad).is_err(), "{bad}");
        }
    }
}
