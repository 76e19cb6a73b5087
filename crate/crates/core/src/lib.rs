//! Conformal prediction over on-line compression models.
//!
//! Regions are computed exactly: classification by sweeping the finite
//! label space, regression by solving for the breakpoints of `|c·y + d|`
//! score families. Three compression models are provided — plain
//! exchangeability, exchangeability within label, and the Gaussian linear
//! model — plus an on-line evaluation harness and a betting auditor that
//! turns error streams into capital certificates.

pub mod bag;
pub mod conformal;
pub mod error;
pub mod example;
pub mod fixtures;
pub mod level;
pub mod nonconformity;
pub mod ocm;
pub mod pvalue;
pub mod region;
pub mod validity;

pub use bag::{bag_draw_probability, bag_ordering_probability, Bag};
pub use error::{Error, Result};
pub use example::{distance, Example, Label, LabelKind, Object};
pub use level::SignificanceLevel;
pub use pvalue::{
    confidence_credibility, p_value_from_scores, region_from_pvalues, PValue, PValueReport,
};
pub use region::{grid_snap, Interval, PredictionRegion, RealRegion};
