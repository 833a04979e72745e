//! Product-line toolchain for instructional designs and eLearning primers.
//!
//! The pipeline runs from a feature model ([`featmodel`]) through a derived
//! instructional-design specification and its editor schema ([`idspec`]),
//! to lesson instance documents ([`idinstance`]) and the generated primer
//! bundle ([`generator`]). [`costmodel`] computes the economics of the
//! product line.

pub mod costmodel;
pub mod diag;
pub mod featmodel;
pub mod generator;
pub mod idinstance;
pub mod idspec;
pub mod json;

pub use diag::{Diagnostic, Severity};

use num_rational::Ratio;

/// Cost inputs in whole person-weeks.
pub type CostInputsPw = costmodel::CostInputs<i64>;
/// Cost report in whole person-weeks with exact person-month views.
pub type CostReportPw = costmodel::CostReport<i64>;
/// Cost inputs in exact rational person-weeks.
pub type CostInputsExact = costmodel::CostInputs<Ratio<i64>>;
/// Cost inputs in floating-point person-weeks.
pub type CostInputsF64 = costmodel::CostInputs<f64>;
