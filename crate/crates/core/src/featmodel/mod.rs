//! Feature models: the textual language, configuration rules and
//! brute-force enumeration.

mod config;
mod enumerate;
mod model;
mod parser;
mod serialize;

pub use config::{
    check_configuration, AttributeAssignment, AttributeValue, Configuration, ValidityReport,
};
pub use enumerate::{
    count_configurations, enumerate_configurations, EnumerateError, DEFAULT_CLONE_CAP, SEARCH_LIMIT,
};
pub use model::*;
pub use parser::parse_model;
pub use serialize::serialize_model;

/// Source of the shipped instructional-design model covering the goal
/// priority, design-model choice and play/act/scene/instruction bounds.
pub const FIG8_SOURCE: &str = include_str!("../../data/fig8.fm");

/// Source of the adult-literacy design family used to derive
/// specifications.
pub const ID_FAMILY_SOURCE: &str = include_str!("../../data/id_family.fm");

pub fn fig8_model() -> FeatureModel {
    parse_model(FIG8_SOURCE).expect("shipped fig8 model parses")
}

pub fn id_family_model() -> FeatureModel {
    parse_model(ID_FAMILY_SOURCE).expect("shipped design-family model parses")
}
