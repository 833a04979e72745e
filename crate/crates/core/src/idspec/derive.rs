use std::collections::{BTreeSet, HashSet};

use thiserror::Error;

use super::*;
use crate::diag::{Diagnostic, Diagnostics};
use crate::featmodel::{check_configuration, Configuration, FeatureModel};

/// Feature names that carry meaning for derivation. At least one of these
/// must appear in a model for it to be recognized.
pub const RECOGNIZED_FEATURES: &[&str] = &[
    "GoalsPattern",
    "Bloom",
    "ABCD",
    "ProcessPattern",
    "Play",
    "Act",
    "Scene",
    "Instruction",
    "ContentPattern",
    "MerrillModel",
    "GagneModel",
    "ContextPattern",
    "EnvironmentPattern",
];

/// Names of the shipped design-family model that are structural and never
/// become lineage tags.
const STRUCTURAL: &[&str] = &[
    "IPCL",
    "ThreeRs",
    "EclecticMethod",
    "PASI",
    "FirstPrinciples",
    "PrimerPages",
    "FCRMT",
    "Resources",
    "Fact",
    "Case",
    "Rule",
    "Model",
    "Theory",
    "EvaluationPattern",
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeriveError {
    #[error("INVALID_CONFIG: configuration is not valid for the model\n{0}")]
    InvalidConfig(Diagnostics),
    #[error("MODEL_NOT_RECOGNIZED: model `{0}` has none of the known design features")]
    ModelNotRecognized(String),
}

impl DeriveError {
    pub fn code(&self) -> &'static str {
        match self {
            DeriveError::InvalidConfig(_) => "INVALID_CONFIG",
            DeriveError::ModelNotRecognized(_) => "MODEL_NOT_RECOGNIZED",
        }
    }

    pub fn diagnostics(&self) -> Vec<Diagnostic> {
        match self {
            DeriveError::InvalidConfig(d) => d.0.clone(),
            DeriveError::ModelNotRecognized(_) => {
                vec![Diagnostic::error(self.code(), "", self.to_string())]
            }
        }
    }
}

/// Maps a valid configuration to the specification it selects. Only the
/// set of selected features matters; selected features outside the known
/// vocabulary are appended to the lineage in tree order.
pub fn derive_specification(
    model: &FeatureModel,
    config: &Configuration,
) -> Result<IdSpecification, DeriveError> {
    let features = model.features();
    if !features
        .iter()
        .any(|f| RECOGNIZED_FEATURES.contains(&f.feature.name.as_str()))
    {
        return Err(DeriveError::ModelNotRecognized(model.name.clone()));
    }
    let report = check_configuration(model, config);
    if !report.valid {
        return Err(DeriveError::InvalidConfig(Diagnostics(report.diagnostics)));
    }
    let selected: HashSet<&str> = config.selected_names().collect();
    let has = |n: &str| selected.contains(n);

    let goal_technique = if has("Bloom") {
        GoalTechnique::BloomRevised
    } else if has("ABCD") {
        GoalTechnique::ABCD
    } else {
        GoalTechnique::Plain3Rs
    };
    let process_model = if has("MerrillModel") && has("Play") {
        ProcessModel::PasiMerrill
    } else if has("Play") {
        ProcessModel::PASI
    } else if has("GagneModel") {
        ProcessModel::GagneNine
    } else {
        ProcessModel::EclecticGeneric
    };
    let content_scheme = if has("FCRMT") || process_model == ProcessModel::PasiMerrill {
        ContentScheme::FCRMT
    } else if has("PrimerPages") {
        ContentScheme::PrimerPages
    } else {
        ContentScheme::PlainResources
    };
    let mut optional_sections = BTreeSet::new();
    if has("ContextPattern") {
        optional_sections.insert(OptionalSection::Context);
    }
    if has("EnvironmentPattern") {
        optional_sections.insert(OptionalSection::Environment);
    }
    let bounds_of = |name: &str| {
        model
            .find(name)
            .map(|f| {
                let max = f.cardinality.max.clamp(1, MAX_PROCESS_UNITS);
                Bounds {
                    min: f.cardinality.min.clamp(1, max),
                    max,
                }
            })
            .unwrap_or(Bounds::DEFAULT)
    };
    let process_bounds = ProcessBounds {
        play: bounds_of("Play"),
        act: bounds_of("Act"),
        scene: bounds_of("Scene"),
        instruction: bounds_of("Instruction"),
    };

    let mut base = lineage(goal_technique, process_model, content_scheme);
    for fr in features.iter().skip(1) {
        let name = fr.feature.name.as_str();
        if has(name) && !RECOGNIZED_FEATURES.contains(&name) && !STRUCTURAL.contains(&name) {
            base.push(name.to_string());
        }
    }

    Ok(IdSpecification {
        name: model.name.clone(),
        base,
        goal_technique,
        process_model,
        content_scheme,
        evaluation_required: has("EvaluationPattern"),
        optional_sections,
        process_bounds,
    })
}
