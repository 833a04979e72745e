//! Instructional-design specifications: the four shipped presets,
//! derivation from feature configurations, and editor form schemas.

mod derive;
mod schema;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::featmodel::{AttributeValue, Configuration};

pub use derive::{derive_specification, DeriveError, RECOGNIZED_FEATURES};
pub use schema::{
    generate_editor_schema, generate_editor_schema_with, EditorSchema, FieldKind, FormField,
    FormSection, Repeat,
};

/// Largest count any play/act/scene/instruction level may allow.
pub const MAX_PROCESS_UNITS: u32 = 25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GoalTechnique {
    Plain3Rs,
    BloomRevised,
    ABCD,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ProcessModel {
    PASI,
    #[serde(rename = "PASI_Merrill")]
    PasiMerrill,
    GagneNine,
    EclecticGeneric,
}

impl ProcessModel {
    pub fn is_pasi(self) -> bool {
        matches!(self, ProcessModel::PASI | ProcessModel::PasiMerrill)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ContentScheme {
    PrimerPages,
    FCRMT,
    PlainResources,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OptionalSection {
    Context,
    Environment,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bounds {
    pub min: u32,
    pub max: u32,
}

impl Bounds {
    pub const DEFAULT: Bounds = Bounds {
        min: 1,
        max: MAX_PROCESS_UNITS,
    };

    pub fn contains(&self, n: usize) -> bool {
        self.min as usize <= n && n <= self.max as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProcessBounds {
    pub play: Bounds,
    pub act: Bounds,
    pub scene: Bounds,
    pub instruction: Bounds,
}

impl ProcessBounds {
    pub fn levels(&self) -> [(&'static str, Bounds); 4] {
        [
            ("play", self.play),
            ("act", self.act),
            ("scene", self.scene),
            ("instruction", self.instruction),
        ]
    }
}

impl Default for ProcessBounds {
    fn default() -> Self {
        ProcessBounds {
            play: Bounds::DEFAULT,
            act: Bounds::DEFAULT,
            scene: Bounds::DEFAULT,
            instruction: Bounds::DEFAULT,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IdSpecification {
    pub name: String,
    /// Lineage tags, always starting with `IPCL`.
    pub base: Vec<String>,
    pub goal_technique: GoalTechnique,
    pub process_model: ProcessModel,
    pub content_scheme: ContentScheme,
    pub evaluation_required: bool,
    pub optional_sections: BTreeSet<OptionalSection>,
    pub process_bounds: ProcessBounds,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("invalid specification JSON: {0}")]
    Json(String),
    #[error("PASI_Merrill process requires the FCRMT content scheme")]
    MerrillWithoutFcrmt,
    #[error("{level} bounds [{min}..{max}] must lie within [1..25] with min <= max")]
    Bounds {
        level: &'static str,
        min: u32,
        max: u32,
    },
    #[error("lineage must include IPCL")]
    MissingIpcl,
}

impl IdSpecification {
    pub fn validate(&self) -> Result<(), SpecError> {
        if self.process_model == ProcessModel::PasiMerrill
            && self.content_scheme != ContentScheme::FCRMT
        {
            return Err(SpecError::MerrillWithoutFcrmt);
        }
        for (level, b) in self.process_bounds.levels() {
            if b.min < 1 || b.max > MAX_PROCESS_UNITS || b.min > b.max {
                return Err(SpecError::Bounds {
                    level,
                    min: b.min,
                    max: b.max,
                });
            }
        }
        if !self.base.iter().any(|t| t == "IPCL") {
            return Err(SpecError::MissingIpcl);
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self, SpecError> {
        let spec: IdSpecification =
            serde_json::from_str(text).map_err(|e| SpecError::Json(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        crate::json::to_canonical_string(self).expect("specification serializes")
    }
}

/// Lineage tags implied by the chosen techniques, in a fixed order.
pub(crate) fn lineage(
    goal: GoalTechnique,
    process: ProcessModel,
    content: ContentScheme,
) -> Vec<String> {
    let mut base = vec!["IPCL".to_string()];
    if process.is_pasi() {
        base.push("ProcessPattern(pasi)".into());
    }
    if content == ContentScheme::FCRMT {
        base.push("ContentPattern(fcrmt)".into());
    }
    if process == ProcessModel::PasiMerrill {
        base.push("MerrillFirstPrinciples".into());
    }
    if process == ProcessModel::GagneNine {
        base.push("GagneNineEvents".into());
    }
    match goal {
        GoalTechnique::BloomRevised => base.push("BloomRevisedTaxonomy".into()),
        GoalTechnique::ABCD => base.push("ABCDTechnique".into()),
        GoalTechnique::Plain3Rs => {}
    }
    base
}

fn preset(
    index: usize,
    goal: GoalTechnique,
    process: ProcessModel,
    content: ContentScheme,
) -> IdSpecification {
    IdSpecification {
        name: format!("IdSpecification{index}"),
        base: lineage(goal, process, content),
        goal_technique: goal,
        process_model: process,
        content_scheme: content,
        evaluation_required: true,
        optional_sections: BTreeSet::new(),
        process_bounds: ProcessBounds::default(),
    }
}

/// The four adult-literacy specification families, numbered 1 to 4.
pub fn preset_specifications() -> Vec<IdSpecification> {
    use ContentScheme::*;
    use GoalTechnique::*;
    use ProcessModel::*;
    vec![
        preset(1, Plain3Rs, EclecticGeneric, PrimerPages),
        preset(2, Plain3Rs, PASI, FCRMT),
        preset(3, BloomRevised, PasiMerrill, FCRMT),
        preset(4, ABCD, GagneNine, PlainResources),
    ]
}

/// Preset `number` (1-based).
pub fn preset_specification(number: usize) -> Option<IdSpecification> {
    number
        .checked_sub(1)
        .and_then(|i| preset_specifications().into_iter().nth(i))
}

/// Preset `number` expressed as a configuration over the shipped
/// design-family model ([`crate::featmodel::id_family_model`]).
pub fn preset_configuration(number: usize) -> Option<Configuration> {
    let common = [
        "InstructionalDesign",
        "IPCL",
        "GoalsPattern",
        "ProcessPattern",
        "ContentPattern",
        "EvaluationPattern",
    ];
    let pasi = ["PASI", "Play", "Act", "Scene", "Instruction"];
    let fcrmt = ["FCRMT", "Fact"];
    let extra: Vec<&str> = match number {
        1 => vec!["ThreeRs", "EclecticMethod", "PrimerPages"],
        2 => [&["ThreeRs"][..], &pasi, &fcrmt].concat(),
        3 => [
            &["Bloom", "MerrillModel", "FirstPrinciples"][..],
            &pasi,
            &fcrmt,
        ]
        .concat(),
        4 => vec!["ABCD", "GagneModel", "Resources"],
        _ => return None,
    };
    let mut config = Configuration::new("AdultLiteracyID");
    for name in common.iter().chain(extra.iter()) {
        config = config.select(*name, 1);
    }
    if config.is_selected("Fact") {
        config = config.assign("Fact", 1, "syllable", AttributeValue::Text("न".into()));
    }
    Some(config)
}

/// Pedagogical vocabularies used in editor schemas. Loaded from data so
/// they can be replaced without code changes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Catalog {
    pub abcd_parts: Vec<String>,
    pub bloom_levels: Vec<String>,
    pub gagne_events: Vec<String>,
    pub merrill_principles: Vec<String>,
}

impl Catalog {
    pub fn standard() -> Self {
        serde_json::from_str(include_str!("../../data/pedagogy.json"))
            .expect("shipped catalog parses")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}
