//! Form schemas for the generated instructional-design editors.
//!
//! A schema describes the form for one lesson. Repeatable sections carry
//! `[min..max]` bounds; `max = None` means unbounded.

use serde::{Deserialize, Serialize};

use super::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Repeat {
    pub min: u32,
    pub max: Option<u32>,
}

impl Repeat {
    pub const ONCE: Repeat = Repeat {
        min: 1,
        max: Some(1),
    };
    pub const OPTIONAL: Repeat = Repeat {
        min: 0,
        max: Some(1),
    };
    pub const MANY: Repeat = Repeat { min: 1, max: None };
    pub const ANY: Repeat = Repeat { min: 0, max: None };

    pub fn is_valid(&self) -> bool {
        self.max.is_none_or(|max| self.min <= max)
    }
}

impl From<Bounds> for Repeat {
    fn from(b: Bounds) -> Self {
        Repeat {
            min: b.min,
            max: Some(b.max),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum FieldKind {
    ShortText,
    LongText,
    Enum { options: Vec<String> },
    AssetAudio,
    AssetImage,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormField {
    pub id: String,
    pub label: String,
    pub kind: FieldKind,
    pub required: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormSection {
    pub id: String,
    pub title: String,
    pub repeat: Repeat,
    pub fields: Vec<FormField>,
    pub subsections: Vec<FormSection>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EditorSchema {
    #[serde(rename = "spec")]
    pub spec_name: String,
    pub sections: Vec<FormSection>,
}

impl EditorSchema {
    pub fn to_json(&self) -> String {
        crate::json::to_canonical_string(self).expect("schema serializes")
    }

    pub fn section(&self, id: &str) -> Option<&FormSection> {
        fn find<'a>(sections: &'a [FormSection], id: &str) -> Option<&'a FormSection> {
            sections.iter().find_map(|s| {
                if s.id == id {
                    Some(s)
                } else {
                    find(&s.subsections, id)
                }
            })
        }
        find(&self.sections, id)
    }
}

fn field(id: &str, label: &str, kind: FieldKind, required: bool) -> FormField {
    FormField {
        id: id.into(),
        label: label.into(),
        kind,
        required,
    }
}

fn section(id: &str, title: &str, repeat: Repeat, fields: Vec<FormField>) -> FormSection {
    FormSection {
        id: id.into(),
        title: title.into(),
        repeat,
        fields,
        subsections: Vec::new(),
    }
}

fn with_subsections(mut s: FormSection, subsections: Vec<FormSection>) -> FormSection {
    s.subsections = subsections;
    s
}

fn text_and_assets(id: &str, title: &str, repeat: Repeat) -> FormSection {
    section(
        id,
        title,
        repeat,
        vec![
            field("text", "Text", FieldKind::LongText, true),
            field("sound", "Sound", FieldKind::AssetAudio, false),
            field("image", "Image", FieldKind::AssetImage, false),
        ],
    )
}

fn frame(id: &str, title: &str) -> FormSection {
    section(
        id,
        title,
        Repeat::OPTIONAL,
        vec![
            field("text", "Text", FieldKind::LongText, false),
            field("sound", "Sound", FieldKind::AssetAudio, false),
            field("image", "Image", FieldKind::AssetImage, false),
        ],
    )
}

fn goals(spec: &IdSpecification, catalog: &Catalog) -> FormSection {
    let fields = match spec.goal_technique {
        GoalTechnique::ABCD => catalog
            .abcd_parts
            .iter()
            .map(|part| field(part, &capitalize(part), FieldKind::ShortText, true))
            .collect(),
        GoalTechnique::BloomRevised => vec![
            field(
                "level",
                "Bloom level",
                FieldKind::Enum {
                    options: catalog.bloom_levels.clone(),
                },
                true,
            ),
            field("text", "Goal", FieldKind::LongText, true),
        ],
        GoalTechnique::Plain3Rs => vec![field("text", "Goal", FieldKind::LongText, true)],
    };
    section("goal", "Goals", Repeat::MANY, fields)
}

fn process(spec: &IdSpecification, catalog: &Catalog) -> Vec<FormSection> {
    match spec.process_model {
        ProcessModel::PASI | ProcessModel::PasiMerrill => {
            let b = spec.process_bounds;
            let mut instruction_fields = vec![field("title", "Title", FieldKind::ShortText, true)];
            if spec.process_model == ProcessModel::PasiMerrill {
                instruction_fields.push(field(
                    "principle",
                    "First principle",
                    FieldKind::Enum {
                        options: catalog.merrill_principles.clone(),
                    },
                    true,
                ));
            }
            let title = || vec![field("title", "Title", FieldKind::ShortText, true)];
            let instruction = section(
                "instruction",
                "Instruction",
                b.instruction.into(),
                instruction_fields,
            );
            let scene = with_subsections(
                section("scene", "Scene", b.scene.into(), title()),
                vec![instruction],
            );
            let act = with_subsections(section("act", "Act", b.act.into(), title()), vec![scene]);
            vec![with_subsections(
                section("play", "Play", b.play.into(), title()),
                vec![act],
            )]
        }
        ProcessModel::GagneNine => vec![section(
            "event",
            "Events of instruction",
            Repeat {
                min: 1,
                max: Some(catalog.gagne_events.len() as u32),
            },
            vec![
                field(
                    "event",
                    "Event",
                    FieldKind::Enum {
                        options: catalog.gagne_events.clone(),
                    },
                    true,
                ),
                field("activity", "Activity", FieldKind::LongText, true),
            ],
        )],
        ProcessModel::EclecticGeneric => vec![section(
            "activity",
            "Activities",
            Repeat::MANY,
            vec![
                field("title", "Title", FieldKind::ShortText, true),
                field("description", "Description", FieldKind::LongText, false),
            ],
        )],
    }
}

fn content(spec: &IdSpecification) -> Vec<FormSection> {
    match spec.content_scheme {
        ContentScheme::FCRMT => {
            let case = section(
                "case",
                "Cases",
                Repeat::ANY,
                vec![
                    field("text", "Word", FieldKind::ShortText, true),
                    field("sound", "Sound", FieldKind::AssetAudio, false),
                    field("image", "Image", FieldKind::AssetImage, false),
                ],
            );
            let fact = with_subsections(
                section(
                    "fact",
                    "Facts",
                    Repeat::MANY,
                    vec![
                        field("text", "Syllable", FieldKind::ShortText, true),
                        field("sound", "Sound", FieldKind::AssetAudio, false),
                    ],
                ),
                vec![case],
            );
            vec![
                fact,
                text_and_assets("rule", "Rules", Repeat::ANY),
                text_and_assets("model", "Models", Repeat::ANY),
                text_and_assets("theory", "Theories", Repeat::ANY),
            ]
        }
        ContentScheme::PrimerPages => vec![text_and_assets("page", "Primer pages", Repeat::MANY)],
        ContentScheme::PlainResources => {
            vec![text_and_assets("resource", "Resources", Repeat::MANY)]
        }
    }
}

fn capitalize(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

pub fn generate_editor_schema(spec: &IdSpecification) -> EditorSchema {
    generate_editor_schema_with(spec, &Catalog::standard())
}

/// Builds the lesson form for `spec` using the vocabularies in `catalog`.
pub fn generate_editor_schema_with(spec: &IdSpecification, catalog: &Catalog) -> EditorSchema {
    let mut sections = vec![
        section(
            "lesson",
            "Lesson",
            Repeat::ONCE,
            vec![field("title", "Title", FieldKind::ShortText, true)],
        ),
        with_subsections(
            section("instructions", "Instructions", Repeat::OPTIONAL, Vec::new()),
            vec![
                frame("start", "Start"),
                frame("middle", "Middle"),
                frame("end", "End"),
            ],
        ),
        goals(spec, catalog),
    ];
    sections.extend(process(spec, catalog));
    sections.extend(content(spec));
    for opt in &spec.optional_sections {
        let (id, title) = match opt {
            OptionalSection::Context => ("context", "Context"),
            OptionalSection::Environment => ("environment", "Environment"),
        };
        sections.push(section(
            id,
            title,
            Repeat::OPTIONAL,
            vec![field(
                "description",
                "Description",
                FieldKind::LongText,
                true,
            )],
        ));
    }
    if spec.evaluation_required {
        sections.push(section(
            "evaluation",
            "Evaluation",
            Repeat::ONCE,
            vec![field("criteria", "Criteria", FieldKind::LongText, true)],
        ));
    }
    EditorSchema {
        spec_name: spec.name.clone(),
        sections,
    }
}
