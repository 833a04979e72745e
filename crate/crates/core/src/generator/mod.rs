//! Primer bundle generation.
//!
//! A bundle is a directory:
//!
//! ```text
//! manifest.json      {title, lang, spec, lessons: [{index, title, file}]}
//! lessons/NN.json    {title, steps: [{id, kind, ...}], process?}
//! assets.json        [{path, media, referenced_by, present?}]
//! ```
//!
//! Every file is canonical JSON, so equal bundles produce equal bytes.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diag::{has_errors, Diagnostics};
use crate::idinstance::{
    decompose_word, taught_facts_through, validate_instance, AssetRef, IdInstance,
    InstructionFrame, Lesson, MediaKind, ProcessNode,
};
use crate::idspec::IdSpecification;
use crate::json::to_canonical_string;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FramePosition {
    Start,
    Middle,
    End,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StepKind {
    ShowFrame {
        frame: FramePosition,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        text: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        sound: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        image: Option<String>,
    },
    PresentGoal {
        text: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        sound: Option<String>,
    },
    /// One syllable falling into position `slot` of the word being built.
    DropFact {
        text: String,
        slot: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        sound: Option<String>,
    },
    /// Merges the `parts` slots dropped immediately before.
    Join {
        text: String,
        parts: usize,
    },
    RevealWord {
        text: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        sound: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        image: Option<String>,
    },
    PracticePrompt {
        words: Vec<String>,
    },
}

impl StepKind {
    pub fn name(&self) -> &'static str {
        match self {
            StepKind::ShowFrame { .. } => "show_frame",
            StepKind::PresentGoal { .. } => "present_goal",
            StepKind::DropFact { .. } => "drop_fact",
            StepKind::Join { .. } => "join",
            StepKind::RevealWord { .. } => "reveal_word",
            StepKind::PracticePrompt { .. } => "practice_prompt",
        }
    }

    fn assets(&self) -> Vec<&str> {
        match self {
            StepKind::ShowFrame { sound, image, .. }
            | StepKind::RevealWord { sound, image, .. } => {
                sound.iter().chain(image).map(String::as_str).collect()
            }
            StepKind::PresentGoal { sound, .. } | StepKind::DropFact { sound, .. } => {
                sound.iter().map(String::as_str).collect()
            }
            StepKind::Join { .. } | StepKind::PracticePrompt { .. } => Vec::new(),
        }
    }
}

/// Step ids are dense per lesson, starting at 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimelineStep {
    pub id: usize,
    #[serde(flatten)]
    pub kind: StepKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameOut {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sound: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub image: Option<String>,
}

/// A process unit as it appears in lesson JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProcessOut {
    pub title: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub frames: BTreeMap<String, FrameOut>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<ProcessOut>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LessonTimeline {
    pub title: String,
    pub steps: Vec<TimelineStep>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub process: Option<Vec<ProcessOut>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LessonEntry {
    pub index: usize,
    pub title: String,
    pub file: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub title: String,
    pub lang: String,
    pub spec: String,
    pub lessons: Vec<LessonEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StepRef {
    pub lesson: usize,
    pub step: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssetEntry {
    pub path: String,
    pub media: MediaKind,
    pub referenced_by: Vec<StepRef>,
    /// Whether the file exists; absent when no asset directory was given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub present: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimerBundle {
    pub manifest: Manifest,
    pub lessons: Vec<LessonTimeline>,
    pub assets: Vec<AssetEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("VALIDATION_ERRORS_PRESENT: the instance does not conform to its specification\n{0}")]
    ValidationErrorsPresent(Diagnostics),
    #[error("UNDECOMPOSABLE_WORD: `{word}` in lesson {lesson} is not built from taught facts")]
    UndecomposableWord { word: String, lesson: usize },
}

impl GenError {
    pub fn code(&self) -> &'static str {
        match self {
            GenError::ValidationErrorsPresent(_) => "VALIDATION_ERRORS_PRESENT",
            GenError::UndecomposableWord { .. } => "UNDECOMPOSABLE_WORD",
        }
    }
}

pub fn lesson_file_name(index: usize) -> String {
    format!("lessons/{index:02}.json")
}

fn path_of(a: &Option<AssetRef>) -> Option<String> {
    a.as_ref().map(|a| a.path().to_string())
}

fn show_frame(frame: FramePosition, f: &InstructionFrame) -> StepKind {
    StepKind::ShowFrame {
        frame,
        text: f.text.clone(),
        sound: path_of(&f.sound),
        image: path_of(&f.image),
    }
}

fn process_out(nodes: &[ProcessNode]) -> Vec<ProcessOut> {
    nodes
        .iter()
        .map(|n| {
            let mut frames = BTreeMap::new();
            if let Some(ins) = &n.instructions {
                for (name, f) in ins.frames() {
                    if let Some(f) = f {
                        frames.insert(
                            name.to_string(),
                            FrameOut {
                                text: f.text.clone(),
                                sound: path_of(&f.sound),
                                image: path_of(&f.image),
                            },
                        );
                    }
                }
            }
            ProcessOut {
                title: n.title.clone(),
                frames,
                children: process_out(&n.children),
            }
        })
        .collect()
}

/// Timeline for one lesson. `taught` is the fact set visible to it.
pub(crate) fn lesson_timeline(
    lesson: &Lesson,
    index: usize,
    taught: &[String],
) -> Result<LessonTimeline, GenError> {
    let mut steps: Vec<StepKind> = Vec::new();
    let ins = lesson.instructions.as_ref();
    if let Some(f) = ins.and_then(|i| i.start.as_ref()) {
        steps.push(show_frame(FramePosition::Start, f));
    }
    for g in &lesson.goals {
        steps.push(StepKind::PresentGoal {
            text: g.text.clone(),
            sound: path_of(&g.sound),
        });
    }
    if let Some(f) = ins.and_then(|i| i.middle.as_ref()) {
        steps.push(show_frame(FramePosition::Middle, f));
    }

    // syllable sounds come from the first fact that teaches them
    let mut fact_sound: BTreeMap<&str, Option<String>> = BTreeMap::new();
    for f in lesson.facts() {
        fact_sound
            .entry(f.text.as_str())
            .or_insert_with(|| path_of(&f.sound));
    }

    let mut words: Vec<String> = Vec::new();
    for fact in lesson.facts() {
        let sound = path_of(&fact.sound);
        steps.push(StepKind::DropFact {
            text: fact.text.clone(),
            slot: 0,
            sound: sound.clone(),
        });
        steps.push(StepKind::RevealWord {
            text: fact.text.clone(),
            sound,
            image: None,
        });
        for case in &fact.cases {
            let parts =
                decompose_word(&case.text, taught).map_err(|_| GenError::UndecomposableWord {
                    word: case.text.clone(),
                    lesson: index,
                })?;
            for (slot, syllable) in parts.iter().enumerate() {
                let sound = fact_sound.get(syllable.as_str()).cloned().flatten();
                steps.push(StepKind::DropFact {
                    text: syllable.clone(),
                    slot,
                    sound,
                });
            }
            steps.push(StepKind::Join {
                text: case.text.clone(),
                parts: parts.len(),
            });
            steps.push(StepKind::RevealWord {
                text: case.text.clone(),
                sound: path_of(&case.sound),
                image: path_of(&case.image),
            });
            if !words.contains(&case.text) {
                words.push(case.text.clone());
            }
        }
    }
    if !words.is_empty() {
        steps.push(StepKind::PracticePrompt { words });
    }
    if let Some(f) = ins.and_then(|i| i.end.as_ref()) {
        steps.push(show_frame(FramePosition::End, f));
    }

    Ok(LessonTimeline {
        title: lesson.title.clone(),
        steps: steps
            .into_iter()
            .enumerate()
            .map(|(id, kind)| TimelineStep { id, kind })
            .collect(),
        process: (!lesson.process.is_empty()).then(|| process_out(&lesson.process)),
    })
}

/// Builds the bundle for a conforming instance. Validation runs first and
/// any error diagnostic aborts generation.
pub fn generate_primer(
    instance: &IdInstance,
    spec: &IdSpecification,
    assets: Option<&Path>,
) -> Result<PrimerBundle, GenError> {
    let diagnostics = validate_instance(instance, spec, assets);
    if has_errors(&diagnostics) {
        return Err(GenError::ValidationErrorsPresent(Diagnostics(
            diagnostics.into_iter().filter(|d| d.is_error()).collect(),
        )));
    }

    let mut lessons = Vec::with_capacity(instance.lessons.len());
    for (i, lesson) in instance.lessons.iter().enumerate() {
        let taught = taught_facts_through(instance, i).expect("index in range");
        lessons.push(lesson_timeline(lesson, i, &taught)?);
    }

    let mut entries: Vec<AssetEntry> = Vec::new();
    for site in instance.asset_sites() {
        let a = site.asset;
        if !entries
            .iter()
            .any(|e| e.path == a.path() && e.media == a.media())
        {
            entries.push(AssetEntry {
                path: a.path().to_string(),
                media: a.media(),
                referenced_by: Vec::new(),
                present: assets.map(|base| base.join(a.path()).is_file()),
            });
        }
    }
    for (li, timeline) in lessons.iter().enumerate() {
        for step in &timeline.steps {
            for path in step.kind.assets() {
                for e in entries.iter_mut().filter(|e| e.path == path) {
                    e.referenced_by.push(StepRef {
                        lesson: li,
                        step: step.id,
                    });
                }
            }
        }
    }

    let manifest = Manifest {
        title: instance.title.clone(),
        lang: instance.lang.clone(),
        spec: spec.name.clone(),
        lessons: instance
            .lessons
            .iter()
            .enumerate()
            .map(|(index, l)| LessonEntry {
                index,
                title: l.title.clone(),
                file: lesson_file_name(index),
            })
            .collect(),
    };
    Ok(PrimerBundle {
        manifest,
        lessons,
        assets: entries,
    })
}

#[derive(Debug, Error)]
#[error("cannot write {}: {source}", path.display())]
pub struct BundleWriteError {
    pub path: PathBuf,
    #[source]
    pub source: io::Error,
}

/// Writes the bundle under `out_dir` and returns the files written, in
/// write order. Nothing outside `out_dir` is touched.
pub fn write_bundle(
    bundle: &PrimerBundle,
    out_dir: &Path,
) -> Result<Vec<PathBuf>, BundleWriteError> {
    let lessons_dir = out_dir.join("lessons");
    fs::create_dir_all(&lessons_dir).map_err(|source| BundleWriteError {
        path: lessons_dir.clone(),
        source,
    })?;

    let mut files: Vec<(PathBuf, String)> = Vec::new();
    files.push((
        out_dir.join("manifest.json"),
        to_canonical_string(&bundle.manifest).expect("manifest serializes"),
    ));
    for (entry, timeline) in bundle.manifest.lessons.iter().zip(&bundle.lessons) {
        files.push((
            out_dir.join(&entry.file),
            to_canonical_string(timeline).expect("timeline serializes"),
        ));
    }
    files.push((
        out_dir.join("assets.json"),
        to_canonical_string(&bundle.assets).expect("assets serialize"),
    ));

    let mut written = Vec::with_capacity(files.len());
    for (path, text) in files {
        fs::write(&path, text).map_err(|source| BundleWriteError {
            path: path.clone(),
            source,
        })?;
        written.push(path);
    }
    Ok(written)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MissingAsset {
    pub asset: AssetRef,
    pub lesson: usize,
    pub location: String,
}

/// Every asset reference whose file does not exist under `base_dir`, in
/// document order.
pub fn missing_asset_report(
    instance: &IdInstance,
    base_dir: &Path,
) -> io::Result<Vec<MissingAsset>> {
    let mut out = Vec::new();
    for site in instance.asset_sites() {
        if !base_dir.join(site.asset.path()).try_exists()? {
            out.push(MissingAsset {
                asset: site.asset.clone(),
                lesson: site.lesson,
                location: site.location,
            });
        }
    }
    Ok(out)
}
