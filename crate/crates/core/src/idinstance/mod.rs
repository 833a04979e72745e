//! Instructional-design instance documents: the lessons of a concrete
//! primer, their XML form, and conformance checks against a specification.

mod decompose;
mod validate;
mod xml;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use decompose::{decompose_word, DecomposeError};
pub use validate::validate_instance;
pub use xml::{parse_instance, serialize_instance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MediaKind {
    Audio,
    Image,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("INVALID_ASSET_PATH: `{path}` {reason}")]
pub struct AssetPathError {
    pub path: String,
    pub reason: &'static str,
}

/// A relative path to a media file. Absolute paths and `..` segments are
/// rejected at construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct AssetRef {
    path: String,
    media: MediaKind,
}

impl AssetRef {
    pub fn new(path: impl Into<String>, media: MediaKind) -> Result<Self, AssetPathError> {
        let path = path.into();
        let reason = if path.is_empty() {
            Some("is empty")
        } else if path.starts_with('/') || path.starts_with('\\') {
            Some("is absolute")
        } else if path.as_bytes().get(1) == Some(&b':') {
            Some("names a drive")
        } else if path.split(['/', '\\']).any(|seg| seg == "..") {
            Some("leaves the asset directory")
        } else {
            None
        };
        match reason {
            Some(reason) => Err(AssetPathError { path, reason }),
            None => Ok(AssetRef { path, media }),
        }
    }

    pub fn audio(path: impl Into<String>) -> Result<Self, AssetPathError> {
        AssetRef::new(path, MediaKind::Audio)
    }

    pub fn image(path: impl Into<String>) -> Result<Self, AssetPathError> {
        AssetRef::new(path, MediaKind::Image)
    }

    pub fn path(&self) -> &str {
        &self.path
    }

    pub fn media(&self) -> MediaKind {
        self.media
    }
}

impl fmt::Display for AssetRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.path)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct InstructionFrame {
    pub text: Option<String>,
    pub sound: Option<AssetRef>,
    pub image: Option<AssetRef>,
}

impl InstructionFrame {
    pub fn is_empty(&self) -> bool {
        self.text.is_none() && self.sound.is_none() && self.image.is_none()
    }
}

/// The start/middle/end frames of a lesson, fact or process unit.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Instructions {
    pub start: Option<InstructionFrame>,
    pub middle: Option<InstructionFrame>,
    pub end: Option<InstructionFrame>,
}

impl Instructions {
    pub fn frames(&self) -> [(&'static str, Option<&InstructionFrame>); 3] {
        [
            ("start", self.start.as_ref()),
            ("middle", self.middle.as_ref()),
            ("end", self.end.as_ref()),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbcdParts {
    pub audience: String,
    pub behavior: String,
    pub condition: String,
    pub degree: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Goal {
    pub text: String,
    pub sound: Option<AssetRef>,
    pub abcd: Option<AbcdParts>,
    /// Bloom level name, when goals follow the revised taxonomy.
    pub level: Option<String>,
}

impl Goal {
    pub fn new(text: impl Into<String>) -> Self {
        Goal {
            text: text.into(),
            sound: None,
            abcd: None,
            level: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnitKind {
    Play,
    Act,
    Scene,
    Instruction,
}

impl UnitKind {
    pub fn element(self) -> &'static str {
        match self {
            UnitKind::Play => "play",
            UnitKind::Act => "act",
            UnitKind::Scene => "scene",
            UnitKind::Instruction => "instruction",
        }
    }

    pub fn child(self) -> Option<UnitKind> {
        match self {
            UnitKind::Play => Some(UnitKind::Act),
            UnitKind::Act => Some(UnitKind::Scene),
            UnitKind::Scene => Some(UnitKind::Instruction),
            UnitKind::Instruction => None,
        }
    }
}

/// A play, act, scene or instruction; the kind follows from nesting depth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProcessNode {
    pub title: String,
    pub instructions: Option<Instructions>,
    pub children: Vec<ProcessNode>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Case {
    pub text: String,
    pub sound: Option<AssetRef>,
    pub image: Option<AssetRef>,
}

impl Case {
    pub fn new(text: impl Into<String>) -> Self {
        Case {
            text: text.into(),
            sound: None,
            image: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fact {
    pub text: String,
    pub sound: Option<AssetRef>,
    pub instructions: Option<Instructions>,
    pub cases: Vec<Case>,
}

impl Fact {
    pub fn new(text: impl Into<String>) -> Self {
        Fact {
            text: text.into(),
            sound: None,
            instructions: None,
            cases: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resource {
    pub text: String,
    pub resources: Vec<AssetRef>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)] // facts dominate; boxing buys nothing
pub enum ContentItem {
    Fact(Fact),
    Rule(Resource),
    Model(Resource),
    Theory(Resource),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lesson {
    pub title: String,
    pub instructions: Option<Instructions>,
    pub goals: Vec<Goal>,
    /// Plays of the PASI process tree; empty when the lesson has none.
    pub process: Vec<ProcessNode>,
    pub content: Vec<ContentItem>,
}

impl Lesson {
    pub fn new(title: impl Into<String>) -> Self {
        Lesson {
            title: title.into(),
            instructions: None,
            goals: Vec::new(),
            process: Vec::new(),
            content: Vec::new(),
        }
    }

    pub fn facts(&self) -> impl Iterator<Item = &Fact> {
        self.content.iter().filter_map(|c| match c {
            ContentItem::Fact(f) => Some(f),
            _ => None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdInstance {
    pub spec: String,
    pub lang: String,
    pub title: String,
    pub lessons: Vec<Lesson>,
}

/// One asset reference and where it occurs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssetSite<'a> {
    pub lesson: usize,
    /// Location inside the document, e.g. `lesson[0]/fact[1]/case[0]/sound`.
    pub location: String,
    pub asset: &'a AssetRef,
}

impl IdInstance {
    /// Every asset reference in document order.
    pub fn asset_sites(&self) -> Vec<AssetSite<'_>> {
        fn frames<'a>(
            out: &mut Vec<AssetSite<'a>>,
            lesson: usize,
            at: &str,
            ins: &'a Option<Instructions>,
        ) {
            let Some(ins) = ins else { return };
            for (name, frame) in ins.frames() {
                let Some(frame) = frame else { continue };
                for (kind, asset) in [("sound", &frame.sound), ("image", &frame.image)] {
                    if let Some(asset) = asset {
                        out.push(AssetSite {
                            lesson,
                            location: format!("{at}/instructions/{name}/{kind}"),
                            asset,
                        });
                    }
                }
            }
        }
        fn units<'a>(
            out: &mut Vec<AssetSite<'a>>,
            lesson: usize,
            at: &str,
            kind: UnitKind,
            nodes: &'a [ProcessNode],
        ) {
            for (i, n) in nodes.iter().enumerate() {
                let here = format!("{at}/{}[{i}]", kind.element());
                frames(out, lesson, &here, &n.instructions);
                if let Some(child) = kind.child() {
                    units(out, lesson, &here, child, &n.children);
                }
            }
        }

        let mut out = Vec::new();
        for (li, lesson) in self.lessons.iter().enumerate() {
            let at = format!("lesson[{li}]");
            frames(&mut out, li, &at, &lesson.instructions);
            for (gi, g) in lesson.goals.iter().enumerate() {
                if let Some(s) = &g.sound {
                    out.push(AssetSite {
                        lesson: li,
                        location: format!("{at}/goal[{gi}]/sound"),
                        asset: s,
                    });
                }
            }
            units(&mut out, li, &at, UnitKind::Play, &lesson.process);
            for (ci, item) in lesson.content.iter().enumerate() {
                match item {
                    ContentItem::Fact(f) => {
                        let here = format!("{at}/fact[{ci}]");
                        if let Some(s) = &f.sound {
                            out.push(AssetSite {
                                lesson: li,
                                location: format!("{here}/sound"),
                                asset: s,
                            });
                        }
                        frames(&mut out, li, &here, &f.instructions);
                        for (ki, case) in f.cases.iter().enumerate() {
                            for (kind, asset) in [("sound", &case.sound), ("image", &case.image)] {
                                if let Some(asset) = asset {
                                    out.push(AssetSite {
                                        lesson: li,
                                        location: format!("{here}/case[{ki}]/{kind}"),
                                        asset,
                                    });
                                }
                            }
                        }
                    }
                    ContentItem::Rule(r) | ContentItem::Model(r) | ContentItem::Theory(r) => {
                        for (ri, asset) in r.resources.iter().enumerate() {
                            out.push(AssetSite {
                                lesson: li,
                                location: format!("{at}/content[{ci}]/resource[{ri}]"),
                                asset,
                            });
                        }
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("lesson index {index} out of range for {count} lessons")]
pub struct LessonIndexError {
    pub index: usize,
    pub count: usize,
}

/// Fact texts taught in lessons `0..=lesson_index`, each once, in order of
/// first appearance.
pub fn taught_facts_through(
    instance: &IdInstance,
    lesson_index: usize,
) -> Result<Vec<String>, LessonIndexError> {
    if lesson_index >= instance.lessons.len() {
        return Err(LessonIndexError {
            index: lesson_index,
            count: instance.lessons.len(),
        });
    }
    let mut out: Vec<String> = Vec::new();
    for lesson in &instance.lessons[..=lesson_index] {
        for f in lesson.facts() {
            if !out.contains(&f.text) {
                out.push(f.text.clone());
            }
        }
    }
    Ok(out)
}

/// The Hindi sample primer: the lesson "मन का काम" teaching न and म.
pub const HINDI_SAMPLE: &str = include_str!("../../data/hindi_primer.xml");

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn asset_paths() {
        assert!(AssetRef::audio("sounds/hsounds/na.wav").is_ok());
        assert!(AssetRef::image("./namaskar.png").is_ok());
        for bad in [
            "",
            "/etc/passwd",
            "\\share",
            "C:/x.png",
            "../up.wav",
            "a/../../b.wav",
            "a\\..\\b",
        ] {
            assert!(AssetRef::audio(bad).is_err(), "{bad}");
        }
    }

    fn instance(lessons: Vec<Vec<&str>>) -> IdInstance {
        IdInstance {
            spec: "s".into(),
            lang: "hi".into(),
            title: String::new(),
            lessons: lessons
                .into_iter()
                .map(|facts| {
                    let mut l = Lesson::new("l");
                    l.content = facts
                        .into_iter()
                        .map(|f| ContentItem::Fact(Fact::new(f)))
                        .collect();
                    l
                })
                .collect(),
        }
    }

    #[test]
    fn taught_facts_union() {
        let i = instance(vec![vec!["न", "म"], vec!["र", "न"], vec![]]);
        assert_eq!(taught_facts_through(&i, 0).unwrap(), vec!["न", "म"]);
        assert_eq!(taught_facts_through(&i, 1).unwrap(), vec!["न", "म", "र"]);
        assert_eq!(taught_facts_through(&i, 2).unwrap(), vec!["न", "म", "र"]);
        assert_eq!(
            taught_facts_through(&i, 3),
            Err(LessonIndexError { index: 3, count: 3 })
        );
        let empty = instance(vec![vec![]]);
        assert!(taught_facts_through(&empty, 0).unwrap().is_empty());
    }
}
