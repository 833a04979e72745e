use std::path::Path;

use super::*;
use crate::diag::Diagnostic;
use crate::idspec::{Bounds, Catalog, ContentScheme, GoalTechnique, IdSpecification};

/// Checks `instance` against `spec`. An empty result, or one holding only
/// warnings, means the instance may be handed to the generator.
///
/// When `assets` is given, every referenced file is probed relative to it
/// and a missing file produces an `ASSET_MISSING` warning.
pub fn validate_instance(
    instance: &IdInstance,
    spec: &IdSpecification,
    assets: Option<&Path>,
) -> Vec<Diagnostic> {
    let catalog = Catalog::standard();
    let mut out = Vec::new();
    if instance.spec != spec.name {
        out.push(Diagnostic::warning(
            "SPEC_MISMATCH",
            "",
            format!(
                "instance names spec `{}` but is checked against `{}`",
                instance.spec, spec.name
            ),
        ));
    }
    if instance.lessons.is_empty() {
        out.push(Diagnostic::error(
            "NO_LESSONS",
            "",
            "an instance needs at least one lesson",
        ));
    }

    let mut taught: Vec<String> = Vec::new();
    for (li, lesson) in instance.lessons.iter().enumerate() {
        let at = format!("lesson[{li}]");
        for f in lesson.facts() {
            if !taught.contains(&f.text) {
                taught.push(f.text.clone());
            }
        }
        if lesson.title.trim().is_empty() {
            out.push(Diagnostic::error(
                "EMPTY_TITLE",
                &at,
                "lesson title is empty",
            ));
        }
        frames(&mut out, &at, &lesson.instructions);
        goals(&mut out, &at, lesson, spec, &catalog);
        process(&mut out, &at, lesson, spec);

        if spec.content_scheme != ContentScheme::FCRMT && !lesson.content.is_empty() {
            out.push(Diagnostic::warning(
                "CONTENT_SCHEME",
                &at,
                format!(
                    "facts, cases, rules, models and theories are outside the {:?} content scheme",
                    spec.content_scheme
                ),
            ));
        }
        for (ci, item) in lesson.content.iter().enumerate() {
            match item {
                ContentItem::Fact(f) => {
                    let here = format!("{at}/fact[{ci}]");
                    if f.text.is_empty() {
                        out.push(Diagnostic::error("EMPTY_TEXT", &here, "fact text is empty"));
                    }
                    frames(&mut out, &here, &f.instructions);
                    for (ki, case) in f.cases.iter().enumerate() {
                        let case_at = format!("{here}/case[{ki}]");
                        if case.text.is_empty() {
                            out.push(Diagnostic::error(
                                "EMPTY_TEXT",
                                &case_at,
                                "case text is empty",
                            ));
                        } else if decompose_word(&case.text, &taught).is_err() {
                            out.push(Diagnostic::error(
                                "KNOWN_TO_UNKNOWN",
                                &case_at,
                                format!(
                                    "word `{}` in lesson {li} (\"{}\") is not built from taught facts [{}]",
                                    case.text,
                                    lesson.title,
                                    taught.join(", ")
                                ),
                            ));
                        }
                    }
                }
                ContentItem::Rule(r) | ContentItem::Model(r) | ContentItem::Theory(r) => {
                    if r.text.is_empty() {
                        out.push(Diagnostic::error(
                            "EMPTY_TEXT",
                            format!("{at}/content[{ci}]"),
                            "text is empty",
                        ));
                    }
                }
            }
        }
    }

    if let Some(base) = assets {
        for site in instance.asset_sites() {
            if !base.join(site.asset.path()).is_file() {
                out.push(Diagnostic::warning(
                    "ASSET_MISSING",
                    &site.location,
                    format!("`{}` not found under {}", site.asset.path(), base.display()),
                ));
            }
        }
    }
    out
}

fn frames(out: &mut Vec<Diagnostic>, at: &str, ins: &Option<Instructions>) {
    let Some(ins) = ins else { return };
    for (name, frame) in ins.frames() {
        if frame.is_some_and(InstructionFrame::is_empty) {
            out.push(Diagnostic::error(
                "EMPTY_FRAME",
                format!("{at}/instructions/{name}"),
                "a frame needs text, a sound or an image",
            ));
        }
    }
}

fn goals(
    out: &mut Vec<Diagnostic>,
    at: &str,
    lesson: &Lesson,
    spec: &IdSpecification,
    catalog: &Catalog,
) {
    if lesson.goals.is_empty() {
        out.push(Diagnostic::error(
            "MISSING_GOALS",
            at,
            "lesson has no goals",
        ));
    }
    for (gi, g) in lesson.goals.iter().enumerate() {
        let here = format!("{at}/goal[{gi}]");
        if g.text.trim().is_empty() {
            out.push(Diagnostic::error("EMPTY_TEXT", &here, "goal text is empty"));
        }
        let problem = match spec.goal_technique {
            GoalTechnique::ABCD => match &g.abcd {
                None => {
                    Some("ABCD goals need audience, behavior, condition and degree".to_string())
                }
                Some(p) => {
                    let blank: Vec<&str> = [
                        ("audience", &p.audience),
                        ("behavior", &p.behavior),
                        ("condition", &p.condition),
                        ("degree", &p.degree),
                    ]
                    .iter()
                    .filter(|(_, v)| v.trim().is_empty())
                    .map(|(k, _)| *k)
                    .collect();
                    (!blank.is_empty())
                        .then(|| format!("ABCD parts are empty: {}", blank.join(", ")))
                }
            },
            GoalTechnique::BloomRevised => match &g.level {
                None => Some("Bloom goals need a level".to_string()),
                Some(l) if !catalog.bloom_levels.contains(l) => Some(format!(
                    "`{l}` is not a Bloom level; expected one of {}",
                    catalog.bloom_levels.join(", ")
                )),
                Some(_) => None,
            },
            GoalTechnique::Plain3Rs => None,
        };
        if let Some(msg) = problem {
            out.push(Diagnostic::error("GOAL_TECHNIQUE_FIELDS", &here, msg));
        }
    }
}

fn process(out: &mut Vec<Diagnostic>, at: &str, lesson: &Lesson, spec: &IdSpecification) {
    if lesson.process.is_empty() {
        return;
    }
    if !spec.process_model.is_pasi() {
        out.push(Diagnostic::warning(
            "PROCESS_IGNORED",
            at,
            format!(
                "plays are not part of the {:?} process model",
                spec.process_model
            ),
        ));
        return;
    }
    let b = spec.process_bounds;
    count(out, at, "play", lesson.process.len(), b.play);
    walk(out, at, UnitKind::Play, &lesson.process, spec);
}

fn walk(
    out: &mut Vec<Diagnostic>,
    at: &str,
    kind: UnitKind,
    nodes: &[ProcessNode],
    spec: &IdSpecification,
) {
    let b = spec.process_bounds;
    for (i, n) in nodes.iter().enumerate() {
        let here = format!("{at}/{}[{i}]", kind.element());
        if n.title.trim().is_empty() {
            out.push(Diagnostic::error(
                "EMPTY_TITLE",
                &here,
                format!("{} title is empty", kind.element()),
            ));
        }
        frames(out, &here, &n.instructions);
        if let Some(child) = kind.child() {
            let bounds = match child {
                UnitKind::Play => b.play,
                UnitKind::Act => b.act,
                UnitKind::Scene => b.scene,
                UnitKind::Instruction => b.instruction,
            };
            count(out, &here, child.element(), n.children.len(), bounds);
            walk(out, &here, child, &n.children, spec);
        }
    }
}

fn count(out: &mut Vec<Diagnostic>, at: &str, what: &str, n: usize, bounds: Bounds) {
    if !bounds.contains(n) {
        out.push(Diagnostic::error(
            "PROCESS_BOUNDS",
            at,
            format!("{n} {what} units, expected {}..{}", bounds.min, bounds.max),
        ));
    }
}
