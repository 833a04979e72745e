//! XML reading and writing for instance documents.
//!
//! ```xml
//! <primer spec="IdSpecification2" lang="hi">
//!   <lesson>
//!     <title>मन का काम</title>
//!     <goals><goal><text>…</text></goal></goals>
//!     <fact>
//!       <text>न</text>
//!       <cases><case><text>नम</text></case></cases>
//!     </fact>
//!   </lesson>
//! </primer>
//! ```
//!
//! Only the root carries attributes. Text values are trimmed;
//! whitespace-only text between elements and comments are ignored.

use std::fmt::Write;

use roxmltree::{Document, Node, NodeType};

use super::*;
use crate::diag::{Diagnostic, Position};

const VOCABULARY: &[&str] = &[
    "primer",
    "lesson",
    "title",
    "instructions",
    "start",
    "middle",
    "end",
    "text",
    "sound",
    "image",
    "goals",
    "goal",
    "fact",
    "cases",
    "case",
    "rule",
    "model",
    "theory",
    "play",
    "act",
    "scene",
    "instruction",
    "audience",
    "behavior",
    "condition",
    "degree",
    "level",
];

struct Reader<'a, 'input> {
    doc: &'a Document<'input>,
    errors: Vec<Diagnostic>,
}

/// Single-occurrence child slots collected while scanning an element.
struct Slots<'a, 'input> {
    found: Vec<(&'static str, Node<'a, 'input>)>,
}

impl<'a, 'input> Slots<'a, 'input> {
    fn get(&self, name: &str) -> Option<Node<'a, 'input>> {
        self.found
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, node)| *node)
    }
}

impl<'a, 'input: 'a> Reader<'a, 'input> {
    fn pos(&self, node: Node) -> Position {
        let p = self.doc.text_pos_at(node.range().start);
        Position {
            line: p.row,
            column: p.col,
        }
    }

    fn err(&mut self, code: &'static str, node: Node, path: &str, msg: String) {
        let pos = self.pos(node);
        self.errors.push(Diagnostic::error(code, path, msg).at(pos));
    }

    fn no_attributes(&mut self, node: Node, path: &str) {
        if let Some(a) = node.attributes().next() {
            self.err(
                "UNKNOWN_ATTRIBUTE",
                node,
                path,
                format!(
                    "<{}> takes no attributes, found `{}`",
                    node.tag_name().name(),
                    a.name()
                ),
            );
        }
    }

    /// Element children of `node`, reporting stray text and elements that
    /// are not in `allowed`.
    fn children(
        &mut self,
        node: Node<'a, 'input>,
        path: &str,
        allowed: &[&str],
    ) -> Vec<Node<'a, 'input>> {
        let mut out = Vec::new();
        for child in node.children() {
            match child.node_type() {
                NodeType::Element => {
                    let name = child.tag_name().name();
                    if !VOCABULARY.contains(&name) {
                        self.err(
                            "UNKNOWN_ELEMENT",
                            child,
                            path,
                            format!("unknown element <{name}>"),
                        );
                    } else if !allowed.contains(&name) {
                        self.err(
                            "MISPLACED_ELEMENT",
                            child,
                            path,
                            format!(
                                "<{name}> is not allowed inside <{}>",
                                node.tag_name().name()
                            ),
                        );
                    } else {
                        self.no_attributes(child, path);
                        out.push(child);
                    }
                }
                NodeType::Text if !child.text().unwrap_or("").trim().is_empty() => {
                    self.err(
                        "UNEXPECTED_TEXT",
                        child,
                        path,
                        format!("<{}> cannot contain text directly", node.tag_name().name()),
                    );
                }
                _ => {}
            }
        }
        out
    }

    /// Splits children into single-occurrence slots and repeated nodes.
    fn slots(
        &mut self,
        node: Node<'a, 'input>,
        path: &str,
        single: &[&'static str],
        repeated: &[&str],
    ) -> (Slots<'a, 'input>, Vec<Node<'a, 'input>>) {
        let allowed: Vec<&str> = single.iter().chain(repeated).copied().collect();
        let mut slots = Slots { found: Vec::new() };
        let mut many = Vec::new();
        for child in self.children(node, path, &allowed) {
            let name = child.tag_name().name();
            if let Some(&slot) = single.iter().find(|s| **s == name) {
                if slots.get(slot).is_some() {
                    self.err(
                        "DUPLICATE_ELEMENT",
                        child,
                        path,
                        format!("<{name}> may appear only once here"),
                    );
                } else {
                    slots.found.push((slot, child));
                }
            } else {
                many.push(child);
            }
        }
        (slots, many)
    }

    fn leaf_text(&mut self, node: Node, path: &str) -> String {
        let mut s = String::new();
        for child in node.children() {
            match child.node_type() {
                NodeType::Text => s.push_str(child.text().unwrap_or("")),
                NodeType::Element => {
                    let name = child.tag_name().name();
                    let code = if VOCABULARY.contains(&name) {
                        "MISPLACED_ELEMENT"
                    } else {
                        "UNKNOWN_ELEMENT"
                    };
                    self.err(
                        code,
                        child,
                        path,
                        format!(
                            "<{name}> is not allowed inside <{}>",
                            node.tag_name().name()
                        ),
                    );
                }
                _ => {}
            }
        }
        s.trim().to_string()
    }

    fn required_text(
        &mut self,
        slots: &Slots<'a, 'input>,
        name: &str,
        node: Node,
        path: &str,
    ) -> String {
        match slots.get(name) {
            Some(n) => self.leaf_text(n, path),
            None => {
                self.err(
                    "MISSING_CHILD",
                    node,
                    path,
                    format!("<{}> requires a <{name}> child", node.tag_name().name()),
                );
                String::new()
            }
        }
    }

    fn optional_text(
        &mut self,
        slots: &Slots<'a, 'input>,
        name: &str,
        path: &str,
    ) -> Option<String> {
        slots.get(name).map(|n| self.leaf_text(n, path))
    }

    fn asset_node(&mut self, node: Node, media: MediaKind, path: &str) -> Option<AssetRef> {
        let text = self.leaf_text(node, path);
        if text.is_empty() {
            return None;
        }
        match AssetRef::new(text, media) {
            Ok(a) => Some(a),
            Err(e) => {
                self.err("INVALID_ASSET_PATH", node, path, e.to_string());
                None
            }
        }
    }

    fn asset(&mut self, slots: &Slots<'a, 'input>, name: &str, path: &str) -> Option<AssetRef> {
        let media = if name == "image" {
            MediaKind::Image
        } else {
            MediaKind::Audio
        };
        slots
            .get(name)
            .and_then(|n| self.asset_node(n, media, path))
    }

    fn frame(&mut self, node: Node<'a, 'input>, path: &str) -> InstructionFrame {
        let (s, _) = self.slots(node, path, &["text", "sound", "image"], &[]);
        InstructionFrame {
            text: self.optional_text(&s, "text", path),
            sound: self.asset(&s, "sound", path),
            image: self.asset(&s, "image", path),
        }
    }

    fn instructions(&mut self, node: Node<'a, 'input>, path: &str) -> Instructions {
        let path = format!("{path}/instructions");
        let (s, _) = self.slots(node, &path, &["start", "middle", "end"], &[]);
        let mut frame = |name: &str| {
            s.get(name)
                .map(|n| self.frame(n, &format!("{path}/{name}")))
        };
        Instructions {
            start: frame("start"),
            middle: frame("middle"),
            end: frame("end"),
        }
    }

    fn goal(&mut self, node: Node<'a, 'input>, path: &str) -> Goal {
        let (s, _) = self.slots(
            node,
            path,
            &[
                "text",
                "sound",
                "audience",
                "behavior",
                "condition",
                "degree",
                "level",
            ],
            &[],
        );
        let text = self.required_text(&s, "text", node, path);
        let sound = self.asset(&s, "sound", path);
        let parts = ["audience", "behavior", "condition", "degree"];
        let present = parts.iter().filter(|p| s.get(p).is_some()).count();
        let abcd = if present == 0 {
            None
        } else if present < parts.len() {
            let missing: Vec<&str> = parts
                .iter()
                .filter(|p| s.get(p).is_none())
                .copied()
                .collect();
            self.err(
                "MISSING_CHILD",
                node,
                path,
                format!("ABCD goal is missing <{}>", missing.join(">, <")),
            );
            None
        } else {
            let mut get = |p: &str| self.leaf_text(s.get(p).unwrap(), path);
            Some(AbcdParts {
                audience: get("audience"),
                behavior: get("behavior"),
                condition: get("condition"),
                degree: get("degree"),
            })
        };
        let level = self.optional_text(&s, "level", path);
        Goal {
            text,
            sound,
            abcd,
            level,
        }
    }

    fn unit(&mut self, node: Node<'a, 'input>, kind: UnitKind, path: &str) -> ProcessNode {
        let child_kind = kind.child();
        let repeated: Vec<&str> = child_kind.map(|c| c.element()).into_iter().collect();
        let (s, many) = self.slots(node, path, &["title", "instructions"], &repeated);
        let title = self.required_text(&s, "title", node, path);
        let instructions = s.get("instructions").map(|n| self.instructions(n, path));
        let children = match child_kind {
            Some(ck) => many
                .into_iter()
                .enumerate()
                .map(|(i, n)| self.unit(n, ck, &format!("{path}/{}[{i}]", ck.element())))
                .collect(),
            None => Vec::new(),
        };
        ProcessNode {
            title,
            instructions,
            children,
        }
    }

    fn case(&mut self, node: Node<'a, 'input>, path: &str) -> Case {
        let (s, _) = self.slots(node, path, &["text", "sound", "image"], &[]);
        Case {
            text: self.required_text(&s, "text", node, path),
            sound: self.asset(&s, "sound", path),
            image: self.asset(&s, "image", path),
        }
    }

    fn fact(&mut self, node: Node<'a, 'input>, path: &str) -> Fact {
        let (s, many) = self.slots(node, path, &["text", "sound", "instructions"], &["cases"]);
        let text = self.required_text(&s, "text", node, path);
        let sound = self.asset(&s, "sound", path);
        let instructions = s.get("instructions").map(|n| self.instructions(n, path));
        let mut cases = Vec::new();
        for group in many {
            for c in self.children(group, path, &["case"]) {
                let at = format!("{path}/case[{}]", cases.len());
                cases.push(self.case(c, &at));
            }
        }
        Fact {
            text,
            sound,
            instructions,
            cases,
        }
    }

    fn resource(&mut self, node: Node<'a, 'input>, path: &str) -> Resource {
        let (s, many) = self.slots(node, path, &["text"], &["sound", "image"]);
        let text = self.required_text(&s, "text", node, path);
        let resources = many
            .into_iter()
            .filter_map(|n| {
                let media = if n.tag_name().name() == "image" {
                    MediaKind::Image
                } else {
                    MediaKind::Audio
                };
                self.asset_node(n, media, path)
            })
            .collect();
        Resource { text, resources }
    }

    fn lesson(&mut self, node: Node<'a, 'input>, path: &str) -> Lesson {
        let (s, many) = self.slots(
            node,
            path,
            &["title", "instructions"],
            &["goals", "play", "fact", "rule", "model", "theory"],
        );
        let mut lesson = Lesson::new(self.required_text(&s, "title", node, path));
        lesson.instructions = s.get("instructions").map(|n| self.instructions(n, path));
        for child in many {
            let idx = lesson.content.len();
            match child.tag_name().name() {
                "goals" => {
                    for g in self.children(child, path, &["goal"]) {
                        let at = format!("{path}/goal[{}]", lesson.goals.len());
                        lesson.goals.push(self.goal(g, &at));
                    }
                }
                "play" => {
                    let at = format!("{path}/play[{}]", lesson.process.len());
                    lesson.process.push(self.unit(child, UnitKind::Play, &at));
                }
                "fact" => {
                    let f = self.fact(child, &format!("{path}/fact[{idx}]"));
                    lesson.content.push(ContentItem::Fact(f));
                }
                name => {
                    let r = self.resource(child, &format!("{path}/{name}[{idx}]"));
                    lesson.content.push(match name {
                        "rule" => ContentItem::Rule(r),
                        "model" => ContentItem::Model(r),
                        _ => ContentItem::Theory(r),
                    });
                }
            }
        }
        lesson
    }

    fn primer(&mut self, root: Node<'a, 'input>) -> IdInstance {
        let mut spec = None;
        let mut lang = None;
        for a in root.attributes() {
            match a.name() {
                "spec" => spec = Some(a.value().to_string()),
                "lang" => lang = Some(a.value().to_string()),
                other => self.err(
                    "UNKNOWN_ATTRIBUTE",
                    root,
                    "",
                    format!("<primer> has no attribute `{other}`"),
                ),
            }
        }
        for (name, value) in [("spec", &spec), ("lang", &lang)] {
            if value.is_none() {
                self.err(
                    "MISSING_ATTRIBUTE",
                    root,
                    "",
                    format!("<primer> requires a `{name}` attribute"),
                );
            }
        }
        let (s, many) = self.slots(root, "", &["title"], &["lesson"]);
        let title = self.optional_text(&s, "title", "").unwrap_or_default();
        let lessons = many
            .into_iter()
            .enumerate()
            .map(|(i, n)| self.lesson(n, &format!("lesson[{i}]")))
            .collect();
        IdInstance {
            spec: spec.unwrap_or_default(),
            lang: lang.unwrap_or_default(),
            title,
            lessons,
        }
    }
}

/// Parses an instance document. Every structural problem found is reported.
pub fn parse_instance(text: &str) -> Result<IdInstance, Vec<Diagnostic>> {
    let doc = Document::parse(text).map_err(|e| {
        let p = e.pos();
        vec![
            Diagnostic::error("XML_MALFORMED", "", e.to_string()).at(Position {
                line: p.row,
                column: p.col,
            }),
        ]
    })?;
    let root = doc.root_element();
    let mut reader = Reader {
        doc: &doc,
        errors: Vec::new(),
    };
    let name = root.tag_name().name();
    if name != "primer" {
        let code = if VOCABULARY.contains(&name) {
            "MISPLACED_ELEMENT"
        } else {
            "UNKNOWN_ELEMENT"
        };
        reader.err(
            code,
            root,
            "",
            format!("document root must be <primer>, found <{name}>"),
        );
        return Err(reader.errors);
    }
    let instance = reader.primer(root);
    if reader.errors.is_empty() {
        Ok(instance)
    } else {
        Err(reader.errors)
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

struct Writer {
    out: String,
    depth: usize,
}

impl Writer {
    fn indent(&mut self) {
        for _ in 0..self.depth {
            self.out.push_str("  ");
        }
    }

    fn leaf(&mut self, name: &str, value: &str) {
        self.indent();
        let _ = writeln!(self.out, "<{name}>{}</{name}>", escape(value));
    }

    fn open(&mut self, name: &str) {
        self.indent();
        let _ = writeln!(self.out, "<{name}>");
        self.depth += 1;
    }

    fn close(&mut self, name: &str) {
        self.depth -= 1;
        self.indent();
        let _ = writeln!(self.out, "</{name}>");
    }

    fn empty(&mut self, name: &str) {
        self.indent();
        let _ = writeln!(self.out, "<{name}/>");
    }

    fn asset(&mut self, name: &str, asset: &Option<AssetRef>) {
        if let Some(a) = asset {
            self.leaf(name, a.path());
        }
    }

    fn instructions(&mut self, ins: &Option<Instructions>) {
        let Some(ins) = ins else { return };
        if ins.frames().iter().all(|(_, f)| f.is_none()) {
            self.empty("instructions");
            return;
        }
        self.open("instructions");
        for (name, frame) in ins.frames() {
            let Some(frame) = frame else { continue };
            if frame.is_empty() {
                self.empty(name);
                continue;
            }
            self.open(name);
            if let Some(t) = &frame.text {
                self.leaf("text", t);
            }
            self.asset("sound", &frame.sound);
            self.asset("image", &frame.image);
            self.close(name);
        }
        self.close("instructions");
    }

    fn unit(&mut self, node: &ProcessNode, kind: UnitKind) {
        self.open(kind.element());
        self.leaf("title", &node.title);
        self.instructions(&node.instructions);
        if let Some(child) = kind.child() {
            for c in &node.children {
                self.unit(c, child);
            }
        }
        self.close(kind.element());
    }

    fn lesson(&mut self, lesson: &Lesson) {
        self.open("lesson");
        self.leaf("title", &lesson.title);
        self.instructions(&lesson.instructions);
        if !lesson.goals.is_empty() {
            self.open("goals");
            for g in &lesson.goals {
                self.open("goal");
                self.leaf("text", &g.text);
                self.asset("sound", &g.sound);
                if let Some(p) = &g.abcd {
                    self.leaf("audience", &p.audience);
                    self.leaf("behavior", &p.behavior);
                    self.leaf("condition", &p.condition);
                    self.leaf("degree", &p.degree);
                }
                if let Some(level) = &g.level {
                    self.leaf("level", level);
                }
                self.close("goal");
            }
            self.close("goals");
        }
        for play in &lesson.process {
            self.unit(play, UnitKind::Play);
        }
        for item in &lesson.content {
            match item {
                ContentItem::Fact(f) => {
                    self.open("fact");
                    self.leaf("text", &f.text);
                    self.asset("sound", &f.sound);
                    self.instructions(&f.instructions);
                    if !f.cases.is_empty() {
                        self.open("cases");
                        for c in &f.cases {
                            self.open("case");
                            self.leaf("text", &c.text);
                            self.asset("sound", &c.sound);
                            self.asset("image", &c.image);
                            self.close("case");
                        }
                        self.close("cases");
                    }
                    self.close("fact");
                }
                ContentItem::Rule(r) | ContentItem::Model(r) | ContentItem::Theory(r) => {
                    let name = match item {
                        ContentItem::Rule(_) => "rule",
                        ContentItem::Model(_) => "model",
                        _ => "theory",
                    };
                    self.open(name);
                    self.leaf("text", &r.text);
                    for a in &r.resources {
                        let tag = match a.media() {
                            MediaKind::Audio => "sound",
                            MediaKind::Image => "image",
                        };
                        self.leaf(tag, a.path());
                    }
                    self.close(name);
                }
            }
        }
        self.close("lesson");
    }
}

/// Canonical XML: UTF-8, two-space indentation, one element per line.
pub fn serialize_instance(instance: &IdInstance) -> String {
    let mut w = Writer {
        out: String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"),
        depth: 0,
    };
    let _ = writeln!(
        w.out,
        "<primer spec=\"{}\" lang=\"{}\">",
        escape(&instance.spec),
        escape(&instance.lang)
    );
    w.depth = 1;
    if !instance.title.is_empty() {
        w.leaf("title", &instance.title);
    }
    for lesson in &instance.lessons {
        w.lesson(lesson);
    }
    w.out.push_str("</primer>\n");
    w.out
}
