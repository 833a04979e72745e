//! Lexer and recursive-descent parser for the feature-model language.
//!
//! ```text
//! featuremodel Primer
//! root Design {
//!     mandatory Goals { alternative {Bloom, ABCD} }
//!     optional Context
//!     mandatory Play [1..25]
//!     attribute level: int [1..3] required
//!     constraint Context requires Bloom
//! }
//! ```
//!
//! `#` starts a comment that runs to end of line. `;` may separate block
//! items and is otherwise ignored. `clone X [a..b]` is shorthand for a
//! feature whose presence follows its bounds (mandatory when `a >= 1`).

use std::collections::HashMap;

use super::model::*;
use crate::diag::{Diagnostic, Position};

const FEATURE_KEYWORDS: &[&str] = &[
    "featuremodel",
    "root",
    "mandatory",
    "optional",
    "clone",
    "alternative",
    "or",
    "attribute",
    "constraint",
];

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(i64),
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    DotDot,
    Comma,
    Colon,
    Semi,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(i) => format!("`{i}`"),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::DotDot => "`..`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, Position)>, Diagnostic> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let (mut line, mut column) = (1u32, 1u32);

    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else if c.is_some() {
                column += 1;
            }
            c
        }};
    }

    while let Some(&c) = chars.peek() {
        let pos = Position { line, column };
        match c {
            c if c.is_whitespace() => {
                bump!();
            }
            '#' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    bump!();
                }
            }
            '{' | '}' | '[' | ']' | ',' | ':' | ';' => {
                bump!();
                let t = match c {
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    '[' => Tok::LBracket,
                    ']' => Tok::RBracket,
                    ',' => Tok::Comma,
                    ':' => Tok::Colon,
                    _ => Tok::Semi,
                };
                out.push((t, pos));
            }
            '.' => {
                bump!();
                if chars.peek() == Some(&'.') {
                    bump!();
                    out.push((Tok::DotDot, pos));
                } else {
                    return Err(Diagnostic::error("SYNTAX", "", "expected `..`").at(pos));
                }
            }
            c if c == '-' || c.is_ascii_digit() => {
                let mut s = String::new();
                s.push(bump!().unwrap());
                while let Some(&d) = chars.peek() {
                    if !d.is_ascii_digit() {
                        break;
                    }
                    s.push(d);
                    bump!();
                }
                let v = s.parse::<i64>().map_err(|_| {
                    Diagnostic::error("SYNTAX", "", format!("invalid integer `{s}`")).at(pos)
                })?;
                out.push((Tok::Int(v), pos));
            }
            c if c.is_alphabetic() => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if !(d.is_alphanumeric() || d == '_') {
                        break;
                    }
                    s.push(d);
                    bump!();
                }
                out.push((Tok::Ident(s), pos));
            }
            other => {
                return Err(Diagnostic::error(
                    "SYNTAX",
                    "",
                    format!("unexpected character `{other}`"),
                )
                .at(pos));
            }
        }
    }
    out.push((Tok::Eof, Position { line, column }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Position)>,
    at: usize,
    /// First declaration site of every feature name.
    declared: HashMap<String, Position>,
    constraints: Vec<(CrossTreeConstraint, Position)>,
    errors: Vec<Diagnostic>,
}

type PResult<T> = Result<T, Diagnostic>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Position {
        self.toks[self.at].1
    }

    fn next(&mut self) -> (Tok, Position) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn unexpected(&self, expected: &str) -> Diagnostic {
        Diagnostic::error(
            "SYNTAX",
            "",
            format!("expected {expected}, found {}", self.peek().describe()),
        )
        .at(self.pos())
    }

    fn expect(&mut self, tok: Tok) -> PResult<Position> {
        if *self.peek() == tok {
            Ok(self.next().1)
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn ident(&mut self) -> PResult<(String, Position)> {
        match self.next() {
            (Tok::Ident(s), p) => Ok((s, p)),
            (t, p) => Err(Diagnostic::error(
                "SYNTAX",
                "",
                format!("expected identifier, found {}", t.describe()),
            )
            .at(p)),
        }
    }

    fn feature_name(&mut self) -> PResult<(String, Position)> {
        let (name, pos) = self.ident()?;
        if FEATURE_KEYWORDS.contains(&name.as_str()) {
            return Err(Diagnostic::error(
                "RESERVED_WORD",
                "",
                format!("`{name}` is a keyword and cannot name a feature"),
            )
            .at(pos));
        }
        Ok((name, pos))
    }

    fn int(&mut self) -> PResult<(i64, Position)> {
        match self.next() {
            (Tok::Int(v), p) => Ok((v, p)),
            (t, p) => Err(Diagnostic::error(
                "SYNTAX",
                "",
                format!("expected integer, found {}", t.describe()),
            )
            .at(p)),
        }
    }

    fn declare(&mut self, name: &str, pos: Position, path: &str) {
        if let Some(first) = self.declared.get(name) {
            self.errors.push(
                Diagnostic::error(
                    "DUPLICATE_FEATURE",
                    path,
                    format!("feature `{name}` already declared at {first}"),
                )
                .at(pos),
            );
        } else {
            self.declared.insert(name.to_string(), pos);
        }
    }

    fn cardinality(&mut self, path: &str) -> PResult<Cardinality> {
        self.expect(Tok::LBracket)?;
        let (min, min_pos) = self.int()?;
        self.expect(Tok::DotDot)?;
        let (max, _) = self.int()?;
        self.expect(Tok::RBracket)?;
        if min < 0 || max < 0 || min > u32::MAX as i64 || max > u32::MAX as i64 {
            self.errors.push(
                Diagnostic::error(
                    "CARD_RANGE",
                    path,
                    format!("bounds [{min}..{max}] out of range"),
                )
                .at(min_pos),
            );
            return Ok(Cardinality::ONE);
        }
        if min > max {
            self.errors.push(
                Diagnostic::error(
                    "MIN_GT_MAX",
                    path,
                    format!("lower bound {min} exceeds upper bound {max}"),
                )
                .at(min_pos),
            );
        } else if max == 0 {
            self.errors.push(
                Diagnostic::error("CARD_MAX_ZERO", path, "upper bound must be at least 1")
                    .at(min_pos),
            );
        }
        Ok(Cardinality::new(min as u32, max as u32))
    }

    /// Parses `("mandatory"|"optional"|"clone"|"root") IDENT card? block?`,
    /// with the keyword already consumed.
    fn feature_rest(&mut self, keyword: &str, parent_path: &str) -> PResult<(Feature, Position)> {
        let (name, pos) = self.feature_name()?;
        let path = if parent_path.is_empty() {
            name.clone()
        } else {
            format!("{parent_path}/{name}")
        };
        let cardinality = if *self.peek() == Tok::LBracket {
            self.cardinality(&path)?
        } else if keyword == "clone" {
            return Err(self.unexpected("clone bounds `[min..max]`"));
        } else {
            Cardinality::ONE
        };
        let variability = match keyword {
            "optional" => Variability::Optional,
            "clone" if cardinality.min == 0 => Variability::Optional,
            _ => Variability::Mandatory,
        };
        let mut feature = Feature::new(name, variability);
        feature.cardinality = cardinality;
        if *self.peek() == Tok::LBrace {
            self.block(&mut feature, &path)?;
        }
        Ok((feature, pos))
    }

    fn block(&mut self, feature: &mut Feature, path: &str) -> PResult<()> {
        self.expect(Tok::LBrace)?;
        // group children awaiting elaboration: name -> (group, child, elaborated)
        let mut pending: HashMap<String, (usize, usize, bool)> = HashMap::new();
        loop {
            let kw = match self.peek().clone() {
                Tok::RBrace => {
                    self.next();
                    return Ok(());
                }
                Tok::Semi => {
                    self.next();
                    continue;
                }
                Tok::Ident(s) => s,
                _ => return Err(self.unexpected("a block item or `}`")),
            };
            match kw.as_str() {
                "mandatory" | "optional" | "clone" => {
                    self.next();
                    let (child, pos) = self.feature_rest(&kw, path)?;
                    if let Some(slot) = pending.get_mut(&child.name) {
                        let child_path = format!("{path}/{}", child.name);
                        if slot.2 {
                            self.errors.push(
                                Diagnostic::error(
                                    "DUPLICATE_FEATURE",
                                    child_path,
                                    format!("group member `{}` elaborated twice", child.name),
                                )
                                .at(pos),
                            );
                            continue;
                        }
                        slot.2 = true;
                        if kw == "mandatory" {
                            self.errors.push(
                                Diagnostic::error(
                                    "GROUP_CHILD_MANDATORY",
                                    child_path,
                                    format!(
                                        "`{}` belongs to an alternative/or group and cannot be mandatory",
                                        child.name
                                    ),
                                )
                                .at(pos),
                            );
                        }
                        let (gi, ci) = (slot.0, slot.1);
                        let target = &mut feature.groups[gi].children[ci];
                        target.cardinality = child.cardinality;
                        target.groups = child.groups;
                        target.attributes = child.attributes;
                    } else {
                        self.declare(&child.name, pos, &format!("{path}/{}", child.name));
                        match feature.groups.iter_mut().find(|g| g.kind == GroupKind::And) {
                            Some(g) => g.children.push(child),
                            None => feature.groups.push(Group {
                                kind: GroupKind::And,
                                children: vec![child],
                            }),
                        }
                    }
                }
                "alternative" | "or" => {
                    self.next();
                    let kind = if kw == "or" {
                        GroupKind::Or
                    } else {
                        GroupKind::Alternative
                    };
                    self.expect(Tok::LBrace)?;
                    let gi = feature.groups.len();
                    let mut children = Vec::new();
                    loop {
                        let (name, pos) = self.feature_name()?;
                        self.declare(&name, pos, &format!("{path}/{name}"));
                        pending.insert(name.clone(), (gi, children.len(), false));
                        children.push(Feature::new(name, Variability::Optional));
                        match self.next() {
                            (Tok::Comma, _) => continue,
                            (Tok::RBrace, _) => break,
                            (t, p) => {
                                return Err(Diagnostic::error(
                                    "SYNTAX",
                                    "",
                                    format!("expected `,` or `}}`, found {}", t.describe()),
                                )
                                .at(p))
                            }
                        }
                    }
                    feature.groups.push(Group { kind, children });
                }
                "attribute" => {
                    self.next();
                    let attr = self.attribute(feature, path)?;
                    feature.attributes.push(attr);
                }
                "constraint" => {
                    self.next();
                    let (lhs, pos) = self.ident()?;
                    let kind = match self.next() {
                        (Tok::Ident(s), _) if s == "requires" => ConstraintKind::Requires,
                        (Tok::Ident(s), _) if s == "excludes" => ConstraintKind::Excludes,
                        (t, p) => {
                            return Err(Diagnostic::error(
                                "SYNTAX",
                                "",
                                format!(
                                    "expected `requires` or `excludes`, found {}",
                                    t.describe()
                                ),
                            )
                            .at(p))
                        }
                    };
                    let (rhs, _) = self.ident()?;
                    self.constraints
                        .push((CrossTreeConstraint { kind, lhs, rhs }, pos));
                }
                "root" => {
                    return Err(Diagnostic::error(
                        "SYNTAX",
                        path,
                        "`root` may only introduce the top feature",
                    )
                    .at(self.pos()))
                }
                _ => return Err(self.unexpected("a block item or `}`")),
            }
        }
    }

    fn attribute(&mut self, feature: &Feature, path: &str) -> PResult<AttributeDecl> {
        let (name, pos) = self.ident()?;
        self.expect(Tok::Colon)?;
        let (kind, kind_pos) = self.ident()?;
        let domain = match kind.as_str() {
            "enum" => {
                self.expect(Tok::LBrace)?;
                let mut literals = Vec::new();
                loop {
                    let (lit, lit_pos) = self.ident()?;
                    if literals.contains(&lit) {
                        self.errors.push(
                            Diagnostic::error(
                                "DUPLICATE_LITERAL",
                                path,
                                format!("enum literal `{lit}` repeated"),
                            )
                            .at(lit_pos),
                        );
                    } else {
                        literals.push(lit);
                    }
                    match self.next() {
                        (Tok::Comma, _) => continue,
                        (Tok::RBrace, _) => break,
                        (t, p) => {
                            return Err(Diagnostic::error(
                                "SYNTAX",
                                "",
                                format!("expected `,` or `}}`, found {}", t.describe()),
                            )
                            .at(p))
                        }
                    }
                }
                AttributeDomain::Enum { literals }
            }
            "int" => {
                self.expect(Tok::LBracket)?;
                let (lo, lo_pos) = self.int()?;
                self.expect(Tok::DotDot)?;
                let (hi, _) = self.int()?;
                self.expect(Tok::RBracket)?;
                if lo > hi {
                    self.errors.push(
                        Diagnostic::error(
                            "MIN_GT_MAX",
                            path,
                            format!("int range [{lo}..{hi}] is empty"),
                        )
                        .at(lo_pos),
                    );
                }
                AttributeDomain::Int { lo, hi }
            }
            "text" => AttributeDomain::Text,
            other => {
                return Err(Diagnostic::error(
                    "SYNTAX",
                    "",
                    format!("expected `enum`, `int` or `text`, found `{other}`"),
                )
                .at(kind_pos))
            }
        };
        let required = if self.is_keyword("required") {
            self.next();
            true
        } else {
            false
        };
        if feature.attribute(&name).is_some() {
            self.errors.push(
                Diagnostic::error(
                    "DUPLICATE_ATTRIBUTE",
                    path,
                    format!("attribute `{name}` declared twice"),
                )
                .at(pos),
            );
        }
        Ok(AttributeDecl {
            name,
            domain,
            required,
        })
    }
}

/// Parses feature-model source. On failure every collected diagnostic is
/// returned; syntax errors stop parsing at the first offending token.
pub fn parse_model(src: &str) -> Result<FeatureModel, Vec<Diagnostic>> {
    let toks = lex(src).map_err(|d| vec![d])?;
    let mut p = Parser {
        toks,
        at: 0,
        declared: HashMap::new(),
        constraints: Vec::new(),
        errors: Vec::new(),
    };

    let header = if p.is_keyword("featuremodel") {
        p.next();
        Some(p.ident().map_err(|d| vec![d])?.0)
    } else {
        None
    };
    if !p.is_keyword("root") {
        return Err(vec![p.unexpected("`root`")]);
    }
    let root_pos = p.next().1;
    let (mut root, pos) = p.feature_rest("root", "").map_err(|d| vec![d])?;
    p.declare(&root.name.clone(), pos, &root.name.clone());
    if root.cardinality != Cardinality::ONE {
        p.errors.push(
            Diagnostic::error(
                "ROOT_CARDINALITY",
                root.name.clone(),
                "the root feature has cardinality [1..1]",
            )
            .at(root_pos),
        );
    }
    root.variability = Variability::Mandatory;
    if *p.peek() != Tok::Eof {
        return Err(vec![p.unexpected("end of input")]);
    }

    let mut constraints = Vec::with_capacity(p.constraints.len());
    for (c, pos) in std::mem::take(&mut p.constraints) {
        for end in [&c.lhs, &c.rhs] {
            if !p.declared.contains_key(end) {
                p.errors.push(
                    Diagnostic::error(
                        "UNKNOWN_FEATURE",
                        "",
                        format!("constraint names unknown feature `{end}`"),
                    )
                    .at(pos),
                );
            }
        }
        if c.lhs == c.rhs {
            p.errors.push(
                Diagnostic::error(
                    "CONSTRAINT_SELF",
                    "",
                    format!("constraint relates `{}` to itself", c.lhs),
                )
                .at(pos),
            );
        }
        constraints.push(c);
    }

    if !p.errors.is_empty() {
        return Err(p.errors);
    }
    let name = header.unwrap_or_else(|| root.name.clone());
    Ok(FeatureModel {
        name,
        root,
        constraints,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn codes(src: &str) -> Vec<&'static str> {
        parse_model(src)
            .unwrap_err()
            .into_iter()
            .map(|d| d.code)
            .collect()
    }

    #[test]
    fn minimal_root() {
        let m = parse_model("root R {}").unwrap();
        assert_eq!(m.name, "R");
        assert_eq!(m.root.name, "R");
        assert!(m.root.groups.is_empty());
    }

    #[test]
    fn groups_and_elaboration() {
        let m = parse_model(
            "featuremodel M root R { optional A; alternative {B, C} optional C [0..4] { mandatory D } }",
        )
        .unwrap();
        assert_eq!(m.name, "M");
        assert_eq!(m.root.groups.len(), 2);
        assert_eq!(m.root.groups[0].kind, GroupKind::And);
        let alt = &m.root.groups[1];
        assert_eq!(alt.kind, GroupKind::Alternative);
        assert_eq!(alt.children[1].cardinality, Cardinality::new(0, 4));
        assert_eq!(alt.children[1].children().next().unwrap().name, "D");
        assert_eq!(m.path_of("D").as_deref(), Some("R/C/D"));
    }

    #[test]
    fn min_greater_than_max_reports_position() {
        let errs = parse_model("root R {\n  clone X [5..2]\n}").unwrap_err();
        assert_eq!(errs.len(), 1);
        assert_eq!(errs[0].code, "MIN_GT_MAX");
        assert_eq!(
            errs[0].position,
            Some(Position {
                line: 2,
                column: 12
            })
        );
    }

    #[test]
    fn duplicate_and_unknown() {
        assert_eq!(
            codes("root R { optional A optional A }"),
            vec!["DUPLICATE_FEATURE"]
        );
        assert_eq!(
            codes("root R { optional A constraint A requires Z }"),
            vec!["UNKNOWN_FEATURE"]
        );
        assert_eq!(
            codes("root R { alternative {A, R} }"),
            vec!["DUPLICATE_FEATURE"]
        );
        assert_eq!(
            codes("root R { optional A constraint A excludes A }"),
            vec!["CONSTRAINT_SELF"]
        );
    }

    #[test]
    fn syntax_errors_carry_location() {
        let errs = parse_model("root R {\n  optional\n}").unwrap_err();
        assert_eq!(errs[0].code, "SYNTAX");
        assert_eq!(errs[0].position.unwrap().line, 3);
        assert_eq!(codes("root R { optional A } trailing"), vec!["SYNTAX"]);
        assert_eq!(codes("root R { optional root }"), vec!["RESERVED_WORD"]);
        assert_eq!(codes("root R [0..2]"), vec!["ROOT_CARDINALITY"]);
        assert_eq!(
            codes("root R { alternative {A} mandatory A }"),
            vec!["GROUP_CHILD_MANDATORY"]
        );
    }

    #[test]
    fn attributes() {
        let m = parse_model(
            "root R { attribute p: enum {High, Medium} required attribute n: int [-2..3] attribute t: text }",
        )
        .unwrap();
        assert_eq!(m.root.attributes.len(), 3);
        assert!(m.root.attributes[0].required);
        assert_eq!(
            m.root.attributes[1].domain,
            AttributeDomain::Int { lo: -2, hi: 3 }
        );
        assert_eq!(
            codes("root R { attribute n: int [3..1] }"),
            vec!["MIN_GT_MAX"]
        );
        assert_eq!(
            codes("root R { attribute n: text attribute n: text }"),
            vec!["DUPLICATE_ATTRIBUTE"]
        );
    }

    #[test]
    fn unicode_identifiers_and_comments() {
        let m = parse_model("# primer\nroot पाठ { optional मन # lesson word\n }").unwrap();
        assert_eq!(m.root.name, "पाठ");
        assert!(m.find("मन").is_some());
    }
}
