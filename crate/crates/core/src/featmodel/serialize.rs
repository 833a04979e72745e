use std::fmt::Write;

use super::model::*;

/// Canonical source text for `model`. Attributes come first in each block,
/// then groups in order; cross-tree constraints close the root block.
pub fn serialize_model(model: &FeatureModel) -> String {
    let mut out = format!("featuremodel {} root {}", model.name, model.root.name);
    write_card(&mut out, model.root.cardinality);
    let has_body = !model.root.groups.is_empty()
        || !model.root.attributes.is_empty()
        || !model.constraints.is_empty();
    if has_body {
        out.push_str(" {\n");
        write_body(&mut out, &model.root, 1);
        for c in &model.constraints {
            let kind = match c.kind {
                ConstraintKind::Requires => "requires",
                ConstraintKind::Excludes => "excludes",
            };
            let _ = writeln!(out, "  constraint {} {kind} {}", c.lhs, c.rhs);
        }
        out.push('}');
    }
    out.push('\n');
    out
}

fn write_card(out: &mut String, card: Cardinality) {
    if card.is_clone() {
        let _ = write!(out, " [{}..{}]", card.min, card.max);
    }
}

fn has_body(f: &Feature) -> bool {
    !f.groups.is_empty() || !f.attributes.is_empty()
}

fn write_feature(out: &mut String, f: &Feature, keyword: &str, depth: usize) {
    let indent = "  ".repeat(depth);
    let _ = write!(out, "{indent}{keyword} {}", f.name);
    write_card(out, f.cardinality);
    if has_body(f) {
        out.push_str(" {\n");
        write_body(out, f, depth + 1);
        let _ = write!(out, "{indent}}}");
    }
    out.push('\n');
}

fn write_body(out: &mut String, f: &Feature, depth: usize) {
    let indent = "  ".repeat(depth);
    for a in &f.attributes {
        let _ = write!(out, "{indent}attribute {}: ", a.name);
        match &a.domain {
            AttributeDomain::Enum { literals } => {
                let _ = write!(out, "enum {{{}}}", literals.join(", "));
            }
            AttributeDomain::Int { lo, hi } => {
                let _ = write!(out, "int [{lo}..{hi}]");
            }
            AttributeDomain::Text => out.push_str("text"),
        }
        if a.required {
            out.push_str(" required");
        }
        out.push('\n');
    }
    for g in &f.groups {
        match g.kind {
            GroupKind::And => {
                for c in &g.children {
                    let kw = match c.variability {
                        Variability::Mandatory => "mandatory",
                        Variability::Optional => "optional",
                    };
                    write_feature(out, c, kw, depth);
                }
            }
            GroupKind::Alternative | GroupKind::Or => {
                let kw = if g.kind == GroupKind::Or {
                    "or"
                } else {
                    "alternative"
                };
                let names: Vec<&str> = g.children.iter().map(|c| c.name.as_str()).collect();
                let _ = writeln!(out, "{indent}{kw} {{{}}}", names.join(", "));
                for c in g
                    .children
                    .iter()
                    .filter(|c| c.cardinality.is_clone() || has_body(c))
                {
                    write_feature(out, c, "optional", depth);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::featmodel::parse_model;

    #[test]
    fn single_root_is_one_line() {
        let m = parse_model("root R {}").unwrap();
        let text = serialize_model(&m);
        assert_eq!(text, "featuremodel R root R\n");
        assert_eq!(text.lines().count(), 1);
    }

    #[test]
    fn attributes_and_constraints_preserved_in_order() {
        let src = "featuremodel M root R {
            optional A { attribute t: text required attribute n: int [1..3] }
            optional B
            or {C, D}
            optional D [2..5] { attribute e: enum {x, y} }
            constraint A requires B
            constraint C excludes B
        }";
        let m = parse_model(src).unwrap();
        let text = serialize_model(&m);
        let again = parse_model(&text).unwrap();
        assert_eq!(again, m);
        assert_eq!(again.constraints.len(), 2);
        assert_eq!(again.constraints[1].lhs, "C");
        assert_eq!(serialize_model(&again), text);
    }
}
