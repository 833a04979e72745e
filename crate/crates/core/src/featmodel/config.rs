//! Configurations over a feature model and the rules that make them valid.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::model::*;
use crate::diag::{has_errors, Diagnostic};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AttributeValue {
    Int(i64),
    Text(String),
}

impl std::fmt::Display for AttributeValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AttributeValue::Int(i) => write!(f, "{i}"),
            AttributeValue::Text(s) => write!(f, "{s:?}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttributeAssignment {
    pub feature: String,
    /// Clone instance, counted from 1.
    pub instance: u32,
    pub name: String,
    pub value: AttributeValue,
}

/// A feature selection. Features absent from `selections` (or mapped to 0)
/// are not selected.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Configuration {
    pub model: String,
    #[serde(rename = "select")]
    pub selections: BTreeMap<String, u32>,
    #[serde(rename = "attrs", default)]
    pub assignments: Vec<AttributeAssignment>,
}

impl Configuration {
    pub fn new(model: impl Into<String>) -> Self {
        Configuration {
            model: model.into(),
            ..Default::default()
        }
    }

    pub fn select(mut self, feature: impl Into<String>, count: u32) -> Self {
        self.selections.insert(feature.into(), count);
        self
    }

    pub fn assign(
        mut self,
        feature: impl Into<String>,
        instance: u32,
        name: impl Into<String>,
        value: AttributeValue,
    ) -> Self {
        self.assignments.push(AttributeAssignment {
            feature: feature.into(),
            instance,
            name: name.into(),
            value,
        });
        self
    }

    pub fn count(&self, feature: &str) -> u32 {
        self.selections.get(feature).copied().unwrap_or(0)
    }

    pub fn is_selected(&self, feature: &str) -> bool {
        self.count(feature) > 0
    }

    /// Names of selected features, sorted.
    pub fn selected_names(&self) -> impl Iterator<Item = &str> {
        self.selections
            .iter()
            .filter(|(_, c)| **c > 0)
            .map(|(n, _)| n.as_str())
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidityReport {
    pub valid: bool,
    pub diagnostics: Vec<Diagnostic>,
}

impl ValidityReport {
    pub fn from_diagnostics(diagnostics: Vec<Diagnostic>) -> Self {
        ValidityReport {
            valid: !has_errors(&diagnostics),
            diagnostics,
        }
    }

    pub fn has_code(&self, code: &str) -> bool {
        self.diagnostics.iter().any(|d| d.code == code)
    }
}

/// Structural rules R1–R7 over a name → count map.
fn check_selection(model: &FeatureModel, counts: &dyn Fn(&str) -> u32) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let features = model.features();
    let paths = paths(&features);
    let sel = |name: &str| counts(name) > 0;

    if !sel(&model.root.name) {
        out.push(Diagnostic::error(
            "R1_ROOT_UNSELECTED",
            &paths[0],
            "the root feature must be selected",
        ));
    }
    for (i, fr) in features.iter().enumerate() {
        let f = fr.feature;
        let count = counts(&f.name);
        if let Some(p) = fr.parent {
            if count > 0 && !sel(&features[p].feature.name) {
                out.push(Diagnostic::error(
                    "R2_PARENT_UNSELECTED",
                    &paths[i],
                    format!(
                        "`{}` is selected but its parent `{}` is not",
                        f.name, features[p].feature.name
                    ),
                ));
            }
        }
        if count > 0 && !f.cardinality.contains(count) {
            out.push(Diagnostic::error(
                "R6_CARDINALITY",
                &paths[i],
                format!(
                    "`{}` selected {count} times, allowed [{}..{}]",
                    f.name, f.cardinality.min, f.cardinality.max
                ),
            ));
        }
        if count == 0 {
            continue;
        }
        for g in &f.groups {
            match g.kind {
                GroupKind::And => {
                    for c in g.children.iter() {
                        if c.variability == Variability::Mandatory && !sel(&c.name) {
                            out.push(Diagnostic::error(
                                "R3_MANDATORY_MISSING",
                                format!("{}/{}", paths[i], c.name),
                                format!(
                                    "mandatory feature `{}` of `{}` is not selected",
                                    c.name, f.name
                                ),
                            ));
                        }
                    }
                }
                GroupKind::Alternative => {
                    let chosen: Vec<&str> = g
                        .children
                        .iter()
                        .filter(|c| sel(&c.name))
                        .map(|c| c.name.as_str())
                        .collect();
                    if chosen.len() != 1 {
                        out.push(Diagnostic::error(
                            "R4_ALTERNATIVE",
                            &paths[i],
                            format!(
                                "exactly one of {{{}}} must be selected under `{}`, found {}",
                                names(g),
                                f.name,
                                if chosen.is_empty() {
                                    "none".to_string()
                                } else {
                                    chosen.join(", ")
                                }
                            ),
                        ));
                    }
                }
                GroupKind::Or => {
                    if !g.children.iter().any(|c| sel(&c.name)) {
                        out.push(Diagnostic::error(
                            "R5_OR_EMPTY",
                            &paths[i],
                            format!(
                                "at least one of {{{}}} must be selected under `{}`",
                                names(g),
                                f.name
                            ),
                        ));
                    }
                }
            }
        }
    }
    let index: HashMap<&str, usize> = features
        .iter()
        .enumerate()
        .map(|(i, f)| (f.feature.name.as_str(), i))
        .collect();
    for c in &model.constraints {
        let path = index
            .get(c.lhs.as_str())
            .map(|&i| paths[i].clone())
            .unwrap_or_default();
        match c.kind {
            ConstraintKind::Requires if sel(&c.lhs) && !sel(&c.rhs) => out.push(Diagnostic::error(
                "R7_REQUIRES",
                path,
                format!("`{}` requires `{}`", c.lhs, c.rhs),
            )),
            ConstraintKind::Excludes if sel(&c.lhs) && sel(&c.rhs) => out.push(Diagnostic::error(
                "R7_EXCLUDES",
                path,
                format!("`{}` excludes `{}`", c.lhs, c.rhs),
            )),
            _ => {}
        }
    }
    out
}

fn names(g: &Group) -> String {
    g.children
        .iter()
        .map(|c| c.name.as_str())
        .collect::<Vec<_>>()
        .join(", ")
}

fn paths(features: &[FeatureRef<'_>]) -> Vec<String> {
    let mut out: Vec<String> = Vec::with_capacity(features.len());
    for fr in features {
        let p = match fr.parent {
            Some(p) => format!("{}/{}", out[p], fr.feature.name),
            None => fr.feature.name.clone(),
        };
        out.push(p);
    }
    out
}

fn value_in_domain(domain: &AttributeDomain, value: &AttributeValue) -> bool {
    match (domain, value) {
        (AttributeDomain::Enum { literals }, AttributeValue::Text(s)) => literals.contains(s),
        (AttributeDomain::Int { lo, hi }, AttributeValue::Int(v)) => lo <= v && v <= hi,
        (AttributeDomain::Text, AttributeValue::Text(_)) => true,
        _ => false,
    }
}

/// Checks `config` against every rule of `model`: structural rules R1–R7
/// and attribute rule R8. Unknown feature or attribute names are reported
/// as errors.
pub fn check_configuration(model: &FeatureModel, config: &Configuration) -> ValidityReport {
    let mut out = Vec::new();
    if config.model != model.name {
        out.push(Diagnostic::error(
            "MODEL_MISMATCH",
            "",
            format!(
                "configuration targets model `{}`, not `{}`",
                config.model, model.name
            ),
        ));
    }
    let features = model.features();
    let paths = paths(&features);
    let index: HashMap<&str, usize> = features
        .iter()
        .enumerate()
        .map(|(i, f)| (f.feature.name.as_str(), i))
        .collect();

    for name in config.selections.keys() {
        if !index.contains_key(name.as_str()) {
            out.push(Diagnostic::error(
                "UNKNOWN_FEATURE",
                name.clone(),
                format!("configuration selects unknown feature `{name}`"),
            ));
        }
    }
    out.extend(check_selection(model, &|n| config.count(n)));

    // R8: assignments first, then anything required but missing.
    let mut seen: HashMap<(&str, u32, &str), ()> = HashMap::new();
    for a in &config.assignments {
        let Some(&fi) = index.get(a.feature.as_str()) else {
            out.push(Diagnostic::error(
                "UNKNOWN_FEATURE",
                a.feature.clone(),
                format!("attribute assignment names unknown feature `{}`", a.feature),
            ));
            continue;
        };
        let f = features[fi].feature;
        let at = format!("{}#{}.{}", paths[fi], a.instance, a.name);
        let Some(decl) = f.attribute(&a.name) else {
            out.push(Diagnostic::error(
                "UNKNOWN_ATTRIBUTE",
                at,
                format!("`{}` declares no attribute `{}`", f.name, a.name),
            ));
            continue;
        };
        let count = config.count(&f.name);
        if a.instance == 0 || a.instance > count {
            out.push(Diagnostic::error(
                "R8_INSTANCE_RANGE",
                at,
                format!(
                    "instance {} of `{}` does not exist (selected {count})",
                    a.instance, f.name
                ),
            ));
            continue;
        }
        if seen
            .insert((a.feature.as_str(), a.instance, a.name.as_str()), ())
            .is_some()
        {
            out.push(Diagnostic::error(
                "R8_ATTRIBUTE_DUPLICATE",
                at,
                format!("attribute `{}` assigned more than once", a.name),
            ));
            continue;
        }
        if !value_in_domain(&decl.domain, &a.value) {
            out.push(Diagnostic::error(
                "R8_ATTRIBUTE_DOMAIN",
                at,
                format!("value {} is outside the domain of `{}`", a.value, a.name),
            ));
        }
    }
    for (i, fr) in features.iter().enumerate() {
        let f = fr.feature;
        let count = config.count(&f.name);
        for decl in f.attributes.iter().filter(|d| d.required) {
            for instance in 1..=count {
                if !seen.contains_key(&(f.name.as_str(), instance, decl.name.as_str())) {
                    out.push(Diagnostic::error(
                        "R8_ATTRIBUTE_MISSING",
                        format!("{}#{instance}.{}", paths[i], decl.name),
                        format!(
                            "required attribute `{}` missing on instance {instance}",
                            decl.name
                        ),
                    ));
                }
            }
        }
    }
    ValidityReport::from_diagnostics(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::featmodel::parse_model;

    fn model() -> FeatureModel {
        parse_model(
            "featuremodel M root R {
                mandatory A { attribute t: text required attribute n: int [1..3] }
                optional B [1..3] { attribute e: enum {x, y} required }
                alternative {C, D}
                or {E, F}
                constraint B requires C
                constraint E excludes D
            }",
        )
        .unwrap()
    }

    fn base() -> Configuration {
        Configuration::new("M")
            .select("R", 1)
            .select("A", 1)
            .select("C", 1)
            .select("E", 1)
            .assign("A", 1, "t", AttributeValue::Text("hello".into()))
    }

    fn codes(c: &Configuration) -> Vec<&'static str> {
        check_configuration(&model(), c)
            .diagnostics
            .iter()
            .map(|d| d.code)
            .collect()
    }

    #[test]
    fn valid_base() {
        let r = check_configuration(&model(), &base());
        assert!(r.valid, "{:?}", r.diagnostics);
    }

    #[test]
    fn each_rule_fires() {
        assert_eq!(
            codes(&base().select("R", 0)),
            vec![
                "R1_ROOT_UNSELECTED",
                "R2_PARENT_UNSELECTED",
                "R2_PARENT_UNSELECTED",
                "R2_PARENT_UNSELECTED"
            ]
        );
        let mut no_a = base();
        no_a.selections.remove("A");
        no_a.assignments.clear();
        assert_eq!(codes(&no_a), vec!["R3_MANDATORY_MISSING"]);
        assert_eq!(
            codes(&base().select("D", 1)),
            vec!["R4_ALTERNATIVE", "R7_EXCLUDES"]
        );
        assert_eq!(codes(&base().select("E", 0)), vec!["R5_OR_EMPTY"]);
        assert_eq!(
            codes(&base().select("A", 2)),
            vec!["R6_CARDINALITY", "R8_ATTRIBUTE_MISSING"]
        );
        let b = base()
            .select("B", 1)
            .select("C", 0)
            .select("D", 1)
            .select("E", 0)
            .select("F", 1)
            .assign("B", 1, "e", AttributeValue::Text("x".into()));
        assert_eq!(codes(&b), vec!["R7_REQUIRES"]);
    }

    #[test]
    fn attribute_rules() {
        let c = base()
            .select("B", 2)
            .assign("B", 1, "e", AttributeValue::Text("z".into()));
        assert_eq!(
            codes(&c),
            vec!["R8_ATTRIBUTE_DOMAIN", "R8_ATTRIBUTE_MISSING"]
        );
        let c = base().assign("A", 1, "n", AttributeValue::Int(7));
        assert_eq!(codes(&c), vec!["R8_ATTRIBUTE_DOMAIN"]);
        let c = base().assign("A", 2, "n", AttributeValue::Int(1));
        assert_eq!(codes(&c), vec!["R8_INSTANCE_RANGE"]);
        let c = base().assign("A", 1, "t", AttributeValue::Text("again".into()));
        assert_eq!(codes(&c), vec!["R8_ATTRIBUTE_DUPLICATE"]);
        let c = base().assign("A", 1, "nope", AttributeValue::Int(1));
        assert_eq!(codes(&c), vec!["UNKNOWN_ATTRIBUTE"]);
    }

    #[test]
    fn unknown_names_and_model_mismatch() {
        let mut c = base().select("Ghost", 1);
        c.model = "Other".into();
        let r = check_configuration(&model(), &c);
        assert!(!r.valid);
        assert_eq!(r.diagnostics[0].code, "MODEL_MISMATCH");
        assert_eq!(r.diagnostics[1].code, "UNKNOWN_FEATURE");
    }

    #[test]
    fn json_format() {
        let c = Configuration::from_json(
            r#"{"model":"M","select":{"R":1,"A":1,"C":1,"E":1},
                "attrs":[{"feature":"A","instance":1,"name":"t","value":"hi"},
                         {"feature":"A","instance":1,"name":"n","value":2}]}"#,
        )
        .unwrap();
        assert_eq!(c.assignments[1].value, AttributeValue::Int(2));
        assert!(check_configuration(&model(), &c).valid);
    }
}
