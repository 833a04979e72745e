use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variability {
    Mandatory,
    Optional,
}

/// Clone bounds `[min..max]`. `[1..1]` is an ordinary feature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cardinality {
    pub min: u32,
    pub max: u32,
}

impl Cardinality {
    pub const ONE: Cardinality = Cardinality { min: 1, max: 1 };

    pub fn new(min: u32, max: u32) -> Self {
        Cardinality { min, max }
    }

    pub fn is_valid(&self) -> bool {
        self.min <= self.max && self.max >= 1
    }

    pub fn is_clone(&self) -> bool {
        *self != Cardinality::ONE
    }

    pub fn contains(&self, count: u32) -> bool {
        self.min <= count && count <= self.max
    }
}

impl Default for Cardinality {
    fn default() -> Self {
        Cardinality::ONE
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupKind {
    And,
    Alternative,
    Or,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Group {
    pub kind: GroupKind,
    pub children: Vec<Feature>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum AttributeDomain {
    Enum { literals: Vec<String> },
    Int { lo: i64, hi: i64 },
    Text,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttributeDecl {
    pub name: String,
    pub domain: AttributeDomain,
    pub required: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstraintKind {
    Requires,
    Excludes,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossTreeConstraint {
    pub kind: ConstraintKind,
    pub lhs: String,
    pub rhs: String,
}

/// A node of the feature tree.
///
/// Children declared directly with `mandatory`/`optional` live in the
/// feature's single `And` group; `alternative` and `or` groups keep their
/// declaration position. The variability flag of a child only matters
/// inside an `And` group; children of alternative/or groups are always
/// `Optional`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Feature {
    pub name: String,
    pub variability: Variability,
    pub cardinality: Cardinality,
    pub groups: Vec<Group>,
    pub attributes: Vec<AttributeDecl>,
}

impl Feature {
    pub fn new(name: impl Into<String>, variability: Variability) -> Self {
        Feature {
            name: name.into(),
            variability,
            cardinality: Cardinality::ONE,
            groups: Vec::new(),
            attributes: Vec::new(),
        }
    }

    pub fn children(&self) -> impl Iterator<Item = &Feature> {
        self.groups.iter().flat_map(|g| g.children.iter())
    }

    pub fn attribute(&self, name: &str) -> Option<&AttributeDecl> {
        self.attributes.iter().find(|a| a.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureModel {
    pub name: String,
    pub root: Feature,
    pub constraints: Vec<CrossTreeConstraint>,
}

/// A feature together with its position in the tree.
#[derive(Debug, Clone, Copy)]
pub struct FeatureRef<'a> {
    pub feature: &'a Feature,
    /// Index of the parent in the pre-order listing; `None` for the root.
    pub parent: Option<usize>,
    /// Kind of the group this feature belongs to (`And` for the root).
    pub group: GroupKind,
    /// Index of the group within the parent's `groups`.
    pub group_index: usize,
    pub depth: usize,
}

impl FeatureModel {
    /// All features in pre-order, children in declaration order.
    pub fn features(&self) -> Vec<FeatureRef<'_>> {
        fn walk<'a>(
            f: &'a Feature,
            parent: Option<usize>,
            group: GroupKind,
            group_index: usize,
            depth: usize,
            out: &mut Vec<FeatureRef<'a>>,
        ) {
            let me = out.len();
            out.push(FeatureRef {
                feature: f,
                parent,
                group,
                group_index,
                depth,
            });
            for (gi, g) in f.groups.iter().enumerate() {
                for c in &g.children {
                    walk(c, Some(me), g.kind, gi, depth + 1, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(&self.root, None, GroupKind::And, 0, 0, &mut out);
        out
    }

    pub fn find(&self, name: &str) -> Option<&Feature> {
        fn go<'a>(f: &'a Feature, name: &str) -> Option<&'a Feature> {
            if f.name == name {
                return Some(f);
            }
            f.children().find_map(|c| go(c, name))
        }
        go(&self.root, name)
    }

    /// Slash-separated path from the root to `name`.
    pub fn path_of(&self, name: &str) -> Option<String> {
        fn go(f: &Feature, name: &str, prefix: &mut Vec<String>) -> bool {
            prefix.push(f.name.clone());
            if f.name == name {
                return true;
            }
            for c in f.children() {
                if go(c, name, prefix) {
                    return true;
                }
            }
            prefix.pop();
            false
        }
        let mut prefix = Vec::new();
        go(&self.root, name, &mut prefix).then(|| prefix.join("/"))
    }

    pub fn feature_count(&self) -> usize {
        self.features().len()
    }
}
