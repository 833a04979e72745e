//! Random generators and brute-force oracles shared by the property suites.
//!
//! The oracles restate the rules directly and never call the code under
//! test.

#![allow(dead_code)]

use std::collections::BTreeSet;

use proptest::prelude::*;

use primerline::featmodel::{
    AttributeDecl, AttributeDomain, Cardinality, ConstraintKind, CrossTreeConstraint, Feature,
    FeatureModel, Group, GroupKind, Variability,
};
use primerline::idinstance::{
    AbcdParts, AssetRef, Case, ContentItem, Fact, Goal, IdInstance, InstructionFrame, Instructions,
    Lesson, MediaKind, ProcessNode, Resource,
};

/// Deterministic draws from a proptest-generated pool of integers.
pub struct Draws {
    pool: Vec<u32>,
    at: usize,
}

impl Draws {
    pub fn new(pool: Vec<u32>) -> Self {
        Draws { pool, at: 0 }
    }

    /// Uniform-ish in `0..n`; `n` must be positive.
    pub fn below(&mut self, n: usize) -> usize {
        let v = self.pool[self.at % self.pool.len()];
        self.at += 1;
        v as usize % n
    }

    pub fn chance(&mut self, percent: usize) -> bool {
        self.below(100) < percent
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.below(items.len())]
    }
}

pub fn pool() -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(any::<u32>(), 64..256)
}

// ---------------------------------------------------------------------------
// feature models

#[derive(Default)]
struct Node {
    variability: Option<Variability>,
    cardinality: Cardinality,
    attributes: Vec<AttributeDecl>,
    and_children: Vec<usize>,
    and_position: usize,
    groups: Vec<(GroupKind, Vec<usize>)>,
}

/// Options for [`random_model`].
#[derive(Clone, Copy)]
pub struct ModelShape {
    pub features: usize,
    pub clones: bool,
    pub attributes: bool,
    pub constraints: usize,
}

const CARDS: &[(u32, u32)] = &[(1, 1), (0, 1), (0, 2), (1, 3), (2, 5), (1, 25)];

fn random_attributes(d: &mut Draws) -> Vec<AttributeDecl> {
    (0..d.below(3))
        .map(|i| {
            let domain = match d.below(3) {
                0 => AttributeDomain::Text,
                1 => {
                    let lo = d.below(10) as i64 - 5;
                    AttributeDomain::Int {
                        lo,
                        hi: lo + d.below(6) as i64,
                    }
                }
                _ => AttributeDomain::Enum {
                    literals: (0..1 + d.below(3)).map(|k| format!("v{k}")).collect(),
                },
            };
            AttributeDecl {
                name: format!("a{i}"),
                domain,
                required: d.chance(50),
            }
        })
        .collect()
}

/// A model that the parser accepts: unique names, non-empty groups, at
/// most one `And` group per feature, alternative/or members optional.
pub fn random_model(d: &mut Draws, shape: ModelShape) -> FeatureModel {
    let n = shape.features.max(1);
    let mut nodes: Vec<Node> = (0..n).map(|_| Node::default()).collect();
    for i in 1..n {
        let parent = d.below(i);
        let p = &mut nodes[parent];
        let choice = d.below(4);
        if choice == 0 && !p.groups.is_empty() {
            let g = d.below(p.groups.len());
            p.groups[g].1.push(i);
            nodes[i].variability = None;
        } else if choice == 1 {
            let kind = if d.chance(50) {
                GroupKind::Alternative
            } else {
                GroupKind::Or
            };
            p.groups.push((kind, vec![i]));
            nodes[i].variability = None;
        } else {
            if p.and_children.is_empty() {
                p.and_position = d.below(p.groups.len() + 1);
            }
            p.and_children.push(i);
            nodes[i].variability = Some(if d.chance(50) {
                Variability::Mandatory
            } else {
                Variability::Optional
            });
        }
    }
    for (i, node) in nodes.iter_mut().enumerate() {
        if shape.clones && i > 0 {
            let (min, max) = *d.pick(CARDS);
            node.cardinality = Cardinality::new(min, max);
        }
        if shape.attributes {
            node.attributes = random_attributes(d);
        }
    }

    fn build(nodes: &[Node], i: usize) -> Feature {
        let node = &nodes[i];
        let mut f = Feature::new(
            format!("F{i}"),
            node.variability.unwrap_or(Variability::Optional),
        );
        f.cardinality = node.cardinality;
        f.attributes = node.attributes.clone();
        let mut groups: Vec<Group> = node
            .groups
            .iter()
            .map(|(kind, ch)| Group {
                kind: *kind,
                children: ch.iter().map(|&c| build(nodes, c)).collect(),
            })
            .collect();
        if !node.and_children.is_empty() {
            let and = Group {
                kind: GroupKind::And,
                children: node.and_children.iter().map(|&c| build(nodes, c)).collect(),
            };
            groups.insert(node.and_position.min(groups.len()), and);
        }
        f.groups = groups;
        f
    }

    let mut root = build(&nodes, 0);
    root.variability = Variability::Mandatory;
    root.cardinality = Cardinality::ONE;
    let constraints = if n < 2 {
        Vec::new()
    } else {
        (0..shape.constraints)
            .map(|_| {
                let lhs = d.below(n);
                let rhs = (lhs + 1 + d.below(n - 1)) % n;
                CrossTreeConstraint {
                    kind: if d.chance(50) {
                        ConstraintKind::Requires
                    } else {
                        ConstraintKind::Excludes
                    },
                    lhs: format!("F{lhs}"),
                    rhs: format!("F{rhs}"),
                }
            })
            .collect()
    };
    FeatureModel {
        name: format!("M{}", d.below(100)),
        root,
        constraints,
    }
}

/// Flat view of a model used by the oracle.
struct Flat {
    names: Vec<String>,
    parent: Vec<Option<usize>>,
    mandatory: Vec<(usize, usize)>,
    alternative: Vec<(usize, Vec<usize>)>,
    or: Vec<(usize, Vec<usize>)>,
}

fn flatten(model: &FeatureModel) -> Flat {
    let mut flat = Flat {
        names: Vec::new(),
        parent: Vec::new(),
        mandatory: Vec::new(),
        alternative: Vec::new(),
        or: Vec::new(),
    };
    fn walk(f: &Feature, parent: Option<usize>, flat: &mut Flat) {
        let me = flat.names.len();
        flat.names.push(f.name.clone());
        flat.parent.push(parent);
        for g in &f.groups {
            let mut members = Vec::new();
            for c in &g.children {
                let idx = flat.names.len();
                members.push(idx);
                if g.kind == GroupKind::And && c.variability == Variability::Mandatory {
                    flat.mandatory.push((me, idx));
                }
                walk(c, Some(me), flat);
            }
            match g.kind {
                GroupKind::Alternative => flat.alternative.push((me, members)),
                GroupKind::Or => flat.or.push((me, members)),
                GroupKind::And => {}
            }
        }
    }
    walk(&model.root, None, &mut flat);
    flat
}

/// Number of valid selections of a clone-free model, by checking every
/// subset of its features.
pub fn powerset_count(model: &FeatureModel) -> u64 {
    let flat = flatten(model);
    let n = flat.names.len();
    assert!(n <= 20, "powerset oracle is for small models");
    let index = |name: &str| flat.names.iter().position(|x| x == name).unwrap();
    let constraints: Vec<(ConstraintKind, usize, usize)> = model
        .constraints
        .iter()
        .map(|c| (c.kind, index(&c.lhs), index(&c.rhs)))
        .collect();
    let mut count = 0;
    for mask in 0u32..(1 << n) {
        let on = |i: usize| mask & (1 << i) != 0;
        let ok = on(0)
            && (1..n).all(|i| !on(i) || on(flat.parent[i].unwrap()))
            && flat.mandatory.iter().all(|&(p, c)| !on(p) || on(c))
            && flat
                .alternative
                .iter()
                .all(|(p, m)| !on(*p) || m.iter().filter(|&&c| on(c)).count() == 1)
            && flat
                .or
                .iter()
                .all(|(p, m)| !on(*p) || m.iter().any(|&c| on(c)))
            && constraints.iter().all(|&(k, a, b)| match k {
                ConstraintKind::Requires => !on(a) || on(b),
                ConstraintKind::Excludes => !(on(a) && on(b)),
            });
        if ok {
            count += 1;
        }
    }
    count
}

pub fn model_strategy(shape: ModelShape) -> impl Strategy<Value = FeatureModel> {
    (1..=shape.features, pool()).prop_map(move |(features, pool)| {
        random_model(&mut Draws::new(pool), ModelShape { features, ..shape })
    })
}

// ---------------------------------------------------------------------------
// instances

const TEXT_PIECES: &[&str] = &[
    "न", "म", "र", "कि", "ा", "a", "b", "Z", "9", "&", "<", ">", "\"", "'", " ", "मन", "x y",
];
const SOUNDS: &[&str] = &[
    "sounds/hsounds/na.wav",
    "nam.wav",
    "sounds/ma.wav",
    "a b/c.wav",
];
const IMAGES: &[&str] = &["./flower.png", "img/कमल.png", "summary.png"];

/// Text as it survives a parse: no leading or trailing whitespace.
fn text(d: &mut Draws, allow_empty: bool) -> String {
    let len = d.below(5) + usize::from(!allow_empty);
    let s: String = (0..len).map(|_| *d.pick(TEXT_PIECES)).collect();
    let s = s.trim().to_string();
    if s.is_empty() && !allow_empty {
        "न".to_string()
    } else {
        s
    }
}

fn asset(d: &mut Draws, media: MediaKind) -> Option<AssetRef> {
    if d.chance(40) {
        return None;
    }
    let path = match media {
        MediaKind::Audio => *d.pick(SOUNDS),
        MediaKind::Image => *d.pick(IMAGES),
    };
    Some(AssetRef::new(path, media).unwrap())
}

fn frame(d: &mut Draws) -> Option<InstructionFrame> {
    d.chance(60).then(|| InstructionFrame {
        text: d.chance(50).then(|| text(d, true)),
        sound: asset(d, MediaKind::Audio),
        image: asset(d, MediaKind::Image),
    })
}

fn instructions(d: &mut Draws) -> Option<Instructions> {
    d.chance(50).then(|| Instructions {
        start: frame(d),
        middle: frame(d),
        end: frame(d),
    })
}

fn units(d: &mut Draws, depth: usize) -> Vec<ProcessNode> {
    if depth == 4 {
        return Vec::new();
    }
    (0..d.below(3))
        .map(|_| ProcessNode {
            title: text(d, true),
            instructions: instructions(d),
            children: units(d, depth + 1),
        })
        .collect()
}

pub fn random_instance(d: &mut Draws) -> IdInstance {
    let lessons = (0..1 + d.below(3))
        .map(|_| {
            let mut l = Lesson::new(text(d, false));
            l.instructions = instructions(d);
            l.goals = (0..d.below(3))
                .map(|_| Goal {
                    text: text(d, true),
                    sound: asset(d, MediaKind::Audio),
                    abcd: d.chance(30).then(|| AbcdParts {
                        audience: text(d, true),
                        behavior: text(d, true),
                        condition: text(d, true),
                        degree: text(d, true),
                    }),
                    level: d.chance(30).then(|| text(d, true)),
                })
                .collect();
            l.process = units(d, 0);
            l.content = (0..d.below(4))
                .map(|_| match d.below(4) {
                    0 | 1 => ContentItem::Fact(Fact {
                        text: text(d, true),
                        sound: asset(d, MediaKind::Audio),
                        instructions: instructions(d),
                        cases: (0..d.below(4))
                            .map(|_| Case {
                                text: text(d, true),
                                sound: asset(d, MediaKind::Audio),
                                image: asset(d, MediaKind::Image),
                            })
                            .collect(),
                    }),
                    k => {
                        let r = Resource {
                            text: text(d, true),
                            resources: (0..d.below(3))
                                .filter_map(|_| {
                                    let media = if d.chance(50) {
                                        MediaKind::Audio
                                    } else {
                                        MediaKind::Image
                                    };
                                    asset(d, media)
                                })
                                .collect(),
                        };
                        match (k, d.below(2)) {
                            (2, _) => ContentItem::Rule(r),
                            (_, 0) => ContentItem::Model(r),
                            _ => ContentItem::Theory(r),
                        }
                    }
                })
                .collect();
            l
        })
        .collect();
    IdInstance {
        spec: format!("IdSpecification{}", 1 + d.below(4)),
        lang: (*d.pick(&["hi", "mr", "en-IN"])).to_string(),
        title: text(d, true),
        lessons,
    }
}

pub fn instance_strategy() -> impl Strategy<Value = IdInstance> {
    pool().prop_map(|p| random_instance(&mut Draws::new(p)))
}

// ---------------------------------------------------------------------------
// segmentation

/// Every way to cut `word` into members of `taught`, by trying all
/// `2^(len-1)` cut sets.
pub fn all_segmentations(word: &str, taught: &[String]) -> Vec<Vec<String>> {
    let chars: Vec<char> = word.chars().collect();
    let n = chars.len();
    if n == 0 {
        return Vec::new();
    }
    let set: BTreeSet<&str> = taught.iter().map(String::as_str).collect();
    let mut out = Vec::new();
    for cuts in 0u32..(1 << (n - 1)) {
        let mut pieces = Vec::new();
        let mut start = 0;
        for i in 1..=n {
            if i == n || cuts & (1 << (i - 1)) != 0 {
                pieces.push(chars[start..i].iter().collect::<String>());
                start = i;
            }
        }
        if pieces.iter().all(|p| set.contains(p.as_str())) {
            out.push(pieces);
        }
    }
    out
}

const SYLLABLES: &[&str] = &["न", "म", "र", "ा", "ि", "a", "b", "c"];

/// A (word, taught) pair: words up to 12 codepoints, up to 8 facts of 1 to
/// 3 codepoints. About half the words are built from taught facts.
pub fn segmentation_case() -> impl Strategy<Value = (String, Vec<String>)> {
    pool().prop_map(|p| {
        let mut d = Draws::new(p);
        let alphabet = &SYLLABLES[..2 + d.below(SYLLABLES.len() - 1)];
        let mut taught: Vec<String> = Vec::new();
        for _ in 0..1 + d.below(8) {
            let f: String = (0..1 + d.below(3)).map(|_| *d.pick(alphabet)).collect();
            if !taught.contains(&f) {
                taught.push(f);
            }
        }
        let mut word = String::new();
        if d.chance(50) {
            while word.chars().count() < 12 {
                let f = d.pick(&taught).clone();
                if word.chars().count() + f.chars().count() > 12 {
                    break;
                }
                word.push_str(&f);
                if d.chance(30) {
                    break;
                }
            }
        }
        if word.is_empty() {
            word = (0..1 + d.below(12)).map(|_| *d.pick(alphabet)).collect();
        }
        (word, taught)
    })
}
