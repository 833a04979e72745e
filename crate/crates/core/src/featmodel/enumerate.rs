//! Exhaustive enumeration of valid feature selections.
//!
//! The search walks features in pre-order and only proposes counts that keep
//! the tree rules (R1–R6) satisfiable, so every leaf of the search is a
//! tree-valid selection. Cross-tree constraints prune as soon as both ends
//! are decided. Clone multiplicities are capped at `clone_cap`.

use std::collections::BTreeMap;

use thiserror::Error;

use super::config::Configuration;
use super::model::*;

/// Upper bound on tree-valid candidates the enumerator will visit.
pub const SEARCH_LIMIT: u128 = 1_000_000;
pub const DEFAULT_CLONE_CAP: u32 = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerateError {
    #[error(
        "SEARCH_SPACE_TOO_LARGE: {candidates} candidate selections exceed the limit of {limit}"
    )]
    SearchSpaceTooLarge { candidates: u128, limit: u128 },
}

impl EnumerateError {
    pub fn code(&self) -> &'static str {
        "SEARCH_SPACE_TOO_LARGE"
    }
}

struct Plan<'a> {
    features: Vec<FeatureRef<'a>>,
    /// Selectable counts (all > 0) for each feature under the cap.
    counts: Vec<Vec<u32>>,
    /// Siblings in the same alternative/or group, in order.
    group_members: Vec<Vec<usize>>,
    /// Constraints indexed by the later of their two endpoints.
    constraints_at: Vec<Vec<(ConstraintKind, usize, usize)>>,
}

impl<'a> Plan<'a> {
    fn new(model: &'a FeatureModel, clone_cap: u32) -> Self {
        let features = model.features();
        let cap = clone_cap.max(1);
        let counts = features
            .iter()
            .map(|fr| {
                let card = fr.feature.cardinality;
                let lo = card.min.max(1);
                let hi = card.max.min(cap).max(lo);
                (lo..=hi).collect()
            })
            .collect();
        let mut group_members = vec![Vec::new(); features.len()];
        for i in 0..features.len() {
            if matches!(features[i].group, GroupKind::Alternative | GroupKind::Or) {
                group_members[i] = (0..features.len())
                    .filter(|&j| {
                        features[j].parent == features[i].parent
                            && features[j].group_index == features[i].group_index
                    })
                    .collect();
            }
        }
        let index = |name: &str| features.iter().position(|f| f.feature.name == name);
        let mut constraints_at = vec![Vec::new(); features.len()];
        for c in &model.constraints {
            if let (Some(l), Some(r)) = (index(&c.lhs), index(&c.rhs)) {
                constraints_at[l.max(r)].push((c.kind, l, r));
            }
        }
        Plan {
            features,
            counts,
            group_members,
            constraints_at,
        }
    }

    /// Number of tree-valid selections under the cap, ignoring cross-tree
    /// constraints. Saturates instead of overflowing.
    fn tree_space(&self) -> u128 {
        fn sub(f: &Feature, cap: &dyn Fn(&Feature) -> u128) -> u128 {
            let mut total: u128 = 1;
            for g in &f.groups {
                let n = |c: &Feature| cap(c).saturating_mul(sub(c, cap));
                let factor = match g.kind {
                    GroupKind::And => g.children.iter().fold(1u128, |acc, c| {
                        let k = match c.variability {
                            Variability::Mandatory => n(c),
                            Variability::Optional => n(c).saturating_add(1),
                        };
                        acc.saturating_mul(k)
                    }),
                    GroupKind::Alternative => g
                        .children
                        .iter()
                        .fold(0u128, |acc, c| acc.saturating_add(n(c))),
                    GroupKind::Or => g
                        .children
                        .iter()
                        .fold(1u128, |acc, c| acc.saturating_mul(n(c).saturating_add(1)))
                        .saturating_sub(1),
                };
                total = total.saturating_mul(factor);
            }
            total
        }
        let lookup = |f: &Feature| {
            let i = self
                .features
                .iter()
                .position(|fr| std::ptr::eq(fr.feature, f))
                .unwrap();
            self.counts[i].len() as u128
        };
        let root = self.features[0].feature;
        lookup(root).saturating_mul(sub(root, &lookup))
    }

    fn options(&self, i: usize, chosen: &[u32]) -> Vec<u32> {
        let fr = &self.features[i];
        let Some(parent) = fr.parent else {
            return self.counts[i].clone();
        };
        if chosen[parent] == 0 {
            return vec![0];
        }
        let allow_zero = match fr.group {
            GroupKind::And => fr.feature.variability == Variability::Optional,
            GroupKind::Alternative | GroupKind::Or => {
                let members = &self.group_members[i];
                let earlier = members.iter().take_while(|&&j| j != i);
                let any_earlier = earlier.clone().any(|&j| chosen[j] > 0);
                let is_last = members.last() == Some(&i);
                if fr.group == GroupKind::Alternative && any_earlier {
                    return vec![0];
                }
                !(is_last && !any_earlier)
            }
        };
        let mut out = Vec::with_capacity(self.counts[i].len() + 1);
        if allow_zero {
            out.push(0);
        }
        out.extend_from_slice(&self.counts[i]);
        out
    }

    fn constraints_hold(&self, i: usize, chosen: &[u32]) -> bool {
        self.constraints_at[i]
            .iter()
            .all(|&(kind, l, r)| match kind {
                ConstraintKind::Requires => chosen[l] == 0 || chosen[r] > 0,
                ConstraintKind::Excludes => chosen[l] == 0 || chosen[r] == 0,
            })
    }

    fn search(&self, i: usize, chosen: &mut Vec<u32>, visit: &mut dyn FnMut(&[u32])) {
        if i == self.features.len() {
            visit(chosen);
            return;
        }
        for count in self.options(i, chosen) {
            chosen[i] = count;
            if self.constraints_hold(i, chosen) {
                self.search(i + 1, chosen, visit);
            }
        }
        chosen[i] = 0;
    }

    fn run(&self, visit: &mut dyn FnMut(&[u32])) -> Result<(), EnumerateError> {
        let candidates = self.tree_space();
        if candidates > SEARCH_LIMIT {
            return Err(EnumerateError::SearchSpaceTooLarge {
                candidates,
                limit: SEARCH_LIMIT,
            });
        }
        let mut chosen = vec![0; self.features.len()];
        self.search(0, &mut chosen, visit);
        Ok(())
    }
}

/// Every selection satisfying R1–R7, depth-first with children in
/// declaration order. Attribute assignments are left empty.
pub fn enumerate_configurations(
    model: &FeatureModel,
    clone_cap: u32,
) -> Result<Vec<Configuration>, EnumerateError> {
    let plan = Plan::new(model, clone_cap);
    let mut out = Vec::new();
    plan.run(&mut |chosen| {
        let selections: BTreeMap<String, u32> = plan
            .features
            .iter()
            .zip(chosen)
            .filter(|(_, &c)| c > 0)
            .map(|(f, &c)| (f.feature.name.clone(), c))
            .collect();
        out.push(Configuration {
            model: model.name.clone(),
            selections,
            assignments: Vec::new(),
        });
    })?;
    Ok(out)
}

pub fn count_configurations(model: &FeatureModel, clone_cap: u32) -> Result<u64, EnumerateError> {
    let plan = Plan::new(model, clone_cap);
    let mut n = 0u64;
    plan.run(&mut |_| n += 1)?;
    Ok(n)
}
