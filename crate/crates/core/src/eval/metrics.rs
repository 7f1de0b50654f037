use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::model::{Kitchen, MissingMotionRate, MotionProfile, NodeKey, TaskTree};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TreeMetrics {
    pub unit_count: usize,
    /// Product of motion success rates over all steps; 1 for an empty tree.
    pub success_product: f64,
    /// Weakest motion in the tree; 1 for an empty tree.
    pub success_min: f64,
    pub max_chain_depth: usize,
    /// Distinct inputs taken straight from the kitchen.
    pub leaf_count: usize,
}

/// Longest chain of units in the tree. An input supplied by the kitchen adds
/// nothing; otherwise it hangs off the earliest earlier step producing it.
pub fn max_chain_depth(tree: &TaskTree, kitchen: &Kitchen) -> usize {
    let mut chain_of: HashMap<NodeKey, usize> = HashMap::new();
    let mut deepest = 0;
    for step in &tree.steps {
        let below = step
            .inputs()
            .iter()
            .map(|input| {
                let key = input.key();
                if kitchen.satisfies(&key) {
                    0
                } else {
                    chain_of.get(&key).copied().unwrap_or(0)
                }
            })
            .max()
            .unwrap_or(0);
        let chain = below + 1;
        deepest = deepest.max(chain);
        for output in step.outputs() {
            let key = output.key();
            if !kitchen.satisfies(&key) {
                chain_of.entry(key).or_insert(chain);
            }
        }
    }
    deepest
}

pub fn tree_metrics(
    tree: &TaskTree,
    profile: &MotionProfile,
    kitchen: &Kitchen,
    strict: bool,
) -> Result<TreeMetrics, MissingMotionRate> {
    let mut success_product = 1.0;
    let mut success_min: f64 = 1.0;
    for step in &tree.steps {
        let rate = profile.rate_for(step.motion().label(), strict)?;
        success_product *= rate;
        success_min = success_min.min(rate);
    }

    let mut produced = BTreeSet::new();
    let mut leaves = BTreeSet::new();
    for step in &tree.steps {
        for input in step.inputs() {
            let key = input.key();
            if !produced.contains(&key) {
                leaves.insert(key);
            }
        }
        produced.extend(step.outputs().iter().map(|o| o.key()));
    }

    Ok(TreeMetrics {
        unit_count: tree.steps.len(),
        success_product,
        success_min,
        max_chain_depth: max_chain_depth(tree, kitchen),
        leaf_count: leaves.len(),
    })
}
