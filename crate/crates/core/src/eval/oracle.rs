//! Exhaustive enumeration of task trees for small universes.
//!
//! Written as a plain recursive all-solutions generator, separate from the
//! iterative search engine, so it can serve as a reference for it. It follows
//! the same expansion rules: kitchen objects and outputs of finished steps are
//! never produced again, a unit may not need a node that is still being
//! resolved above it, and a unit whose own inputs already yielded the node it
//! was picked for is redundant.

use std::collections::{BTreeSet, HashSet};

use thiserror::Error;

use crate::model::{CanonicalUnit, FoonGraph, Kitchen, NodeKey, ObjectNode, TaskTree};

use super::metrics::max_chain_depth;

pub const DEFAULT_ORACLE_CAP: usize = 64;
const MAX_PARTIALS: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("universe has {units} units, above the oracle cap of {cap}")]
    CapExceeded { units: usize, cap: usize },
    #[error("more than {0} partial derivations; universe too large to enumerate")]
    TooManyPartials(usize),
}

#[derive(Clone, Default)]
struct Derivation {
    steps: Vec<usize>,
    produced: HashSet<NodeKey>,
}

struct Enumerator<'a> {
    graph: &'a FoonGraph,
    kitchen: &'a Kitchen,
    depth_cap: usize,
    ancestors: Vec<NodeKey>,
    in_progress: Vec<usize>,
}

impl Enumerator<'_> {
    fn derive(
        &mut self,
        key: &NodeKey,
        depth: usize,
        state: Derivation,
    ) -> Result<Vec<Derivation>, OracleError> {
        if self.kitchen.satisfies(key) || state.produced.contains(key) {
            return Ok(vec![state]);
        }
        if self.ancestors.contains(key) || depth >= self.depth_cap {
            return Ok(vec![]);
        }

        let mut results = Vec::new();
        for &unit in self.graph.producers_of(key) {
            let inputs: Vec<NodeKey> = self
                .graph
                .unit(unit)
                .inputs()
                .iter()
                .map(ObjectNode::key)
                .collect();
            if self.in_progress.contains(&unit)
                || inputs
                    .iter()
                    .any(|k| k == key || self.ancestors.contains(k))
            {
                continue;
            }

            self.ancestors.push(key.clone());
            self.in_progress.push(unit);
            let mut partials = vec![state.clone()];
            for input in &inputs {
                let mut next = Vec::new();
                for partial in partials {
                    next.extend(self.derive(input, depth + 1, partial)?);
                    if next.len() > MAX_PARTIALS {
                        return Err(OracleError::TooManyPartials(MAX_PARTIALS));
                    }
                }
                partials = next;
            }
            self.ancestors.pop();
            self.in_progress.pop();

            for mut partial in partials {
                if partial.produced.contains(key) {
                    continue;
                }
                partial.steps.push(unit);
                for out in self.graph.unit(unit).outputs() {
                    let out = out.key();
                    if !self.kitchen.satisfies(&out) {
                        partial.produced.insert(out);
                    }
                }
                results.push(partial);
            }
        }
        Ok(results)
    }
}

/// Every distinct task tree (as a set of units) with chain depth at most
/// `depth_cap`, refusing universes above [`DEFAULT_ORACLE_CAP`] units.
pub fn enumerate_all_task_trees(
    graph: &FoonGraph,
    goal: &ObjectNode,
    kitchen: &Kitchen,
    depth_cap: usize,
) -> Result<Vec<TaskTree>, OracleError> {
    enumerate_task_trees_capped(graph, goal, kitchen, depth_cap, DEFAULT_ORACLE_CAP)
}

pub fn enumerate_task_trees_capped(
    graph: &FoonGraph,
    goal: &ObjectNode,
    kitchen: &Kitchen,
    depth_cap: usize,
    unit_cap: usize,
) -> Result<Vec<TaskTree>, OracleError> {
    if graph.len() > unit_cap {
        return Err(OracleError::CapExceeded {
            units: graph.len(),
            cap: unit_cap,
        });
    }
    let goal_key = goal.key();
    let mut enumerator = Enumerator {
        graph,
        kitchen,
        depth_cap,
        ancestors: Vec::new(),
        in_progress: Vec::new(),
    };
    let derivations = enumerator.derive(&goal_key, 0, Derivation::default())?;

    let mut seen: HashSet<BTreeSet<CanonicalUnit>> = HashSet::new();
    let mut trees = Vec::new();
    for derivation in derivations {
        let tree = TaskTree {
            steps: derivation
                .steps
                .iter()
                .map(|&u| graph.unit(u).clone())
                .collect(),
            goal_key: goal_key.clone(),
            algorithm: "oracle".to_string(),
        };
        if max_chain_depth(&tree, kitchen) > depth_cap {
            continue;
        }
        if seen.insert(tree.unit_set()) {
            trees.push(tree);
        }
    }
    Ok(trees)
}
