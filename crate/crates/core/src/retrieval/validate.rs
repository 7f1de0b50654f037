use std::collections::HashSet;

use serde::Serialize;

use crate::model::{FoonGraph, Kitchen, TaskTree};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeValidation {
    pub valid: bool,
    pub diagnostics: Vec<String>,
}

/// Checks that a tree is executable from the kitchen and ends in its goal:
/// every step belongs to the graph and appears once, every input is in the
/// kitchen or produced by an earlier step, and the final step outputs the goal
/// (or the tree is empty and the kitchen already holds the goal).
pub fn validate_tree(tree: &TaskTree, graph: &FoonGraph, kitchen: &Kitchen) -> TreeValidation {
    let mut diagnostics = Vec::new();
    let mut seen = HashSet::new();
    let mut produced = HashSet::new();

    for (i, step) in tree.steps.iter().enumerate() {
        let motion = step.motion().label();
        if graph.position_of(step).is_none() {
            diagnostics.push(format!(
                "step {i} ({motion}) is not a functional unit of the graph"
            ));
        }
        if !seen.insert(step.canonical()) {
            diagnostics.push(format!("step {i} ({motion}) repeats an earlier step"));
        }
        for input in step.inputs() {
            let key = input.key();
            if !kitchen.satisfies(&key) && !produced.contains(&key) {
                diagnostics.push(format!(
                    "step {i} ({motion}): input `{key}` is neither in the kitchen nor produced by an earlier step"
                ));
            }
        }
        produced.extend(step.outputs().iter().map(|o| o.key()));
    }

    match tree.steps.last() {
        None if !kitchen.satisfies(&tree.goal_key) => diagnostics.push(format!(
            "empty tree but goal `{}` is not in the kitchen",
            tree.goal_key
        )),
        Some(last) if !last.outputs().iter().any(|o| o.key() == tree.goal_key) => {
            diagnostics.push(format!(
                "final step ({}) does not produce goal `{}`",
                last.motion().label(),
                tree.goal_key
            ))
        }
        _ => {}
    }

    TreeValidation {
        valid: diagnostics.is_empty(),
        diagnostics,
    }
}
