use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::model::{FoonGraph, FunctionalUnit, NodeKey, ObjectNode, TaskTree};

const OBJECT_COLOR: &str = "green";
const MOTION_COLOR: &str = "red";
const GOAL_COLOR: &str = "purple";

fn quote(text: &str) -> String {
    let mut out = String::with_capacity(text.len() + 2);
    out.push('"');
    for c in text.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            _ => out.push(c),
        }
    }
    out.push('"');
    out
}

fn object_label(node: &ObjectNode) -> String {
    let states = node.state_summary();
    if states.is_empty() {
        node.name().to_string()
    } else {
        format!("{}\n{}", node.name(), states)
    }
}

/// Renders units as a Graphviz digraph. Objects are green ellipses, motions
/// red boxes and the goal object, when given, is filled purple. Each object
/// key becomes exactly one node, so chained units share their middle node.
pub fn export_dot<'a, I>(units: I, goal: Option<&NodeKey>) -> String
where
    I: IntoIterator<Item = &'a FunctionalUnit>,
{
    let mut ids: BTreeMap<NodeKey, usize> = BTreeMap::new();
    let mut nodes = String::new();
    let mut edges = String::new();
    let mut object_id = |node: &ObjectNode, nodes: &mut String| -> String {
        let key = node.key();
        if let Some(id) = ids.get(&key) {
            return format!("o{id}");
        }
        let id = ids.len();
        ids.insert(key.clone(), id);
        let color = if goal == Some(&key) {
            GOAL_COLOR
        } else {
            OBJECT_COLOR
        };
        let _ = writeln!(
            nodes,
            "  o{id} [shape=ellipse, style=filled, fillcolor={color}, label={}];",
            quote(&object_label(node))
        );
        format!("o{id}")
    };

    for (m, unit) in units.into_iter().enumerate() {
        let _ = writeln!(
            nodes,
            "  m{m} [shape=box, style=filled, fillcolor={MOTION_COLOR}, label={}];",
            quote(unit.motion().label())
        );
        for input in unit.inputs() {
            let id = object_id(input, &mut nodes);
            let _ = writeln!(edges, "  {id} -> m{m};");
        }
        for output in unit.outputs() {
            let id = object_id(output, &mut nodes);
            let _ = writeln!(edges, "  m{m} -> {id};");
        }
    }

    let mut out = String::from("digraph foon {\n");
    out.push_str(&nodes);
    out.push_str(&edges);
    out.push_str("}\n");
    out
}

pub fn export_tree_dot(tree: &TaskTree) -> String {
    export_dot(&tree.steps, Some(&tree.goal_key))
}

pub fn export_graph_dot(graph: &FoonGraph, goal: Option<&NodeKey>) -> String {
    export_dot(graph.units(), goal)
}
