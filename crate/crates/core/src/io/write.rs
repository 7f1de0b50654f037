use std::fmt::Write as _;

use crate::model::{FunctionalUnit, ObjectNode, Relation, TaskTree};

fn write_object(out: &mut String, node: &ObjectNode) {
    let _ = writeln!(out, "O\t{}\t{}", node.name(), u8::from(node.in_motion()));
    for state in node.states() {
        match state.relation() {
            None => {
                let _ = writeln!(out, "S\t{}", state.label());
            }
            Some(Relation::Container(c)) => {
                let _ = writeln!(out, "S\t{}\t[{}]", state.label(), c);
            }
            Some(Relation::Contents(items)) => {
                let joined: Vec<&str> = items.iter().map(String::as_str).collect();
                let _ = writeln!(out, "S\t{}\t{{{}}}", state.label(), joined.join(","));
            }
        }
    }
}

/// Writes units in the tab-delimited FOON format, each block closed by `//`.
pub fn serialize_foon<'a, I>(units: I) -> String
where
    I: IntoIterator<Item = &'a FunctionalUnit>,
{
    let mut out = String::new();
    for unit in units {
        for node in unit.inputs() {
            write_object(&mut out, node);
        }
        out.push_str("M\t");
        out.push_str(unit.motion().label());
        for extra in unit.motion().extras() {
            out.push('\t');
            out.push_str(extra);
        }
        out.push('\n');
        for node in unit.outputs() {
            write_object(&mut out, node);
        }
        out.push_str("//\n");
    }
    out
}

pub fn serialize_tree(tree: &TaskTree) -> String {
    serialize_foon(&tree.steps)
}
