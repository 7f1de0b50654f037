use crate::model::{FunctionalUnit, Kitchen, Motion, MotionProfile, ObjectNode, StateDescriptor};

use super::{ParseDiagnostic, ParseError};

enum Line {
    Blank,
    Separator,
    Object(ObjectNode),
    State(StateDescriptor),
    Motion(Motion),
}

fn classify(raw: &str) -> Result<Line, String> {
    let trimmed = raw.trim();
    if trimmed.is_empty() {
        return Ok(Line::Blank);
    }
    if trimmed == "//" {
        return Ok(Line::Separator);
    }

    let mut fields: Vec<&str> = raw.split('\t').map(str::trim).collect();
    while fields.len() > 1 && fields.last().is_some_and(|f| f.is_empty()) {
        fields.pop();
    }

    match fields[0] {
        "O" => parse_object(&fields[1..]).map(Line::Object),
        "S" => parse_state(&fields[1..]).map(Line::State),
        "M" => {
            let label = fields.get(1).copied().unwrap_or("");
            let extras = fields.iter().skip(2).map(|f| f.to_string()).collect();
            Motion::new(label)
                .map(|m| Line::Motion(m.with_extras(extras)))
                .map_err(|e| e.to_string())
        }
        other => {
            let shown: String = other.chars().take(24).collect();
            Err(format!(
                "unrecognized line `{shown}`: expected an O, S or M line or `//`"
            ))
        }
    }
}

fn parse_object(fields: &[&str]) -> Result<ObjectNode, String> {
    let (name, flag) = match fields {
        [name, flag] => (*name, *flag),
        [_] | [] => return Err("object line needs a name and a 0/1 motion flag".into()),
        _ => return Err("object line has extra fields after the motion flag".into()),
    };
    let in_motion = match flag {
        "0" => false,
        "1" => true,
        other => return Err(format!("motion flag must be 0 or 1, found `{other}`")),
    };
    ObjectNode::new(name)
        .map(|n| n.with_in_motion(in_motion))
        .map_err(|e| e.to_string())
}

fn parse_state(fields: &[&str]) -> Result<StateDescriptor, String> {
    match fields {
        [] => Err("state line has no label".into()),
        [label] => StateDescriptor::new(label).map_err(|e| e.to_string()),
        [label, payload] => {
            if let Some(inner) = payload.strip_prefix('[').and_then(|p| p.strip_suffix(']')) {
                StateDescriptor::in_container(label, inner).map_err(|e| e.to_string())
            } else if let Some(inner) = payload.strip_prefix('{').and_then(|p| p.strip_suffix('}'))
            {
                if crate::model::normalize(label) != "contains" {
                    return Err(format!(
                        "a {{...}} contents list is only valid on a `contains` state, found `{label}`"
                    ));
                }
                StateDescriptor::with_contents(label, inner.split(','))
                    .map_err(|e| format!("malformed contents list `{payload}`: {e}"))
            } else {
                Err(format!(
                    "malformed state payload `{payload}`: expected [container] or {{item, ...}}"
                ))
            }
        }
        _ => Err("state line has extra fields after the payload".into()),
    }
}

#[derive(Default)]
struct Block {
    start: usize,
    motion_line: usize,
    inputs: Vec<ObjectNode>,
    motion: Option<Motion>,
    outputs: Vec<ObjectNode>,
    pending: Option<ObjectNode>,
    failed: bool,
}

impl Block {
    fn touched(&self) -> bool {
        self.start != 0
    }

    fn flush(&mut self) {
        if let Some(node) = self.pending.take() {
            if self.motion.is_some() {
                self.outputs.push(node);
            } else {
                self.inputs.push(node);
            }
        }
    }
}

struct FoonParser {
    units: Vec<FunctionalUnit>,
    diagnostics: Vec<ParseDiagnostic>,
    block: Block,
    blocks_seen: usize,
}

impl FoonParser {
    fn fail(&mut self, line: usize, message: impl Into<String>) {
        self.diagnostics.push(ParseDiagnostic::error(line, message));
        self.block.failed = true;
    }

    fn line(&mut self, number: usize, raw: &str) {
        let line = match classify(raw) {
            Ok(line) => line,
            Err(message) => {
                if !self.block.touched() {
                    self.block.start = number;
                }
                self.fail(number, message);
                return;
            }
        };
        if let Line::Separator = line {
            self.finish_block();
            return;
        }
        if self.block.failed || matches!(line, Line::Blank) {
            return;
        }
        if !self.block.touched() {
            self.block.start = number;
        }
        match line {
            Line::Object(node) => {
                self.block.flush();
                self.block.pending = Some(node);
            }
            Line::State(state) => match self.block.pending.as_mut() {
                Some(node) => node.add_state(state),
                None => self.fail(number, "state line without a preceding object line"),
            },
            Line::Motion(motion) => {
                self.block.flush();
                if self.block.motion.is_some() {
                    self.fail(
                        number,
                        "second motion line in one unit (missing `//` separator?)",
                    );
                } else if self.block.inputs.is_empty() {
                    self.fail(number, "motion line with no input objects before it");
                } else {
                    self.block.motion = Some(motion);
                    self.block.motion_line = number;
                }
            }
            Line::Blank | Line::Separator => unreachable!(),
        }
    }

    fn finish_block(&mut self) {
        let mut block = std::mem::take(&mut self.block);
        if !block.touched() {
            return;
        }
        let ordinal = self.blocks_seen;
        self.blocks_seen += 1;
        if block.failed {
            return;
        }
        block.flush();
        let Some(motion) = block.motion else {
            self.diagnostics.push(ParseDiagnostic::error(
                block.start,
                "functional unit has no motion (M) line",
            ));
            return;
        };
        if block.outputs.is_empty() {
            self.diagnostics.push(ParseDiagnostic::error(
                block.motion_line,
                "functional unit has no output objects after its motion line",
            ));
            return;
        }
        match FunctionalUnit::new(block.inputs, motion, block.outputs, ordinal) {
            Ok(unit) => {
                for key in unit.untransformed_keys() {
                    self.diagnostics.push(ParseDiagnostic::warning(
                        block.motion_line,
                        format!("output `{key}` is identical to an input; the unit does not transform it"),
                    ));
                }
                self.units.push(unit);
            }
            Err(e) => self
                .diagnostics
                .push(ParseDiagnostic::error(block.start, e.to_string())),
        }
    }
}

/// Parses a FOON universe. Never panics: malformed input surfaces as error
/// diagnostics and the offending unit is skipped up to the next `//`.
pub fn parse_foon(text: &str) -> (Vec<FunctionalUnit>, Vec<ParseDiagnostic>) {
    let mut parser = FoonParser {
        units: Vec::new(),
        diagnostics: Vec::new(),
        block: Block::default(),
        blocks_seen: 0,
    };
    for (i, raw) in text.lines().enumerate() {
        parser.line(i + 1, raw);
    }
    parser.finish_block();
    if parser.units.is_empty() && !parser.diagnostics.iter().any(ParseDiagnostic::is_error) {
        parser.diagnostics.push(ParseDiagnostic::error(
            1,
            "empty universe: no functional units found",
        ));
    }
    (parser.units, parser.diagnostics)
}

/// Like [`parse_foon`] but fails when any error diagnostic was produced.
/// On success the warnings are returned alongside the units.
pub fn parse_foon_units(
    text: &str,
) -> Result<(Vec<FunctionalUnit>, Vec<ParseDiagnostic>), ParseError> {
    let (units, diagnostics) = parse_foon(text);
    if diagnostics.iter().any(ParseDiagnostic::is_error) {
        Err(ParseError { diagnostics })
    } else {
        Ok((units, diagnostics))
    }
}

// Kitchen and goal files: O/S blocks ended by a blank line, `//` or the next O.
fn parse_object_blocks(text: &str) -> Result<Vec<(usize, ObjectNode)>, ParseError> {
    let mut nodes = Vec::new();
    let mut pending: Option<(usize, ObjectNode)> = None;
    let mut diagnostics = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let number = i + 1;
        match classify(raw) {
            Ok(Line::Blank | Line::Separator) => nodes.extend(pending.take()),
            Ok(Line::Object(node)) => {
                nodes.extend(pending.take());
                pending = Some((number, node));
            }
            Ok(Line::State(state)) => match pending.as_mut() {
                Some((_, node)) => node.add_state(state),
                None => diagnostics.push(ParseDiagnostic::error(
                    number,
                    "state line without a preceding object line",
                )),
            },
            Ok(Line::Motion(_)) => diagnostics.push(ParseDiagnostic::error(
                number,
                "motion lines are not allowed in kitchen or goal files",
            )),
            Err(message) => diagnostics.push(ParseDiagnostic::error(number, message)),
        }
    }
    nodes.extend(pending);
    if diagnostics.is_empty() {
        Ok(nodes)
    } else {
        Err(ParseError { diagnostics })
    }
}

pub fn parse_kitchen(text: &str) -> Result<Kitchen, ParseError> {
    let nodes = parse_object_blocks(text)?;
    Ok(Kitchen::from_items(nodes.into_iter().map(|(_, n)| n)))
}

/// Parses a goal file, which must hold exactly one object block.
pub fn parse_goal(text: &str) -> Result<ObjectNode, ParseError> {
    let mut nodes = parse_object_blocks(text)?;
    match nodes.len() {
        1 => Ok(nodes.remove(0).1),
        0 => Err(ParseError {
            diagnostics: vec![ParseDiagnostic::error(
                1,
                "goal file contains no object block",
            )],
        }),
        n => Err(ParseError {
            diagnostics: vec![ParseDiagnostic::error(
                nodes[1].0,
                format!("goal file must contain exactly one object block, found {n}"),
            )],
        }),
    }
}

/// Parses `<label>\t<rate>` lines; blank lines and `#` comments are skipped.
pub fn parse_motion_profile(text: &str) -> Result<MotionProfile, ParseError> {
    let mut profile = MotionProfile::new();
    let mut diagnostics = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let number = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
        let [label, rate] = fields[..] else {
            diagnostics.push(ParseDiagnostic::error(
                number,
                "expected `<motion>\\t<rate>`",
            ));
            continue;
        };
        if label.is_empty() {
            diagnostics.push(ParseDiagnostic::error(number, "motion label is empty"));
            continue;
        }
        let rate: f64 = match rate.parse() {
            Ok(r) => r,
            Err(_) => {
                diagnostics.push(ParseDiagnostic::error(
                    number,
                    format!("success rate `{rate}` is not a number"),
                ));
                continue;
            }
        };
        if let Err(e) = profile.insert(label, rate) {
            diagnostics.push(ParseDiagnostic::error(number, e.to_string()));
        }
    }
    if diagnostics.is_empty() {
        Ok(profile)
    } else {
        Err(ParseError { diagnostics })
    }
}
