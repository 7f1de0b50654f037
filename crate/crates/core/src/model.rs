//! Domain types: object nodes, motions, functional units, the merged graph,
//! kitchens, motion profiles and task trees.
//!
//! Every piece of text that takes part in node identity is normalized on
//! construction (trimmed, lowercased, inner whitespace collapsed), so two
//! nodes compare equal exactly when their canonical keys do.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

/// Errors raised when constructing domain values from raw text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("object name is empty")]
    EmptyName,
    #[error("state label is empty")]
    EmptyLabel,
    #[error("motion label is empty")]
    EmptyMotion,
    #[error("container name is empty")]
    EmptyContainer,
    #[error("contents list is empty")]
    EmptyContents,
    #[error("contents entry `{0}` is empty or contains a comma")]
    BadContentsEntry(String),
    #[error("functional unit has no input objects")]
    NoInputs,
    #[error("functional unit has no output objects")]
    NoOutputs,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("empty universe: no functional units to build a graph from")]
    EmptyUniverse,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RateError {
    #[error("success rate {rate} for motion `{label}` is outside [0, 1]")]
    OutOfRange { label: String, rate: f64 },
    #[error("motion `{label}` listed with conflicting rates {first} and {second}")]
    Conflict {
        label: String,
        first: f64,
        second: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("no success rate known for motion `{0}`")]
pub struct MissingMotionRate(pub String);

/// Lowercases, trims and collapses inner runs of whitespace.
pub fn normalize(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for word in text.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        out.extend(word.chars().flat_map(char::to_lowercase));
    }
    out
}

// Characters with structural meaning inside a canonical key.
fn push_escaped(out: &mut String, text: &str) {
    for c in text.chars() {
        if matches!(c, '\\' | '|' | '+' | '[' | ']' | '{' | '}' | ',') {
            out.push('\\');
        }
        out.push(c);
    }
}

/// Containment payload carried by a state.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Relation {
    /// `in [bowl]`
    Container(String),
    /// `contains {ice, water}`
    Contents(BTreeSet<String>),
}

/// One state of an object, e.g. `whole`, `in [chopping board]` or
/// `contains {chopped onion}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StateDescriptor {
    label: String,
    relation: Option<Relation>,
}

impl StateDescriptor {
    pub fn new(label: &str) -> Result<Self, ModelError> {
        let label = normalize(label);
        if label.is_empty() {
            return Err(ModelError::EmptyLabel);
        }
        Ok(Self {
            label,
            relation: None,
        })
    }

    pub fn in_container(label: &str, container: &str) -> Result<Self, ModelError> {
        let mut state = Self::new(label)?;
        let container = normalize(container);
        if container.is_empty() {
            return Err(ModelError::EmptyContainer);
        }
        state.relation = Some(Relation::Container(container));
        Ok(state)
    }

    pub fn with_contents<I, S>(label: &str, contents: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut state = Self::new(label)?;
        let mut set = BTreeSet::new();
        for entry in contents {
            let entry = normalize(entry.as_ref());
            if entry.is_empty() || entry.contains(',') {
                return Err(ModelError::BadContentsEntry(entry));
            }
            set.insert(entry);
        }
        if set.is_empty() {
            return Err(ModelError::EmptyContents);
        }
        state.relation = Some(Relation::Contents(set));
        Ok(state)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn relation(&self) -> Option<&Relation> {
        self.relation.as_ref()
    }

    /// The escaped form used inside canonical node keys.
    pub fn key_fragment(&self) -> String {
        let mut out = String::new();
        push_escaped(&mut out, &self.label);
        match &self.relation {
            None => {}
            Some(Relation::Container(c)) => {
                out.push('[');
                push_escaped(&mut out, c);
                out.push(']');
            }
            Some(Relation::Contents(items)) => {
                out.push('{');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    push_escaped(&mut out, item);
                }
                out.push('}');
            }
        }
        out
    }
}

// Ordered by serialized form so state sets iterate canonically.
impl Ord for StateDescriptor {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key_fragment().cmp(&other.key_fragment())
    }
}

impl PartialOrd for StateDescriptor {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for StateDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)?;
        match &self.relation {
            None => Ok(()),
            Some(Relation::Container(c)) => write!(f, " [{c}]"),
            Some(Relation::Contents(items)) => {
                let joined: Vec<&str> = items.iter().map(String::as_str).collect();
                write!(f, " {{{}}}", joined.join(", "))
            }
        }
    }
}

/// Canonical identity of an object node: normalized name plus the sorted
/// state set. The in-motion flag is not part of it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeKey(String);

impl NodeKey {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NodeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Serialize for NodeKey {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ObjectNode {
    name: String,
    states: BTreeSet<StateDescriptor>,
    in_motion: bool,
}

impl ObjectNode {
    pub fn new(name: &str) -> Result<Self, ModelError> {
        let name = normalize(name);
        if name.is_empty() {
            return Err(ModelError::EmptyName);
        }
        Ok(Self {
            name,
            states: BTreeSet::new(),
            in_motion: false,
        })
    }

    pub fn with_state(mut self, state: StateDescriptor) -> Self {
        self.states.insert(state);
        self
    }

    pub fn with_in_motion(mut self, in_motion: bool) -> Self {
        self.in_motion = in_motion;
        self
    }

    pub fn add_state(&mut self, state: StateDescriptor) {
        self.states.insert(state);
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// States in canonical order.
    pub fn states(&self) -> impl Iterator<Item = &StateDescriptor> {
        self.states.iter()
    }

    pub fn in_motion(&self) -> bool {
        self.in_motion
    }

    pub fn key(&self) -> NodeKey {
        canonical_node_key(self)
    }

    /// Human-readable state summary, e.g. `chopped, in [chopping board]`.
    pub fn state_summary(&self) -> String {
        self.states
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// `onions|chopped+in[chopping board]`; a node without states is just its name.
pub fn canonical_node_key(node: &ObjectNode) -> NodeKey {
    let mut out = String::new();
    push_escaped(&mut out, &node.name);
    for (i, state) in node.states.iter().enumerate() {
        out.push(if i == 0 { '|' } else { '+' });
        out.push_str(&state.key_fragment());
    }
    NodeKey(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Motion {
    label: String,
    extras: Vec<String>,
}

impl Motion {
    pub fn new(label: &str) -> Result<Self, ModelError> {
        let label = normalize(label);
        if label.is_empty() {
            return Err(ModelError::EmptyMotion);
        }
        Ok(Self {
            label,
            extras: Vec::new(),
        })
    }

    /// Trailing fields from the M line (timestamps and the like). Kept for
    /// round trips only.
    pub fn with_extras(mut self, extras: Vec<String>) -> Self {
        self.extras = extras;
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn extras(&self) -> &[String] {
        &self.extras
    }
}

/// Order-insensitive identity of a functional unit. Object blocks are
/// compared by canonical key and in-motion flag; motion extras are ignored.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalUnit {
    inputs: Vec<(NodeKey, bool)>,
    motion: String,
    outputs: Vec<(NodeKey, bool)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionalUnit {
    inputs: Vec<ObjectNode>,
    motion: Motion,
    outputs: Vec<ObjectNode>,
    source_index: usize,
}

impl FunctionalUnit {
    pub fn new(
        inputs: Vec<ObjectNode>,
        motion: Motion,
        outputs: Vec<ObjectNode>,
        source_index: usize,
    ) -> Result<Self, ModelError> {
        if inputs.is_empty() {
            return Err(ModelError::NoInputs);
        }
        if outputs.is_empty() {
            return Err(ModelError::NoOutputs);
        }
        Ok(Self {
            inputs,
            motion,
            outputs,
            source_index,
        })
    }

    pub fn inputs(&self) -> &[ObjectNode] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[ObjectNode] {
        &self.outputs
    }

    pub fn motion(&self) -> &Motion {
        &self.motion
    }

    pub fn source_index(&self) -> usize {
        self.source_index
    }

    pub fn with_source_index(mut self, source_index: usize) -> Self {
        self.source_index = source_index;
        self
    }

    pub fn canonical(&self) -> CanonicalUnit {
        let side = |nodes: &[ObjectNode]| {
            let mut v: Vec<(NodeKey, bool)> =
                nodes.iter().map(|n| (n.key(), n.in_motion())).collect();
            v.sort();
            v
        };
        CanonicalUnit {
            inputs: side(&self.inputs),
            motion: self.motion.label.clone(),
            outputs: side(&self.outputs),
        }
    }

    /// Output keys that also appear as inputs: the unit leaves them unchanged.
    pub fn untransformed_keys(&self) -> Vec<NodeKey> {
        let inputs: BTreeSet<NodeKey> = self.inputs.iter().map(ObjectNode::key).collect();
        let mut keys: Vec<NodeKey> = self
            .outputs
            .iter()
            .map(ObjectNode::key)
            .filter(|k| inputs.contains(k))
            .collect();
        keys.dedup();
        keys
    }
}

/// The merged universe of functional units, indexed by produced node.
#[derive(Debug, Clone)]
pub struct FoonGraph {
    units: Vec<FunctionalUnit>,
    producers: BTreeMap<NodeKey, Vec<usize>>,
    node_catalog: BTreeMap<NodeKey, ObjectNode>,
    positions: HashMap<CanonicalUnit, usize>,
    duplicates_dropped: usize,
}

impl PartialEq for FoonGraph {
    fn eq(&self, other: &Self) -> bool {
        self.units == other.units
            && self.producers == other.producers
            && self.node_catalog == other.node_catalog
    }
}

/// Deduplicates units (first occurrence wins) and indexes producers in
/// source order.
pub fn build_graph<I>(units: I) -> Result<FoonGraph, GraphError>
where
    I: IntoIterator<Item = FunctionalUnit>,
{
    let mut all: Vec<FunctionalUnit> = units.into_iter().collect();
    if all.is_empty() {
        return Err(GraphError::EmptyUniverse);
    }
    all.sort_by_key(FunctionalUnit::source_index);

    let mut kept = Vec::with_capacity(all.len());
    let mut positions = HashMap::new();
    let mut duplicates_dropped = 0;
    for unit in all {
        let canonical = unit.canonical();
        if positions.contains_key(&canonical) {
            duplicates_dropped += 1;
            continue;
        }
        positions.insert(canonical, kept.len());
        kept.push(unit);
    }

    let mut producers: BTreeMap<NodeKey, Vec<usize>> = BTreeMap::new();
    let mut node_catalog = BTreeMap::new();
    for (idx, unit) in kept.iter().enumerate() {
        for node in unit.inputs.iter().chain(&unit.outputs) {
            node_catalog
                .entry(node.key())
                .or_insert_with(|| node.clone());
        }
        for node in &unit.outputs {
            let list = producers.entry(node.key()).or_default();
            if list.last() != Some(&idx) {
                list.push(idx);
            }
        }
    }

    Ok(FoonGraph {
        units: kept,
        producers,
        node_catalog,
        positions,
        duplicates_dropped,
    })
}

impl FoonGraph {
    pub fn units(&self) -> &[FunctionalUnit] {
        &self.units
    }

    pub fn unit(&self, idx: usize) -> &FunctionalUnit {
        &self.units[idx]
    }

    pub fn len(&self) -> usize {
        self.units.len()
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }

    /// Indices of units producing `key`, in source order.
    pub fn producers_of(&self, key: &NodeKey) -> &[usize] {
        self.producers.get(key).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn producers(&self) -> &BTreeMap<NodeKey, Vec<usize>> {
        &self.producers
    }

    pub fn node_catalog(&self) -> &BTreeMap<NodeKey, ObjectNode> {
        &self.node_catalog
    }

    pub fn node_count(&self) -> usize {
        self.node_catalog.len()
    }

    pub fn position_of(&self, unit: &FunctionalUnit) -> Option<usize> {
        self.positions.get(&unit.canonical()).copied()
    }

    pub fn duplicates_dropped(&self) -> usize {
        self.duplicates_dropped
    }
}

/// Objects available before any manipulation starts.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Kitchen {
    items: BTreeMap<NodeKey, ObjectNode>,
}

impl Kitchen {
    pub fn from_items<I: IntoIterator<Item = ObjectNode>>(items: I) -> Self {
        let mut map = BTreeMap::new();
        for item in items {
            map.entry(item.key()).or_insert(item.with_in_motion(false));
        }
        Self { items: map }
    }

    pub fn satisfies(&self, key: &NodeKey) -> bool {
        self.items.contains_key(key)
    }

    pub fn items(&self) -> impl Iterator<Item = &ObjectNode> {
        self.items.values()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

pub fn kitchen_satisfies(kitchen: &Kitchen, key: &NodeKey) -> bool {
    kitchen.satisfies(key)
}

/// Success rate per motion label.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MotionProfile {
    rates: BTreeMap<String, f64>,
    default_rate: Option<f64>,
}

fn check_rate(label: &str, rate: f64) -> Result<f64, RateError> {
    if (0.0..=1.0).contains(&rate) {
        Ok(rate)
    } else {
        Err(RateError::OutOfRange {
            label: label.to_string(),
            rate,
        })
    }
}

impl MotionProfile {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a rate. Repeating a label with the same rate is accepted.
    pub fn insert(&mut self, label: &str, rate: f64) -> Result<(), RateError> {
        let label = normalize(label);
        let rate = check_rate(&label, rate)?;
        match self.rates.get(&label) {
            Some(&first) if first != rate => Err(RateError::Conflict {
                label,
                first,
                second: rate,
            }),
            _ => {
                self.rates.insert(label, rate);
                Ok(())
            }
        }
    }

    pub fn with_default_rate(mut self, rate: f64) -> Result<Self, RateError> {
        self.default_rate = Some(check_rate("<default>", rate)?);
        Ok(self)
    }

    pub fn default_rate(&self) -> Option<f64> {
        self.default_rate
    }

    pub fn get(&self, label: &str) -> Option<f64> {
        self.rates.get(&normalize(label)).copied()
    }

    /// Looks up a motion rate, falling back to the default rate unless
    /// `strict` is set.
    pub fn rate_for(&self, label: &str, strict: bool) -> Result<f64, MissingMotionRate> {
        match (self.get(label), strict, self.default_rate) {
            (Some(rate), _, _) => Ok(rate),
            (None, false, Some(rate)) => Ok(rate),
            _ => Err(MissingMotionRate(normalize(label))),
        }
    }

    pub fn rates(&self) -> &BTreeMap<String, f64> {
        &self.rates
    }

    pub fn len(&self) -> usize {
        self.rates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rates.is_empty()
    }
}

/// An executable sequence of functional units ending in the goal.
#[derive(Debug, Clone, PartialEq)]
pub struct TaskTree {
    pub steps: Vec<FunctionalUnit>,
    pub goal_key: NodeKey,
    pub algorithm: String,
}

impl TaskTree {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// The tree as an unordered set of units.
    pub fn unit_set(&self) -> BTreeSet<CanonicalUnit> {
        self.steps.iter().map(FunctionalUnit::canonical).collect()
    }
}
