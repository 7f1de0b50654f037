//! The backtracking resolution engine behind both retrieval algorithms.
//!
//! The engine keeps an explicit agenda and a stack of choice points instead of
//! recursing, so long or cyclic chains cannot exhaust the call stack. Each
//! choice point snapshots the partial tree; backtracking restores a snapshot
//! and applies the next producer.

use std::collections::{HashMap, HashSet};
use std::rc::Rc;

use crate::model::{FoonGraph, Kitchen, MotionProfile, NodeKey};

use super::heuristic::{heuristic_input_count, heuristic_success};
use super::{ChoicePoint, RetrievalError, RetrievalStats};

pub(crate) enum Order<'a> {
    Source,
    SuccessRate {
        profile: &'a MotionProfile,
        strict: bool,
    },
    InputCount,
}

/// Per-retrieval precomputation: unit keys and a lower bound on the unit
/// chain needed to obtain each node.
pub(crate) struct Bounds {
    inputs: Vec<Vec<NodeKey>>,
    outputs: Vec<Vec<NodeKey>>,
    min_height: HashMap<NodeKey, usize>,
}

impl Bounds {
    pub(crate) fn compute(graph: &FoonGraph, kitchen: &Kitchen) -> Self {
        let keys =
            |nodes: &[crate::model::ObjectNode]| nodes.iter().map(|n| n.key()).collect::<Vec<_>>();
        let inputs: Vec<Vec<NodeKey>> = graph.units().iter().map(|u| keys(u.inputs())).collect();
        let outputs: Vec<Vec<NodeKey>> = graph.units().iter().map(|u| keys(u.outputs())).collect();

        // Relax until stable: heights only decrease, so this terminates.
        let mut min_height: HashMap<NodeKey, usize> =
            kitchen.items().map(|n| (n.key(), 0)).collect();
        loop {
            let mut changed = false;
            for (ins, outs) in inputs.iter().zip(&outputs) {
                let Some(tallest) = ins
                    .iter()
                    .try_fold(0, |acc, k| min_height.get(k).map(|&h| acc.max(h)))
                else {
                    continue;
                };
                let height = tallest + 1;
                for out in outs {
                    if min_height.get(out).is_none_or(|&h| height < h) {
                        min_height.insert(out.clone(), height);
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }

        Self {
            inputs,
            outputs,
            min_height,
        }
    }
}

struct PathNode {
    key: NodeKey,
    parent: Path,
}

/// Keys currently being resolved, from the subgoal up to the goal.
type Path = Option<Rc<PathNode>>;

fn on_path(path: &Path, key: &NodeKey) -> bool {
    let mut cursor = path.as_deref();
    while let Some(node) = cursor {
        if &node.key == key {
            return true;
        }
        cursor = node.parent.as_deref();
    }
    false
}

#[derive(Clone)]
enum Task {
    Resolve {
        key: NodeKey,
        depth: usize,
        path: Path,
    },
    Complete {
        unit: usize,
        depth: usize,
        for_key: NodeKey,
    },
}

#[derive(Clone, Default)]
struct Partial {
    agenda: Vec<Task>,
    steps: Vec<usize>,
    chosen: HashSet<usize>,
    // Node produced by a completed step -> height of the earliest such step.
    available: HashMap<NodeKey, usize>,
}

impl Partial {
    fn open_subgoals(&self) -> usize {
        self.agenda
            .iter()
            .filter(|t| matches!(t, Task::Resolve { .. }))
            .count()
    }
}

struct Frame {
    base: Partial,
    key: NodeKey,
    depth: usize,
    path: Path,
    candidates: Vec<(usize, Option<f64>)>,
    excluded: Vec<usize>,
    next: usize,
}

impl Frame {
    fn choice_point(&self) -> ChoicePoint {
        let tried = self.next.saturating_sub(1);
        ChoicePoint {
            subgoal: self.key.clone(),
            depth: self.depth,
            candidates: self.candidates.clone(),
            excluded: self.excluded.clone(),
            rejected: self.candidates[..tried].iter().map(|c| c.0).collect(),
            chosen: self.candidates[tried].0,
        }
    }
}

enum Step {
    Done,
    DeadEnd,
    Choice(Box<Frame>),
}

pub(crate) struct Found {
    pub steps: Vec<usize>,
    pub trace: Vec<ChoicePoint>,
}

pub(crate) struct Search<'a> {
    graph: &'a FoonGraph,
    kitchen: &'a Kitchen,
    bounds: &'a Bounds,
    order: Order<'a>,
    limit: Option<usize>,
    backtrack: bool,
    pub stats: RetrievalStats,
}

impl<'a> Search<'a> {
    pub(crate) fn new(
        graph: &'a FoonGraph,
        kitchen: &'a Kitchen,
        bounds: &'a Bounds,
        order: Order<'a>,
        limit: Option<usize>,
        backtrack: bool,
    ) -> Self {
        Self {
            graph,
            kitchen,
            bounds,
            order,
            limit,
            backtrack,
            stats: RetrievalStats::default(),
        }
    }

    fn exceeds(&self, chain: usize) -> bool {
        self.limit.is_some_and(|limit| chain > limit)
    }

    pub(crate) fn run(&mut self, goal: &NodeKey) -> Result<Option<Found>, RetrievalError> {
        let mut initial = Partial::default();
        initial.agenda.push(Task::Resolve {
            key: goal.clone(),
            depth: 0,
            path: None,
        });
        self.stats.peak_open_set = self.stats.peak_open_set.max(1);

        let mut frames: Vec<Frame> = Vec::new();
        let mut pending = Some(initial);
        loop {
            if let Some(mut partial) = pending.take() {
                match self.advance(&mut partial)? {
                    Step::Done => {
                        return Ok(Some(Found {
                            steps: partial.steps,
                            trace: frames.iter().map(Frame::choice_point).collect(),
                        }))
                    }
                    Step::Choice(frame) => frames.push(*frame),
                    Step::DeadEnd if !self.backtrack => return Ok(None),
                    Step::DeadEnd => {}
                }
            }

            loop {
                let Some(top) = frames.last_mut() else {
                    return Ok(None);
                };
                if top.next < top.candidates.len() {
                    let unit = top.candidates[top.next].0;
                    top.next += 1;
                    let mut partial = top.base.clone();
                    let (key, depth, path) = (top.key.clone(), top.depth, top.path.clone());
                    self.choose(&mut partial, unit, key, depth, path);
                    pending = Some(partial);
                    break;
                }
                frames.pop();
            }
        }
    }

    fn choose(
        &mut self,
        partial: &mut Partial,
        unit: usize,
        key: NodeKey,
        depth: usize,
        path: Path,
    ) {
        self.stats.expanded_units += 1;
        partial.chosen.insert(unit);
        partial.agenda.push(Task::Complete {
            unit,
            depth,
            for_key: key.clone(),
        });
        let child = Some(Rc::new(PathNode { key, parent: path }));
        for input in self.bounds.inputs[unit].iter().rev() {
            partial.agenda.push(Task::Resolve {
                key: input.clone(),
                depth: depth + 1,
                path: child.clone(),
            });
        }
        self.stats.peak_open_set = self.stats.peak_open_set.max(partial.open_subgoals());
    }

    fn advance(&mut self, partial: &mut Partial) -> Result<Step, RetrievalError> {
        while let Some(task) = partial.agenda.pop() {
            match task {
                Task::Resolve { key, depth, path } => {
                    self.stats.depth_reached = self.stats.depth_reached.max(depth);
                    if self.kitchen.satisfies(&key) {
                        continue;
                    }
                    if let Some(&height) = partial.available.get(&key) {
                        if self.exceeds(depth + height) {
                            return Ok(Step::DeadEnd);
                        }
                        continue;
                    }
                    if on_path(&path, &key) {
                        return Ok(Step::DeadEnd);
                    }
                    match self.bounds.min_height.get(&key) {
                        Some(&h) if !self.exceeds(depth + h) => {}
                        _ => return Ok(Step::DeadEnd),
                    }

                    let mut candidates = Vec::new();
                    let mut excluded = Vec::new();
                    for &unit in self.graph.producers_of(&key) {
                        let cyclic = self.bounds.inputs[unit]
                            .iter()
                            .any(|k| *k == key || on_path(&path, k));
                        if cyclic || partial.chosen.contains(&unit) {
                            excluded.push(unit);
                        } else {
                            candidates.push(unit);
                        }
                    }
                    if candidates.is_empty() {
                        return Ok(Step::DeadEnd);
                    }
                    let candidates = self.rank(candidates)?;
                    return Ok(Step::Choice(Box::new(Frame {
                        base: std::mem::take(partial),
                        key,
                        depth,
                        path,
                        candidates,
                        excluded,
                        next: 0,
                    })));
                }
                Task::Complete {
                    unit,
                    depth,
                    for_key,
                } => {
                    // A descendant already produced the node this unit was
                    // chosen for, so the unit is redundant.
                    if partial.available.contains_key(&for_key) {
                        return Ok(Step::DeadEnd);
                    }
                    let support = self.bounds.inputs[unit]
                        .iter()
                        .map(|k| {
                            if self.kitchen.satisfies(k) {
                                0
                            } else {
                                partial.available.get(k).copied().unwrap_or(0)
                            }
                        })
                        .max()
                        .unwrap_or(0);
                    let height = support + 1;
                    if self.exceeds(depth + height) {
                        return Ok(Step::DeadEnd);
                    }
                    partial.steps.push(unit);
                    for out in &self.bounds.outputs[unit] {
                        if !self.kitchen.satisfies(out) {
                            partial.available.entry(out.clone()).or_insert(height);
                        }
                    }
                }
            }
        }
        Ok(Step::Done)
    }

    /// Orders candidates best first; ties keep file order.
    fn rank(&self, candidates: Vec<usize>) -> Result<Vec<(usize, Option<f64>)>, RetrievalError> {
        match &self.order {
            Order::Source => Ok(candidates.into_iter().map(|u| (u, None)).collect()),
            Order::InputCount => {
                let mut scored: Vec<(usize, usize)> = candidates
                    .into_iter()
                    .map(|u| (u, heuristic_input_count(self.graph.unit(u))))
                    .collect();
                scored.sort_by_key(|&(u, count)| (count, u));
                Ok(scored
                    .into_iter()
                    .map(|(u, c)| (u, Some(c as f64)))
                    .collect())
            }
            Order::SuccessRate { profile, strict } => {
                let mut scored = Vec::with_capacity(candidates.len());
                for u in candidates {
                    scored.push((u, heuristic_success(self.graph.unit(u), profile, *strict)?));
                }
                scored.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
                Ok(scored.into_iter().map(|(u, r)| (u, Some(r))).collect())
            }
        }
    }
}
