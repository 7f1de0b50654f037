//! Task tree retrieval: backward search from a goal node down to objects
//! available in the kitchen.
//!
//! Both algorithms share one resolution engine. A subgoal is satisfied by the
//! kitchen, by an output of a unit already in the tree, or by choosing one of
//! its producing units and resolving that unit's inputs in order. They differ
//! only in how producers are ordered at a choice point and whether the chain
//! of units is depth limited:
//!
//! * iterative deepening tries producers in file order under a unit-chain
//!   limit of 0, 1, 2, ... and returns the first tree found;
//! * greedy best-first orders producers by a heuristic score (motion success
//!   rate, highest first, or input count, lowest first) and backtracks to the
//!   next-best producer on a dead end.

mod heuristic;
mod search;
mod validate;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::model::{
    FoonGraph, Kitchen, MissingMotionRate, MotionProfile, NodeKey, ObjectNode, TaskTree,
};

pub use heuristic::{heuristic_input_count, heuristic_success};
pub use validate::{validate_tree, TreeValidation};

use search::{Bounds, Order, Search};

pub const DEFAULT_MAX_DEPTH: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Algorithm {
    #[serde(rename = "ids")]
    Ids,
    #[serde(rename = "gbfs-success")]
    GbfsSuccess,
    #[serde(rename = "gbfs-inputs")]
    GbfsInputs,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [
        Algorithm::Ids,
        Algorithm::GbfsSuccess,
        Algorithm::GbfsInputs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Ids => "ids",
            Algorithm::GbfsSuccess => "gbfs-success",
            Algorithm::GbfsInputs => "gbfs-inputs",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone)]
pub struct RetrievalConfig {
    pub algorithm: Algorithm,
    /// Unit-chain cap for iterative deepening.
    pub max_depth: usize,
    pub motion_profile: Option<MotionProfile>,
    /// Treat a motion without a rate as an error instead of using the
    /// profile's default rate.
    pub strict_motions: bool,
    /// Greedy search only: retry the next-best producer after a dead end.
    pub backtrack: bool,
}

impl RetrievalConfig {
    pub fn new(algorithm: Algorithm) -> Self {
        Self {
            algorithm,
            max_depth: DEFAULT_MAX_DEPTH,
            motion_profile: None,
            strict_motions: false,
            backtrack: true,
        }
    }

    pub fn with_profile(mut self, profile: MotionProfile) -> Self {
        self.motion_profile = Some(profile);
        self
    }

    pub fn with_max_depth(mut self, max_depth: usize) -> Self {
        self.max_depth = max_depth;
        self
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct RetrievalStats {
    /// Producing units tried at choice points, including abandoned ones.
    pub expanded_units: usize,
    /// Largest number of pending subgoals held at once.
    pub peak_open_set: usize,
    /// Final depth limit for iterative deepening; deepest subgoal otherwise.
    pub depth_reached: usize,
}

/// One producer choice on the path that led to the returned tree.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChoicePoint {
    pub subgoal: NodeKey,
    pub depth: usize,
    /// Every producer of the subgoal with its score (`None` for file order).
    pub candidates: Vec<(usize, Option<f64>)>,
    /// Producers ruled out before choosing: already in the tree or needing a
    /// node that is still being resolved above them.
    pub excluded: Vec<usize>,
    /// Producers tried first and abandoned after a dead end.
    pub rejected: Vec<usize>,
    pub chosen: usize,
}

#[derive(Debug, Clone)]
pub struct Retrieval {
    pub tree: TaskTree,
    pub stats: RetrievalStats,
    pub trace: Vec<ChoicePoint>,
    /// Graph indices of the steps, in tree order.
    pub unit_indices: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RetrievalError {
    #[error("goal `{0}` is neither in the kitchen nor produced by any functional unit")]
    UnknownGoal(NodeKey),
    #[error("no task tree found for `{goal}` ({algorithm}, {})", not_found_detail(.max_depth, .backtrack, .stats))]
    NotFound {
        goal: NodeKey,
        algorithm: Algorithm,
        max_depth: Option<usize>,
        backtrack: bool,
        stats: RetrievalStats,
    },
    #[error(transparent)]
    MissingMotionRate(#[from] MissingMotionRate),
    #[error("{0} needs a motion profile")]
    MissingMotionProfile(Algorithm),
    #[error("{0} is not a greedy best-first algorithm")]
    NotGreedy(Algorithm),
}

fn not_found_detail(max_depth: &Option<usize>, backtrack: &bool, stats: &RetrievalStats) -> String {
    match max_depth {
        Some(cap) => format!(
            "depth cap {cap} reached, {} units expanded",
            stats.expanded_units
        ),
        None => format!(
            "search exhausted, {} units expanded, backtracking {}",
            stats.expanded_units,
            if *backtrack { "on" } else { "off" }
        ),
    }
}

fn check_goal(graph: &FoonGraph, goal: &NodeKey, kitchen: &Kitchen) -> Result<(), RetrievalError> {
    if kitchen.satisfies(goal) || !graph.producers_of(goal).is_empty() {
        Ok(())
    } else {
        Err(RetrievalError::UnknownGoal(goal.clone()))
    }
}

fn into_retrieval(
    graph: &FoonGraph,
    goal: NodeKey,
    algorithm: Algorithm,
    found: search::Found,
    stats: RetrievalStats,
) -> Retrieval {
    Retrieval {
        tree: TaskTree {
            steps: found.steps.iter().map(|&i| graph.unit(i).clone()).collect(),
            goal_key: goal,
            algorithm: algorithm.name().to_string(),
        },
        stats,
        trace: found.trace,
        unit_indices: found.steps,
    }
}

/// Iterative deepening over the unit-chain limit, trying producers left to
/// right and returning the first tree found.
pub fn retrieve_ids(
    graph: &FoonGraph,
    goal: &ObjectNode,
    kitchen: &Kitchen,
    config: &RetrievalConfig,
) -> Result<Retrieval, RetrievalError> {
    let goal_key = goal.key();
    check_goal(graph, &goal_key, kitchen)?;
    let bounds = Bounds::compute(graph, kitchen);
    let mut stats = RetrievalStats::default();
    for limit in 0..=config.max_depth {
        let mut search = Search::new(graph, kitchen, &bounds, Order::Source, Some(limit), true);
        let outcome = search.run(&goal_key)?;
        stats.expanded_units += search.stats.expanded_units;
        stats.peak_open_set = stats.peak_open_set.max(search.stats.peak_open_set);
        stats.depth_reached = limit;
        if let Some(found) = outcome {
            return Ok(into_retrieval(
                graph,
                goal_key,
                Algorithm::Ids,
                found,
                stats,
            ));
        }
    }
    Err(RetrievalError::NotFound {
        goal: goal_key,
        algorithm: Algorithm::Ids,
        max_depth: Some(config.max_depth),
        backtrack: true,
        stats,
    })
}

/// Greedy best-first retrieval. `config.algorithm` selects the heuristic.
pub fn retrieve_gbfs(
    graph: &FoonGraph,
    goal: &ObjectNode,
    kitchen: &Kitchen,
    config: &RetrievalConfig,
) -> Result<Retrieval, RetrievalError> {
    let order = match config.algorithm {
        Algorithm::GbfsSuccess => {
            let profile = config
                .motion_profile
                .as_ref()
                .ok_or(RetrievalError::MissingMotionProfile(config.algorithm))?;
            Order::SuccessRate {
                profile,
                strict: config.strict_motions,
            }
        }
        Algorithm::GbfsInputs => Order::InputCount,
        Algorithm::Ids => return Err(RetrievalError::NotGreedy(config.algorithm)),
    };
    let goal_key = goal.key();
    check_goal(graph, &goal_key, kitchen)?;
    let bounds = Bounds::compute(graph, kitchen);
    let mut search = Search::new(graph, kitchen, &bounds, order, None, config.backtrack);
    match search.run(&goal_key)? {
        Some(found) => Ok(into_retrieval(
            graph,
            goal_key,
            config.algorithm,
            found,
            search.stats,
        )),
        None => Err(RetrievalError::NotFound {
            goal: goal_key,
            algorithm: config.algorithm,
            max_depth: None,
            backtrack: config.backtrack,
            stats: search.stats,
        }),
    }
}

/// Dispatches on `config.algorithm`.
pub fn retrieve(
    graph: &FoonGraph,
    goal: &ObjectNode,
    kitchen: &Kitchen,
    config: &RetrievalConfig,
) -> Result<Retrieval, RetrievalError> {
    match config.algorithm {
        Algorithm::Ids => retrieve_ids(graph, goal, kitchen, config),
        Algorithm::GbfsSuccess | Algorithm::GbfsInputs => {
            retrieve_gbfs(graph, goal, kitchen, config)
        }
    }
}
