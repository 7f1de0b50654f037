use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;

use crate::model::{FoonGraph, Kitchen, MotionProfile, NodeKey, ObjectNode};
use crate::retrieval::{
    retrieve, Algorithm, RetrievalConfig, RetrievalError, RetrievalStats, DEFAULT_MAX_DEPTH,
};

use super::metrics::{tree_metrics, TreeMetrics};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Found,
    NotFound,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlgorithmRun {
    pub algorithm: Algorithm,
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    /// Source indices of the chosen units, in execution order.
    pub steps: Vec<usize>,
    pub metrics: Option<TreeMetrics>,
    pub stats: Option<RetrievalStats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub fixture: String,
    pub goal: NodeKey,
    pub runs: Vec<AlgorithmRun>,
}

#[derive(Debug, Clone)]
pub struct CompareOptions {
    pub fixture: String,
    pub max_depth: usize,
    pub strict_motions: bool,
    pub backtrack: bool,
    /// Wall-clock timings make the report nondeterministic, so they are opt-in.
    pub record_timings: bool,
}

impl Default for CompareOptions {
    fn default() -> Self {
        Self {
            fixture: String::new(),
            max_depth: DEFAULT_MAX_DEPTH,
            strict_motions: false,
            backtrack: true,
            record_timings: false,
        }
    }
}

/// Runs all three algorithms on one query. A single algorithm failing to find
/// a tree is recorded in its run; only an unknown goal fails the comparison.
pub fn compare_algorithms(
    graph: &FoonGraph,
    goal: &ObjectNode,
    kitchen: &Kitchen,
    profile: &MotionProfile,
    options: &CompareOptions,
) -> Result<ComparisonReport, RetrievalError> {
    let goal_key = goal.key();
    if !kitchen.satisfies(&goal_key) && graph.producers_of(&goal_key).is_empty() {
        return Err(RetrievalError::UnknownGoal(goal_key));
    }

    let mut runs = Vec::with_capacity(Algorithm::ALL.len());
    for algorithm in Algorithm::ALL {
        let config = RetrievalConfig {
            algorithm,
            max_depth: options.max_depth,
            motion_profile: Some(profile.clone()),
            strict_motions: options.strict_motions,
            backtrack: options.backtrack,
        };
        let started = Instant::now();
        let result = retrieve(graph, goal, kitchen, &config);
        let wall_ms = options
            .record_timings
            .then(|| started.elapsed().as_secs_f64() * 1e3);

        let run = match result {
            Ok(found) => {
                let (metrics, detail) =
                    match tree_metrics(&found.tree, profile, kitchen, options.strict_motions) {
                        Ok(m) => (Some(m), None),
                        Err(e) => (None, Some(format!("metrics unavailable: {e}"))),
                    };
                AlgorithmRun {
                    algorithm,
                    outcome: Outcome::Found,
                    detail,
                    steps: found.tree.steps.iter().map(|s| s.source_index()).collect(),
                    metrics,
                    stats: Some(found.stats),
                    wall_ms,
                }
            }
            Err(e @ RetrievalError::NotFound { .. }) => {
                let stats = match &e {
                    RetrievalError::NotFound { stats, .. } => Some(*stats),
                    _ => None,
                };
                AlgorithmRun {
                    algorithm,
                    outcome: Outcome::NotFound,
                    detail: Some(e.to_string()),
                    steps: Vec::new(),
                    metrics: None,
                    stats,
                    wall_ms,
                }
            }
            Err(e @ RetrievalError::UnknownGoal(_)) => return Err(e),
            Err(e) => AlgorithmRun {
                algorithm,
                outcome: Outcome::Error,
                detail: Some(e.to_string()),
                steps: Vec::new(),
                metrics: None,
                stats: None,
                wall_ms,
            },
        };
        runs.push(run);
    }

    Ok(ComparisonReport {
        fixture: options.fixture.clone(),
        goal: goal_key,
        runs,
    })
}

impl ComparisonReport {
    pub fn run(&self, algorithm: Algorithm) -> Option<&AlgorithmRun> {
        self.runs.iter().find(|r| r.algorithm == algorithm)
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }

    /// Metrics as rows, one column per algorithm.
    pub fn to_table(&self) -> String {
        let dash = || "-".to_string();
        let metric = |f: &dyn Fn(&TreeMetrics) -> String| -> Vec<String> {
            self.runs
                .iter()
                .map(|r| r.metrics.as_ref().map_or_else(dash, f))
                .collect()
        };
        let stat = |f: &dyn Fn(&RetrievalStats) -> String| -> Vec<String> {
            self.runs
                .iter()
                .map(|r| r.stats.as_ref().map_or_else(dash, f))
                .collect()
        };

        let mut rows: Vec<(&str, Vec<String>)> = vec![
            (
                "outcome",
                self.runs
                    .iter()
                    .map(|r| match r.outcome {
                        Outcome::Found => "found".to_string(),
                        Outcome::NotFound => "not found".to_string(),
                        Outcome::Error => "error".to_string(),
                    })
                    .collect(),
            ),
            ("functional units", metric(&|m| m.unit_count.to_string())),
            ("chain depth", metric(&|m| m.max_chain_depth.to_string())),
            (
                "success product",
                metric(&|m| format!("{:.4}", m.success_product)),
            ),
            ("success min", metric(&|m| format!("{:.4}", m.success_min))),
            ("expanded units", stat(&|s| s.expanded_units.to_string())),
            ("peak open set", stat(&|s| s.peak_open_set.to_string())),
        ];
        if self.runs.iter().any(|r| r.wall_ms.is_some()) {
            rows.push((
                "wall ms",
                self.runs
                    .iter()
                    .map(|r| r.wall_ms.map_or_else(dash, |ms| format!("{ms:.3}")))
                    .collect(),
            ));
        }

        let mut out = String::new();
        if !self.fixture.is_empty() {
            let _ = writeln!(out, "fixture: {}", self.fixture);
        }
        let _ = writeln!(out, "goal: {}", self.goal);
        let _ = write!(out, "{:<18}", "metric");
        for run in &self.runs {
            let _ = write!(out, "  {:>14}", run.algorithm.name());
        }
        out.push('\n');
        for (label, cells) in rows {
            let _ = write!(out, "{label:<18}");
            for cell in cells {
                let _ = write!(out, "  {cell:>14}");
            }
            out.push('\n');
        }
        out
    }
}
