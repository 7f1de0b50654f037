//! Tree metrics, the exhaustive reference enumerator and algorithm
//! comparison reports.

mod compare;
mod metrics;
mod oracle;

pub use compare::{compare_algorithms, AlgorithmRun, CompareOptions, ComparisonReport, Outcome};
pub use metrics::{max_chain_depth, tree_metrics, TreeMetrics};
pub use oracle::{
    enumerate_all_task_trees, enumerate_task_trees_capped, OracleError, DEFAULT_ORACLE_CAP,
};
