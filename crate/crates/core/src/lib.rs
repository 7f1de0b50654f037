//! Functional object-oriented networks (FOONs): parsing annotation files into
//! a merged knowledge graph and retrieving executable task trees for a goal
//! object from what the kitchen holds.
//!
//! ```
//! use foon::io::{parse_foon_units, parse_goal, parse_kitchen};
//! use foon::model::build_graph;
//! use foon::retrieval::{retrieve_ids, RetrievalConfig, Algorithm};
//!
//! let universe = "O\tonions\t1\nS\twhole\nO\tknife\t1\nM\tchop\nO\tonions\t1\nS\tchopped\nO\tknife\t1\n";
//! let (units, _) = parse_foon_units(universe).unwrap();
//! let graph = build_graph(units).unwrap();
//! let kitchen = parse_kitchen("O\tonions\t0\nS\twhole\n\nO\tknife\t0\n").unwrap();
//! let goal = parse_goal("O\tonions\t0\nS\tchopped\n").unwrap();
//!
//! let found = retrieve_ids(&graph, &goal, &kitchen, &RetrievalConfig::new(Algorithm::Ids)).unwrap();
//! assert_eq!(found.tree.steps.len(), 1);
//! ```

pub mod cli;
pub mod eval;
pub mod io;
pub mod model;
pub mod retrieval;

pub use model::{
    build_graph, canonical_node_key, kitchen_satisfies, FoonGraph, FunctionalUnit, Kitchen, Motion,
    MotionProfile, NodeKey, ObjectNode, StateDescriptor, TaskTree,
};
