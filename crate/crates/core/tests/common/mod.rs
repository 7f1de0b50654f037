#![allow(dead_code)]

use std::path::PathBuf;

use foon::io::{parse_foon_units, parse_goal, parse_kitchen, parse_motion_profile};
use foon::model::{
    build_graph, FoonGraph, FunctionalUnit, Kitchen, Motion, MotionProfile, ObjectNode,
    StateDescriptor,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Universe {
    pub name: String,
    pub graph: FoonGraph,
    pub kitchen: Kitchen,
    pub goal: ObjectNode,
    pub profile: MotionProfile,
}

pub fn fixture_path(file: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("fixtures")
        .join(file)
}

pub fn fixture_text(file: &str) -> String {
    std::fs::read_to_string(fixture_path(file)).unwrap()
}

/// Loads `<name>.foon`, `.kitchen`, `.goal` and `.motions`.
pub fn fixture(name: &str) -> Universe {
    let (units, _) = parse_foon_units(&fixture_text(&format!("{name}.foon"))).unwrap();
    Universe {
        name: name.to_string(),
        graph: build_graph(units).unwrap(),
        kitchen: parse_kitchen(&fixture_text(&format!("{name}.kitchen"))).unwrap(),
        goal: parse_goal(&fixture_text(&format!("{name}.goal"))).unwrap(),
        profile: parse_motion_profile(&fixture_text(&format!("{name}.motions"))).unwrap(),
    }
}

pub const HAND_BUILT: [&str; 6] = [
    "chop_onion",
    "fixture_a",
    "fixture_b",
    "fixture_c",
    "fixture_d",
    "fixture_e",
];

pub fn node(name: &str, states: &[&str]) -> ObjectNode {
    states.iter().fold(ObjectNode::new(name).unwrap(), |n, s| {
        n.with_state(StateDescriptor::new(s).unwrap())
    })
}

pub fn unit(
    inputs: Vec<ObjectNode>,
    motion: &str,
    outputs: Vec<ObjectNode>,
    idx: usize,
) -> FunctionalUnit {
    FunctionalUnit::new(inputs, Motion::new(motion).unwrap(), outputs, idx).unwrap()
}

const NAMES: [&str; 6] = ["cup", "ice", "water", "bowl", "egg", "pan"];
const STATES: [&str; 4] = ["empty", "hot", "chopped", "mixed"];
const MOTIONS: [(&str, f64); 5] = [
    ("pour", 0.9),
    ("chop", 0.7),
    ("stir", 0.9),
    ("heat", 0.5),
    ("scoop", 0.7),
];

fn random_node(rng: &mut ChaCha8Rng) -> ObjectNode {
    let name = NAMES.choose(rng).unwrap();
    let mut node = ObjectNode::new(name)
        .unwrap()
        .with_in_motion(rng.gen_bool(0.3));
    match rng.gen_range(0..6) {
        0 => {}
        1 => {
            let container = NAMES.choose(rng).unwrap();
            node.add_state(StateDescriptor::in_container("in", container).unwrap());
        }
        2 => {
            let item = NAMES.choose(rng).unwrap();
            node.add_state(StateDescriptor::with_contents("contains", [item]).unwrap());
        }
        _ => node.add_state(StateDescriptor::new(STATES.choose(rng).unwrap()).unwrap()),
    }
    node
}

/// A reproducible universe of at most 20 units over a small object pool, so
/// producers overlap, chains form and cycles appear.
pub fn random_universe(seed: u64) -> Universe {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool: Vec<ObjectNode> = (0..rng.gen_range(6..14))
        .map(|_| random_node(&mut rng))
        .collect();
    let unit_count = rng.gen_range(2..=20);
    let mut units = Vec::with_capacity(unit_count);
    for idx in 0..unit_count {
        let inputs: Vec<ObjectNode> = (0..rng.gen_range(1..=3))
            .map(|_| pool.choose(&mut rng).unwrap().clone())
            .collect();
        let outputs: Vec<ObjectNode> = (0..rng.gen_range(1..=2))
            .map(|_| pool.choose(&mut rng).unwrap().clone())
            .collect();
        let (motion, _) = MOTIONS.choose(&mut rng).unwrap();
        units.push(unit(inputs, motion, outputs, idx));
    }

    let kitchen = Kitchen::from_items(pool.iter().filter(|_| rng.gen_bool(0.35)).cloned());
    let goal_unit = units.choose(&mut rng).unwrap();
    let goal = goal_unit.outputs().choose(&mut rng).unwrap().clone();

    let mut profile = MotionProfile::new();
    for (label, rate) in MOTIONS {
        profile.insert(label, rate).unwrap();
    }

    Universe {
        name: format!("random-{seed}"),
        graph: build_graph(units).unwrap(),
        kitchen,
        goal,
        profile,
    }
}
