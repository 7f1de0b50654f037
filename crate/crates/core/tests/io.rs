mod common;

use common::{fixture, fixture_text, random_universe};
use foon::io::{
    export_dot, export_tree_dot, parse_foon, parse_foon_units, parse_goal, parse_kitchen,
    parse_motion_profile, serialize_foon, Severity,
};
use foon::model::{build_graph, FunctionalUnit, Motion, ObjectNode, StateDescriptor};
use foon::retrieval::{retrieve, Algorithm, RetrievalConfig};
use proptest::prelude::*;

fn assert_same_units(a: &[FunctionalUnit], b: &[FunctionalUnit]) {
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(b) {
        assert_eq!(x.canonical(), y.canonical());
        assert_eq!(x.motion().extras(), y.motion().extras());
    }
}

#[test]
fn fixture_a_serializes_byte_for_byte() {
    let text = fixture_text("fixture_a.foon");
    let (units, warnings) = parse_foon_units(&text).unwrap();
    assert!(warnings.is_empty());
    assert_eq!(serialize_foon(&units), text);
}

#[test]
fn every_fixture_round_trips() {
    for name in common::HAND_BUILT {
        let (units, _) = parse_foon_units(&fixture_text(&format!("{name}.foon"))).unwrap();
        let text = serialize_foon(&units);
        let (again, _) = parse_foon_units(&text).unwrap();
        assert_same_units(&units, &again);
        assert_eq!(serialize_foon(&again), text, "{name}");
        assert_eq!(build_graph(units).unwrap(), build_graph(again).unwrap());
    }
}

#[test]
fn random_universes_round_trip() {
    for seed in 0..100 {
        let u = random_universe(seed);
        let text = serialize_foon(u.graph.units());
        let (units, _) = parse_foon_units(&text).unwrap();
        assert_same_units(u.graph.units(), &units);
        assert_eq!(build_graph(units).unwrap(), u.graph);
    }
}

#[test]
fn motion_extras_survive() {
    let (units, _) = parse_foon_units(&fixture_text("fixture_b.foon")).unwrap();
    assert_eq!(units[0].motion().extras(), ["00:04", "00:09"]);
    assert!(serialize_foon(&units).contains("M\tpour\t00:04\t00:09\n"));
}

#[test]
fn build_graph_is_idempotent() {
    let d = fixture("fixture_d");
    let rebuilt = build_graph(d.graph.units().iter().cloned()).unwrap();
    assert_eq!(rebuilt, d.graph);
    assert_eq!(rebuilt.duplicates_dropped(), 0);

    let doubled = d.graph.units().iter().chain(d.graph.units()).cloned();
    let merged = build_graph(doubled).unwrap();
    assert_eq!(merged, d.graph);
    assert_eq!(merged.duplicates_dropped(), d.graph.len());
}

#[test]
fn kitchen_goal_and_profile_files() {
    let kitchen = parse_kitchen(&fixture_text("chop_onion.kitchen")).unwrap();
    assert_eq!(kitchen.len(), 3);
    let goal = parse_goal(&fixture_text("chop_onion.goal")).unwrap();
    assert_eq!(goal.key().as_str(), "onions|chopped+in[chopping board]");
    let profile = parse_motion_profile(&fixture_text("fixture_b.motions")).unwrap();
    assert_eq!(profile.get("pour"), Some(0.95));

    let two = parse_goal("O\tcup\t0\n\nO\tbowl\t0\n").unwrap_err();
    assert_eq!(two.diagnostics[0].line, 3);
    let motion = parse_kitchen("O\tcup\t0\nM\tpour\n").unwrap_err();
    assert_eq!(motion.diagnostics[0].line, 2);
    assert!(parse_motion_profile("pour\t1.5\n").is_err());
    assert!(parse_motion_profile("pour\t0.5\npour\t0.6\n").is_err());
    assert!(parse_motion_profile("# rates\npour\t0.5\npour\t0.5\n").is_ok());
}

#[test]
fn diagnostics_carry_line_numbers() {
    let text = "S\twhole\nO\tcup\t0\nM\tpour\nO\tcup\t2\n//\nO\tbowl\t0\nM\tstir\nO\tbowl\t0\nS\tmixed\n//\n";
    let (units, diagnostics) = parse_foon(text);
    assert_eq!(units.len(), 1);
    let errors: Vec<_> = diagnostics.iter().filter(|d| d.is_error()).collect();
    assert_eq!(errors[0].line, 1);
    assert!(errors.iter().any(|d| d.line == 4));

    let (_, diagnostics) = parse_foon("");
    assert_eq!(diagnostics.len(), 1);
    assert_eq!(diagnostics[0].line, 1);
    assert_eq!(diagnostics[0].severity, Severity::Error);
}

#[test]
fn dot_for_fixture_b_tree() {
    let b = fixture("fixture_b");
    let tree = retrieve(
        &b.graph,
        &b.goal,
        &b.kitchen,
        &RetrievalConfig::new(Algorithm::Ids),
    )
    .unwrap()
    .tree;
    let dot = export_tree_dot(&tree);
    assert!(dot.starts_with("digraph foon {\n"));
    assert!(dot.ends_with("}\n"));
    assert_eq!(dot.matches("shape=box").count(), 2);
    assert_eq!(dot.matches("shape=ellipse").count(), 4);
    assert_eq!(dot.matches("fillcolor=purple").count(), 1);
    assert_eq!(dot.matches(" -> ").count(), 5);
    assert_eq!(export_dot([], None), "digraph foon {\n}\n");
}

fn word() -> impl Strategy<Value = String> {
    prop::sample::select(vec![
        "cup",
        "ice",
        "water",
        "chopping board",
        "egg",
        "salt",
        "pan",
    ])
    .prop_map(String::from)
}

fn state() -> impl Strategy<Value = StateDescriptor> {
    prop_oneof![
        prop::sample::select(vec!["whole", "chopped", "hot", "empty"])
            .prop_map(|s| StateDescriptor::new(s).unwrap()),
        word().prop_map(|c| StateDescriptor::in_container("in", &c).unwrap()),
        prop::collection::btree_set(word(), 1..3)
            .prop_map(|items| StateDescriptor::with_contents("contains", items).unwrap()),
    ]
}

fn object() -> impl Strategy<Value = ObjectNode> {
    (word(), any::<bool>(), prop::collection::vec(state(), 0..3)).prop_map(
        |(name, flag, states)| {
            states.into_iter().fold(
                ObjectNode::new(&name).unwrap().with_in_motion(flag),
                |n, s| n.with_state(s),
            )
        },
    )
}

fn functional_unit() -> impl Strategy<Value = FunctionalUnit> {
    (
        prop::collection::vec(object(), 1..4),
        prop::sample::select(vec!["pour", "chop", "stir", "pick and place"]),
        prop::collection::vec("[0-9]{2}:[0-9]{2}", 0..3),
        prop::collection::vec(object(), 1..3),
    )
        .prop_map(|(inputs, motion, extras, outputs)| {
            let motion = Motion::new(motion).unwrap().with_extras(extras);
            FunctionalUnit::new(inputs, motion, outputs, 0).unwrap()
        })
}

proptest! {
    #[test]
    fn serialize_then_parse_is_canonical_identity(units in prop::collection::vec(functional_unit(), 1..6)) {
        let text = serialize_foon(&units);
        let (parsed, diagnostics) = parse_foon(&text);
        prop_assert!(diagnostics.iter().all(|d| !d.is_error()), "{:?}", diagnostics);
        prop_assert_eq!(parsed.len(), units.len());
        for (a, b) in units.iter().zip(&parsed) {
            prop_assert_eq!(a.canonical(), b.canonical());
            prop_assert_eq!(a.motion().extras(), b.motion().extras());
        }
        prop_assert_eq!(serialize_foon(&parsed), text);
    }

    #[test]
    fn diagnostic_lines_stay_in_range(text in "[OSM/\t a-z01\\[\\]{},\n]{0,200}") {
        let (_, diagnostics) = parse_foon(&text);
        let last = text.lines().count().max(1);
        for d in &diagnostics {
            prop_assert!((1..=last).contains(&d.line), "{} outside 1..={}", d, last);
        }
    }
}
