mod common;

use std::path::Path;
use std::process::{Command, Output};

use common::{fixture_path, fixture_text};
use foon::io::{parse_foon_units, parse_goal, parse_kitchen};
use foon::model::build_graph;
use foon::retrieval::validate_tree;
use foon::TaskTree;
use tempfile::TempDir;

fn foon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_foon"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn path(name: &str, ext: &str) -> String {
    fixture_path(&format!("{name}.{ext}")).display().to_string()
}

fn query(command: &str, name: &str) -> Vec<String> {
    vec![
        command.into(),
        "--foon".into(),
        path(name, "foon"),
        "--kitchen".into(),
        path(name, "kitchen"),
        "--goal".into(),
        path(name, "goal"),
    ]
}

fn run(args: Vec<String>) -> Output {
    foon(&args.iter().map(String::as_str).collect::<Vec<_>>())
}

fn with(mut args: Vec<String>, extra: &[&str]) -> Vec<String> {
    args.extend(extra.iter().map(|s| s.to_string()));
    args
}

#[test]
fn validate_chop_onion() {
    let out = foon(&["validate", &path("chop_onion", "foon")]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(stdout(&out), "1 unit, 6 object nodes\n");
}

#[test]
fn validate_counts_units_and_warnings() {
    let out = foon(&["validate", &path("fixture_a", "foon")]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("2 units, "));

    let out = foon(&["validate", &path("fixture_d", "foon")]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("1 warning\n"));
    assert!(stderr(&out).contains(": warning: "));
}

#[test]
fn validate_rejects_state_before_object() {
    let dir = TempDir::new().unwrap();
    let file = dir.path().join("bad.foon");
    std::fs::write(
        &file,
        "S\twhole\nO\tcup\t0\nM\tpour\nO\tcup\t0\nS\tfull\n//\n",
    )
    .unwrap();
    let out = foon(&["validate", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let errors: Vec<_> = stderr(&out)
        .lines()
        .filter(|l| l.contains(": error: "))
        .map(String::from)
        .collect();
    assert_eq!(errors.len(), 1, "{errors:?}");
    assert!(errors[0].contains("bad.foon:1: error: "));
}

#[test]
fn retrieve_writes_the_cheapest_unit() {
    let out = run(with(
        query("retrieve", "fixture_a"),
        &["--algorithm", "gbfs-inputs"],
    ));
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let first_block: String = fixture_text("fixture_a.foon")
        .split_inclusive("//\n")
        .next()
        .unwrap()
        .to_string();
    assert_eq!(stdout(&out), first_block);
    assert!(stderr(&out).contains("gbfs-inputs: 1 functional unit, chain depth 1"));

    let out = run(with(
        query("retrieve", "fixture_a"),
        &[
            "--algorithm",
            "gbfs-success",
            "--motions",
            &path("fixture_a", "motions"),
        ],
    ));
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("M\tscoop\n"));
}

#[test]
fn retrieve_goal_in_kitchen() {
    let dir = TempDir::new().unwrap();
    let goal = dir.path().join("cup.goal");
    std::fs::write(&goal, "O\tcup\t0\nS\tempty\n").unwrap();
    let args = vec![
        "retrieve".to_string(),
        "--foon".into(),
        path("fixture_a", "foon"),
        "--kitchen".into(),
        path("fixture_a", "kitchen"),
        "--goal".into(),
        goal.display().to_string(),
        "--algorithm".into(),
        "ids".into(),
    ];
    let out = run(args);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "");
    assert!(stderr(&out).contains("goal already satisfied"));
}

#[test]
fn retrieve_failures_map_to_exit_codes() {
    let out = run(with(
        query("retrieve", "fixture_c"),
        &["--algorithm", "ids"],
    ));
    assert_eq!(out.status.code(), Some(1));

    let out = run(with(
        query("retrieve", "fixture_a"),
        &["--algorithm", "gbfs-success"],
    ));
    assert_eq!(out.status.code(), Some(3));

    let out = run(with(
        query("retrieve", "fixture_a"),
        &["--algorithm", "dfs"],
    ));
    assert_eq!(out.status.code(), Some(3));

    let out = run(with(
        query("retrieve", "fixture_a"),
        &["--algorithm", "ids", "--max-depth", "0"],
    ));
    assert_eq!(out.status.code(), Some(3));

    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.foon");
    std::fs::write(&bad, "M\tpour\n//\n").unwrap();
    let args = vec![
        "retrieve".to_string(),
        "--foon".into(),
        bad.display().to_string(),
        "--kitchen".into(),
        path("fixture_a", "kitchen"),
        "--goal".into(),
        path("fixture_a", "goal"),
        "--algorithm".into(),
        "ids".into(),
    ];
    assert_eq!(run(args).status.code(), Some(2));

    let missing = with(query("retrieve", "fixture_a"), &["--algorithm", "ids"])
        .into_iter()
        .map(|a| a.replace("fixture_a.kitchen", "absent.kitchen"))
        .collect();
    assert_eq!(run(missing).status.code(), Some(2));

    assert_eq!(foon(&["--help"]).status.code(), Some(0));
    assert_eq!(foon(&[]).status.code(), Some(3));
}

#[test]
fn retrieve_writes_files_that_revalidate() {
    let dir = TempDir::new().unwrap();
    let tree_path = dir.path().join("tree.foon");
    let dot_path = dir.path().join("tree.dot");
    let json_path = dir.path().join("tree.json");
    let args = with(
        query("retrieve", "fixture_d"),
        &[
            "--algorithm",
            "ids",
            "--motions",
            &path("fixture_d", "motions"),
            "--out",
            tree_path.to_str().unwrap(),
            "--dot",
            dot_path.to_str().unwrap(),
            "--json",
            json_path.to_str().unwrap(),
        ],
    );
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(stdout(&out), "");

    let (steps, _) = parse_foon_units(&std::fs::read_to_string(&tree_path).unwrap()).unwrap();
    let (units, _) = parse_foon_units(&fixture_text("fixture_d.foon")).unwrap();
    let graph = build_graph(units).unwrap();
    let kitchen = parse_kitchen(&fixture_text("fixture_d.kitchen")).unwrap();
    let goal = parse_goal(&fixture_text("fixture_d.goal")).unwrap();
    let tree = TaskTree {
        steps,
        goal_key: goal.key(),
        algorithm: "ids".into(),
    };
    let report = validate_tree(&tree, &graph, &kitchen);
    assert!(report.valid, "{:?}", report.diagnostics);

    assert!(std::fs::read_to_string(&dot_path)
        .unwrap()
        .starts_with("digraph foon {"));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(json["outcome"], "found");
    assert_eq!(json["metrics"]["unit_count"], 4);
    assert_eq!(json["metrics"]["max_chain_depth"], 3);
}

#[test]
fn compare_reports_every_algorithm() {
    let dir = TempDir::new().unwrap();
    let json_path = dir.path().join("report.json");
    let args = with(
        query("compare", "fixture_b"),
        &[
            "--motions",
            &path("fixture_b", "motions"),
            "--json",
            json_path.to_str().unwrap(),
        ],
    );
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let table = stdout(&out);
    for name in ["ids", "gbfs-success", "gbfs-inputs"] {
        assert!(table.contains(name));
    }
    assert!(table.contains("0.7600"));

    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(json["runs"][0]["algorithm"], "ids");
    assert_eq!(json["runs"][0]["metrics"]["unit_count"], 2);
    assert!(json["runs"][0].get("wall_ms").is_none());

    let out = run(query("compare", "fixture_b"));
    assert_eq!(out.status.code(), Some(3), "--motions is required");
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = TempDir::new().unwrap();
    let capture = |tag: &str, args: Vec<String>| -> (Vec<u8>, Vec<u8>, Vec<u8>) {
        let json = dir.path().join(format!("{tag}.json"));
        let out = run(with(args, &["--json", json.to_str().unwrap()]));
        (
            out.stdout,
            out.stderr,
            std::fs::read(Path::new(&json)).unwrap(),
        )
    };
    for name in common::HAND_BUILT {
        let motions = path(name, "motions");
        let compare = with(query("compare", name), &["--motions", &motions]);
        assert_eq!(capture("c1", compare.clone()), capture("c2", compare));
        let retrieve = with(
            query("retrieve", name),
            &["--algorithm", "gbfs-success", "--motions", &motions],
        );
        assert_eq!(capture("r1", retrieve.clone()), capture("r2", retrieve));
    }
}
