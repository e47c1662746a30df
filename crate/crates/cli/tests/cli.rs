use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use proptest::prelude::*;
use restruct_cli::{parse_document, InstanceDocument};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn restruct(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_restruct")).args(args).output().expect("binary runs")
}

fn write_temp(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("restruct-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const FIXTURES: [&str; 8] = [
    "access.json",
    "clustering.json",
    "course.json",
    "ranking.json",
    "sensor.json",
    "spanning.json",
    "steiner.json",
    "team.json",
];

#[test]
fn fixtures_round_trip() {
    for f in FIXTURES {
        let text = std::fs::read_to_string(fixture(f)).unwrap();
        let doc = parse_document(&text).unwrap_or_else(|e| panic!("{f}: {e}"));
        let again = parse_document(&doc.to_json()).unwrap();
        assert_eq!(doc, again, "{f}");
    }
}

#[test]
fn solve_course_stage_zero() {
    let o = restruct(&["solve", fixture("course.json").to_str().unwrap(), "--stage", "0"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = String::from_utf8(o.stdout).unwrap();
    assert!(out.contains("objective 22.0"), "{out}");
    assert!(out.contains("{1,2,4,8,11,12,13}"), "{out}");
}

#[test]
fn malformed_value_names_the_field() {
    let text = std::fs::read_to_string(fixture("course.json")).unwrap();
    let bad = text.replacen("\"capacity\": \"14.0\"", "\"capacity\": \"fourteen\"", 1);
    assert_ne!(bad, text);
    let p = write_temp("bad-capacity.json", &bad);
    let o = restruct(&["solve", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("stages[0].instance.capacity"), "{}", stderr(&o));
}

#[test]
fn input_errors_exit_two() {
    for (name, text, needle) in [
        ("not-json.json", "{ kind", "invalid JSON"),
        ("no-kind.json", r#"{"stages": []}"#, "kind"),
        ("bad-kind.json", r#"{"kind": "tsp", "stages": []}"#, "unknown kind"),
        ("no-stages.json", r#"{"kind": "knapsack", "stages": []}"#, "at least one stage"),
        (
            "unknown-fixed.json",
            r#"{"kind": "knapsack", "stages": [{"instance": {"items": [], "capacity": "1"}, "fixed": [9]}]}"#,
            "stages[0].fixed",
        ),
        (
            "extra-field.json",
            r#"{"kind": "ranking", "stages": [{"ranking": [[1]], "costs": {"per_layer_step": "1"}, "bogus": 1}]}"#,
            "bogus",
        ),
    ] {
        let p = write_temp(name, text);
        let o = restruct(&["solve", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2), "{name}");
        assert!(stderr(&o).contains(needle), "{name}: {}", stderr(&o));
    }
    let o = restruct(&["solve", "/nonexistent/file.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn infeasible_budget_exits_three_with_hint() {
    // the current subset overflows the goal capacity; removing anything costs 2
    let text = r#"{
      "kind": "knapsack",
      "stages": [
        {"instance": {"items": [{"id": 1, "profit": "1", "weight": "1"}, {"id": 2, "profit": "1", "weight": "1"}], "capacity": "2"}},
        {"instance": {"items": [{"id": 1, "profit": "1", "weight": "1"}, {"id": 2, "profit": "1", "weight": "1"}], "capacity": "1"},
         "costs": {"default_delete": "2", "default_add": "1"}, "budget": "1"}
      ]
    }"#;
    let p = write_temp("infeasible.json", text);
    let o = restruct(&["restructure", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("minimum feasible budget 2.0"), "{}", stderr(&o));
}

#[test]
fn disconnected_graph_exits_three() {
    let text = r#"{"kind": "spanning-tree", "stages": [{"graph": {"vertices": [1, 2, 3], "edges": [{"u": 1, "v": 2, "weight": "1"}]}}]}"#;
    let p = write_temp("disconnected.json", text);
    let o = restruct(&["solve", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn oracle_above_cap_exits_four() {
    let items: Vec<String> =
        (1..=30).map(|i| format!(r#"{{"id": {i}, "profit": "{i}", "weight": "1"}}"#)).collect();
    let text = format!(r#"{{"kind": "knapsack", "stages": [{{"instance": {{"items": [{}], "capacity": "5"}}}}]}}"#, items.join(","));
    let p = write_temp("big.json", &text);
    let o = restruct(&["solve", p.to_str().unwrap()]);
    assert!(o.status.success());
    let o = restruct(&["solve", p.to_str().unwrap(), "--oracle"]);
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
}

#[test]
fn sensor_zero_budget_is_empty_plan() {
    let o = restruct(&["restructure", fixture("sensor.json").to_str().unwrap(), "--budget", "0", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["plans"][0]["ops"], serde_json::json!([]));
    assert_eq!(v["plans"][0]["cost"], "0.0");
}

#[test]
fn single_stage_trajectory_is_one_plan() {
    let text = r#"{"kind": "ranking", "stages": [{"ranking": [[2], [1]], "costs": {"per_layer_step": "1"}, "budget": "5"}]}"#;
    let p = write_temp("single.json", text);
    let o = restruct(&["trajectory", p.to_str().unwrap(), "--scheme", "1", "--format", "json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["trajectories"].as_array().unwrap().len(), 1);
    assert_eq!(v["trajectories"][0]["steps"].as_array().unwrap().len(), 1);
}

#[test]
fn trajectory_error_names_the_stage() {
    let text = r#"{
      "kind": "knapsack",
      "stages": [
        {"instance": {"items": [{"id": 1, "profit": "1", "weight": "1"}], "capacity": "1"}},
        {"instance": {"items": [{"id": 1, "profit": "1", "weight": "1"}], "capacity": "1"}, "budget": "0"},
        {"instance": {"items": [{"id": 1, "profit": "1", "weight": "2"}], "capacity": "1"}, "budget": "0"}
      ]
    }"#;
    let p = write_temp("stage-error.json", text);
    let o = restruct(&["trajectory", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).contains("stage 2"), "{}", stderr(&o));
}

#[test]
fn json_reports_are_byte_stable() {
    for f in FIXTURES {
        let path = fixture(f);
        let path = path.to_str().unwrap();
        for args in [vec!["solve", path], vec!["restructure", path, "--oracle"]] {
            let mut args = args.clone();
            if f == "team.json" && args[0] == "restructure" {
                args.pop();
            }
            args.extend(["--format", "json"]);
            let a = restruct(&args);
            let b = restruct(&args);
            assert!(a.status.success(), "{f} {args:?}: {}", stderr(&a));
            assert_eq!(a.stdout, b.stdout, "{f} {args:?}");
        }
    }
}

fn knapsack_doc() -> impl Strategy<Value = InstanceDocument> {
    let item = (1u32..20, 0i64..50, 0i64..50);
    let stage = (prop::collection::vec(item, 0..6), 0i64..100, prop::option::of(0i64..30));
    prop::collection::vec(stage, 1..4).prop_map(|stages| {
        let stages: Vec<serde_json::Value> = stages
            .into_iter()
            .map(|(items, cap, budget)| {
                let mut seen = std::collections::BTreeSet::new();
                let items: Vec<serde_json::Value> = items
                    .into_iter()
                    .filter(|(id, _, _)| seen.insert(*id))
                    .map(|(id, p, w)| serde_json::json!({"id": id, "profit": p, "weight": w}))
                    .collect();
                let mut s = serde_json::json!({"instance": {"items": items, "capacity": cap}});
                if let Some(b) = budget {
                    s["budget"] = serde_json::json!(format!("{}.{}", b / 10, b % 10));
                }
                s
            })
            .collect();
        parse_document(&serde_json::json!({"kind": "knapsack", "stages": stages}).to_string()).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn parse_serialize_parse_is_identity(doc in knapsack_doc()) {
        let again = parse_document(&doc.to_json()).unwrap();
        prop_assert_eq!(&doc, &again);
        prop_assert_eq!(doc.to_json(), again.to_json());
    }
}

#[test]
fn ranking_solution_serializes_under_its_tag() {
    use restruct_core::restructure::{LayeredRanking, Solution};
    let s = Solution::Ranking(LayeredRanking::new(vec![[1u32].map(Into::into).into(), [2u32].map(Into::into).into()]).unwrap());
    let text = serde_json::to_string(&s).unwrap();
    assert_eq!(text, r#"{"type":"ranking","layers":[[1],[2]]}"#);
    assert_eq!(serde_json::from_str::<Solution>(&text).unwrap(), s);
}
