use ftspan_web::{build_json, describe_json, generate_text, verify_json};
use serde_json::Value;

fn parse(text: &str) -> Value {
    serde_json::from_str(text).expect("valid json")
}

#[test]
fn every_family_generates_a_drawable_graph() {
    for family in ["triangle", "cycle-chords", "cloud-cycle", "random"] {
        let g = generate_text(family, 4, 1, "2", 1).unwrap();
        let d = parse(&describe_json(&g).unwrap());
        assert!(d["n"].as_u64().unwrap() >= 3, "{family}");
        assert!(!d["edges"].as_array().unwrap().is_empty(), "{family}");
    }
}

#[test]
fn built_spanners_verify_and_round_trip_through_verify() {
    let g = generate_text("cloud-cycle", 4, 1, "2", 0).unwrap();
    for algo in ["greedy", "poly"] {
        let summary = parse(&build_json(&g, algo, "2", 1, 3).unwrap());
        assert_eq!(summary["verification"]["verdict"], "pass", "{algo}");
        let ids: Vec<String> = summary["spanner_edges"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.to_string())
            .collect();
        let report = parse(&verify_json(&g, &ids.join(","), "2", 1).unwrap());
        assert_eq!(report["verdict"], "pass");
    }
}

#[test]
fn triangle_greedy_is_competitive() {
    let g = generate_text("triangle", 30, 1, "3", 0).unwrap();
    let summary = parse(&build_json(&g, "greedy", "3", 1, 0).unwrap());
    let ell2 = summary["competitive"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["f"] == 2)
        .unwrap()
        .clone();
    assert_eq!(ell2["value"], "1");
}

#[test]
fn verify_reports_a_witness_for_a_sparse_selection() {
    let g = generate_text("triangle", 10, 1, "3", 0).unwrap();
    let report = parse(&verify_json(&g, "0 1", "3", 1).unwrap());
    assert_eq!(report["verdict"], "fail");
    assert!(report["witness"].is_object());
    assert!(verify_json(&g, "0, 9", "3", 1).is_err());
    assert!(verify_json(&g, "x", "3", 1).is_err());
}
