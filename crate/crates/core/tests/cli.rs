//! The command-line surface, run in-process.

use std::path::Path;

use serde_json::Value;
use tempfile::TempDir;

use cat0knot::cli::{run, EXIT_FAIL, EXIT_OK, EXIT_USAGE};

fn cat0knot(args: &[&str]) -> i32 {
    run(std::iter::once("cat0knot").chain(args.iter().copied()))
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn write_config(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn build_is_deterministic_and_records_cos_theta() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for out in [&a, &b] {
        let out = out.to_str().unwrap();
        assert_eq!(cat0knot(&["build", "--radius", "3", "--out", out]), EXIT_OK);
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let v = read_json(&a);
    assert_eq!(v["complex"]["theta"]["cos"], "3/5");
    assert_eq!(v["config"]["ball_radius"], 3);
}

#[test]
fn invalid_configs_are_usage_errors() {
    let dir = TempDir::new().unwrap();
    let bad = write_config(&dir, "bad.json", r#"{"p_minus": 2, "q_minus": 2}"#);
    assert_eq!(cat0knot(&["build", "--config", &bad]), EXIT_USAGE);
    let zero = write_config(&dir, "zero.json", r#"{"theta": {"cos": "1", "sin": "0", "d": 1}}"#);
    assert_eq!(cat0knot(&["build", "--config", &zero]), EXIT_USAGE);
    let unknown = write_config(&dir, "unknown.json", r#"{"radius": 3}"#);
    assert_eq!(cat0knot(&["build", "--config", &unknown]), EXIT_USAGE);
    assert_eq!(cat0knot(&["frobnicate"]), EXIT_USAGE);
    let out = dir.path().join("g.json");
    assert_eq!(
        cat0knot(&["geodesic", "--from", "(G-, 1, 0)", "--to", "(G+, 1, 0, 0)", "--out", out.to_str().unwrap()]),
        EXIT_USAGE
    );
}

#[test]
fn verify_reports_skips_and_faults() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("v.json");
    let o = out.to_str().unwrap();
    assert_eq!(cat0knot(&["verify", "--radius", "0", "--samples", "2", "--out", o]), EXIT_OK);
    let v = read_json(&out);
    let status = |name: &str| {
        v["checks"]
            .as_array()
            .unwrap()
            .iter()
            .find(|c| c["name"] == name)
            .unwrap()["status"]
            .clone()
    };
    assert_eq!(status("nerve_tree"), "skipped");
    assert_eq!(status("joint_loop_unit"), "pass");

    assert_eq!(
        cat0knot(&["verify", "--radius", "1", "--joint-depth", "1", "--samples", "1", "--fault-injection", "--out", o]),
        EXIT_FAIL
    );
    let v = read_json(&out);
    let c = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "joint_line_disjointness")
        .unwrap();
    assert_eq!(c["status"], "fail");
    assert!(!c["witness"]["intersections"].as_array().unwrap().is_empty());
}

#[test]
fn nerve_dot_export_is_a_tree() {
    let dir = TempDir::new().unwrap();
    let (out, dot) = (dir.path().join("n.json"), dir.path().join("n.dot"));
    assert_eq!(
        cat0knot(&[
            "nerve",
            "--which",
            "Nhat",
            "--radius",
            "2",
            "--dot",
            dot.to_str().unwrap(),
            "--out",
            out.to_str().unwrap()
        ]),
        EXIT_OK
    );
    assert_eq!(read_json(&out)["acyclic"], true);
    let text = std::fs::read_to_string(&dot).unwrap();
    assert!(text.starts_with("graph nerve_hat {"));
    let nodes = text.lines().filter(|l| l.contains("[shape=")).count();
    let edges = text.lines().filter(|l| l.contains(" -- ")).count();
    assert_eq!(nodes, edges + 1);
}

#[test]
fn polewalk_and_tits() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "quarter.json",
        r#"{"theta": {"cos": "1/2*sqrt(2)", "sin": "1/2*sqrt(2)", "d": 2}}"#,
    );
    let out = dir.path().join("p.json");
    let o = out.to_str().unwrap();
    assert_eq!(cat0knot(&["polewalk", "--steps", "8", "--config", &cfg, "--out", o]), EXIT_OK);
    let v = read_json(&out);
    assert_eq!(v["closure"], 8);
    assert_eq!(v["points"][8]["equals_z0"], true);

    assert_eq!(cat0knot(&["tits", "--from", "up", "--to", "omega", "--out", o]), EXIT_OK);
    assert_eq!(read_json(&out)["angle"]["cos"], "3/5");
    assert_eq!(cat0knot(&["tits", "--from", "up", "--to", "down", "--out", o]), EXIT_OK);
    assert_eq!(read_json(&out)["angle"]["cos"], "-1");
    assert_eq!(cat0knot(&["tits", "--from", "up", "--to", "sideways", "--out", o]), EXIT_USAGE);
}

#[test]
fn geodesic_between_point_literals() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("g.json");
    let o = out.to_str().unwrap();
    assert_eq!(
        cat0knot(&["geodesic", "--from", "(G-, a^1, 1/5, 1)", "--to", "(G+, b^2, 1/10, -1)", "--out", o]),
        EXIT_OK
    );
    let v = read_json(&out);
    assert_eq!(v["geodesic"]["certified"], true);
    assert_eq!(v["geodesic"]["itinerary"].as_array().unwrap().len(), 2);
}
