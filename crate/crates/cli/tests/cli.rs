use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

use laxcat::check::{dump_instance, CheckSettings, Theorem};
use laxcat::generator::GenParams;
use laxcat::io::to_json_pretty;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn laxcat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_laxcat")).args(args).output().expect("binary runs")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn path(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn twisted_arrow_of_the_walking_arrow_is_a_span() {
    let o = laxcat(&["tw", path(&data("walking_arrow.json"))]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["objects"].as_array().unwrap().len(), 3);
    assert_eq!(v["morphisms"].as_array().unwrap().len(), 2);
}

#[test]
fn walking_isomorphism_is_equivalent_to_the_point() {
    let o = laxcat(&["equiv", path(&data("walking_iso.json")), path(&data("terminal.json"))]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["verdict"], "equivalent");
    let o = laxcat(&["equiv", path(&data("walking_arrow.json")), path(&data("terminal.json"))]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["verdict"], "inequivalent");
    assert!(json(&o)["certificate"].is_object());
}

#[test]
fn free_monoid_localization_reports_the_bound() {
    let o = laxcat(&["localize", path(&data("free_monoid.json"))]);
    assert_eq!(o.status.code(), Some(2));
    let v = json(&o);
    assert_eq!(v["status"], "bound_exceeded");
    assert!(v["bound"]["limit"].is_u64());
}

#[test]
fn sharp_arrow_localizes_to_an_isomorphism() {
    let o = laxcat(&["localize", path(&data("walking_arrow_sharp.json"))]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["status"], "completed");
    assert_eq!(v["category"]["morphisms"].as_array().unwrap().len(), 2);
}

#[test]
fn invalid_input_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"objects": ["a"], "morphisms": [{"id": "f", "src": "a", "tgt": "b"}]}"#).unwrap();
    assert_eq!(laxcat(&["validate", path(&bad)]).status.code(), Some(3));
    std::fs::write(&bad, "not json").unwrap();
    assert_eq!(laxcat(&["skeleton", path(&bad)]).status.code(), Some(3));
    assert_eq!(laxcat(&["tw", path(&dir.path().join("missing.json"))]).status.code(), Some(3));
    assert_eq!(laxcat(&["check", "no-such-theorem"]).status.code(), Some(3));
}

#[test]
fn validate_detects_the_file_kind() {
    let kind = |f: &str| json(&laxcat(&["validate", path(&data(f))]))["kind"].as_str().unwrap().to_string();
    assert_eq!(kind("walking_arrow.json"), "category");
    assert_eq!(kind("point_into_arrow.json"), "diagram");
    assert_eq!(kind("free_monoid.json"), "presentation");
}

#[test]
fn limits_and_colimits_of_the_running_example() {
    let d = data("point_into_arrow.json");
    let lax = json(&laxcat(&["laxlim", path(&d)]));
    assert_eq!(lax["category"]["objects"].as_array().unwrap().len(), 2);
    assert_eq!(lax["projections"].as_object().unwrap().len(), 2);
    let colim = laxcat(&["laxcolim", path(&d)]);
    assert_eq!(colim.status.code(), Some(0));
    assert_eq!(json(&colim)["category"]["objects"].as_array().unwrap().len(), 3);
    let total = json(&laxcat(&["grothendieck", path(&d)]));
    assert_eq!(total["objects"].as_array().unwrap().len(), 3);
    let marked = json(&laxcat(&["sections", "--marked", path(&d)]));
    assert_eq!(marked["objects"].as_array().unwrap().len(), 2);
}

#[test]
fn out_writes_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("skel.json");
    let o = laxcat(&["skeleton", path(&data("walking_iso.json")), "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["objects"].as_array().unwrap().len(), 1);
}

#[test]
fn slices_take_an_object() {
    let o = laxcat(&["coslice", path(&data("walking_arrow_sharp.json")), "--object", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["objects"].as_array().unwrap().len(), 2);
    assert_eq!(laxcat(&["slice", path(&data("walking_arrow.json")), "--object", "7"]).status.code(), Some(3));
}

#[test]
fn check_reports_are_json_with_wall_time_on_stderr() {
    let o = laxcat(&["check", "cofinality-left", "--seed", "1", "--count", "20"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["passes"], 20);
    assert!(v.get("wall_time").is_none());
    assert!(String::from_utf8_lossy(&o.stderr).contains("20/20"));
}

#[test]
fn skip_quota_turns_bound_hits_into_exit_two() {
    let o = laxcat(&["check", "thm-lax-lim", "--count", "6", "--cap-morphisms", "4", "--max-skip", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(json(&o)["bound_exceeded"].as_u64().unwrap() > 0);
}

#[test]
fn probe_manifests_replace_the_suite() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dir.path().join("probes.json");
    let entries = format!(r#"[{{"name": "arrow", "category": "{}"}}]"#, path(&data("walking_arrow.json")));
    std::fs::write(&manifest, entries).unwrap();
    let o = laxcat(&["check", "thm-lax-colim-probe", "--count", "3", "--max-skip", "3", "--probes", path(&manifest)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn dumps_replay_and_their_diagrams_recompute() {
    let dir = tempfile::tempdir().unwrap();
    let params = GenParams { seed: 4, ..Theorem::LaxLim.default_params() };
    let dump = dump_instance(Theorem::LaxLim, &params, 1, &CheckSettings::default()).unwrap();
    let file = dir.path().join("dump.json");
    std::fs::write(&file, to_json_pretty(&dump)).unwrap();
    let o = laxcat(&["replay", path(&file)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["same"], true);

    let diagram = dir.path().join("dump.diagram.json");
    std::fs::write(&diagram, to_json_pretty(dump.instance.diagram.as_ref().unwrap())).unwrap();
    let lax = laxcat(&["laxlim", path(&diagram)]);
    assert_eq!(lax.status.code(), Some(0));
    let sections = laxcat(&["sections", "--marked", path(&diagram)]);
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    std::fs::write(&a, serde_json::to_string(&json(&lax)["category"]).unwrap()).unwrap();
    std::fs::write(&b, &sections.stdout).unwrap();
    assert_ne!(json(&laxcat(&["equiv", path(&a), path(&b)]))["verdict"], "inequivalent");
}
