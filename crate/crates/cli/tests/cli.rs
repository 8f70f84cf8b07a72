use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(format!("{name}.json"))
}

fn topoplan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_topoplan")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn plan_then_validate_frame() {
    let dir = tempfile::tempdir().unwrap();
    let traj = dir.path().join("t.txt");
    let svg = dir.path().join("t.svg");
    let dot = dir.path().join("g.dot");
    let scene = fixture("frame");
    let o = topoplan(&[
        "plan", s(&scene), "--seed", "0", "--check-budget", "--out", s(&traj), "--svg", s(&svg), "--dot", s(&dot),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(fs::read_to_string(&traj).unwrap().starts_with("# scene: frame\n"));
    assert!(fs::read_to_string(&svg).unwrap().contains("<svg"));
    assert!(fs::read_to_string(&dot).unwrap().starts_with("graph channels {"));

    let o = topoplan(&["validate", s(&scene), s(&traj)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn validate_rejects_waypoint_inside_obstacle() {
    let dir = tempfile::tempdir().unwrap();
    let traj = dir.path().join("t.txt");
    let scene = fixture("frame");
    let o = topoplan(&["plan", s(&scene), "--seed", "1", "--check-budget", "--out", s(&traj)]);
    assert_eq!(code(&o), 0);
    let text = fs::read_to_string(&traj).unwrap();
    let mut lines: Vec<&str> = text.lines().collect();
    let first = lines.iter().position(|l| !l.starts_with('#')).unwrap();
    assert!(lines.len() - first >= 3, "need an interior waypoint");
    // Object centre inside beam_bottom.
    lines[first + 1] = "0 0 0.15 0 0 1.5707963267948966";
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, lines.join("\n") + "\n").unwrap();
    let o = topoplan(&["validate", s(&scene), s(&bad)]);
    assert_eq!(code(&o), 1);
}

#[test]
fn validate_rejects_moved_endpoint() {
    let dir = tempfile::tempdir().unwrap();
    let traj = dir.path().join("t.txt");
    fs::write(&traj, "-0.6 0 0.5 0 0 1.5707963267948966\n0.6 0 0.55 0 0 1.5707963267948966\n").unwrap();
    let o = topoplan(&["validate", s(&fixture("frame")), s(&traj)]);
    assert_eq!(code(&o), 1);
}

#[test]
fn plan_is_byte_identical_in_check_budget_mode() {
    let run = || topoplan(&["plan", s(&fixture("two_chamber")), "--seed", "3", "--check-budget"]).stdout;
    let a = run();
    assert!(!a.is_empty());
    assert_eq!(a, run());
}

#[test]
fn plan_failure_exits_one() {
    let o = topoplan(&["plan", s(&fixture("offset_slits")), "--time-limit", "0.001", "--check-budget"]);
    assert_eq!(code(&o), 1);
    assert!(o.stdout.is_empty());
}

#[test]
fn bench_empty_directory_is_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = topoplan(&["bench", s(dir.path())]);
    assert_eq!(code(&o), 2);
}

#[test]
fn bench_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    fs::copy(fixture("frame"), dir.path().join("frame.json")).unwrap();
    fs::write(dir.path().join("manifest.json"), "{}").unwrap();
    let csv = dir.path().join("out.csv");
    let o = topoplan(&[
        "bench", s(dir.path()), "--planners", "tapom,birrt_plain", "--trials", "2", "--check-budget", "--csv", s(&csv),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "scene,planner,seed,success,elapsed_s,waypoints,joint_len,trans_len_m,rot_len_rad"
    );
    assert_eq!(lines.count(), 4);
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert!(stdout.contains("birrt_plain"));
}

#[test]
fn bench_rejects_unknown_planner() {
    let o = topoplan(&["bench", s(&fixture("frame")), "--planners", "prm"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn bad_config_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    fs::write(&cfg, r#"{"n_key": -3}"#).unwrap();
    let o = topoplan(&["plan", s(&fixture("frame")), "--config", s(&cfg)]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("n_key"));
}

#[test]
fn bad_scene_names_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let scene = dir.path().join("s.json");
    let text = fs::read_to_string(fixture("frame")).unwrap().replace("\"schema_version\": 1", "\"schema_version\": 9");
    fs::write(&scene, text).unwrap();
    let o = topoplan(&["analyze", s(&scene)]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("schema_version"));
}

#[test]
fn analyze_writes_topology_dot() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("t.dot");
    let o = topoplan(&["analyze", s(&fixture("frame")), "--dot", s(&dot)]);
    assert_eq!(code(&o), 0);
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert!(stdout.contains("1 loops"), "{stdout}");
    assert!(stdout.contains("area 0.16000"));
    assert!(fs::read_to_string(&dot).unwrap().contains("beam_top"));
}
