use std::path::PathBuf;
use std::process::{Command, Output};

fn ramify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ramify")).args(args).output().expect("binary runs")
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).display().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn chartab_text_and_json() {
    let o = ramify(&["chartab", "S3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("order 6"));
    assert!(text.contains("X3: 2, 0, -1"), "{text}");

    let o = ramify(&["chartab", "S4", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["order"], 24);
    assert_eq!(v["degrees"], serde_json::json!([1, 1, 2, 3, 3]));
}

#[test]
fn output_is_deterministic() {
    let a = ramify(&["chartab", "SL2F3", "--format", "json"]);
    let b = ramify(&["chartab", "SL2F3", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
}

fn abelian_normal(group: &str) -> Vec<String> {
    let o = ramify(&["subgroups", group]);
    assert_eq!(o.status.code(), Some(0));
    stdout(&o).lines().map(|l| l.split(": ").nth(1).unwrap().to_string()).collect()
}

#[test]
fn decide_exit_codes() {
    let yes = ramify(&["decide", "S4", "--property", "totally"]);
    assert_eq!(yes.status.code(), Some(0), "{}", stderr(&yes));
    assert!(stdout(&yes).contains("totally unramified: yes"));

    let no = ramify(&["decide", "SL2F3", "--property", "totally-pseudo"]);
    assert_eq!(no.status.code(), Some(1), "{}", stderr(&no));

    // The Klein four subgroup of S4 is the only candidate.
    let v4 = abelian_normal("S4");
    assert_eq!(v4.len(), 1);
    let o = ramify(&["decide", "S4", "--property", "unramified", "--over", &v4[0]]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));

    // The centre of Q8: the 2-dimensional irreducible restricts to twice the
    // sign character.
    let centre = abelian_normal("Q8").into_iter().find(|s| s.split(',').count() == 2).unwrap();
    for p in ["unramified", "pseudo"] {
        let o = ramify(&["decide", "Q8", "--property", p, "--over", &centre]);
        assert_eq!(o.status.code(), Some(1), "{p}: {}", stderr(&o));
    }
}

#[test]
fn decide_rejects_trivial_and_nonnormal() {
    let o = ramify(&["decide", "S4", "--property", "unramified", "--over", "elements:0"]);
    assert_eq!(o.status.code(), Some(2));
    let o = ramify(&["decide", "S4", "--property", "unramified", "--over", "generators:1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("normal"));
}

#[test]
fn decide_local_needs_over() {
    let o = ramify(&["decide", "S3", "--property", "pseudo"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--over"));
}

#[test]
fn decide_rejects_non_subgroup() {
    let o = ramify(&["decide", "S3", "--property", "unramified", "--over", "elements:0,1,2"]);
    assert_eq!(o.status.code(), Some(2), "{}", stdout(&o));
}

#[test]
fn certificate_round_trip() {
    let path = scratch("d8_cert.json");
    let p = path.display().to_string();
    let o = ramify(&["--out", &p, "decide", "D8", "--property", "totally-pseudo"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = ramify(&["replay", "D8", &p]);
    assert_eq!(r.status.code(), Some(0), "{}", stderr(&r));
    assert!(stdout(&r).contains("certificate valid"));

    // Replaying against a different group must not succeed.
    let r = ramify(&["replay", "S4", &p]);
    assert_ne!(r.status.code(), Some(0));
}

#[test]
fn complete_permutation_action() {
    let o = ramify(&["complete", "S3", "permutation"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("complete: yes"));
}

#[test]
fn complete_real_quarter_turn_is_no() {
    let o = ramify(&["complete", &fixture("z4.json"), &fixture("quarter_turn.json"), "--field", "real"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("complete: no"));
}

#[test]
fn invariants_verify_standard_s3() {
    let o = ramify(&["invariants", "S3", "standard", "--verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.starts_with("7 invariant generators"), "{text}");
    assert!(text.contains("verification: pass"));
}

#[test]
fn invariants_json_from_files() {
    let o = ramify(&[
        "invariants",
        &fixture("z3.json"),
        &fixture("z3_diagonal.json"),
        "--field",
        "complex",
        "--verify",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["variables"], serde_json::json!(["x", "y", "z"]));
    assert_eq!(v["verification"]["failures"], serde_json::json!([]));
}

#[test]
fn invariants_unsupported_reports_completeness() {
    let o = ramify(&["invariants", &fixture("z4.json"), &fixture("quarter_turn.json"), "--field", "real"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("complete: no"), "{err}");
    assert!(err.contains("error:"));

    let o = ramify(&["invariants", &fixture("z4.json"), &fixture("quarter_turn.json"), "--field", "complex"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn unknown_group_is_an_error() {
    let o = ramify(&["chartab", "NoSuchGroup"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error:"));
}

#[test]
fn budget_is_enforced() {
    let o = ramify(&["--budget-elements", "10", "chartab", "S4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn missing_user_table_names_the_variable() {
    let o = Command::new(env!("CARGO_BIN_EXE_ramify"))
        .args(["chartab", "catalog:48:15"])
        .env("RAMIFY_CATALOG", scratch("empty-catalog"))
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("RAMIFY_CATALOG"));
}

#[test]
fn catalog_show_round_trips_through_a_file() {
    let o = ramify(&["catalog", "show", "D8"]);
    assert_eq!(o.status.code(), Some(0));
    let path = scratch("d8.json");
    std::fs::write(&path, &o.stdout).unwrap();
    let t = ramify(&["chartab", &path.display().to_string(), "--format", "json"]);
    assert_eq!(t.status.code(), Some(0), "{}", stderr(&t));
    let v: serde_json::Value = serde_json::from_slice(&t.stdout).unwrap();
    assert_eq!(v["order"], 8);
}

#[test]
fn dihedral_pi_omega() {
    let o = ramify(&["complete", "D6", &fixture("d6_pi_omega.json")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = ramify(&["complete", "D10", &fixture("d10_pi_omega.json")]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
}

#[test]
fn regular_completeness_matches_totally_pseudo() {
    for g in ["S3", "D8", "Q8", "SL2F3", "D10"] {
        let a = ramify(&["complete", g, "regular"]).status.code();
        let b = ramify(&["decide", g, "--property", "totally-pseudo"]).status.code();
        assert!(a == b && a.is_some_and(|c| c < 2), "{g}: {a:?} vs {b:?}");
    }
}

#[test]
fn permutation_actions_on_three_variables() {
    for (group, count) in [(fixture("z3.json"), 7), ("S3".to_string(), 13)] {
        let o = ramify(&["invariants", &group, "permutation", "--field", "real", "--verify"]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let text = stdout(&o);
        assert!(text.starts_with(&format!("{count} invariant generators")), "{text}");
        assert!(text.contains("verification: pass"));
    }
}
