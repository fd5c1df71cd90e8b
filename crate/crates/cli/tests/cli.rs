use std::path::Path;
use std::process::{Command, Output};

fn focklat(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_focklat"))
        .current_dir(dir)
        .args(args)
        .env_remove("FOCKLAT_THREADS")
        .output()
        .expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn build_writes_function_and_lattice() {
    let dir = tempfile::tempdir().unwrap();
    let o = focklat(dir.path(), &["build", "fail:q=2", "--out", "o"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let f: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("o/fail_q_2.function.json")).unwrap()).unwrap();
    assert_eq!(f["factors"].as_array().unwrap().len(), 13);
    assert!(dir.path().join("o/fail_q_2.lattice.json").exists());

    let o = focklat(dir.path(), &["build", "--preset", "known:0.8", "--out", "o"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(dir.path().join("o/known_0.8.adjoint.json").exists());
}

#[test]
fn verify_from_files_and_presets() {
    let dir = tempfile::tempdir().unwrap();
    focklat(dir.path(), &["build", "fail:q=2", "--out", "o"]);
    let o = focklat(
        dir.path(),
        &["verify", "--function", "o/fail_q_2.function.json", "--lattice", "o/fail_q_2.lattice.json", "--suite", "vanish", "--out", "o", "--radius", "4"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("o/fail_q_2.vanish.json")).unwrap()).unwrap();
    assert_eq!(r["pass"], true);

    let o = focklat(dir.path(), &["verify", "--preset", "fail:q=2", "--suite", "growth", "--out", "o", "--radius", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(dir.path().join("o/fail_q_2.growth.dat").exists());
}

#[test]
fn unbounded_growth_fails_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = focklat(dir.path(), &["verify", "--preset", "tensor:hexagonal", "--suite", "growth", "--radius", "6"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn sigma_function_is_not_interpolating() {
    let dir = tempfile::tempdir().unwrap();
    let o = focklat(dir.path(), &["verify", "--preset", "fail:q=2", "--suite", "interp", "--radius", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stdout).contains("origin value zero"));
    let r = std::fs::read_to_string(dir.path().join("out/fail_q_2.interp.json")).unwrap();
    assert!(r.contains("origin value zero"));
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = focklat(dir.path(), &["build", "square"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown preset"));

    let o = focklat(dir.path(), &["build", "fail:q=1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("|q|²"));

    std::fs::write(dir.path().join("bad.toml"), "snap_tol = 0.1\n").unwrap();
    let o = focklat(dir.path(), &["--config", "bad.toml", "build", "fail:q=2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("snap_tol") && stderr(&o).contains("0.1"));

    std::fs::write(dir.path().join("typo.toml"), "max_raduis = 4\n").unwrap();
    assert_eq!(focklat(dir.path(), &["--config", "typo.toml", "build", "fail:q=2"]).status.code(), Some(2));

    std::fs::write(dir.path().join("f.json"), "{\"dim\": 2").unwrap();
    let o = focklat(dir.path(), &["verify", "--function", "f.json", "--lattice", "f.json", "--suite", "vanish"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("malformed"));

    let o = Command::new(env!("CARGO_BIN_EXE_focklat"))
        .current_dir(dir.path())
        .args(["build", "fail:q=2"])
        .env("FOCKLAT_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &'static str| ["verify", "--preset", "fail:q=2+i", "--suite", "growth", "--radius", "4", "--out", out];
    focklat(dir.path(), &args("a"));
    let o = Command::new(env!("CARGO_BIN_EXE_focklat"))
        .current_dir(dir.path())
        .args(args("b"))
        .env("FOCKLAT_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    for f in ["fail_q_2_i.growth.json", "fail_q_2_i.growth.dat"] {
        let a = std::fs::read(dir.path().join("a").join(f)).unwrap();
        let b = std::fs::read(dir.path().join("b").join(f)).unwrap();
        // the config block records the output directory, so compare everything else
        let strip = |v: Vec<u8>| String::from_utf8(v).unwrap().replace("\"a\"", "\"b\"");
        assert_eq!(strip(a), strip(b), "{f}");
    }
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("run.toml"), "max_radius = 3.0\nformat = \"csv\"\noutput_dir = \"fromcfg\"\n").unwrap();
    let o = focklat(dir.path(), &["--config", "run.toml", "verify", "--preset", "fail:q=2", "--suite", "growth", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("fromcfg/fail_q_2.growth.json")).unwrap()).unwrap();
    assert_eq!(r["config"]["max_radius"], 3.0);
    assert_eq!(r["report"]["radii"].as_array().unwrap().len(), 3);
}
