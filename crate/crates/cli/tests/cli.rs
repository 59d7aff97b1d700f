use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const BELL: &str = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[2];\ncreg c[2];\nh q[0];\ncx q[0],q[1];\nmeasure q[0] -> c[0];\nmeasure q[1] -> c[1];\n";
const GHZ3: &str = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[3];\ncreg c[3];\nh q[0];\ncx q[0],q[1];\ncx q[1],q[2];\nmeasure q[0] -> c[0];\nmeasure q[1] -> c[1];\nmeasure q[2] -> c[2];\n";
const SIDECAR: &str = "[programs.bell]\nalgorithm = \"ghz\"\nalgorithm_group = \"ghz\"\noutput_dominance = \"diverse\"\n\n[programs.ghz_3]\nalgorithm = \"ghz\"\nalgorithm_group = \"ghz\"\noutput_dominance = \"diverse\"\n";

fn qmut(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmut"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("spawn qmut")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn workspace(files: &[(&str, &str)]) -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("src");
    fs::create_dir(&src).unwrap();
    fs::write(src.join("corpus.toml"), SIDECAR).unwrap();
    for (name, text) in files {
        fs::write(src.join(name), text).unwrap();
    }
    dir
}

/// generate + run over src/ into out/ with a small shot count.
fn campaign(dir: &Path) {
    for cmd in ["generate", "run"] {
        let o = qmut(&[cmd, "src", "--out", "out", "--shots", "20000"], dir);
        assert!(o.status.success(), "{cmd}: {}", stderr(&o));
    }
}

#[test]
fn empty_directory_exits_with_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    fs::create_dir(dir.path().join("empty")).unwrap();
    let o = qmut(&["generate", "empty"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("no circuits"), "{}", stderr(&o));
}

#[test]
fn bad_flag_exits_with_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = qmut(&["generate", "x", "--shots", "many"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bell_generate_summary() {
    let dir = workspace(&[("bell.qasm", BELL)]);
    let o = qmut(&["generate", "src", "--out", "out"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "generated 68 mutants from 1 circuits (Add=51, Remove=2, Replace=15)");
    let o = qmut(&["generate", "src", "--out", "out2", "--operators", "Remove"], dir.path());
    assert_eq!(stdout(&o).trim(), "generated 2 mutants from 1 circuits (Add=0, Remove=2, Replace=0)");
}

#[test]
fn broken_input_is_a_partial_failure() {
    let dir = workspace(&[("bell.qasm", BELL), ("broken.qasm", "OPENQASM 2.0;\nqreg q[1];\nfoo q[0];\n")]);
    let o = qmut(&["generate", "src", "--out", "out"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("broken.qasm"));
    assert!(stdout(&o).contains("from 1 circuits"));
}

#[test]
fn analyze_correlations_and_recommend() {
    let dir = workspace(&[("bell.qasm", BELL), ("ghz_3.qasm", GHZ3)]);
    let d = dir.path();
    campaign(d);

    let o = qmut(&["analyze", "--out", "out", "--grouping", "operator"], d);
    assert!(o.status.success(), "{}", stderr(&o));
    let table = fs::read_to_string(d.join("out/reports/sr_operator.csv")).unwrap();
    let lines: Vec<&str> = table.lines().collect();
    assert_eq!(lines[0], "operator,survivors,total,sr");
    assert_eq!(lines.len(), 4);
    assert!(d.join("out/reports/top_interactions.csv").exists());
    assert!(d.join("out/reports/heatmaps.json").exists());

    let o = qmut(&["correlations", "--out", "out"], d);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().count(), 8);

    let o = qmut(&["recommend", "--out", "out", "--algorithm", "ghz", "--sr", "0.9:1.0", "--max", "10"], d);
    assert!(o.status.success(), "{}", stderr(&o));
    let manifest: serde_json::Value = serde_json::from_slice(&fs::read(d.join("out/manifest.json")).unwrap()).unwrap();
    let items = manifest["items"].as_array().unwrap();
    assert!(!items.is_empty() && items.len() <= 10);
    for item in items {
        let sr = item["combination_sr"].as_f64().unwrap();
        assert!((0.9..=1.0).contains(&sr));
        assert!(d.join("out").join(item["path"].as_str().unwrap()).exists());
    }

    let o = qmut(
        &["recommend", "--out", "out", "--gate", "h", "--operator", "Remove", "--sr", "0.999:1.0", "--manifest", "none.json"],
        d,
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("warning"), "{}", stderr(&o));
    let manifest: serde_json::Value = serde_json::from_slice(&fs::read(d.join("none.json")).unwrap()).unwrap();
    assert!(manifest["items"].as_array().unwrap().is_empty());
}

#[test]
fn recommend_copies_selected_files() {
    let dir = workspace(&[("ghz_3.qasm", GHZ3)]);
    let d = dir.path();
    campaign(d);
    let o = qmut(&["recommend", "--out", "out", "--max", "3", "--copy-to", "picked"], d);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(fs::read_dir(d.join("picked")).unwrap().count(), 3);
}

#[test]
fn config_file_with_flag_overrides() {
    let dir = workspace(&[("bell.qasm", BELL)]);
    let d = dir.path();
    fs::write(d.join("qmut.toml"), "inputs = [\"src\"]\nout_dir = \"out\"\nshots = 500\n\n[enumeration]\noperator_filter = [\"Remove\"]\n").unwrap();
    let o = qmut(&["--config", "qmut.toml", "config", "--seed", "42"], d);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("shots = 500"));
    assert!(text.contains("seed = 42"));

    let o = qmut(&["--config", "qmut.toml", "generate"], d);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("Remove=2"));
    assert!(d.join("out/specs.jsonl").exists());

    fs::write(d.join("bad.toml"), "shot = 1\n").unwrap();
    let o = qmut(&["--config", "bad.toml", "generate"], d);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn corpus_command_writes_the_desk_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let o = qmut(&["corpus", "c"], dir.path());
    assert!(o.status.success());
    let n = fs::read_dir(dir.path().join("c")).unwrap().filter(|e| e.as_ref().unwrap().path().extension().is_some_and(|x| x == "qasm")).count();
    assert_eq!(n, 34);
    assert!(dir.path().join("c/corpus.toml").exists());
}
