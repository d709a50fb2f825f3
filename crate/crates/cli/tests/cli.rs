use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ulab_cli::config::ExperimentConfig;

fn ulab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ulab")).args(args).output().unwrap()
}

fn configs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

const ONE_POINT: &str = r#"
schema_version = 1
[structure]
size = 1
[[structure.relations]]
name = "P"
arity = 1
tuples = [[0]]
[[array.labels]]
name = "w"
domain = "omega"
oracle = "factorial-tower"
[suite.transfer]
depth = 2
nodes = 5
"#;

#[test]
fn germ_arguments() {
    let out = ulab(&["germ", "classify", "(2*n+1)/(n+1)"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "Appreciable(2)\n");
    let out = ulab(&["germ", "compare", "-1/n", "0"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "<\n");
    let out = ulab(&["germ", "eval", "n^2/(n+1)", "3"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "9/4\n");
    let out = ulab(&["germ", "standard-part", "(3*n+1)/(6*n)"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "1/2\n");
    let out = ulab(&["germ", "classify", "(n"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("expression `(n`"));
}

#[test]
fn one_point_transfer_passes() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "c.toml", ONE_POINT);
    let out_dir = dir.path().join("r");
    let out = ulab(&["transfer-check", "--config", &config, "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains(" 0 counterexamples"));
    let text = std::fs::read_to_string(out_dir.join("transfer-check.txt")).unwrap();
    assert!(text.starts_with("transfer-check: PASS (1 checks, 0 failed)\n"));
    assert!(text.contains("sentences, 0 counterexamples, 0 undecidable"));
    let jsonl = std::fs::read_to_string(out_dir.join("transfer-check.results.jsonl")).unwrap();
    assert!(jsonl.starts_with("{\"suite\":\"transfer-check\",\"case_id\":\"given/array\",\"verdict\":\"pass\",\"detail\":"));
}

#[test]
fn configuration_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.toml", &ONE_POINT.replace("nodes = 5", "nodes = 5\nrelations = [\"Q\"]"));
    let out = ulab(&["transfer-check", "--config", &bad]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("suite.transfer.relations[0]: unknown relation `Q`"), "{err}");

    let typo = write(dir.path(), "typo.toml", &ONE_POINT.replace("size = 1", "sise = 1"));
    let out = ulab(&["transfer-check", "--config", &typo]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("structure.sise"));

    let fuzz = write(dir.path(), "fuzz.toml", "schema_version = 1\n[suite.fubini]\ncount = 3\n");
    let out = ulab(&["fubini-check", "--config", &fuzz]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains(": seed: required"));

    let out = ulab(&["transfer-check", "--config", dir.path().join("missing.toml").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(ulab(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn counterexamples_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let mutated = ONE_POINT.replace("nodes = 5", "nodes = 3\nmutation = \"broken-complement\"");
    let config = write(dir.path(), "m.toml", &mutated);
    let out_dir = dir.path().join("r");
    let out = ulab(&["transfer-check", "--config", &config, "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let text = std::fs::read_to_string(out_dir.join("transfer-check.txt")).unwrap();
    assert!(text.starts_with("transfer-check: FAIL"));
    assert!(text.contains("counterexample given/array: "));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let config = configs_dir().join("smoke.toml");
    let runs: Vec<PathBuf> = (0..2).map(|i| dir.path().join(format!("run{i}"))).collect();
    for r in &runs {
        let out = ulab(&["all", "--config", config.to_str().unwrap(), "--out", r.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let mut names: Vec<String> = std::fs::read_dir(&runs[0]).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    assert_eq!(names.len(), 13);
    for n in &names {
        assert_eq!(std::fs::read(runs[0].join(n)).unwrap(), std::fs::read(runs[1].join(n)).unwrap(), "{n}");
    }
    // a different seed gives different random cases
    let other = dir.path().join("other");
    ulab(&["fubini-check", "--config", config.to_str().unwrap(), "--seed", "1", "--out", other.to_str().unwrap()]);
    assert_ne!(
        std::fs::read(runs[0].join("fubini-check.results.jsonl")).unwrap(),
        std::fs::read(other.join("fubini-check.results.jsonl")).unwrap()
    );
}

#[test]
fn shipped_configs_round_trip() {
    let mut seen = 0;
    for entry in std::fs::read_dir(configs_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "toml") {
            let c = ExperimentConfig::load(&path).unwrap();
            let again = ExperimentConfig::parse(&c.render(), "rendered").unwrap();
            assert_eq!(c, again, "{}", path.display());
            seen += 1;
        }
    }
    assert!(seen >= 2);
}

#[test]
fn array_build_dumps_the_definable_array() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "d.toml", "schema_version = 1\n[array.definable]\ntheta = 1\nn = 2\n");
    let out_dir = dir.path().join("r");
    let out = ulab(&["array-build", "--config", &config, "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(out_dir.join("array-build.txt")).unwrap();
    assert_eq!(
        text,
        "array-build: PASS (3 checks, 0 failed)\n\
         theta = 1, n = 2: 2 ultrafilter-base maps\n\
         pass order labels strictly increasing in the lexicographic order\n\
         pass a000 a[{1}] -> Principal(1) over Finite(2)\n\
         pass a001 a[{0}] -> Principal(0) over Finite(2)\n"
    );
}
