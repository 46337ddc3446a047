use std::path::Path;
use std::process::{Command, Output};

fn fockdual(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fockdual")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn scalar_passes_every_suite() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "scalar.toml", "[bimodule]\nkind = \"builtin\"\nname = \"scalar\"\n");
    let json = dir.path().join("out.json");
    let out = fockdual(&["verify", &spec, "--window", "3", "--seed", "11", "--json", json.to_str().unwrap()]);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "{stdout}");
    assert!(stdout.contains("seed 11"));
    for suite in ["axioms", "creation-identities", "covariance", "pi-representation", "compact-generation", "sigma", "fourier", "a-alpha-picture"] {
        assert!(stdout.contains(suite), "missing {suite}");
    }

    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(v["seed"], 11);
    let entries = v["entries"].as_array().unwrap();
    assert!(!entries.is_empty());
    for e in entries {
        for key in ["suite", "check_id", "anchor", "violation", "pass"] {
            assert!(e.get(key).is_some(), "entry lacks {key}: {e}");
        }
    }
}

#[test]
fn half_compact_generation_fails_on_fullness() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.txt");
    let out = fockdual(&["verify", "builtin:half", "--suite", "compact-generation", "--report", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let text = std::fs::read_to_string(report).unwrap();
    assert!(text.contains("[FAIL] compact-generation   full-left"), "{text}");
    assert!(text.contains("fullness obstruction"), "{text}");
    assert!(text.contains("seed "));
}

#[test]
fn malformed_structure_constants_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "bad.toml",
        r#"
[algebra]
blocks = [1, 1]

[bimodule]
kind = "explicit"
dim = 1
left = [{ in = 0, alg = 0, out = 0, value = "1+2x" }]
"#,
    );
    let out = fockdual(&["verify", &spec]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bimodule.left[0].value"), "{err}");
}

#[test]
fn toml_syntax_error_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "broken.toml", "[bimodule\nkind = 1\n");
    let out = fockdual(&["verify", &spec]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));
}

#[test]
fn unknown_suite_and_bad_flags_exit_two() {
    assert_eq!(fockdual(&["verify", "builtin:swap", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(fockdual(&["verify", "builtin:swap", "--tol", "-1"]).status.code(), Some(2));
    assert_eq!(fockdual(&["verify", "builtin:swap", "--window", "x"]).status.code(), Some(2));
    assert_eq!(fockdual(&["verify", "/no/such/file.toml"]).status.code(), Some(2));
}

#[test]
fn ill_conditioned_tensor_exits_three() {
    // A itself over C+C, with the second basis vector rescaled so that its Gram
    // eigenvalue 3e-9 lands in the guard band [tol, 10 tol) of the kernel extraction
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "ill.toml",
        r#"
[algebra]
blocks = [1, 1]

[bimodule]
kind = "tensor"
factors = [
  { kind = "explicit", dim = 2,
    left = [{ in = 0, alg = 0, out = 0, value = 1 }, { in = 1, alg = 1, out = 1, value = 1 }],
    right = [{ in = 0, alg = 0, out = 0, value = 1 }, { in = 1, alg = 1, out = 1, value = 1 }],
    ip_left = [{ in = 0, alg = 0, out = 0, value = 1 }, { in = 1, alg = 1, out = 1, value = 3e-9 }],
    ip_right = [{ in = 0, alg = 0, out = 0, value = 1 }, { in = 1, alg = 1, out = 1, value = 3e-9 }] },
  { kind = "automorphism", permutation = [0, 1] },
]
"#,
    );
    let out = fockdual(&["verify", &spec, "--suite", "axioms"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("guard band"));
}

#[test]
fn reports_are_deterministic() {
    let run = || {
        let out = fockdual(&["verify", "builtin:matrix", "--seed", "5", "--samples", "5", "--suite", "sigma", "--suite", "covariance"]);
        let text = String::from_utf8_lossy(&out.stdout).into_owned();
        text.lines().filter(|l| l.starts_with('[')).map(String::from).collect::<Vec<_>>()
    };
    assert_eq!(run(), run());
}

#[test]
fn shipped_instances_run() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../instances");
    for (file, code) in [("inner-matrix.toml", 0), ("half-squared.toml", 1)] {
        let path = root.join(file);
        let out = fockdual(&["verify", path.to_str().unwrap(), "--samples", "5"]);
        assert_eq!(out.status.code(), Some(code), "{file}: {}", String::from_utf8_lossy(&out.stdout));
    }
}
