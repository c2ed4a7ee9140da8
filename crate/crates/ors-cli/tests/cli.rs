//! End-to-end tests of the `ors` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::tempdir;

fn ors(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ors"))
        .args(args)
        .env_remove("ORS_OUTPUT_DIR")
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, output_dir: &Path) -> std::path::PathBuf {
    let path = dir.join("campaign.json");
    let config = serde_json::json!({
        "problems": ["Fn14"],
        "algorithms": [{"id": "ors"}, {"id": "random"}],
        "runs": 2,
        "iterations": 25,
        "population": 8,
        "base_seed": 7,
        "output_dir": output_dir,
    });
    fs::write(&path, serde_json::to_string_pretty(&config).unwrap()).unwrap();
    path
}

#[test]
fn lists_problems_and_algorithms() {
    let out = ors(&["list-problems"]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    for id in ["Fn1", "Fn7", "Fn14", "pvd", "wbd", "sd"] {
        assert!(
            stdout.lines().any(|l| l.starts_with(&format!("{id}\t"))),
            "missing {id} in:\n{stdout}"
        );
    }

    let out = ors(&["list-algorithms"]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    for id in ["ors", "de", "random"] {
        assert!(stdout.lines().any(|l| l.starts_with(&format!("{id}\t"))));
    }
}

#[test]
fn runs_a_campaign_and_writes_reports() {
    let dir = tempdir().unwrap();
    let out_dir = dir.path().join("reports");
    let config = write_config(dir.path(), &out_dir);

    let out = ors(&["run", "--config", config.to_str().unwrap()]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("campaign complete"));
    assert!(stdout.contains("wilcoxon ors vs random"));

    for name in ["summary.csv", "wilcoxon.csv", "campaign.json"] {
        assert!(out_dir.join(name).exists(), "missing {name}");
    }
    assert_eq!(
        fs::read_dir(&out_dir)
            .unwrap()
            .filter(|e| e
                .as_ref()
                .unwrap()
                .file_name()
                .to_string_lossy()
                .starts_with("trace_"))
            .count(),
        4
    );

    // Reruns are byte-identical.
    let before = fs::read(out_dir.join("campaign.json")).unwrap();
    let out = ors(&["run", "--config", config.to_str().unwrap()]);
    assert!(out.status.success());
    let after = fs::read(out_dir.join("campaign.json")).unwrap();
    assert_eq!(before, after);
}

#[test]
fn output_dir_env_var_wins() {
    let dir = tempdir().unwrap();
    let configured = dir.path().join("configured");
    let overridden = dir.path().join("overridden");
    let config = write_config(dir.path(), &configured);

    let out = Command::new(env!("CARGO_BIN_EXE_ors"))
        .args(["run", "--config", config.to_str().unwrap()])
        .env("ORS_OUTPUT_DIR", &overridden)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(overridden.join("summary.csv").exists());
    assert!(!configured.exists());
}

#[test]
fn unknown_problem_id_fails_with_a_message() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("bad.json");
    let config = serde_json::json!({
        "problems": ["Fn99"],
        "algorithms": [{"id": "ors"}],
        "runs": 1,
        "iterations": 5,
        "population": 4,
        "output_dir": dir.path().join("out"),
    });
    fs::write(&path, config.to_string()).unwrap();

    let out = ors(&["run", "--config", path.to_str().unwrap()]);
    assert!(!out.status.success());
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("Fn99"), "stderr: {stderr}");
}

#[test]
fn wilcoxon_subcommand_reads_csv_columns() {
    let dir = tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    fs::write(&a, "value\n2\n3\n4\n5\n6\n7\n").unwrap();
    fs::write(&b, "0\n0\n0\n0\n0\n0\n").unwrap();

    let out = ors(&[
        "wilcoxon",
        "--a",
        a.to_str().unwrap(),
        "--b",
        b.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("W = 0"));
    assert!(stdout.contains("p_value = 0.03125"));
    assert!(stdout.contains("n_effective = 6"));
    assert!(stdout.contains("method = exact_enumeration"));
}

#[test]
fn wilcoxon_subcommand_rejects_mismatched_or_bad_input() {
    let dir = tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    fs::write(&a, "1\n2\n").unwrap();
    fs::write(&b, "1\n").unwrap();
    let out = ors(&[
        "wilcoxon",
        "--a",
        a.to_str().unwrap(),
        "--b",
        b.to_str().unwrap(),
    ]);
    assert!(!out.status.success());

    fs::write(&b, "1\nnot-a-number\n").unwrap();
    let out = ors(&[
        "wilcoxon",
        "--a",
        a.to_str().unwrap(),
        "--b",
        b.to_str().unwrap(),
    ]);
    assert!(!out.status.success());
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .contains("not-a-number"));
}
