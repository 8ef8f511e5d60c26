use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use msa::interface::service;

const ENV_VARS: [&str; 11] = [
    "MSA_CONFIG",
    "MSA_BIND",
    "MSA_PORT",
    "MSA_DATA_DIR",
    "MSA_OUTPUT_DIR",
    "MSA_SEED",
    "MSA_LLM_BASE_URL",
    "MSA_LLM_MODEL",
    "MSA_LLM_TOKEN",
    "MSA_LLM_TIMEOUT_MS",
    "MSA_LLM_RETRIES",
];

const DEBATE: &str = r#"{
  "speaker_A": {"tone": "NEUTRAL", "position": "DETACH", "closure": "SINK", "logical_flow": "SCATTER", "context_alignment": "STANDALONE", "affective_tension": "FLAT"},
  "speaker_B": {"tone": "HIGHASSERT", "position": "SELFREF", "closure": "CUT", "logical_flow": "PIVOT", "context_alignment": "MERGE", "affective_tension": "TIGHT"},
  "task": "Simulate a debate on whether traditional examination systems should be abolished."
}"#;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn msa() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_msa"));
    for v in ENV_VARS {
        cmd.env_remove(v);
    }
    cmd
}

fn run(cmd: &mut Command) -> (i32, String, String) {
    let Output {
        status,
        stdout,
        stderr,
    } = cmd.output().unwrap();
    (
        status.code().unwrap(),
        String::from_utf8(stdout).unwrap(),
        String::from_utf8(stderr).unwrap(),
    )
}

fn run_stdin(cmd: &mut Command, input: &str) -> (i32, String) {
    let mut child = cmd
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
    )
}

#[test]
fn score_case_tables() {
    let expected = [
        ("case1", "9/9", "8/9", "8/9", "0%"),
        ("case2", "8/9", "7/9", "9/9", "50%"),
        ("case3", "8/9", "6/9", "8/9", "33%"),
        ("case4", "4/9", "3/9", "2/9", "75%"),
    ];
    for (case, p, r, c, shift) in expected {
        let file = fixture(&format!("{case}.subscores.json"));
        let (code, out, err) = run(msa().arg("score-case").arg(&file));
        assert_eq!(code, 0, "{err}");
        let row = |title: &str| {
            out.lines()
                .find(|l| l.starts_with(title))
                .unwrap_or_else(|| panic!("{case}: no {title} row in\n{out}"))
                .split_whitespace()
                .last()
                .unwrap()
                .to_string()
        };
        assert_eq!(row("Pragmatic Consistency"), p, "{case}");
        assert_eq!(row("Responsibility Chain"), r, "{case}");
        assert_eq!(row("Context Stability"), c, "{case}");
        assert_eq!(row("Speaker Role Shift Rate"), shift, "{case}");
    }
}

#[test]
fn score_case_json_with_heuristic() {
    let (code, out, _) = run(msa()
        .args(["score-case", "--json", "--transcript"])
        .arg(fixture("case4.jsonl"))
        .arg(fixture("case4.subscores.json")));
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["shift_rate_percent"], 75);
    assert_eq!(v["totals"]["context_stability"], 2);
    assert!(v["heuristic"]["role_continuity"].is_u64());
}

#[test]
fn annotate_matches_service_bytes() {
    for case in ["case1", "case2", "case3", "case4"] {
        let body = std::fs::read_to_string(fixture(&format!("{case}.jsonl"))).unwrap();
        let (code, out) = run_stdin(msa().args(["annotate", "-"]), &body);
        assert_eq!(code, 0);
        assert_eq!(out, service::annotate_json(&body).unwrap() + "\n");
    }
}

#[test]
fn graph_command() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    std::fs::write(
        &path,
        r#"{"nodes": ["a", "b", "c"], "edges": [{"from": "a", "to": "b"}, {"from": "b", "to": "a"}]}"#,
    )
    .unwrap();
    let (code, out, _) = run(msa().arg("graph").arg(&path));
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["loops"][0]["speakers"], serde_json::json!(["a", "b"]));
    assert_eq!(v["drift"], serde_json::json!(["c"]));
}

#[test]
fn exit_codes() {
    assert_eq!(run(msa().args(["compile", "#T_SOFTASSERT #E_TIGHT"])).0, 0);
    let (code, _, err) = run(msa().args(["compile", "#T_BANANA"]));
    assert_eq!(code, 2);
    assert!(err.starts_with("error [UnknownValue]"), "{err}");
    assert_eq!(
        run(msa().args(["compile", "#T_NEUTRAL #T_SOFTASSERT"])).0,
        2
    );
    assert_eq!(run(msa().args(["no-such-command"])).0, 2);
    assert_eq!(run(msa().args(["graph", "/no/such/file.json"])).0, 1);
    assert_eq!(run(msa().arg("--help")).0, 0);
}

#[test]
fn stats_json() {
    let (code, out, _) = run(msa().args([
        "stats",
        "--a",
        "1102,7.8,0.57",
        "--b",
        "373,6.4,0.24",
        "--reference-t",
        "44.64",
        "--json",
    ]));
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!((v["t_test"]["t"].as_f64().unwrap() - 46.06569273797673).abs() < 1e-9);
    assert!((v["delta"].as_f64().unwrap() - 1.42569273797673).abs() < 1e-9);
}

fn simulate_into(cmd: &mut Command, task: &Path, extra: &[&str]) -> PathBuf {
    let (code, out, err) = run(cmd
        .arg("simulate")
        .arg(task)
        .args(["--turns", "4", "--timestamp", "1"])
        .args(extra));
    assert_eq!(code, 0, "{err}");
    PathBuf::from(out.trim())
}

#[test]
fn simulate_settings_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let task = dir.path().join("task.json");
    std::fs::write(&task, DEBATE).unwrap();
    let from_file = dir.path().join("from-file");
    let from_env = dir.path().join("from-env");
    let from_cli = dir.path().join("from-cli");
    let config = dir.path().join("settings.json");
    std::fs::write(
        &config,
        serde_json::json!({"output_dir": from_file, "seed": 5}).to_string(),
    )
    .unwrap();

    let p = simulate_into(msa().env("MSA_CONFIG", &config), &task, &[]);
    assert!(p.starts_with(&from_file));
    let file_bytes = std::fs::read(&p).unwrap();

    let p = simulate_into(
        msa()
            .env("MSA_CONFIG", &config)
            .env("MSA_OUTPUT_DIR", &from_env),
        &task,
        &[],
    );
    assert!(p.starts_with(&from_env));
    assert_eq!(std::fs::read(&p).unwrap(), file_bytes);

    let p = simulate_into(
        msa()
            .args(["--config"])
            .arg(&config)
            .env("MSA_OUTPUT_DIR", &from_env),
        &task,
        &["--output-dir", from_cli.to_str().unwrap(), "--seed", "5"],
    );
    assert!(p.starts_with(&from_cli));
    assert_eq!(std::fs::read(&p).unwrap(), file_bytes);

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"colour": "red"}"#).unwrap();
    let (code, _, err) = run(msa().env("MSA_CONFIG", &bad).arg("simulate").arg(&task));
    assert_ne!(code, 0);
    assert!(err.contains("colour"), "{err}");
}

#[test]
fn simulate_seed_changes_output() {
    let dir = tempfile::tempdir().unwrap();
    let task = dir.path().join("task.json");
    std::fs::write(&task, DEBATE).unwrap();
    let runs: Vec<Vec<u8>> = (0..8)
        .map(|seed| {
            let out = dir.path().join(format!("s{seed}"));
            let p = simulate_into(
                &mut msa(),
                &task,
                &[
                    "--seed",
                    &seed.to_string(),
                    "--output-dir",
                    out.to_str().unwrap(),
                ],
            );
            std::fs::read(p).unwrap()
        })
        .collect();
    assert!(runs.iter().any(|r| r != &runs[0]));
}

#[test]
fn simulate_finds_task_in_data_dir() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data");
    std::fs::create_dir(&data).unwrap();
    std::fs::write(data.join("debate.json"), DEBATE).unwrap();
    let out = dir.path().join("output");
    let (code, stdout, err) = run(msa()
        .current_dir(dir.path())
        .env("MSA_DATA_DIR", &data)
        .args([
            "simulate",
            "debate.json",
            "--turns",
            "2",
            "--timestamp",
            "9",
        ])
        .args(["--output-dir", out.to_str().unwrap()]));
    assert_eq!(code, 0, "{err}");
    let path = PathBuf::from(stdout.trim());
    assert!(path
        .file_name()
        .unwrap()
        .to_str()
        .unwrap()
        .ends_with(".9.jsonl"));
    assert_eq!(std::fs::read_to_string(path).unwrap().lines().count(), 3);
}
