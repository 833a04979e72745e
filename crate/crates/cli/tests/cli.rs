use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

use primerline::featmodel::id_family_model;
use primerline::idspec::{derive_specification, preset_configuration};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/data")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_primerline"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let out = run(&all);
    let stdout = String::from_utf8(out.stdout).unwrap();
    let value: Value = serde_json::from_str(&stdout).unwrap_or_else(|e| panic!("{e}: {stdout:?}"));
    let code = out.status.code().unwrap();
    assert_eq!(value["exit_code"], json!(code));
    (code, value)
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn fig8_config(extra: &[&str]) -> Value {
    let mut select = serde_json::Map::new();
    for name in [
        "InstructionalDesign",
        "GoalClassification",
        "GoalPriority",
        "High",
        "IPCL",
        "InstructionalDesignModel",
        "GagneModel",
        "Play",
        "Act",
        "Scene",
        "Instruction",
    ]
    .iter()
    .chain(extra)
    {
        select.insert(name.to_string(), json!(1));
    }
    json!({"model": "Figure8", "select": select})
}

fn write_json(dir: &TempDir, name: &str, value: &Value) -> String {
    let path = dir.path().join(name);
    fs::write(&path, value.to_string()).unwrap();
    path.to_string_lossy().into_owned()
}

fn preset(dir: &TempDir, n: u8) -> String {
    let path = dir.path().join(format!("preset{n}.json"));
    let out = run(&[
        "spec",
        "preset",
        &n.to_string(),
        "-o",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    path.to_string_lossy().into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn model_check_and_count() {
    let fig8 = data("fig8.fm");
    let (code, v) = run_json(&["model", "check", p(&fig8)]);
    assert_eq!((code, v["status"].as_str()), (0, Some("ok")));
    assert_eq!(v["model"], "Figure8");

    let out = run(&["model", "count", p(&fig8)]);
    assert_eq!(stdout(&out), "729\n");
    let (_, v) = run_json(&["model", "count", p(&fig8), "--clone-cap", "1"]);
    assert_eq!(v["count"], 9);
}

#[test]
fn malformed_model_is_invalid() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("bad.fm");
    fs::write(&path, "featuremodel X\nroot A {\n  mandatory B\n").unwrap();
    let (code, v) = run_json(&["model", "check", p(&path)]);
    assert_eq!((code, v["status"].as_str()), (2, Some("invalid")));
    assert!(!v["diagnostics"].as_array().unwrap().is_empty());
}

#[test]
fn oversized_search_space_fails() {
    let dir = TempDir::new().unwrap();
    let mut text = String::from("featuremodel Wide\nroot R {\n");
    for i in 0..24 {
        text.push_str(&format!("  optional F{i}\n"));
    }
    text.push_str("}\n");
    let path = dir.path().join("wide.fm");
    fs::write(&path, text).unwrap();
    let (code, v) = run_json(&["model", "count", p(&path)]);
    assert_eq!((code, v["status"].as_str()), (3, Some("failed")));
    assert_eq!(v["diagnostics"][0]["code"], "SEARCH_SPACE_TOO_LARGE");
}

#[test]
fn config_check_reports_rule_codes() {
    let dir = TempDir::new().unwrap();
    let fig8 = data("fig8.fm");
    let good = write_json(&dir, "good.json", &fig8_config(&[]));
    let (code, v) = run_json(&["config", "check", p(&fig8), &good]);
    assert_eq!((code, &v["valid"]), (0, &json!(true)));

    let bad = write_json(&dir, "bad.json", &fig8_config(&["Medium"]));
    let (code, v) = run_json(&["config", "check", p(&fig8), &bad]);
    assert_eq!(code, 2);
    assert_eq!(v["diagnostics"][0]["code"], "R4_ALTERNATIVE");
    let out = run(&["config", "check", p(&fig8), &bad]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("R4_ALTERNATIVE"));

    let garbled = dir.path().join("garbled.json");
    fs::write(&garbled, "{not json").unwrap();
    let (code, v) = run_json(&["config", "check", p(&fig8), p(&garbled)]);
    assert_eq!(code, 2);
    assert_eq!(v["diagnostics"][0]["code"], "CONFIG_JSON");
}

#[test]
fn spec_derive_and_editor_schema() {
    let dir = TempDir::new().unwrap();
    let family = data("id_family.fm");
    let cfg = dir.path().join("cfg.json");
    let config = preset_configuration(2).unwrap();
    fs::write(&cfg, serde_json::to_string(&config).unwrap()).unwrap();
    let derived = dir.path().join("derived.json");
    let (code, v) = run_json(&["spec", "derive", p(&family), p(&cfg), "-o", p(&derived)]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["spec"]["name"], "AdultLiteracyID");
    let expected = derive_specification(&id_family_model(), &config)
        .unwrap()
        .to_json();
    assert_eq!(fs::read_to_string(&derived).unwrap(), expected);

    // nothing selected: the root is missing
    fs::write(&cfg, "{\"model\":\"AdultLiteracyID\",\"select\":{}}").unwrap();
    let (code, _) = run_json(&["spec", "derive", p(&family), p(&cfg)]);
    assert_eq!(code, 2);

    let spec = preset(&dir, 3);
    let schema = dir.path().join("schema.json");
    let (code, v) = run_json(&["editor", "schema", &spec, "-o", p(&schema)]);
    assert_eq!(code, 0);
    assert_eq!(v["output"], p(&schema));
    let written: Value = serde_json::from_str(&fs::read_to_string(&schema).unwrap()).unwrap();
    assert_eq!(written, v["schema"]);

    let junk = dir.path().join("junk.json");
    fs::write(&junk, "[]").unwrap();
    let (code, v) = run_json(&["editor", "schema", p(&junk)]);
    assert_eq!(code, 2);
    assert_eq!(v["diagnostics"][0]["code"], "INVALID_SPEC");
}

#[test]
fn instance_validate_exit_codes() {
    let dir = TempDir::new().unwrap();
    let spec = preset(&dir, 2);
    let sample = data("hindi_primer.xml");
    let (code, v) = run_json(&["instance", "validate", &spec, p(&sample)]);
    assert_eq!((code, &v["lessons"]), (0, &json!(1)));
    assert_eq!(v["diagnostics"], json!([]));

    let fragment =
        Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures/lesson_fragment.xml");
    let (code, v) = run_json(&["instance", "validate", &spec, p(&fragment)]);
    assert_eq!(code, 2);
    assert!(v["diagnostics"]
        .as_array()
        .unwrap()
        .iter()
        .all(|d| d["code"] == "KNOWN_TO_UNKNOWN"));

    let broken = dir.path().join("broken.xml");
    fs::write(&broken, "<primer spec=\"x\" lang=\"hi\"><lesson>").unwrap();
    let (code, v) = run_json(&["instance", "validate", &spec, p(&broken)]);
    assert_eq!(code, 2);
    assert_eq!(v["diagnostics"][0]["code"], "XML_MALFORMED");

    // missing assets are warnings, not failures
    let (code, v) = run_json(&[
        "instance",
        "validate",
        &spec,
        p(&sample),
        "--assets",
        p(dir.path()),
    ]);
    assert_eq!(code, 0);
    assert!(v["diagnostics"]
        .as_array()
        .unwrap()
        .iter()
        .all(|d| d["code"] == "ASSET_MISSING"));
}

#[test]
fn primer_build_writes_bundle() {
    let dir = TempDir::new().unwrap();
    let spec = preset(&dir, 2);
    let out_dir = dir.path().join("bundle");
    let (code, v) = run_json(&[
        "primer",
        "build",
        &spec,
        p(&data("hindi_primer.xml")),
        "-o",
        p(&out_dir),
    ]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(
        v["files"],
        json!(["manifest.json", "lessons/00.json", "assets.json"])
    );
    assert_eq!(v["steps"], 25);
    let manifest: Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["lang"], "hi");
    assert_eq!(manifest["lessons"][0]["file"], "lessons/00.json");

    let fragment =
        Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures/lesson_fragment.xml");
    let (code, _) = run_json(&[
        "primer",
        "build",
        &spec,
        p(&fragment),
        "-o",
        p(&dir.path().join("x")),
    ]);
    assert_eq!(code, 2);

    // build requires an output directory
    let out = run(&["primer", "build", &spec, p(&data("hindi_primer.xml"))]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn cost_report_text_and_csv() {
    let dir = TempDir::new().unwrap();
    let args = [
        "cost",
        "report",
        "--org",
        "24",
        "--cab",
        "48",
        "--unique",
        "2",
        "--reuse",
        "1",
        "--product",
        "24",
        "--n",
        "9",
    ];
    let out = run(&args);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(
        text.contains("C_SPL         99 pw = 24.75 pm (25 pm rounded)"),
        "{text}"
    );
    assert!(text.contains("C_standalone  216 pw = 54 pm"));
    assert!(text.contains("savings       117 pw = 29.25 pm exact, 29 pm paper-style"));
    assert!(text.contains("break-even    4 products"));

    let csv = dir.path().join("curve.csv");
    let mut with_csv = args.to_vec();
    with_csv.extend(["--curve", "9", "--csv", p(&csv)]);
    let (code, v) = run_json(&with_csv);
    assert_eq!(code, 0);
    assert_eq!(v["savings_paper_style_pm"], 29);
    assert_eq!(v["curve"].as_array().unwrap().len(), 9);
    let written = fs::read_to_string(&csv).unwrap();
    assert!(written.starts_with("n,spl_pw,standalone_pw\n"));
    assert!(written.ends_with("9,99,216\n"));

    let mut orphan = args.to_vec();
    orphan.extend(["--csv", p(&csv)]);
    assert_eq!(run(&orphan).status.code(), Some(1));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["bogus"]).status.code(), Some(1));
    assert_eq!(run(&["spec", "preset", "5"]).status.code(), Some(1));
    let (code, v) = run_json(&["model"]);
    assert_eq!((code, v["status"].as_str()), (1, Some("error")));
    assert!(v["message"].is_string());
    let (code, v) = run_json(&["model", "check", "/nonexistent/model.fm"]);
    assert_eq!((code, v["status"].as_str()), (1, Some("error")));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
