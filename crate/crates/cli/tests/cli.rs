use std::path::PathBuf;
use std::process::{Command, Output};

fn wb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wb"))
        .args(args)
        .output()
        .expect("wb runs")
}

fn models() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../models")
}

fn model(name: &str) -> String {
    models().join(name).to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn list_names_every_scenario() {
    let o = wb(&["list"]);
    assert!(o.status.success());
    let ids: Vec<String> = stdout(&o)
        .lines()
        .map(|l| l.split_whitespace().next().unwrap().to_string())
        .collect();
    assert_eq!(
        ids,
        [
            "torus2-gram",
            "torus4-gram",
            "torus4-deformed",
            "bbf-vanishing",
            "kodaira",
            "kodaira-lambda",
            "nakamura",
            "k3-product",
            "grass-degree"
        ]
    );
}

#[test]
fn passing_scenario_json() {
    let o = wb(&["run", "torus2-gram", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["example_id"], "torus2-gram");
    assert_eq!(v["passed"], true);
    assert!(v.get("wall_time_ms").is_none());
    assert!(v["quantities"]
        .as_array()
        .unwrap()
        .iter()
        .all(|q| q["match"] == true));
}

#[test]
fn timing_is_opt_in() {
    let o = wb(&["run", "grass-degree", "--json", "--timing"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["wall_time_ms"].is_u64());
}

#[test]
fn failing_step_sets_exit_code() {
    let o = wb(&["run", "kodaira", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let first = v["quantities"]
        .as_array()
        .unwrap()
        .iter()
        .position(|q| q["match"] == false)
        .unwrap();
    assert_eq!(o.status.code(), Some(first as i32 + 1));
}

#[test]
fn run_all_is_deterministic() {
    let a = wb(&["run", "all", "--json"]);
    let b = wb(&["run", "all", "--json"]);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 9);
}

#[test]
fn unknown_scenario_is_an_error() {
    let o = wb(&["run", "no-such"]);
    assert_eq!(o.status.code(), Some(254));
}

#[test]
fn shipped_scenario_file_passes() {
    let o = wb(&["run", "all", "--scenarios", &model("scenarios.toml")]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn user_scenario_failure_index() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(models().join("torus2.toml"), dir.path().join("t.toml")).unwrap();
    let file = dir.path().join("s.toml");
    std::fs::write(
        &file,
        r#"
[[scenario]]
id = "s"
model = "t.toml"

[[scenario.step]]
name = "b1"
op = "cohomology"
theory = "de-rham"
degree = 1
expected = "4"

[[scenario.step]]
name = "b2"
op = "cohomology"
theory = "de-rham"
degree = 2
expected = "7"
"#,
    )
    .unwrap();
    let o = wb(&["run", "s", "--scenarios", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("computed 6, expected 7"));
}

#[test]
fn model_check_accepts_shipped_models() {
    for name in [
        "torus2.toml",
        "torus4.toml",
        "kodaira.toml",
        "nakamura.toml",
    ] {
        let o = wb(&["model", "check", &model(name)]);
        assert!(o.status.success(), "{name}");
        assert!(stdout(&o).contains("valid"));
    }
}

#[test]
fn model_check_reports_line_of_bad_reference() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.toml");
    std::fs::write(
        &file,
        "name = \"bad\"\nvolume = [\"a\", \"b\"]\n\n[[generator]]\nname = \"a\"\nbidegree = [1, 0]\n\n[[generator]]\nname = \"b\"\nbidegree = [0, 1]\n\n[[differential]]\ngenerator = \"a\"\nterms = [{ coefficient = 1, monomial = \"b^zz\" }]\n",
    )
    .unwrap();
    let o = wb(&["model", "check", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 14"), "{err}");
}

#[test]
fn model_check_rejects_nonintegrable() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.toml");
    std::fs::write(
        &file,
        concat!(
            "name = \"bad\"\nvolume = [\"a\", \"b\", \"c\", \"e\"]\n",
            "[[generator]]\nname = \"a\"\nbidegree = [1, 0]\n",
            "[[generator]]\nname = \"b\"\nbidegree = [1, 0]\n",
            "[[generator]]\nname = \"c\"\nbidegree = [1, 0]\n",
            "[[generator]]\nname = \"e\"\nbidegree = [1, 0]\n",
            "[[differential]]\ngenerator = \"e\"\nterms = [{ coefficient = 1, monomial = \"a^b\" }]\n",
            "[[differential]]\ngenerator = \"a\"\nterms = [{ coefficient = 1, monomial = \"c^e\" }]\n",
        ),
    )
    .unwrap();
    let o = wb(&["model", "check", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("d(d e) = b^c^e"));
}

#[test]
fn cohomology_kodaira() {
    let o = wb(&[
        "cohomology",
        &model("kodaira.toml"),
        "--theory",
        "aeppli",
        "--bidegree",
        "1,1",
        "--json",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["dimension"], 3);
    let o = wb(&[
        "cohomology",
        &model("kodaira.toml"),
        "--theory",
        "de-rham",
        "--degree",
        "1",
    ]);
    assert!(stdout(&o).contains("dimension 3"));
}

#[test]
fn cohomology_rejects_wrong_slot() {
    let o = wb(&[
        "cohomology",
        &model("kodaira.toml"),
        "--theory",
        "dolbeault",
        "--degree",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(254));
}

#[test]
fn gram_modes_agree() {
    let a = wb(&[
        "bbf",
        "gram",
        &model("torus2.toml"),
        "--sigma",
        "x1^x2",
        "--normalized",
    ]);
    let b = wb(&[
        "bbf",
        "gram",
        &model("torus2.toml"),
        "--sigma",
        "x1^x2",
        "--normalized",
        "--mode",
        "closed-form",
    ]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("x1^x2: [0, 0, 0, 0, 0, 1/2]"));
}

#[test]
fn gram_rejects_non_closed_sigma() {
    let o = wb(&["bbf", "gram", &model("kodaira.toml"), "--sigma", "w2^wb1"]);
    assert_eq!(o.status.code(), Some(254));
}

#[test]
fn grass_degree_table() {
    let o = wb(&["grass-degree", "--n", "2-5"]);
    let rows: Vec<Vec<String>> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.split_whitespace().map(String::from).collect())
        .collect();
    let degrees: Vec<&str> = rows.iter().map(|r| r[1].as_str()).collect();
    assert_eq!(degrees, ["1", "2", "3", "4"]);
}
