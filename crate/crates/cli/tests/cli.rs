use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn kunneth(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kunneth"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("valid json")
}

const TABLE2: [(&str, usize, usize); 26] = [
    ("A6", 6, 15),
    ("L3+A3", 5, 11),
    ("L5,2+A1", 4, 9),
    ("L3+L3", 4, 8),
    ("L6,1", 4, 8),
    ("L6,2", 4, 8),
    ("L4+A2", 4, 7),
    ("L5,3+A1", 4, 7),
    ("L6,4", 3, 8),
    ("L6,5", 3, 6),
    ("L6,6", 3, 6),
    ("L6,9", 3, 6),
    ("L6,10", 3, 5),
    ("L6,11", 3, 5),
    ("L6,12", 3, 5),
    ("L5,4+A1", 3, 5),
    ("L6,13", 3, 5),
    ("L5,6+A1", 3, 5),
    ("L6,14", 3, 5),
    ("L6,15", 3, 4),
    ("L6,16", 2, 4),
    ("L6,17+", 2, 4),
    ("L6,17-", 2, 4),
    ("L6,18", 2, 3),
    ("L6,19", 2, 3),
    ("L6,21", 2, 3),
];

#[test]
fn betti_all_matches_the_table() {
    let o = kunneth(&["betti", "--all", "--format", "json"]);
    assert!(o.status.success());
    let v = json(&o);
    let rows = v["sections"][0]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 26);
    for (name, b1, b2) in TABLE2 {
        let row = rows.iter().find(|r| r["label"] == name).unwrap_or_else(|| panic!("{name}"));
        assert_eq!(row["values"][1], b1.to_string(), "{name}");
        assert_eq!(row["values"][2], b2.to_string(), "{name}");
    }
}

#[test]
fn curvature_of_l6_12() {
    let o = kunneth(&["curvature", "L6,12", "--format", "json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("208/7"));
    let v = json(&o);
    let ricci = v["sections"][1]["rows"].as_array().unwrap();
    assert_eq!(ricci.len(), 36);
    assert!(ricci.iter().all(|r| r["values"][0] == "0"));
}

#[test]
fn verify_tables_is_stable_and_passes() {
    let a = kunneth(&["verify-tables"]);
    assert!(a.status.success(), "{}", stderr(&a));
    let text = stdout(&a);
    for needle in [
        "| witnesses verified | 19/19 | pass |",
        "| curvature | 8 flat + 8 non-flat + 2 dim-4 flat + 1 dim-2 flat | pass |",
        "| Ricci-flat | 16/16 | pass |",
        "all pass",
    ] {
        assert!(text.contains(needle), "missing {needle}");
    }
    let b = kunneth(&["verify-tables"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn csv_has_no_floating_point() {
    let o = kunneth(&["verify-tables", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let float = text.lines().flat_map(|l| l.split(',')).any(|cell| {
        let c = cell.trim_matches('"');
        c.contains('.') && c.replace(['.', '-'], "").chars().all(|ch| ch.is_ascii_digit()) && !c.is_empty()
    });
    assert!(!float);
    assert!(text.starts_with("section,row,column,value\n"));
}

#[test]
fn unknown_entry_suggests() {
    let o = kunneth(&["show", "L7,1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("did you mean `L6,1`"));
}

#[test]
fn aliases_resolve() {
    for name in ["L6,12", "12", "(0,0,0,12,13+42,14+23)"] {
        let o = kunneth(&["show", name, "--format", "json"]);
        assert!(o.status.success(), "{name}");
        assert_eq!(json(&o)["sections"][0]["title"], "L6,12");
    }
}

#[test]
fn check_defaults_to_the_witness() {
    let o = kunneth(&["check", "L6,10"]);
    assert!(o.status.success(), "{}", stderr(&o));
}

#[test]
fn check_explicit_pair() {
    let o = kunneth(&["check", "A4", "--omega", "12+34", "--f", "e1, e3", "--g", "e2, e4"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let o = kunneth(&["check", "A4", "--omega", "12+34", "--f", "e1, e2", "--g", "e3, e4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("Lagrangian"));
}

#[test]
fn parse_errors_carry_positions() {
    let o = kunneth(&["check", "A4", "--f", "e1, e3 + x", "--g", "e2, e4"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("vector 2") && err.contains("column"), "{err}");
    let o = kunneth(&["check", "A4", "--omega", "12+35"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("column"));
}

#[test]
fn non_symplectic_form_fails() {
    let o = kunneth(&["check", "L4", "--omega", "12"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn lemmas_by_id() {
    let o = kunneth(&["lemmas", "--id", "L6_13_eq"]);
    assert!(o.status.success());
    let o = kunneth(&["lemmas", "--id", "nope"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown lemma"));
    let o = kunneth(&["lemmas", "--format", "json"]);
    assert!(o.status.success());
    assert_eq!(json(&o)["sections"][0]["verdict"], "pass");
}

#[test]
fn search_outcomes() {
    let o = kunneth(&["search", "A4", "--omega", "12+34", "--format", "json"]);
    assert!(o.status.success());
    let rows = json(&o)["sections"][0]["rows"].clone();
    let f = rows.as_array().unwrap().iter().find(|r| r["label"] == "F").unwrap();
    assert_eq!(f["values"][0], "e1, e3");

    let o = kunneth(&["search", "L4", "--omega", "14+23"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("grid exhausted at height 1"));

    let o = kunneth(&["search", "L4", "--budget", "0"]);
    assert_eq!(o.status.code(), Some(2));
    let o = kunneth(&["search", "L4", "--strategy", "sideways"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn search_is_deterministic() {
    let args = ["search", "L6,12", "--strategy", "random", "--seed", "3", "--budget", "20000", "--format", "json"];
    assert_eq!(kunneth(&args).stdout, kunneth(&args).stdout);
}

#[test]
fn connection_lists_nonzero_entries() {
    let o = kunneth(&["connection", "L6,12"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("| nabla(e2, e3) | -7*e5 |"));
    let o = kunneth(&["connection", "L4"]);
    assert_eq!(o.status.code(), Some(2));
}

fn builtin_catalog_text() -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/data/catalog.txt");
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn external_catalog() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.txt");
    std::fs::write(&good, builtin_catalog_text()).unwrap();
    let o = kunneth(&["--catalog", good.to_str().unwrap(), "verify-tables"]);
    assert!(o.status.success(), "{}", stderr(&o));

    let bad = dir.path().join("bad.txt");
    let text = builtin_catalog_text();
    let start = text.find("name = L6,14").unwrap();
    let at = start + text[start..].find("dalpha = ").unwrap();
    let end = at + text[at..].find('\n').unwrap();
    let corrupted = format!("{}dalpha = 0,0,0,12,14+25,15+23+24{}", &text[..at], &text[end..]);
    std::fs::write(&bad, corrupted).unwrap();
    let o = kunneth(&["--catalog", bad.to_str().unwrap(), "list"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("L6,14"));

    let o = kunneth(&["--catalog", dir.path().join("missing.txt").to_str().unwrap(), "list"]);
    assert_eq!(o.status.code(), Some(2));
}
