use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use subwin_core::corpus::{write_corpus, CorpusFormat};
use subwin_core::synth::{generate_corpus, standard_disciplines};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_subwin"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn data() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

/// Writes small synthetic corpora, one per standard discipline.
fn small_corpora(dir: &Path, docs: usize) -> Vec<String> {
    standard_disciplines()
        .iter()
        .map(|d| {
            let c = generate_corpus(d, docs, 5).unwrap();
            let path = dir.join(format!("{}.json", d.name));
            write_corpus(&c, CorpusFormat::PretaggedJson, fs::File::create(&path).unwrap()).unwrap();
            path.to_string_lossy().into_owned()
        })
        .collect()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn profile_writes_json_and_curve() {
    let dir = tempfile::tempdir().unwrap();
    let corpora = small_corpora(dir.path(), 6);
    let out = dir.path().join("out");
    let o = run(&["profile", "--omega", "3", "--system", "title", &corpora[2], "--out", s(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let json: serde_json::Value =
        serde_json::from_slice(&fs::read(out.join("profile_physth_title.json")).unwrap()).unwrap();
    assert_eq!(json["omega"], 3);
    assert_eq!(json["system"], "title");
    let sc = json["sc"].as_f64().unwrap();
    let wwd = json["wwd"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&sc) && (0.0..=1.0).contains(&wwd));
    let curve = fs::read_to_string(out.join("curves/physth_title.csv")).unwrap();
    assert_eq!(curve.lines().count(), 18);
    assert!(curve.starts_with("position,rate,windows,significant"));
    assert!(out.join("curves/physth_title.svg").exists());
}

#[test]
fn even_subset_keeps_even_indices() {
    let dir = tempfile::tempdir().unwrap();
    let corpora = small_corpora(dir.path(), 5);
    let out = dir.path().join("out");
    let o = run(&["windows", "--subset", "even", "--out", s(&out), &corpora[0]]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let mut rdr = csv::Reader::from_path(out.join("windows_medsyn_title.csv")).unwrap();
    let mut ids: Vec<String> = rdr.records().map(|r| r.unwrap()[0].to_string()).collect();
    ids.dedup();
    assert_eq!(ids, ["medsyn-000", "medsyn-002", "medsyn-004"]);
}

#[test]
fn dictionary_system_without_a_file_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let corpora = small_corpora(dir.path(), 3);
    let out = dir.path().join("out");
    let o = run(&["profile", "--system", "dictionary", "--out", s(&out), &corpora[0]]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("dictionary"));
    assert!(!out.exists());
}

#[test]
fn weighting_one_corpus_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let corpora = small_corpora(dir.path(), 3);
    let o = run(&["windows", "--system", "bi", "--out", s(dir.path()), &corpora[0]]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unreadable_corpus_fails_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let mut corpora = small_corpora(dir.path(), 3);
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{ not json").unwrap();
    corpora.push(s(&bad).to_string());
    let out = dir.path().join("out");
    let mut args = vec!["report-all", "--out", s(&out)];
    args.extend(corpora.iter().map(String::as_str));
    let o = run(&args);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad.json"));
    assert!(!out.exists());
}

#[test]
fn report_all_writes_every_table() {
    let dir = tempfile::tempdir().unwrap();
    let corpora = small_corpora(dir.path(), 8);
    let out = dir.path().join("out");
    let dict = data().join("dictionary.txt");
    let mut args = vec!["report-all", "-q", "--min-support", "5", "--dictionary", s(&dict), "--out", s(&out)];
    args.extend(corpora.iter().map(String::as_str));
    let o = run(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty());

    for f in ["census.csv", "ttr.csv", "theory_practice.csv"] {
        let mut rdr = csv::Reader::from_path(out.join(f)).unwrap();
        assert!(rdr.records().count() > 0, "{f} is empty");
    }
    for name in ["medsyn", "physexp", "physth", "linguistics"] {
        for f in [format!("overlap_{name}.csv"), format!("grammar_{name}.csv")] {
            let mut rdr = csv::Reader::from_path(out.join(&f)).unwrap();
            assert!(rdr.records().all(|r| r.is_ok()), "{f}");
        }
        assert!(out.join(format!("curves/{name}.svg")).exists());
    }
    let profiles: Vec<serde_json::Value> =
        serde_json::from_slice(&fs::read(out.join("profiles.json")).unwrap()).unwrap();
    assert!(profiles.len() >= 12);
    let fit: serde_json::Value = serde_json::from_slice(&fs::read(out.join("fit.json")).unwrap()).unwrap();
    assert_eq!(fit["fits"].as_array().unwrap().len(), 4);
    assert!(fit["anova"]["f"].as_f64().unwrap() > 0.0);

    // medsyn has no citations: the column is left out and a note says so
    let mut rdr = csv::Reader::from_path(out.join("overlap_medsyn.csv")).unwrap();
    let header = rdr.headers().unwrap().clone();
    assert!(!header.iter().any(|h| h.starts_with("citations")));
    let mut rdr = csv::Reader::from_path(out.join("overlap_physexp.csv")).unwrap();
    assert!(rdr.headers().unwrap().iter().any(|h| h.starts_with("citations")));
    let notes = fs::read_to_string(out.join("notes.txt")).unwrap();
    assert!(notes.contains("medsyn: citations omitted"));
}

#[test]
fn probabilities_carry_six_decimals() {
    let dir = tempfile::tempdir().unwrap();
    let corpora = small_corpora(dir.path(), 4);
    let out = dir.path().join("out");
    let o = run(&["windows", "--out", s(&out), &corpora[1]]);
    assert!(o.status.success());
    let mut rdr = csv::Reader::from_path(out.join("windows_physexp_title.csv")).unwrap();
    for r in rdr.records().take(200) {
        let r = r.unwrap();
        let tail = &r[4];
        assert_eq!(tail.split('.').nth(1).map(str::len), Some(6), "{tail}");
    }
}

#[test]
fn config_file_sets_defaults_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let corpora = small_corpora(dir.path(), 3);
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "omega = 5\nalpha = 0.05\n").unwrap();
    let out = dir.path().join("out");
    let o = run(&["profile", "--no-curves", "--config", s(&cfg), "--out", s(&out), &corpora[0]]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let json: serde_json::Value =
        serde_json::from_slice(&fs::read(out.join("profile_medsyn_title.json")).unwrap()).unwrap();
    assert_eq!(json["omega"], 5);

    let o = run(&["profile", "--config", s(&cfg), "--omega", "4", "--out", s(&out), &corpora[0]]);
    assert!(o.status.success());
    let json: serde_json::Value =
        serde_json::from_slice(&fs::read(out.join("profile_medsyn_title.json")).unwrap()).unwrap();
    assert_eq!(json["omega"], 4);

    fs::write(&cfg, "omgea = 5\n").unwrap();
    let o = run(&["profile", "--config", s(&cfg), "--out", s(&out), &corpora[0]]);
    assert!(!o.status.success());
}

#[test]
fn classify_against_a_built_store() {
    let dir = tempfile::tempdir().unwrap();
    let corpora = small_corpora(dir.path(), 10);
    let store = dir.path().join("store.json");
    let mut args = vec!["classify", "--build", "--store", s(&store), "--out", s(dir.path()), "--min-support", "5"];
    args.extend(corpora.iter().map(String::as_str));
    let o = run(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(store.exists());

    let fresh = dir.path().join("fresh");
    fs::create_dir(&fresh).unwrap();
    let d = &standard_disciplines()[3];
    let c = generate_corpus(d, 10, 99).unwrap();
    let input = fresh.join("input.json");
    write_corpus(&c, CorpusFormat::PretaggedJson, fs::File::create(&input).unwrap()).unwrap();
    let o = run(&["classify", "--store", s(&store), "--out", s(&fresh), s(&input)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let result: serde_json::Value =
        serde_json::from_slice(&fs::read(fresh.join("classification.json")).unwrap()).unwrap();
    assert_eq!(result[0]["label"], "linguistics");
    assert_eq!(result[0]["orientation"], "theory");
    assert!(result[0]["warning"].is_null());
}

#[test]
fn single_profile_store_warns() {
    let dir = tempfile::tempdir().unwrap();
    let corpora = small_corpora(dir.path(), 4);
    let store = dir.path().join("one.json");
    let o = run(&["classify", "--build", "--store", s(&store), "--out", s(dir.path()), &corpora[0]]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(&["classify", "--store", s(&store), "--per-document", "--out", s(dir.path()), &corpora[2]]);
    assert!(o.status.success());
    let result: serde_json::Value =
        serde_json::from_slice(&fs::read(dir.path().join("classification.json")).unwrap()).unwrap();
    let rows = result.as_array().unwrap();
    assert_eq!(rows.len(), 4);
    for r in rows {
        assert_eq!(r["label"], "medsyn");
        assert!(r["warning"].is_string());
    }
}

#[test]
fn empty_store_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let corpora = small_corpora(dir.path(), 2);
    let store = dir.path().join("empty.json");
    fs::write(&store, r#"{"feature_names": [], "config": {}, "profiles": []}"#).unwrap();
    let o = run(&["classify", "--store", s(&store), "--out", s(dir.path()), &corpora[0]]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!dir.path().join("classification.json").exists());
}

#[test]
fn simulate_is_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for out in [&a, &b] {
        let o = run(&["simulate", "--seed", "7", "--windows", "20000", "--out", s(out)]);
        assert!(o.status.success());
    }
    let ja = fs::read(a.join("simulate.json")).unwrap();
    assert_eq!(ja, fs::read(b.join("simulate.json")).unwrap());
    let v: serde_json::Value = serde_json::from_slice(&ja).unwrap();
    assert_eq!(v["windows"], 20000);
    assert_eq!(v["within_bound"], true);
}

#[test]
fn theory_practice_needs_both_orientations() {
    let dir = tempfile::tempdir().unwrap();
    let corpora = small_corpora(dir.path(), 4);
    let out = dir.path().join("out");
    let o = run(&["deltatp", "--out", s(&out), &corpora[2], &corpora[3]]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("orientation"));
}
