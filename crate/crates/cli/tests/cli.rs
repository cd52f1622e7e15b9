use std::path::Path;
use std::process::Command;

use krwlab::relations::RelationDescriptor;
use krwlab_cli::cache::{Measure, Record, ResultCache};
use krwlab_cli::commands::{cc_rows, parse_function, read_graph, read_string_set, EXIT_CONFIG, EXIT_FAILED};
use krwlab_cli::config::{ExperimentConfig, Format, ENV_CACHE, ENV_MAX_DEPTH, ENV_MAX_SIDE};
use serde_json::json;

fn krwlab(args: &[&str], dir: &Path) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_krwlab"))
        .args(args)
        .current_dir(dir)
        .env_remove(ENV_CACHE)
        .env_remove(ENV_MAX_SIDE)
        .env_remove(ENV_MAX_DEPTH)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into(),
        String::from_utf8_lossy(&out.stderr).into(),
    )
}

fn kw_desc(f: &str) -> RelationDescriptor {
    RelationDescriptor::Kw { f: f.into(), m: 2 }
}

#[test]
fn config_parses_and_takes_env_overrides() {
    let mut cfg = ExperimentConfig::parse(
        r#"
        seed = 3
        suites = ["parity"]
        format = "table"
        [budget]
        max_side = 12
        [params]
        gamma = [0.5]
        [[relations]]
        kind = "compose-strong"
        f = "8"
        m = 2
        g = "6"
        n = 2
        "#,
    )
    .unwrap();
    assert_eq!((cfg.seed, cfg.format, cfg.budget.max_side), (3, Format::Table, 12));
    assert_eq!(cfg.relations.len(), 1);
    cfg.apply_env(|k| match k {
        ENV_MAX_SIDE => Some("10".into()),
        ENV_MAX_DEPTH => Some("5".into()),
        ENV_CACHE => Some("c.jsonl".into()),
        _ => None,
    })
    .unwrap();
    assert_eq!((cfg.budget.max_side, cfg.budget.max_depth), (10, Some(5)));
    assert_eq!(cfg.cache.as_deref(), Some(Path::new("c.jsonl")));
    cfg.validate().unwrap();
    assert_eq!(cfg.suite_config().seed, 3);
}

#[test]
fn bad_configs_are_rejected() {
    assert!(ExperimentConfig::parse("nonsense = 1").is_err());
    assert!(ExperimentConfig::parse("[budget]\nmax_side = 0").unwrap().validate().is_err());
    assert!(ExperimentConfig::parse("suites = [\"nope\"]").unwrap().validate().is_err());
    assert!(ExperimentConfig::parse("[params]\ngamma = [1.5]").unwrap().validate().is_err());
    let bad_hex = "[[relations]]\nkind = \"kw\"\nf = \"xyz\"\nm = 2";
    assert!(ExperimentConfig::parse(bad_hex).unwrap().validate().is_err());
    let mut cfg = ExperimentConfig::default();
    assert!(cfg.apply_env(|k| (k == ENV_MAX_SIDE).then(|| "lots".into())).is_err());
}

#[test]
fn function_arity_is_inferred_from_hex() {
    assert_eq!(parse_function("8", None).unwrap().arity(), 2);
    assert_eq!(parse_function("96", None).unwrap().arity(), 3);
    assert_eq!(parse_function("0x6996", None).unwrap().arity(), 4);
    assert_eq!(parse_function("2", Some(1)).unwrap().arity(), 1);
    assert!(parse_function("abc", None).is_err());
}

#[test]
fn cache_round_trip_and_version_miss() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cache.jsonl");
    let mut cache = ResultCache::open(&path).unwrap();
    cache.put(&kw_desc("8"), Measure::Cc, json!(1)).unwrap();
    let reopened = ResultCache::open(&path).unwrap();
    assert_eq!(reopened.get(&kw_desc("8"), Measure::Cc), Some(&json!(1)));
    // Non-canonical hex hashes to the same record.
    assert_eq!(reopened.get(&kw_desc("0x8"), Measure::Cc), Some(&json!(1)));
    assert_eq!(reopened.get(&kw_desc("8"), Measure::ProtocolSize), None);

    let desc = kw_desc("6").canonical().unwrap();
    let old = Record {
        hash: desc.content_hash(),
        descriptor: desc.clone(),
        measure: Measure::Cc,
        value: json!(2),
        solver: "old".into(),
    };
    let mut text = std::fs::read_to_string(&path).unwrap();
    text.push_str(&serde_json::to_string(&old).unwrap());
    text.push('\n');
    std::fs::write(&path, text).unwrap();
    let reopened = ResultCache::open(&path).unwrap();
    assert_eq!(reopened.get(&desc, Measure::Cc), None);
    assert_eq!((reopened.stale(), reopened.len()), (1, 1));
}

#[test]
fn corrupt_records_are_dropped() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cache.jsonl");
    let mut cache = ResultCache::open(&path).unwrap();
    cache.put(&kw_desc("8"), Measure::Cc, json!(1)).unwrap();
    let mut forged: Record = serde_json::from_str(std::fs::read_to_string(&path).unwrap().trim()).unwrap();
    forged.descriptor = kw_desc("e");
    let text = format!(
        "{}\n{{not json\n{}\n",
        std::fs::read_to_string(&path).unwrap().trim(),
        serde_json::to_string(&forged).unwrap()
    );
    std::fs::write(&path, text).unwrap();
    let reopened = ResultCache::open(&path).unwrap();
    assert_eq!(reopened.dropped.len(), 2);
    assert_eq!(reopened.len(), 1);
    assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), 1);
}

#[test]
fn cache_is_transparent_and_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = ExperimentConfig::default();
    let mut cache = ResultCache::open(&dir.path().join("c.jsonl")).unwrap();
    let cold = cc_rows(2, &cfg, &mut ResultCache::in_memory()).unwrap();
    let filled = cc_rows(2, &cfg, &mut cache).unwrap();
    let warm = cc_rows(2, &cfg, &mut cache).unwrap();
    assert_eq!(cold, filled);
    assert_eq!(cold, warm);
    assert_eq!(cold.len(), 16);
    assert!(cold.iter().all(|r| r.agree));
    // Two measures for each of the 14 non-constant functions.
    assert_eq!(cache.len(), 28);
    let v = cache.verify(1, cfg.search_budget()).unwrap();
    assert_eq!((v.checked, v.mismatches.len()), (1, 0));

    let mut bad = ResultCache::in_memory();
    bad.put(&kw_desc("6"), Measure::Cc, json!(7)).unwrap();
    assert_eq!(bad.verify(1, cfg.search_budget()).unwrap().mismatches.len(), 1);
}

#[test]
fn cc_table_row_counts() {
    let cfg = ExperimentConfig::default();
    let one = cc_rows(1, &cfg, &mut ResultCache::in_memory()).unwrap();
    assert_eq!(one.len(), 4);
    let consts: Vec<_> = one.iter().filter(|r| r.game_size == 0).collect();
    assert_eq!(consts.len(), 2);
    assert!(consts.iter().all(|r| r.game_depth == krwlab::boolcore::Depth::NegInf));
    let three = cc_rows(3, &cfg, &mut ResultCache::in_memory()).unwrap();
    assert_eq!(three.len(), cfg.sweeps.three_bit_functions);
    assert!(three.iter().all(|r| r.agree));
    assert!(cc_rows(4, &cfg, &mut ResultCache::in_memory()).is_err());
}

#[test]
fn input_files_parse() {
    let x = read_string_set("# comment\n012\n1 2 0\n", 3).unwrap();
    assert_eq!((x.m(), x.len()), (3, 2));
    assert!(read_string_set("013\n", 3).is_err());
    let c5 = read_graph("0: 1\n1: 2\n2: 3\n3: 4\n4: 0\n").unwrap();
    assert_eq!((c5.vertex_count(), c5.edge_count()), (5, 5));
    assert_eq!(read_graph(&c5.to_graph6()).unwrap(), c5);
}

#[test]
fn binary_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(krwlab(&["kw", "--f", "96"], d).0, 0);
    let (code, _, err) = krwlab(&["kw", "--f", "9z"], d);
    assert_eq!(code, i32::from(EXIT_CONFIG), "{err}");
    assert_ne!(EXIT_CONFIG, EXIT_FAILED);
    assert_eq!(krwlab(&["suite", "no-such-suite"], d).0, i32::from(EXIT_CONFIG));
    assert_eq!(krwlab(&["cc-table", "--n", "5"], d).0, i32::from(EXIT_CONFIG));
    std::fs::write(d.join("bad.toml"), "[budget]\nmax_memo = 0\n").unwrap();
    assert_eq!(krwlab(&["--config", "bad.toml", "suite", "parity"], d).0, i32::from(EXIT_CONFIG));

    let (code, out, _) = krwlab(&["barrier", "--m", "4", "--wx", "0", "--wy", "4"], d);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("0 edges"));
    assert_eq!(krwlab(&["barrier", "--m", "4", "--wx", "0", "--wy", "0"], d).0, i32::from(EXIT_CONFIG));

    std::fs::write(d.join("x.txt"), "00\n01\n10\n").unwrap();
    let (code, out, _) = krwlab(&["winning-set", "--input", "x.txt"], d);
    assert_eq!(code, 0);
    assert!(out.starts_with("|X| = 3, |W(X)| = 3"));
    std::fs::write(d.join("c5.txt"), "0: 1\n1: 2\n2: 3\n3: 4\n4: 0\n").unwrap();
    let (code, out, _) = krwlab(&["graph-eq", "--graph", "c5.txt"], d);
    assert_eq!(code, 0);
    assert!(out.contains("χ = 3"));
}

#[test]
fn suite_reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let (c1, _, _) = krwlab(&["suite", "kw-connection", "--out", "a.json"], d);
    let (c2, _, _) = krwlab(&["suite", "kw-connection", "--out", "b.json"], d);
    assert_eq!((c1, c2), (0, 0));
    let (a, b) = (std::fs::read(d.join("a.json")).unwrap(), std::fs::read(d.join("b.json")).unwrap());
    assert_eq!(a, b);
    let report: krwlab::report::Report = serde_json::from_slice(&a).unwrap();
    assert!(report.checks.iter().all(|c| c.passed()));
}

#[test]
fn prefixthick_suite_passes() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, _) = krwlab(&["suite", "prefixthick"], dir.path());
    assert_eq!(code, 0, "{out}");
}

#[test]
fn report_writes_relations_through_the_cache() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(
        d.join("exp.toml"),
        "suites = [\"parity\"]\ncache = \"cache.jsonl\"\n[[relations]]\nkind = \"kw\"\nf = \"6\"\nm = 2\n",
    )
    .unwrap();
    let (code, out, err) = krwlab(&["--config", "exp.toml", "report", "--out", "out/r.json"], d);
    assert_eq!(code, 0, "{out}{err}");
    let doc: serde_json::Value = serde_json::from_slice(&std::fs::read(d.join("out/r.json")).unwrap()).unwrap();
    assert_eq!(doc["relations"][0]["cc"], json!(2));
    assert_eq!(doc["relations"][0]["protocol-size"], json!(4));
    assert_eq!(std::fs::read_to_string(d.join("cache.jsonl")).unwrap().lines().count(), 2);
    let (code, out, _) = krwlab(&["--config", "exp.toml", "cache-verify"], d);
    assert_eq!(code, 0);
    assert!(out.contains("0 mismatches"));
}
