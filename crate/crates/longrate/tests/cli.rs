use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use longrate::config::sha256_hex;
use longrate::output::body;
use longrate::LoadedConfig;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_longrate"));
    c.env_remove("LONGRATE_OUT_DIR");
    c
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Data rows (after the column header) as vectors of cells.
fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn price_at_maturity_is_one() {
    let o = bin()
        .args(["price", "--t", "3", "--maturity", "3", "--config"])
        .arg(configs().join("flat.json"))
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(rows(&stdout(&o)), vec![vec!["flat", "3.0", "3.0", "1.0"]]);
}

#[test]
fn flat_longterm_swap_rate() {
    let o = bin().args(["longterm", "-c"]).arg(configs().join("flat.json")).output().unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = rows(&stdout(&o));
    let swap = rows.iter().find(|r| r[0] == "swap_rate").unwrap();
    let r: f64 = swap[1].parse().unwrap();
    assert!((r - 0.0512711).abs() < 5e-8, "{r}");
    assert_eq!(swap[2], "FinitePositive");
}

#[test]
fn arbitrage_lists_ten_ones() {
    let o = bin()
        .args(["arbitrage", "--rt", "0.02", "--rs", "0.03", "--delta", "1", "--notional", "100", "--m", "10"])
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = rows(&stdout(&o));
    assert_eq!(rows.len(), 10);
    for r in rows {
        assert_eq!(r[2], "1.0");
    }
}

#[test]
fn unknown_key_exits_2_with_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "bad.json", r#"{"model": {"family": "flat", "rate": 0.05, "rte": 1}}"#);
    let o = bin().args(["rates", "-c"]).arg(&cfg).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown field `rte`"), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
}

#[test]
fn invalid_value_exits_2_with_field_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "bad.json", r#"{"model": {"family": "flat", "rate": 0.05}, "mc": {"time_step": -1}}"#);
    let o = bin().args(["mc-check", "-c"]).arg(&cfg).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("mc.time_step"), "{}", stderr(&o));
}

#[test]
fn missing_config_and_usage_errors_exit_2() {
    let o = bin().arg("rates").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = bin().arg("frobnicate").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = bin().args(["arbitrage", "--rt", "0.02"]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn undetermined_exits_3_and_still_writes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "short.json",
        r#"{"model": {"family": "synthetic", "floor": 0.5, "lambda": 0.01}, "horizons": [1, 2, 3, 4, 5, 6]}"#,
    );
    let out = dir.path().join("lt.csv");
    let o = bin().args(["longterm", "-c"]).arg(&cfg).arg("--out").arg(&out).output().unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("long_bond"), "{}", stderr(&o));
    let text = std::fs::read_to_string(out).unwrap();
    assert!(rows(&text).iter().any(|r| r[0] == "long_bond" && r[2] == "Undetermined"));
}

#[test]
fn mc_check_on_curve_exits_2() {
    let o = bin().args(["mc-check", "-c"]).arg(configs().join("flat.json")).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn env_dir_is_default_destination() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin()
        .env("LONGRATE_OUT_DIR", dir.path())
        .args(["rates", "-c"])
        .arg(configs().join("flat.json"))
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(dir.path().join("rates.csv")).unwrap();
    assert_eq!(rows(&text).len(), 200);
    // --out wins over the env directory.
    let explicit = dir.path().join("sub/other.csv");
    let o = bin()
        .env("LONGRATE_OUT_DIR", dir.path())
        .args(["rates", "-c"])
        .arg(configs().join("flat.json"))
        .arg("--out")
        .arg(&explicit)
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(explicit.exists());
}

#[test]
fn header_carries_hash_and_seed() {
    let path = configs().join("linear_rational.json");
    let o = bin().args(["mc-check", "-c"]).arg(&path).output().unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    let hash = sha256_hex(&std::fs::read(&path).unwrap());
    assert!(text.contains(&format!("# config_sha256={hash}\n")));
    assert!(text.contains("# seed=1\n"));
    let rows = rows(&text);
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r[6] == "true"), "{rows:?}");
}

#[test]
fn reruns_are_byte_identical() {
    for (cmd, cfg) in [
        ("rates", "flat.json"),
        ("longterm", "fh_exponential.json"),
        ("mc-check", "linear_rational.json"),
        ("ucp", "exploding.json"),
    ] {
        let run = || bin().args([cmd, "-c"]).arg(configs().join(cfg)).output().unwrap();
        let (a, b) = (run(), run());
        assert!(a.status.success(), "{cmd}: {}", stderr(&a));
        assert_eq!(body(&a.stdout), body(&b.stdout), "{cmd}");
    }
}

#[test]
fn thread_count_leaves_output_unchanged() {
    let run = |threads: &str| {
        bin()
            .env("RAYON_NUM_THREADS", threads)
            .args(["mc-check", "-c"])
            .arg(configs().join("linear_rational.json"))
            .output()
            .unwrap()
    };
    assert_eq!(body(&run("1").stdout), body(&run("3").stdout));
}

#[test]
fn shipped_configs_load() {
    for entry in std::fs::read_dir(configs()).unwrap() {
        let path = entry.unwrap().path();
        LoadedConfig::from_path(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    }
}

#[test]
fn schema_lists_the_config_keys() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/experiment.schema.json");
    let schema: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let mut keys: Vec<&str> = schema["properties"].as_object().unwrap().keys().map(String::as_str).collect();
    keys.sort_unstable();
    assert_eq!(
        keys,
        ["grid", "horizons", "maturity", "mc", "model", "output", "regimes", "t", "tolerances", "ucp"]
    );
    let families: Vec<&str> = schema["$defs"]["model"]["oneOf"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v["properties"]["family"]["const"].as_str().unwrap())
        .collect();
    for family in &families {
        // Each family tag is accepted, and then fails only on missing fields.
        let err = LoadedConfig::from_str(&format!(r#"{{"model": {{"family": "{family}"}}}}"#)).unwrap_err();
        assert!(err.to_string().contains("missing field"), "{family}: {err}");
    }
    assert_eq!(families.len(), 8);
    for block in ["grid", "tolerances", "mc", "ucp", "regimes"] {
        assert_eq!(schema["$defs"][block]["additionalProperties"], false, "{block}");
    }
}
