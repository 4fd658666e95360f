use std::path::Path;
use std::process::{Command, Output};

fn run(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zeta-zeros"))
        .arg("--cache")
        .arg(cache)
        .args(args)
        .env_remove("ZETA_ZEROS_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ok = run(dir.path(), &["zero", "1", "--method", "seed", "--no-cache"]);
    assert_eq!(ok.status.code(), Some(0), "{}", stderr(&ok));
    assert!(stdout(&ok).contains("14.5213469530656"));

    for args in [
        &["zero", "0"][..],
        &["zero", "1", "--digits", "10"],
        &["audit", "1", "2", "--delta", "0"],
        &["gue", "3", "2"],
        &["count", "5"],
        &["frobnicate"],
    ] {
        let o = run(dir.path(), args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["batch", "1", "3"]).status.code(), Some(0));
    let args = ["--format", "csv", "audit", "1", "3", "--decimals", "9"];
    let a = run(dir.path(), &args);
    let b = run(dir.path(), &args);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.starts_with("n,y,asymptotic,exact\n"), "{text}");
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn json_mirrors_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = stdout(&run(dir.path(), &["--format", "csv", "gram", "0"]));
    let json = stdout(&run(dir.path(), &["--format", "json", "gram", "0"]));
    let header: Vec<&str> = csv.lines().next().unwrap().split(',').collect();
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    let obj = v[0].as_object().unwrap();
    assert_eq!(obj.len(), header.len());
    for h in header {
        assert!(obj.contains_key(h), "{h} missing from {json}");
    }
    assert!(csv.contains("17.8455995404"));
}

#[test]
fn batch_is_idempotent_and_detects_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let first = run(dir.path(), &["batch", "1", "4"]);
    assert_eq!(first.status.code(), Some(0), "{}", stderr(&first));
    assert!(stdout(&first).contains("solved 4"));
    let file = dir.path().join("asymptotic_eq-d12.zeros");
    let before = std::fs::read_to_string(&file).unwrap();

    let again = run(dir.path(), &["batch", "1", "4"]);
    assert!(stdout(&again).contains("already cached 4"), "{}", stdout(&again));
    assert!(stdout(&again).contains("solved 0"));
    assert_eq!(std::fs::read_to_string(&file).unwrap(), before);

    let broken = before.replace("2 21.0220396388", "2 21.02x0396388");
    assert_ne!(broken, before);
    std::fs::write(&file, broken).unwrap();
    let o = run(dir.path(), &["batch", "1", "6"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "n_range = [1, 3]\noutput_format = \"csv\"\n").unwrap();
    let o = run(dir.path(), &["--config", cfg.to_str().unwrap(), "batch"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("solved 3"));

    let z = run(dir.path(), &["--config", cfg.to_str().unwrap(), "zero", "2"]);
    assert!(stdout(&z).starts_with("n,y,digits_certified,method,residual\n"), "{}", stdout(&z));

    std::fs::write(&cfg, "digits = 7\n").unwrap();
    let bad = run(dir.path(), &["--config", cfg.to_str().unwrap(), "gram", "1"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn gue_import_matches_cache() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["batch", "1", "41"]).status.code(), Some(0));
    let cached = run(dir.path(), &["--format", "csv", "gue", "1", "40", "--step", "0.5"]);
    assert_eq!(cached.status.code(), Some(0), "{}", stderr(&cached));

    let text = std::fs::read_to_string(dir.path().join("asymptotic_eq-d12.zeros")).unwrap();
    let ordinates: String =
        text.lines().skip(1).map(|l| l.split_whitespace().nth(1).unwrap().to_string() + "\n").collect();
    let ext = dir.path().join("ordinates.txt");
    std::fs::write(&ext, ordinates).unwrap();
    let empty = tempfile::tempdir().unwrap();
    let imported =
        run(empty.path(), &["--format", "csv", "gue", "1", "40", "--step", "0.5", "--import", ext.to_str().unwrap()]);
    assert_eq!(imported.status.code(), Some(0), "{}", stderr(&imported));
    assert_eq!(cached.stdout, imported.stdout);
}
