//! End-to-end checks of the command-line contract: exit codes, artifact
//! layout, determinism, and the mutation-testing flags. Each test drives
//! the real binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_jastrow-forge")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("binary runs")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal exit")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path
}

const CALOGERO_N5: &str = r#"
[model]
family = "calogero"
lambda = 2.0
confinement = "harmonic"
n_particles = 5
convention = "paper-catalog"

[verify]
n_configs = 150
seed = 3
"#;

#[test]
fn catalog_lists_six_entries() {
    let out = run(&["catalog"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    assert_eq!(text.matches("== ").count(), 6, "catalog:\n{text}");
    for name in [
        "calogero",
        "lieb-liniger-coulomb",
        "gaussian",
        "hyperbolic",
        "hyper-gaussian",
        "quantum-solid-calogero",
    ] {
        assert!(text.contains(&format!("== {name}")), "missing {name}");
    }
}

#[test]
fn catalog_family_filter_shows_coth_term() {
    let out = run(&["catalog", "--family", "hyperbolic"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    assert_eq!(text.matches("== ").count(), 1);
    assert!(text.contains("== hyperbolic"));
    assert!(text.contains("coth"), "long-range coth term not shown:\n{text}");

    // The alias resolves to the same entry.
    let out = run(&["catalog", "--family", "sinh-pow"]);
    assert!(stdout(&out).contains("== hyperbolic"));

    let out = run(&["catalog", "--family", "no-such-family"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn verify_passes_and_artifacts_are_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "calogero5.toml", CALOGERO_N5);
    let out1 = tmp.path().join("a");
    let out2 = tmp.path().join("b");

    let r1 = run(&["verify", "--config", cfg.to_str().unwrap(), "--out", out1.to_str().unwrap()]);
    assert_eq!(exit_code(&r1), 0, "stderr: {}", stderr(&r1));
    assert!(stdout(&r1).contains("PASS"));
    let r2 = run(&["verify", "--config", cfg.to_str().unwrap(), "--out", out2.to_str().unwrap()]);
    assert_eq!(exit_code(&r2), 0);

    let csv1 = fs::read(out1.join("sweep.csv")).unwrap();
    let csv2 = fs::read(out2.join("sweep.csv")).unwrap();
    assert_eq!(csv1, csv2, "sweep.csv differs between identical runs");
    let text = String::from_utf8(csv1).unwrap();
    assert_eq!(text.lines().count(), 151, "header plus one row per config");
    assert_eq!(text.lines().next().unwrap(), "config_index,e_loc,expected,rel_dev");

    // Appending: a second run into the same directory extends the manifest.
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out1.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest.as_array().unwrap().len(), 1);
    let r3 = run(&["verify", "--config", cfg.to_str().unwrap(), "--out", out1.to_str().unwrap()]);
    assert_eq!(exit_code(&r3), 0);
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out1.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest.as_array().unwrap().len(), 2);
}

#[test]
fn seed_and_threshold_overrides_win() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "c.toml", CALOGERO_N5);
    let out = tmp.path().join("o");

    let r = run(&[
        "verify",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--seed",
        "123",
    ]);
    assert_eq!(exit_code(&r), 0);
    let sweep: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("sweep.json")).unwrap()).unwrap();
    assert_eq!(sweep["sweep"]["rng_seed"], 123);

    // An absurd threshold turns the same clean run into a failure.
    let r = run(&[
        "verify",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--threshold",
        "1e-30",
    ]);
    assert_eq!(exit_code(&r), 1);
}

#[test]
fn sabotage_flags_break_verification() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "gauss.toml",
        r#"
[model]
family = "gaussian"
g = -0.3
confinement = "harmonic"
n_particles = 4
convention = "paper-catalog"

[verify]
n_configs = 100
seed = 5
"#,
    );
    let out = tmp.path().join("o");

    for flag in ["--sabotage-v3", "--sabotage-v2l"] {
        let r = run(&[
            "verify",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
            flag,
        ]);
        assert_eq!(exit_code(&r), 1, "{flag} must fail verification");
        assert!(stdout(&r).contains("FAIL"));
    }

    let r = run(&[
        "verify",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--sabotage-v3",
        "--sabotage-v2l",
    ]);
    assert_eq!(exit_code(&r), 2, "both sabotage flags at once is a usage error");
}

#[test]
fn missing_config_field_is_named() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "broken.toml",
        "[model]\nconfinement = \"harmonic\"\nn_particles = 2\n",
    );
    let r = run(&["verify", "--config", cfg.to_str().unwrap(), "--out", tmp.path().join("o").to_str().unwrap()]);
    assert_eq!(exit_code(&r), 2);
    assert!(stderr(&r).contains("family"), "stderr: {}", stderr(&r));
}

#[test]
fn oracle_rejects_unbound_and_wrong_particle_count() {
    let tmp = tempfile::tempdir().unwrap();
    let free = write_config(
        tmp.path(),
        "free.toml",
        r#"
[model]
family = "calogero"
lambda = 2.0
confinement = "free"
n_particles = 2
"#,
    );
    let r = run(&["oracle", "--config", free.to_str().unwrap(), "--out", tmp.path().join("a").to_str().unwrap()]);
    assert_eq!(exit_code(&r), 2, "free confinement has no bound ground state");

    let n3 = write_config(
        tmp.path(),
        "n3.toml",
        r#"
[model]
family = "calogero"
lambda = 2.0
confinement = "harmonic"
n_particles = 3
"#,
    );
    let r = run(&["oracle", "--config", n3.to_str().unwrap(), "--out", tmp.path().join("b").to_str().unwrap()]);
    assert_eq!(exit_code(&r), 2, "grid oracle is two-particle only");
}

#[test]
fn sample_density_integrates_to_particle_count() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "one.toml",
        r#"
[model]
family = "power-law"
lambda = 2.0
confinement = "harmonic"
n_particles = 1

[sample]
n_steps = 30000
n_burnin = 5000
seed = 9
"#,
    );
    let out = tmp.path().join("o");
    let r = run(&["sample", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(exit_code(&r), 0, "stderr: {}", stderr(&r));

    let text = fs::read_to_string(out.join("density.csv")).unwrap();
    let rows: Vec<(f64, f64)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let (c, v) = l.split_once(',').unwrap();
            (c.parse().unwrap(), v.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 200);
    let width = rows[1].0 - rows[0].0;
    let integral: f64 = rows.iter().map(|(_, v)| v * width).sum();
    assert!(
        (integral - 1.0).abs() <= 1e-10,
        "density integral {integral}"
    );

    // Reruns are byte-identical.
    let out2 = tmp.path().join("p");
    let r2 = run(&["sample", "--config", cfg.to_str().unwrap(), "--out", out2.to_str().unwrap()]);
    assert_eq!(exit_code(&r2), 0);
    assert_eq!(
        fs::read(out.join("density.csv")).unwrap(),
        fs::read(out2.join("density.csv")).unwrap()
    );
    assert_eq!(
        fs::read(out.join("pairdist.csv")).unwrap(),
        fs::read(out2.join("pairdist.csv")).unwrap()
    );
}

#[test]
fn stuck_chain_exits_one() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "stuck.toml",
        r#"
[model]
family = "gaussian"
g = -0.3
confinement = "harmonic"
n_particles = 2

[sample]
n_steps = 2000
n_burnin = 0
step_size = 1e9
seed = 1
"#,
    );
    let r = run(&["sample", "--config", cfg.to_str().unwrap(), "--out", tmp.path().join("o").to_str().unwrap()]);
    assert_eq!(exit_code(&r), 1, "stderr: {}", stderr(&r));
    assert!(stdout(&r).contains("FAIL"));
}

fn models_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../models")
}

#[test]
fn all_passes_on_shipped_models() {
    let tmp = tempfile::tempdir().unwrap();
    let r = run(&[
        "all",
        "--config",
        models_dir().to_str().unwrap(),
        "--out",
        tmp.path().join("o").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&r), 0, "stderr: {}", stderr(&r));
    let text = stdout(&r);
    assert_eq!(text.matches(" PASS ").count(), 14, "table:\n{text}");
    assert_eq!(text.matches(" FAIL ").count(), 0, "table:\n{text}");
}

#[test]
fn all_flags_exactly_the_failing_config() {
    let tmp = tempfile::tempdir().unwrap();
    write_config(tmp.path(), "good.toml", CALOGERO_N5);
    // Same clean model, impossible threshold: an honest FAIL.
    write_config(
        tmp.path(),
        "too_tight.toml",
        &CALOGERO_N5.replace("seed = 3", "seed = 3\nthreshold = 1e-30"),
    );
    let r = run(&[
        "all",
        "--config",
        tmp.path().to_str().unwrap(),
        "--out",
        tmp.path().join("o").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&r), 1);
    let text = stdout(&r);
    assert_eq!(text.matches(" FAIL ").count(), 1, "table:\n{text}");
    assert!(text.contains("too_tight"));
}

#[test]
fn all_on_empty_directory_is_a_config_error() {
    let tmp = tempfile::tempdir().unwrap();
    let r = run(&[
        "all",
        "--config",
        tmp.path().to_str().unwrap(),
        "--out",
        tmp.path().join("o").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&r), 2);
}
