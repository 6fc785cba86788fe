//! The check workflows behind the verify/oracle/sample/all subcommands,
//! plus their artifact writers. Every run appends one entry to
//! manifest.json in its output directory; every number quoted in a
//! manifest check also lives in the run's CSV/JSON data files.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use serde_json::{json, Value};

use jastrow_core::grid::grid_oracle;
use jastrow_core::local_energy::verify_sweep_detailed;
use jastrow_core::sampler::{default_start, multi_chain};
use jastrow_core::{Error, GridSpec, Sabotage, SamplerConfig, ValidatedModel};

use crate::config::{self, FileConfig};

const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Writes one stdout line, tolerating a closed pipe. The artifacts and the
/// exit code carry the verdict; stdout is commentary and must never panic.
pub fn emit(line: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(line.as_bytes()).and_then(|()| out.write_all(b"\n"));
}

/// Seed/threshold overrides passed on the command line; they win over the
/// config file.
#[derive(Clone, Copy, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub threshold: Option<f64>,
}

/// One finished check: its aggregate verdict plus a stdout summary line.
pub struct Outcome {
    pub passed: bool,
    pub line: String,
}

fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_text(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

fn write_json(path: &Path, value: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).context("serializing JSON artifact")?;
    text.push('\n');
    write_text(path, &text)
}

/// Appends one run record to out_dir/manifest.json (a JSON array).
fn append_manifest(out_dir: &Path, entry: Value) -> Result<()> {
    let path = out_dir.join("manifest.json");
    let mut entries: Vec<Value> = match fs::read_to_string(&path) {
        Ok(text) => serde_json::from_str(&text)
            .with_context(|| format!("existing manifest {} is not a JSON array", path.display()))?,
        Err(_) => Vec::new(),
    };
    entries.push(entry);
    write_json(&path, &Value::Array(entries))
}

fn manifest_entry(
    command: &str,
    model: &ValidatedModel,
    seeds: &[u64],
    started: Instant,
    checks: Value,
) -> Value {
    json!({
        "command": command,
        "version": VERSION,
        "model": model.summary(),
        "sabotage": model.sabotage(),
        "seeds": seeds,
        "duration_seconds": started.elapsed().as_secs_f64(),
        "checks": checks,
    })
}

pub fn run_verify(
    cfg: &FileConfig,
    model: &ValidatedModel,
    out_dir: &Path,
    overrides: Overrides,
) -> Result<Outcome> {
    let section = cfg.verify.clone().unwrap_or_default();
    let seed = overrides.seed.unwrap_or(section.seed);
    let threshold = overrides.threshold.unwrap_or(section.threshold);
    let started = Instant::now();

    let (sweep, rows) = verify_sweep_detailed(
        model,
        section.n_configs,
        seed,
        section.box_halfwidth,
        section.exclusion(),
    )?;

    fs::create_dir_all(out_dir)
        .with_context(|| format!("cannot create {}", out_dir.display()))?;
    let mut csv = String::from("config_index,e_loc,expected,rel_dev\n");
    for r in &rows {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            r.config_index,
            fmt(r.e_loc),
            fmt(r.expected),
            fmt(r.rel_dev)
        ));
    }
    write_text(&out_dir.join("sweep.csv"), &csv)?;

    let passed = sweep.max_rel_dev <= threshold;
    write_json(
        &out_dir.join("sweep.json"),
        &json!({
            "model": model.summary(),
            "box_halfwidth": section.box_halfwidth,
            "exclusion": section.exclusion(),
            "threshold": threshold,
            "sweep": sweep,
        }),
    )?;
    append_manifest(
        out_dir,
        manifest_entry(
            "verify",
            model,
            &[seed],
            started,
            json!([{
                "name": "max_rel_dev_below_threshold",
                "passed": passed,
                "max_rel_dev": sweep.max_rel_dev,
                "mean_rel_dev": sweep.mean_rel_dev,
                "threshold": threshold,
            }]),
        ),
    )?;

    Ok(Outcome {
        passed,
        line: format!(
            "max_rel_dev {:.3e} over {} configs (threshold {:.1e})",
            sweep.max_rel_dev, sweep.n_configs, threshold
        ),
    })
}

pub fn run_oracle(cfg: &FileConfig, model: &ValidatedModel, out_dir: &Path) -> Result<Outcome> {
    let section = cfg.oracle.clone().unwrap_or_default();
    let spec = GridSpec::new(section.halfwidth, section.points_per_axis)?;
    let started = Instant::now();

    let result = match grid_oracle(model, &spec, section.tol, section.max_iter) {
        Ok(result) => result,
        // An eigensolver that ran out of iterations has not confirmed
        // anything: a failed check, not a config error.
        Err(Error::NoConvergence { iterations, residual }) => {
            fs::create_dir_all(out_dir)
                .with_context(|| format!("cannot create {}", out_dir.display()))?;
            write_json(
                &out_dir.join("oracle.json"),
                &json!({
                    "model": model.summary(),
                    "converged": false,
                    "iterations": iterations,
                    "residual": residual,
                }),
            )?;
            append_manifest(
                out_dir,
                manifest_entry(
                    "oracle",
                    model,
                    &[],
                    started,
                    json!([{
                        "name": "eigensolver_converged",
                        "passed": false,
                        "iterations": iterations,
                        "residual": residual,
                    }]),
                ),
            )?;
            return Ok(Outcome {
                passed: false,
                line: format!("eigensolver did not converge in {iterations} iterations"),
            });
        }
        Err(e) => return Err(e.into()),
    };

    let energy_ok = result.rel_energy_err <= section.energy_tol;
    let overlap_ok = result.overlap >= section.overlap_min;
    let passed = energy_ok && overlap_ok;

    fs::create_dir_all(out_dir)
        .with_context(|| format!("cannot create {}", out_dir.display()))?;
    write_json(
        &out_dir.join("oracle.json"),
        &json!({
            "model": model.summary(),
            "halfwidth": section.halfwidth,
            "points_per_axis": section.points_per_axis,
            "energy_tol": section.energy_tol,
            "overlap_min": section.overlap_min,
            "result": result,
        }),
    )?;
    append_manifest(
        out_dir,
        manifest_entry(
            "oracle",
            model,
            &[],
            started,
            json!([
                {
                    "name": "grid_energy_matches_analytic",
                    "passed": energy_ok,
                    "ground_energy": result.ground_energy,
                    "analytic_energy": result.analytic_energy,
                    "rel_energy_err": result.rel_energy_err,
                    "energy_tol": section.energy_tol,
                },
                {
                    "name": "ground_state_overlap",
                    "passed": overlap_ok,
                    "overlap": result.overlap,
                    "overlap_min": section.overlap_min,
                },
            ]),
        ),
    )?;

    Ok(Outcome {
        passed,
        line: format!(
            "energy {:.6} vs {:.6} (rel err {:.2e}), overlap {:.6}",
            result.ground_energy, result.analytic_energy, result.rel_energy_err, result.overlap
        ),
    })
}

pub fn run_sample(
    cfg: &FileConfig,
    model: &ValidatedModel,
    out_dir: &Path,
    overrides: Overrides,
) -> Result<Outcome> {
    let section = cfg.sample.clone().unwrap_or_default();
    let sampler_cfg = SamplerConfig {
        n_steps: section.n_steps,
        n_burnin: section.n_burnin,
        step_size: section.step_size,
        seed: overrides.seed.unwrap_or(section.seed),
        thin: section.thin,
        histogram_halfwidth: section.histogram_halfwidth,
    };
    let started = Instant::now();
    let c0 = default_start(model)?;

    fs::create_dir_all(out_dir)
        .with_context(|| format!("cannot create {}", out_dir.display()))?;
    let (stats, chains) = match multi_chain(model, &sampler_cfg, &c0, section.n_chains) {
        Ok(out) => out,
        Err(Error::StuckChain { acceptance_rate }) => {
            write_json(
                &out_dir.join("stats.json"),
                &json!({
                    "model": model.summary(),
                    "sampler": sampler_cfg,
                    "stuck": true,
                    "acceptance_rate": acceptance_rate,
                }),
            )?;
            append_manifest(
                out_dir,
                manifest_entry(
                    "sample",
                    model,
                    &[sampler_cfg.seed],
                    started,
                    json!([{
                        "name": "chain_not_stuck",
                        "passed": false,
                        "acceptance_rate": acceptance_rate,
                    }]),
                ),
            )?;
            return Ok(Outcome {
                passed: false,
                line: format!("chain stuck: acceptance rate {acceptance_rate:.4}"),
            });
        }
        Err(e) => return Err(e.into()),
    };

    for (file, hist) in [("density.csv", &stats.density), ("pairdist.csv", &stats.pair_dist)] {
        let mut csv = String::from("bin_center,value\n");
        for (center, value) in hist.bin_centers().iter().zip(&hist.values) {
            csv.push_str(&format!("{},{}\n", fmt(*center), fmt(*value)));
        }
        write_text(&out_dir.join(file), &csv)?;
    }
    write_json(
        &out_dir.join("stats.json"),
        &json!({
            "model": model.summary(),
            "sampler": sampler_cfg,
            "n_chains": section.n_chains,
            "stats": stats,
            "chains": chains,
        }),
    )?;
    append_manifest(
        out_dir,
        manifest_entry(
            "sample",
            model,
            &[sampler_cfg.seed],
            started,
            json!([{
                "name": "chain_not_stuck",
                "passed": true,
                "acceptance_rate": stats.acceptance_rate,
                "energy_mean": stats.energy_mean,
                "energy_variance": stats.energy_variance,
                "n_recorded": stats.n_recorded,
                "discarded_fraction": stats.discarded_fraction,
            }]),
        ),
    )?;

    Ok(Outcome {
        passed: true,
        line: format!(
            "{} samples, acceptance {:.3}, energy mean {:.9} variance {:.3e}",
            stats.n_recorded, stats.acceptance_rate, stats.energy_mean, stats.energy_variance
        ),
    })
}

pub fn cmd_verify(path: &Path, out: &Path, overrides: Overrides, sabotage: Sabotage) -> Result<bool> {
    let cfg = config::load(path)?;
    let model = config::build_model(&cfg, sabotage)?;
    let outcome = run_verify(&cfg, &model, out, overrides)?;
    emit(&format!("verify: {} -> {}", outcome.line, verdict(outcome.passed)));
    Ok(outcome.passed)
}

pub fn cmd_oracle(path: &Path, out: &Path, sabotage: Sabotage) -> Result<bool> {
    let cfg = config::load(path)?;
    let model = config::build_model(&cfg, sabotage)?;
    let outcome = run_oracle(&cfg, &model, out)?;
    emit(&format!("oracle: {} -> {}", outcome.line, verdict(outcome.passed)));
    Ok(outcome.passed)
}

pub fn cmd_sample(path: &Path, out: &Path, overrides: Overrides, sabotage: Sabotage) -> Result<bool> {
    let cfg = config::load(path)?;
    let model = config::build_model(&cfg, sabotage)?;
    let outcome = run_sample(&cfg, &model, out, overrides)?;
    emit(&format!("sample: {} -> {}", outcome.line, verdict(outcome.passed)));
    Ok(outcome.passed)
}

fn verdict(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Runs every check section of every .toml config in a directory, each into
/// its own subdirectory of `out`, and prints a summary table in config-name
/// order.
pub fn cmd_all(dir: &Path, out: &Path, overrides: Overrides, sabotage: Sabotage) -> Result<bool> {
    let mut configs: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("cannot read config directory {}", dir.display()))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "toml"))
        .collect();
    configs.sort();
    if configs.is_empty() {
        bail!("no .toml configs in {}", dir.display());
    }

    let mut rows: Vec<(String, &'static str, bool, String)> = Vec::new();
    let mut all_passed = true;
    for path in &configs {
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        let cfg = config::load(path)?;
        let model = config::build_model(&cfg, sabotage)?;
        let sub = out.join(&name);

        // A config with no check sections still gets the core check.
        let bare = cfg.verify.is_none() && cfg.oracle.is_none() && cfg.sample.is_none();
        if cfg.verify.is_some() || bare {
            let o = run_verify(&cfg, &model, &sub, overrides)?;
            all_passed &= o.passed;
            rows.push((name.clone(), "verify", o.passed, o.line));
        }
        if cfg.oracle.is_some() {
            let o = run_oracle(&cfg, &model, &sub)?;
            all_passed &= o.passed;
            rows.push((name.clone(), "oracle", o.passed, o.line));
        }
        if cfg.sample.is_some() {
            let o = run_sample(&cfg, &model, &sub, overrides)?;
            all_passed &= o.passed;
            rows.push((name.clone(), "sample", o.passed, o.line));
        }
    }

    let name_w = rows.iter().map(|r| r.0.len()).max().unwrap_or(6).max(6);
    emit(&format!(
        "{:<name_w$}  {:<6}  {:<4}  detail",
        "config", "check", ""
    ));
    for (name, check, passed, line) in &rows {
        emit(&format!(
            "{name:<name_w$}  {check:<6}  {}  {line}",
            verdict(*passed)
        ));
    }
    Ok(all_passed)
}
