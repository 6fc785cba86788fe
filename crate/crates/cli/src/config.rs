//! TOML run configuration: a [model] section plus optional [physics]
//! overrides and one optional section per check workflow. Unknown keys are
//! rejected so typos surface as config errors, and missing required keys
//! are reported by name.

use std::path::Path;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use serde::Deserialize;

use jastrow_core::pair::{registry, PairParams};
use jastrow_core::{Confinement, Convention, ModelSpec, PhysParams, PolynomialEnvelope, Sabotage, ValidatedModel};

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub model: ModelSection,
    #[serde(default)]
    pub physics: PhysicsSection,
    pub verify: Option<VerifySection>,
    pub oracle: Option<OracleSection>,
    pub sample: Option<SampleSection>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    /// Registry name or alias: power-law/calogero, exp-abs/lieb-liniger,
    /// gaussian, sinh-pow/hyperbolic, hyper-gaussian, ...
    pub family: String,
    pub lambda: Option<f64>,
    pub g: Option<f64>,
    pub ell: Option<f64>,
    pub n: Option<f64>,
    /// "free" | "harmonic" | "anharmonic" | "lattice"
    pub confinement: String,
    pub n_particles: usize,
    #[serde(default = "default_convention")]
    pub convention: Convention,
    /// Ascending polynomial coefficients of the log-envelope v(x);
    /// anharmonic confinement only.
    pub envelope: Option<Vec<f64>>,
    /// Explicit lattice sites; lattice confinement only.
    pub sites: Option<Vec<f64>>,
    /// Shorthand for sites = [0, a, 2a, ...]; lattice confinement only.
    pub lattice_spacing: Option<f64>,
}

fn default_convention() -> Convention {
    Convention::Verbatim
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicsSection {
    #[serde(default = "one")]
    pub hbar: f64,
    #[serde(default = "one")]
    pub mass: f64,
    #[serde(default = "one")]
    pub omega: f64,
}

fn one() -> f64 {
    1.0
}

impl Default for PhysicsSection {
    fn default() -> Self {
        Self { hbar: 1.0, mass: 1.0, omega: 1.0 }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySection {
    #[serde(default = "default_n_configs")]
    pub n_configs: usize,
    #[serde(default = "default_box_halfwidth")]
    pub box_halfwidth: f64,
    /// Minimum pair separation for drawn configurations; defaults to
    /// 1e-3 * box_halfwidth.
    pub exclusion: Option<f64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_threshold")]
    pub threshold: f64,
}

fn default_n_configs() -> usize {
    200
}
fn default_box_halfwidth() -> f64 {
    3.0
}
fn default_threshold() -> f64 {
    1e-9
}

impl Default for VerifySection {
    fn default() -> Self {
        Self {
            n_configs: 200,
            box_halfwidth: 3.0,
            exclusion: None,
            seed: 0,
            threshold: 1e-9,
        }
    }
}

impl VerifySection {
    pub fn exclusion(&self) -> f64 {
        self.exclusion.unwrap_or(1e-3 * self.box_halfwidth)
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSection {
    #[serde(default = "default_halfwidth")]
    pub halfwidth: f64,
    #[serde(default = "default_points")]
    pub points_per_axis: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    #[serde(default = "default_energy_tol")]
    pub energy_tol: f64,
    #[serde(default = "default_overlap_min")]
    pub overlap_min: f64,
}

fn default_halfwidth() -> f64 {
    7.0
}
fn default_points() -> usize {
    128
}
fn default_tol() -> f64 {
    1e-7
}
fn default_max_iter() -> usize {
    400
}
fn default_energy_tol() -> f64 {
    5e-3
}
fn default_overlap_min() -> f64 {
    0.999
}

impl Default for OracleSection {
    fn default() -> Self {
        Self {
            halfwidth: 7.0,
            points_per_axis: 128,
            tol: 1e-7,
            max_iter: 400,
            energy_tol: 5e-3,
            overlap_min: 0.999,
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleSection {
    #[serde(default = "default_n_steps")]
    pub n_steps: usize,
    #[serde(default = "default_n_burnin")]
    pub n_burnin: usize,
    #[serde(default = "default_step_size")]
    pub step_size: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_thin")]
    pub thin: usize,
    #[serde(default = "default_n_chains")]
    pub n_chains: usize,
    pub histogram_halfwidth: Option<f64>,
}

fn default_n_steps() -> usize {
    60_000
}
fn default_n_burnin() -> usize {
    10_000
}
fn default_step_size() -> f64 {
    0.5
}
fn default_thin() -> usize {
    5
}
fn default_n_chains() -> usize {
    1
}

impl Default for SampleSection {
    fn default() -> Self {
        Self {
            n_steps: 60_000,
            n_burnin: 10_000,
            step_size: 0.5,
            seed: 0,
            thin: 5,
            n_chains: 1,
            histogram_halfwidth: None,
        }
    }
}

pub fn load(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read config {}", path.display()))?;
    let cfg: FileConfig = toml::from_str(&text)
        .with_context(|| format!("invalid config {}", path.display()))?;
    Ok(cfg)
}

/// Turns the [model] + [physics] sections into a validated model.
pub fn build_model(cfg: &FileConfig, sabotage: Sabotage) -> Result<ValidatedModel> {
    let m = &cfg.model;
    let pair = registry().build(
        &m.family,
        &PairParams {
            lambda: m.lambda,
            g: m.g,
            ell: m.ell,
            n: m.n,
        },
    )?;

    if m.envelope.is_some() && m.confinement != "anharmonic" {
        bail!("'envelope' only applies to confinement = \"anharmonic\"");
    }
    if (m.sites.is_some() || m.lattice_spacing.is_some()) && m.confinement != "lattice" {
        bail!("'sites'/'lattice_spacing' only apply to confinement = \"lattice\"");
    }

    let confinement = match m.confinement.as_str() {
        "free" => Confinement::Free,
        "harmonic" => Confinement::Harmonic,
        "anharmonic" => {
            let coeffs = m
                .envelope
                .clone()
                .context("anharmonic confinement needs 'envelope' coefficients")?;
            Confinement::Anharmonic(Arc::new(PolynomialEnvelope::new(coeffs)))
        }
        "lattice" => {
            let sites = match (&m.sites, m.lattice_spacing) {
                (Some(_), Some(_)) => {
                    bail!("give either 'sites' or 'lattice_spacing', not both")
                }
                (Some(sites), None) => sites.clone(),
                (None, Some(a)) => (0..m.n_particles).map(|i| i as f64 * a).collect(),
                (None, None) => {
                    bail!("lattice confinement needs 'sites' or 'lattice_spacing'")
                }
            };
            Confinement::Lattice { sites }
        }
        other => bail!("unknown confinement '{other}' (free|harmonic|anharmonic|lattice)"),
    };

    let spec = ModelSpec {
        pair,
        confinement,
        n_particles: m.n_particles,
        params: PhysParams {
            hbar: cfg.physics.hbar,
            mass: cfg.physics.mass,
            omega: cfg.physics.omega,
        },
        convention: m.convention,
    };
    Ok(spec.validate()?.with_sabotage(sabotage))
}
