//! Metropolis sampling of |Psi|^2.
//!
//! The sampler is the third verification route: for an exact eigenstate the
//! recorded local energy is the same number at every sample, so the energy
//! estimator has zero variance up to floating-point noise. Densities and
//! pair distributions come out of the same walk.
//!
//! Proposals move one particle at a time (round-robin), uniformly within a
//! window of width step_size; acceptance is min(1, exp(2 delta ln|Psi|)).
//! Proposals landing on a node of Psi, or exactly on another particle, are
//! rejected outright. The step size self-tunes toward 30-60% acceptance
//! during burn-in only, so the post-burn-in chain is a fixed-kernel
//! Markov chain. Everything is deterministic in the seed.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::local_energy::{local_energy, log_psi};
use crate::model::ValidatedModel;
use crate::pair::LogValue;
use crate::types::Configuration;
use crate::Result;

/// Min separation below which the local energy of a singular or cusped
/// pair function is not recorded (the value there is dominated by
/// catastrophic cancellation or the contact delta, not by physics).
const CONTACT_GUARD: f64 = 1e-6;

const N_BINS: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub n_steps: usize,
    pub n_burnin: usize,
    pub step_size: f64,
    pub seed: u64,
    pub thin: usize,
    /// Histogram half-range; defaults to 6 oscillator lengths (or 6 plain
    /// length units when the trap frequency is zero).
    #[serde(default)]
    pub histogram_halfwidth: Option<f64>,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            n_steps: 60_000,
            n_burnin: 10_000,
            step_size: 0.5,
            seed: 0,
            thin: 5,
            histogram_halfwidth: None,
        }
    }
}

impl SamplerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_steps <= self.n_burnin {
            return Err(Error::ParameterOutOfRange {
                name: "n_steps",
                value: self.n_steps as f64,
                constraint: "n_steps must exceed n_burnin",
            });
        }
        if !(self.step_size > 0.0 && self.step_size.is_finite()) {
            return Err(Error::NonPositiveConstant {
                name: "step_size",
                value: self.step_size,
            });
        }
        if self.thin == 0 {
            return Err(Error::ParameterOutOfRange {
                name: "thin",
                value: 0.0,
                constraint: "thin >= 1",
            });
        }
        if self.n_steps - self.n_burnin < self.thin {
            return Err(Error::ParameterOutOfRange {
                name: "thin",
                value: self.thin as f64,
                constraint: "at least one sample must fit after burn-in",
            });
        }
        if let Some(hw) = self.histogram_halfwidth {
            if !(hw > 0.0 && hw.is_finite()) {
                return Err(Error::NonPositiveConstant {
                    name: "histogram_halfwidth",
                    value: hw,
                });
            }
        }
        Ok(())
    }
}

/// Uniform-bin histogram; values are densities (count / (samples * width)),
/// so the integral equals the stated normalization exactly.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub values: Vec<f64>,
}

impl Histogram {
    fn from_counts(lo: f64, hi: f64, counts: &[u64], n_samples: usize) -> Self {
        let nb = counts.len();
        let width = (hi - lo) / nb as f64;
        let edges = (0..=nb).map(|k| lo + k as f64 * width).collect();
        let denom = (n_samples as f64) * width;
        let values = counts
            .iter()
            .map(|&c| if n_samples == 0 { 0.0 } else { c as f64 / denom })
            .collect();
        Self { edges, values }
    }

    pub fn integral(&self) -> f64 {
        self.values
            .iter()
            .zip(self.edges.windows(2))
            .map(|(v, e)| v * (e[1] - e[0]))
            .sum()
    }

    pub fn bin_centers(&self) -> Vec<f64> {
        self.edges.windows(2).map(|e| 0.5 * (e[0] + e[1])).collect()
    }
}

/// Pooled outcome of a walk. Density integrates to N, pair_dist to
/// N(N-1)/2. discarded_fraction is the share of recorded samples whose
/// local energy was dropped by the contact guard (their positions still
/// count toward the histograms). min_pair_separation is the smallest
/// |x_i - x_j| seen across recorded samples, None for single-particle
/// walks; node-crossing rejection keeps it strictly positive for
/// hard-core families.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleStats {
    pub acceptance_rate: f64,
    pub energy_mean: f64,
    pub energy_variance: f64,
    pub density: Histogram,
    pub pair_dist: Histogram,
    pub n_recorded: usize,
    pub discarded_fraction: f64,
    pub min_pair_separation: Option<f64>,
}

/// Per-chain summary reported alongside merged multi-chain stats.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainDiagnostic {
    pub seed: u64,
    pub acceptance_rate: f64,
    pub energy_mean: f64,
    pub n_recorded: usize,
}

struct RawChain {
    proposals: usize,
    accepts: usize,
    energies: Vec<f64>,
    density_counts: Vec<u64>,
    pair_counts: Vec<u64>,
    n_recorded: usize,
    discarded: usize,
    min_sep: f64,
}

fn histogram_halfwidth(model: &ValidatedModel, cfg: &SamplerConfig) -> f64 {
    cfg.histogram_halfwidth
        .or_else(|| model.phys().oscillator_length().map(|l| 6.0 * l))
        .unwrap_or(6.0)
}

fn bin_index(lo: f64, hi: f64, nb: usize, x: f64) -> usize {
    // Out-of-range values clamp to the edge bins so normalization is exact.
    let t = (x - lo) / (hi - lo) * nb as f64;
    (t.floor().max(0.0) as usize).min(nb - 1)
}

fn run_chain_raw(
    model: &ValidatedModel,
    cfg: &SamplerConfig,
    c0: &Configuration,
    seed: u64,
) -> Result<RawChain> {
    cfg.validate()?;
    if c0.n() != model.n() {
        return Err(Error::ParameterOutOfRange {
            name: "start configuration length",
            value: c0.n() as f64,
            constraint: "must equal the model's particle count",
        });
    }
    if log_psi(model, c0).is_node() {
        return Err(Error::NodeConfiguration);
    }

    let n = model.n();
    let p = model.phys();
    let cusp = model.pair().cusp();
    let guard_energy = cusp.has_cusp || cusp.hard_core;
    let hw = histogram_halfwidth(model, cfg);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut xs = c0.positions().to_vec();
    let mut step = cfg.step_size;

    // Change in ln|Psi| when particle i moves to xi_new; None on a node.
    let delta_log = |xs: &[f64], i: usize, xi_new: f64| -> Option<f64> {
        let mut delta =
            model.confinement().envelope(p, i, xi_new) - model.confinement().envelope(p, i, xs[i]);
        for (j, &xj) in xs.iter().enumerate() {
            if j == i {
                continue;
            }
            match (model.pair().log_f(xi_new - xj), model.pair().log_f(xs[i] - xj)) {
                (LogValue::Finite(a), LogValue::Finite(b)) => delta += a - b,
                _ => return None,
            }
        }
        Some(delta)
    };

    let mut raw = RawChain {
        proposals: 0,
        accepts: 0,
        energies: Vec::new(),
        density_counts: vec![0; N_BINS],
        pair_counts: vec![0; N_BINS],
        n_recorded: 0,
        discarded: 0,
        min_sep: f64::INFINITY,
    };
    let mut tune_window = 0usize;
    let mut tune_accepts = 0usize;

    for step_idx in 0..cfg.n_steps {
        let i = step_idx % n;
        let proposal = xs[i] + rng.gen_range(-0.5 * step..=0.5 * step);
        let exact_hit = xs
            .iter()
            .enumerate()
            .any(|(j, &xj)| j != i && xj == proposal);
        let accepted = if exact_hit || !proposal.is_finite() {
            false
        } else {
            match delta_log(&xs, i, proposal) {
                None => false,
                Some(delta) => {
                    delta >= 0.0 || rng.gen_range(0.0..1.0) < (2.0 * delta).exp()
                }
            }
        };
        if accepted {
            xs[i] = proposal;
        }

        let in_burnin = step_idx < cfg.n_burnin;
        if in_burnin {
            tune_window += 1;
            tune_accepts += accepted as usize;
            if tune_window == 100 {
                let rate = tune_accepts as f64 / 100.0;
                if rate < 0.30 {
                    step *= 0.8;
                } else if rate > 0.60 {
                    step *= 1.25;
                }
                step = step.clamp(1e-8, 1e8);
                tune_window = 0;
                tune_accepts = 0;
            }
            continue;
        }

        raw.proposals += 1;
        raw.accepts += accepted as usize;
        let post = step_idx - cfg.n_burnin;
        if (post + 1) % cfg.thin != 0 {
            continue;
        }

        raw.n_recorded += 1;
        for &x in &xs {
            raw.density_counts[bin_index(-hw, hw, N_BINS, x)] += 1;
        }
        for a in 0..n {
            for b in (a + 1)..n {
                let sep = (xs[a] - xs[b]).abs();
                raw.pair_counts[bin_index(0.0, 2.0 * hw, N_BINS, sep)] += 1;
            }
        }

        let config = Configuration::new(xs.clone())?;
        raw.min_sep = raw.min_sep.min(config.min_separation());
        if guard_energy && config.min_separation() < CONTACT_GUARD {
            raw.discarded += 1;
        } else {
            raw.energies.push(local_energy(model, &config)?.e_loc);
        }
    }

    let acceptance = raw.accepts as f64 / raw.proposals as f64;
    if acceptance < 0.01 {
        return Err(Error::StuckChain {
            acceptance_rate: acceptance,
        });
    }
    Ok(raw)
}

fn stats_from_raw(model: &ValidatedModel, cfg: &SamplerConfig, raws: &[RawChain]) -> SampleStats {
    let hw = histogram_halfwidth(model, cfg);
    let proposals: usize = raws.iter().map(|r| r.proposals).sum();
    let accepts: usize = raws.iter().map(|r| r.accepts).sum();
    let n_recorded: usize = raws.iter().map(|r| r.n_recorded).sum();
    let discarded: usize = raws.iter().map(|r| r.discarded).sum();

    let mut density_counts = vec![0u64; N_BINS];
    let mut pair_counts = vec![0u64; N_BINS];
    for r in raws {
        for (acc, c) in density_counts.iter_mut().zip(&r.density_counts) {
            *acc += c;
        }
        for (acc, c) in pair_counts.iter_mut().zip(&r.pair_counts) {
            *acc += c;
        }
    }

    let k: usize = raws.iter().map(|r| r.energies.len()).sum();
    let (mean, variance) = if k == 0 {
        (f64::NAN, f64::NAN)
    } else {
        let sum: f64 = raws.iter().flat_map(|r| &r.energies).sum();
        let mean = sum / k as f64;
        let ss: f64 = raws
            .iter()
            .flat_map(|r| &r.energies)
            .map(|e| (e - mean) * (e - mean))
            .sum();
        (mean, ss / k as f64)
    };

    SampleStats {
        acceptance_rate: accepts as f64 / proposals as f64,
        energy_mean: mean,
        energy_variance: variance,
        density: Histogram::from_counts(-hw, hw, &density_counts, n_recorded),
        pair_dist: Histogram::from_counts(0.0, 2.0 * hw, &pair_counts, n_recorded),
        n_recorded,
        discarded_fraction: if n_recorded == 0 {
            0.0
        } else {
            discarded as f64 / n_recorded as f64
        },
        min_pair_separation: {
            let m = raws.iter().fold(f64::INFINITY, |acc, r| acc.min(r.min_sep));
            m.is_finite().then_some(m)
        },
    }
}

/// Walk one chain from c0.
pub fn run_chain(
    model: &ValidatedModel,
    cfg: &SamplerConfig,
    c0: &Configuration,
) -> Result<SampleStats> {
    let raw = run_chain_raw(model, cfg, c0, cfg.seed)?;
    Ok(stats_from_raw(model, cfg, &[raw]))
}

/// Independent chains seeded seed, seed+1, ..., merged in chain order.
pub fn multi_chain(
    model: &ValidatedModel,
    cfg: &SamplerConfig,
    c0: &Configuration,
    n_chains: usize,
) -> Result<(SampleStats, Vec<ChainDiagnostic>)> {
    if n_chains == 0 {
        return Err(Error::ParameterOutOfRange {
            name: "n_chains",
            value: 0.0,
            constraint: "n_chains >= 1",
        });
    }
    let mut raws = Vec::with_capacity(n_chains);
    let mut diags = Vec::with_capacity(n_chains);
    for chain in 0..n_chains {
        let seed = cfg.seed.wrapping_add(chain as u64);
        let raw = run_chain_raw(model, cfg, c0, seed)?;
        let k = raw.energies.len();
        diags.push(ChainDiagnostic {
            seed,
            acceptance_rate: raw.accepts as f64 / raw.proposals as f64,
            energy_mean: if k == 0 {
                f64::NAN
            } else {
                raw.energies.iter().sum::<f64>() / k as f64
            },
            n_recorded: raw.n_recorded,
        });
        raws.push(raw);
    }
    Ok((stats_from_raw(model, cfg, &raws), diags))
}

/// A coincidence-free start with finite ln|Psi|: lattice models start on
/// their sites, everything else evenly spread around the origin.
pub fn default_start(model: &ValidatedModel) -> Result<Configuration> {
    use crate::confinement::Confinement;
    if let Confinement::Lattice { sites } = model.confinement() {
        return Configuration::new(sites.clone());
    }
    let n = model.n();
    let spacing = model.phys().oscillator_length().unwrap_or(1.0);
    Configuration::new(
        (0..n)
            .map(|i| (i as f64 - 0.5 * (n as f64 - 1.0)) * spacing)
            .collect(),
    )
}
