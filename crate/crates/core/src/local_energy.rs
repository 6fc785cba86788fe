//! Log-domain wavefunction evaluation and the eigen-identity checks.
//!
//! The central claim this module verifies: for each model the local energy
//! E_loc = (H Psi)/Psi is the same number at every configuration where Psi
//! does not vanish. E_loc is assembled from analytic log-derivatives as
//! -(hbar^2/2m) [sum_i (d_i ln Psi)^2 + sum_i d_i^2 ln Psi] + V, never from
//! Psi itself, so overflow and cancellation in the bare wavefunction cannot
//! contaminate the check.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::confinement::Confinement;
use crate::error::Error;
use crate::hamiltonian::{expected_eigenvalue, total_potential};
use crate::model::ValidatedModel;
use crate::pair::LogValue;
use crate::types::Configuration;
use crate::Result;

/// Local energy at one configuration against the model's eigenvalue.
/// rel_dev floors its denominator at one energy unit so free-space models
/// (expected = 0) still get a meaningful number.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LocalEnergyReport {
    pub e_loc: f64,
    pub expected: f64,
    pub abs_dev: f64,
    pub rel_dev: f64,
}

/// Deviation statistics over a batch of random configurations.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationSweep {
    pub n_configs: usize,
    pub max_rel_dev: f64,
    pub mean_rel_dev: f64,
    pub worst_config: Configuration,
    pub rng_seed: u64,
}

/// One sweep configuration's outcome, for per-row artifact output.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub config_index: usize,
    pub e_loc: f64,
    pub expected: f64,
    pub rel_dev: f64,
}

/// Jump of the log-derivative across two-particle contact versus the
/// pair function's declared discontinuity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CuspCheckReport {
    pub expected_jump: f64,
    pub measured_jump: f64,
    pub abs_err: f64,
    pub rel_err: f64,
}

/// ln |Psi| at a configuration: envelope terms plus pair terms. A hard-core
/// contact makes this NegInfinity, which is a value, not an error.
///
/// Pair terms and trap-symmetric envelope terms are summed in the
/// coordinate-sorted order, so the result is bitwise invariant under
/// particle relabeling for every confinement except the lattice, whose
/// envelope genuinely depends on which particle sits at which site.
pub fn log_psi(model: &ValidatedModel, config: &Configuration) -> LogValue {
    let p = model.phys();
    let xs = config.positions();
    let order = config.canonical_order();
    let mut total = 0.0;

    match model.confinement() {
        Confinement::Lattice { .. } => {
            for i in 0..xs.len() {
                total += model.confinement().envelope(p, i, xs[i]);
            }
        }
        _ => {
            for &i in &order {
                total += model.confinement().envelope(p, i, xs[i]);
            }
        }
    }

    for a in 0..order.len() {
        for b in (a + 1)..order.len() {
            match model.pair().log_f(xs[order[a]] - xs[order[b]]) {
                LogValue::Finite(v) => total += v,
                LogValue::NegInfinity => return LogValue::NegInfinity,
            }
        }
    }
    LogValue::Finite(total)
}

/// Per-particle derivative of ln Psi:
/// component i = envelope'(x_i) + sum_{j != i} (ln f)'(x_i - x_j).
pub fn grad_log_psi(model: &ValidatedModel, config: &Configuration) -> Result<Vec<f64>> {
    config.require_no_coincidence()?;
    let p = model.phys();
    let xs = config.positions();
    let mut grad = vec![0.0; xs.len()];
    for (i, g) in grad.iter_mut().enumerate() {
        let mut acc = model.confinement().envelope_d1(p, i, xs[i]);
        for j in 0..xs.len() {
            if j != i {
                acc += model.pair().dlog_f(xs[i] - xs[j])?;
            }
        }
        *g = acc;
    }
    Ok(grad)
}

/// sum_i d_i^2 ln Psi. Pair curvature enters each pair twice (d2log is
/// even), the envelope once per particle.
pub fn laplacian_log_psi(model: &ValidatedModel, config: &Configuration) -> Result<f64> {
    config.require_no_coincidence()?;
    let p = model.phys();
    let xs = config.positions();
    let order = config.canonical_order();
    let mut total = 0.0;
    for a in 0..order.len() {
        for b in (a + 1)..order.len() {
            total += 2.0 * model.pair().d2log_f(xs[order[a]] - xs[order[b]])?;
        }
    }
    for &i in &order {
        total += model.confinement().envelope_d2(p, i, xs[i]);
    }
    Ok(total)
}

/// E_loc at one configuration, with the deviation from the model's
/// expected eigenvalue.
pub fn local_energy(model: &ValidatedModel, config: &Configuration) -> Result<LocalEnergyReport> {
    config.require_no_coincidence()?;
    if log_psi(model, config).is_node() {
        return Err(Error::NodeConfiguration);
    }
    let p = model.phys();
    let grad = grad_log_psi(model, config)?;
    let lap = laplacian_log_psi(model, config)?;
    let grad_sq: f64 = grad.iter().map(|g| g * g).sum();
    let kinetic = -(p.hbar * p.hbar / (2.0 * p.mass)) * (grad_sq + lap);
    let potential = total_potential(model, config)?.total;
    let e_loc = kinetic + potential;
    let expected = expected_eigenvalue(model)?;
    let abs_dev = (e_loc - expected).abs();
    Ok(LocalEnergyReport {
        e_loc,
        expected,
        abs_dev,
        rel_dev: abs_dev / expected.abs().max(1.0),
    })
}

fn sweep_impl(
    model: &ValidatedModel,
    n: usize,
    seed: u64,
    box_halfwidth: f64,
    exclusion: f64,
    mut on_row: impl FnMut(SweepRow, &Configuration),
) -> Result<VerificationSweep> {
    if n == 0 {
        return Err(Error::ParameterOutOfRange {
            name: "n_configs",
            value: 0.0,
            constraint: "n_configs >= 1",
        });
    }
    if !(box_halfwidth > 0.0 && box_halfwidth.is_finite()) {
        return Err(Error::NonPositiveConstant {
            name: "box_halfwidth",
            value: box_halfwidth,
        });
    }
    if !(exclusion >= 0.0 && exclusion.is_finite()) {
        return Err(Error::ParameterOutOfRange {
            name: "exclusion",
            value: exclusion,
            constraint: "exclusion >= 0 and finite",
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_particles = model.n();
    let max_attempts = n.saturating_mul(1000);
    let mut attempted = 0usize;
    let mut accepted = 0usize;
    let mut max_rel_dev = 0.0f64;
    let mut sum_rel_dev = 0.0f64;
    let mut worst: Option<Configuration> = None;

    while accepted < n {
        if attempted >= max_attempts {
            return Err(Error::RejectionStarvation {
                accepted,
                attempted,
            });
        }
        attempted += 1;
        let xs: Vec<f64> = (0..n_particles)
            .map(|_| rng.gen_range(-box_halfwidth..=box_halfwidth))
            .collect();
        let config = Configuration::new(xs)?;
        if config.min_separation() < exclusion {
            continue;
        }
        let report = local_energy(model, &config)?;
        let row = SweepRow {
            config_index: accepted,
            e_loc: report.e_loc,
            expected: report.expected,
            rel_dev: report.rel_dev,
        };
        sum_rel_dev += report.rel_dev;
        if report.rel_dev >= max_rel_dev {
            max_rel_dev = report.rel_dev;
            worst = Some(config.clone());
        }
        on_row(row, &config);
        accepted += 1;
    }

    Ok(VerificationSweep {
        n_configs: n,
        max_rel_dev,
        mean_rel_dev: sum_rel_dev / n as f64,
        worst_config: worst.expect("n >= 1 accepted"),
        rng_seed: seed,
    })
}

/// Draw configurations uniformly in [-box_halfwidth, box_halfwidth]^N,
/// rejecting any with min |x_i - x_j| < exclusion, and evaluate the local
/// energy at each. Starves with an error if fewer than n configurations
/// are accepted within 1000 n draws. Deterministic in seed.
pub fn verify_sweep(
    model: &ValidatedModel,
    n: usize,
    seed: u64,
    box_halfwidth: f64,
    exclusion: f64,
) -> Result<VerificationSweep> {
    sweep_impl(model, n, seed, box_halfwidth, exclusion, |_, _| {})
}

/// [`verify_sweep`] plus the per-configuration rows, for artifact output.
pub fn verify_sweep_detailed(
    model: &ValidatedModel,
    n: usize,
    seed: u64,
    box_halfwidth: f64,
    exclusion: f64,
) -> Result<(VerificationSweep, Vec<SweepRow>)> {
    let mut rows = Vec::with_capacity(n);
    let sweep = sweep_impl(model, n, seed, box_halfwidth, exclusion, |row, _| {
        rows.push(row)
    })?;
    Ok((sweep, rows))
}

/// Measure the jump of d/dx_i ln Psi across the contact x_i = x_j by
/// one-sided differences of step h, and compare with the pair function's
/// declared discontinuity. Spectator particles cancel exactly in the limit
/// and to O(h) at finite h.
pub fn cusp_check(
    model: &ValidatedModel,
    c_base: &Configuration,
    pair: (usize, usize),
    h: f64,
) -> Result<CuspCheckReport> {
    let cusp = model.pair().cusp();
    if !cusp.has_cusp {
        return Err(Error::NotACuspedModel {
            family: model.pair().family().to_string(),
        });
    }
    let (i, j) = pair;
    let n = c_base.n();
    if i >= n || j >= n || i == j {
        return Err(Error::ParameterOutOfRange {
            name: "pair indices",
            value: i as f64,
            constraint: "distinct indices below the particle count",
        });
    }
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::NonPositiveConstant { name: "h", value: h });
    }
    if c_base.n() != model.n() {
        return Err(Error::ParameterOutOfRange {
            name: "configuration length",
            value: c_base.n() as f64,
            constraint: "must equal the model's particle count",
        });
    }

    let eval = |xi: f64| -> Result<f64> {
        let mut xs = c_base.positions().to_vec();
        xs[i] = xi;
        log_psi(model, &Configuration::new(xs)?)
            .finite()
            .ok_or(Error::NodeConfiguration)
    };
    let contact = c_base.positions()[j];
    let at = eval(contact)?;
    let plus = eval(contact + h)?;
    let minus = eval(contact - h)?;
    let d_plus = (plus - at) / h;
    let d_minus = (at - minus) / h;
    let measured_jump = d_plus - d_minus;
    let expected_jump = cusp.jump;
    let abs_err = (measured_jump - expected_jump).abs();
    Ok(CuspCheckReport {
        expected_jump,
        measured_jump,
        abs_err,
        rel_err: abs_err / expected_jump.abs().max(1.0),
    })
}

const SYMMETRIZATION_CAP: usize = 8;

/// ln of the site-symmetrized lattice wavefunction: log-sum-exp over all
/// N! assignments of particles to sites of the envelope part, plus the
/// (already symmetric) pair part. Factorial cost, so capped at N = 8.
pub fn symmetrized_log_psi(model: &ValidatedModel, config: &Configuration) -> Result<f64> {
    let Confinement::Lattice { sites } = model.confinement() else {
        return Err(Error::ConfinementMismatch {
            expected: "lattice",
            actual: model.confinement().kind(),
        });
    };
    let n = config.n();
    if n != model.n() {
        return Err(Error::ParameterOutOfRange {
            name: "configuration length",
            value: n as f64,
            constraint: "must equal the model's particle count",
        });
    }
    if n > SYMMETRIZATION_CAP {
        return Err(Error::TooManyParticlesForSymmetrization {
            n,
            max: SYMMETRIZATION_CAP,
        });
    }

    let p = model.phys();
    let xs = config.positions();
    let k = p.mass * p.omega / (2.0 * p.hbar);
    let envelope_term = |assignment: &[usize]| -> f64 {
        let mut acc = 0.0;
        for (particle, &site) in assignment.iter().enumerate() {
            let d = xs[particle] - sites[site];
            acc += -k * d * d;
        }
        acc
    };

    // Heap's algorithm over site indices; n! <= 40320 terms.
    let mut assignment: Vec<usize> = (0..n).collect();
    let mut counters = vec![0usize; n];
    let mut terms = Vec::with_capacity((1..=n).product());
    terms.push(envelope_term(&assignment));
    let mut i = 0;
    while i < n {
        if counters[i] < i {
            if i % 2 == 0 {
                assignment.swap(0, i);
            } else {
                assignment.swap(counters[i], i);
            }
            terms.push(envelope_term(&assignment));
            counters[i] += 1;
            i = 0;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }

    let m = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lse = m + terms.iter().map(|t| (t - m).exp()).sum::<f64>().ln();

    let order = config.canonical_order();
    let mut jastrow = 0.0;
    for a in 0..n {
        for b in (a + 1)..n {
            match model.pair().log_f(xs[order[a]] - xs[order[b]]) {
                LogValue::Finite(v) => jastrow += v,
                LogValue::NegInfinity => return Ok(f64::NEG_INFINITY),
            }
        }
    }
    Ok(lse + jastrow)
}
