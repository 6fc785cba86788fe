use std::fmt;
use std::sync::Arc;

use crate::error::Error;
use crate::types::PhysParams;
use crate::Result;

/// Log-envelope of a general trap: the one-body factor of the ground state
/// is exp(sum_i v(x_i)). Implementations supply v and its first two
/// derivatives; consistency is spot-checked by finite differences at
/// validation time, because every interaction formula trusts dv and d2v.
pub trait LogEnvelope: Send + Sync {
    fn v(&self, x: f64) -> f64;
    fn dv(&self, x: f64) -> f64;
    fn d2v(&self, x: f64) -> f64;

    /// Short human-readable description for manifests.
    fn describe(&self) -> String;
}

/// v(x) = sum_k coeffs[k] x^k. Covers the quartic traps used in practice
/// and anything else polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct PolynomialEnvelope {
    coeffs: Vec<f64>,
}

impl PolynomialEnvelope {
    /// Coefficients in ascending powers of x.
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }
}

impl LogEnvelope for PolynomialEnvelope {
    fn v(&self, x: f64) -> f64 {
        // Horner keeps the evaluation order fixed and cheap.
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    fn dv(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0.0, |acc, (k, &c)| acc * x + k as f64 * c)
    }

    fn d2v(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .skip(2)
            .rev()
            .fold(0.0, |acc, (k, &c)| acc * x + (k * (k - 1)) as f64 * c)
    }

    fn describe(&self) -> String {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c != 0.0)
            .map(|(k, &c)| format!("{c}*x^{k}"))
            .collect();
        if terms.is_empty() {
            "v(x) = 0".to_string()
        } else {
            format!("v(x) = {}", terms.join(" + "))
        }
    }
}

/// The confinement of the model. Harmonic is kept as its own variant (not
/// a quadratic envelope) because the closed-form catalog and the grid
/// oracle are specific to it; Lattice pins particle i to site i.
#[derive(Clone)]
pub enum Confinement {
    Free,
    Harmonic,
    Anharmonic(Arc<dyn LogEnvelope>),
    Lattice { sites: Vec<f64> },
}

impl fmt::Debug for Confinement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Confinement::Free => write!(f, "Free"),
            Confinement::Harmonic => write!(f, "Harmonic"),
            Confinement::Anharmonic(env) => write!(f, "Anharmonic({})", env.describe()),
            Confinement::Lattice { sites } => write!(f, "Lattice({sites:?})"),
        }
    }
}

impl Confinement {
    pub fn kind(&self) -> &'static str {
        match self {
            Confinement::Free => "free",
            Confinement::Harmonic => "harmonic",
            Confinement::Anharmonic(_) => "anharmonic",
            Confinement::Lattice { .. } => "lattice",
        }
    }

    /// Log-envelope value at x for particle index i (lattice wells differ
    /// per particle). This is the one-body exponent of the ground state.
    pub(crate) fn envelope(&self, p: &PhysParams, i: usize, x: f64) -> f64 {
        match self {
            Confinement::Free => 0.0,
            Confinement::Harmonic => -(p.mass * p.omega) / (2.0 * p.hbar) * x * x,
            Confinement::Anharmonic(env) => env.v(x),
            Confinement::Lattice { sites } => {
                let d = x - sites[i];
                -(p.mass * p.omega) / (2.0 * p.hbar) * d * d
            }
        }
    }

    pub(crate) fn envelope_d1(&self, p: &PhysParams, i: usize, x: f64) -> f64 {
        match self {
            Confinement::Free => 0.0,
            Confinement::Harmonic => -(p.mass * p.omega) / p.hbar * x,
            Confinement::Anharmonic(env) => env.dv(x),
            Confinement::Lattice { sites } => -(p.mass * p.omega) / p.hbar * (x - sites[i]),
        }
    }

    pub(crate) fn envelope_d2(&self, p: &PhysParams, _i: usize, _x: f64) -> f64 {
        match self {
            Confinement::Free => 0.0,
            Confinement::Harmonic | Confinement::Lattice { .. } => -(p.mass * p.omega) / p.hbar,
            Confinement::Anharmonic(env) => env.d2v(_x),
        }
    }

    /// Finite-difference consistency of an anharmonic envelope's stated
    /// derivatives; other variants are consistent by construction.
    pub(crate) fn check_envelope_consistency(&self) -> Result<()> {
        let Confinement::Anharmonic(env) = self else {
            return Ok(());
        };
        for &x in &[-1.7f64, -0.3, 0.6, 2.4] {
            let h = 1e-5 * (1.0 + x.abs());
            let fd1 = (env.v(x + h) - env.v(x - h)) / (2.0 * h);
            let dv = env.dv(x);
            if (fd1 - dv).abs() > 1e-5 * (1.0 + dv.abs()) {
                return Err(Error::EnvelopeDerivativeMismatch {
                    which: "dv",
                    x,
                    analytic: dv,
                    numeric: fd1,
                });
            }
            let h2 = 1e-4 * (1.0 + x.abs());
            let fd2 = (env.dv(x + h2) - env.dv(x - h2)) / (2.0 * h2);
            let d2v = env.d2v(x);
            if (fd2 - d2v).abs() > 1e-5 * (1.0 + d2v.abs()) {
                return Err(Error::EnvelopeDerivativeMismatch {
                    which: "d2v",
                    x,
                    analytic: d2v,
                    numeric: fd2,
                });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_derivatives() {
        // v(x) = -0.1 x^4
        let v = PolynomialEnvelope::new(vec![0.0, 0.0, 0.0, 0.0, -0.1]);
        assert!((v.v(2.0) + 1.6).abs() < 1e-14);
        assert!((v.dv(2.0) + 3.2).abs() < 1e-14);
        assert!((v.d2v(2.0) + 4.8).abs() < 1e-14);
        let c = Confinement::Anharmonic(Arc::new(v));
        c.check_envelope_consistency().unwrap();
    }

    #[test]
    fn inconsistent_envelope_caught() {
        struct Lying;
        impl LogEnvelope for Lying {
            fn v(&self, x: f64) -> f64 {
                -0.5 * x * x
            }
            fn dv(&self, x: f64) -> f64 {
                -x
            }
            fn d2v(&self, _x: f64) -> f64 {
                3.0 // should be -1
            }
            fn describe(&self) -> String {
                "lying".into()
            }
        }
        let c = Confinement::Anharmonic(Arc::new(Lying));
        assert!(matches!(
            c.check_envelope_consistency(),
            Err(Error::EnvelopeDerivativeMismatch { which: "d2v", .. })
        ));
    }

    #[test]
    fn harmonic_envelope_matches_quadratic_polynomial() {
        let p = PhysParams {
            hbar: 2.0,
            mass: 3.0,
            omega: 0.5,
        };
        let harm = Confinement::Harmonic;
        let poly = Confinement::Anharmonic(Arc::new(PolynomialEnvelope::new(vec![
            0.0,
            0.0,
            -(p.mass * p.omega) / (2.0 * p.hbar),
        ])));
        for &x in &[-2.0, 0.3, 1.9] {
            assert!((harm.envelope(&p, 0, x) - poly.envelope(&p, 0, x)).abs() < 1e-15);
            assert!((harm.envelope_d1(&p, 0, x) - poly.envelope_d1(&p, 0, x)).abs() < 1e-15);
            assert!((harm.envelope_d2(&p, 0, x) - poly.envelope_d2(&p, 0, x)).abs() < 1e-15);
        }
    }

    #[test]
    fn lattice_envelope_is_displaced() {
        let p = PhysParams::default();
        let c = Confinement::Lattice {
            sites: vec![0.0, 2.0],
        };
        assert_eq!(c.envelope(&p, 1, 2.0), 0.0);
        assert_eq!(c.envelope(&p, 1, 2.5), -0.125);
        assert_eq!(c.envelope_d1(&p, 0, 0.1), -0.1);
    }
}
