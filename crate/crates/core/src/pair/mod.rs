//! Pair-correlation families as runtime-selectable strategies.
//!
//! Every family implements [`PairFunction`] in log space: `log_f`, the
//! log-derivative `(ln f)'`, and its derivative `(ln f)''`. Working with
//! logs keeps hard-core zeros and large separations finite where direct
//! evaluation of f would under/overflow. Families register by name in
//! [`registry::PairFamilyRegistry`] and are built from named parameters.

mod exp_abs;
mod gaussian;
mod hyper_gaussian;
mod power_law;
pub mod registry;
mod sinh_pow;

pub use exp_abs::ExpAbs;
pub use gaussian::GaussianPair;
pub use hyper_gaussian::HyperGaussian;
pub use power_law::PowerLaw;
pub use registry::{registry, FamilyInfo, PairFamilyRegistry, PairParams};
pub use sinh_pow::SinhPow;

use crate::error::Error;
use crate::Result;

/// ln f(x), with the hard-core zero carried as an explicit marker so
/// callers can distinguish a node hit from floating-point underflow.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LogValue {
    Finite(f64),
    NegInfinity,
}

impl LogValue {
    pub fn is_node(self) -> bool {
        matches!(self, LogValue::NegInfinity)
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            LogValue::Finite(v) => Some(v),
            LogValue::NegInfinity => None,
        }
    }

    /// Collapses the marker back to a float (-inf for a node).
    pub fn to_f64(self) -> f64 {
        match self {
            LogValue::Finite(v) => v,
            LogValue::NegInfinity => f64::NEG_INFINITY,
        }
    }
}

/// How f behaves at particle contact.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CuspDescriptor {
    /// (ln f)' jumps discontinuously across x = 0.
    pub has_cusp: bool,
    /// Size of that jump, lim_{x->0+} (ln f)' - lim_{x->0-} (ln f)'.
    pub jump: f64,
    /// f(0) = 0: the wavefunction vanishes at contact.
    pub hard_core: bool,
}

impl CuspDescriptor {
    pub const SMOOTH: Self = Self {
        has_cusp: false,
        jump: 0.0,
        hard_core: false,
    };
}

/// A symmetric pair-correlation function f(x) of the signed separation,
/// presented through its logarithm. Implementations must satisfy
/// f(-x) = f(x), i.e. log_f even, dlog_f odd, d2log_f even; the test suite
/// enforces this per family.
pub trait PairFunction: Send + Sync {
    /// Registry name of the family.
    fn family(&self) -> &'static str;

    /// Parameter names and values, for manifests and catalog output.
    fn params(&self) -> Vec<(&'static str, f64)>;

    /// ln f(x). Hard-core families return the NegInfinity marker at x = 0.
    fn log_f(&self, x: f64) -> LogValue;

    /// (ln f)'(x) = f'(x)/f(x). Errors at x = 0 exactly.
    fn dlog_f(&self, x: f64) -> Result<f64>;

    /// (ln f)''(x). Errors at x = 0 exactly. Together with dlog_f this gives
    /// f''/f = d2log + dlog^2 without ever forming f itself.
    fn d2log_f(&self, x: f64) -> Result<f64>;

    /// Contact behavior (cusp jump, hard core).
    fn cusp(&self) -> CuspDescriptor;
}

/// Shared guard for the log-derivative contract.
#[inline]
pub(crate) fn require_off_node(x: f64) -> Result<()> {
    if x == 0.0 {
        Err(Error::EvaluationAtNode)
    } else {
        Ok(())
    }
}
