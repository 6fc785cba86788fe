use serde::{Deserialize, Serialize};

use super::{require_off_node, CuspDescriptor, LogValue, PairFunction};

/// f(x) = exp(g x^2). Smooth everywhere; the induced two- and three-body
/// interactions are quadratic pair potentials, and the three-body term
/// collapses to an effective two-body one. Either sign of g is allowed
/// (g < 0 binds in free space, g > 0 needs the trap to stay normalizable).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianPair {
    g: f64,
}

impl GaussianPair {
    pub fn new(g: f64) -> Self {
        Self { g }
    }

    pub fn g(&self) -> f64 {
        self.g
    }
}

impl PairFunction for GaussianPair {
    fn family(&self) -> &'static str {
        "gaussian"
    }

    fn params(&self) -> Vec<(&'static str, f64)> {
        vec![("g", self.g)]
    }

    fn log_f(&self, x: f64) -> LogValue {
        LogValue::Finite(self.g * x * x)
    }

    fn dlog_f(&self, x: f64) -> crate::Result<f64> {
        require_off_node(x)?;
        Ok(2.0 * self.g * x)
    }

    fn d2log_f(&self, x: f64) -> crate::Result<f64> {
        require_off_node(x)?;
        Ok(2.0 * self.g)
    }

    fn cusp(&self) -> CuspDescriptor {
        CuspDescriptor::SMOOTH
    }
}
