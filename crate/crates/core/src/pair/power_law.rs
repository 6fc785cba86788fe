use serde::{Deserialize, Serialize};

use super::{require_off_node, CuspDescriptor, LogValue, PairFunction};
use crate::error::Error;
use crate::Result;

/// f(x) = |x|^lambda. The Calogero correlation: an inverse-square
/// two-body interaction and identically vanishing three-body term.
/// lambda > 0 makes contact a hard-core node; lambda = 0 is the trivial
/// (non-interacting) correlation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerLaw {
    lambda: f64,
}

impl PowerLaw {
    pub fn new(lambda: f64) -> Result<Self> {
        if !lambda.is_finite() || lambda < 0.0 {
            return Err(Error::ParameterOutOfRange {
                name: "lambda",
                value: lambda,
                constraint: "lambda >= 0",
            });
        }
        Ok(Self { lambda })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

impl PairFunction for PowerLaw {
    fn family(&self) -> &'static str {
        "power-law"
    }

    fn params(&self) -> Vec<(&'static str, f64)> {
        vec![("lambda", self.lambda)]
    }

    fn log_f(&self, x: f64) -> LogValue {
        if self.lambda == 0.0 {
            return LogValue::Finite(0.0);
        }
        if x == 0.0 {
            return LogValue::NegInfinity;
        }
        LogValue::Finite(self.lambda * x.abs().ln())
    }

    fn dlog_f(&self, x: f64) -> Result<f64> {
        require_off_node(x)?;
        Ok(self.lambda / x)
    }

    fn d2log_f(&self, x: f64) -> Result<f64> {
        require_off_node(x)?;
        Ok(-self.lambda / (x * x))
    }

    fn cusp(&self) -> CuspDescriptor {
        CuspDescriptor {
            has_cusp: false,
            jump: 0.0,
            hard_core: self.lambda > 0.0,
        }
    }
}
