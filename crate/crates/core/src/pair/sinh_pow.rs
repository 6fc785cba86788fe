use serde::{Deserialize, Serialize};

use super::{require_off_node, CuspDescriptor, LogValue, PairFunction};
use crate::error::Error;
use crate::Result;

/// f(x) = sinh(x/ell)^lambda. Behaves like the power-law correlation at
/// short range (hard core for lambda > 0) and like exp(lambda |x|/ell) at
/// long range, which is what produces the linear, gravitational-like
/// long-range attraction in the trapped model.
///
/// For non-integer or odd lambda the principal value sinh(u)^lambda is
/// complex at u < 0; all observables here depend only on |f|, so the
/// implementation works with |sinh(u)|^lambda, the even extension. All
/// evaluation is in log space: direct sinh overflows near |x|/ell ~ 350,
/// ln|sinh(u)| = |u| + ln(1 - e^(-2|u|)) - ln 2 never does.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SinhPow {
    lambda: f64,
    ell: f64,
}

impl SinhPow {
    pub fn new(lambda: f64, ell: f64) -> Result<Self> {
        if !lambda.is_finite() || lambda < 0.0 {
            return Err(Error::ParameterOutOfRange {
                name: "lambda",
                value: lambda,
                constraint: "lambda >= 0",
            });
        }
        if !(ell > 0.0) || !ell.is_finite() {
            return Err(Error::NonPositiveConstant {
                name: "ell",
                value: ell,
            });
        }
        Ok(Self { lambda, ell })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn ell(&self) -> f64 {
        self.ell
    }

    /// ln|sinh(u)|, overflow-safe for any finite u.
    fn ln_sinh_abs(u: f64) -> f64 {
        let a = u.abs();
        // 1 - e^(-2a) via expm1 keeps precision for small a.
        let one_minus = -(-2.0 * a).exp_m1();
        a + one_minus.ln() - std::f64::consts::LN_2
    }

    /// 1/sinh(u)^2, overflow-safe for large |u|.
    fn csch2(u: f64) -> f64 {
        let a = u.abs();
        if a <= 1.0 {
            let s = u.sinh();
            1.0 / (s * s)
        } else {
            let one_minus = -(-2.0 * a).exp_m1();
            4.0 * (-2.0 * a).exp() / (one_minus * one_minus)
        }
    }
}

impl PairFunction for SinhPow {
    fn family(&self) -> &'static str {
        "sinh-pow"
    }

    fn params(&self) -> Vec<(&'static str, f64)> {
        vec![("lambda", self.lambda), ("ell", self.ell)]
    }

    fn log_f(&self, x: f64) -> LogValue {
        if self.lambda == 0.0 {
            return LogValue::Finite(0.0);
        }
        if x == 0.0 {
            return LogValue::NegInfinity;
        }
        LogValue::Finite(self.lambda * Self::ln_sinh_abs(x / self.ell))
    }

    fn dlog_f(&self, x: f64) -> Result<f64> {
        require_off_node(x)?;
        let u = x / self.ell;
        Ok(self.lambda / (self.ell * u.tanh()))
    }

    fn d2log_f(&self, x: f64) -> Result<f64> {
        require_off_node(x)?;
        let u = x / self.ell;
        Ok(-self.lambda / (self.ell * self.ell) * Self::csch2(u))
    }

    fn cusp(&self) -> CuspDescriptor {
        CuspDescriptor {
            has_cusp: false,
            jump: 0.0,
            hard_core: self.lambda > 0.0,
        }
    }
}
