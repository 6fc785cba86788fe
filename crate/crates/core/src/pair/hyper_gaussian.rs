use serde::{Deserialize, Serialize};

use super::{require_off_node, CuspDescriptor, LogValue, PairFunction};
use crate::error::Error;
use crate::Result;

/// f(x) = exp(g |x|^n), n >= 1. The stretched-exponential family that
/// interpolates between the contact correlation (n = 1) and the Gaussian
/// one (n = 2). For other n the induced three-body term does not reduce
/// to anything simpler, which makes this the family that exercises the
/// general triple-sum machinery.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperGaussian {
    g: f64,
    n: f64,
}

impl HyperGaussian {
    pub fn new(g: f64, n: f64) -> Result<Self> {
        if !n.is_finite() || n < 1.0 {
            return Err(Error::ParameterOutOfRange {
                name: "n",
                value: n,
                constraint: "n >= 1",
            });
        }
        if !g.is_finite() {
            return Err(Error::ParameterOutOfRange {
                name: "g",
                value: g,
                constraint: "g finite",
            });
        }
        Ok(Self { g, n })
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn n(&self) -> f64 {
        self.n
    }
}

impl PairFunction for HyperGaussian {
    fn family(&self) -> &'static str {
        "hyper-gaussian"
    }

    fn params(&self) -> Vec<(&'static str, f64)> {
        vec![("g", self.g), ("n", self.n)]
    }

    fn log_f(&self, x: f64) -> LogValue {
        LogValue::Finite(self.g * x.abs().powf(self.n))
    }

    fn dlog_f(&self, x: f64) -> Result<f64> {
        require_off_node(x)?;
        Ok(self.g * self.n * x.abs().powf(self.n - 1.0) * x.signum())
    }

    fn d2log_f(&self, x: f64) -> Result<f64> {
        require_off_node(x)?;
        // n = 1 must give exactly 0 (not 0 * |x|^-1, which can overflow
        // to 0 * inf = NaN for subnormal x).
        if self.n == 1.0 {
            return Ok(0.0);
        }
        Ok(self.g * self.n * (self.n - 1.0) * x.abs().powf(self.n - 2.0))
    }

    fn cusp(&self) -> CuspDescriptor {
        if self.n == 1.0 {
            CuspDescriptor {
                has_cusp: true,
                jump: 2.0 * self.g,
                hard_core: false,
            }
        } else {
            CuspDescriptor::SMOOTH
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pair::ExpAbs;

    #[test]
    fn frozen_values_n3() {
        let f = HyperGaussian::new(-0.2, 3.0).unwrap();
        assert_eq!(f.log_f(2.0), LogValue::Finite(-1.6));
        // dlog = g n |x|^(n-1) sgn(x) = -0.6 * 4 = -2.4 at x = 2.
        assert!((f.dlog_f(2.0).unwrap() + 2.4).abs() < 1e-15);
        assert!((f.dlog_f(-2.0).unwrap() - 2.4).abs() < 1e-15);
        // d2log = g n (n-1) |x| = -1.2 * 2 at x = +-2.
        assert!((f.d2log_f(2.0).unwrap() + 2.4).abs() < 1e-15);
    }

    #[test]
    fn n1_matches_contact_family() {
        let hg = HyperGaussian::new(0.9, 1.0).unwrap();
        let ea = ExpAbs::new(0.9);
        for &x in &[-3.0, -0.2, 0.7, 11.0] {
            assert_eq!(hg.log_f(x), ea.log_f(x));
            assert_eq!(hg.dlog_f(x).unwrap(), ea.dlog_f(x).unwrap());
            assert_eq!(hg.d2log_f(x).unwrap(), ea.d2log_f(x).unwrap());
        }
        assert_eq!(hg.cusp(), ea.cusp());
        // Subnormal x must not produce NaN from 0 * inf.
        assert_eq!(hg.d2log_f(5e-324).unwrap(), 0.0);
    }

    #[test]
    fn n_below_one_rejected() {
        assert!(matches!(
            HyperGaussian::new(0.5, 0.99),
            Err(Error::ParameterOutOfRange { name: "n", .. })
        ));
    }
}
