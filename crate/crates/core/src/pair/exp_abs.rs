use serde::{Deserialize, Serialize};

use super::{require_off_node, CuspDescriptor, LogValue, PairFunction};

/// f(x) = exp(g |x|). The contact-interaction correlation: a kink at
/// x = 0 whose log-derivative jumps by 2g, the hallmark of a delta
/// interaction of strength 2g hbar^2/m. Smooth and positive at contact,
/// so no hard core. g of either sign is allowed (g = 0 is degenerate but
/// still reports a cusp of zero jump).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpAbs {
    g: f64,
}

impl ExpAbs {
    pub fn new(g: f64) -> Self {
        Self { g }
    }

    pub fn g(&self) -> f64 {
        self.g
    }
}

impl PairFunction for ExpAbs {
    fn family(&self) -> &'static str {
        "exp-abs"
    }

    fn params(&self) -> Vec<(&'static str, f64)> {
        vec![("g", self.g)]
    }

    fn log_f(&self, x: f64) -> LogValue {
        LogValue::Finite(self.g * x.abs())
    }

    fn dlog_f(&self, x: f64) -> crate::Result<f64> {
        require_off_node(x)?;
        Ok(self.g * x.signum())
    }

    fn d2log_f(&self, x: f64) -> crate::Result<f64> {
        require_off_node(x)?;
        Ok(0.0)
    }

    fn cusp(&self) -> CuspDescriptor {
        CuspDescriptor {
            has_cusp: true,
            jump: 2.0 * self.g,
            hard_core: false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frozen_values() {
        let f = ExpAbs::new(-0.5);
        assert_eq!(f.log_f(-2.0), LogValue::Finite(-1.0));
        let f = ExpAbs::new(0.7);
        assert_eq!(f.dlog_f(-1.0).unwrap(), -0.7);
        assert_eq!(f.dlog_f(3.0).unwrap(), 0.7);
        assert_eq!(f.d2log_f(0.4).unwrap(), 0.0);
    }

    #[test]
    fn cusp_jump_is_twice_g() {
        assert_eq!(ExpAbs::new(0.8).cusp().jump, 1.6);
        assert_eq!(ExpAbs::new(-1.2).cusp().jump, -2.4);
        let degenerate = ExpAbs::new(0.0).cusp();
        assert!(degenerate.has_cusp);
        assert_eq!(degenerate.jump, 0.0);
    }
}
