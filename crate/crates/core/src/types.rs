use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::Result;

/// Physical constants of the problem. Everything downstream carries the
/// explicit hbar/mass/omega dependence; nothing assumes natural units.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhysParams {
    /// Reduced Planck constant, > 0.
    pub hbar: f64,
    /// Particle mass, > 0.
    pub mass: f64,
    /// Trap angular frequency, >= 0 (0 collapses harmonic onto free).
    pub omega: f64,
}

impl Default for PhysParams {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            mass: 1.0,
            omega: 1.0,
        }
    }
}

impl PhysParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.hbar > 0.0) || !self.hbar.is_finite() {
            return Err(Error::NonPositiveConstant {
                name: "hbar",
                value: self.hbar,
            });
        }
        if !(self.mass > 0.0) || !self.mass.is_finite() {
            return Err(Error::NonPositiveConstant {
                name: "mass",
                value: self.mass,
            });
        }
        if !(self.omega >= 0.0) || !self.omega.is_finite() {
            return Err(Error::ParameterOutOfRange {
                name: "omega",
                value: self.omega,
                constraint: "omega >= 0",
            });
        }
        Ok(())
    }

    /// Oscillator length sqrt(hbar / (m omega)); None when omega = 0.
    pub fn oscillator_length(&self) -> Option<f64> {
        if self.omega > 0.0 {
            Some((self.hbar / (self.mass * self.omega)).sqrt())
        } else {
            None
        }
    }
}

/// Positions of the N particles on the line. Coordinates are unconstrained
/// reals; no ordering sector is enforced (exchange symmetry of the scalar
/// observables is a tested property, not an input requirement).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Configuration {
    positions: Vec<f64>,
}

impl Configuration {
    /// Builds a configuration, rejecting empty and non-finite input.
    pub fn new(positions: Vec<f64>) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::EmptySystem);
        }
        for (index, &value) in positions.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFiniteCoordinate { index, value });
            }
        }
        Ok(Self { positions })
    }

    pub fn n(&self) -> usize {
        self.positions.len()
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    /// Smallest pairwise separation |x_i - x_j|; +inf for a single particle.
    pub fn min_separation(&self) -> f64 {
        let xs = &self.positions;
        let mut min = f64::INFINITY;
        for i in 0..xs.len() {
            for j in (i + 1)..xs.len() {
                min = min.min((xs[i] - xs[j]).abs());
            }
        }
        min
    }

    /// Indices sorted by coordinate value. Scalar reductions iterate pairs
    /// and triples in this order so their floating-point value is exactly
    /// invariant under relabeling of the particles.
    pub fn canonical_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.positions.len()).collect();
        order.sort_by(|&a, &b| self.positions[a].total_cmp(&self.positions[b]));
        order
    }

    /// Error if any two particles coincide exactly (bitwise zero separation).
    pub fn require_no_coincidence(&self) -> Result<()> {
        let xs = &self.positions;
        for i in 0..xs.len() {
            for j in (i + 1)..xs.len() {
                if xs[i] - xs[j] == 0.0 {
                    return Err(Error::CoincidentParticles { i, j });
                }
            }
        }
        Ok(())
    }
}
