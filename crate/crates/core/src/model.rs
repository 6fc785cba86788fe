use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::confinement::Confinement;
use crate::error::Error;
use crate::pair::PairFunction;
use crate::types::PhysParams;
use crate::Result;

/// How constants inside the interaction terms are bookkept.
///
/// Verbatim keeps every term exactly as the construction produces it, so
/// the trapped eigenvalue is always N hbar omega / 2 (0 in free space).
/// PaperCatalog strips the constant part out of the potentials and moves
/// it into the eigenvalue, the way the cataloged models are usually
/// quoted; only family/confinement combinations with a closed-form
/// catalog entry support it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    Verbatim,
    PaperCatalog,
}

/// Deliberate sign flips for mutation-testing the verification pipeline:
/// a checker that still passes with a flipped term is not checking it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum Sabotage {
    #[default]
    #[serde(rename = "none")]
    None,
    /// Flip the sign of the three-body term.
    #[serde(rename = "flip-v3-sign")]
    FlipV3Sign,
    /// Flip the sign of the long-range (trap-induced pair) term.
    #[serde(rename = "flip-v2l-sign")]
    FlipV2LSign,
}

/// An unvalidated model description: pair family strategy, confinement,
/// particle count, physical constants, and bookkeeping convention.
#[derive(Clone)]
pub struct ModelSpec {
    pub pair: Arc<dyn PairFunction>,
    pub confinement: Confinement,
    pub n_particles: usize,
    pub params: PhysParams,
    pub convention: Convention,
}

impl ModelSpec {
    /// Checks every structural invariant and returns the witness type the
    /// rest of the crate operates on.
    pub fn validate(self) -> Result<ValidatedModel> {
        self.params.validate()?;
        if self.n_particles == 0 {
            return Err(Error::EmptySystem);
        }
        if let Confinement::Lattice { sites } = &self.confinement {
            if sites.len() != self.n_particles {
                return Err(Error::SiteCountMismatch {
                    sites: sites.len(),
                    particles: self.n_particles,
                });
            }
            for (index, &s) in sites.iter().enumerate() {
                if !s.is_finite() {
                    return Err(Error::NonFiniteCoordinate { index, value: s });
                }
            }
        }
        self.confinement.check_envelope_consistency()?;
        if self.convention == Convention::PaperCatalog {
            // Coverage check: the catalog must have a closed form for this
            // combination. The returned entry is discarded here; the
            // evaluation path recomputes it where needed.
            crate::hamiltonian::catalog_for_parts(
                self.pair.as_ref(),
                &self.confinement,
                self.n_particles,
                &self.params,
            )?;
        }
        Ok(ValidatedModel {
            spec: self,
            sabotage: Sabotage::None,
        })
    }
}

/// A model that passed validation. All evaluation entry points take this,
/// so invalid combinations are unrepresentable downstream.
#[derive(Clone)]
pub struct ValidatedModel {
    spec: ModelSpec,
    sabotage: Sabotage,
}

impl ValidatedModel {
    pub fn pair(&self) -> &dyn PairFunction {
        self.spec.pair.as_ref()
    }

    pub fn pair_arc(&self) -> Arc<dyn PairFunction> {
        Arc::clone(&self.spec.pair)
    }

    pub fn confinement(&self) -> &Confinement {
        &self.spec.confinement
    }

    pub fn n(&self) -> usize {
        self.spec.n_particles
    }

    pub fn phys(&self) -> &PhysParams {
        &self.spec.params
    }

    pub fn convention(&self) -> Convention {
        self.spec.convention
    }

    pub fn sabotage(&self) -> Sabotage {
        self.sabotage
    }

    /// Same model with a deliberate sign flip applied to one term.
    pub fn with_sabotage(mut self, sabotage: Sabotage) -> Self {
        self.sabotage = sabotage;
        self
    }

    /// Same model with a different convention (revalidated, since the
    /// catalog convention is not available for every model).
    pub fn with_convention(&self, convention: Convention) -> Result<Self> {
        let mut spec = self.spec.clone();
        spec.convention = convention;
        spec.validate().map(|m| m.with_sabotage(self.sabotage))
    }

    /// Flat serializable echo for manifests and reports.
    pub fn summary(&self) -> ModelSummary {
        ModelSummary {
            family: self.pair().family().to_string(),
            parameters: self
                .pair()
                .params()
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
            confinement: self.confinement().kind().to_string(),
            sites: match self.confinement() {
                Confinement::Lattice { sites } => Some(sites.clone()),
                _ => None,
            },
            n_particles: self.n(),
            hbar: self.phys().hbar,
            mass: self.phys().mass,
            omega: self.phys().omega,
            convention: match self.convention() {
                Convention::Verbatim => "verbatim".to_string(),
                Convention::PaperCatalog => "paper-catalog".to_string(),
            },
        }
    }
}

/// Serializable flat description of a validated model.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModelSummary {
    pub family: String,
    pub parameters: BTreeMap<String, f64>,
    pub confinement: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sites: Option<Vec<f64>>,
    pub n_particles: usize,
    pub hbar: f64,
    pub mass: f64,
    pub omega: f64,
    pub convention: String,
}
