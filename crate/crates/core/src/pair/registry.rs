//! Name-based registry of pair-correlation families.
//!
//! The CLI and config layer select a family by string; the registry turns
//! that plus a bag of named parameters into a boxed strategy. Aliases cover
//! the common model names (calogero, lieb-liniger, hyperbolic, ...).

use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use super::{ExpAbs, GaussianPair, HyperGaussian, PairFunction, PowerLaw, SinhPow};
use crate::error::Error;
use crate::Result;

/// Named parameters a family may consume. Unset fields are simply absent;
/// each builder checks for what it needs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PairParams {
    pub lambda: Option<f64>,
    pub g: Option<f64>,
    pub ell: Option<f64>,
    pub n: Option<f64>,
}

impl PairParams {
    fn require(&self, family: &'static str, parameter: &'static str) -> Result<f64> {
        let v = match parameter {
            "lambda" => self.lambda,
            "g" => self.g,
            "ell" => self.ell,
            "n" => self.n,
            _ => None,
        };
        v.ok_or(Error::MissingParameter { family, parameter })
    }
}

type Builder = fn(&PairParams) -> Result<Arc<dyn PairFunction>>;

/// Static description of one registered family.
#[derive(Clone, Copy, Debug)]
pub struct FamilyInfo {
    pub name: &'static str,
    pub aliases: &'static [&'static str],
    pub parameters: &'static [&'static str],
    pub summary: &'static str,
}

pub struct PairFamilyRegistry {
    entries: Vec<(FamilyInfo, Builder)>,
}

impl PairFamilyRegistry {
    fn with_defaults() -> Self {
        let mut r = Self {
            entries: Vec::new(),
        };
        r.register(
            FamilyInfo {
                name: "power-law",
                aliases: &["calogero"],
                parameters: &["lambda"],
                summary: "f(x) = |x|^lambda; inverse-square pair interaction, vanishing three-body term",
            },
            |p| {
                Ok(Arc::new(PowerLaw::new(p.require("power-law", "lambda")?)?) as _)
            },
        );
        r.register(
            FamilyInfo {
                name: "exp-abs",
                aliases: &["lieb-liniger", "contact"],
                parameters: &["g"],
                summary: "f(x) = exp(g|x|); contact interaction of strength 2g hbar^2/m plus linear long-range term",
            },
            |p| Ok(Arc::new(ExpAbs::new(p.require("exp-abs", "g")?)) as _),
        );
        r.register(
            FamilyInfo {
                name: "gaussian",
                aliases: &[],
                parameters: &["g"],
                summary: "f(x) = exp(g x^2); quadratic pair interactions, three-body term reduces to two-body",
            },
            |p| Ok(Arc::new(GaussianPair::new(p.require("gaussian", "g")?)) as _),
        );
        r.register(
            FamilyInfo {
                name: "sinh-pow",
                aliases: &["hyperbolic"],
                parameters: &["lambda", "ell"],
                summary: "f(x) = sinh(x/ell)^lambda; csch^2 pair interaction with gravitational-like long-range attraction",
            },
            |p| {
                Ok(Arc::new(SinhPow::new(
                    p.require("sinh-pow", "lambda")?,
                    p.require("sinh-pow", "ell")?,
                )?) as _)
            },
        );
        r.register(
            FamilyInfo {
                name: "hyper-gaussian",
                aliases: &["stretched-exponential"],
                parameters: &["g", "n"],
                summary: "f(x) = exp(g|x|^n), n >= 1; irreducible three-body interactions for n outside {1, 2}",
            },
            |p| {
                Ok(Arc::new(HyperGaussian::new(
                    p.require("hyper-gaussian", "g")?,
                    p.require("hyper-gaussian", "n")?,
                )?) as _)
            },
        );
        r
    }

    fn register(&mut self, info: FamilyInfo, builder: Builder) {
        debug_assert!(
            self.lookup(info.name).is_none(),
            "duplicate family name {}",
            info.name
        );
        self.entries.push((info, builder));
    }

    fn lookup(&self, name: &str) -> Option<&(FamilyInfo, Builder)> {
        self.entries
            .iter()
            .find(|(info, _)| info.name == name || info.aliases.contains(&name))
    }

    /// All registered families, in registration order.
    pub fn families(&self) -> impl Iterator<Item = &FamilyInfo> {
        self.entries.iter().map(|(info, _)| info)
    }

    /// Builds the named family from its parameters.
    pub fn build(&self, name: &str, params: &PairParams) -> Result<Arc<dyn PairFunction>> {
        match self.lookup(name) {
            Some((_, builder)) => builder(params),
            None => Err(Error::UnknownFamily {
                name: name.to_string(),
                known: self
                    .entries
                    .iter()
                    .map(|(info, _)| info.name)
                    .collect::<Vec<_>>()
                    .join(", "),
            }),
        }
    }
}

/// The process-wide registry with the five built-in families.
pub fn registry() -> &'static PairFamilyRegistry {
    static REGISTRY: OnceLock<PairFamilyRegistry> = OnceLock::new();
    REGISTRY.get_or_init(PairFamilyRegistry::with_defaults)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builds_by_name_and_alias() {
        let p = PairParams {
            lambda: Some(2.0),
            ..Default::default()
        };
        assert_eq!(registry().build("power-law", &p).unwrap().family(), "power-law");
        assert_eq!(registry().build("calogero", &p).unwrap().family(), "power-law");

        let p = PairParams {
            lambda: Some(1.0),
            ell: Some(0.5),
            ..Default::default()
        };
        assert_eq!(registry().build("hyperbolic", &p).unwrap().family(), "sinh-pow");
    }

    #[test]
    fn unknown_family_lists_known_names() {
        let err = registry().build("nope", &PairParams::default()).err().unwrap();
        match err {
            Error::UnknownFamily { known, .. } => {
                assert!(known.contains("power-law"));
                assert!(known.contains("hyper-gaussian"));
            }
            other => panic!("wrong error: {other:?}"),
        }
    }

    #[test]
    fn missing_parameter_is_named() {
        let err = registry()
            .build("sinh-pow", &PairParams {
                lambda: Some(1.0),
                ..Default::default()
            })
            .err().unwrap();
        assert!(matches!(
            err,
            Error::MissingParameter {
                family: "sinh-pow",
                parameter: "ell"
            }
        ));
    }

    #[test]
    fn five_families_registered() {
        assert_eq!(registry().families().count(), 5);
    }

    #[test]
    fn invalid_parameters_propagate() {
        let err = registry()
            .build("power-law", &PairParams {
                lambda: Some(-1.0),
                ..Default::default()
            })
            .err().unwrap();
        assert!(matches!(err, Error::ParameterOutOfRange { .. }));
    }
}
