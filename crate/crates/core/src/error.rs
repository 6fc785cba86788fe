use thiserror::Error;

/// Structured failure modes. Each variant names the violated contract;
/// callers decide whether a variant is fatal (bad model) or a value
/// (e.g. a node hit during sampling is handled, not propagated).
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A physical constant or family parameter that must be positive is not.
    #[error("{name} must be positive, got {value}")]
    NonPositiveConstant { name: &'static str, value: f64 },

    /// A parameter constrained to a range is outside it.
    #[error("{name} = {value} violates {constraint}")]
    ParameterOutOfRange {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    /// Lattice site count does not match the particle count.
    #[error("lattice has {sites} sites but the model has {particles} particles")]
    SiteCountMismatch { sites: usize, particles: usize },

    /// The paper-catalog convention needs a closed-form constant split,
    /// which this family/confinement combination does not have.
    #[error("no closed-form energy catalog for {family} with {confinement} confinement")]
    UnsupportedConventionForFamily {
        family: String,
        confinement: &'static str,
    },

    /// Log-derivative of a pair function requested at particle contact.
    #[error("pair-function log-derivative evaluated at x = 0")]
    EvaluationAtNode,

    /// Two particles sit at exactly the same coordinate.
    #[error("particles {i} and {j} coincide exactly")]
    CoincidentParticles { i: usize, j: usize },

    /// An operation that only makes sense for one confinement kind was
    /// called with another.
    #[error("operation requires {expected} confinement, model has {actual}")]
    ConfinementMismatch {
        expected: &'static str,
        actual: &'static str,
    },

    /// Local energy requested at a configuration where the wavefunction
    /// vanishes.
    #[error("local energy is undefined at a node of the wavefunction")]
    NodeConfiguration,

    /// Cusp measurement requested for a pair function with no cusp.
    #[error("family '{family}' has a smooth pair function; there is no contact cusp to measure")]
    NotACuspedModel { family: String },

    /// Rejection sampling of configurations accepted too little to finish.
    #[error("configuration rejection sampling starved: {accepted} accepted in {attempted} draws")]
    RejectionStarvation { accepted: usize, attempted: usize },

    /// Site-permutation symmetrization grows factorially; refuse above the cap.
    #[error("symmetrization over {n}! site permutations exceeds the cap of {max} particles")]
    TooManyParticlesForSymmetrization { n: usize, max: usize },

    /// The grid oracle needs a binding confinement.
    #[error("grid diagonalization requires a bound model (free confinement has no discrete ground state)")]
    UnboundModel,

    /// Iterative eigensolver ran out of iterations.
    #[error("eigensolver did not converge: residual {residual:.3e} after {iterations} iterations")]
    NoConvergence { iterations: usize, residual: f64 },

    /// Metropolis chain acceptance collapsed.
    #[error("chain stuck: post-burn-in acceptance rate {acceptance_rate:.4} below 0.01")]
    StuckChain { acceptance_rate: f64 },

    /// A coordinate is NaN or infinite.
    #[error("coordinate {index} is not finite ({value})")]
    NonFiniteCoordinate { index: usize, value: f64 },

    /// A configuration or model with zero particles.
    #[error("at least one particle is required")]
    EmptySystem,

    /// Registry lookup failed.
    #[error("unknown pair-function family '{name}'; known: {known}")]
    UnknownFamily { name: String, known: String },

    /// A family was built without one of its required parameters.
    #[error("family '{family}' requires parameter '{parameter}'")]
    MissingParameter {
        family: &'static str,
        parameter: &'static str,
    },

    /// Anharmonic envelope derivatives disagree with finite differences.
    #[error("envelope derivative '{which}' disagrees with finite differences at x = {x} (analytic {analytic}, numeric {numeric})")]
    EnvelopeDerivativeMismatch {
        which: &'static str,
        x: f64,
        analytic: f64,
        numeric: f64,
    },
}
