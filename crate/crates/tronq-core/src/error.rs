//! Error conditions shared across the crate.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("branch constraint violated for {case}: {detail}")]
    BranchConstraint { case: &'static str, detail: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("substitution matrix near-singular at w = {w:?} (|det| = {det:.3e})")]
    NearSingular { w: (f64, f64), det: f64 },

    #[error("equation evaluated at a pole (y = 0)")]
    PoleOfEquation,

    #[error("reciprocal of series with zero leading coefficient")]
    ZeroLeadingCoefficient,

    #[error("resonance in level-{k} recursion at order {j}: pivot {pivot:.3e}")]
    Resonance { k: usize, j: usize, pivot: f64 },

    #[error("gamma function pole at z = {0:?}")]
    GammaPole((f64, f64)),

    #[error("Borel transform requires a series with positive leading exponent (offset {0})")]
    NonpositiveBorelExponent(i32),

    #[error("Laplace ray phi = {phi:.4} passes within {dist:.3e} of a Borel-plane pole; try the other side")]
    RayNearPole { phi: f64, dist: f64 },

    #[error("Laplace decay condition violated: Re(w e^{{i phi}}) = {margin:.3e} <= 0")]
    DecayCondition { margin: f64 },

    #[error("no admissible Laplace ray for w = {w:?} on the requested side")]
    NoAdmissibleRay { w: (f64, f64) },

    #[error("Pade system degenerate beyond recovery")]
    PadeDegenerate,

    #[error("step size underflow at w = {w:?} without blowup (stiffness)")]
    Stiffness { w: (f64, f64) },

    #[error("path waypoints invalid: {0}")]
    Path(String),

    #[error("constant fit ill-conditioned: spread {spread:.3e} exceeds {limit:.3e}")]
    IllConditionedFit { spread: f64, limit: f64 },

    #[error("not applicable for this case: {0}")]
    NotApplicable(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
