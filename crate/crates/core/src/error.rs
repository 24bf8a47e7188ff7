//! Error type shared across the crate.

use crate::state::{PlanarPoint, SpatialState};

/// Errors raised by geometry, root finding, and propagation.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Mass triple fails positivity, ordering, or normalization.
    #[error("invalid masses ({m1}, {m2}, {m3}): {reason}")]
    InvalidMasses {
        m1: f64,
        m2: f64,
        m3: f64,
        reason: &'static str,
    },
    /// Mass triple is admissible but the requested construction degenerates.
    #[error("degenerate masses ({m1}, {m2}, {m3}): {reason}")]
    DegenerateMasses {
        m1: f64,
        m2: f64,
        m3: f64,
        reason: &'static str,
    },
    /// Mass ratio outside [0, 1/2].
    #[error("mass ratio {mu} outside [0, 1/2]")]
    MassRatioRange { mu: f64 },
    /// A parameter sits where the requested quantity is undefined.
    #[error("degenerate parameter: {detail}")]
    DegenerateParameter { detail: String },
    /// Evaluation point within the singularity guard of primary `index`
    /// (1-based; 0 marks the rescaled singularity at the origin).
    #[error("position ({x}, {y}, {z}) within guard radius of primary {index}")]
    SingularPosition { index: usize, x: f64, y: f64, z: f64 },
    /// Grid-seeded root search did not resolve exactly four points.
    #[error("root search found {} distinct roots instead of 4", roots.len())]
    RootCount { roots: Vec<PlanarPoint> },
    /// Newton continuation into the full problem failed to converge.
    #[error("continuation from seed ({}, {}) did not converge", seed.x, seed.y)]
    ContinuationDiverged { seed: PlanarPoint },
    /// Stability analysis requested at a point that is not an equilibrium.
    #[error("not an equilibrium: |grad W| = {grad_norm:.3e}")]
    NotAnEquilibrium { grad_norm: f64 },
    /// Coefficient signs match none of the four linear stability classes.
    #[error("spectrum with A = {a}, B = {b}, D = {d} matches no class")]
    UnclassifiableSpectrum { a: f64, b: f64, d: f64 },
    /// Bisection target changes sign zero or multiple times where exactly
    /// one crossing is expected.
    #[error("expected exactly one sign change, found {found}")]
    SignChangeCount { found: usize },
    /// Caller-supplied argument outside its documented range.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// Propagation stopped near a singularity; carries the last accepted
    /// state and the offending separation.
    #[error("singularity approach at t = {t}: separation {separation:.3e}")]
    SingularityApproach {
        t: f64,
        separation: f64,
        last: SpatialState,
    },
    /// Propagation exceeded its step budget; carries the last accepted state.
    #[error("step budget {budget} exhausted at t = {t}")]
    StepBudget {
        t: f64,
        budget: usize,
        last: SpatialState,
    },
    /// Operation needs at least one trajectory sample.
    #[error("empty trajectory")]
    EmptyTrajectory,
}

pub type Result<T> = std::result::Result<T, Error>;
