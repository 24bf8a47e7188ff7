//! Dynamics of a massless particle near the smallest primary of an
//! equilateral three-primary system.
//!
//! Three point masses m1 >= m2 >= m3 sit at the vertices of a unit
//! equilateral triangle and rotate rigidly about their barycenter with unit
//! angular velocity. A fourth, massless particle moves in their field. As
//! m3 -> 0 with the remaining pair sharing mass 1 in ratio mu = m2, a
//! symplectic rescaling of coordinates by m3^(1/3) centered on the third
//! primary yields a Hill-type limit problem whose effective potential is
//!
//! ```text
//! W(x, y, z) = (3/8) x^2 + (3*sqrt(3)/4)(1 - 2 mu) x y + (9/8) y^2
//!              - z^2 / 2 + 1 / r,        r = |(x, y, z)|
//! ```
//!
//! in a synodic frame. The limit problem keeps four libration points, two
//! per eigendirection of its quadratic part, and a Jacobi-type first
//! integral C = 2 W - |v|^2.
//!
//! The crate provides:
//!
//! - [`r4bp`]: the full four-body field for arbitrary admissible mass
//!   triples, the primary triangle geometry, and the rescaled acceleration
//!   used to quantify convergence to the limit;
//! - [`hill`]: the limit Hamiltonian, effective potential, equations of
//!   motion, and first integral;
//! - [`equilibria`]: closed-form libration points, a grid-seeded Newton
//!   oracle, and continuation of the points into the full problem at small
//!   positive m3;
//! - [`stability`]: linearization, characteristic coefficients, spectrum,
//!   stability classes, and the critical mass ratio where the in-plane
//!   spectrum degenerates;
//! - [`integrate`]: an embedded Dormand-Prince 5(4) propagator with dense
//!   output and singularity guards;
//! - [`regions`]: zero-velocity curves and allowed-region masks on
//!   rectangular grids.
//!
//! Positions carry rotating-frame velocities by default; canonical momenta
//! appear only through the explicit conversions in [`state`].

pub mod equilibria;
pub mod error;
pub mod hill;
pub mod integrate;
pub mod r4bp;
pub mod regions;
pub mod stability;
pub mod state;

pub use crate::equilibria::{EquilibriumSet, PointLabel, SpectralData};
pub use crate::error::{Error, Result};
pub use crate::hill::MassRatio;
pub use crate::integrate::{Dynamics, Settings, Trajectory};
pub use crate::r4bp::{MassConfig, PrimaryTriangle, R4bp};
pub use crate::regions::{ContourSet, RegionGrid};
pub use crate::stability::{CharacteristicCoefficients, StabilityClass, StabilityReport};
pub use crate::state::{MomentumState, PlanarPoint, SpatialState};

/// Radius below which a potential evaluation counts as sitting on a
/// singularity and is rejected.
pub const SINGULARITY_GUARD: f64 = 1e-12;

#[cfg(test)]
pub(crate) mod testutil;
