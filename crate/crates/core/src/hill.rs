//! Hill-type limit problem near the vanishing primary.
//!
//! After recentering on the third primary and rescaling positions and
//! velocities by m3^(1/3), the limit m3 -> 0 leaves a two-parameter-free
//! field governed only by the mass ratio mu of the surviving pair. Its
//! effective potential is
//!
//! ```text
//! W(x, y, z) = (3/8) x^2 + c(mu) x y + (9/8) y^2 - z^2 / 2 + 1 / r,
//! c(mu) = (3 sqrt(3) / 4) (1 - 2 mu),        r = |(x, y, z)|,
//! ```
//!
//! and the equations of motion in the rotating frame read
//!
//! ```text
//! x'' - 2 y' = W_x,    y'' + 2 x' = W_y,    z'' = W_z.
//! ```
//!
//! The Hamiltonian in canonical momenta,
//!
//! ```text
//! H = |p|^2 / 2 + y px - x py + x^2 / 8 - c(mu) x y - 5 y^2 / 8
//!     + z^2 / 2 - 1 / r,
//! ```
//!
//! satisfies H = |v|^2 / 2 - W, so the Jacobi-type integral C = 2 W - |v|^2
//! equals -2 H.

use crate::error::{Error, Result};
use crate::state::{MomentumState, PlanarPoint, SpatialState};
use crate::SINGULARITY_GUARD;

/// Mass of the second-heaviest primary; the pair ordering m1 >= m2 caps it
/// at 1/2.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct MassRatio(f64);

impl MassRatio {
    pub fn new(mu: f64) -> Result<Self> {
        if !mu.is_finite() || !(0.0..=0.5).contains(&mu) {
            return Err(Error::MassRatioRange { mu });
        }
        Ok(Self(mu))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Coefficient of the x y cross term, (3 sqrt(3) / 4)(1 - 2 mu).
///
/// Vanishes at mu = 1/2, where the quadratic part diagonalizes.
pub fn cross_coefficient(mu: MassRatio) -> f64 {
    0.75 * 3.0f64.sqrt() * (1.0 - 2.0 * mu.value())
}

fn guarded_radius(pos: [f64; 3]) -> Result<f64> {
    let r = (pos[0] * pos[0] + pos[1] * pos[1] + pos[2] * pos[2]).sqrt();
    if r < SINGULARITY_GUARD {
        return Err(Error::SingularPosition {
            index: 0,
            x: pos[0],
            y: pos[1],
            z: pos[2],
        });
    }
    Ok(r)
}

/// Effective potential W of the limit problem.
pub fn omega(pos: [f64; 3], mu: MassRatio) -> Result<f64> {
    let [x, y, z] = pos;
    let r = guarded_radius(pos)?;
    Ok(0.375 * x * x + cross_coefficient(mu) * x * y + 1.125 * y * y - 0.5 * z * z + 1.0 / r)
}

/// Effective potential restricted to the invariant plane z = 0.
pub fn omega_planar(p: PlanarPoint, mu: MassRatio) -> Result<f64> {
    omega(p.lift(), mu)
}

/// Gradient of W.
pub fn grad_omega(pos: [f64; 3], mu: MassRatio) -> Result<[f64; 3]> {
    let [x, y, z] = pos;
    let r = guarded_radius(pos)?;
    let inv_r3 = 1.0 / (r * r * r);
    let c = cross_coefficient(mu);
    Ok([
        0.75 * x + c * y - x * inv_r3,
        c * x + 2.25 * y - y * inv_r3,
        -z - z * inv_r3,
    ])
}

/// In-plane gradient of W at z = 0.
pub fn grad_omega_planar(p: PlanarPoint, mu: MassRatio) -> Result<[f64; 2]> {
    let g = grad_omega(p.lift(), mu)?;
    Ok([g[0], g[1]])
}

/// Hessian of W.
pub fn hess_omega(pos: [f64; 3], mu: MassRatio) -> Result<[[f64; 3]; 3]> {
    let [x, y, z] = pos;
    let r = guarded_radius(pos)?;
    let inv_r3 = 1.0 / (r * r * r);
    let inv_r5 = inv_r3 / (r * r);
    let c = cross_coefficient(mu);
    let wxx = 0.75 + 3.0 * x * x * inv_r5 - inv_r3;
    let wyy = 2.25 + 3.0 * y * y * inv_r5 - inv_r3;
    let wzz = -1.0 + 3.0 * z * z * inv_r5 - inv_r3;
    let wxy = c + 3.0 * x * y * inv_r5;
    let wxz = 3.0 * x * z * inv_r5;
    let wyz = 3.0 * y * z * inv_r5;
    Ok([[wxx, wxy, wxz], [wxy, wyy, wyz], [wxz, wyz, wzz]])
}

/// In-plane Hessian of W at z = 0.
pub fn hess_omega_planar(p: PlanarPoint, mu: MassRatio) -> Result<[[f64; 2]; 2]> {
    let h = hess_omega(p.lift(), mu)?;
    Ok([[h[0][0], h[0][1]], [h[1][0], h[1][1]]])
}

/// Hamiltonian of the limit problem in canonical momenta.
pub fn hamiltonian(s: &MomentumState, mu: MassRatio) -> Result<f64> {
    let r = guarded_radius([s.x, s.y, s.z])?;
    let kinetic = 0.5 * (s.px * s.px + s.py * s.py + s.pz * s.pz);
    let coriolis = s.y * s.px - s.x * s.py;
    let c = cross_coefficient(mu);
    Ok(kinetic + coriolis + 0.125 * s.x * s.x - c * s.x * s.y - 0.625 * s.y * s.y
        + 0.5 * s.z * s.z
        - 1.0 / r)
}

/// Velocity-form state derivative of the limit problem.
pub fn eom(s: &SpatialState, mu: MassRatio) -> Result<[f64; 6]> {
    let g = grad_omega(s.position(), mu)?;
    Ok([
        s.vx,
        s.vy,
        s.vz,
        2.0 * s.vy + g[0],
        -2.0 * s.vx + g[1],
        g[2],
    ])
}

/// Acceleration components of [`eom`].
pub fn acceleration(s: &SpatialState, mu: MassRatio) -> Result<[f64; 3]> {
    let d = eom(s, mu)?;
    Ok([d[3], d[4], d[5]])
}

/// Jacobi-type integral C = 2 W - |v|^2.
pub fn jacobi(s: &SpatialState, mu: MassRatio) -> Result<f64> {
    Ok(2.0 * omega(s.position(), mu)? - s.speed_squared())
}
