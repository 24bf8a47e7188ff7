//! Rotating-frame state representations and conversions.
//!
//! The synodic frame rotates with unit angular velocity, so rotating-frame
//! velocities and canonical momenta differ by the frame term:
//!
//! ```text
//! vx = px + y,    vy = py - x,    vz = pz.
//! ```
//!
//! All dynamics in this crate speak [`SpatialState`] (velocities);
//! [`MomentumState`] exists for Hamiltonian bookkeeping and round trips
//! through the conversions below are exact up to floating-point addition.

/// Position and rotating-frame velocity of the massless particle.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SpatialState {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub vx: f64,
    pub vy: f64,
    pub vz: f64,
}

impl SpatialState {
    pub fn new(x: f64, y: f64, z: f64, vx: f64, vy: f64, vz: f64) -> Self {
        Self { x, y, z, vx, vy, vz }
    }

    /// State at rest at a planar position.
    pub fn at_rest(x: f64, y: f64) -> Self {
        Self::new(x, y, 0.0, 0.0, 0.0, 0.0)
    }

    pub fn position(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn velocity(&self) -> [f64; 3] {
        [self.vx, self.vy, self.vz]
    }

    pub fn speed_squared(&self) -> f64 {
        self.vx * self.vx + self.vy * self.vy + self.vz * self.vz
    }

    pub fn from_array(a: [f64; 6]) -> Self {
        Self::new(a[0], a[1], a[2], a[3], a[4], a[5])
    }

    pub fn to_array(self) -> [f64; 6] {
        [self.x, self.y, self.z, self.vx, self.vy, self.vz]
    }

    /// Replaces velocities by canonical momenta.
    pub fn to_momenta(self) -> MomentumState {
        MomentumState {
            x: self.x,
            y: self.y,
            z: self.z,
            px: self.vx - self.y,
            py: self.vy + self.x,
            pz: self.vz,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }
}

/// Position and canonical momenta of the massless particle.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MomentumState {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub px: f64,
    pub py: f64,
    pub pz: f64,
}

impl MomentumState {
    pub fn new(x: f64, y: f64, z: f64, px: f64, py: f64, pz: f64) -> Self {
        Self { x, y, z, px, py, pz }
    }

    /// Replaces momenta by rotating-frame velocities.
    pub fn to_velocities(self) -> SpatialState {
        SpatialState {
            x: self.x,
            y: self.y,
            z: self.z,
            vx: self.px + self.y,
            vy: self.py - self.x,
            vz: self.pz,
        }
    }
}

/// A point of the invariant plane z = 0.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PlanarPoint {
    pub x: f64,
    pub y: f64,
}

impl PlanarPoint {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(&self, other: PlanarPoint) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    /// Embeds the point into space as a position vector.
    pub fn lift(&self) -> [f64; 3] {
        [self.x, self.y, 0.0]
    }
}

impl std::ops::Neg for PlanarPoint {
    type Output = PlanarPoint;

    fn neg(self) -> PlanarPoint {
        PlanarPoint::new(-self.x, -self.y)
    }
}
