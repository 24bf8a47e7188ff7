//! Helpers shared by the unit tests.

use crate::state::{PlanarPoint, SpatialState};
use rand::Rng;

/// Central-difference gradient of a scalar field.
pub fn central_diff_grad(f: impl Fn([f64; 3]) -> f64, pos: [f64; 3], h: f64) -> [f64; 3] {
    let mut g = [0.0; 3];
    for k in 0..3 {
        let mut hi = pos;
        let mut lo = pos;
        hi[k] += h;
        lo[k] -= h;
        g[k] = (f(hi) - f(lo)) / (2.0 * h);
    }
    g
}

/// Central-difference Hessian of a scalar field.
pub fn central_diff_hess(f: impl Fn([f64; 3]) -> f64, pos: [f64; 3], h: f64) -> [[f64; 3]; 3] {
    let mut m = [[0.0; 3]; 3];
    let center = f(pos);
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                let mut hi = pos;
                let mut lo = pos;
                hi[i] += h;
                lo[i] -= h;
                m[i][i] = (f(hi) - 2.0 * center + f(lo)) / (h * h);
            } else {
                let mut pp = pos;
                let mut pm = pos;
                let mut mp = pos;
                let mut mm = pos;
                pp[i] += h;
                pp[j] += h;
                pm[i] += h;
                pm[j] -= h;
                mp[i] -= h;
                mp[j] += h;
                mm[i] -= h;
                mm[j] -= h;
                m[i][j] = (f(pp) - f(pm) - f(mp) + f(mm)) / (4.0 * h * h);
            }
        }
    }
    m
}

/// Random planar point with norm in [r_min, r_max].
pub fn sample_planar(rng: &mut impl Rng, r_min: f64, r_max: f64) -> PlanarPoint {
    loop {
        let p = PlanarPoint::new(
            rng.random_range(-r_max..r_max),
            rng.random_range(-r_max..r_max),
        );
        let n = p.norm();
        if n >= r_min && n <= r_max {
            return p;
        }
    }
}

/// Random spatial state with position norm in [r_min, r_max] and unit-box
/// velocities.
pub fn sample_state(rng: &mut impl Rng, r_min: f64, r_max: f64) -> SpatialState {
    loop {
        let s = SpatialState::new(
            rng.random_range(-r_max..r_max),
            rng.random_range(-r_max..r_max),
            rng.random_range(-r_max..r_max),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        let r = (s.x * s.x + s.y * s.y + s.z * s.z).sqrt();
        if r >= r_min && r <= r_max {
            return s;
        }
    }
}
