//! Full equilateral four-body field: mass triples, primary geometry, motion,
//! and the rescaling that connects it to the limit problem.
//!
//! The three primaries occupy the vertices of a unit equilateral triangle,
//! rotate rigidly with unit angular velocity about their barycenter, and are
//! ordered m1 >= m2 >= m3 with total mass 1. In the corotating frame the
//! massless particle obeys
//!
//! ```text
//! x'' - 2 y' = W_x,   y'' + 2 x' = W_y,   z'' = W_z,
//! W = (x^2 + y^2) / 2 + sum_i m_i / r_i,
//! ```
//!
//! with r_i the distance to primary i. Recentering on the third primary,
//! scaling positions and velocities by m3^(1/3), and letting m3 -> 0 turns
//! this field into the limit problem of [`crate::hill`]; the rescaled
//! acceleration of [`pullback_acceleration`] approaches the limit field at
//! rate m3^(1/3).

use crate::error::{Error, Result};
use crate::hill::{self, MassRatio};
use crate::state::{PlanarPoint, SpatialState};
use crate::SINGULARITY_GUARD;

/// Allowed deviation of a mass triple's sum from 1 before normalization.
pub const MASS_SUM_TOL: f64 = 1e-12;

/// Largest third mass accepted by the rescaling helpers.
pub const PULLBACK_MAX_M3: f64 = 1e-2;

/// Normalized, ordered mass triple of the primaries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MassConfig {
    m1: f64,
    m2: f64,
    m3: f64,
}

impl MassConfig {
    /// Validates positivity, ordering m1 >= m2 >= m3, and a total within
    /// [`MASS_SUM_TOL`] of 1, then rescales the triple to sum exactly 1.
    pub fn new(m1: f64, m2: f64, m3: f64) -> Result<Self> {
        let invalid = |reason| Error::InvalidMasses { m1, m2, m3, reason };
        if !(m1.is_finite() && m2.is_finite() && m3.is_finite()) {
            return Err(invalid("non-finite mass"));
        }
        if m1 <= 0.0 || m2 <= 0.0 || m3 < 0.0 {
            return Err(invalid("masses must satisfy m1, m2 > 0 and m3 >= 0"));
        }
        if m1 < m2 || m2 < m3 {
            return Err(invalid("masses must be ordered m1 >= m2 >= m3"));
        }
        let sum = m1 + m2 + m3;
        if (sum - 1.0).abs() > MASS_SUM_TOL {
            return Err(invalid("masses must sum to 1"));
        }
        Ok(Self {
            m1: m1 / sum,
            m2: m2 / sum,
            m3: m3 / sum,
        })
    }

    /// Classical three-body configuration (1 - mu, mu, 0).
    pub fn r3bp(mu: MassRatio) -> Result<Self> {
        let mu = mu.value();
        if mu == 0.0 {
            return Err(Error::InvalidMasses {
                m1: 1.0,
                m2: 0.0,
                m3: 0.0,
                reason: "second primary must carry mass",
            });
        }
        Self::new(1.0 - mu, mu, 0.0)
    }

    /// Small-third-mass family (1 - mu - m3, mu, m3).
    ///
    /// The pair ordering m1 >= m2 is deliberately not enforced: near
    /// mu = 1/2 a positive m3 pushes m1 slightly below m2, yet the family
    /// stays admissible and is exactly the one the rescaling follows.
    pub fn with_third_mass(mu: MassRatio, m3: f64) -> Result<Self> {
        let mu = mu.value();
        let m1 = 1.0 - mu - m3;
        let invalid = |reason| Error::InvalidMasses {
            m1,
            m2: mu,
            m3,
            reason,
        };
        if mu == 0.0 {
            return Err(invalid("second primary must carry mass"));
        }
        if !m3.is_finite() || m3 <= 0.0 {
            return Err(invalid("third mass must be positive"));
        }
        if m3 > mu {
            return Err(invalid("third mass must not exceed the second"));
        }
        if m1 <= 0.0 {
            return Err(invalid("first mass must stay positive"));
        }
        Ok(Self { m1, m2: mu, m3 })
    }

    pub fn m1(&self) -> f64 {
        self.m1
    }

    pub fn m2(&self) -> f64 {
        self.m2
    }

    pub fn m3(&self) -> f64 {
        self.m3
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.m1, self.m2, self.m3]
    }
}

/// Rotating-frame positions of the three primaries.
///
/// By construction the triangle has unit sides, mass-weighted centroid at
/// the origin, the first primary on the negative x axis, and the third
/// primary in the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrimaryTriangle {
    pub p1: PlanarPoint,
    pub p2: PlanarPoint,
    pub p3: PlanarPoint,
}

impl PrimaryTriangle {
    pub fn as_array(&self) -> [PlanarPoint; 3] {
        [self.p1, self.p2, self.p3]
    }
}

/// Places the primaries for a mass triple.
///
/// At m3 = 0 the general coordinate expressions reduce to the classical
/// collinear pair at (-m2, 0) and (1 - m2, 0) plus the empty vertex above
/// them; that reduction is taken exactly, which also covers the equal-pair
/// corner m1 = m2 where the general denominator vanishes.
pub fn primary_positions(masses: &MassConfig) -> Result<PrimaryTriangle> {
    let [m1, m2, m3] = masses.as_array();
    if m3 == 0.0 {
        return Ok(PrimaryTriangle {
            p1: PlanarPoint::new(-m2, 0.0),
            p2: PlanarPoint::new(1.0 - m2, 0.0),
            p3: PlanarPoint::new(0.5 - m2, 0.5 * 3.0f64.sqrt()),
        });
    }
    let sigma = (m2 * m2 + m2 * m3 + m3 * m3).sqrt();
    let k = m2 * (m3 - m2) + m1 * (m2 + 2.0 * m3);
    if k <= 0.0 {
        return Err(Error::DegenerateMasses {
            m1,
            m2,
            m3,
            reason: "coordinate chart requires m2 (m3 - m2) + m1 (m2 + 2 m3) > 0",
        });
    }
    let sqrt3 = 3.0f64.sqrt();
    Ok(PrimaryTriangle {
        p1: PlanarPoint::new(-sigma, 0.0),
        p2: PlanarPoint::new(
            ((m2 - m3) * m3 + m1 * (2.0 * m2 + m3)) / (2.0 * sigma),
            -sqrt3 * m3 / (2.0 * sigma),
        ),
        p3: PlanarPoint::new(k / (2.0 * sigma), sqrt3 * m2 / (2.0 * sigma)),
    })
}

/// The full problem: a mass triple together with its primary triangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct R4bp {
    masses: MassConfig,
    triangle: PrimaryTriangle,
}

/// Distance to a massive primary and the offset vector pointing away from it.
type Pull = (f64, [f64; 3]);

impl R4bp {
    pub fn new(masses: MassConfig) -> Result<Self> {
        let triangle = primary_positions(&masses)?;
        Ok(Self { masses, triangle })
    }

    pub fn masses(&self) -> &MassConfig {
        &self.masses
    }

    pub fn triangle(&self) -> &PrimaryTriangle {
        &self.triangle
    }

    /// Offsets and guarded distances to the massive primaries; a primary of
    /// zero mass exerts no force and is skipped.
    fn pulls(&self, pos: [f64; 3]) -> Result<[Option<Pull>; 3]> {
        let [x, y, z] = pos;
        let masses = self.masses.as_array();
        let points = self.triangle.as_array();
        let mut out = [None, None, None];
        for i in 0..3 {
            if masses[i] == 0.0 {
                continue;
            }
            let d = [x - points[i].x, y - points[i].y, z];
            let r = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
            if r < SINGULARITY_GUARD {
                return Err(Error::SingularPosition {
                    index: i + 1,
                    x,
                    y,
                    z,
                });
            }
            out[i] = Some((r, d));
        }
        Ok(out)
    }

    /// Effective potential W = (x^2 + y^2) / 2 + sum m_i / r_i.
    pub fn omega(&self, pos: [f64; 3]) -> Result<f64> {
        let masses = self.masses.as_array();
        let mut w = 0.5 * (pos[0] * pos[0] + pos[1] * pos[1]);
        for (i, pull) in self.pulls(pos)?.iter().enumerate() {
            if let Some((r, _)) = pull {
                w += masses[i] / r;
            }
        }
        Ok(w)
    }

    /// Gradient of W.
    pub fn grad_omega(&self, pos: [f64; 3]) -> Result<[f64; 3]> {
        let masses = self.masses.as_array();
        let mut g = [pos[0], pos[1], 0.0];
        for (i, pull) in self.pulls(pos)?.iter().enumerate() {
            if let Some((r, d)) = pull {
                let f = masses[i] / (r * r * r);
                g[0] -= f * d[0];
                g[1] -= f * d[1];
                g[2] -= f * d[2];
            }
        }
        Ok(g)
    }

    /// In-plane gradient of W at z = 0.
    pub fn planar_grad(&self, p: PlanarPoint) -> Result<[f64; 2]> {
        let g = self.grad_omega(p.lift())?;
        Ok([g[0], g[1]])
    }

    /// In-plane Hessian of W at z = 0.
    pub fn planar_hessian(&self, p: PlanarPoint) -> Result<[[f64; 2]; 2]> {
        let masses = self.masses.as_array();
        let mut wxx = 1.0;
        let mut wyy = 1.0;
        let mut wxy = 0.0;
        for (i, pull) in self.pulls(p.lift())?.iter().enumerate() {
            if let Some((r, d)) = pull {
                let inv_r3 = masses[i] / (r * r * r);
                let inv_r5 = 3.0 * inv_r3 / (r * r);
                wxx += inv_r5 * d[0] * d[0] - inv_r3;
                wyy += inv_r5 * d[1] * d[1] - inv_r3;
                wxy += inv_r5 * d[0] * d[1];
            }
        }
        Ok([[wxx, wxy], [wxy, wyy]])
    }

    /// Velocity-form state derivative.
    pub fn eom(&self, s: &SpatialState) -> Result<[f64; 6]> {
        let g = self.grad_omega(s.position())?;
        Ok([
            s.vx,
            s.vy,
            s.vz,
            2.0 * s.vy + g[0],
            -2.0 * s.vx + g[1],
            g[2],
        ])
    }

    /// Jacobi integral C = 2 W - |v|^2.
    pub fn jacobi(&self, s: &SpatialState) -> Result<f64> {
        Ok(2.0 * self.omega(s.position())? - s.speed_squared())
    }
}

/// Acceleration of the full problem seen through the rescaling
/// q = p3 + m3^(1/3) q', v = m3^(1/3) v', reported in rescaled units.
///
/// As m3 -> 0 this approaches [`hill::acceleration`] at the same rescaled
/// state, with an O(m3^(1/3)) gap.
pub fn pullback_acceleration(scaled: &SpatialState, mu: MassRatio, m3: f64) -> Result<[f64; 3]> {
    if !m3.is_finite() || m3 <= 0.0 || m3 > PULLBACK_MAX_M3 {
        return Err(Error::InvalidArgument(format!(
            "third mass {m3} outside (0, {PULLBACK_MAX_M3}]"
        )));
    }
    let problem = R4bp::new(MassConfig::with_third_mass(mu, m3)?)?;
    let eps = m3.cbrt();
    let p3 = problem.triangle().p3;
    let full = SpatialState::new(
        p3.x + eps * scaled.x,
        p3.y + eps * scaled.y,
        eps * scaled.z,
        eps * scaled.vx,
        eps * scaled.vy,
        eps * scaled.vz,
    );
    let d = problem.eom(&full)?;
    Ok([d[3] / eps, d[4] / eps, d[5] / eps])
}

/// Euclidean gap between the rescaled full acceleration and the limit field
/// at one rescaled state.
pub fn pullback_deviation(scaled: &SpatialState, mu: MassRatio, m3: f64) -> Result<f64> {
    let full = pullback_acceleration(scaled, mu, m3)?;
    let lim = hill::acceleration(scaled, mu)?;
    let d = [full[0] - lim[0], full[1] - lim[1], full[2] - lim[2]];
    Ok((d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt())
}

/// Least-squares slope of ln y against ln x.
///
/// Wants at least two distinct positive abscissae and positive ordinates;
/// used to read off convergence orders from deviation tables.
pub fn log_log_slope(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::InvalidArgument(
            "slope fit needs at least two points".into(),
        ));
    }
    if points.iter().any(|&(x, y)| x <= 0.0 || y <= 0.0 || !x.is_finite() || !y.is_finite()) {
        return Err(Error::InvalidArgument(
            "slope fit needs positive finite coordinates".into(),
        ));
    }
    let n = points.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = points.iter().map(|&(x, y)| (x.ln(), y.ln())).unzip();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument(
            "slope fit needs distinct abscissae".into(),
        ));
    }
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{central_diff_grad, sample_state};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn mu(v: f64) -> MassRatio {
        MassRatio::new(v).unwrap()
    }

    #[test]
    fn vanishing_third_mass_recovers_the_collinear_pair() {
        let masses = MassConfig::r3bp(mu(0.00095)).unwrap();
        let t = primary_positions(&masses).unwrap();
        assert_eq!(t.p1, PlanarPoint::new(-0.00095, 0.0));
        assert_eq!(t.p2, PlanarPoint::new(1.0 - 0.00095, 0.0));
        assert_eq!(t.p3, PlanarPoint::new(0.5 - 0.00095, 0.5 * 3.0f64.sqrt()));
    }

    #[test]
    fn equal_pair_with_empty_vertex_is_symmetric() {
        let masses = MassConfig::new(0.5, 0.5, 0.0).unwrap();
        let t = primary_positions(&masses).unwrap();
        assert_eq!(t.p1, PlanarPoint::new(-0.5, 0.0));
        assert_eq!(t.p2, PlanarPoint::new(0.5, 0.0));
        assert_eq!(t.p3, PlanarPoint::new(0.0, 0.5 * 3.0f64.sqrt()));
    }

    #[test]
    fn equal_masses_sit_on_the_circumcircle() {
        let third = 1.0 / 3.0;
        let masses = MassConfig::new(third, third, third).unwrap();
        let t = primary_positions(&masses).unwrap();
        let radius = 1.0 / 3.0f64.sqrt();
        for p in t.as_array() {
            assert_abs_diff_eq!(p.norm(), radius, epsilon = 1e-15);
        }
    }

    #[test]
    fn mass_validation_rejects_bad_triples() {
        assert!(MassConfig::new(0.5, 0.3, 0.3).is_err());
        assert!(MassConfig::new(0.3, 0.5, 0.2).is_err());
        assert!(MassConfig::new(0.6, 0.25, 0.15 + 1e-9).is_err());
        assert!(MassConfig::new(0.7, 0.3, -1e-3).is_err());
        assert!(MassConfig::new(1.0, 0.0, 0.0).is_err());
        assert!(MassConfig::new(f64::NAN, 0.3, 0.2).is_err());
        assert!(MassConfig::new(0.6, 0.25, 0.15 + 5e-13).is_ok());
    }

    #[test]
    fn small_mass_family_tolerates_a_heavier_second_primary() {
        let masses = MassConfig::with_third_mass(mu(0.5), 1e-6).unwrap();
        assert!(masses.m1() < masses.m2());
        assert!(R4bp::new(masses).is_ok());
        assert!(MassConfig::with_third_mass(mu(0.3), 0.0).is_err());
        assert!(MassConfig::with_third_mass(mu(1e-9), 1e-3).is_err());
    }

    #[test]
    fn potential_at_the_origin_for_the_equal_pair() {
        let problem = R4bp::new(MassConfig::new(0.5, 0.5, 0.0).unwrap()).unwrap();
        assert_eq!(problem.omega([0.0, 0.0, 0.0]).unwrap(), 2.0);
    }

    #[test]
    fn evaluation_on_a_primary_is_rejected_with_its_index() {
        let third = 1.0 / 3.0;
        let problem = R4bp::new(MassConfig::new(third, third, third).unwrap()).unwrap();
        let p2 = problem.triangle().p2;
        assert!(matches!(
            problem.omega([p2.x, p2.y, 0.0]),
            Err(Error::SingularPosition { index: 2, .. })
        ));
    }

    #[test]
    fn massless_vertex_is_not_singular() {
        let problem = R4bp::new(MassConfig::new(0.5, 0.5, 0.0).unwrap()).unwrap();
        let p3 = problem.triangle().p3;
        assert!(problem.omega([p3.x, p3.y, 0.0]).is_ok());
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let problem = R4bp::new(MassConfig::new(0.5, 0.3, 0.2).unwrap()).unwrap();
        let mut checked = 0;
        while checked < 20 {
            let s = sample_state(&mut rng, 0.0, 2.0);
            let pos = s.position();
            if problem
                .pulls(pos)
                .unwrap()
                .iter()
                .any(|p| p.map(|(r, _)| r < 0.2).unwrap_or(false))
            {
                continue;
            }
            let g = problem.grad_omega(pos).unwrap();
            let fd = central_diff_grad(|p| problem.omega(p).unwrap(), pos, 1e-6);
            for k in 0..3 {
                assert_abs_diff_eq!(g[k], fd[k], epsilon = 1e-6 * (1.0 + g[k].abs()));
            }
            checked += 1;
        }
    }

    #[test]
    fn rest_states_accelerate_along_the_gradient() {
        let problem = R4bp::new(MassConfig::new(0.5, 0.3, 0.2).unwrap()).unwrap();
        let s = SpatialState::at_rest(0.8, 0.9);
        let d = problem.eom(&s).unwrap();
        let g = problem.grad_omega(s.position()).unwrap();
        assert_eq!([d[3], d[4], d[5]], g);
        assert_eq!([d[0], d[1], d[2]], [0.0, 0.0, 0.0]);
    }

    #[test]
    fn planar_states_stay_planar() {
        let problem = R4bp::new(MassConfig::new(0.6, 0.3, 0.1).unwrap()).unwrap();
        let d = problem
            .eom(&SpatialState::new(0.4, -0.9, 0.0, 0.3, 0.1, 0.0))
            .unwrap();
        assert_eq!(d[2], 0.0);
        assert_eq!(d[5], 0.0);
    }

    #[test]
    fn potential_is_even_in_z() {
        let problem = R4bp::new(MassConfig::new(0.6, 0.3, 0.1).unwrap()).unwrap();
        let a = problem.omega([0.3, -0.4, 0.7]).unwrap();
        let b = problem.omega([0.3, -0.4, -0.7]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rescaled_origin_sits_on_the_third_primary() {
        let s = SpatialState::at_rest(0.0, 0.0);
        assert!(matches!(
            pullback_acceleration(&s, mu(0.25), 1e-6),
            Err(Error::SingularPosition { index: 3, .. })
        ));
    }

    #[test]
    fn rescaled_acceleration_approaches_the_limit_field() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let m = mu(0.25);
        let mut states = Vec::new();
        for _ in 0..10 {
            states.push(sample_state(&mut rng, 0.3, 1.2));
        }
        let mut table = Vec::new();
        for exp in [3, 5, 7] {
            let m3 = 10.0f64.powi(-exp);
            let worst = states
                .iter()
                .map(|s| pullback_deviation(s, m, m3).unwrap())
                .fold(0.0, f64::max);
            table.push((m3, worst));
        }
        assert!(table[0].1 > table[1].1 && table[1].1 > table[2].1);
        let slope = log_log_slope(&table).unwrap();
        assert!((0.28..=0.40).contains(&slope), "slope {slope}");
    }

    #[test]
    fn pullback_rejects_masses_outside_its_window() {
        let s = SpatialState::at_rest(1.0, 0.0);
        assert!(pullback_acceleration(&s, mu(0.25), 0.0).is_err());
        assert!(pullback_acceleration(&s, mu(0.25), 0.02).is_err());
        assert!(pullback_acceleration(&s, mu(0.25), -1e-6).is_err());
    }

    #[test]
    fn slope_fit_recovers_exact_power_laws() {
        let points: Vec<(f64, f64)> = [1e-3f64, 1e-5, 1e-7, 1e-9]
            .iter()
            .map(|&x| (x, 3.7 * x.cbrt()))
            .collect();
        let slope = log_log_slope(&points).unwrap();
        assert_abs_diff_eq!(slope, 1.0 / 3.0, epsilon = 1e-12);
        assert!(log_log_slope(&points[..1]).is_err());
        assert!(log_log_slope(&[(1.0, 1.0), (1.0, 2.0)]).is_err());
        assert!(log_log_slope(&[(1.0, 1.0), (2.0, -1.0)]).is_err());
    }

    proptest! {
        #[test]
        fn triangles_have_unit_sides_and_centered_mass(
            a in 0.34..3.0f64, b in 0.33..1.0f64, c in 0.0..1.0f64,
        ) {
            // Build an ordered triple from three positive knobs.
            let m1 = a;
            let m2 = b * m1;
            let m3 = c * m2;
            let sum = m1 + m2 + m3;
            let masses = MassConfig::new(m1 / sum, m2 / sum, m3 / sum);
            prop_assume!(masses.is_ok());
            let masses = masses.unwrap();
            let t = primary_positions(&masses).unwrap();
            let [p1, p2, p3] = t.as_array();
            prop_assert!((p1.dist(p2) - 1.0).abs() < 1e-12);
            prop_assert!((p2.dist(p3) - 1.0).abs() < 1e-12);
            prop_assert!((p3.dist(p1) - 1.0).abs() < 1e-12);
            let [m1, m2, m3] = masses.as_array();
            let cx = m1 * p1.x + m2 * p2.x + m3 * p3.x;
            let cy = m1 * p1.y + m2 * p2.y + m3 * p3.y;
            prop_assert!(cx.abs() < 1e-12);
            prop_assert!(cy.abs() < 1e-12);
            prop_assert_eq!(p1.y, 0.0);
            prop_assert!(p3.y > 0.0);
        }
    }
}
