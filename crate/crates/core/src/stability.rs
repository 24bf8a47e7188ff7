//! Linear stability of the libration points.
//!
//! The in-plane variational equations at an equilibrium have the
//! characteristic polynomial
//!
//! ```text
//! p(lambda) = lambda^4 + A lambda^2 + B,
//! A = 4 - W_xx - W_yy,    B = W_xx W_yy - W_xy^2,    D = A^2 - 4 B,
//! ```
//!
//! whose roots +-(1/sqrt(2)) sqrt(-A +- sqrt(D)) fall into four sign-driven
//! classes: two imaginary pairs (A, B, D > 0), a real-plus-imaginary pair
//! (B < 0), a complex quadruple (D < 0), and the degenerate double pair at
//! D = 0 where the transition happens. Along the soft pair L3, L4 the
//! discriminant crosses zero at a single critical mass ratio mu0, located
//! here by bisection. The out-of-plane motion decouples with frequency
//! sqrt(1 + 1/r^3).

use crate::equilibria;
use crate::error::{Error, Result};
use crate::hill::{self, MassRatio};
use crate::state::PlanarPoint;
use num_complex::Complex64;

/// |D| below which the spectrum counts as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// Gradient norm above which a point is rejected as a non-equilibrium.
pub const EQUILIBRIUM_TOL: f64 = 1e-8;

/// Grid size of the sign scan that brackets the critical mass.
const CRITICAL_SCAN: usize = 512;

/// Coefficients of the in-plane characteristic polynomial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicCoefficients {
    pub a: f64,
    pub b: f64,
    pub d: f64,
}

/// Qualitative linear type of an equilibrium.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StabilityClass {
    /// Two imaginary pairs; linearly stable.
    CenterCenter,
    /// One real pair, one imaginary pair.
    SaddleCenter,
    /// Complex quadruple +-alpha +- i omega with alpha > 0.
    ComplexSaddle,
    /// Double imaginary pair at the D = 0 transition.
    DegeneratePair,
}

impl StabilityClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            StabilityClass::CenterCenter => "center-center",
            StabilityClass::SaddleCenter => "saddle-center",
            StabilityClass::ComplexSaddle => "complex-saddle",
            StabilityClass::DegeneratePair => "degenerate-pair",
        }
    }
}

impl std::fmt::Display for StabilityClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Full linear-stability record at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityReport {
    pub point: PlanarPoint,
    pub coefficients: CharacteristicCoefficients,
    pub roots: [Complex64; 4],
    pub class: StabilityClass,
    pub grad_norm: f64,
}

/// In-plane variational matrix at a planar point.
pub fn linearization(point: PlanarPoint, mu: MassRatio) -> Result<[[f64; 4]; 4]> {
    let h = hill::hess_omega_planar(point, mu)?;
    Ok([
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [h[0][0], h[0][1], 0.0, 2.0],
        [h[1][0], h[1][1], -2.0, 0.0],
    ])
}

/// Characteristic coefficients A, B and discriminant D = A^2 - 4B.
pub fn characteristic_coefficients(
    point: PlanarPoint,
    mu: MassRatio,
) -> Result<CharacteristicCoefficients> {
    let h = hill::hess_omega_planar(point, mu)?;
    let a = 4.0 - h[0][0] - h[1][1];
    let b = h[0][0] * h[1][1] - h[0][1] * h[1][0];
    Ok(CharacteristicCoefficients {
        a,
        b,
        d: a * a - 4.0 * b,
    })
}

/// Closed-form roots of lambda^4 + A lambda^2 + B, sorted by (real,
/// imaginary) part.
pub fn quartic_roots(coeffs: &CharacteristicCoefficients) -> [Complex64; 4] {
    let sqrt_d = Complex64::new(coeffs.d, 0.0).sqrt();
    let half = |sign: f64| (Complex64::new(-coeffs.a, 0.0) + sign * sqrt_d) * 0.5;
    let r_plus = half(1.0).sqrt();
    let r_minus = half(-1.0).sqrt();
    let mut roots = [r_plus, -r_plus, r_minus, -r_minus];
    roots.sort_by(|p, q| {
        (p.re, p.im)
            .partial_cmp(&(q.re, q.im))
            .expect("finite roots")
    });
    roots
}

/// Classifies the linear type of an equilibrium from the signs of (A, B, D).
pub fn classify(point: PlanarPoint, mu: MassRatio) -> Result<StabilityReport> {
    let g = hill::grad_omega_planar(point, mu)?;
    let grad_norm = g[0].hypot(g[1]);
    if grad_norm >= EQUILIBRIUM_TOL {
        return Err(Error::NotAnEquilibrium { grad_norm });
    }
    let coefficients = characteristic_coefficients(point, mu)?;
    let CharacteristicCoefficients { a, b, d } = coefficients;
    let class = if b < 0.0 {
        StabilityClass::SaddleCenter
    } else if d.abs() <= DEGENERACY_TOL && a > 0.0 && b > 0.0 {
        StabilityClass::DegeneratePair
    } else if d < 0.0 {
        StabilityClass::ComplexSaddle
    } else if a > 0.0 && b > 0.0 && d > 0.0 {
        StabilityClass::CenterCenter
    } else {
        return Err(Error::UnclassifiableSpectrum { a, b, d });
    };
    Ok(StabilityReport {
        point,
        coefficients,
        roots: quartic_roots(&coefficients),
        class,
        grad_norm,
    })
}

/// Critical mass ratio and the bisection record that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalMass {
    pub mu0: f64,
    pub bracket: (f64, f64),
    pub iterations: usize,
}

/// Discriminant along the soft pair, g(mu) = D(L3(mu); mu).
fn soft_discriminant(mu: f64) -> Result<f64> {
    let mu = MassRatio::new(mu)?;
    let l3 = equilibria::libration_point(mu, equilibria::PointLabel::L3)?;
    Ok(characteristic_coefficients(l3, mu)?.d)
}

/// Locates the single zero of D(L3(mu); mu) on (0, 1/2] by sign scan plus
/// bisection down to a bracket of width `tol`.
pub fn critical_mass(tol: f64) -> Result<CriticalMass> {
    if !tol.is_finite() || tol < 1e-14 {
        return Err(Error::InvalidArgument(format!(
            "bracket tolerance {tol} must be at least 1e-14"
        )));
    }
    let sample = |i: usize| 0.5 * (i as f64 + 1.0) / (CRITICAL_SCAN as f64);
    let mut brackets = Vec::new();
    let mut prev_mu = sample(0);
    let mut prev_g = soft_discriminant(prev_mu)?;
    for i in 1..CRITICAL_SCAN {
        let next_mu = sample(i);
        let next_g = soft_discriminant(next_mu)?;
        if prev_g * next_g < 0.0 {
            brackets.push((prev_mu, prev_g, next_mu));
        }
        prev_mu = next_mu;
        prev_g = next_g;
    }
    if brackets.len() != 1 {
        return Err(Error::SignChangeCount {
            found: brackets.len(),
        });
    }
    let (mut lo, mut g_lo, mut hi) = brackets[0];
    let mut iterations = 0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let g_mid = soft_discriminant(mid)?;
        if g_lo * g_mid <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
            g_lo = g_mid;
        }
        iterations += 1;
    }
    Ok(CriticalMass {
        mu0: 0.5 * (lo + hi),
        bracket: (lo, hi),
        iterations,
    })
}

/// Out-of-plane oscillation frequency sqrt(1 + 1/r^3) at a planar point.
pub fn vertical_frequency(point: PlanarPoint) -> Result<f64> {
    let h = hill::hess_omega([point.x, point.y, 0.0], MassRatio::new(0.0).expect("in range"))?;
    // W_zz = -(1 + 1/r^3) independently of mu; the z-equation is
    // z'' = W_zz z.
    Ok((-h[2][2]).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibria::{
        equilibrium_points, libration_point, spectral_decomposition, PointLabel,
    };
    use approx::assert_abs_diff_eq;
    use nalgebra::Matrix4;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn mu(v: f64) -> MassRatio {
        MassRatio::new(v).unwrap()
    }

    /// Independent algebraic forms of the coefficients in terms of
    /// d = sqrt(1 - 3 mu + 3 mu^2): the Hessian at L1 is
    /// 3 lambda2 v2 v2^T - 3 d v1 v1^T and at L3 it is
    /// 3 lambda1 v1 v1^T + 3 d v2 v2^T.
    fn closed_form_coefficients(v: f64, label: PointLabel) -> (f64, f64) {
        let d = (1.0 - 3.0 * v + 3.0 * v * v).sqrt();
        match label {
            PointLabel::L1 | PointLabel::L2 => {
                (-(1.0 + 3.0 * d) / 2.0, -13.5 * d * (1.0 + d))
            }
            PointLabel::L3 | PointLabel::L4 => {
                ((3.0 * d - 1.0) / 2.0, 13.5 * d * (1.0 - d))
            }
        }
    }

    /// Critical mass from the closed form: D(L3) = 0 reduces to
    /// 225 d^2 - 222 d + 1 = 0, whose root in [1/2, 1] is
    /// d0 = (37 + 8 sqrt(21)) / 75; inverting d(mu) gives mu0.
    fn closed_form_critical_mass() -> f64 {
        let d0 = (37.0 + 8.0 * 21.0f64.sqrt()) / 75.0;
        0.5 * (1.0 - (1.0 - 4.0 / 3.0 * (1.0 - d0 * d0)).sqrt())
    }

    #[test]
    fn linearization_is_traceless_and_matches_the_hessian() {
        let m = mu(0.25);
        let l1 = libration_point(m, PointLabel::L1).unwrap();
        let a = linearization(l1, m).unwrap();
        let h = hill::hess_omega_planar(l1, m).unwrap();
        assert_eq!(a[0][0] + a[1][1] + a[2][2] + a[3][3], 0.0);
        assert_eq!(a[2][0], h[0][0]);
        assert_eq!(a[2][1], h[0][1]);
        assert_eq!(a[3][0], h[1][0]);
        assert_eq!(a[3][1], h[1][1]);
        assert_eq!(a[2][3], 2.0);
        assert_eq!(a[3][2], -2.0);
    }

    #[test]
    fn characteristic_polynomial_matches_faddeev_leverrier() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..25 {
            let v = rng.random_range(0.01..=0.5);
            let m = mu(v);
            for label in [PointLabel::L1, PointLabel::L3] {
                let p = libration_point(m, label).unwrap();
                let coeffs = characteristic_coefficients(p, m).unwrap();
                let rows = linearization(p, m).unwrap();
                let a = Matrix4::from_fn(|i, j| rows[i][j]);
                // Faddeev-LeVerrier for lambda^4 + p3 lambda^3 + p2 lambda^2
                // + p1 lambda + p0.
                let id = Matrix4::identity();
                let n1 = a;
                let p3 = -n1.trace();
                let n2 = a * (n1 + p3 * id);
                let p2 = -n2.trace() / 2.0;
                let n3 = a * (n2 + p2 * id);
                let p1 = -n3.trace() / 3.0;
                let n4 = a * (n3 + p1 * id);
                let p0 = -n4.trace() / 4.0;
                assert_abs_diff_eq!(p3, 0.0, epsilon = 1e-12);
                assert_abs_diff_eq!(p1, 0.0, epsilon = 1e-12);
                assert_abs_diff_eq!(p2, coeffs.a, epsilon = 1e-12 * (1.0 + coeffs.a.abs()));
                assert_abs_diff_eq!(p0, coeffs.b, epsilon = 1e-12 * (1.0 + coeffs.b.abs()));
                assert_eq!(coeffs.d, coeffs.a * coeffs.a - 4.0 * coeffs.b);
            }
        }
    }

    #[test]
    fn coefficients_match_their_spectral_closed_forms() {
        for k in 0..=100 {
            let v = 0.005 + (0.5 - 0.005) * (k as f64) / 100.0;
            let m = mu(v);
            for label in [PointLabel::L1, PointLabel::L3] {
                let p = libration_point(m, label).unwrap();
                let c = characteristic_coefficients(p, m).unwrap();
                let (a_exp, b_exp) = closed_form_coefficients(v, label);
                assert_abs_diff_eq!(c.a, a_exp, epsilon = 1e-12 * (1.0 + a_exp.abs()));
                assert_abs_diff_eq!(c.b, b_exp, epsilon = 1e-12 * (1.0 + b_exp.abs()));
            }
        }
    }

    #[test]
    fn frozen_coefficients_at_equal_pair() {
        let m = mu(0.5);
        let l1 = libration_point(m, PointLabel::L1).unwrap();
        let c1 = characteristic_coefficients(l1, m).unwrap();
        assert_abs_diff_eq!(c1.a, -1.25, epsilon = 1e-13);
        assert_abs_diff_eq!(c1.b, -10.125, epsilon = 1e-12);
        assert_abs_diff_eq!(c1.d, 42.0625, epsilon = 1e-11);
        let l3 = libration_point(m, PointLabel::L3).unwrap();
        let c3 = characteristic_coefficients(l3, m).unwrap();
        assert_abs_diff_eq!(c3.a, 0.25, epsilon = 1e-13);
        assert_abs_diff_eq!(c3.b, 3.375, epsilon = 1e-12);
        assert_abs_diff_eq!(c3.d, -13.4375, epsilon = 1e-11);
    }

    #[test]
    fn quartic_roots_on_split_cases() {
        // (lambda^2 + 1)^2: double +-i.
        let roots = quartic_roots(&CharacteristicCoefficients {
            a: 2.0,
            b: 1.0,
            d: 0.0,
        });
        let expected = [(0.0, -1.0), (0.0, -1.0), (0.0, 1.0), (0.0, 1.0)];
        for (r, (re, im)) in roots.iter().zip(expected) {
            assert_abs_diff_eq!(r.re, re, epsilon = 1e-12);
            assert_abs_diff_eq!(r.im, im, epsilon = 1e-12);
        }
        // lambda^4 = 1: +-1, +-i.
        let roots = quartic_roots(&CharacteristicCoefficients {
            a: 0.0,
            b: -1.0,
            d: 4.0,
        });
        let expected = [(-1.0, 0.0), (0.0, -1.0), (0.0, 1.0), (1.0, 0.0)];
        for (r, (re, im)) in roots.iter().zip(expected) {
            assert_abs_diff_eq!(r.re, re, epsilon = 1e-12);
            assert_abs_diff_eq!(r.im, im, epsilon = 1e-12);
        }
    }

    #[test]
    fn roots_are_closed_under_negation_and_conjugation() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..200 {
            let coeffs = CharacteristicCoefficients {
                a: rng.random_range(-5.0..5.0),
                b: rng.random_range(-5.0..5.0),
                d: 0.0,
            };
            let coeffs = CharacteristicCoefficients {
                d: coeffs.a * coeffs.a - 4.0 * coeffs.b,
                ..coeffs
            };
            let roots = quartic_roots(&coeffs);
            for r in roots {
                let has = |target: Complex64| {
                    roots.iter().any(|s| (s - target).norm() < 1e-12 * (1.0 + target.norm()))
                };
                assert!(has(-r));
                assert!(has(r.conj()));
                let value = r.powi(4) + coeffs.a * r.powi(2) + coeffs.b;
                assert!(value.norm() < 1e-10 * (1.0 + coeffs.b.abs() + coeffs.a.abs()));
            }
        }
    }

    #[test]
    fn roots_match_an_eigensolver_at_random_equilibria() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..20 {
            let v = rng.random_range(0.01..=0.5);
            let m = mu(v);
            for label in [PointLabel::L1, PointLabel::L3] {
                let p = libration_point(m, label).unwrap();
                let rows = linearization(p, m).unwrap();
                let mat = Matrix4::from_fn(|i, j| rows[i][j]);
                let mut eig: Vec<Complex64> = mat.complex_eigenvalues().iter().copied().collect();
                eig.sort_by(|p, q| (p.re, p.im).partial_cmp(&(q.re, q.im)).unwrap());
                let mine = quartic_roots(&characteristic_coefficients(p, m).unwrap());
                for (a, b) in mine.iter().zip(eig) {
                    assert!((a - b).norm() < 1e-10, "root gap at mu = {v}");
                }
            }
        }
    }

    #[test]
    fn stiff_pair_is_a_saddle_center_throughout() {
        for k in 0..=1000 {
            let v = 0.5 * (k as f64) / 1000.0;
            let m = mu(v);
            let l1 = libration_point(m, PointLabel::L1).unwrap();
            let report = classify(l1, m).unwrap();
            assert!(report.coefficients.b < 0.0, "B >= 0 at mu = {v}");
            assert_eq!(report.class, StabilityClass::SaddleCenter);
        }
    }

    #[test]
    fn antipodal_points_share_their_classification() {
        for v in [0.005, 0.1, 0.25, 0.5] {
            let m = mu(v);
            let set = equilibrium_points(m).unwrap();
            let r1 = classify(set.l1, m).unwrap();
            let r2 = classify(set.l2, m).unwrap();
            assert_eq!(r1.class, r2.class);
            assert_eq!(r1.coefficients, r2.coefficients);
            let r3 = classify(set.l3, m).unwrap();
            let r4 = classify(set.l4, m).unwrap();
            assert_eq!(r3.class, r4.class);
            assert_eq!(r3.coefficients, r4.coefficients);
        }
    }

    #[test]
    fn soft_pair_transitions_at_the_critical_mass() {
        let found = critical_mass(1e-12).unwrap();
        let expected = closed_form_critical_mass();
        assert_abs_diff_eq!(found.mu0, expected, epsilon = 1e-10);
        assert!(found.bracket.1 - found.bracket.0 <= 1e-12);
        assert!(found.bracket.0 <= found.mu0 && found.mu0 <= found.bracket.1);
        assert!(found.mu0 > 0.0 && found.mu0 < 0.5);

        let below = mu(found.mu0 - 0.01);
        let above = mu(found.mu0 + 0.01);
        let l3 = |m: MassRatio| libration_point(m, PointLabel::L3).unwrap();
        assert_eq!(
            classify(l3(below), below).unwrap().class,
            StabilityClass::CenterCenter
        );
        assert_eq!(
            classify(l3(above), above).unwrap().class,
            StabilityClass::ComplexSaddle
        );
        let at = mu(found.mu0);
        assert_eq!(
            classify(l3(at), at).unwrap().class,
            StabilityClass::DegeneratePair
        );

        let d_below = soft_discriminant(found.mu0 - 1e-11).unwrap();
        let d_above = soft_discriminant(found.mu0 + 1e-11).unwrap();
        assert!(d_below * d_above < 0.0);
    }

    #[test]
    fn soft_pair_is_complex_saddle_at_equal_pair() {
        let m = mu(0.5);
        let l3 = libration_point(m, PointLabel::L3).unwrap();
        let report = classify(l3, m).unwrap();
        assert_eq!(report.class, StabilityClass::ComplexSaddle);
        // Complex quadruple: all four roots keep nonzero real and
        // imaginary parts.
        for r in report.roots {
            assert!(r.re.abs() > 0.1 && r.im.abs() > 0.1);
        }
    }

    #[test]
    fn halving_the_tolerance_adds_one_bisection_level() {
        let coarse = critical_mass(1e-10).unwrap();
        let fine = critical_mass(5e-11).unwrap();
        assert_eq!(fine.iterations, coarse.iterations + 1);
        let wc = coarse.bracket.1 - coarse.bracket.0;
        let wf = fine.bracket.1 - fine.bracket.0;
        assert!(wf <= 0.51 * wc && wf >= 0.49 * wc);
    }

    #[test]
    fn critical_mass_validates_its_tolerance() {
        assert!(critical_mass(1e-15).is_err());
        assert!(critical_mass(f64::NAN).is_err());
    }

    #[test]
    fn non_equilibria_are_rejected_with_their_residual() {
        let err = classify(PlanarPoint::new(0.5, 0.5), mu(0.25)).unwrap_err();
        match err {
            Error::NotAnEquilibrium { grad_norm } => assert!(grad_norm > EQUILIBRIUM_TOL),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn coefficient_curves_have_no_jumps() {
        let mut prev: Option<(CharacteristicCoefficients, CharacteristicCoefficients)> = None;
        for k in 0..1000 {
            let v = 0.001 + (0.5 - 0.001) * (k as f64) / 999.0;
            let m = mu(v);
            let c1 = characteristic_coefficients(
                libration_point(m, PointLabel::L1).unwrap(),
                m,
            )
            .unwrap();
            let c3 = characteristic_coefficients(
                libration_point(m, PointLabel::L3).unwrap(),
                m,
            )
            .unwrap();
            if let Some((p1, p3)) = prev {
                // Bound consecutive jumps by a mesh modulus well below any
                // branch-switch discontinuity (which would be O(10)).
                for (now, before) in [
                    (c1.a, p1.a),
                    (c1.b, p1.b),
                    (c1.d, p1.d),
                    (c3.a, p3.a),
                    (c3.b, p3.b),
                    (c3.d, p3.d),
                ] {
                    assert!((now - before).abs() < 0.2, "jump near mu = {v}");
                }
            }
            prev = Some((c1, c3));
        }
    }

    #[test]
    fn vertical_frequency_at_the_libration_points() {
        let m = mu(0.5);
        let spec = spectral_decomposition(m);
        let l1 = libration_point(m, PointLabel::L1).unwrap();
        let l3 = libration_point(m, PointLabel::L3).unwrap();
        let w1 = vertical_frequency(l1).unwrap();
        let w3 = vertical_frequency(l3).unwrap();
        assert_abs_diff_eq!(w1, (1.0 + spec.lambda2).sqrt(), epsilon = 1e-13);
        assert_abs_diff_eq!(w1, 13.0f64.sqrt() / 2.0, epsilon = 1e-13);
        assert_abs_diff_eq!(w3, (1.0 + spec.lambda1).sqrt(), epsilon = 1e-13);
        assert_abs_diff_eq!(w3, 7.0f64.sqrt() / 2.0, epsilon = 1e-13);
    }

    #[test]
    fn vertical_frequency_tends_to_one_far_away() {
        let w = vertical_frequency(PlanarPoint::new(1e8, 0.0)).unwrap();
        assert_eq!(w, 1.0);
        assert!(vertical_frequency(PlanarPoint::new(0.0, 0.0)).is_err());
    }
}
