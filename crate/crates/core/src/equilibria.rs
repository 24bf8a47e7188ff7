//! Libration points of the limit problem and their continuation into the
//! full problem at small positive m3.
//!
//! Away from the kernel the planar effective potential is the quadratic
//! form of the interaction matrix
//!
//! ```text
//! M = [ 3/4   c  ]        c = (3 sqrt(3) / 4)(1 - 2 mu),
//!     [  c   9/4 ],
//! ```
//!
//! whose eigenvalues are lambda_i = (3/2)(1 -+ d) with
//! d = sqrt(1 - 3 mu + 3 mu^2). Critical points of W lie on the eigenaxes
//! at radius lambda_i^(-1/3): the pair L1, L2 = -L1 on the stiff axis v2
//! and the pair L3, L4 = -L3 on the soft axis v1. Three independent routes
//! to these points live here: the closed form, a grid-seeded Newton oracle
//! on the limit gradient, and Newton continuation on the full-problem
//! gradient seeded at p3 + m3^(1/3) L_i.

use crate::error::{Error, Result};
use crate::hill::{self, MassRatio};
use crate::r4bp::{MassConfig, R4bp};
use crate::state::PlanarPoint;

/// Half-width of the default Newton start grid.
pub const ORACLE_EXTENT: f64 = 3.0;

/// Default Newton start grid resolution per axis.
pub const ORACLE_GRID: usize = 40;

/// Largest third mass accepted by the continuation.
pub const CONTINUATION_MAX_M3: f64 = 1e-4;

/// Distance below which two converged roots count as the same point.
pub const DEDUP_TOL: f64 = 1e-6;

/// y-window treated as "on the x axis" by the orientation convention.
const ORIENT_TIE: f64 = 1e-9;

const NEWTON_TOL: f64 = 1e-12;
const NEWTON_MAX_ITER: usize = 50;

/// Names of the four libration points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PointLabel {
    L1,
    L2,
    L3,
    L4,
}

impl PointLabel {
    pub const ALL: [PointLabel; 4] = [
        PointLabel::L1,
        PointLabel::L2,
        PointLabel::L3,
        PointLabel::L4,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            PointLabel::L1 => "L1",
            PointLabel::L2 => "L2",
            PointLabel::L3 => "L3",
            PointLabel::L4 => "L4",
        }
    }
}

impl std::str::FromStr for PointLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "L1" | "l1" => Ok(PointLabel::L1),
            "L2" | "l2" => Ok(PointLabel::L2),
            "L3" | "l3" => Ok(PointLabel::L3),
            "L4" | "l4" => Ok(PointLabel::L4),
            other => Err(Error::InvalidArgument(format!(
                "unknown point label {other:?}, expected L1..L4"
            ))),
        }
    }
}

impl std::fmt::Display for PointLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Eigenstructure of the interaction matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralData {
    pub d: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub v1: [f64; 2],
    pub v2: [f64; 2],
}

/// How a set of equilibria was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    ClosedForm,
    Numeric,
}

/// The four libration points with their provenance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumSet {
    pub l1: PlanarPoint,
    pub l2: PlanarPoint,
    pub l3: PlanarPoint,
    pub l4: PlanarPoint,
    pub provenance: Provenance,
}

impl EquilibriumSet {
    pub fn get(&self, label: PointLabel) -> PlanarPoint {
        match label {
            PointLabel::L1 => self.l1,
            PointLabel::L2 => self.l2,
            PointLabel::L3 => self.l3,
            PointLabel::L4 => self.l4,
        }
    }

    pub fn iter(&self) -> [(PointLabel, PlanarPoint); 4] {
        [
            (PointLabel::L1, self.l1),
            (PointLabel::L2, self.l2),
            (PointLabel::L3, self.l3),
            (PointLabel::L4, self.l4),
        ]
    }
}

/// Quadratic part of the planar effective potential as a symmetric matrix.
pub fn interaction_matrix(mu: MassRatio) -> [[f64; 2]; 2] {
    let c = hill::cross_coefficient(mu);
    [[0.75, c], [c, 2.25]]
}

/// Resolves the antipodal ambiguity: keep the representative with y > 0,
/// falling back to x > 0 when y sits within [`ORIENT_TIE`] of the axis.
fn orient(p: PlanarPoint) -> PlanarPoint {
    if p.y > ORIENT_TIE {
        p
    } else if p.y < -ORIENT_TIE {
        -p
    } else if p.x >= 0.0 {
        p
    } else {
        -p
    }
}

/// Eigenvalues and oriented unit eigenvectors of the interaction matrix.
///
/// The raw eigenvector formulas divide by 2 mu - 1; the forms used here
/// multiply that factor away, so the diagonal case mu = 1/2 falls out as
/// v1 = (1, 0), v2 = (0, 1) without a branch. lambda1 is computed as
/// 4.5 mu (1 - mu) / (1 + d), which keeps full relative precision as
/// mu -> 0 where the direct (3/2)(1 - d) cancels.
pub fn spectral_decomposition(mu: MassRatio) -> SpectralData {
    let s = 1.0 - 2.0 * mu.value();
    let d = 0.5 * (1.0 + 3.0 * s * s).sqrt();
    let lambda1 = 4.5 * mu.value() * (1.0 - mu.value()) / (1.0 + d);
    let lambda2 = 1.5 * (1.0 + d);
    // Unit eigenvectors: with a = sqrt((2d + 1) / (4d)) and
    // b = sqrt(3) s / (2 sqrt(d (2d + 1))), M (-a, b) = lambda1 (-a, b) and
    // M (b, a) = lambda2 (b, a), and a^2 + b^2 = 1 identically.
    let a = 0.5 * ((2.0 * d + 1.0) / d).sqrt();
    let b = 3.0f64.sqrt() * s / (2.0 * (d * (2.0 * d + 1.0)).sqrt());
    let v1 = orient(PlanarPoint::new(-a, b));
    let v2 = orient(PlanarPoint::new(b, a));
    SpectralData {
        d,
        lambda1,
        lambda2,
        v1: [v1.x, v1.y],
        v2: [v2.x, v2.y],
    }
}

/// One closed-form libration point.
///
/// L1, L2 sit on the stiff eigenaxis at radius lambda2^(-1/3) and exist for
/// every mu in [0, 1/2]; L3, L4 sit on the soft axis at radius
/// lambda1^(-1/3) and escape to infinity as mu -> 0.
pub fn libration_point(mu: MassRatio, label: PointLabel) -> Result<PlanarPoint> {
    let spec = spectral_decomposition(mu);
    let (lambda, v) = match label {
        PointLabel::L1 | PointLabel::L2 => (spec.lambda2, spec.v2),
        PointLabel::L3 | PointLabel::L4 => (spec.lambda1, spec.v1),
    };
    if lambda <= 0.0 {
        return Err(Error::DegenerateParameter {
            detail: format!(
                "{label} undefined at mu = {}: soft eigenvalue lambda1 = 0",
                mu.value()
            ),
        });
    }
    let radius = lambda.cbrt().recip();
    let p = orient(PlanarPoint::new(radius * v[0], radius * v[1]));
    Ok(match label {
        PointLabel::L1 | PointLabel::L3 => p,
        PointLabel::L2 | PointLabel::L4 => -p,
    })
}

/// All four closed-form libration points.
pub fn equilibrium_points(mu: MassRatio) -> Result<EquilibriumSet> {
    let l1 = libration_point(mu, PointLabel::L1)?;
    let l3 = libration_point(mu, PointLabel::L3)?;
    Ok(EquilibriumSet {
        l1,
        l2: -l1,
        l3,
        l4: -l3,
        provenance: Provenance::ClosedForm,
    })
}

/// Damped Newton iteration on a planar gradient; `None` on non-convergence
/// or when an evaluation leaves the field's domain.
fn newton_refine(
    grad: &dyn Fn(PlanarPoint) -> Result<[f64; 2]>,
    hess: &dyn Fn(PlanarPoint) -> Result<[[f64; 2]; 2]>,
    start: PlanarPoint,
) -> Option<PlanarPoint> {
    let norm = |g: [f64; 2]| g[0].hypot(g[1]);
    let mut p = start;
    let mut g = grad(p).ok()?;
    let mut gn = norm(g);
    for _ in 0..NEWTON_MAX_ITER {
        if gn < NEWTON_TOL {
            return Some(p);
        }
        let h = hess(p).ok()?;
        let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
        let scale = h
            .iter()
            .flatten()
            .fold(0.0f64, |acc, v| acc.max(v.abs()));
        if det.abs() <= 1e-13 * scale * scale {
            return None;
        }
        let dx = (-h[1][1] * g[0] + h[0][1] * g[1]) / det;
        let dy = (h[1][0] * g[0] - h[0][0] * g[1]) / det;
        // Halve the step until the gradient norm decreases.
        let mut step = 1.0;
        let mut advanced = false;
        for _ in 0..30 {
            let trial = PlanarPoint::new(p.x + step * dx, p.y + step * dy);
            if let Ok(tg) = grad(trial) {
                let tn = norm(tg);
                if tn < gn {
                    p = trial;
                    g = tg;
                    gn = tn;
                    advanced = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if !advanced {
            return None;
        }
    }
    (gn < NEWTON_TOL).then_some(p)
}

/// Splits four roots into the inner and outer antipodal pairs and applies
/// the orientation convention to name L1 and L3.
fn label_roots(mut roots: Vec<PlanarPoint>, provenance: Provenance) -> Result<EquilibriumSet> {
    if roots.len() != 4 {
        return Err(Error::RootCount { roots });
    }
    roots.sort_by(|p, q| {
        (p.norm(), p.x, p.y)
            .partial_cmp(&(q.norm(), q.x, q.y))
            .expect("finite roots")
    });
    let pick = |a: PlanarPoint, b: PlanarPoint| -> (PlanarPoint, PlanarPoint) {
        if a.y > ORIENT_TIE {
            (a, b)
        } else if b.y > ORIENT_TIE {
            (b, a)
        } else if a.x >= 0.0 {
            (a, b)
        } else {
            (b, a)
        }
    };
    let (l1, l2) = pick(roots[0], roots[1]);
    let (l3, l4) = pick(roots[2], roots[3]);
    Ok(EquilibriumSet {
        l1,
        l2,
        l3,
        l4,
        provenance,
    })
}

/// Grid-seeded Newton oracle on the limit-problem gradient.
///
/// Runs damped Newton from an n-by-n grid over [-extent, extent]^2 and, when
/// the outer pair lies beyond that window (small mu), from a second grid
/// expanded to 1.5 lambda1^(-1/3). Converged points are deduplicated at
/// [`DEDUP_TOL`] and must number exactly four.
pub fn numeric_equilibria_oracle(mu: MassRatio, extent: f64, n: usize) -> Result<EquilibriumSet> {
    if !(extent.is_finite() && extent > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "grid extent {extent} must be positive"
        )));
    }
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "grid resolution {n} must be at least 2"
        )));
    }
    let spec = spectral_decomposition(mu);
    if spec.lambda1 <= 0.0 {
        return Err(Error::DegenerateParameter {
            detail: format!(
                "outer equilibria undefined at mu = {}: soft eigenvalue lambda1 = 0",
                mu.value()
            ),
        });
    }
    let grad = |p: PlanarPoint| hill::grad_omega_planar(p, mu);
    let hess = |p: PlanarPoint| hill::hess_omega_planar(p, mu);
    let mut extents = vec![extent];
    let outer = 1.5 / spec.lambda1.cbrt();
    if outer > extent {
        extents.push(outer);
    }
    let mut roots: Vec<PlanarPoint> = Vec::new();
    for e in extents {
        for i in 0..n {
            for j in 0..n {
                let x = -e + 2.0 * e * (i as f64) / ((n - 1) as f64);
                let y = -e + 2.0 * e * (j as f64) / ((n - 1) as f64);
                let start = PlanarPoint::new(x, y);
                if start.norm() < 0.02 * e {
                    continue;
                }
                if let Some(root) = newton_refine(&grad, &hess, start) {
                    if !roots.iter().any(|r| r.dist(root) < DEDUP_TOL) {
                        roots.push(root);
                    }
                }
            }
        }
    }
    label_roots(roots, Provenance::Numeric)
}

/// Oracle with the default grid.
pub fn numeric_equilibria(mu: MassRatio) -> Result<EquilibriumSet> {
    numeric_equilibria_oracle(mu, ORACLE_EXTENT, ORACLE_GRID)
}

/// Newton continuation of the four points into the full problem with masses
/// (1 - mu - m3, mu, m3), reported in the rescaled frame centered on the
/// third primary.
///
/// Seeds sit at p3 + m3^(1/3) L_i; each converged full-problem root q maps
/// back as (q - p3) / m3^(1/3). Labels carry over from the seeds.
pub fn r4bp_equilibria_near_m3(mu: MassRatio, m3: f64) -> Result<EquilibriumSet> {
    if !m3.is_finite() || m3 <= 0.0 || m3 > CONTINUATION_MAX_M3 {
        return Err(Error::InvalidArgument(format!(
            "third mass {m3} outside (0, {CONTINUATION_MAX_M3}]"
        )));
    }
    let limit = equilibrium_points(mu)?;
    let problem = R4bp::new(MassConfig::with_third_mass(mu, m3)?)?;
    let p3 = problem.triangle().p3;
    let eps = m3.cbrt();
    let grad = |p: PlanarPoint| problem.planar_grad(p);
    let hess = |p: PlanarPoint| problem.planar_hessian(p);
    let mut continued = [PlanarPoint::default(); 4];
    for (k, (_, point)) in limit.iter().into_iter().enumerate() {
        let seed = PlanarPoint::new(p3.x + eps * point.x, p3.y + eps * point.y);
        let root = newton_refine(&grad, &hess, seed)
            .ok_or(Error::ContinuationDiverged { seed })?;
        continued[k] = PlanarPoint::new((root.x - p3.x) / eps, (root.y - p3.y) / eps);
    }
    Ok(EquilibriumSet {
        l1: continued[0],
        l2: continued[1],
        l3: continued[2],
        l4: continued[3],
        provenance: Provenance::Numeric,
    })
}
