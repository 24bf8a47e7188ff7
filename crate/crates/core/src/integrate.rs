//! Trajectory propagation with adaptive step control.
//!
//! The stepper is the Dormand-Prince embedded pair of orders 5(4) with the
//! first-same-as-last optimization and a quartic dense-output interpolant,
//! so trajectories can be sampled at arbitrary times without constraining
//! the step sequence. The right-hand sides are autonomous, so stage times
//! never enter the stage evaluations.
//!
//! The Jacobi constant is not enforced; it is recorded along the trajectory
//! and its drift serves as the accuracy diagnostic. A symplectic scheme
//! would not buy exact conservation here anyway: the rotating-frame
//! equations in velocity form are non-separable.

use crate::error::{Error, Result};
use crate::hill::{self, MassRatio};
use crate::r4bp::R4bp;
use crate::state::SpatialState;

/// A trajectory aborts once a state comes within this distance of a
/// singularity. Collision orbits are out of scope; terminating early keeps
/// the shrinking steps near a primary from draining the step budget.
pub const APPROACH_GUARD: f64 = 1e-9;

type Vec6 = [f64; 6];

/// A first-order autonomous field on the 6-dimensional phase space
/// together with its conserved scalar.
pub trait Dynamics {
    /// Time derivative of the state vector.
    fn derivative(&self, y: &Vec6) -> Result<Vec6>;

    /// Conserved quantity along exact solutions; NaN where undefined.
    fn first_integral(&self, y: &Vec6) -> f64;

    /// Distance to the nearest singularity of the field, infinite for
    /// globally smooth fields.
    fn singular_separation(&self, _y: &Vec6) -> f64 {
        f64::INFINITY
    }
}

/// Limit-problem field at mass ratio mu, singular at the origin.
#[derive(Debug, Clone, Copy)]
pub struct HillDynamics {
    mu: MassRatio,
}

impl HillDynamics {
    pub fn new(mu: MassRatio) -> Self {
        Self { mu }
    }
}

impl Dynamics for HillDynamics {
    fn derivative(&self, y: &Vec6) -> Result<Vec6> {
        hill::eom(&SpatialState::from_array(*y), self.mu)
    }

    fn first_integral(&self, y: &Vec6) -> f64 {
        hill::jacobi(&SpatialState::from_array(*y), self.mu).unwrap_or(f64::NAN)
    }

    fn singular_separation(&self, y: &Vec6) -> f64 {
        (y[0] * y[0] + y[1] * y[1] + y[2] * y[2]).sqrt()
    }
}

/// Full-problem field, singular at each vertex carrying positive mass.
#[derive(Debug, Clone)]
pub struct R4bpDynamics {
    problem: R4bp,
}

impl R4bpDynamics {
    pub fn new(problem: R4bp) -> Self {
        Self { problem }
    }

    pub fn problem(&self) -> &R4bp {
        &self.problem
    }
}

impl Dynamics for R4bpDynamics {
    fn derivative(&self, y: &Vec6) -> Result<Vec6> {
        self.problem.eom(&SpatialState::from_array(*y))
    }

    fn first_integral(&self, y: &Vec6) -> f64 {
        self.problem
            .jacobi(&SpatialState::from_array(*y))
            .unwrap_or(f64::NAN)
    }

    fn singular_separation(&self, y: &Vec6) -> f64 {
        let masses = self.problem.masses().as_array();
        let mut best = f64::INFINITY;
        for (m, p) in masses.iter().zip(self.problem.triangle().as_array()) {
            if *m == 0.0 {
                continue;
            }
            let dx = y[0] - p.x;
            let dy = y[1] - p.y;
            let dist = (dx * dx + dy * dy + y[2] * y[2]).sqrt();
            best = best.min(dist);
        }
        best
    }
}

/// Limit-problem field with the kernel removed: only the quadratic part of
/// the effective potential acts. The field is polynomial, so the stepper
/// integrates it nearly exactly; any residual drift of its first integral
/// isolates step-control error from force-model error.
#[derive(Debug, Clone, Copy)]
pub struct QuadraticDynamics {
    mu: MassRatio,
}

impl QuadraticDynamics {
    pub fn new(mu: MassRatio) -> Self {
        Self { mu }
    }

    fn quadratic_potential(&self, y: &Vec6) -> f64 {
        let c = hill::cross_coefficient(self.mu);
        0.375 * y[0] * y[0] + c * y[0] * y[1] + 1.125 * y[1] * y[1] - 0.5 * y[2] * y[2]
    }
}

impl Dynamics for QuadraticDynamics {
    fn derivative(&self, y: &Vec6) -> Result<Vec6> {
        let c = hill::cross_coefficient(self.mu);
        let gx = 0.75 * y[0] + c * y[1];
        let gy = c * y[0] + 2.25 * y[1];
        let gz = -y[2];
        Ok([
            y[3],
            y[4],
            y[5],
            2.0 * y[4] + gx,
            -2.0 * y[3] + gy,
            gz,
        ])
    }

    fn first_integral(&self, y: &Vec6) -> f64 {
        let v2 = y[3] * y[3] + y[4] * y[4] + y[5] * y[5];
        2.0 * self.quadratic_potential(y) - v2
    }
}

/// Three uncoupled unit oscillators q'' = -q with the exact solution
/// q(t) = q0 cos t + v0 sin t; the calibration standard for order and
/// dense-output tests.
#[derive(Debug, Clone, Copy, Default)]
pub struct HarmonicDynamics;

impl Dynamics for HarmonicDynamics {
    fn derivative(&self, y: &Vec6) -> Result<Vec6> {
        Ok([y[3], y[4], y[5], -y[0], -y[1], -y[2]])
    }

    fn first_integral(&self, y: &Vec6) -> f64 {
        y.iter().map(|v| v * v).sum()
    }
}

/// Step-control parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settings {
    /// Relative tolerance on the per-step error estimate.
    pub rel_tol: f64,
    /// Absolute tolerance floor on the per-step error estimate.
    pub abs_tol: f64,
    /// Upper bound on the step magnitude, unbounded when absent.
    pub max_step: Option<f64>,
    /// Budget of step attempts, accepted and rejected alike.
    pub max_steps: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            abs_tol: 1e-12,
            max_step: None,
            max_steps: 1_000_000,
        }
    }
}

impl Settings {
    pub fn validate(&self) -> Result<()> {
        for (name, value) in [("rel_tol", self.rel_tol), ("abs_tol", self.abs_tol)] {
            if !value.is_finite() || !(1e-15..=1e-2).contains(&value) {
                return Err(Error::InvalidArgument(format!(
                    "{name} = {value} outside [1e-15, 1e-2]"
                )));
            }
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidArgument(
                "max_steps must be at least 1".into(),
            ));
        }
        if let Some(h) = self.max_step {
            if !h.is_finite() || h <= 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "max_step = {h} must be positive and finite"
                )));
            }
        }
        Ok(())
    }
}

/// Discrete solution record. Times run monotonically in the direction of
/// integration; `jacobi[k]` is the field's first integral at `states[k]`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<SpatialState>,
    pub jacobi: Vec<f64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last(&self) -> Option<(f64, SpatialState)> {
        Some((*self.times.last()?, *self.states.last()?))
    }

    /// Worst-case excursion of the first integral from its initial value.
    pub fn jacobi_drift(&self) -> Result<f64> {
        let first = *self.jacobi.first().ok_or(Error::EmptyTrajectory)?;
        Ok(self
            .jacobi
            .iter()
            .map(|c| (c - first).abs())
            .fold(0.0, f64::max))
    }

    fn push<D: Dynamics + ?Sized>(&mut self, dynamics: &D, t: f64, y: &Vec6) {
        self.times.push(t);
        self.states.push(SpatialState::from_array(*y));
        self.jacobi.push(dynamics.first_integral(y));
    }
}

// Dormand-Prince 5(4) tableau.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// Difference between the 5th- and 4th-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
// Dense-output weights for the quartic interpolant.
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// One trial step of size `h` from `y`, reusing `k1 = f(y)`. Returns the
/// 5th-order solution, all seven stage derivatives (the last doubles as the
/// next step's `k1`), and the embedded error vector.
fn trial<D: Dynamics + ?Sized>(
    dynamics: &D,
    y: &Vec6,
    h: f64,
    k1: &Vec6,
) -> Result<(Vec6, [Vec6; 7], Vec6)> {
    let mut k = [[0.0; 6]; 7];
    k[0] = *k1;
    let stage = |weights: &[(f64, usize)], k: &[Vec6; 7]| -> Vec6 {
        let mut out = *y;
        for (i, slot) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for &(a, j) in weights {
                acc += a * k[j][i];
            }
            *slot += h * acc;
        }
        out
    };
    k[1] = dynamics.derivative(&stage(&[(A21, 0)], &k))?;
    k[2] = dynamics.derivative(&stage(&[(A31, 0), (A32, 1)], &k))?;
    k[3] = dynamics.derivative(&stage(&[(A41, 0), (A42, 1), (A43, 2)], &k))?;
    k[4] = dynamics.derivative(&stage(&[(A51, 0), (A52, 1), (A53, 2), (A54, 3)], &k))?;
    k[5] = dynamics.derivative(&stage(
        &[(A61, 0), (A62, 1), (A63, 2), (A64, 3), (A65, 4)],
        &k,
    ))?;
    let mut y1 = *y;
    for i in 0..6 {
        y1[i] += h * (B1 * k[0][i] + B3 * k[2][i] + B4 * k[3][i] + B5 * k[4][i] + B6 * k[5][i]);
    }
    k[6] = dynamics.derivative(&y1)?;
    let mut err = [0.0; 6];
    for i in 0..6 {
        err[i] = h
            * (E1 * k[0][i]
                + E3 * k[2][i]
                + E4 * k[3][i]
                + E5 * k[4][i]
                + E6 * k[5][i]
                + E7 * k[6][i]);
    }
    Ok((y1, k, err))
}

/// Dense-output coefficients over one accepted step.
fn dense_coefficients(y0: &Vec6, y1: &Vec6, h: f64, k: &[Vec6; 7]) -> [Vec6; 5] {
    let mut c = [[0.0; 6]; 5];
    for i in 0..6 {
        let ydiff = y1[i] - y0[i];
        let bspl = h * k[0][i] - ydiff;
        c[0][i] = y0[i];
        c[1][i] = ydiff;
        c[2][i] = bspl;
        c[3][i] = ydiff - h * k[6][i] - bspl;
        c[4][i] = h
            * (D1 * k[0][i]
                + D3 * k[2][i]
                + D4 * k[3][i]
                + D5 * k[4][i]
                + D6 * k[5][i]
                + D7 * k[6][i]);
    }
    c
}

/// Interpolant evaluation at fraction `theta` of the step.
fn dense_eval(c: &[Vec6; 5], theta: f64) -> Vec6 {
    let t1 = 1.0 - theta;
    let mut out = [0.0; 6];
    for i in 0..6 {
        out[i] = c[0][i] + theta * (c[1][i] + t1 * (c[2][i] + theta * (c[3][i] + t1 * c[4][i])));
    }
    out
}

fn inf_norm(v: &Vec6) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

fn validate_span(t0: f64, t1: f64, start: &SpatialState) -> Result<()> {
    if !t0.is_finite() || !t1.is_finite() || t0 == t1 {
        return Err(Error::InvalidArgument(format!(
            "span [{t0}, {t1}] must have distinct finite endpoints"
        )));
    }
    if !start.is_finite() {
        return Err(Error::InvalidArgument(
            "initial state must be finite".into(),
        ));
    }
    Ok(())
}

fn validate_samples(samples: &[f64], t0: f64, t1: f64, dir: f64) -> Result<()> {
    if samples.is_empty() {
        return Err(Error::InvalidArgument("sample list is empty".into()));
    }
    let (lo, hi) = (t0.min(t1), t0.max(t1));
    let mut prev: Option<f64> = None;
    for &s in samples {
        if !s.is_finite() || s < lo || s > hi {
            return Err(Error::InvalidArgument(format!(
                "sample time {s} outside [{lo}, {hi}]"
            )));
        }
        if let Some(p) = prev {
            if (s - p) * dir < 0.0 {
                return Err(Error::InvalidArgument(
                    "sample times must follow the integration direction".into(),
                ));
            }
        }
        prev = Some(s);
    }
    Ok(())
}

/// Adaptive driver. Records every accepted step when `samples` is absent,
/// dense-output values at the given times otherwise.
fn drive<D: Dynamics + ?Sized>(
    dynamics: &D,
    t_span: [f64; 2],
    start: SpatialState,
    settings: &Settings,
    samples: Option<&[f64]>,
) -> Result<Trajectory> {
    settings.validate()?;
    let [t0, t1] = t_span;
    validate_span(t0, t1, &start)?;
    let dir = (t1 - t0).signum();
    if let Some(list) = samples {
        validate_samples(list, t0, t1, dir)?;
    }

    let h_cap = settings.max_step.unwrap_or(f64::INFINITY);
    let mut h_abs = ((t1 - t0).abs() / 1000.0).min(h_cap);
    let mut t = t0;
    let mut y = start.to_array();
    let mut k1 = dynamics.derivative(&y)?;

    let mut traj = Trajectory::default();
    let mut cursor = 0;
    match samples {
        None => traj.push(dynamics, t0, &y),
        Some(list) => {
            while cursor < list.len() && (list[cursor] - t0) * dir <= 0.0 {
                traj.push(dynamics, t0, &y);
                cursor += 1;
            }
        }
    }

    let mut attempts = 0usize;
    while (t1 - t) * dir > 0.0 {
        if attempts >= settings.max_steps {
            return Err(Error::StepBudget {
                t,
                budget: settings.max_steps,
                last: SpatialState::from_array(y),
            });
        }
        attempts += 1;
        let remaining = t1 - t;
        let clipped = h_abs >= remaining.abs();
        let h = if clipped { remaining } else { dir * h_abs };
        let (y1, k, err_vec) = match trial(dynamics, &y, h, &k1) {
            Ok(step) => step,
            Err(_) => {
                // A stage probed inside the singular guard; retry shorter.
                h_abs = h.abs() * 0.2;
                continue;
            }
        };
        let err = inf_norm(&err_vec);
        let sc = settings
            .abs_tol
            .max(settings.rel_tol * inf_norm(&y).max(inf_norm(&y1)));
        let accepted = err.is_finite() && err <= sc && y1.iter().all(|v| v.is_finite());
        if accepted {
            let t_new = if clipped { t1 } else { t + h };
            let sep = dynamics.singular_separation(&y1);
            if sep < APPROACH_GUARD {
                return Err(Error::SingularityApproach {
                    t: t_new,
                    separation: sep,
                    last: SpatialState::from_array(y),
                });
            }
            match samples {
                None => traj.push(dynamics, t_new, &y1),
                Some(list) => {
                    if cursor < list.len() && (list[cursor] - t_new) * dir <= 0.0 {
                        let cont = dense_coefficients(&y, &y1, h, &k);
                        while cursor < list.len() && (list[cursor] - t_new) * dir <= 0.0 {
                            let theta = (list[cursor] - t) / h;
                            let ys = dense_eval(&cont, theta);
                            traj.push(dynamics, list[cursor], &ys);
                            cursor += 1;
                        }
                    }
                }
            }
            y = y1;
            t = t_new;
            k1 = k[6];
            let factor = if err == 0.0 {
                5.0
            } else {
                (0.9 * (sc / err).powf(0.2)).clamp(0.2, 5.0)
            };
            h_abs = (h.abs() * factor).min(h_cap);
        } else {
            let factor = if err.is_finite() && err > 0.0 {
                (0.9 * (sc / err).powf(0.2)).clamp(0.2, 5.0)
            } else {
                0.2
            };
            h_abs = h.abs() * factor;
        }
    }
    Ok(traj)
}

/// Integrates over the span, recording every accepted step.
pub fn propagate<D: Dynamics + ?Sized>(
    dynamics: &D,
    t_span: [f64; 2],
    start: SpatialState,
    settings: &Settings,
) -> Result<Trajectory> {
    drive(dynamics, t_span, start, settings, None)
}

/// Integrates over the span, recording dense-output values at `samples`.
/// Sample times must lie within the span and follow its direction.
pub fn propagate_sampled<D: Dynamics + ?Sized>(
    dynamics: &D,
    t_span: [f64; 2],
    start: SpatialState,
    settings: &Settings,
    samples: &[f64],
) -> Result<Trajectory> {
    drive(dynamics, t_span, start, settings, Some(samples))
}

/// Integrates with `steps` equal steps and no error control. Exposed only
/// for convergence-order measurements; use [`propagate`] for real work.
pub fn propagate_fixed<D: Dynamics + ?Sized>(
    dynamics: &D,
    t_span: [f64; 2],
    start: SpatialState,
    steps: usize,
) -> Result<Trajectory> {
    if steps == 0 {
        return Err(Error::InvalidArgument("step count must be positive".into()));
    }
    let [t0, t1] = t_span;
    validate_span(t0, t1, &start)?;
    let h = (t1 - t0) / steps as f64;
    let mut t = t0;
    let mut y = start.to_array();
    let mut k1 = dynamics.derivative(&y)?;
    let mut traj = Trajectory::default();
    traj.push(dynamics, t0, &y);
    for n in 1..=steps {
        let (y1, k, _) = trial(dynamics, &y, h, &k1)?;
        if !y1.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "fixed-step solution became non-finite near t = {t}"
            )));
        }
        let t_new = if n == steps { t1 } else { t0 + h * n as f64 };
        let sep = dynamics.singular_separation(&y1);
        if sep < APPROACH_GUARD {
            return Err(Error::SingularityApproach {
                t: t_new,
                separation: sep,
                last: SpatialState::from_array(y),
            });
        }
        traj.push(dynamics, t_new, &y1);
        y = y1;
        t = t_new;
        k1 = k[6];
    }
    Ok(traj)
}
