//! Dormand–Prince 5(4) integration of the Euler–Lagrange equation.
//!
//! Steps are clipped so that every requested output time is hit exactly.
//! The error norm uses `sc = 0.1·tol + 0.9·tol·max(|y|, |y_new|)` per
//! component and a PI step-size controller.

use super::{acceleration, hamiltonian};
use crate::model::SystemParams;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Distance from `1 − κx² = 0` or `x = 0` at which integration stops.
pub const SINGULAR_GUARD: f64 = 1e-10;

const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
/// Fifth-order weights minus embedded fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorOptions {
    /// Per-step error tolerance, in `[1e-12, 1e-4]`.
    pub tol: f64,
    /// Number of uniformly spaced output intervals over the span.
    pub samples: usize,
    /// Upper bound on accepted plus rejected steps.
    pub max_steps: usize,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            samples: 1000,
            max_steps: 5_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub x: f64,
    pub v: f64,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

impl Trajectory {
    /// Largest `|E(t) − E(t₀)|` along the samples.
    pub fn energy_drift(&self) -> f64 {
        let Some(first) = self.samples.first() else {
            return 0.0;
        };
        self.samples
            .iter()
            .map(|s| (s.energy - first.energy).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IntegrationFailure {
    BarrierApproach,
    CoreApproach,
    StepSizeUnderflow,
    TooManySteps,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntegrationError {
    #[error("invalid integration request: {0}")]
    InvalidInput(String),
    #[error("integration stopped at t = {t}: {kind:?}")]
    Stopped {
        kind: IntegrationFailure,
        t: f64,
        partial: Box<Trajectory>,
    },
}

type State = [f64; 2];

fn rhs(p: &SystemParams, y: &State) -> State {
    [y[1], acceleration(p, y[0], y[1])]
}

fn singular(p: &SystemParams, x: f64) -> Option<IntegrationFailure> {
    if p.kappa > 0.0 && (1.0 - p.kappa * x * x).abs() < SINGULAR_GUARD {
        return Some(IntegrationFailure::BarrierApproach);
    }
    if x.abs() < SINGULAR_GUARD && p.k_g > 0.0 {
        return Some(IntegrationFailure::CoreApproach);
    }
    None
}

fn crossing(p: &SystemParams, x0: f64, x1: f64) -> Option<IntegrationFailure> {
    if p.k_g > 0.0 && x0 * x1 <= 0.0 {
        return Some(IntegrationFailure::CoreApproach);
    }
    if p.kappa > 0.0 && (1.0 - p.kappa * x0 * x0) * (1.0 - p.kappa * x1 * x1) <= 0.0 {
        return Some(IntegrationFailure::BarrierApproach);
    }
    None
}

/// Integrates `ẍ = −κxẋ²/D − α²x/D + (k_g/m)D/x³`, `D = 1 − κx²`,
/// from `(x0, v0)` over `t_span`, emitting `(t, x, v, E)` samples.
pub fn integrate_el(
    x0: f64,
    v0: f64,
    t_span: (f64, f64),
    params: &SystemParams,
    opts: &IntegratorOptions,
) -> Result<Trajectory, IntegrationError> {
    params
        .validate()
        .map_err(|e| IntegrationError::InvalidInput(e.to_string()))?;
    if !(1e-12..=1e-4).contains(&opts.tol) {
        return Err(IntegrationError::InvalidInput(format!(
            "tol {} outside [1e-12, 1e-4]",
            opts.tol
        )));
    }
    let (t0, t1) = t_span;
    if !(t1 > t0) || opts.samples == 0 {
        return Err(IntegrationError::InvalidInput("empty time span or no samples".into()));
    }
    if x0 == 0.0 && params.k_g > 0.0 {
        return Err(IntegrationError::InvalidInput("x0 = 0 is singular".into()));
    }
    let energy = |x: f64, v: f64| hamiltonian(params, x, v).unwrap_or(f64::NAN);
    if params.kappa > 0.0 && params.kappa * x0 * x0 >= 1.0 {
        return Err(IntegrationError::InvalidInput("x0 beyond the barrier".into()));
    }

    let mut traj = Trajectory::default();
    traj.samples.push(Sample {
        t: t0,
        x: x0,
        v: v0,
        energy: energy(x0, v0),
    });

    let tol = opts.tol;
    let (atol, rtol) = (0.1 * tol, 0.9 * tol);
    let dt_out = (t1 - t0) / opts.samples as f64;
    let mut t = t0;
    let mut y: State = [x0, v0];
    let mut k0 = rhs(params, &y);
    let mut h = initial_step(params, &y, &k0, atol, rtol).min(dt_out);
    let mut err_prev: f64 = 1e-4;
    let mut next_out = 1usize;
    let mut steps = 0usize;
    let mut rejected_last = false;

    while next_out <= opts.samples {
        let t_target = if next_out == opts.samples {
            t1
        } else {
            t0 + next_out as f64 * dt_out
        };
        let remaining = t_target - t;
        let clipped = h >= remaining;
        let step = if clipped { remaining } else { h };
        if step <= 1e-14 * t.abs().max(1.0) {
            return Err(stopped(IntegrationFailure::StepSizeUnderflow, t, traj));
        }
        steps += 1;
        if steps > opts.max_steps {
            return Err(stopped(IntegrationFailure::TooManySteps, t, traj));
        }

        let k = match stages(params, &y, &k0, step) {
            Ok(k) => k,
            Err(kind) => {
                if step > 1e-12 {
                    // Retry with a smaller step before declaring failure.
                    h = 0.25 * step;
                    rejected_last = true;
                    traj.rejected_steps += 1;
                    continue;
                }
                return Err(stopped(kind, t, traj));
            }
        };
        // k₆ is evaluated at the fifth-order solution (FSAL).
        let mut y_new = y;
        for (j, kj) in k.iter().enumerate().take(6) {
            y_new[0] += step * A[6][j] * kj[0];
            y_new[1] += step * A[6][j] * kj[1];
        }
        let mut err2 = 0.0;
        for i in 0..2 {
            let e: f64 = (0..7).map(|j| E[j] * k[j][i]).sum::<f64>() * step;
            let sc = atol + rtol * y[i].abs().max(y_new[i].abs());
            err2 += (e / sc).powi(2);
        }
        let err = (err2 / 2.0).sqrt();

        // A step that jumps across x = 0 or the barrier skipped a singularity.
        if let Some(kind) = crossing(params, y[0], y_new[0]) {
            if step > 1e-12 {
                h = 0.25 * step;
                rejected_last = true;
                traj.rejected_steps += 1;
                continue;
            }
            return Err(stopped(kind, t, traj));
        }

        if err.is_finite() && err <= 1.0 {
            t = if clipped { t_target } else { t + step };
            y = y_new;
            k0 = k[6];
            traj.accepted_steps += 1;
            if let Some(kind) = singular(params, y[0]) {
                return Err(stopped(kind, t, traj));
            }
            if clipped {
                traj.samples.push(Sample {
                    t,
                    x: y[0],
                    v: y[1],
                    energy: energy(y[0], y[1]),
                });
                next_out += 1;
            }
            // PI controller with β = 0.04.
            let fac = 0.9 * err.max(1e-10).powf(-0.17) * err_prev.powf(0.04);
            let fac = if rejected_last { fac.min(1.0) } else { fac };
            let proposed = step * fac.clamp(0.2, 10.0);
            // A step shortened to hit an output time does not shrink `h`.
            h = if clipped { proposed.max(h) } else { proposed };
            err_prev = err.max(1e-4);
            rejected_last = false;
        } else {
            let fac = if err.is_finite() {
                (0.9 * err.powf(-0.2)).clamp(0.1, 0.9)
            } else {
                0.1
            };
            h = step * fac;
            rejected_last = true;
            traj.rejected_steps += 1;
        }
    }
    Ok(traj)
}

/// Runge–Kutta stages `k₀..k₆`; fails if a stage lands on a singular point.
fn stages(p: &SystemParams, y: &State, k0: &State, step: f64) -> Result<[State; 7], IntegrationFailure> {
    let mut k = [[0.0; 2]; 7];
    k[0] = *k0;
    for s in 1..7 {
        let mut ys = *y;
        for (j, kj) in k.iter().enumerate().take(s) {
            ys[0] += step * A[s][j] * kj[0];
            ys[1] += step * A[s][j] * kj[1];
        }
        if let Some(kind) = singular(p, ys[0]) {
            return Err(kind);
        }
        k[s] = rhs(p, &ys);
    }
    Ok(k)
}

fn stopped(kind: IntegrationFailure, t: f64, traj: Trajectory) -> IntegrationError {
    IntegrationError::Stopped {
        kind,
        t,
        partial: Box::new(traj),
    }
}

fn initial_step(p: &SystemParams, y: &State, f0: &State, atol: f64, rtol: f64) -> f64 {
    let sc = |i: usize| atol + rtol * y[i].abs();
    let d0 = ((y[0] / sc(0)).powi(2) + (y[1] / sc(1)).powi(2)).sqrt() / 2f64.sqrt();
    let d1 = ((f0[0] / sc(0)).powi(2) + (f0[1] / sc(1)).powi(2)).sqrt() / 2f64.sqrt();
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let y1 = [y[0] + h0 * f0[0], y[1] + h0 * f0[1]];
    if singular(p, y1[0]).is_some() {
        return h0;
    }
    let f1 = rhs(p, &y1);
    let d2 = (((f1[0] - f0[0]) / sc(0)).powi(2) + ((f1[1] - f0[1]) / sc(1)).powi(2)).sqrt() / 2f64.sqrt() / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h0).min(h1)
}
