//! Classical dynamics of `L = ½ m v²/(1 − κx²) − V(x)`.
//!
//! Three closed-form families solve the Euler–Lagrange equation
//!
//! ```text
//! ẍ + κxẋ²/(1 − κx²) + α²x/(1 − κx²) − (k_g/m)(1 − κx²)/x³ = 0
//! ```
//!
//! on the positive half-line: trigonometric (periodic, any `κ`),
//! hyperbolic (`κ < 0`, `E > E_b`) and the algebraic border (`κ < 0`,
//! `E = E_b`). For `k_g = 0` the trigonometric and hyperbolic families
//! degenerate to the signed `A sin(ωt + φ)` and `A sinh(Ωt + φ)`.
//!
//! Energies are physical (`H = ½ m v²/(1 − κx²) + V`); with `m = 1` they
//! coincide with the unit-mass formulas.

mod integrator;
mod period;

pub use integrator::{integrate_el, IntegrationError, IntegrationFailure, IntegratorOptions, Sample, Trajectory};
pub use period::{measure_period, PeriodError};

use crate::model::{self, ModelError, SystemParams};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Relative tolerance on `|E − E_b|` for assigning the border class.
pub const BORDER_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClassicalError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("amplitude {amplitude} is not admissible: {reason}")]
    InadmissibleAmplitude { amplitude: f64, reason: &'static str },
    #[error("frequency squared {omega2} is not positive")]
    NonPositiveFrequency { omega2: f64 },
    #[error("family requires {0}")]
    WrongKappaSign(&'static str),
    #[error("border solution is degenerate: α² = k_g κ²")]
    DegenerateBorder,
    #[error("radicand {value} of the border solution is not positive at t = {t}")]
    NonPositiveRadicand { t: f64, value: f64 },
    #[error("energy {energy} is below the potential minimum {minimum}")]
    BelowMinimum { energy: f64, minimum: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    Trig,
    Hyperbolic,
    Border,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ClassicalSolution {
    /// `x² = ((ω²A⁴ − k)sin²(ωt+φ) + k)/(ω²A²)`, `k = k_g/m`.
    Trig { amplitude: f64, phase: f64, omega: f64 },
    /// `x² = ((Ω²A⁴ + k)sinh²(Ωt+φ) + k)/(Ω²A²)`.
    Hyperbolic { amplitude: f64, phase: f64, omega: f64 },
    /// `x² = a t² + b t + c`.
    Border { a_coef: f64, b: f64, c_coef: f64 },
}

/// Position, velocity and acceleration at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub x: f64,
    pub v: f64,
    pub acc: f64,
}

/// A closed-form trajectory together with the parameters it solves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryCoeffs {
    pub solution: ClassicalSolution,
    pub params: SystemParams,
}

/// `k_g/m`: the isotonic strength seen by the unit-mass equation of motion.
fn reduced_kg(p: &SystemParams) -> f64 {
    p.k_g / p.mass
}

/// Trigonometric family with amplitude `A` and phase `φ`.
///
/// `ω² = α²/(1 − κA²) + (k_g/m)κ/A²`. At `φ = 0` the motion starts from the
/// turning point `√(k_g/m)/(ωA)`.
pub fn solve_trig(amplitude: f64, phase: f64, params: &SystemParams) -> Result<TrajectoryCoeffs, ClassicalError> {
    params.validate()?;
    check_amplitude(amplitude)?;
    let k = reduced_kg(params);
    let (a2, kappa) = (amplitude * amplitude, params.kappa);
    let d = 1.0 - kappa * a2;
    if d <= 0.0 {
        return Err(ClassicalError::InadmissibleAmplitude {
            amplitude,
            reason: "κA² must stay below 1",
        });
    }
    let omega2 = params.alpha * params.alpha / d + k * kappa / a2;
    if !(omega2 > 0.0) {
        return Err(ClassicalError::NonPositiveFrequency { omega2 });
    }
    Ok(TrajectoryCoeffs {
        solution: ClassicalSolution::Trig {
            amplitude,
            phase,
            omega: omega2.sqrt(),
        },
        params: *params,
    })
}

/// Hyperbolic family (`κ < 0`, `|κ|A² > 1`).
///
/// `Ω² = α²/(|κ|A² − 1) − (k_g/m)|κ|/A²`.
pub fn solve_hyperbolic(amplitude: f64, phase: f64, params: &SystemParams) -> Result<TrajectoryCoeffs, ClassicalError> {
    params.validate()?;
    check_amplitude(amplitude)?;
    if params.kappa >= 0.0 {
        return Err(ClassicalError::WrongKappaSign("κ < 0"));
    }
    let k = reduced_kg(params);
    let (a2, ak) = (amplitude * amplitude, params.kappa.abs());
    let d = ak * a2 - 1.0;
    if d <= 0.0 {
        return Err(ClassicalError::InadmissibleAmplitude {
            amplitude,
            reason: "|κ|A² must exceed 1",
        });
    }
    let omega2 = params.alpha * params.alpha / d - k * ak / a2;
    if !(omega2 > 0.0) {
        return Err(ClassicalError::NonPositiveFrequency { omega2 });
    }
    Ok(TrajectoryCoeffs {
        solution: ClassicalSolution::Hyperbolic {
            amplitude,
            phase,
            omega: omega2.sqrt(),
        },
        params: *params,
    })
}

/// Algebraic border solution `x = √(a t² + B t + c)` at `E = E_b` (`κ < 0`).
///
/// `a = (kκ² − α²)/κ`, `c = −(B² + 4k)κ/(4(α² − kκ²))` with `k = k_g/m`.
pub fn solve_border(b: f64, params: &SystemParams) -> Result<TrajectoryCoeffs, ClassicalError> {
    params.validate()?;
    if params.kappa >= 0.0 {
        return Err(ClassicalError::WrongKappaSign("κ < 0"));
    }
    let k = reduced_kg(params);
    let (kappa, alpha2) = (params.kappa, params.alpha * params.alpha);
    let gap = alpha2 - k * kappa * kappa;
    if gap.abs() <= 1e-14 * alpha2.max(k * kappa * kappa) {
        return Err(ClassicalError::DegenerateBorder);
    }
    Ok(TrajectoryCoeffs {
        solution: ClassicalSolution::Border {
            a_coef: (k * kappa * kappa - alpha2) / kappa,
            b,
            c_coef: -(b * b + 4.0 * k) * kappa / (4.0 * gap),
        },
        params: *params,
    })
}

fn check_amplitude(amplitude: f64) -> Result<(), ClassicalError> {
    if amplitude.is_finite() && amplitude > 0.0 {
        Ok(())
    } else {
        Err(ClassicalError::InadmissibleAmplitude {
            amplitude,
            reason: "must be finite and positive",
        })
    }
}

impl TrajectoryCoeffs {
    pub fn family(&self) -> Family {
        match self.solution {
            ClassicalSolution::Trig { .. } => Family::Trig,
            ClassicalSolution::Hyperbolic { .. } => Family::Hyperbolic,
            ClassicalSolution::Border { .. } => Family::Border,
        }
    }

    /// Angular frequency `ω` (or hyperbolic `Ω`); `None` for the border.
    pub fn omega(&self) -> Option<f64> {
        match self.solution {
            ClassicalSolution::Trig { omega, .. } | ClassicalSolution::Hyperbolic { omega, .. } => Some(omega),
            ClassicalSolution::Border { .. } => None,
        }
    }

    /// Closed-form energy.
    pub fn energy(&self) -> f64 {
        let p = &self.params;
        let k = reduced_kg(p);
        let alpha2 = p.alpha * p.alpha;
        let per_mass = match self.solution {
            ClassicalSolution::Trig { amplitude, .. } => {
                let a2 = amplitude * amplitude;
                0.5 * alpha2 * a2 / (1.0 - p.kappa * a2) + 0.5 * k / a2
            }
            ClassicalSolution::Hyperbolic { amplitude, .. } => {
                let a2 = amplitude * amplitude;
                0.5 * alpha2 * a2 / (p.kappa.abs() * a2 - 1.0) - 0.5 * k / a2
            }
            ClassicalSolution::Border { .. } => alpha2 / (2.0 * p.kappa.abs()),
        };
        p.mass * per_mass
    }

    /// Kinematic period of `x(t)` for the trigonometric family.
    ///
    /// With `k_g > 0` the motion depends on `sin²(ωt + φ)` and repeats
    /// after `π/ω`; the signed `k_g = 0` sine repeats after `2π/ω`.
    pub fn period(&self) -> Option<f64> {
        match self.solution {
            ClassicalSolution::Trig { omega, .. } if self.params.k_g > 0.0 => Some(std::f64::consts::PI / omega),
            ClassicalSolution::Trig { omega, .. } => Some(2.0 * std::f64::consts::PI / omega),
            _ => None,
        }
    }

    /// `(x_min, x_max)` of a periodic trajectory: `{√k/(ωA), A}` sorted.
    pub fn turning_points(&self) -> Option<(f64, f64)> {
        match self.solution {
            ClassicalSolution::Trig { amplitude, omega, .. } => {
                if self.params.k_g == 0.0 {
                    return Some((-amplitude, amplitude));
                }
                let inner = reduced_kg(&self.params).sqrt() / (omega * amplitude);
                Some((inner.min(amplitude), inner.max(amplitude)))
            }
            _ => None,
        }
    }

    /// Residual of the algebraic frequency–amplitude constraint, scaled by
    /// the magnitude of its terms.
    ///
    /// Trig: `κω²A⁴ + (α² − ω² − kκ²)A² + kκ`.
    /// Hyperbolic: `κΩ²A⁴ + (α² + Ω² − kκ²)A² − kκ`.
    pub fn constraint_residual(&self) -> Option<f64> {
        let p = &self.params;
        let k = reduced_kg(p);
        let alpha2 = p.alpha * p.alpha;
        let kap = p.kappa;
        let (terms, sign): ([f64; 5], f64) = match self.solution {
            ClassicalSolution::Trig { amplitude, omega, .. } => {
                let (a2, w2) = (amplitude * amplitude, omega * omega);
                (
                    [kap * w2 * a2 * a2, alpha2 * a2, -w2 * a2, -k * kap * kap * a2, k * kap],
                    1.0,
                )
            }
            ClassicalSolution::Hyperbolic { amplitude, omega, .. } => {
                let (a2, w2) = (amplitude * amplitude, omega * omega);
                (
                    [kap * w2 * a2 * a2, alpha2 * a2, w2 * a2, -k * kap * kap * a2, -k * kap],
                    1.0,
                )
            }
            ClassicalSolution::Border { .. } => return None,
        };
        let sum: f64 = terms.iter().sum::<f64>() * sign;
        let scale: f64 = terms.iter().map(|t| t.abs()).sum();
        Some(sum.abs() / scale.max(f64::MIN_POSITIVE))
    }

    /// Position at time `t`.
    pub fn position(&self, t: f64) -> Result<f64, ClassicalError> {
        self.phase_point(t).map(|s| s.x)
    }

    /// Position, velocity and acceleration from the closed form.
    ///
    /// Derivatives are taken analytically through `y = x²`:
    /// `ẋ = ẏ/(2x)`, `ẍ = (ÿ − 2ẋ²)/(2x)`.
    pub fn phase_point(&self, t: f64) -> Result<PhasePoint, ClassicalError> {
        let k = reduced_kg(&self.params);
        let (y, dy, ddy) = match self.solution {
            ClassicalSolution::Trig {
                amplitude,
                phase,
                omega,
            } => {
                let th = omega * t + phase;
                if k == 0.0 {
                    let (s, c) = th.sin_cos();
                    return Ok(PhasePoint {
                        x: amplitude * s,
                        v: amplitude * omega * c,
                        acc: -amplitude * omega * omega * s,
                    });
                }
                let a2 = amplitude * amplitude;
                let q = omega * omega * a2 * a2 - k;
                let s = th.sin();
                (
                    (q * s * s + k) / (omega * omega * a2),
                    q * (2.0 * th).sin() / (omega * a2),
                    2.0 * q * (2.0 * th).cos() / a2,
                )
            }
            ClassicalSolution::Hyperbolic {
                amplitude,
                phase,
                omega,
            } => {
                let th = omega * t + phase;
                if k == 0.0 {
                    return Ok(PhasePoint {
                        x: amplitude * th.sinh(),
                        v: amplitude * omega * th.cosh(),
                        acc: amplitude * omega * omega * th.sinh(),
                    });
                }
                let a2 = amplitude * amplitude;
                let q = omega * omega * a2 * a2 + k;
                let s = th.sinh();
                (
                    (q * s * s + k) / (omega * omega * a2),
                    q * (2.0 * th).sinh() / (omega * a2),
                    2.0 * q * (2.0 * th).cosh() / a2,
                )
            }
            ClassicalSolution::Border { a_coef, b, c_coef } => {
                (a_coef * t * t + b * t + c_coef, 2.0 * a_coef * t + b, 2.0 * a_coef)
            }
        };
        if !(y > 0.0) {
            return Err(ClassicalError::NonPositiveRadicand { t, value: y });
        }
        let x = y.sqrt();
        let v = dy / (2.0 * x);
        Ok(PhasePoint {
            x,
            v,
            acc: (ddy - 2.0 * v * v) / (2.0 * x),
        })
    }

    /// Euler–Lagrange residual at `t`, divided by `1 + |ẍ|`.
    pub fn el_residual(&self, t: f64) -> Result<f64, ClassicalError> {
        let s = self.phase_point(t)?;
        Ok(el_residual(&self.params, s.x, s.v, s.acc).abs() / (1.0 + s.acc.abs()))
    }

    /// Hamiltonian evaluated along the closed form at `t`.
    pub fn energy_at(&self, t: f64) -> Result<f64, ClassicalError> {
        let s = self.phase_point(t)?;
        Ok(hamiltonian(&self.params, s.x, s.v)?)
    }
}

/// `ẍ + κxẋ²/D + α²x/D − (k_g/m) D/x³` with `D = 1 − κx²`.
pub fn el_residual(p: &SystemParams, x: f64, v: f64, acc: f64) -> f64 {
    let d = 1.0 - p.kappa * x * x;
    acc + p.kappa * x * v * v / d + p.alpha * p.alpha * x / d - reduced_kg(p) * d / (x * x * x)
}

/// Acceleration prescribed by the Euler–Lagrange equation.
pub fn acceleration(p: &SystemParams, x: f64, v: f64) -> f64 {
    let d = 1.0 - p.kappa * x * x;
    -p.kappa * x * v * v / d - p.alpha * p.alpha * x / d + reduced_kg(p) * d / (x * x * x)
}

/// `H = ½ m v²/(1 − κx²) + V(x)`.
pub fn hamiltonian(p: &SystemParams, x: f64, v: f64) -> Result<f64, ModelError> {
    let d = model::mass_factor(x, p.kappa)?;
    if p.k_g == 0.0 && x == 0.0 {
        return Ok(0.5 * p.mass * v * v / d);
    }
    Ok(0.5 * p.mass * v * v / d + model::potential(x, p)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MotionKind {
    PeriodicPositiveKappa,
    PeriodicNegativeKappa,
    Unbounded,
    Border,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MotionClass {
    pub kind: MotionKind,
    pub energy: f64,
    pub e_bound: Option<f64>,
}

/// Classifies the motion at energy `E` with the default border tolerance.
pub fn classify(energy: f64, params: &SystemParams) -> Result<MotionClass, ClassicalError> {
    classify_with_tol(energy, params, BORDER_TOL)
}

pub fn classify_with_tol(energy: f64, params: &SystemParams, border_tol: f64) -> Result<MotionClass, ClassicalError> {
    params.validate()?;
    let e_bound = params.e_bound();
    let minimum = model::potential_minimum(params);
    // Without a minimum the plateau is an infimum that is never attained.
    let floor = minimum.map_or(e_bound.unwrap_or(0.0), |(_, v)| v);
    if energy < floor || (minimum.is_none() && energy <= floor) {
        return Err(ClassicalError::BelowMinimum { energy, minimum: floor });
    }
    let kind = match e_bound {
        None => MotionKind::PeriodicPositiveKappa,
        Some(eb) => {
            if (energy - eb).abs() <= border_tol * eb.abs().max(1.0) {
                MotionKind::Border
            } else if energy < eb {
                MotionKind::PeriodicNegativeKappa
            } else {
                MotionKind::Unbounded
            }
        }
    };
    Ok(MotionClass { kind, energy, e_bound })
}

/// Amplitude of the trigonometric orbit with energy `E`, taking the outer
/// turning point. Solves `½α²A²/(1 − κA²) + ½k/A² = E/m` for `A²`.
pub fn trig_amplitude_for_energy(energy: f64, params: &SystemParams) -> Result<f64, ClassicalError> {
    let k = reduced_kg(params);
    let e = energy / params.mass;
    let alpha2 = params.alpha * params.alpha;
    // (α² + 2κe) s² − (2e + kκ) s + k = 0 in s = A², after clearing 1 − κs.
    let qa = alpha2 + 2.0 * params.kappa * e;
    let qb = -(2.0 * e + k * params.kappa);
    let qc = k;
    if qa <= 0.0 {
        return Err(ClassicalError::NonPositiveFrequency { omega2: qa });
    }
    let disc = qb * qb - 4.0 * qa * qc;
    if disc < 0.0 {
        return Err(ClassicalError::BelowMinimum {
            energy,
            minimum: f64::NAN,
        });
    }
    let s = (-qb + disc.sqrt()) / (2.0 * qa);
    Ok(s.sqrt())
}
