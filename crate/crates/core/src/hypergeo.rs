//! Terminating Gauss series `₂F₁(−n, b; c; t)` as explicit polynomials.
//!
//! Coefficients come from the term-ratio recurrence
//! `c_{k+1}/c_k = (k − n)(b + k)/((c + k)(k + 1))`, so no factorials are
//! formed. The confluent `₁F₁(−n; c; z)` used at `κ' = 0` is built the same
//! way with the `(b + k)` factor dropped.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported degree.
pub const MAX_DEGREE: usize = 200;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HypergeoError {
    #[error("c = {0} must be positive")]
    NonPositiveC(f64),
    #[error("degree {0} exceeds the supported maximum {MAX_DEGREE}")]
    DegreeTooLarge(usize),
    #[error("parameter {name} = {value} is not finite")]
    NonFinite { name: &'static str, value: f64 },
    #[error("coefficient {index} overflowed")]
    Overflow { index: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypergeoPolynomial {
    degree: usize,
    b: f64,
    c: f64,
    coeffs: Vec<f64>,
}

/// `₁F₁(−n; c; z)`, the `κ' → 0` limit of the Gauss polynomial in `z = t/κ'`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfluentPolynomial {
    degree: usize,
    c: f64,
    coeffs: Vec<f64>,
}

fn check_inputs(n: usize, c: f64) -> Result<(), HypergeoError> {
    if n > MAX_DEGREE {
        return Err(HypergeoError::DegreeTooLarge(n));
    }
    if !c.is_finite() {
        return Err(HypergeoError::NonFinite { name: "c", value: c });
    }
    if c <= 0.0 {
        return Err(HypergeoError::NonPositiveC(c));
    }
    Ok(())
}

fn recurrence(n: usize, c: f64, extra: impl Fn(f64) -> f64) -> Result<Vec<f64>, HypergeoError> {
    let mut coeffs = Vec::with_capacity(n + 1);
    coeffs.push(1.0);
    for k in 0..n {
        let kf = k as f64;
        let next = coeffs[k] * (kf - n as f64) * extra(kf) / ((c + kf) * (kf + 1.0));
        if !next.is_finite() {
            return Err(HypergeoError::Overflow { index: k + 1 });
        }
        coeffs.push(next);
    }
    Ok(coeffs)
}

/// Builds `₂F₁(−n, b; c; t)`.
pub fn build(n: usize, b: f64, c: f64) -> Result<HypergeoPolynomial, HypergeoError> {
    check_inputs(n, c)?;
    if !b.is_finite() {
        return Err(HypergeoError::NonFinite { name: "b", value: b });
    }
    let coeffs = recurrence(n, c, |k| b + k)?;
    Ok(HypergeoPolynomial {
        degree: n,
        b,
        c,
        coeffs,
    })
}

/// Builds `₁F₁(−n; c; z)`.
pub fn build_confluent(n: usize, c: f64) -> Result<ConfluentPolynomial, HypergeoError> {
    check_inputs(n, c)?;
    let coeffs = recurrence(n, c, |_| 1.0)?;
    Ok(ConfluentPolynomial { degree: n, c, coeffs })
}

/// Value together with first and second derivatives, by Horner's scheme.
fn horner(coeffs: &[f64], t: f64) -> (f64, f64, f64) {
    let (mut p, mut dp, mut ddp) = (0.0, 0.0, 0.0);
    for &a in coeffs.iter().rev() {
        ddp = ddp * t + 2.0 * dp;
        dp = dp * t + p;
        p = p * t + a;
    }
    (p, dp, ddp)
}

impl HypergeoPolynomial {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// Coefficients of `t⁰ … tⁿ`.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &a| acc * t + a)
    }

    /// `(w, w', w'')` at `t`, differentiating the coefficient list exactly.
    pub fn eval_with_derivatives(&self, t: f64) -> (f64, f64, f64) {
        horner(&self.coeffs, t)
    }

    /// Coefficients rescaled to the variable `z = t/s`: `d_k = c_k sᵏ`.
    pub fn rescaled(&self, s: f64) -> Vec<f64> {
        let mut scale = 1.0;
        self.coeffs
            .iter()
            .map(|&a| {
                let d = a * scale;
                scale *= s;
                d
            })
            .collect()
    }
}

impl ConfluentPolynomial {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn eval(&self, z: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &a| acc * z + a)
    }

    pub fn eval_with_derivatives(&self, z: f64) -> (f64, f64, f64) {
        horner(&self.coeffs, z)
    }
}

/// Maximum residual of an ODE over a grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OdeResidual {
    /// `max |residual|`.
    pub max_abs: f64,
    /// `max |residual| / max(1, scale)` pointwise, where `scale` is the same
    /// expression evaluated with `|coefficients|` at `|t|`, i.e. the size of
    /// the rounding error the evaluation can carry.
    pub max_scaled: f64,
}

impl OdeResidual {
    fn accumulate(&mut self, terms: [f64; 3], scale: f64) {
        let r: f64 = terms.iter().sum();
        self.max_abs = self.max_abs.max(r.abs());
        self.max_scaled = self.max_scaled.max(r.abs() / scale.max(1.0));
    }
}

fn abs_horner(coeffs: &[f64], t: f64) -> (f64, f64, f64) {
    let abs: Vec<f64> = coeffs.iter().map(|c| c.abs()).collect();
    horner(&abs, t.abs())
}

/// Residual of `t(1 − t)w'' + [c − (1 + a + b)t]w' − ab w = 0` for `w = p`.
pub fn verify_ode(p: &HypergeoPolynomial, a: f64, b: f64, c: f64, grid: &[f64]) -> OdeResidual {
    let mut out = OdeResidual {
        max_abs: 0.0,
        max_scaled: 0.0,
    };
    for &t in grid {
        let (w, dw, ddw) = p.eval_with_derivatives(t);
        let (aw, adw, addw) = abs_horner(&p.coeffs, t);
        let (f2, f1, f0) = (t * (1.0 - t), c - (1.0 + a + b) * t, -a * b);
        let scale = f2.abs() * addw + f1.abs() * adw + f0.abs() * aw;
        out.accumulate([f2 * ddw, f1 * dw, f0 * w], scale);
    }
    out
}

/// Residual of Kummer's equation `z w'' + (c − z) w' − a w = 0` for `w = p`.
pub fn verify_kummer_ode(p: &ConfluentPolynomial, a: f64, c: f64, grid: &[f64]) -> OdeResidual {
    let mut out = OdeResidual {
        max_abs: 0.0,
        max_scaled: 0.0,
    };
    for &z in grid {
        let (w, dw, ddw) = p.eval_with_derivatives(z);
        let (aw, adw, addw) = abs_horner(&p.coeffs, z);
        let scale = z.abs() * addw + (c - z).abs() * adw + a.abs() * aw;
        out.accumulate([z * ddw, (c - z) * dw, -a * w], scale);
    }
    out
}
