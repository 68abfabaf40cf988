//! Physical parameters, the dimensionless reduction used by the quantum
//! problem, and the potential `V(x) = ½ m α² x²/(1 − κx²) + ½ k_g/x²`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Relative margin kept from singular points (`x = 0`, `κx² = 1`).
pub const DOMAIN_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("x = {x} is outside the domain: {reason}")]
    DomainViolation { x: f64, reason: &'static str },
}

/// Mass, frequency coefficient, deformation, isotonic strength and action unit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub mass: f64,
    pub alpha: f64,
    pub kappa: f64,
    pub k_g: f64,
    pub hbar: f64,
}

impl Default for SystemParams {
    fn default() -> Self {
        Self {
            mass: 1.0,
            alpha: 1.0,
            kappa: 0.0,
            k_g: 0.0,
            hbar: 1.0,
        }
    }
}

impl SystemParams {
    pub fn new(mass: f64, alpha: f64, kappa: f64, k_g: f64, hbar: f64) -> Result<Self, ModelError> {
        let p = Self {
            mass,
            alpha,
            kappa,
            k_g,
            hbar,
        };
        p.validate()?;
        Ok(p)
    }

    /// Unit mass, `α` and `ħ`.
    pub fn unit(kappa: f64, k_g: f64) -> Result<Self, ModelError> {
        Self::new(1.0, 1.0, kappa, k_g, 1.0)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        positive("mass", self.mass)?;
        positive("alpha", self.alpha)?;
        positive("hbar", self.hbar)?;
        if !self.kappa.is_finite() {
            return Err(ModelError::InvalidParameter {
                name: "kappa",
                value: self.kappa,
                reason: "must be finite",
            });
        }
        if !(self.k_g.is_finite() && self.k_g >= 0.0) {
            return Err(ModelError::InvalidParameter {
                name: "k_g",
                value: self.k_g,
                reason: "must be finite and nonnegative",
            });
        }
        Ok(())
    }

    /// Bound-motion threshold `E_b = m α²/(2|κ|)`, present only for `κ < 0`.
    pub fn e_bound(&self) -> Option<f64> {
        (self.kappa < 0.0).then(|| self.mass * self.alpha * self.alpha / (2.0 * self.kappa.abs()))
    }

    pub fn domain(&self) -> Domain {
        Domain::classical(self.kappa)
    }
}

fn positive(name: &'static str, value: f64) -> Result<(), ModelError> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(ModelError::InvalidParameter {
            name,
            value,
            reason: "must be finite and positive",
        })
    }
}

/// `μ` (inverse length), `κ' = κ/μ²` and the isotonic index `g`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionlessParams {
    pub mu: f64,
    pub kappa_prime: f64,
    pub g: f64,
}

impl DimensionlessParams {
    /// Dimensionless parameters with `μ = 1`, for working directly in `ρ`.
    pub fn new(kappa_prime: f64, g: f64) -> Result<Self, ModelError> {
        if !kappa_prime.is_finite() {
            return Err(ModelError::InvalidParameter {
                name: "kappa_prime",
                value: kappa_prime,
                reason: "must be finite",
            });
        }
        if !(g.is_finite() && g >= 0.0) {
            return Err(ModelError::InvalidParameter {
                name: "g",
                value: g,
                reason: "must be finite and nonnegative",
            });
        }
        Ok(Self {
            mu: 1.0,
            kappa_prime,
            g,
        })
    }

    /// `g(g + 1)`, the coefficient of the centrifugal-like term.
    pub fn g_product(&self) -> f64 {
        self.g * (self.g + 1.0)
    }
}

/// Reduces physical parameters to `(μ, κ', g)`.
///
/// `μ² = mα/ħ`, `κ' = κ/μ²`, and `g` is the nonnegative root of
/// `g(g+1) = m k_g/ħ²`.
pub fn nondimensionalize(p: &SystemParams) -> Result<DimensionlessParams, ModelError> {
    p.validate()?;
    let mu2 = p.mass * p.alpha / p.hbar;
    let q = p.mass * p.k_g / (p.hbar * p.hbar);
    // 2q/(1 + √(1+4q)) is the positive root without cancellation for small q.
    let g = 2.0 * q / (1.0 + (1.0 + 4.0 * q).sqrt());
    Ok(DimensionlessParams {
        mu: mu2.sqrt(),
        kappa_prime: p.kappa / mu2,
        g,
    })
}

/// `E = ħα ℰ`.
pub fn energy_to_physical(p: &SystemParams, energy_dimless: f64) -> f64 {
    p.hbar * p.alpha * energy_dimless
}

/// `ℰ = E/(ħα)`.
pub fn energy_to_dimensionless(p: &SystemParams, energy: f64) -> f64 {
    energy / (p.hbar * p.alpha)
}

/// Interval on which the dynamics is defined.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub lower: f64,
    pub upper: f64,
    /// `1/√κ` for `κ > 0`.
    pub singular_point: Option<f64>,
}

impl Domain {
    /// Symmetric classical domain `x² < 1/κ` (or the whole line for `κ ≤ 0`).
    pub fn classical(kappa: f64) -> Self {
        if kappa > 0.0 {
            let b = 1.0 / kappa.sqrt();
            Self {
                lower: -b,
                upper: b,
                singular_point: Some(b),
            }
        } else {
            Self {
                lower: f64::NEG_INFINITY,
                upper: f64::INFINITY,
                singular_point: None,
            }
        }
    }

    /// Quantum half-line `[0, 1/√κ]` or `[0, ∞)`.
    pub fn half_line(kappa: f64) -> Self {
        let c = Self::classical(kappa);
        Self { lower: 0.0, ..c }
    }

    /// Strict interior test, honoring [`DOMAIN_EPS`] at the singular points.
    pub fn contains(&self, x: f64) -> bool {
        if !x.is_finite() || x < self.lower || x > self.upper {
            return false;
        }
        match self.singular_point {
            Some(b) => x.abs() < b * (1.0 - DOMAIN_EPS),
            None => true,
        }
    }
}

/// `1 − κx²`, rejecting points at or beyond the barrier.
pub fn mass_factor(x: f64, kappa: f64) -> Result<f64, ModelError> {
    let d = 1.0 - kappa * x * x;
    if kappa > 0.0 && d <= 2.0 * DOMAIN_EPS {
        return Err(ModelError::DomainViolation {
            x,
            reason: "beyond the barrier x² < 1/κ",
        });
    }
    Ok(d)
}

/// Potential energy `½ m α² x²/(1 − κx²) + ½ k_g/x²`.
pub fn potential(x: f64, p: &SystemParams) -> Result<f64, ModelError> {
    if !x.is_finite() {
        return Err(ModelError::DomainViolation {
            x,
            reason: "not finite",
        });
    }
    if x.abs() <= f64::MIN_POSITIVE.sqrt() {
        return Err(ModelError::DomainViolation {
            x,
            reason: "isotonic singularity at x = 0",
        });
    }
    let d = mass_factor(x, p.kappa)?;
    let x2 = x * x;
    Ok(0.5 * p.mass * p.alpha * p.alpha * x2 / d + 0.5 * p.k_g / x2)
}

/// Location and value of the minimum of the potential on `x > 0`, if attained.
///
/// Stationarity gives `x*² = √k_g/(√m α + κ√k_g)`. For `k_g = 0` the infimum
/// is `0` at the origin. For `κ < 0` with `√m α ≤ |κ|√k_g` the potential
/// decreases monotonically to its plateau and no minimum exists.
pub fn potential_minimum(p: &SystemParams) -> Option<(f64, f64)> {
    if p.k_g == 0.0 {
        return Some((0.0, 0.0));
    }
    let sk = p.k_g.sqrt();
    let denom = p.mass.sqrt() * p.alpha + p.kappa * sk;
    if denom <= 0.0 {
        return None;
    }
    let x = (sk / denom).sqrt();
    potential(x, p).ok().map(|v| (x, v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_params_reduce_trivially() {
        let d = nondimensionalize(&SystemParams::unit(0.1, 0.0).unwrap()).unwrap();
        assert_eq!(d.mu, 1.0);
        assert!((d.kappa_prime - 0.1).abs() < 1e-15);
        assert_eq!(d.g, 0.0);

        let d = nondimensionalize(&SystemParams::unit(0.0, 2.0).unwrap()).unwrap();
        assert!((d.g - 1.0).abs() < 1e-15);
    }

    #[test]
    fn mixed_params_back_substitute() {
        let p = SystemParams::new(2.0, 3.0, -0.5, 0.75, 1.0).unwrap();
        let d = nondimensionalize(&p).unwrap();
        assert!((d.mu * d.mu - 6.0).abs() < 1e-14);
        assert!((d.kappa_prime + 1.0 / 12.0).abs() < 1e-15);
        // g(g+1) = m k_g / ħ² = 1.5, quadratic solved independently
        let g_ref = (-1.0 + (1.0f64 + 6.0).sqrt()) / 2.0;
        assert!((d.g - g_ref).abs() < 1e-14);
        assert!((d.g * (d.g + 1.0) - 1.5).abs() < 1e-14);
        assert!((d.mu * d.mu * p.hbar - p.mass * p.alpha).abs() < 1e-14);
        assert!((d.kappa_prime * d.mu * d.mu - p.kappa).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(SystemParams::new(0.0, 1.0, 0.0, 0.0, 1.0).is_err());
        assert!(SystemParams::new(1.0, -1.0, 0.0, 0.0, 1.0).is_err());
        assert!(SystemParams::new(1.0, 1.0, 0.0, 0.0, 0.0).is_err());
        assert!(SystemParams::new(1.0, 1.0, 0.0, -1.0, 1.0).is_err());
        assert!(SystemParams::new(1.0, 1.0, f64::NAN, 0.0, 1.0).is_err());
        let bad = SystemParams {
            mass: -1.0,
            ..SystemParams::default()
        };
        assert!(nondimensionalize(&bad).is_err());
    }

    #[test]
    fn potential_values() {
        let p = SystemParams::unit(0.0, 1.0).unwrap();
        assert!((potential(1.0, &p).unwrap() - 1.0).abs() < 1e-15);

        let p = SystemParams::unit(-0.25, 1.0).unwrap();
        let harmonic: f64 = 0.5 * 4.0 / (1.0 + 0.25 * 4.0);
        let isotonic = 0.5 * 1.0 / 4.0;
        assert!((harmonic + isotonic - 1.125).abs() < 1e-15);
        assert!((potential(2.0, &p).unwrap() - 1.125).abs() < 1e-15);
    }

    #[test]
    fn potential_domain_errors() {
        let p = SystemParams::unit(0.5, 1.0).unwrap();
        assert!(matches!(potential(0.0, &p), Err(ModelError::DomainViolation { .. })));
        let b = 1.0 / 0.5f64.sqrt();
        assert!(potential(b, &p).is_err());
        assert!(potential(b * 1.1, &p).is_err());
        assert!(potential(-b, &p).is_err());
    }

    #[test]
    fn potential_diverges_at_barrier() {
        let p = SystemParams::unit(0.5, 1.0).unwrap();
        let b = 1.0 / 0.5f64.sqrt();
        let mut last = 0.0;
        for k in 3..10 {
            let x = b * (1.0 - 10f64.powi(-k));
            let v = potential(x, &p).unwrap();
            assert!(v.is_finite() && v > last);
            last = v;
        }
        assert!(last > 1e8);
    }

    #[test]
    fn negative_kappa_plateau() {
        let p = SystemParams::new(2.0, 1.5, -0.4, 1.0, 1.0).unwrap();
        let plateau = p.mass * p.alpha * p.alpha / (2.0 * 0.4);
        assert_eq!(p.e_bound(), Some(plateau));
        let v = potential(1e7, &p).unwrap();
        assert!((v - plateau).abs() < 1e-10 * plateau);
    }

    #[test]
    fn kappa_to_zero_is_uniform_on_compacts() {
        let base = SystemParams::unit(0.0, 1.0).unwrap();
        for &k in &[1e-3, -1e-3, 1e-6, -1e-6] {
            let p = SystemParams { kappa: k, ..base };
            let mut worst: f64 = 0.0;
            for i in 1..=200 {
                let x = 3.0 * i as f64 / 200.0;
                let dv = (potential(x, &p).unwrap() - potential(x, &base).unwrap()).abs();
                worst = worst.max(dv / k.abs());
            }
            // |V_κ − V_0| ≤ C|κ| with C ≈ ½ X⁴/(1 − |κ|X²)
            assert!(worst < 0.5 * 81.0 * 1.01, "C = {worst}");
        }
    }

    #[test]
    fn minimum_is_stationary() {
        for &(k, kg) in &[(0.3, 1.0), (-0.3, 1.0), (0.0, 2.0), (-0.2, 4.0)] {
            let p = SystemParams::unit(k, kg).unwrap();
            let (x, v) = potential_minimum(&p).unwrap();
            let h = 1e-5;
            let left = potential(x - h, &p).unwrap();
            let right = potential(x + h, &p).unwrap();
            assert!(left >= v && right >= v);
        }
        // |κ|√k_g ≥ α: monotone decrease to the plateau
        let p = SystemParams::unit(-1.0, 4.0).unwrap();
        assert!(potential_minimum(&p).is_none());
    }

    #[test]
    fn domain_rules() {
        let d = Domain::classical(0.25);
        assert_eq!(d.singular_point, Some(2.0));
        assert!(d.contains(1.999));
        assert!(!d.contains(2.0));
        let h = Domain::half_line(-1.0);
        assert_eq!(h.upper, f64::INFINITY);
        assert!(!h.contains(-1.0));
        assert!(h.contains(1e9));
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn potential_is_even(x in 0.01f64..3.0, k in -2.0f64..0.1, kg in 0.0f64..5.0) {
                let p = SystemParams::unit(k, kg).unwrap();
                let a = potential(x, &p).unwrap();
                let b = potential(-x, &p).unwrap();
                prop_assert_eq!(a, b);
            }

            #[test]
            fn reduction_invariants(m in 0.1f64..10.0, a in 0.1f64..10.0, h in 0.1f64..3.0,
                                    k in -2.0f64..2.0, kg in 0.0f64..10.0) {
                let p = SystemParams::new(m, a, k, kg, h).unwrap();
                let d = nondimensionalize(&p).unwrap();
                prop_assert!((d.mu * d.mu * h - m * a).abs() <= 1e-13 * m * a);
                prop_assert!((d.kappa_prime * d.mu * d.mu - k).abs() <= 1e-13 * (1.0 + k.abs()));
                let q = m * kg / (h * h);
                prop_assert!((d.g * (d.g + 1.0) - q).abs() <= 1e-12 * (1.0 + q));
                prop_assert!(d.g >= 0.0);
            }
        }
    }
}
