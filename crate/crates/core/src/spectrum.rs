//! Closed-form bound states of the quantum problem.
//!
//! Dimensionless levels are `ℰ_n = (m + ½ + g) + ½κ'(m + g)²` with
//! `m = 2n + 1`, and the radial functions are
//! `Ψ_n(ρ) = N ρ^{g+1} (1 − κ'ρ²)^{1/(2κ')} ₂F₁(−n, b; g + 3/2; κ'ρ²)`,
//! with `b = n + 1 + g + 1/κ'`. At `κ' = 0` the deformation factor becomes
//! `e^{−ρ²/2}` and the polynomial becomes `₁F₁(−n; g + 3/2; ρ²)`.

use crate::hypergeo::{self, ConfluentPolynomial, HypergeoError, HypergeoPolynomial, OdeResidual};
use crate::model::{self, DimensionlessParams, ModelError, SystemParams};
use crate::slsolver::{self, QuadError, Weight};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Margin used when deciding the strict inequality `n < N_κ`.
const STRICT_MARGIN: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectrumError {
    #[error("level n = {n} is not normalizable: need n < N_κ = {bound}")]
    NormalizabilityViolation { n: usize, bound: f64 },
    #[error("1 − κ' + 2κ'ℰ = {radicand} < 0: the parameters a, b are complex")]
    ComplexRoot { radicand: f64 },
    #[error("κ' = 0 has no Gauss form; use the confluent path")]
    ZeroKappa,
    #[error("κ' = {0} ≥ 0: the spectrum is infinite")]
    InfiniteSpectrum(f64),
    #[error("normalization failed: {0}")]
    Quadrature(#[from] QuadError),
    #[error(transparent)]
    Hypergeo(#[from] HypergeoError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// `ℰ_n` from the closed form, with no admissibility check. `n` may be
/// fractional, which is how the maximum of the level curve is studied.
pub fn energy_formula(n: f64, kappa_prime: f64, g: f64) -> f64 {
    let m = 2.0 * n + 1.0;
    (m + 0.5 + g) + 0.5 * kappa_prime * (m + g) * (m + g)
}

/// `N_κ = (1/(2|κ'|))(1 − (g+1)|κ'|)` for `κ' < 0`.
pub fn normalizability_bound(kappa_prime: f64, g: f64) -> Option<f64> {
    (kappa_prime < 0.0).then(|| {
        let k = kappa_prime.abs();
        (1.0 - (g + 1.0) * k) / (2.0 * k)
    })
}

/// Whether level `n` satisfies `n < N_κ` (always true for `κ' ≥ 0`).
///
/// Tested in the equivalent form `1 − |κ'|(2n + 1 + g) > 0`, which is also
/// the condition `1 + κ'(m + g) > 0` that selects the decaying branch.
pub fn is_normalizable(n: usize, kappa_prime: f64, g: f64) -> bool {
    kappa_prime >= 0.0 || 1.0 + kappa_prime * (2.0 * n as f64 + 1.0 + g) > STRICT_MARGIN
}

pub fn energy_level(n: usize, kappa_prime: f64, g: f64) -> Result<f64, SpectrumError> {
    if !is_normalizable(n, kappa_prime, g) {
        return Err(SpectrumError::NormalizabilityViolation {
            n,
            bound: normalizability_bound(kappa_prime, g).unwrap_or(f64::INFINITY),
        });
    }
    Ok(energy_formula(n as f64, kappa_prime, g))
}

/// Number of admissible levels `n = 0..n_κ` for `κ' < 0`.
pub fn count_bound_states(kappa_prime: f64, g: f64) -> Result<usize, SpectrumError> {
    if kappa_prime >= 0.0 {
        return Err(SpectrumError::InfiniteSpectrum(kappa_prime));
    }
    let bound = normalizability_bound(kappa_prime, g).expect("κ' < 0");
    if bound <= 0.0 {
        return Ok(0);
    }
    let mut count = bound.ceil() as usize + 1;
    while count > 0 && !is_normalizable(count - 1, kappa_prime, g) {
        count -= 1;
    }
    Ok(count)
}

/// `ℰ_{n+1} − ℰ_n = 2(1 + κ'(2n + 2 + g))`.
pub fn level_gap(n: usize, kappa_prime: f64, g: f64) -> f64 {
    2.0 * (1.0 + kappa_prime * (2.0 * n as f64 + 2.0 + g))
}

/// Abscissa of the maximum of `ℰ` as a function of continuous `n` (`κ' < 0`).
/// It coincides with `N_κ`.
pub fn energy_maximum_point(kappa_prime: f64, g: f64) -> Option<f64> {
    (kappa_prime < 0.0).then(|| (-1.0 / kappa_prime - 1.0 - g) / 2.0)
}

/// Parameters of the Gauss equation obeyed by the polynomial factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HypergeoParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub kappa_prime: f64,
    pub energy: f64,
}

/// `a = ½(1 + g + (1 + √Δ)/κ')`, `b = ½(1 + g + (1 − √Δ)/κ')`, `c = g + 3/2` with
/// `Δ = 1 − κ' + 2κ'ℰ` and the nonnegative principal root.
pub fn hypergeo_params(energy: f64, kappa_prime: f64, g: f64) -> Result<HypergeoParams, SpectrumError> {
    if kappa_prime == 0.0 {
        return Err(SpectrumError::ZeroKappa);
    }
    let radicand = 1.0 - kappa_prime + 2.0 * kappa_prime * energy;
    if radicand < 0.0 {
        return Err(SpectrumError::ComplexRoot { radicand });
    }
    let root = radicand.sqrt();
    Ok(HypergeoParams {
        a: 0.5 * (1.0 + g + (1.0 + root) / kappa_prime),
        b: 0.5 * (1.0 + g + (1.0 - root) / kappa_prime),
        c: g + 1.5,
        kappa_prime,
        energy,
    })
}

impl HypergeoParams {
    /// Relabels `(a, b)` so that `a` is the terminating parameter.
    ///
    /// At `ℰ = ℰ_n` the principal root is `√Δ = 1 + κ'(m + g)` whenever the
    /// level is normalizable, for either sign of `κ'`, and then the displayed
    /// `b` equals `−n`. `₂F₁` is symmetric in its upper parameters, so the
    /// swap changes nothing but the naming.
    pub fn resolve_branch(&self) -> HypergeoParams {
        HypergeoParams {
            a: self.b,
            b: self.a,
            ..*self
        }
    }
}

/// Which closed form to use for the second upper parameter of `P_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum BConvention {
    /// `n + 1 + g + 1/κ'`, fixed by `a + b = 1 + g + 1/κ'`.
    #[default]
    Derived,
    /// `2(n + 1 + g + 1/κ')`, as printed alongside the wave functions.
    Printed,
}

pub fn b_kappa_n(n: usize, kappa_prime: f64, g: f64, convention: BConvention) -> f64 {
    let b = n as f64 + 1.0 + g + 1.0 / kappa_prime;
    match convention {
        BConvention::Derived => b,
        BConvention::Printed => 2.0 * b,
    }
}

/// Residual of the Gauss equation with `(a, b, c)` from `hypergeo_params(ℰ_n)`
/// for the polynomial built with the chosen `b` convention.
pub fn quantization_residual(
    n: usize,
    kappa_prime: f64,
    g: f64,
    convention: BConvention,
) -> Result<OdeResidual, SpectrumError> {
    let e = energy_level(n, kappa_prime, g)?;
    let hp = hypergeo_params(e, kappa_prime, g)?.resolve_branch();
    let poly = hypergeo::build(n, b_kappa_n(n, kappa_prime, g, convention), hp.c)?;
    let grid = ode_grid(kappa_prime);
    Ok(hypergeo::verify_ode(&poly, hp.a, hp.b, hp.c, &grid))
}

/// Sample points in `t = κ'ρ²` covering the physical range.
fn ode_grid(kappa_prime: f64) -> Vec<f64> {
    let (lo, hi) = if kappa_prime > 0.0 { (0.0, 0.999) } else { (-4.0, 0.0) };
    (0..=40).map(|i| lo + (hi - lo) * i as f64 / 40.0).collect()
}

/// Polynomial factor of a bound state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StatePolynomial {
    /// `₂F₁(−n, b; c; κ'ρ²)`.
    Gauss(HypergeoPolynomial),
    /// `₁F₁(−n; c; ρ²)` at `κ' = 0`.
    Confluent(ConfluentPolynomial),
}

impl StatePolynomial {
    fn coeffs(&self) -> &[f64] {
        match self {
            StatePolynomial::Gauss(p) => p.coeffs(),
            StatePolynomial::Confluent(p) => p.coeffs(),
        }
    }
}

/// `(ln|P(t)|, sign)`, switching to the reversed polynomial in `1/t` for
/// `|t| > 1` so that large arguments do not overflow.
fn ln_abs_poly(coeffs: &[f64], t: f64) -> (f64, f64) {
    let n = coeffs.len() - 1;
    let (value, log_shift) = if t.abs() <= 1.0 {
        (coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c), 0.0)
    } else {
        let r = 1.0 / t;
        (coeffs.iter().fold(0.0, |acc, &c| acc * r + c), n as f64 * t.abs().ln())
    };
    let sign = if t.abs() > 1.0 && n % 2 == 1 && t < 0.0 {
        -value.signum()
    } else {
        value.signum()
    };
    (value.abs().ln() + log_shift, sign)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundState {
    pub n: usize,
    pub m_index: usize,
    pub energy_dimless: f64,
    /// `E_n = ħα ℰ_n`.
    pub energy_physical: f64,
    pub polynomial: StatePolynomial,
    /// `N_n` such that `∫ Ψ_n(x)² dx/√(1 − κx²) = 1`.
    pub norm: f64,
    pub kappa_prime: f64,
    pub g: f64,
    pub mu: f64,
}

impl BoundState {
    /// Builds and normalizes level `n`. `energy_unit` is `ħα`.
    pub fn new(params: &DimensionlessParams, n: usize, energy_unit: f64) -> Result<Self, SpectrumError> {
        Self::with_tolerance(params, n, energy_unit, slsolver::DEFAULT_QUAD_TOL)
    }

    pub fn for_system(p: &SystemParams, n: usize) -> Result<Self, SpectrumError> {
        let dp = model::nondimensionalize(p)?;
        Self::new(&dp, n, p.hbar * p.alpha)
    }

    pub fn with_tolerance(
        params: &DimensionlessParams,
        n: usize,
        energy_unit: f64,
        tol: f64,
    ) -> Result<Self, SpectrumError> {
        let mut state = Self::unnormalized(params, n, energy_unit)?;
        state.norm = state.normalize(tol)?;
        Ok(state)
    }

    /// The state with `norm = 1`; `normalize` computes the true constant.
    pub fn unnormalized(params: &DimensionlessParams, n: usize, energy_unit: f64) -> Result<Self, SpectrumError> {
        let (kp, g) = (params.kappa_prime, params.g);
        let energy = energy_level(n, kp, g)?;
        let c = g + 1.5;
        let polynomial = if kp == 0.0 {
            StatePolynomial::Confluent(hypergeo::build_confluent(n, c)?)
        } else {
            StatePolynomial::Gauss(hypergeo::build(n, b_kappa_n(n, kp, g, BConvention::Derived), c)?)
        };
        Ok(Self {
            n,
            m_index: 2 * n + 1,
            energy_dimless: energy,
            energy_physical: energy * energy_unit,
            polynomial,
            norm: 1.0,
            kappa_prime: kp,
            g,
            mu: params.mu,
        })
    }

    /// Unnormalized `ρ^{g+1} D^{1/(2κ')} P(κ'ρ²)`, evaluated through logarithms.
    /// Returns 0 on or beyond the barrier.
    pub fn shape(&self, rho: f64) -> f64 {
        let kp = self.kappa_prime;
        if rho <= 0.0 {
            return 0.0;
        }
        let (ln_factor, arg) = if kp == 0.0 {
            (-0.5 * rho * rho, rho * rho)
        } else {
            let t = kp * rho * rho;
            if t >= 1.0 {
                return 0.0;
            }
            ((-t).ln_1p() / (2.0 * kp), t)
        };
        let (ln_p, sign) = ln_abs_poly(self.polynomial.coeffs(), arg);
        if sign == 0.0 {
            return 0.0;
        }
        sign * ((self.g + 1.0) * rho.ln() + ln_factor + ln_p).exp()
    }

    /// `N_n` for the measure `dx/√(1 − κx²)`: `N² = μ / ∫ shape² dρ/√(1 − κ'ρ²)`.
    pub fn normalize(&self, tol: f64) -> Result<f64, SpectrumError> {
        let params = DimensionlessParams {
            mu: self.mu,
            kappa_prime: self.kappa_prime,
            g: self.g,
        };
        let integral = slsolver::quad_weighted(
            |r| {
                let v = self.shape(r);
                v * v
            },
            Weight::Measure,
            &params,
            tol,
        )?;
        Ok((self.mu / integral).sqrt())
    }

    fn check_x(&self, x: f64) -> Result<f64, SpectrumError> {
        if !(x > 0.0 && x.is_finite()) {
            return Err(ModelError::DomainViolation {
                x,
                reason: "wave functions are defined for x > 0",
            }
            .into());
        }
        let rho = self.mu * x;
        if self.kappa_prime > 0.0 && self.kappa_prime * rho * rho >= 1.0 {
            return Err(ModelError::DomainViolation {
                x,
                reason: "x lies on or beyond the barrier 1/√κ",
            }
            .into());
        }
        Ok(rho)
    }

    /// Normalized `Ψ_n(x)`.
    pub fn wavefunction(&self, x: f64) -> Result<f64, SpectrumError> {
        let rho = self.check_x(x)?;
        Ok(self.norm * self.shape(rho))
    }

    /// `Ψ_n` in the variable `ρ`, normalized to `∫ Ψ² dρ/√(1 − κ'ρ²) = 1`.
    pub fn wavefunction_rho(&self, rho: f64) -> f64 {
        self.norm / self.mu.sqrt() * self.shape(rho)
    }

    /// `∫ Ψ_n Ψ_k dμ` in `ρ`, as a check of orthonormality.
    pub fn overlap(&self, other: &BoundState, tol: f64) -> Result<f64, SpectrumError> {
        let params = DimensionlessParams {
            mu: self.mu,
            kappa_prime: self.kappa_prime,
            g: self.g,
        };
        Ok(slsolver::quad_weighted(
            |r| self.wavefunction_rho(r) * other.wavefunction_rho(r),
            Weight::Measure,
            &params,
            tol,
        )?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSummary {
    pub levels: Vec<BoundState>,
    /// True iff `κ' < 0`.
    pub finite: bool,
    /// Greatest admissible `n` when the spectrum is finite.
    pub n_max: Option<usize>,
    pub n_kappa: Option<f64>,
    /// `E_{n+1} − E_n` in physical units.
    pub gaps: Vec<f64>,
    /// Location and value of the maximum of `ℰ(n)` over continuous `n`.
    pub energy_maximum: Option<(f64, f64)>,
}

/// Up to `n_request` lowest levels (all admissible ones if fewer exist).
pub fn spectrum_summary(p: &SystemParams, n_request: usize) -> Result<SpectrumSummary, SpectrumError> {
    let dp = model::nondimensionalize(p)?;
    spectrum_summary_dimless(&dp, p.hbar * p.alpha, n_request)
}

pub fn spectrum_summary_dimless(
    dp: &DimensionlessParams,
    energy_unit: f64,
    n_request: usize,
) -> Result<SpectrumSummary, SpectrumError> {
    let (kp, g) = (dp.kappa_prime, dp.g);
    let finite = kp < 0.0;
    let available = if finite { count_bound_states(kp, g)? } else { usize::MAX };
    let count = n_request.min(available);
    let levels = (0..count)
        .map(|n| BoundState::new(dp, n, energy_unit))
        .collect::<Result<Vec<_>, _>>()?;
    let gaps = levels
        .windows(2)
        .map(|w| w[1].energy_physical - w[0].energy_physical)
        .collect();
    Ok(SpectrumSummary {
        levels,
        finite,
        n_max: (finite && available > 0).then(|| available - 1),
        n_kappa: normalizability_bound(kp, g),
        gaps,
        energy_maximum: energy_maximum_point(kp, g).map(|n| (n, energy_formula(n, kp, g))),
    })
}
