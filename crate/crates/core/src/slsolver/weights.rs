//! The flat coordinate `u` and the weight functions of the radial problem.
//!
//! With `s = √|κ'|` the map is `ρ = sin(su)/s` for `κ' > 0`, `ρ = sinh(su)/s`
//! for `κ' < 0` and `ρ = u` for `κ' = 0`. In every case the curved measure
//! `dρ/√(1 − κ'ρ²)` becomes `du`.

use crate::model::DimensionlessParams;

/// Weight functions `w(ρ)` accepted by [`super::quad_weighted`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weight {
    /// `dμ = dρ/√(1 − κ'ρ²)`.
    Measure,
    /// Plain `dρ`.
    Lebesgue,
    /// `r(ρ) = ρ^{2(g+1)} (1 − κ'ρ²)^{1/κ' − 1/2}`, the S-L weight.
    SlR,
    /// `p(ρ) = ρ^{2(g+1)} (1 − κ'ρ²)^{1/κ' + 1/2}`, the S-L coefficient.
    SlP,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlatMap {
    pub kappa_prime: f64,
    s: f64,
}

impl FlatMap {
    pub fn new(kappa_prime: f64) -> Self {
        Self {
            kappa_prime,
            s: kappa_prime.abs().sqrt(),
        }
    }

    pub fn from_params(p: &DimensionlessParams) -> Self {
        Self::new(p.kappa_prime)
    }

    /// Upper end of the `u` domain: `π/(2s)` for `κ' > 0`, otherwise `∞`.
    pub fn u_max(&self) -> f64 {
        if self.kappa_prime > 0.0 {
            std::f64::consts::FRAC_PI_2 / self.s
        } else {
            f64::INFINITY
        }
    }

    pub fn rho(&self, u: f64) -> f64 {
        if self.kappa_prime > 0.0 {
            (self.s * u).sin() / self.s
        } else if self.kappa_prime < 0.0 {
            (self.s * u).sinh() / self.s
        } else {
            u
        }
    }

    pub fn u_of_rho(&self, rho: f64) -> f64 {
        if self.kappa_prime > 0.0 {
            (self.s * rho).min(1.0).asin() / self.s
        } else if self.kappa_prime < 0.0 {
            (self.s * rho).asinh() / self.s
        } else {
            rho
        }
    }

    /// `ln ρ(u)`, accurate for large `u` when `κ' < 0`.
    pub fn ln_rho(&self, u: f64) -> f64 {
        if self.kappa_prime < 0.0 && self.s * u > 20.0 {
            let su = self.s * u;
            su - std::f64::consts::LN_2 - self.s.ln() + (-(-2.0 * su).exp()).ln_1p()
        } else {
            self.rho(u).ln()
        }
    }

    /// `ln D(u)` where `D = 1 − κ'ρ² = cos²(su)` or `cosh²(su)`.
    pub fn ln_d(&self, u: f64) -> f64 {
        let su = self.s * u;
        if self.kappa_prime > 0.0 {
            // Rounding can carry su past π/2 at the barrier itself.
            let c = su.cos();
            if c <= 0.0 {
                f64::NEG_INFINITY
            } else {
                2.0 * c.ln()
            }
        } else if self.kappa_prime < 0.0 {
            // ln cosh x = x + ln(1 + e^{−2x}) − ln 2
            2.0 * (su + (-2.0 * su).exp().ln_1p() - std::f64::consts::LN_2)
        } else {
            0.0
        }
    }

    /// `ρ²/D` written without cancellation: `tan²(su)/s²` or `tanh²(su)/s²`.
    pub fn rho2_over_d(&self, u: f64) -> f64 {
        let su = self.s * u;
        if self.kappa_prime > 0.0 {
            let t = su.tan() / self.s;
            t * t
        } else if self.kappa_prime < 0.0 {
            let t = su.tanh() / self.s;
            t * t
        } else {
            u * u
        }
    }

    /// `1/ρ²` without overflow issues at moderate `u`.
    pub fn inv_rho2(&self, u: f64) -> f64 {
        let r = self.rho(u);
        1.0 / (r * r)
    }

    /// Height of the confining plateau `½(1 − κ')/|κ'|` for `κ' < 0`.
    pub fn plateau(&self) -> Option<f64> {
        (self.kappa_prime < 0.0).then(|| 0.5 * (1.0 - self.kappa_prime) / self.kappa_prime.abs())
    }
}

/// `ln q(u)` with `q = ρ^{2(g+1)} D^{1/κ'}` (`ρ^{2(g+1)} e^{−ρ²}` at `κ' = 0`).
/// This is the weight of the S-L problem written in the flat variable.
pub fn ln_q(map: &FlatMap, g: f64, u: f64) -> f64 {
    let lr = map.ln_rho(u);
    let tail = if map.kappa_prime == 0.0 {
        -u * u
    } else {
        map.ln_d(u) / map.kappa_prime
    };
    2.0 * (g + 1.0) * lr + tail
}

/// `w(ρ(u))·(dρ/du)`, the factor that turns `∫ f w dρ` into `∫ f(ρ(u)) · (·) du`.
pub fn weight_in_u(weight: Weight, map: &FlatMap, g: f64, u: f64) -> f64 {
    match weight {
        Weight::Measure => 1.0,
        // dρ/du = √D
        Weight::Lebesgue => (0.5 * map.ln_d(u)).exp(),
        // r·√D = ρ^{2(g+1)} D^{1/κ'}
        Weight::SlR => ln_q(map, g, u).exp(),
        Weight::SlP => (ln_q(map, g, u) + map.ln_d(u)).exp(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_round_trip() {
        for &kp in &[0.3, -0.2, 0.0] {
            let m = FlatMap::new(kp);
            for &rho in &[0.01, 0.4, 1.2] {
                if kp > 0.0 && kp * rho * rho >= 1.0 {
                    continue;
                }
                let u = m.u_of_rho(rho);
                assert!((m.rho(u) - rho).abs() < 1e-14);
                let d = 1.0 - kp * rho * rho;
                assert!((m.ln_d(u) - d.ln()).abs() < 1e-13);
                assert!((m.rho2_over_d(u) - rho * rho / d).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn large_argument_logs_are_finite() {
        let m = FlatMap::new(-0.1);
        let u = 3000.0;
        assert!(m.ln_rho(u).is_finite());
        assert!(m.ln_d(u).is_finite());
        let su = m.s * u;
        assert!((m.ln_d(u) - 2.0 * (su - std::f64::consts::LN_2)).abs() < 1e-9);
    }

    #[test]
    fn weight_matches_definition() {
        let (kp, g) = (0.25, 0.7);
        let m = FlatMap::new(kp);
        let rho: f64 = 1.1;
        let u = m.u_of_rho(rho);
        let d = 1.0 - kp * rho * rho;
        let r = rho.powf(2.0 * (g + 1.0)) * d.powf(1.0 / kp - 0.5);
        let drho_du = d.sqrt();
        assert!((weight_in_u(Weight::SlR, &m, g, u) - r * drho_du).abs() < 1e-12);
        let p = rho.powf(2.0 * (g + 1.0)) * d.powf(1.0 / kp + 0.5);
        assert!((weight_in_u(Weight::SlP, &m, g, u) - p * drho_du).abs() < 1e-12);
    }
}
