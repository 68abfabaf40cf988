//! Oracles written independently of the library: closed forms restated from
//! scratch, a fixed Gauss–Legendre rule and the isotonic oscillator in
//! Laguerre form.
#![allow(dead_code)]

use statrs::function::gamma::ln_gamma;

/// `ℰ_n = (m + ½ + g) + ½ κ'(m + g)²`, `m = 2n + 1`.
pub fn energy(n: usize, kp: f64, g: f64) -> f64 {
    let m = 2.0 * n as f64 + 1.0;
    m + 0.5 + g + 0.5 * kp * (m + g) * (m + g)
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut rule = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        rule.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    rule
}

/// Composite 20-point Gauss–Legendre over `panels` equal panels.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let rule = gauss_legendre(20);
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        total += rule.iter().map(|(x, w)| w * f(mid + 0.5 * h * x)).sum::<f64>() * 0.5 * h;
    }
    total
}

/// `ρ(u)` for the flat coordinate in which `dρ/√(1 − κ'ρ²) = du`.
pub fn rho_of_u(kp: f64, u: f64) -> f64 {
    let s = kp.abs().sqrt();
    if kp > 0.0 {
        (s * u).sin() / s
    } else if kp < 0.0 {
        (s * u).sinh() / s
    } else {
        u
    }
}

/// Upper end of the `u` range used for overlaps: the barrier for `κ' > 0`,
/// otherwise far enough that the slowest bound-state tail is negligible.
pub fn u_end(kp: f64) -> f64 {
    if kp > 0.0 {
        std::f64::consts::FRAC_PI_2 / kp.sqrt()
    } else if kp < 0.0 {
        60.0 / kp.abs().sqrt()
    } else {
        14.0
    }
}

/// `₂F₁(−n, b; c; t)` summed term by term.
pub fn gauss_polynomial(n: usize, b: f64, c: f64, t: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..n {
        let k = k as f64;
        term *= (k - n as f64) * (k + b) / ((k + 1.0) * (k + c)) * t;
        sum += term;
    }
    sum
}

/// Generalized Laguerre `L_n^{(a)}(z)` by the three-term recurrence.
pub fn laguerre(n: usize, a: f64, z: f64) -> f64 {
    let (mut l0, mut l1) = (1.0, 1.0 + a - z);
    if n == 0 {
        return l0;
    }
    for k in 1..n {
        let k = k as f64;
        let l2 = ((2.0 * k + 1.0 + a - z) * l1 - (k + a) * l0) / (k + 1.0);
        l0 = l1;
        l1 = l2;
    }
    l1
}

/// Normalized isotonic eigenfunction on `ρ > 0` with `∫Ψ² dρ = 1`:
/// `Ψ = N ρ^{g+1} e^{−ρ²/2} L_n^{(g+½)}(ρ²)`, `N² = 2 n!/Γ(n + g + 3/2)`.
pub fn isotonic_state(n: usize, g: f64, rho: f64) -> f64 {
    let ln_n2 = std::f64::consts::LN_2 + ln_gamma(n as f64 + 1.0) - ln_gamma(n as f64 + g + 1.5);
    let a = g + 0.5;
    (0.5 * ln_n2).exp() * rho.powf(g + 1.0) * (-0.5 * rho * rho).exp() * laguerre(n, a, rho * rho)
}

#[test]
fn gauss_legendre_is_exact_for_degree_39() {
    let v = integrate(|x| x.powi(39) + x.powi(38), -1.0, 1.0, 1);
    assert!((v - 2.0 / 39.0).abs() < 1e-14);
}

#[test]
fn isotonic_state_is_normalized() {
    for n in 0..4 {
        let v = integrate(|r| isotonic_state(n, 1.0, r).powi(2), 0.0, 14.0, 56);
        assert!((v - 1.0).abs() < 1e-13, "n={n} {v}");
    }
}
