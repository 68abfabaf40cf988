//! Finite-dimensional versions of the radial problem in the flat variable `u`.
//!
//! * `FlatVariable`: `H = −½ d²/du² + V(u)` with
//!   `V = ½(1 − κ')ρ²/D + ½g(g+1)/ρ²`, discretized by linear finite elements
//!   (consistent mass). The pencil is a Galerkin projection, so eigenvalues
//!   are upper bounds that decrease monotonically under nested refinement.
//! * `DirectSl`: the Sturm–Liouville form `−(q w')' = λ q w` with
//!   `q = ρ^{2(g+1)} D^{1/κ'}` and `λ = 2ℰ − 2g − 3 − κ'(1+g)²`, discretized by
//!   cell-centred finite volumes and symmetrized by `Q^{1/2}`.

use super::eigen::{lowest_eigenpairs, Eigenpair, SymTridiagonal};
use super::weights::{ln_q, FlatMap};
use super::SlError;
use crate::model::DimensionlessParams;

pub const MIN_CELLS: usize = 64;

const GL6_X: [f64; 6] = [
    -0.932469514203152,
    -0.661209386466265,
    -0.238619186083197,
    0.238619186083197,
    0.661209386466265,
    0.932469514203152,
];
const GL6_W: [f64; 6] = [
    0.171324492379170,
    0.360761573048139,
    0.467913934572691,
    0.467913934572691,
    0.360761573048139,
    0.171324492379170,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Formulation {
    FlatVariable,
    DirectSl,
}

impl Formulation {
    pub fn name(self) -> &'static str {
        match self {
            Formulation::FlatVariable => "flat_variable",
            Formulation::DirectSl => "direct_sl",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlDiscretization {
    pub formulation: Formulation,
    pub params: DimensionlessParams,
    pub map: FlatMap,
    pub cells: usize,
    /// Right end of the computational interval in `u`.
    pub box_length: f64,
    pub h: f64,
    /// `u` coordinates of the unknowns (interior nodes or cell centres).
    pub nodes: Vec<f64>,
    pub stiffness: SymTridiagonal,
    pub mass: SymTridiagonal,
}

/// Effective potential of the flat-variable Hamiltonian.
pub fn flat_potential(map: &FlatMap, g: f64, u: f64) -> f64 {
    let kp = map.kappa_prime;
    0.5 * (1.0 - kp) * map.rho2_over_d(u) + 0.5 * g * (g + 1.0) * map.inv_rho2(u)
}

/// Default computational interval: the full domain for `κ' > 0`, a first
/// guess for the truncated half-line otherwise.
pub fn default_box(params: &DimensionlessParams) -> f64 {
    let map = FlatMap::from_params(params);
    if params.kappa_prime > 0.0 {
        map.u_max()
    } else if params.kappa_prime < 0.0 {
        (4.0 / params.kappa_prime.abs().sqrt()).max(12.0)
    } else {
        12.0
    }
}

pub fn discretize(
    params: &DimensionlessParams,
    cells: usize,
    formulation: Formulation,
    box_length: Option<f64>,
) -> Result<SlDiscretization, SlError> {
    if cells < MIN_CELLS {
        return Err(SlError::InvalidGrid(format!(
            "{cells} cells requested, at least {MIN_CELLS} required"
        )));
    }
    if !(params.g >= 0.0 && params.g.is_finite() && params.kappa_prime.is_finite()) {
        return Err(SlError::InvalidGrid(format!(
            "unsupported parameters κ' = {}, g = {}",
            params.kappa_prime, params.g
        )));
    }
    let map = FlatMap::from_params(params);
    let u_max = map.u_max();
    let box_length = box_length.unwrap_or_else(|| default_box(params));
    if !(box_length > 0.0 && box_length.is_finite()) || box_length > u_max * (1.0 + 1e-14) {
        return Err(SlError::InvalidGrid(format!(
            "box length {box_length} lies outside the domain (u < {u_max})"
        )));
    }
    let box_length = box_length.min(u_max);
    let h = box_length / cells as f64;
    let (nodes, stiffness, mass) = match formulation {
        Formulation::FlatVariable => assemble_fem(&map, params.g, cells, h),
        Formulation::DirectSl => assemble_fv(&map, params.g, cells, h),
    };
    Ok(SlDiscretization {
        formulation,
        params: *params,
        map,
        cells,
        box_length,
        h,
        nodes,
        stiffness,
        mass,
    })
}

fn assemble_fem(map: &FlatMap, g: f64, cells: usize, h: f64) -> (Vec<f64>, SymTridiagonal, SymTridiagonal) {
    // Unknowns at interior nodes u_j = j h, j = 1..cells−1 (Dirichlet at both ends).
    let n = cells - 1;
    let mut kd = vec![0.0; n];
    let mut ko = vec![0.0; n.saturating_sub(1)];
    let mut md = vec![0.0; n];
    let mut mo = vec![0.0; n.saturating_sub(1)];
    for e in 0..cells {
        let (a, b) = (e as f64 * h, (e + 1) as f64 * h);
        // Local ∫V φ_L², ∫V φ_L φ_R, ∫V φ_R².
        let (mut vll, mut vlr, mut vrr) = (0.0, 0.0, 0.0);
        for (x, w) in GL6_X.iter().zip(GL6_W.iter()) {
            let t = 0.5 * (1.0 + x);
            let u = a + t * (b - a);
            let v = flat_potential(map, g, u) * w * 0.5 * h;
            let (pl, pr) = (1.0 - t, t);
            vll += v * pl * pl;
            vlr += v * pl * pr;
            vrr += v * pr * pr;
        }
        let kin = 0.5 / h;
        let local_k = [[kin + vll, -kin + vlr], [-kin + vlr, kin + vrr]];
        let local_m = [[h / 3.0, h / 6.0], [h / 6.0, h / 3.0]];
        // Global unknown index of local node: node j → j − 1.
        let idx = [e.checked_sub(1), if e < n { Some(e) } else { None }];
        for p in 0..2 {
            let Some(i) = idx[p] else { continue };
            kd[i] += local_k[p][p];
            md[i] += local_m[p][p];
        }
        if let (Some(i), Some(_)) = (idx[0], idx[1]) {
            ko[i] += local_k[0][1];
            mo[i] += local_m[0][1];
        }
    }
    let nodes = (1..cells).map(|j| j as f64 * h).collect();
    (nodes, SymTridiagonal::new(kd, ko), SymTridiagonal::new(md, mo))
}

fn assemble_fv(map: &FlatMap, g: f64, cells: usize, h: f64) -> (Vec<f64>, SymTridiagonal, SymTridiagonal) {
    let nodes: Vec<f64> = (0..cells).map(|i| (i as f64 + 0.5) * h).collect();
    let lq_c: Vec<f64> = nodes.iter().map(|&u| ln_q(map, g, u)).collect();
    // Face i sits at u = i h; q vanishes at u = 0 and at the barrier, and a
    // zero-flux condition is used at a truncation point.
    let lq_f: Vec<f64> = (0..=cells)
        .map(|i| {
            if i == 0 || i == cells {
                f64::NEG_INFINITY
            } else {
                ln_q(map, g, i as f64 * h)
            }
        })
        .collect();
    let inv_h2 = 1.0 / (h * h);
    let diag = (0..cells)
        .map(|i| ((lq_f[i] - lq_c[i]).exp() + (lq_f[i + 1] - lq_c[i]).exp()) * inv_h2)
        .collect();
    let off = (0..cells - 1)
        .map(|i| -(lq_f[i + 1] - 0.5 * (lq_c[i] + lq_c[i + 1])).exp() * inv_h2)
        .collect();
    (nodes, SymTridiagonal::new(diag, off), SymTridiagonal::identity(cells))
}

impl SlDiscretization {
    /// Dimensionless energy corresponding to a pencil eigenvalue.
    pub fn energy_of(&self, lambda: f64) -> f64 {
        match self.formulation {
            Formulation::FlatVariable => lambda,
            Formulation::DirectSl => {
                let (kp, g) = (self.params.kappa_prime, self.params.g);
                0.5 * (lambda + 2.0 * g + 3.0 + kp * (1.0 + g) * (1.0 + g))
            }
        }
    }

    /// Samples of `Ψ(u_i)` normalized to `∫Ψ² du = 1` (up to discretization).
    pub fn psi_samples(&self, pair: &Eigenpair) -> Vec<f64> {
        match self.formulation {
            Formulation::FlatVariable => pair.vector.clone(),
            Formulation::DirectSl => {
                let s = 1.0 / self.h.sqrt();
                pair.vector.iter().map(|v| v * s).collect()
            }
        }
    }

    /// Piecewise-linear interpolant of the samples, with the boundary values
    /// `Ψ(0) = 0` and `Ψ(L) = 0`.
    pub fn interpolate(&self, samples: &[f64], u: f64) -> f64 {
        if !(u > 0.0 && u < self.box_length) {
            return 0.0;
        }
        let (xs, ys) = self.knots(samples);
        let j = xs.partition_point(|&x| x <= u).clamp(1, xs.len() - 1);
        let (x0, x1) = (xs[j - 1], xs[j]);
        let t = (u - x0) / (x1 - x0);
        ys[j - 1] * (1.0 - t) + ys[j] * t
    }

    fn knots(&self, samples: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let mut xs = Vec::with_capacity(samples.len() + 2);
        let mut ys = Vec::with_capacity(samples.len() + 2);
        xs.push(0.0);
        ys.push(0.0);
        xs.extend_from_slice(&self.nodes);
        ys.extend_from_slice(samples);
        xs.push(self.box_length);
        ys.push(0.0);
        (xs, ys)
    }

    /// `∫ a b du` of two piecewise-linear interpolants, integrated exactly.
    pub fn interpolant_inner(&self, a: &[f64], b: &[f64]) -> f64 {
        let (xs, ya) = self.knots(a);
        let (_, yb) = self.knots(b);
        let mut s = 0.0;
        for j in 1..xs.len() {
            let w = xs[j] - xs[j - 1];
            let (a0, a1, b0, b1) = (ya[j - 1], ya[j], yb[j - 1], yb[j]);
            s += w * (2.0 * a0 * b0 + a0 * b1 + a1 * b0 + 2.0 * a1 * b1) / 6.0;
        }
        s
    }

    /// `|xᵀKy − yᵀKx| / (‖K‖‖x‖‖y‖)` maximized over a few fixed probe vectors.
    /// The pencil is stored symmetric, so this checks the assembled matvec.
    pub fn symmetry_defect(&self) -> f64 {
        let n = self.stiffness.len();
        let scale = self
            .stiffness
            .diag
            .iter()
            .chain(self.stiffness.off.iter())
            .fold(0.0_f64, |a, &b| a.max(b.abs()));
        let probe = |seed: f64| -> Vec<f64> { (0..n).map(|i| (seed * (i as f64 + 1.0)).sin()).collect() };
        let mut worst = 0.0_f64;
        for (a, b) in [(0.37, 1.91), (2.3, 0.71), (1.13, 3.7)] {
            let (x, y) = (probe(a), probe(b));
            let lhs = super::eigen::dot(&x, &self.stiffness.matvec(&y));
            let rhs = super::eigen::dot(&y, &self.stiffness.matvec(&x));
            let nx = super::eigen::dot(&x, &x).sqrt();
            let ny = super::eigen::dot(&y, &y).sqrt();
            worst = worst.max((lhs - rhs).abs() / (scale * nx * ny));
        }
        worst
    }

    /// Fraction of `∫Ψ² du` carried by the outermost tenth of the box.
    pub fn tail_weight(&self, samples: &[f64]) -> f64 {
        let cut = 0.9 * self.box_length;
        let mut total = 0.0;
        let mut tail = 0.0;
        for (&u, &y) in self.nodes.iter().zip(samples) {
            total += y * y;
            if u >= cut {
                tail += y * y;
            }
        }
        if total == 0.0 {
            0.0
        } else {
            tail / total
        }
    }

    /// `count` lowest levels as (energy, eigenpair).
    pub fn lowest(&self, count: usize) -> Result<Vec<(f64, Eigenpair)>, SlError> {
        let available = self.stiffness.len() / 4;
        if count > available {
            return Err(SlError::TooManyLevels {
                requested: count,
                available,
            });
        }
        let pairs = lowest_eigenpairs(&self.stiffness, &self.mass, count)?;
        for p in &pairs {
            if !(p.residual <= super::RESIDUAL_TOL * p.value.abs().max(1.0)) {
                return Err(SlError::EigenFailure(format!(
                    "residual {} exceeds tolerance at λ = {}",
                    p.residual, p.value
                )));
            }
        }
        Ok(pairs.into_iter().map(|p| (self.energy_of(p.value), p)).collect())
    }
}
