//! Numerical oracle for the quantum problem: weighted quadrature over the
//! curved measure and a discretized Sturm–Liouville eigensolver.

mod discretize;
mod eigen;
mod quad;
mod weights;

pub use discretize::{default_box, discretize, flat_potential, Formulation, SlDiscretization, MIN_CELLS};
pub use eigen::{count_below, lowest_eigenpairs, Eigenpair, SymTridiagonal};
pub use quad::{gk15, integrate, QuadError, QuadResult};
pub use weights::{ln_q, weight_in_u, FlatMap, Weight};

use crate::model::DimensionlessParams;
use thiserror::Error;

pub const DEFAULT_QUAD_TOL: f64 = 1e-10;
pub const RESIDUAL_TOL: f64 = 1e-8;
/// Box truncation criterion for the half-line: tail weight of the highest
/// requested bound state.
pub const TAIL_TOL: f64 = 1e-12;

const MAX_INTERVALS: usize = 4000;
/// Largest `s·u` visited by the shell quadrature (`ρ ≈ e^{s u}/2s`).
const MAX_SU: f64 = 300.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SlError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("{requested} levels requested but only {available} are resolvable")]
    TooManyLevels { requested: usize, available: usize },
    #[error("eigensolver failure: {0}")]
    EigenFailure(String),
    #[error("box-size search did not converge: {0}")]
    BoxSearch(String),
}

/// `∫ f(ρ) w(ρ) dρ` over the full domain of the problem.
///
/// The integral is computed in the flat variable `u` (`ρ = sin(su)/s` for
/// `κ' > 0`, `ρ = sinh(su)/s` for `κ' < 0`), which removes the algebraic
/// endpoint singularity at the barrier. The domain is covered by shells of
/// width `min(1, 1/s)` in `u`, each integrated adaptively. The sum stops at
/// the barrier or once three consecutive shells are negligible against the
/// accumulated `Σ|shell|`. On the half-line it reports
/// [`QuadError::Divergent`] on sustained shell growth past the bulk, on
/// overflow, or when the shells never become negligible.
pub fn quad_weighted<F: Fn(f64) -> f64>(
    f: F,
    weight: Weight,
    params: &DimensionlessParams,
    tol: f64,
) -> Result<f64, QuadError> {
    let map = FlatMap::from_params(params);
    let g = params.g;
    let integrand = |u: f64| {
        if u <= 0.0 {
            return 0.0;
        }
        let w = weight_in_u(weight, &map, g, u);
        if w == 0.0 {
            0.0
        } else {
            f(map.rho(u)) * w
        }
    };
    let s = params.kappa_prime.abs().sqrt();
    let width = if s > 1.0 { 1.0 / s } else { 1.0 };
    let (u_end, finite) = if params.kappa_prime > 0.0 {
        (map.u_max(), true)
    } else if s > 0.0 {
        (MAX_SU / s, false)
    } else {
        (60.0, false)
    };
    let mut total = 0.0;
    let mut total_abs = 0.0;
    let mut growth = 0;
    let mut quiet = 0;
    let mut prev = 0.0_f64;
    let mut a = 0.0;
    while a < u_end {
        let b = (a + width).min(u_end);
        let shell = match integrate(integrand, a, b, 0.1 * tol * total_abs, tol, MAX_INTERVALS) {
            Ok(r) => r.value,
            Err(QuadError::NonFinite { .. }) if !finite => {
                return Err(QuadError::Divergent {
                    partial: total,
                    reached: a,
                })
            }
            Err(e) => return Err(e),
        };
        total += shell;
        total_abs += shell.abs();
        if !total_abs.is_finite() {
            return Err(QuadError::Divergent {
                partial: total,
                reached: b,
            });
        }
        growth = if shell.abs() > prev.abs() { growth + 1 } else { 0 };
        // Sustained growth past the bulk of the integrand means the tail diverges.
        if !finite && s > 0.0 && growth >= 6 && s * b > 6.0 {
            return Err(QuadError::Divergent {
                partial: total,
                reached: b,
            });
        }
        if shell.abs() <= tol * total_abs {
            quiet += 1;
            if quiet >= 3 {
                return Ok(total);
            }
        } else {
            quiet = 0;
        }
        prev = shell;
        a = b;
    }
    if finite {
        Ok(total)
    } else {
        Err(QuadError::Divergent {
            partial: total,
            reached: a,
        })
    }
}

/// One extrapolated eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergedLevel {
    pub n: usize,
    pub coarse: f64,
    pub fine: f64,
    /// Richardson value `(4 fine − coarse)/3`.
    pub extrapolated: f64,
    /// `|extrapolated − fine|`.
    pub error_estimate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelStudy {
    pub formulation: Formulation,
    pub cells_fine: usize,
    pub box_length: f64,
    pub levels: Vec<ConvergedLevel>,
    /// Fine-grid discretization, kept for eigenvector access.
    pub fine: SlDiscretization,
    pub fine_pairs: Vec<Eigenpair>,
}

/// Picks the computational box. For `κ' > 0` this is the whole domain; on the
/// half-line the box grows by 1.5× until the highest requested state below
/// the continuum carries tail weight `< TAIL_TOL`.
pub fn choose_box(
    params: &DimensionlessParams,
    count: usize,
    cells: usize,
    formulation: Formulation,
) -> Result<f64, SlError> {
    if params.kappa_prime > 0.0 {
        return Ok(FlatMap::from_params(params).u_max());
    }
    let plateau = FlatMap::from_params(params).plateau();
    let mut length = default_box(params);
    let probe_cells = cells.clamp(MIN_CELLS, 2048);
    for _ in 0..40 {
        let d = discretize(params, probe_cells, formulation, Some(length))?;
        let want = count.min(d.stiffness.len() / 4).max(1);
        let levels = d.lowest(want)?;
        let bound: Vec<&(f64, Eigenpair)> = levels.iter().filter(|(e, _)| plateau.is_none_or(|p| *e < p)).collect();
        let Some((_, pair)) = bound.last() else {
            return Ok(length);
        };
        let tail = d.tail_weight(&d.psi_samples(pair));
        if tail < TAIL_TOL {
            return Ok(length);
        }
        length *= 1.5;
    }
    Err(SlError::BoxSearch(format!(
        "tail weight still above {TAIL_TOL} at box length {length}"
    )))
}

/// The `count` lowest levels on grids of `cells` and `cells/2` cells in a
/// common box, with Richardson extrapolation.
pub fn solve_levels(
    params: &DimensionlessParams,
    count: usize,
    cells: usize,
    formulation: Formulation,
    box_length: Option<f64>,
) -> Result<LevelStudy, SlError> {
    if cells < 2 * MIN_CELLS || !cells.is_multiple_of(2) {
        return Err(SlError::InvalidGrid(format!(
            "{cells} cells: need an even count of at least {}",
            2 * MIN_CELLS
        )));
    }
    let length = match box_length {
        Some(l) => l,
        None => choose_box(params, count, cells, formulation)?,
    };
    let coarse = discretize(params, cells / 2, formulation, Some(length))?.lowest(count)?;
    let fine_d = discretize(params, cells, formulation, Some(length))?;
    let fine = fine_d.lowest(count)?;
    let levels = coarse
        .iter()
        .zip(&fine)
        .enumerate()
        .map(|(n, ((c, _), (f, _)))| {
            let extrapolated = (4.0 * f - c) / 3.0;
            ConvergedLevel {
                n,
                coarse: *c,
                fine: *f,
                extrapolated,
                error_estimate: (extrapolated - f).abs(),
            }
        })
        .collect();
    Ok(LevelStudy {
        formulation,
        cells_fine: cells,
        box_length: length,
        levels,
        fine_pairs: fine.into_iter().map(|(_, p)| p).collect(),
        fine: fine_d,
    })
}
