//! Lowest eigenpairs of a symmetric tridiagonal pencil `K v = λ M v`
//! with `M` positive definite.

use super::SlError;

#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    /// `off[i]` couples rows `i` and `i + 1`.
    pub off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert_eq!(off.len() + 1, diag.len().max(1));
        Self { diag, off }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            diag: vec![1.0; n],
            off: vec![0.0; n.saturating_sub(1)],
        }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut s = self.diag[i] * x[i];
            if i > 0 {
                s += self.off[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                s += self.off[i] * x[i + 1];
            }
            y[i] = s;
        }
        y
    }

    pub fn inner(&self, x: &[f64], y: &[f64]) -> f64 {
        dot(&self.matvec(x), y)
    }

    fn shifted(&self, m: &SymTridiagonal, sigma: f64) -> SymTridiagonal {
        SymTridiagonal {
            diag: self.diag.iter().zip(&m.diag).map(|(k, m)| k - sigma * m).collect(),
            off: self.off.iter().zip(&m.off).map(|(k, m)| k - sigma * m).collect(),
        }
    }

    fn scale(&self) -> f64 {
        self.diag
            .iter()
            .chain(self.off.iter())
            .fold(0.0_f64, |a, &b| a.max(b.abs()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Eigenpair {
    pub value: f64,
    /// Normalized so that `vᵀ M v = 1`.
    pub vector: Vec<f64>,
    /// `‖K v − λ M v‖ / ‖v‖`.
    pub residual: f64,
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Number of eigenvalues of the pencil strictly below `sigma` (Sylvester
/// inertia of the LDLᵀ factorization of `K − σM`).
pub fn count_below(k: &SymTridiagonal, m: &SymTridiagonal, sigma: f64) -> usize {
    let tiny = f64::MIN_POSITIVE.sqrt() * (k.scale() + sigma.abs() * m.scale()).max(1.0);
    let mut count = 0;
    let mut d = 0.0;
    for i in 0..k.len() {
        let a = k.diag[i] - sigma * m.diag[i];
        d = if i == 0 {
            a
        } else {
            let b = k.off[i - 1] - sigma * m.off[i - 1];
            a - b * b / d
        };
        if d == 0.0 {
            d = -tiny;
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// Solves `A x = rhs` for tridiagonal `A` by Gaussian elimination with
/// partial pivoting. Exact zero pivots are perturbed, which is what inverse
/// iteration needs at a converged shift.
fn solve_pivoted(a: &SymTridiagonal, rhs: &[f64]) -> Vec<f64> {
    let n = a.len();
    let mut r = rhs.to_vec();
    let tiny = f64::EPSILON * a.scale().max(f64::MIN_POSITIVE);
    // Upper factor rows: entries at columns i, i+1, i+2.
    let mut u0 = vec![0.0; n];
    let mut u1 = vec![0.0; n];
    let mut u2 = vec![0.0; n];
    let (mut p0, mut p1, mut p2) = (a.diag[0], if n > 1 { a.off[0] } else { 0.0 }, 0.0);
    for i in 0..n.saturating_sub(1) {
        let mut q0 = a.off[i];
        let mut q1 = a.diag[i + 1];
        let mut q2 = if i + 2 < n { a.off[i + 1] } else { 0.0 };
        if q0.abs() > p0.abs() {
            std::mem::swap(&mut p0, &mut q0);
            std::mem::swap(&mut p1, &mut q1);
            std::mem::swap(&mut p2, &mut q2);
            r.swap(i, i + 1);
        }
        if p0 == 0.0 {
            p0 = tiny;
        }
        let f = q0 / p0;
        q1 -= f * p1;
        q2 -= f * p2;
        r[i + 1] -= f * r[i];
        u0[i] = p0;
        u1[i] = p1;
        u2[i] = p2;
        p0 = q1;
        p1 = q2;
        p2 = 0.0;
    }
    u0[n - 1] = if p0 == 0.0 { tiny } else { p0 };
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = r[i];
        if i + 1 < n {
            s -= u1[i] * x[i + 1];
        }
        if i + 2 < n {
            s -= u2[i] * x[i + 2];
        }
        x[i] = s / u0[i];
    }
    x
}

fn bracket(k: &SymTridiagonal, m: &SymTridiagonal, count: usize) -> Result<(f64, f64), SlError> {
    let mut lo = -1.0;
    let mut guard = 0;
    while count_below(k, m, lo) > 0 {
        lo = 2.0 * lo - 1.0;
        guard += 1;
        if guard > 2000 || !lo.is_finite() {
            return Err(SlError::EigenFailure("no lower bound for the spectrum".into()));
        }
    }
    let mut hi = 1.0;
    guard = 0;
    while count_below(k, m, hi) < count {
        hi = 2.0 * hi + 1.0;
        guard += 1;
        if guard > 2000 || !hi.is_finite() {
            return Err(SlError::EigenFailure("no upper bound for the requested levels".into()));
        }
    }
    Ok((lo, hi))
}

/// The `count` lowest eigenpairs, sorted ascending and M-orthonormal.
pub fn lowest_eigenpairs(k: &SymTridiagonal, m: &SymTridiagonal, count: usize) -> Result<Vec<Eigenpair>, SlError> {
    let n = k.len();
    if count == 0 {
        return Ok(Vec::new());
    }
    if count > n {
        return Err(SlError::TooManyLevels {
            requested: count,
            available: n,
        });
    }
    let (lo0, hi0) = bracket(k, m, count)?;
    let mut out: Vec<Eigenpair> = Vec::with_capacity(count);
    for j in 0..count {
        let (mut lo, mut hi) = (lo0, hi0);
        if let Some(prev) = out.last() {
            lo = lo.max(prev.value);
        }
        for _ in 0..300 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if count_below(k, m, mid) <= j {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) {
                break;
            }
        }
        let lambda = 0.5 * (lo + hi);
        let vector = inverse_iteration(k, m, lambda, &out, j)?;
        let kv = k.matvec(&vector);
        let mv = m.matvec(&vector);
        let res: Vec<f64> = kv.iter().zip(&mv).map(|(a, b)| a - lambda * b).collect();
        let residual = norm(&res) / norm(&vector);
        out.push(Eigenpair {
            value: lambda,
            vector,
            residual,
        });
    }
    Ok(out)
}

fn inverse_iteration(
    k: &SymTridiagonal,
    m: &SymTridiagonal,
    lambda: f64,
    previous: &[Eigenpair],
    seed: usize,
) -> Result<Vec<f64>, SlError> {
    let n = k.len();
    let a = k.shifted(m, lambda);
    let mut x: Vec<f64> = (0..n)
        .map(|i| 1.0 + 0.37 * ((i * (seed + 3)) as f64 * 0.618).sin())
        .collect();
    for _ in 0..4 {
        let rhs = m.matvec(&x);
        let mut y = solve_pivoted(&a, &rhs);
        for p in previous {
            let c = m.inner(&p.vector, &y);
            for (yi, pi) in y.iter_mut().zip(&p.vector) {
                *yi -= c * pi;
            }
        }
        let nm = m.inner(&y, &y);
        if !(nm.is_finite() && nm > 0.0) {
            return Err(SlError::EigenFailure(format!(
                "inverse iteration broke down at λ = {lambda}"
            )));
        }
        let s = 1.0 / nm.sqrt();
        x = y.into_iter().map(|v| v * s).collect();
    }
    // Fix the sign so the first significant component is positive.
    if let Some(first) = x.iter().find(|v| v.abs() > 1e-8) {
        if *first < 0.0 {
            x.iter_mut().for_each(|v| *v = -*v);
        }
    }
    Ok(x)
}
