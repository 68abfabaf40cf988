use super::Trajectory;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PeriodError {
    #[error("trajectory has no interior maximum; it is not periodic")]
    NotPeriodic,
    #[error("found {maxima} maxima; at least 3 (two full periods) are required")]
    InsufficientSpan { maxima: usize },
}

/// Period of a sampled trajectory from the spacing of successive maxima of `x`.
///
/// Each maximum is refined by the vertex of the parabola through the sample
/// at the discrete maximum and its two neighbours. The period is the mean
/// spacing between the first and last refined maxima.
pub fn measure_period(traj: &Trajectory) -> Result<f64, PeriodError> {
    let s = &traj.samples;
    let mut peaks = Vec::new();
    for i in 1..s.len().saturating_sub(1) {
        let (a, b, c) = (s[i - 1].x, s[i].x, s[i + 1].x);
        if b > a && b >= c {
            let (ta, tb, tc) = (s[i - 1].t, s[i].t, s[i + 1].t);
            peaks.push(parabola_vertex((ta, a), (tb, b), (tc, c)));
        }
    }
    match peaks.len() {
        0 => Err(PeriodError::NotPeriodic),
        n if n < 3 => Err(PeriodError::InsufficientSpan { maxima: n }),
        n => Ok((peaks[n - 1] - peaks[0]) / (n - 1) as f64),
    }
}

/// Abscissa of the vertex of the parabola through three points.
fn parabola_vertex((t0, y0): (f64, f64), (t1, y1): (f64, f64), (t2, y2): (f64, f64)) -> f64 {
    let d01 = (y1 - y0) / (t1 - t0);
    let d12 = (y2 - y1) / (t2 - t1);
    let curv = (d12 - d01) / (t2 - t0);
    if curv == 0.0 {
        return t1;
    }
    // y' = d01 + curv·(2t − t0 − t1) vanishes at the vertex.
    0.5 * (t0 + t1) - d01 / (2.0 * curv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::Sample;
    use std::f64::consts::PI;

    fn sampled(f: impl Fn(f64) -> f64, t1: f64, n: usize) -> Trajectory {
        Trajectory {
            samples: (0..=n)
                .map(|i| {
                    let t = t1 * i as f64 / n as f64;
                    Sample {
                        t,
                        x: f(t),
                        v: 0.0,
                        energy: 0.0,
                    }
                })
                .collect(),
            ..Default::default()
        }
    }

    #[test]
    fn cosine_period() {
        let tr = sampled(|t| (t + 0.3).cos(), 6.0 * PI, 3000);
        let t = measure_period(&tr).unwrap();
        assert!((t - 2.0 * PI).abs() < 1e-4);
    }

    #[test]
    fn vertex_is_exact_for_parabolas() {
        // y = −(t − 0.7)²
        let v = parabola_vertex((0.0, -0.49), (1.3, -0.36), (2.0, -1.69));
        assert!((v - 0.7).abs() < 1e-12);
    }

    #[test]
    fn monotone_is_not_periodic() {
        let tr = sampled(|t| t.exp(), 3.0, 100);
        assert_eq!(measure_period(&tr), Err(PeriodError::NotPeriodic));
    }

    #[test]
    fn short_span_is_reported() {
        let tr = sampled(|t| t.sin(), 1.5 * PI, 300);
        assert_eq!(measure_period(&tr), Err(PeriodError::InsufficientSpan { maxima: 1 }));
    }
}
