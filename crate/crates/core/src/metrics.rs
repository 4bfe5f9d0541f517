//! Integrated squared error, pointwise mean squared error and wall-clock
//! timing.

use std::time::Instant;

use crate::densities::BenchmarkDensity;
use crate::error::{KdeError, Result};
use crate::quadrature::simpson_samples;

/// Default number of points used for ISE integration.
pub const ISE_POINTS: usize = 10_001;

/// Equispaced points `lo = p_0 < … < p_(m−1) = hi` with `m` odd.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationGrid {
    lo: f64,
    hi: f64,
    points: Vec<f64>,
}

impl EvaluationGrid {
    pub fn new(lo: f64, hi: f64, m: usize) -> Result<Self> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(KdeError::InvalidGrid(format!("need finite lo < hi, got [{lo}, {hi}]")));
        }
        if m < 3 || m.is_multiple_of(2) {
            return Err(KdeError::InvalidGrid(format!("point count must be odd and at least 3, got {m}")));
        }
        let step = (hi - lo) / (m - 1) as f64;
        let mut points: Vec<f64> = (0..m).map(|i| lo + step * i as f64).collect();
        points[m - 1] = hi;
        Ok(EvaluationGrid { lo, hi, points })
    }

    /// The density's padded support with [`ISE_POINTS`] points.
    pub fn for_density(d: &BenchmarkDensity) -> Self {
        let (lo, hi) = d.integration_range();
        Self::new(lo, hi, ISE_POINTS).expect("benchmark ranges are valid")
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn m(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn spacing(&self) -> f64 {
        (self.hi - self.lo) / (self.points.len() - 1) as f64
    }
}

/// Composite Simpson integral of `(est − truth)²` over the grid.
pub fn ise<T: Fn(f64) -> f64>(est: &[f64], truth: T, grid: &EvaluationGrid) -> Result<f64> {
    if est.len() != grid.m() {
        return Err(KdeError::LengthMismatch { expected: grid.m(), got: est.len() });
    }
    let sq: Vec<f64> = est
        .iter()
        .zip(grid.points())
        .map(|(e, &x)| {
            let d = e - truth(x);
            d * d
        })
        .collect();
    Ok(simpson_samples(&sq, grid.spacing()).expect("grid has odd length >= 3"))
}

/// Mean over replications of the squared error at each grid point.
pub fn pointwise_mse(replicates: &[Vec<f64>], truth: &[f64]) -> Result<Vec<f64>> {
    if replicates.len() < 2 {
        return Err(KdeError::TooFewPoints { need: 2, got: replicates.len() });
    }
    if let Some(bad) = replicates.iter().find(|r| r.len() != truth.len()) {
        return Err(KdeError::LengthMismatch { expected: truth.len(), got: bad.len() });
    }
    let reps = replicates.len() as f64;
    Ok((0..truth.len())
        .map(|i| {
            replicates
                .iter()
                .map(|r| {
                    let d = r[i] - truth[i];
                    d * d
                })
                .sum::<f64>()
                / reps
        })
        .collect())
}

/// Runs `f` once and reports monotonic wall time in seconds.
pub fn timed<R, G: FnOnce() -> R>(f: G) -> (R, f64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64())
}
