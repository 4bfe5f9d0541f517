//! Linear binning onto an equispaced grid followed by the weighted ℓ/r
//! recursions, for `O(n + (α + 1) b)` density estimates on the grid.

use crate::error::{KdeError, Result};
use crate::exact::{validate, validate_bandwidth, ExactKde, Queries, Recursion, SortedSample};
use crate::kernel::PolyExpKernel;
use crate::scalar::Scalar;

/// Grid weights produced by linear binning.
#[derive(Debug, Clone, PartialEq)]
pub struct BinnedSample<F> {
    grid: Vec<F>,
    weights: Vec<F>,
    n: usize,
    delta: F,
}

impl<F: Scalar> BinnedSample<F> {
    pub fn grid(&self) -> &[F] {
        &self.grid
    }

    pub fn weights(&self) -> &[F] {
        &self.weights
    }

    /// Number of binned observations.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Grid spacing; zero for the single-point fallback.
    pub fn delta(&self) -> F {
        self.delta
    }

    pub fn bins(&self) -> usize {
        self.grid.len()
    }
}

/// Spreads each point over its two neighbouring grid nodes in proportion to
/// proximity. The grid spans exactly `[min(x), max(x)]` with `b` nodes.
///
/// A sample with no spread puts all of its weight on the first node of a
/// degenerate grid.
pub fn linear_bin<F: Scalar>(x: &[F], b: usize) -> Result<BinnedSample<F>> {
    if b < 2 {
        return Err(KdeError::TooFewBins(b));
    }
    validate(x)?;
    let (lo, hi) = x
        .iter()
        .fold((x[0], x[0]), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let n = x.len();
    let mut weights = vec![F::zero(); b];
    if !(hi > lo) {
        weights[0] = F::of_usize(n);
        return Ok(BinnedSample { grid: vec![lo; b], weights, n, delta: F::zero() });
    }
    let delta = (hi - lo) / F::of_usize(b - 1);
    let mut grid: Vec<F> = (0..b).map(|j| lo + delta * F::of_usize(j)).collect();
    grid[b - 1] = hi;
    let last = F::of_usize(b - 2);
    for &v in x {
        let t = (v - lo) / delta;
        let cell = t.floor().max(F::zero()).min(last);
        let frac = (t - cell).max(F::zero()).min(F::one());
        let j = cell.to_usize().unwrap_or(0);
        weights[j] = weights[j] + (F::one() - frac);
        weights[j + 1] = weights[j + 1] + frac;
    }
    Ok(BinnedSample { grid, weights, n, delta })
}

fn evaluator<F: Scalar>(bs: &BinnedSample<F>, kernel: &PolyExpKernel<F>, h: F) -> Result<ExactKde<F>> {
    validate_bandwidth(h)?;
    let sample = SortedSample::from_sorted_weighted(&bs.grid, bs.weights.clone(), h)?;
    ExactKde::from_sample(sample, kernel, Recursion::Anchored)
}

/// Binned density estimate at the grid nodes.
pub fn binned_kde<F: Scalar>(bs: &BinnedSample<F>, kernel: &PolyExpKernel<F>, h: F) -> Result<Vec<F>> {
    evaluator(bs, kernel, h)?.density(Queries::AtSamples)
}

/// Binned density estimate at arbitrary points.
pub fn binned_kde_at<F: Scalar>(bs: &BinnedSample<F>, kernel: &PolyExpKernel<F>, h: F, queries: &[F]) -> Result<Vec<F>> {
    evaluator(bs, kernel, h)?.density(Queries::Points(queries))
}
