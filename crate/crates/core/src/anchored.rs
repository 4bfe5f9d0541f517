//! Recursion tables anchored at the current order statistic.
//!
//! ```text
//! L(k, j) = Σ_{i ≤ j} (y_(j) − y_(i))^k · e^(y_(i) − y_(j))
//! R(k, j) = Σ_{i > j} (y_(i) − y_(j))^k · e^(y_(j) − y_(i))
//! ```
//!
//! Moving the anchor by `δ = y_(j+1) − y_(j) ≥ 0` re-expands
//! `(δ + t)^k` binomially, so every update adds non-negative terms and the
//! entries carry only a few ulps of relative error whatever the spread of the
//! data. The price is `O((α + 1)²)` work per step instead of `O(α + 1)`.

use crate::error::{KdeError, Result};
use crate::exact::{magnitude_guard, SortedSample};
use crate::kernel::MAX_DEGREE;
use crate::scalar::{Binomials, Scalar};

#[derive(Debug, Clone)]
pub struct AnchoredTables<F> {
    degree: usize,
    n: usize,
    // j-major, like CoefficientTables
    left: Vec<F>,
    right: Vec<F>,
    ops: u64,
}

impl<F: Scalar> AnchoredTables<F> {
    pub fn build(sample: &SortedSample<F>, alpha: usize) -> Result<Self> {
        if alpha > MAX_DEGREE {
            return Err(KdeError::DegreeTooLarge { alpha, max: MAX_DEGREE });
        }
        let y = sample.y();
        let n = y.len();
        if n == 0 {
            return Err(KdeError::EmptySample);
        }
        let spread = (y[n - 1] - y[0]).powi(alpha as i32);
        if !(spread <= magnitude_guard::<F>()) {
            return Err(KdeError::PrecisionLoss { magnitude: spread.as_f64() });
        }
        let w = alpha + 1;
        let binom = Binomials::<F>::new(alpha);
        let mut left = vec![F::zero(); w * (n + 1)];
        let mut right = vec![F::zero(); w * (n + 1)];
        let mut powers = vec![F::one(); w];
        let mut ops = 0u64;

        for j in 1..=n {
            let (prev, cur) = left.split_at_mut(j * w);
            let prev = &prev[(j - 1) * w..];
            let cur = &mut cur[..w];
            if j > 1 {
                let delta = y[j - 1] - y[j - 2];
                fill_powers(&mut powers, delta);
                let decay = (-delta).exp();
                shift_row(prev, cur, &powers, &binom, decay);
            }
            cur[0] = cur[0] + sample.weight_at(j - 1);
            ops += (w * (w + 1) / 2) as u64;
        }

        let mut carry = vec![F::zero(); w];
        for j in (1..=n).rev() {
            let (prev, cur) = right.split_at_mut(j * w);
            carry.copy_from_slice(&cur[..w]);
            carry[0] = carry[0] + sample.weight_at(j - 1);
            let dst = &mut prev[(j - 1) * w..];
            if j > 1 {
                let delta = y[j - 1] - y[j - 2];
                fill_powers(&mut powers, delta);
                shift_row(&carry, dst, &powers, &binom, (-delta).exp());
            } else {
                dst.copy_from_slice(&carry);
            }
            ops += (w * (w + 1) / 2) as u64;
        }

        Ok(AnchoredTables { degree: alpha, n, left, right, ops })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn left(&self, k: usize, j: usize) -> F {
        self.left[j * (self.degree + 1) + k]
    }

    #[inline]
    pub fn right(&self, k: usize, j: usize) -> F {
        self.right[j * (self.degree + 1) + k]
    }

    #[inline]
    pub(crate) fn left_row(&self, j: usize) -> &[F] {
        let w = self.degree + 1;
        &self.left[j * w..(j + 1) * w]
    }

    #[inline]
    pub(crate) fn right_row(&self, j: usize) -> &[F] {
        let w = self.degree + 1;
        &self.right[j * w..(j + 1) * w]
    }

    /// Number of multiply-add updates made while building; `(α+1)(α+2)n`.
    pub fn op_count(&self) -> u64 {
        self.ops
    }
}

#[inline]
fn fill_powers<F: Scalar>(powers: &mut [F], v: F) {
    let mut p = F::one();
    for slot in powers.iter_mut() {
        *slot = p;
        p = p * v;
    }
}

/// `dst[k] = decay · Σ_{p ≤ k} C(k, p) δ^(k−p) src[p]`.
#[inline]
fn shift_row<F: Scalar>(src: &[F], dst: &mut [F], powers: &[F], binom: &Binomials<F>, decay: F) {
    for k in 0..src.len() {
        let mut acc = src[k];
        for p in 0..k {
            acc = acc + binom.get(k, p) * powers[k - p] * src[p];
        }
        dst[k] = decay * acc;
    }
}
