//! Compensated summation.

use std::ops::AddAssign;

use crate::scalar::Scalar;

/// Kahan–Babuška–Neumaier accumulator.
#[derive(Debug, Clone, Copy)]
pub struct NeumaierSum<F> {
    sum: F,
    comp: F,
}

impl<F: Scalar> Default for NeumaierSum<F> {
    fn default() -> Self {
        NeumaierSum { sum: F::zero(), comp: F::zero() }
    }
}

impl<F: Scalar> NeumaierSum<F> {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, v: F) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp = self.comp + ((self.sum - t) + v);
        } else {
            self.comp = self.comp + ((v - t) + self.sum);
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> F {
        self.sum + self.comp
    }
}

impl<F: Scalar> AddAssign<F> for NeumaierSum<F> {
    fn add_assign(&mut self, rhs: F) {
        self.add(rhs);
    }
}

impl<F: Scalar> FromIterator<F> for NeumaierSum<F> {
    fn from_iter<I: IntoIterator<Item = F>>(iter: I) -> Self {
        let mut acc = NeumaierSum::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

/// Compensated sum of a slice.
pub fn compensated_sum<F: Scalar>(values: &[F]) -> F {
    values.iter().copied().collect::<NeumaierSum<F>>().value()
}
