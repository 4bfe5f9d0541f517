//! Floating-point abstraction shared by the estimators.
//!
//! Everything in the kernel algebra and the evaluators is written against
//! [`Scalar`], so the same code runs in `f32` and `f64`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar usable by the estimators.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
    /// Lossy conversion from `f64`, used for literal constants.
    #[inline]
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable in scalar type")
    }

    /// Conversion from a count.
    #[inline]
    fn of_usize(v: usize) -> Self {
        Self::from_usize(v).expect("count representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Scalar for T where
    T: Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
}

/// `k!` as a float, by iterated product.
pub fn factorial<F: Scalar>(k: usize) -> F {
    let mut acc = F::one();
    for i in 2..=k {
        acc = acc * F::of_usize(i);
    }
    acc
}

/// Pascal triangle `C(m, k)` for `0 <= k <= m <= max_degree`, stored row-major.
#[derive(Debug, Clone)]
pub struct Binomials<F> {
    max_degree: usize,
    table: Vec<F>,
}

impl<F: Scalar> Binomials<F> {
    pub fn new(max_degree: usize) -> Self {
        let w = max_degree + 1;
        let mut table = vec![F::zero(); w * w];
        for m in 0..=max_degree {
            table[m * w] = F::one();
            for k in 1..=m {
                let above = if k < m { table[(m - 1) * w + k] } else { F::zero() };
                table[m * w + k] = table[(m - 1) * w + k - 1] + above;
            }
        }
        Binomials { max_degree, table }
    }

    #[inline]
    pub fn get(&self, m: usize, k: usize) -> F {
        debug_assert!(k <= m && m <= self.max_degree);
        self.table[m * (self.max_degree + 1) + k]
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorials() {
        assert_eq!(factorial::<f64>(0), 1.0);
        assert_eq!(factorial::<f64>(1), 1.0);
        assert_eq!(factorial::<f64>(5), 120.0);
        assert_eq!(factorial::<f32>(4), 24.0);
        assert_eq!(factorial::<f64>(20), 2_432_902_008_176_640_000.0);
    }

    #[test]
    fn pascal_rows() {
        let b = Binomials::<f64>::new(30);
        assert_eq!(b.get(0, 0), 1.0);
        assert_eq!(b.get(4, 2), 6.0);
        assert_eq!(b.get(7, 3), 35.0);
        assert_eq!(b.get(30, 15), 155_117_520.0);
        for m in 0..=30 {
            let row: f64 = (0..=m).map(|k| b.get(m, k)).sum();
            assert_eq!(row, 2f64.powi(m as i32));
        }
    }
}
