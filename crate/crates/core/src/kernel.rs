//! Poly-exponential kernels `K(x) = c·e^(−|x|)·Σ β_k |x|^k` and their
//! closed-form properties.
//!
//! Every integral needed for bandwidth selection and kernel comparison reduces
//! to `∫ |x|^k e^(−|x|) dx = 2·k!`, so normalisation, second moment, roughness
//! and derivative roughness are finite sums over the coefficients.

use crate::error::{KdeError, Result};
use crate::scalar::{factorial, Scalar};

/// Largest supported polynomial degree. Factorials are held in floating point
/// and `(2·30)!` is still comfortably inside the `f64` range.
pub const MAX_DEGREE: usize = 30;

const GUARD_POINTS: usize = 10_001;
const GUARD_HALF_WIDTH: f64 = 50.0;

/// A kernel `c·e^(−|x|)·Σ_{k=0}^{α} β_k |x|^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyExpKernel<F> {
    beta: Vec<F>,
    c: F,
    canonical: bool,
}

/// The derivative `K′(x) = c·sign(x)·e^(−|x|)·Σ γ_k |x|^k` of a
/// differentiable poly-exponential kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedPolyExpDerivative<F> {
    gamma: Vec<F>,
    c: F,
}

/// `(2·Σ β_k k!)⁻¹`, the constant that makes the shape integrate to one.
pub fn normalizer<F: Scalar>(beta: &[F]) -> Result<F> {
    if beta.is_empty() {
        return Err(KdeError::InvalidKernel("empty coefficient list".into()));
    }
    if beta.len() - 1 > MAX_DEGREE {
        return Err(KdeError::DegreeTooLarge { alpha: beta.len() - 1, max: MAX_DEGREE });
    }
    let mass: F = beta
        .iter()
        .enumerate()
        .map(|(k, &b)| b * factorial::<F>(k))
        .sum();
    if !(mass > F::zero()) || !mass.is_finite() {
        return Err(KdeError::InvalidKernel(format!(
            "shape integral 2·Σβ_k·k! must be positive, got {}",
            (mass + mass).as_f64()
        )));
    }
    Ok(F::one() / (mass + mass))
}

#[inline]
fn poly_abs<F: Scalar>(coeffs: &[F], a: F) -> F {
    coeffs.iter().rev().fold(F::zero(), |acc, &b| acc * a + b)
}

impl<F: Scalar> PolyExpKernel<F> {
    /// Builds a kernel from un-normalised shape coefficients `β_0..β_α`.
    ///
    /// Non-negativity is checked on a fixed grid over `[−50, 50]`; this catches
    /// the usual mistakes but is not a proof for arbitrary coefficients.
    pub fn new(beta: Vec<F>) -> Result<Self> {
        if let Some(i) = beta.iter().position(|b| !b.is_finite()) {
            return Err(KdeError::NonFinite { index: i, value: beta[i].as_f64() });
        }
        let c = normalizer(&beta)?;
        let kernel = PolyExpKernel { beta, c, canonical: false };
        if kernel.beta.iter().any(|&b| b < F::zero()) {
            kernel.check_nonnegative()?;
        }
        Ok(kernel)
    }

    /// The canonical kernel `K_α` with `β_k = 1/k!` and `c = 1/(2(α+1))`.
    ///
    /// It is the lowest-degree member of the class with `α` continuous
    /// derivatives; `α = 0` is the Laplace kernel.
    pub fn k_alpha(alpha: usize) -> Result<Self> {
        if alpha > MAX_DEGREE {
            return Err(KdeError::DegreeTooLarge { alpha, max: MAX_DEGREE });
        }
        let mut beta = Vec::with_capacity(alpha + 1);
        let mut b = F::one();
        for k in 0..=alpha {
            if k > 0 {
                b = b / F::of_usize(k);
            }
            beta.push(b);
        }
        let c = F::one() / F::of_usize(2 * (alpha + 1));
        Ok(PolyExpKernel { beta, c, canonical: true })
    }

    pub fn laplace() -> Self {
        Self::k_alpha(0).expect("degree 0 is always supported")
    }

    fn check_nonnegative(&self) -> Result<()> {
        let step = 2.0 * GUARD_HALF_WIDTH / (GUARD_POINTS - 1) as f64;
        for i in 0..GUARD_POINTS {
            let x = -GUARD_HALF_WIDTH + step * i as f64;
            let v = self.value(F::of(x));
            if v < F::zero() {
                return Err(KdeError::NegativeKernel { at: x, value: v.as_f64() });
            }
        }
        Ok(())
    }

    /// Polynomial degree `α`.
    pub fn alpha(&self) -> usize {
        self.beta.len() - 1
    }

    pub fn beta(&self) -> &[F] {
        &self.beta
    }

    /// Normalising constant `c`.
    pub fn c(&self) -> F {
        self.c
    }

    /// Whether this is one of the canonical `K_α` kernels.
    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    #[inline]
    pub fn value(&self, u: F) -> F {
        let a = u.abs();
        self.c * (-a).exp() * poly_abs(&self.beta, a)
    }

    /// `K(0) = c·β_0`.
    pub fn at_zero(&self) -> F {
        self.c * self.beta[0]
    }

    /// Coefficients of `K′`, `γ_k = (k+1)β_{k+1} − β_k`.
    ///
    /// Fails unless `β_1 = β_0`, which is what makes `K′(0) = 0`. Coefficients
    /// that cancel to within a few ulps are snapped to zero, so `K_α` yields
    /// exactly one surviving term `γ_α = −1/α!`.
    pub fn derivative(&self) -> Result<SignedPolyExpDerivative<F>> {
        let alpha = self.alpha();
        let tol = F::epsilon() * F::of(4.0);
        let mut gamma = Vec::with_capacity(alpha + 1);
        for k in 0..=alpha {
            let up = if k < alpha { F::of_usize(k + 1) * self.beta[k + 1] } else { F::zero() };
            let g = up - self.beta[k];
            let scale = up.abs().max(self.beta[k].abs());
            gamma.push(if g.abs() <= tol * scale { F::zero() } else { g });
        }
        if gamma[0] != F::zero() {
            return Err(KdeError::NotDifferentiable {
                beta0: self.beta[0].as_f64(),
                beta1: self.beta.get(1).copied().unwrap_or_else(F::zero).as_f64(),
            });
        }
        Ok(SignedPolyExpDerivative { gamma, c: self.c })
    }

    /// Second moment `σ²_K = 2c·Σ β_k (k+2)!`.
    pub fn variance(&self) -> F {
        let s: F = self
            .beta
            .iter()
            .enumerate()
            .map(|(k, &b)| b * factorial::<F>(k + 2))
            .sum();
        F::of(2.0) * self.c * s
    }

    /// Roughness `R(K) = ∫ K² = c²·Σ_k Σ_j β_k β_j (k+j)! / 2^(k+j)`.
    pub fn roughness(&self) -> F {
        self.c * self.c * squared_poly_exp_integral(&self.beta)
    }

    /// Roughness of the first derivative, `R(K′)`.
    ///
    /// Canonical kernels use `(2α)! / ((α+1)!)² · 2^(−2α−2)`; other kernels
    /// integrate the squared derivative term by term.
    pub fn deriv_roughness(&self) -> Result<F> {
        let d = self.derivative()?;
        if self.canonical {
            let alpha = self.alpha();
            let fa1 = factorial::<F>(alpha + 1);
            Ok(factorial::<F>(2 * alpha) / (fa1 * fa1) * F::of(2.0).powi(-(2 * alpha as i32) - 2))
        } else {
            Ok(d.roughness())
        }
    }

    /// Efficiency `(σ_K^(2k+1)·R(K⁽ᵏ⁾))⁻¹` for derivative order `k ∈ {0, 1}`.
    pub fn efficiency(&self, order: usize) -> Result<F> {
        let sigma = self.variance().sqrt();
        match order {
            0 => Ok(F::one() / (sigma * self.roughness())),
            1 => Ok(F::one() / (sigma.powi(3) * self.deriv_roughness()?)),
            k => Err(KdeError::UnsupportedOrder(k)),
        }
    }

    /// Efficiency relative to Epanechnikov (order 0) or biweight (order 1).
    pub fn relative_efficiency(&self, order: usize) -> Result<F> {
        let reference = ReferenceKernel::optimal_for(order)?;
        Ok(self.efficiency(order)? / F::of(reference.efficiency(order)?))
    }
}

/// `∫ (e^(−|x|) Σ a_k |x|^k)² dx = Σ_k Σ_j a_k a_j (k+j)! / 2^(k+j)`.
fn squared_poly_exp_integral<F: Scalar>(a: &[F]) -> F {
    let mut acc = F::zero();
    for (k, &ak) in a.iter().enumerate() {
        if ak == F::zero() {
            continue;
        }
        for (j, &aj) in a.iter().enumerate() {
            if aj == F::zero() {
                continue;
            }
            acc = acc + ak * aj * factorial::<F>(k + j) / F::of(2.0).powi((k + j) as i32);
        }
    }
    acc
}

impl<F: Scalar> SignedPolyExpDerivative<F> {
    pub fn alpha(&self) -> usize {
        self.gamma.len() - 1
    }

    pub fn gamma(&self) -> &[F] {
        &self.gamma
    }

    pub fn c(&self) -> F {
        self.c
    }

    #[inline]
    pub fn value(&self, u: F) -> F {
        let a = u.abs();
        let s = if u > F::zero() {
            F::one()
        } else if u < F::zero() {
            -F::one()
        } else {
            F::zero()
        };
        s * self.c * (-a).exp() * poly_abs(&self.gamma, a)
    }

    /// `R(K′) = c²·Σ_k Σ_j γ_k γ_j (k+j)! / 2^(k+j)`.
    pub fn roughness(&self) -> F {
        self.c * self.c * squared_poly_exp_integral(&self.gamma)
    }
}

/// Classical kernels used as efficiency references.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReferenceKernel {
    /// `3/4·(1 − x²)` on `[−1, 1]`.
    Epanechnikov,
    /// `15/16·(1 − x²)²` on `[−1, 1]`.
    Biweight,
    /// Standard normal density.
    Gaussian,
}

impl ReferenceKernel {
    /// The efficiency-maximising reference for a derivative order.
    pub fn optimal_for(order: usize) -> Result<Self> {
        match order {
            0 => Ok(ReferenceKernel::Epanechnikov),
            1 => Ok(ReferenceKernel::Biweight),
            k => Err(KdeError::UnsupportedOrder(k)),
        }
    }

    pub fn value(self, x: f64) -> f64 {
        match self {
            ReferenceKernel::Epanechnikov if x.abs() <= 1.0 => 0.75 * (1.0 - x * x),
            ReferenceKernel::Biweight if x.abs() <= 1.0 => {
                let t = 1.0 - x * x;
                15.0 / 16.0 * t * t
            }
            ReferenceKernel::Gaussian => (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt(),
            _ => 0.0,
        }
    }

    pub fn derivative(self, x: f64) -> f64 {
        match self {
            ReferenceKernel::Epanechnikov if x.abs() < 1.0 => -1.5 * x,
            ReferenceKernel::Biweight if x.abs() < 1.0 => -3.75 * x * (1.0 - x * x),
            ReferenceKernel::Gaussian => -x * self.value(x),
            _ => 0.0,
        }
    }

    pub fn variance(self) -> f64 {
        match self {
            ReferenceKernel::Epanechnikov => 1.0 / 5.0,
            ReferenceKernel::Biweight => 1.0 / 7.0,
            ReferenceKernel::Gaussian => 1.0,
        }
    }

    pub fn roughness(self) -> f64 {
        match self {
            ReferenceKernel::Epanechnikov => 3.0 / 5.0,
            ReferenceKernel::Biweight => 5.0 / 7.0,
            ReferenceKernel::Gaussian => 0.5 / std::f64::consts::PI.sqrt(),
        }
    }

    /// `R(K′)`; the Epanechnikov derivative is discontinuous but still
    /// square-integrable.
    pub fn deriv_roughness(self) -> f64 {
        match self {
            ReferenceKernel::Epanechnikov => 3.0 / 2.0,
            ReferenceKernel::Biweight => 15.0 / 7.0,
            ReferenceKernel::Gaussian => 0.25 / std::f64::consts::PI.sqrt(),
        }
    }

    pub fn efficiency(self, order: usize) -> Result<f64> {
        let sigma = self.variance().sqrt();
        match order {
            0 => Ok(1.0 / (sigma * self.roughness())),
            1 => Ok(1.0 / (sigma.powi(3) * self.deriv_roughness())),
            k => Err(KdeError::UnsupportedOrder(k)),
        }
    }

    pub fn relative_efficiency(self, order: usize) -> Result<f64> {
        Ok(self.efficiency(order)? / Self::optimal_for(order)?.efficiency(order)?)
    }
}
