//! Rule-of-thumb bandwidths from the AMISE-optimal formula
//!
//! ```text
//! h = ((2k+1) R(K⁽ᵏ⁾) / (σ_K⁴ R(f⁽ᵏ⁺²⁾) n))^(1/(2k+5))
//! ```
//!
//! with the unknown `R(f⁽ᵏ⁺²⁾)` replaced by that of a normal density whose
//! scale is the sample standard deviation.

use crate::error::{KdeError, Result};
use crate::exact::validate;
use crate::kernel::{PolyExpKernel, ReferenceKernel};
use crate::scalar::{factorial, Scalar};
use crate::summation::NeumaierSum;

/// Sample standard deviation with divisor `n − 1`.
pub fn scale_estimate<F: Scalar>(x: &[F]) -> Result<F> {
    validate(x)?;
    let n = x.len();
    if n < 2 {
        return Err(KdeError::TooFewPoints { need: 2, got: n });
    }
    let mean = x.iter().copied().collect::<NeumaierSum<F>>().value() / F::of_usize(n);
    let ss = x
        .iter()
        .map(|&v| (v - mean) * (v - mean))
        .collect::<NeumaierSum<F>>()
        .value();
    let sd = (ss / F::of_usize(n - 1)).sqrt();
    if !(sd > F::zero()) {
        return Err(KdeError::DegenerateSample);
    }
    Ok(sd)
}

/// `R(φ_σ⁽ʳ⁾) = (2r)! / (2^(2r+1) r! √π) · σ^(−(2r+1))`.
pub fn normal_deriv_roughness<F: Scalar>(r: usize, sigma: F) -> F {
    let num = factorial::<F>(2 * r);
    let den = F::of(2.0).powi(2 * r as i32 + 1) * factorial::<F>(r) * F::PI().sqrt();
    num / den * sigma.powi(-(2 * r as i32 + 1))
}

/// Kernel for which a bandwidth is requested.
#[derive(Debug, Clone, Copy)]
pub enum BandwidthKernel<'a, F> {
    PolyExp(&'a PolyExpKernel<F>),
    /// Standard normal kernel, for comparison runs.
    GaussianReference,
}

/// Everything the plug-in formula needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandwidthRequest<F> {
    pub n: usize,
    pub sigma_hat: F,
    pub order: usize,
    pub kernel_variance: F,
    /// `R(K⁽ᵏ⁾)` for the requested order.
    pub kernel_roughness: F,
}

impl<F: Scalar> BandwidthRequest<F> {
    pub fn new(n: usize, sigma_hat: F, kernel: BandwidthKernel<'_, F>, order: usize) -> Result<Self> {
        if n < 2 {
            return Err(KdeError::TooFewPoints { need: 2, got: n });
        }
        if !(sigma_hat > F::zero()) || !sigma_hat.is_finite() {
            return Err(KdeError::DegenerateSample);
        }
        let (kernel_variance, kernel_roughness) = match (kernel, order) {
            (BandwidthKernel::PolyExp(k), 0) => (k.variance(), k.roughness()),
            (BandwidthKernel::PolyExp(k), 1) => (k.variance(), k.deriv_roughness()?),
            (BandwidthKernel::GaussianReference, 0) => (
                F::of(ReferenceKernel::Gaussian.variance()),
                F::of(ReferenceKernel::Gaussian.roughness()),
            ),
            (BandwidthKernel::GaussianReference, 1) => (
                F::of(ReferenceKernel::Gaussian.variance()),
                F::of(ReferenceKernel::Gaussian.deriv_roughness()),
            ),
            (_, k) => return Err(KdeError::UnsupportedOrder(k)),
        };
        Ok(BandwidthRequest { n, sigma_hat, order, kernel_variance, kernel_roughness })
    }

    pub fn bandwidth(&self) -> F {
        let k = self.order;
        let density_roughness = normal_deriv_roughness(k + 2, self.sigma_hat);
        let num = F::of_usize(2 * k + 1) * self.kernel_roughness;
        let den = self.kernel_variance * self.kernel_variance * density_roughness * F::of_usize(self.n);
        (num / den).powf(F::one() / F::of_usize(2 * k + 5))
    }
}

/// Silverman-style plug-in bandwidth for derivative order `k ∈ {0, 1}`.
pub fn silverman_bandwidth<F: Scalar>(x: &[F], kernel: BandwidthKernel<'_, F>, k: usize) -> Result<F> {
    let sigma = scale_estimate(x)?;
    Ok(BandwidthRequest::new(x.len(), sigma, kernel, k)?.bandwidth())
}
