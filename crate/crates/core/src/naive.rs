//! Direct `O(nm)` evaluation, used as the correctness oracle for the
//! recursive evaluators.

use crate::error::{KdeError, Result};
use crate::exact::{validate, validate_bandwidth};
use crate::kernel::PolyExpKernel;
use crate::scalar::Scalar;
use crate::summation::NeumaierSum;

/// `1/(n h^(k+1)) Σ_i K⁽ᵏ⁾((q − x_i)/h)` for every query by a double loop with
/// compensated accumulation. `deriv_order` is 0 or 1.
pub fn naive_direct_sum<F: Scalar>(
    x: &[F],
    kernel: &PolyExpKernel<F>,
    h: F,
    queries: &[F],
    deriv_order: usize,
) -> Result<Vec<F>> {
    validate(x)?;
    validate_bandwidth(h)?;
    let n = F::of_usize(x.len());
    match deriv_order {
        0 => {
            let scale = F::one() / (n * h);
            Ok(queries
                .iter()
                .map(|&q| {
                    let acc: NeumaierSum<F> = x.iter().map(|&xi| kernel.value((q - xi) / h)).collect();
                    acc.value() * scale
                })
                .collect())
        }
        1 => {
            let d = kernel.derivative()?;
            let scale = F::one() / (n * h * h);
            Ok(queries
                .iter()
                .map(|&q| {
                    let acc: NeumaierSum<F> = x.iter().map(|&xi| d.value((q - xi) / h)).collect();
                    acc.value() * scale
                })
                .collect())
        }
        k => Err(KdeError::UnsupportedOrder(k)),
    }
}
