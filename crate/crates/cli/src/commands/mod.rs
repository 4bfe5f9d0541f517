pub mod accuracy;
pub mod densities;
pub mod efficiency;
pub mod estimate;
pub mod speed;

use fastkde::{by_label, BenchmarkDensity};

use crate::error::{CliError, Result};

pub(crate) fn density(label: char) -> Result<BenchmarkDensity> {
    by_label(label).ok_or_else(|| CliError::Usage(format!("unknown density {label:?}")))
}

pub(crate) fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

use fastkde::{binned_kde_at, linear_bin, naive_direct_sum, Estimator, Kernel, Queries};

use crate::method::{Engine, Method};

/// Rejects method/order combinations before any work is scheduled.
pub(crate) fn check_methods(methods: &[Method], order: usize, label: char) -> Result<()> {
    if methods.is_empty() {
        return Err(CliError::Usage("no methods given".into()));
    }
    if order == 1 && label == 'b' {
        return Err(CliError::Usage("density b is not differentiable; derivative runs need another density".into()));
    }
    for m in methods {
        let k = m.kernel().map_err(|e| CliError::Usage(e.to_string()))?;
        if order == 1 {
            if m.engine == Engine::Binned {
                return Err(CliError::Usage(format!("{m}: binned derivatives are not supported")));
            }
            k.derivative().map_err(|e| CliError::Usage(format!("{m}: {e}")))?;
        }
    }
    Ok(())
}

/// Density (`order` 0) or derivative values from one estimator. `None`
/// queries means the sample points.
pub(crate) fn evaluate(
    method: Method,
    kernel: &Kernel,
    x: &[f64],
    h: f64,
    order: usize,
    queries: Option<&[f64]>,
    bins: usize,
) -> Result<Vec<f64>> {
    Ok(match method.engine {
        Engine::Exact => {
            let est = Estimator::new(x, kernel, h)?;
            let q = queries.map_or(Queries::AtSamples, Queries::Points);
            if order == 0 {
                est.density(q)?
            } else {
                est.derivative(q)?
            }
        }
        Engine::Binned => {
            let bs = linear_bin(x, bins).map_err(|e| CliError::Usage(e.to_string()))?;
            binned_kde_at(&bs, kernel, h, queries.unwrap_or(x))?
        }
        Engine::Naive => naive_direct_sum(x, kernel, h, queries.unwrap_or(x), order)?,
    })
}
