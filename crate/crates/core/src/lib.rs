//! Exact univariate kernel density and density-derivative estimation in
//! linear time, for kernels of the form `poly(|x|)·e^(−|x|)`.
//!
//! Sorting the sample once lets the whole estimate be assembled from two
//! recursive passes over the order statistics (see [`exact`]). The same
//! recursions on linearly binned data give a fast approximate estimator
//! ([`binned`]). [`kernel`] holds the closed-form kernel properties used by the
//! plug-in [`bandwidth`] selector; [`densities`] and [`metrics`] support
//! accuracy experiments.
//!
//! All numerical code is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix the usual choice.
//!
//! ```
//! use fastkde::{kde, Kernel, Queries};
//!
//! let x = [0.1, -0.4, 1.3, 0.8, 0.2];
//! let k4 = Kernel::k_alpha(4).unwrap();
//! let f = kde(&x, &k4, 0.5, Queries::Points(&[0.0, 0.5])).unwrap();
//! assert!(f.iter().all(|&v| v > 0.0));
//! ```

// `!(a > b)` guards are written that way so NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod anchored;
pub mod bandwidth;
pub mod binned;
pub mod densities;
pub mod error;
pub mod exact;
pub mod kernel;
pub mod metrics;
pub mod naive;
pub mod quadrature;
pub mod scalar;
pub mod summation;

pub use anchored::AnchoredTables;
pub use bandwidth::{normal_deriv_roughness, scale_estimate, silverman_bandwidth, BandwidthKernel, BandwidthRequest};
pub use binned::{binned_kde, binned_kde_at, linear_bin, BinnedSample};
pub use densities::{by_label, catalog, BenchmarkDensity, GaussianMixture};
pub use error::{KdeError, Result};
pub use exact::{
    kde, kde_deriv, loo_kde_at_samples, poly_exp_sum, poly_exp_sum_at_samples, CoefficientTables, ExactKde,
    Queries, QueryContext, Recursion, SortedSample,
};
pub use kernel::{normalizer, PolyExpKernel, ReferenceKernel, SignedPolyExpDerivative, MAX_DEGREE};
pub use metrics::{ise, pointwise_mse, timed, EvaluationGrid};
pub use naive::naive_direct_sum;
pub use scalar::Scalar;

pub type Kernel = PolyExpKernel<f64>;
pub type Kernel32 = PolyExpKernel<f32>;
pub type KernelDerivative = SignedPolyExpDerivative<f64>;
pub type Estimator = ExactKde<f64>;
pub type Estimator32 = ExactKde<f32>;
pub type Sample = SortedSample<f64>;
pub type Tables = CoefficientTables<f64>;
pub type Binned = BinnedSample<f64>;
