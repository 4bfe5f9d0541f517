//! The eight benchmark sampling densities (a)–(h): a Gaussian, a uniform and
//! six normal mixtures, with exact pdf, pdf derivative, cdf and seeded
//! samplers.
//!
//! Mixture parameters live in [`MIXTURE_TABLE`]; where a Marron–Wand member
//! with the same shape exists its parameters are used.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use statrs::function::erf::erfc;

use crate::error::{KdeError, Result};

/// Generator used by every sampler; reported in result metadata.
pub const RNG_ALGORITHM: &str = "ChaCha20 (rand_chacha 0.9, seed_from_u64)";

const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Weighted sum of normal components.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianMixture {
    weights: Vec<f64>,
    means: Vec<f64>,
    sds: Vec<f64>,
}

impl GaussianMixture {
    pub fn new(weights: Vec<f64>, means: Vec<f64>, sds: Vec<f64>) -> Result<Self> {
        if weights.is_empty() || weights.len() != means.len() || weights.len() != sds.len() {
            return Err(KdeError::InvalidMixture("component lists must be non-empty and of equal length".into()));
        }
        if weights.iter().any(|&w| !(w > 0.0)) || sds.iter().any(|&s| !(s > 0.0)) {
            return Err(KdeError::InvalidMixture("weights and sds must be positive".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(KdeError::InvalidMixture(format!("weights sum to {total}, not 1")));
        }
        Ok(GaussianMixture { weights, means, sds })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn sds(&self) -> &[f64] {
        &self.sds
    }

    fn components(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.weights
            .iter()
            .zip(&self.means)
            .zip(&self.sds)
            .map(|((&w, &m), &s)| (w, m, s))
    }

    pub fn pdf(&self, x: f64) -> f64 {
        self.components()
            .map(|(w, m, s)| {
                let z = (x - m) / s;
                w * INV_SQRT_2PI / s * (-0.5 * z * z).exp()
            })
            .sum()
    }

    pub fn dpdf(&self, x: f64) -> f64 {
        self.components()
            .map(|(w, m, s)| {
                let z = (x - m) / s;
                -w * z / s * INV_SQRT_2PI / s * (-0.5 * z * z).exp()
            })
            .sum()
    }

    pub fn cdf(&self, x: f64) -> f64 {
        self.components()
            .map(|(w, m, s)| w * 0.5 * erfc(-(x - m) / (s * std::f64::consts::SQRT_2)))
            .sum()
    }

    pub fn mean(&self) -> f64 {
        self.components().map(|(w, m, _)| w * m).sum()
    }

    pub fn variance(&self) -> f64 {
        let mu = self.mean();
        self.components().map(|(w, m, s)| w * (s * s + (m - mu) * (m - mu))).sum()
    }

    /// Index of the component chosen for a uniform draw `u ∈ [0, 1)`.
    fn component_for(&self, u: f64) -> usize {
        let mut acc = 0.0;
        for (i, w) in self.weights.iter().enumerate() {
            acc += w;
            if u < acc {
                return i;
            }
        }
        self.weights.len() - 1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DensityForm {
    Mixture(GaussianMixture),
    Uniform { lo: f64, hi: f64 },
}

/// A labelled benchmark density.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkDensity {
    label: char,
    name: &'static str,
    form: DensityForm,
}

/// `(label, name, [(weight, mean, sd)])` for every mixture member.
pub type MixtureEntry = (char, &'static str, &'static [(f64, f64, f64)]);

pub const MIXTURE_TABLE: &[MixtureEntry] = &[
    ('a', "Gaussian", &[(1.0, 0.0, 1.0)]),
    ('c', "Scale mixture", &[(0.5, 0.0, 1.0), (0.5, 0.0, 0.1)]),
    ('d', "Simple bimodal", &[(0.5, -1.5, 0.5), (0.5, 1.5, 0.5)]),
    (
        'e',
        "Skew",
        &[(0.2, 0.0, 1.0), (0.2, 0.5, 2.0 / 3.0), (0.6, 13.0 / 12.0, 5.0 / 9.0)],
    ),
    ('f', "Spiked bimodal", &[(0.5, -1.0, 0.3), (0.5, 1.0, 0.05)]),
    (
        'g',
        "Claw",
        &[
            (0.5, 0.0, 1.0),
            (0.1, -1.0, 0.1),
            (0.1, -0.5, 0.1),
            (0.1, 0.0, 0.1),
            (0.1, 0.5, 0.1),
            (0.1, 1.0, 0.1),
        ],
    ),
    ('h', "Skew bimodal", &[(0.75, 0.0, 1.0), (0.25, 1.5, 1.0 / 3.0)]),
];

/// All eight densities in label order.
pub fn catalog() -> Vec<BenchmarkDensity> {
    let mut out: Vec<BenchmarkDensity> = MIXTURE_TABLE
        .iter()
        .map(|(label, name, comps)| {
            let mix = GaussianMixture::new(
                comps.iter().map(|c| c.0).collect(),
                comps.iter().map(|c| c.1).collect(),
                comps.iter().map(|c| c.2).collect(),
            )
            .expect("built-in mixture table is valid");
            BenchmarkDensity { label: *label, name, form: DensityForm::Mixture(mix) }
        })
        .collect();
    out.push(BenchmarkDensity { label: 'b', name: "Uniform", form: DensityForm::Uniform { lo: 0.0, hi: 1.0 } });
    out.sort_by_key(|d| d.label);
    out
}

/// Looks a density up by its label `a`–`h`.
pub fn by_label(label: char) -> Option<BenchmarkDensity> {
    catalog().into_iter().find(|d| d.label == label.to_ascii_lowercase())
}

impl BenchmarkDensity {
    pub fn label(&self) -> char {
        self.label
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn form(&self) -> &DensityForm {
        &self.form
    }

    /// Only the uniform member has kinks.
    pub fn is_differentiable(&self) -> bool {
        matches!(self.form, DensityForm::Mixture(_))
    }

    pub fn pdf(&self, x: f64) -> f64 {
        match &self.form {
            DensityForm::Mixture(m) => m.pdf(x),
            DensityForm::Uniform { lo, hi } => {
                if x >= *lo && x <= *hi {
                    1.0 / (hi - lo)
                } else {
                    0.0
                }
            }
        }
    }

    pub fn dpdf(&self, x: f64) -> Result<f64> {
        match &self.form {
            DensityForm::Mixture(m) => Ok(m.dpdf(x)),
            DensityForm::Uniform { .. } => Err(KdeError::NotDifferentiableDensity(self.label)),
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match &self.form {
            DensityForm::Mixture(m) => m.cdf(x),
            DensityForm::Uniform { lo, hi } => ((x - lo) / (hi - lo)).clamp(0.0, 1.0),
        }
    }

    pub fn mean(&self) -> f64 {
        match &self.form {
            DensityForm::Mixture(m) => m.mean(),
            DensityForm::Uniform { lo, hi } => 0.5 * (lo + hi),
        }
    }

    pub fn sd(&self) -> f64 {
        match &self.form {
            DensityForm::Mixture(m) => m.variance().sqrt(),
            DensityForm::Uniform { lo, hi } => (hi - lo) / 12f64.sqrt(),
        }
    }

    /// Support padded by five standard deviations on each side.
    pub fn integration_range(&self) -> (f64, f64) {
        let pad = 5.0 * self.sd();
        match &self.form {
            DensityForm::Mixture(_) => (self.mean() - pad, self.mean() + pad),
            DensityForm::Uniform { lo, hi } => (lo - pad, hi + pad),
        }
    }

    /// `n` independent draws, reproducible for a given `seed`.
    pub fn sample(&self, n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        match &self.form {
            DensityForm::Mixture(m) => (0..n)
                .map(|_| {
                    let c = m.component_for(rng.random::<f64>());
                    let z: f64 = rng.sample(StandardNormal);
                    m.means[c] + m.sds[c] * z
                })
                .collect(),
            DensityForm::Uniform { lo, hi } => (0..n).map(|_| lo + (hi - lo) * rng.random::<f64>()).collect(),
        }
    }

    /// Component index of each draw alongside the draw, for frequency checks.
    pub fn sample_labelled(&self, n: usize, seed: u64) -> Vec<(usize, f64)> {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        match &self.form {
            DensityForm::Mixture(m) => (0..n)
                .map(|_| {
                    let c = m.component_for(rng.random::<f64>());
                    let z: f64 = rng.sample(StandardNormal);
                    (c, m.means[c] + m.sds[c] * z)
                })
                .collect(),
            DensityForm::Uniform { lo, hi } => (0..n).map(|_| (0, lo + (hi - lo) * rng.random::<f64>())).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn catalog_order_and_labels() {
        let labels: String = catalog().iter().map(|d| d.label()).collect();
        assert_eq!(labels, "abcdefgh");
        assert_eq!(catalog().iter().filter(|d| !d.is_differentiable()).count(), 1);
        assert!(!by_label('b').unwrap().is_differentiable());
        assert_eq!(by_label('G').unwrap().name(), "Claw");
        assert!(by_label('z').is_none());
    }

    #[test]
    fn pdf_examples() {
        let cat = catalog();
        assert_relative_eq!(cat[0].pdf(0.0), INV_SQRT_2PI, max_relative = 1e-15);
        assert_eq!(cat[1].pdf(0.5), 1.0);
        assert_eq!(cat[1].pdf(2.0), 0.0);
        assert_eq!(cat[0].dpdf(0.0).unwrap(), 0.0);
        assert_eq!(cat[1].dpdf(0.5).unwrap_err(), KdeError::NotDifferentiableDensity('b'));
        let d = &cat[3];
        for x in [0.1, 0.8, 1.5, 2.9] {
            assert_relative_eq!(d.pdf(x), d.pdf(-x), max_relative = 1e-14);
            assert_relative_eq!(cat[0].pdf(x), cat[0].pdf(-x), max_relative = 1e-14);
        }
    }

    #[test]
    fn mixture_validation() {
        assert!(GaussianMixture::new(vec![0.5, 0.4], vec![0.0, 1.0], vec![1.0, 1.0]).is_err());
        assert!(GaussianMixture::new(vec![1.0], vec![0.0], vec![0.0]).is_err());
        assert!(GaussianMixture::new(vec![1.0], vec![0.0, 1.0], vec![1.0]).is_err());
    }

    #[test]
    fn sampling_is_deterministic() {
        let d = by_label('g').unwrap();
        assert_eq!(d.sample(100, 7), d.sample(100, 7));
        assert_ne!(d.sample(100, 7), d.sample(100, 8));
        let u = by_label('b').unwrap().sample(1000, 1);
        assert!(u.iter().all(|&v| (0.0..1.0).contains(&v)));
    }

    #[test]
    fn moments() {
        assert_relative_eq!(by_label('a').unwrap().sd(), 1.0);
        assert_relative_eq!(by_label('b').unwrap().mean(), 0.5);
        assert_relative_eq!(by_label('d').unwrap().sd(), (0.25f64 + 2.25).sqrt(), max_relative = 1e-15);
        let (lo, hi) = by_label('a').unwrap().integration_range();
        assert_eq!((lo, hi), (-5.0, 5.0));
    }
}
