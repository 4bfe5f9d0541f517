use fastkde::densities::DensityForm;
use fastkde::quadrature::integrate_panels;
use fastkde::{by_label, catalog, KdeError};

#[test]
fn catalog_members_and_labels() {
    let all = catalog();
    let labels: String = all.iter().map(|d| d.label()).collect();
    assert_eq!(labels, "abcdefgh");
    assert!(all.iter().filter(|d| !d.is_differentiable()).map(|d| d.label()).eq(['b']));
    assert!((all[0].pdf(0.0) - 1.0 / (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-15);
    assert_eq!(all[1].pdf(0.5), 1.0);
    assert_eq!(all[1].pdf(2.0), 0.0);
    assert!(matches!(all[1].dpdf(0.5), Err(KdeError::NotDifferentiableDensity('b'))));
}

#[test]
fn pdfs_integrate_to_one() {
    for d in catalog() {
        let mass = match d.form() {
            DensityForm::Uniform { lo, hi } => integrate_panels(|x| d.pdf(x), *lo, *hi, 4, 1e-13),
            DensityForm::Mixture(_) => {
                let (lo, hi) = (d.mean() - 12.0 * d.sd(), d.mean() + 12.0 * d.sd());
                integrate_panels(|x| d.pdf(x), lo, hi, 400, 1e-13)
            }
        };
        assert!((mass - 1.0).abs() < 1e-8, "{}: {mass}", d.label());
        let (lo, hi) = d.integration_range();
        assert!((0..1000).all(|i| d.pdf(lo + (hi - lo) * i as f64 / 999.0) >= 0.0));
    }
}

#[test]
fn dpdf_matches_finite_differences() {
    let step = 1e-6;
    for d in catalog().into_iter().filter(|d| d.is_differentiable()) {
        let (lo, hi) = (d.mean() - 3.0 * d.sd(), d.mean() + 3.0 * d.sd());
        for i in 0..100 {
            let x = lo + (hi - lo) * (i as f64 + 0.5) / 100.0;
            let fd = (d.pdf(x + step) - d.pdf(x - step)) / (2.0 * step);
            let tol = 1e-7 * d.dpdf(x).unwrap().abs().max(1.0);
            assert!((fd - d.dpdf(x).unwrap()).abs() < tol, "{} at {x}", d.label());
        }
    }
    assert_eq!(by_label('a').unwrap().dpdf(0.0).unwrap(), 0.0);
}

#[test]
fn symmetric_members_are_symmetric() {
    for (label, centre) in [('a', 0.0), ('d', 0.0)] {
        let d = by_label(label).unwrap();
        for i in 0..50 {
            let t = i as f64 * 0.1;
            assert!((d.pdf(centre + t) - d.pdf(centre - t)).abs() < 1e-15);
        }
    }
}

#[test]
fn sampling_is_reproducible() {
    let d = by_label('g').unwrap();
    assert_eq!(d.sample(1000, 99), d.sample(1000, 99));
    assert_ne!(d.sample(1000, 99), d.sample(1000, 100));
}

#[test]
fn standard_normal_moments() {
    let x = by_label('a').unwrap().sample(1_000_000, 2024);
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let sd = (x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    assert!(mean.abs() <= 0.005);
    assert!((sd - 1.0).abs() <= 0.005);
}

#[test]
fn empirical_cdf_passes_ks() {
    let n = 100_000;
    // 0.1% critical value of the one-sample KS statistic
    let critical = 1.9495 / (n as f64).sqrt();
    for d in catalog() {
        let mut x = d.sample(n, 31 + d.label() as u64);
        x.sort_by(f64::total_cmp);
        let mut stat = 0.0f64;
        for (i, &v) in x.iter().enumerate() {
            let f = d.cdf(v);
            stat = stat.max((i as f64 + 1.0) / n as f64 - f).max(f - i as f64 / n as f64);
        }
        assert!(stat < critical, "{}: {stat}", d.label());
    }
}

#[test]
fn component_frequencies_match_weights() {
    let n = 200_000;
    for d in catalog() {
        let DensityForm::Mixture(mix) = d.form() else { continue };
        let mut counts = vec![0usize; mix.weights().len()];
        for (c, _) in d.sample_labelled(n, 5) {
            counts[c] += 1;
        }
        for (w, &c) in mix.weights().iter().zip(&counts) {
            let sd = (n as f64 * w * (1.0 - w)).sqrt();
            assert!((c as f64 - n as f64 * w).abs() <= 3.0 * sd.max(1.0), "{}: {c} vs {}", d.label(), n as f64 * w);
        }
    }
}
