use approx::assert_relative_eq;
use fastkde::quadrature::integrate_panels;
use fastkde::{normalizer, Kernel, KdeError, PolyExpKernel, ReferenceKernel};

const ALPHAS: [usize; 5] = [0, 1, 4, 7, 10];

// integrand is smooth on each half line; split at the kink
fn whole_line<G: Fn(f64) -> f64>(f: G, reach: f64) -> f64 {
    integrate_panels(&f, -reach, 0.0, 64, 1e-12) + integrate_panels(&f, 0.0, reach, 64, 1e-12)
}

#[test]
fn kernels_integrate_to_one() {
    for alpha in 0..=10 {
        let k = Kernel::k_alpha(alpha).unwrap();
        let mass = whole_line(|u| k.value(u), 60.0);
        assert!((mass - 1.0).abs() < 1e-10, "alpha {alpha}: {mass}");
    }
}

#[test]
fn normalizer_examples_match_quadrature() {
    assert_eq!(normalizer(&[1.0]).unwrap(), 0.5);
    assert_eq!(normalizer(&[1.0, 1.0]).unwrap(), 0.25);
    let c = normalizer(&[0.0, 0.0, 1.0]).unwrap();
    assert_eq!(c, 0.25);
    let shape = whole_line(|u: f64| u * u * (-u.abs()).exp(), 80.0);
    assert_relative_eq!(c, 1.0 / shape, max_relative = 1e-12);
    assert!(matches!(normalizer(&[0.0, -1.0]), Err(KdeError::InvalidKernel(_))));
}

#[test]
fn closed_forms_match_quadrature() {
    for alpha in ALPHAS {
        let k = Kernel::k_alpha(alpha).unwrap();
        let c_quad = 1.0 / whole_line(|u| k.value(u) / k.c(), 80.0);
        assert_relative_eq!(k.c(), c_quad, max_relative = 1e-9);
        let var = whole_line(|u| u * u * k.value(u), 100.0);
        assert_relative_eq!(k.variance(), var, max_relative = 1e-9);
        let rough = whole_line(|u| k.value(u).powi(2), 60.0);
        assert_relative_eq!(k.roughness(), rough, max_relative = 1e-9);
        if alpha > 0 {
            let d = k.derivative().unwrap();
            let drough = whole_line(|u| d.value(u).powi(2), 60.0);
            assert_relative_eq!(k.deriv_roughness().unwrap(), drough, max_relative = 1e-9);
            // general double sum agrees with the closed form
            assert_relative_eq!(d.roughness(), k.deriv_roughness().unwrap(), max_relative = 1e-12);
        }
    }
    assert_relative_eq!(Kernel::k_alpha(1).unwrap().deriv_roughness().unwrap(), 1.0 / 32.0, max_relative = 1e-12);
}

#[test]
fn non_canonical_derivative_roughness_matches_quadrature() {
    let k = PolyExpKernel::new(vec![1.0, 1.0, 0.25, 0.1]).unwrap();
    assert!(!k.is_canonical());
    let d = k.derivative().unwrap();
    assert_relative_eq!(d.gamma()[1], -0.5, max_relative = 1e-12);
    let drough = whole_line(|u| d.value(u).powi(2), 60.0);
    assert_relative_eq!(k.deriv_roughness().unwrap(), drough, max_relative = 1e-9);
    let rough = whole_line(|u| k.value(u).powi(2), 60.0);
    assert_relative_eq!(k.roughness(), rough, max_relative = 1e-9);
}

#[test]
fn derivative_matches_finite_differences() {
    let step = 1e-5;
    for alpha in [1, 2, 4, 7, 10] {
        let k = Kernel::k_alpha(alpha).unwrap();
        let d = k.derivative().unwrap();
        for i in 0..200 {
            let mut u = -10.0 + 20.0 * (i as f64 + 0.5) / 200.0;
            if u.abs() < 2.0 * step {
                u = 3.0 * step;
            }
            let fd = (k.value(u + step) - k.value(u - step)) / (2.0 * step);
            assert!((fd - d.value(u)).abs() < 1e-6, "alpha {alpha}, u {u}: {fd} vs {}", d.value(u));
        }
        assert_eq!(d.value(0.0), 0.0);
    }
}

fn right_first(k: &Kernel, h: f64) -> f64 {
    (-3.0 * k.value(0.0) + 4.0 * k.value(h) - k.value(2.0 * h)) / (2.0 * h)
}

fn right_third(k: &Kernel, h: f64) -> f64 {
    (-k.value(0.0) + 3.0 * k.value(h) - 3.0 * k.value(2.0 * h) + k.value(3.0 * h)) / h.powi(3)
}

#[test]
fn smoothness_condition_controls_one_sided_derivatives() {
    // An even kernel has matching one-sided odd derivatives at 0 only when they vanish.
    let smooth = PolyExpKernel::new(vec![1.0, 1.0, 0.5, 1.0 / 6.0, 0.3]).unwrap();
    assert!(right_first(&smooth, 1e-4).abs() < 1e-6);
    assert!(right_third(&smooth, 1e-3).abs() < 1e-2);

    let rough3 = PolyExpKernel::new(vec![1.0, 1.0, 0.5, 2.0 / 3.0, 0.3]).unwrap();
    assert!(right_first(&rough3, 1e-4).abs() < 1e-6);
    assert!(right_third(&rough3, 1e-3).abs() > 0.05);

    let kinked = PolyExpKernel::new(vec![1.0, 0.5]).unwrap();
    assert!(right_first(&kinked, 1e-4).abs() > 0.1);
    let err = kinked.derivative().unwrap_err();
    assert!(matches!(err, KdeError::NotDifferentiable { .. }));
    assert!(err.to_string().contains("beta_1 = beta_0"));
}

#[test]
fn efficiency_is_scale_invariant() {
    for alpha in [1, 4, 7] {
        let k = Kernel::k_alpha(alpha).unwrap();
        let sigma = k.variance().sqrt();
        let (r0, r1) = (k.roughness(), k.deriv_roughness().unwrap());
        for s in [0.5, 2.0, 10.0] {
            let (ss, rs, r1s) = (s * sigma, r0 / s, r1 / s.powi(3));
            assert_relative_eq!(1.0 / (ss * rs), k.efficiency(0).unwrap(), max_relative = 1e-12);
            assert_relative_eq!(1.0 / (ss.powi(3) * r1s), k.efficiency(1).unwrap(), max_relative = 1e-12);
        }
    }
}

#[test]
fn efficiency_examples() {
    let k1 = Kernel::k_alpha(1).unwrap();
    let k4 = Kernel::k_alpha(4).unwrap();
    assert_relative_eq!(k1.efficiency(0).unwrap(), 3.2, max_relative = 1e-14);
    assert_relative_eq!(k4.efficiency(0).unwrap(), 1.0 / (14f64.sqrt() * k4.roughness()), max_relative = 1e-14);
    assert!((k4.efficiency(0).unwrap() - 3.5445).abs() < 1e-3);
    assert_relative_eq!(k1.efficiency(1).unwrap(), 4.0, max_relative = 1e-14);
    assert!((k1.relative_efficiency(0).unwrap() - 0.8587).abs() < 1e-4);
    assert!(matches!(k1.efficiency(2), Err(KdeError::UnsupportedOrder(2))));
}

#[test]
fn relative_efficiency_approaches_gaussian() {
    let gauss = ReferenceKernel::Gaussian.relative_efficiency(0).unwrap();
    assert_relative_eq!(gauss, 2.0 * std::f64::consts::PI.sqrt() / (5.0 * 5f64.sqrt() / 3.0), max_relative = 1e-14);
    let k4 = Kernel::k_alpha(4).unwrap().relative_efficiency(0).unwrap();
    assert!((k4 - gauss).abs() < 0.005);
    let effs: Vec<f64> = (1..=15).map(|a| Kernel::k_alpha(a).unwrap().relative_efficiency(0).unwrap()).collect();
    assert!(effs.windows(2).all(|w| w[1] >= w[0]), "{effs:?}");
    assert!(effs[14] < 1.0);
}

#[test]
fn derivative_efficiency_peaks_at_seven() {
    let effs: Vec<f64> = (1..=15).map(|a| Kernel::k_alpha(a).unwrap().relative_efficiency(1).unwrap()).collect();
    let best = effs.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0 + 1;
    assert_eq!(best, 7);
}

#[test]
fn reference_constants_match_quadrature() {
    for r in [ReferenceKernel::Epanechnikov, ReferenceKernel::Biweight] {
        let mass = integrate_panels(|u| r.value(u), -1.0, 1.0, 8, 1e-12);
        assert_relative_eq!(mass, 1.0, max_relative = 1e-12);
        let var = integrate_panels(|u| u * u * r.value(u), -1.0, 1.0, 8, 1e-12);
        assert_relative_eq!(r.variance(), var, max_relative = 1e-10);
        let rough = integrate_panels(|u| r.value(u).powi(2), -1.0, 1.0, 8, 1e-12);
        assert_relative_eq!(r.roughness(), rough, max_relative = 1e-10);
    }
    let b = ReferenceKernel::Biweight;
    assert_relative_eq!(b.variance(), 1.0 / 7.0, max_relative = 1e-12);
    assert_relative_eq!(b.roughness(), 5.0 / 7.0, max_relative = 1e-12);
    let drough = integrate_panels(|u| b.derivative(u).powi(2), -1.0, 1.0, 8, 1e-12);
    assert_relative_eq!(b.deriv_roughness(), drough, max_relative = 1e-10);
    assert_relative_eq!(b.deriv_roughness(), 15.0 / 7.0, max_relative = 1e-12);

    let g = ReferenceKernel::Gaussian;
    let var = integrate_panels(|u| u * u * g.value(u), -40.0, 40.0, 64, 1e-12);
    assert_relative_eq!(g.variance(), var, max_relative = 1e-10);
    let rough = integrate_panels(|u| g.value(u).powi(2), -40.0, 40.0, 64, 1e-12);
    assert_relative_eq!(g.roughness(), rough, max_relative = 1e-10);
    let drough = integrate_panels(|u| g.derivative(u).powi(2), -40.0, 40.0, 64, 1e-12);
    assert_relative_eq!(g.deriv_roughness(), drough, max_relative = 1e-10);
}

#[test]
fn negative_shapes_are_rejected() {
    let err = PolyExpKernel::new(vec![1.0, -2.0, 0.9]).unwrap_err();
    assert!(matches!(err, KdeError::NegativeKernel { .. }));
    // a negative coefficient that never drives the kernel below zero is fine
    assert!(PolyExpKernel::new(vec![1.0, -0.5, 1.0]).is_ok());
    assert!(matches!(Kernel::k_alpha(31), Err(KdeError::DegreeTooLarge { .. })));
}
