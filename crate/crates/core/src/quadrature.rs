//! Adaptive Simpson quadrature.
//!
//! Used as an independent check on the closed-form kernel integrals and the
//! benchmark densities. Integrands with a kink should be split at the kink by
//! the caller.

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
///
/// Subintervals are refined until the Richardson error estimate falls under
/// their share of `tol` or `max_depth` bisections have been made.
pub fn adaptive_simpson<G: Fn(f64) -> f64>(f: G, a: f64, b: f64, tol: f64, max_depth: u32) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    recurse(&f, a, b, fa, fm, fb, whole, tol, max_depth)
}

#[allow(clippy::too_many_arguments)]
fn recurse<G: Fn(f64) -> f64>(
    f: &G,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Integrates over `[a, b]` by first splitting into `pieces` equal panels.
///
/// Helps on long intervals where the integrand is concentrated in a small
/// region the initial Simpson sample could miss.
pub fn integrate_panels<G: Fn(f64) -> f64>(f: G, a: f64, b: f64, pieces: usize, tol: f64) -> f64 {
    let w = (b - a) / pieces as f64;
    (0..pieces)
        .map(|i| {
            let lo = a + w * i as f64;
            let hi = if i + 1 == pieces { b } else { lo + w };
            adaptive_simpson(&f, lo, hi, tol / pieces as f64, 30)
        })
        .sum()
}

/// Composite Simpson rule over equispaced samples (odd count, at least 3).
pub fn simpson_samples(values: &[f64], spacing: f64) -> Option<f64> {
    let m = values.len();
    if m < 3 || m.is_multiple_of(2) {
        return None;
    }
    let mut odd = 0.0;
    let mut even = 0.0;
    for (i, v) in values.iter().enumerate().take(m - 1).skip(1) {
        if i % 2 == 1 {
            odd += v;
        } else {
            even += v;
        }
    }
    Some(spacing / 3.0 * (values[0] + values[m - 1] + 4.0 * odd + 2.0 * even))
}

/// Trapezoid rule over equispaced samples.
pub fn trapezoid_samples(values: &[f64], spacing: f64) -> f64 {
    match values.len() {
        0 | 1 => 0.0,
        m => spacing * (0.5 * (values[0] + values[m - 1]) + values[1..m - 1].iter().sum::<f64>()),
    }
}
