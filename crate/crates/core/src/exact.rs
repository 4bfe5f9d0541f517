//! Exact kernel density and density-derivative evaluation by forward and
//! backward recursions over the order statistics.
//!
//! For a sorted sample `y_(1) ≤ … ≤ y_(n)` (working coordinates, unit
//! bandwidth) the tables
//!
//! ```text
//! ℓ(k, j) = Σ_{i ≤ j} (−y_(i))^k · e^(y_(i) − y_(j))
//! r(k, j) = Σ_{i > j}  y_(i)^k  · e^(y_(j) − y_(i))
//! ```
//!
//! are built in one pass each. Expanding `(x − y)^m` binomially turns any
//! `Σ_i |x − y_i|^m e^(−|x − y_i|)` into a short combination of table entries,
//! so a kernel of degree `α` is evaluated at `m` points in
//! `O((α + 1)(n + m))` after sorting.
//!
//! That recombination cancels once `|y|^α` dwarfs the local spacing, so
//! [`ExactKde`] defaults to the distance-anchored tables of
//! [`crate::anchored`], which need no recombination at sample points and only
//! non-negative local terms elsewhere. [`Recursion::Raw`] selects the tables
//! above.

use std::cmp::Ordering;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use crate::anchored::AnchoredTables;
use crate::error::{KdeError, Result};
use crate::kernel::{PolyExpKernel, SignedPolyExpDerivative, MAX_DEGREE};
use crate::scalar::{Binomials, Scalar};

/// Evaluation targets.
#[derive(Debug, Clone, Copy)]
pub enum Queries<'a, F> {
    /// The sample points themselves, returned in the caller's input order.
    AtSamples,
    /// Arbitrary points in original units, returned in the given order.
    Points(&'a [F]),
}

/// Ascending sample in working coordinates `y = (x − shift) / scale`.
#[derive(Debug, Clone, PartialEq)]
pub struct SortedSample<F> {
    y: Vec<F>,
    weights: Option<Vec<F>>,
    order: Vec<usize>,
    shift: F,
    scale: F,
}

pub(crate) fn validate<F: Scalar>(x: &[F]) -> Result<()> {
    if x.is_empty() {
        return Err(KdeError::EmptySample);
    }
    if let Some(i) = x.iter().position(|v| !v.is_finite()) {
        return Err(KdeError::NonFinite { index: i, value: x[i].as_f64() });
    }
    Ok(())
}

pub(crate) fn validate_bandwidth<F: Scalar>(h: F) -> Result<()> {
    if !(h > F::zero()) || !h.is_finite() {
        return Err(KdeError::InvalidBandwidth(h.as_f64()));
    }
    Ok(())
}

fn median_sorted<F: Scalar>(sorted: &[F]) -> F {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / F::of(2.0)
    }
}

impl<F: Scalar> SortedSample<F> {
    /// Sorts `x`, centres it at its median and divides by the bandwidth `h`.
    pub fn prepare(x: &[F], h: F) -> Result<Self> {
        validate(x)?;
        validate_bandwidth(h)?;
        let mut order: Vec<usize> = (0..x.len()).collect();
        order.sort_by(|&a, &b| x[a].partial_cmp(&x[b]).unwrap_or(Ordering::Equal));
        let sorted: Vec<F> = order.iter().map(|&i| x[i]).collect();
        let shift = median_sorted(&sorted);
        let y = sorted.into_iter().map(|v| (v - shift) / h).collect();
        Ok(SortedSample { y, weights: None, order, shift, scale: h })
    }

    /// Weighted points that are already ascending (e.g. a binning grid).
    /// The centre is the weighted median.
    pub fn from_sorted_weighted(points: &[F], weights: Vec<F>, h: F) -> Result<Self> {
        validate(points)?;
        validate_bandwidth(h)?;
        if weights.len() != points.len() {
            return Err(KdeError::LengthMismatch { expected: points.len(), got: weights.len() });
        }
        if points.windows(2).any(|w| w[1] < w[0]) {
            return Err(KdeError::QueryMismatch("weighted points must be ascending".into()));
        }
        let total: F = weights.iter().copied().sum();
        let mut acc = F::zero();
        let mut shift = points[points.len() - 1];
        for (p, &w) in points.iter().zip(&weights) {
            acc = acc + w;
            if acc + acc >= total {
                shift = *p;
                break;
            }
        }
        let y = points.iter().map(|&v| (v - shift) / h).collect();
        Ok(SortedSample {
            y,
            weights: Some(weights),
            order: (0..points.len()).collect(),
            shift,
            scale: h,
        })
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    /// Working coordinates, ascending.
    pub fn y(&self) -> &[F] {
        &self.y
    }

    pub fn shift(&self) -> F {
        self.shift
    }

    pub fn scale(&self) -> F {
        self.scale
    }

    /// `order()[j]` is the input index of the `j`-th smallest value.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn weights(&self) -> Option<&[F]> {
        self.weights.as_deref()
    }

    /// Total weight (`n` when unweighted).
    pub fn total_weight(&self) -> F {
        match &self.weights {
            Some(w) => w.iter().copied().sum(),
            None => F::of_usize(self.y.len()),
        }
    }

    #[inline]
    pub(crate) fn weight_at(&self, i: usize) -> F {
        match &self.weights {
            Some(w) => w[i],
            None => F::one(),
        }
    }

    pub fn to_working(&self, x: F) -> F {
        (x - self.shift) / self.scale
    }
}

/// The `ℓ(k, j)` and `r(k, j)` tables for `k = 0..=α`, `j = 0..=n`.
///
/// `r(k, 0)` takes `y_(0) = y_(1)`, i.e. `r(k, 0) = r(k, 1) + y_(1)^k`.
#[derive(Debug, Clone)]
pub struct CoefficientTables<F> {
    degree: usize,
    n: usize,
    // j-major: entry (k, j) at j * (degree + 1) + k
    ell: Vec<F>,
    r: Vec<F>,
    ops: u64,
}

pub(crate) fn magnitude_guard<F: Scalar>() -> F {
    F::of(1e300).min(F::max_value() * F::of(1e-8))
}

impl<F: Scalar> CoefficientTables<F> {
    /// One forward pass for `ℓ`, one backward pass for `r`.
    pub fn build(sample: &SortedSample<F>, alpha: usize) -> Result<Self> {
        if alpha > MAX_DEGREE {
            return Err(KdeError::DegreeTooLarge { alpha, max: MAX_DEGREE });
        }
        let y = &sample.y;
        let n = y.len();
        if n == 0 {
            return Err(KdeError::EmptySample);
        }
        let extreme = y[0].abs().max(y[n - 1].abs());
        let magnitude = extreme.powi(alpha as i32);
        if !(magnitude <= magnitude_guard::<F>()) {
            return Err(KdeError::PrecisionLoss { magnitude: magnitude.as_f64() });
        }

        let w = alpha + 1;
        let mut ell = vec![F::zero(); w * (n + 1)];
        let mut r = vec![F::zero(); w * (n + 1)];
        let mut ops = 0u64;

        for j in 1..=n {
            let yj = y[j - 1];
            let decay = if j > 1 { (y[j - 2] - yj).exp() } else { F::zero() };
            let neg = -yj;
            let mut p = sample.weight_at(j - 1);
            let (prev, cur) = ell.split_at_mut(j * w);
            let prev = &prev[(j - 1) * w..];
            for k in 0..w {
                cur[k] = decay * prev[k] + p;
                p = p * neg;
            }
            ops += w as u64;
        }

        for j in (1..=n).rev() {
            let yj = y[j - 1];
            let decay = if j > 1 { (y[j - 2] - yj).exp() } else { F::one() };
            let mut p = sample.weight_at(j - 1);
            let (prev, cur) = r.split_at_mut(j * w);
            let dst = &mut prev[(j - 1) * w..];
            for k in 0..w {
                dst[k] = decay * (cur[k] + p);
                p = p * yj;
            }
            ops += w as u64;
        }

        Ok(CoefficientTables { degree: alpha, n, ell, r, ops })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn ell(&self, k: usize, j: usize) -> F {
        self.ell[j * (self.degree + 1) + k]
    }

    #[inline]
    pub fn r(&self, k: usize, j: usize) -> F {
        self.r[j * (self.degree + 1) + k]
    }

    #[inline]
    fn ell_row(&self, j: usize) -> &[F] {
        let w = self.degree + 1;
        &self.ell[j * w..(j + 1) * w]
    }

    #[inline]
    fn r_row(&self, j: usize) -> &[F] {
        let w = self.degree + 1;
        &self.r[j * w..(j + 1) * w]
    }

    /// Number of recursion updates performed while building; exactly
    /// `2(α + 1)n`.
    pub fn op_count(&self) -> u64 {
        self.ops
    }
}

/// Query points in working coordinates with their counts `n(q)`.
#[derive(Debug, Clone)]
pub struct QueryContext<F> {
    q: Vec<F>,
    counts: Vec<usize>,
    // position in caller order of the t-th sorted query
    perm: Vec<usize>,
    sample_len: usize,
}

impl<F: Scalar> QueryContext<F> {
    /// Sorts the queries (original units) and finds `n(q)`, the number of
    /// sample points `≤ q`, in a single merge pass.
    pub fn new(sample: &SortedSample<F>, points: &[F]) -> Result<Self> {
        if let Some(i) = points.iter().position(|v| !v.is_finite()) {
            return Err(KdeError::NonFinite { index: i, value: points[i].as_f64() });
        }
        let mut perm: Vec<usize> = (0..points.len()).collect();
        perm.sort_by(|&a, &b| points[a].partial_cmp(&points[b]).unwrap_or(Ordering::Equal));
        let q: Vec<F> = perm.iter().map(|&i| sample.to_working(points[i])).collect();
        let y = sample.y();
        let mut counts = Vec::with_capacity(q.len());
        let mut j = 0;
        for &qt in &q {
            while j < y.len() && y[j] <= qt {
                j += 1;
            }
            counts.push(j);
        }
        Ok(QueryContext { q, counts, perm, sample_len: y.len() })
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    /// Sorted queries in working coordinates.
    pub fn q(&self) -> &[F] {
        &self.q
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    fn check(&self, sample: &SortedSample<F>, table_len: usize) -> Result<()> {
        if self.sample_len != sample.n() || table_len != sample.n() {
            return Err(KdeError::QueryMismatch(format!(
                "context built for {} points, sample has {}, tables have {}",
                self.sample_len,
                sample.n(),
                table_len
            )));
        }
        if self.counts.iter().any(|&c| c > sample.n()) {
            return Err(KdeError::QueryMismatch("count exceeds sample size".into()));
        }
        Ok(())
    }
}

/// Which family of recursion tables an evaluator runs on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Recursion {
    /// Powers of the order statistics themselves (`ℓ`, `r`). `O(α + 1)` per
    /// step, but the binomial recombination cancels badly once `|y|^α` is
    /// large compared with the local spacing.
    Raw,
    /// Powers of distances to the current order statistic. `O((α + 1)²)` per
    /// step with no cancellation for non-negative coefficients.
    #[default]
    Anchored,
}

/// Per-evaluation scratch for the binomial recombination.
struct Combiner<'a, F> {
    poly: &'a [F],
    binom: &'a Binomials<F>,
    powers: Vec<F>,
    left: Vec<F>,
    right: Vec<F>,
}

impl<'a, F: Scalar> Combiner<'a, F> {
    fn new(poly: &'a [F], binom: &'a Binomials<F>) -> Self {
        let w = poly.len();
        Combiner { poly, binom, powers: vec![F::zero(); w], left: vec![F::zero(); w], right: vec![F::zero(); w] }
    }

    /// Fills `left[k] = Σ_{m ≥ k} p_m C(m,k) x^(m−k)` and
    /// `right[k] = Σ_{m ≥ k} p_m C(m,k) (−x)^(m−k)`.
    fn weights_at(&mut self, x: F) {
        let w = self.poly.len();
        let mut p = F::one();
        for e in 0..w {
            self.powers[e] = p;
            p = p * x;
        }
        for k in 0..w {
            let mut a = F::zero();
            let mut b = F::zero();
            for m in k..w {
                let pm = self.poly[m];
                if pm == F::zero() {
                    continue;
                }
                let t = pm * self.binom.get(m, k) * self.powers[m - k];
                a = a + t;
                if (m - k) % 2 == 0 {
                    b = b + t;
                } else {
                    b = b - t;
                }
            }
            self.left[k] = a;
            self.right[k] = b;
        }
    }

    /// `Σ_k row[k] · A_k(d)` with `A_k(d) = Σ_{m ≥ k} p_m C(m,k) d^(m−k)`.
    fn shifted_dot(&mut self, row: &[F], d: F, offset0: F) -> F {
        self.weights_at(d);
        let w = self.poly.len();
        let s = (row[0] + offset0) * self.left[0];
        row[1..w].iter().zip(&self.left[1..w]).fold(s, |s, (&a, &b)| s + a * b)
    }

    fn raw_point(&mut self, sample: &SortedSample<F>, tables: &CoefficientTables<F>, x: F, j: usize, signed: bool) -> F {
        self.weights_at(x);
        let y = sample.y();
        let n = y.len();
        let w = self.poly.len();
        let mut total = F::zero();
        if j >= 1 {
            let row = tables.ell_row(j);
            let s: F = row[..w].iter().zip(&self.left[..w]).map(|(&a, &b)| a * b).sum();
            total = (y[j - 1] - x).exp() * s;
        }
        if j < n {
            // Σ_{i > j} y_i^k e^(x − y_i) = e^(x − y_(j+1)) (r(k, j+1) + w·y_(j+1)^k),
            // keeping every exponent non-positive.
            let next = y[j];
            let row = tables.r_row(j + 1);
            let mut p = sample.weight_at(j);
            let mut s = F::zero();
            for (&r, &c) in row[..w].iter().zip(&self.right[..w]) {
                s = s + (r + p) * c;
                p = p * next;
            }
            let right = (x - next).exp() * s;
            total = if signed { total - right } else { total + right };
        }
        total
    }

    fn raw_sample(&mut self, tables: &CoefficientTables<F>, x: F, j: usize, signed: bool) -> F {
        self.weights_at(x);
        let w = self.poly.len();
        let l = tables.ell_row(j);
        let r = tables.r_row(j);
        let mut a = F::zero();
        let mut b = F::zero();
        for k in 0..w {
            a = a + l[k] * self.left[k];
            b = b + r[k] * self.right[k];
        }
        if signed {
            a - b
        } else {
            a + b
        }
    }

    fn anchored_point(&mut self, sample: &SortedSample<F>, tables: &AnchoredTables<F>, x: F, j: usize, signed: bool) -> F {
        let y = sample.y();
        let n = y.len();
        let mut total = F::zero();
        if j >= 1 {
            let d = x - y[j - 1];
            total = (-d).exp() * self.shifted_dot(tables.left_row(j), d, F::zero());
        }
        if j < n {
            let d = y[j] - x;
            let right = (-d).exp() * self.shifted_dot(tables.right_row(j + 1), d, sample.weight_at(j));
            total = if signed { total - right } else { total + right };
        }
        total
    }

    fn anchored_sample(&self, tables: &AnchoredTables<F>, j: usize, signed: bool) -> F {
        let l = tables.left_row(j);
        let r = tables.right_row(j);
        let mut a = F::zero();
        let mut b = F::zero();
        for (m, &pm) in self.poly.iter().enumerate() {
            if pm != F::zero() {
                a = a + pm * l[m];
                b = b + pm * r[m];
            }
        }
        if signed {
            a - b
        } else {
            a + b
        }
    }
}

fn check_degree(poly_len: usize, degree: usize) -> Result<()> {
    if poly_len == 0 || poly_len - 1 > degree {
        return Err(KdeError::DegreeExceedsTables { requested: poly_len.saturating_sub(1), available: degree });
    }
    Ok(())
}

fn unit_poly<F: Scalar>(m: usize) -> Vec<F> {
    let mut p = vec![F::zero(); m + 1];
    p[m] = F::one();
    p
}

/// `Σ_i |q − y_i|^m e^(−|q − y_i|)` for each query (caller order), or with
/// `signed` the sum of `sign(q − y_i)|q − y_i|^m e^(−|q − y_i|)`, from the
/// raw `ℓ`/`r` tables.
///
/// In the signed case with `m = 0`, sample points equal to `q` count as
/// lying to the left (`n(q)` uses `≤`).
pub fn poly_exp_sum<F: Scalar>(
    sample: &SortedSample<F>,
    tables: &CoefficientTables<F>,
    m: usize,
    queries: &QueryContext<F>,
    signed: bool,
) -> Result<Vec<F>> {
    let poly = unit_poly(m);
    check_degree(poly.len(), tables.degree())?;
    queries.check(sample, tables.n())?;
    let binom = Binomials::new(m);
    let engine = EngineRef::Raw(tables);
    Ok(combine_queries(sample, engine, &poly, &binom, queries, signed))
}

/// The same sums evaluated at the order statistics, in ascending order.
pub fn poly_exp_sum_at_samples<F: Scalar>(
    sample: &SortedSample<F>,
    tables: &CoefficientTables<F>,
    m: usize,
    signed: bool,
) -> Result<Vec<F>> {
    let poly = unit_poly(m);
    check_degree(poly.len(), tables.degree())?;
    let binom = Binomials::new(m);
    Ok(combine_samples(sample, EngineRef::Raw(tables), &poly, &binom, signed))
}

#[derive(Debug, Clone)]
enum Engine<F> {
    Raw(CoefficientTables<F>),
    Anchored(AnchoredTables<F>),
}

#[derive(Clone, Copy)]
enum EngineRef<'a, F> {
    Raw(&'a CoefficientTables<F>),
    Anchored(&'a AnchoredTables<F>),
}

impl<F> Engine<F> {
    fn as_ref(&self) -> EngineRef<'_, F> {
        match self {
            Engine::Raw(t) => EngineRef::Raw(t),
            Engine::Anchored(t) => EngineRef::Anchored(t),
        }
    }
}

fn combine_queries<F: Scalar>(
    sample: &SortedSample<F>,
    engine: EngineRef<'_, F>,
    poly: &[F],
    binom: &Binomials<F>,
    queries: &QueryContext<F>,
    signed: bool,
) -> Vec<F> {
    let mut out = vec![F::zero(); queries.len()];
    let mut comb = Combiner::new(poly, binom);
    for (t, (&q, &j)) in queries.q.iter().zip(&queries.counts).enumerate() {
        out[queries.perm[t]] = match engine {
            EngineRef::Raw(tables) => comb.raw_point(sample, tables, q, j, signed),
            EngineRef::Anchored(tables) => comb.anchored_point(sample, tables, q, j, signed),
        };
    }
    out
}

/// Values at the order statistics (ascending). Tied points share the value
/// computed at the last member of their group.
fn combine_samples<F: Scalar>(
    sample: &SortedSample<F>,
    engine: EngineRef<'_, F>,
    poly: &[F],
    binom: &Binomials<F>,
    signed: bool,
) -> Vec<F> {
    let y = sample.y();
    let n = y.len();
    let mut out = vec![F::zero(); n];
    let mut comb = Combiner::new(poly, binom);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && y[end] == y[start] {
            end += 1;
        }
        let v = match engine {
            EngineRef::Raw(tables) => comb.raw_sample(tables, y[start], end, signed),
            EngineRef::Anchored(tables) => comb.anchored_sample(tables, end, signed),
        };
        out[start..end].fill(v);
        start = end;
    }
    out
}

/// A sample with its recursion tables, ready to evaluate a fixed kernel and
/// bandwidth at any number of query sets.
///
/// Building is sequential; a built evaluator is immutable and can be shared
/// across threads.
#[derive(Debug)]
pub struct ExactKde<F> {
    kernel: PolyExpKernel<F>,
    derivative: Option<SignedPolyExpDerivative<F>>,
    sample: SortedSample<F>,
    engine: Engine<F>,
    binom: Binomials<F>,
    eval_ops: AtomicU64,
}

impl<F: Scalar> ExactKde<F> {
    pub fn new(x: &[F], kernel: &PolyExpKernel<F>, h: F) -> Result<Self> {
        Self::with_recursion(x, kernel, h, Recursion::default())
    }

    pub fn with_recursion(x: &[F], kernel: &PolyExpKernel<F>, h: F, recursion: Recursion) -> Result<Self> {
        let sample = SortedSample::prepare(x, h)?;
        Self::from_sample(sample, kernel, recursion)
    }

    /// Builds over a prepared (possibly weighted) sample; the bandwidth is the
    /// sample's scale.
    pub fn from_sample(sample: SortedSample<F>, kernel: &PolyExpKernel<F>, recursion: Recursion) -> Result<Self> {
        let engine = match recursion {
            Recursion::Raw => Engine::Raw(CoefficientTables::build(&sample, kernel.alpha())?),
            Recursion::Anchored => Engine::Anchored(AnchoredTables::build(&sample, kernel.alpha())?),
        };
        Ok(ExactKde {
            kernel: kernel.clone(),
            derivative: kernel.derivative().ok(),
            binom: Binomials::new(kernel.alpha()),
            sample,
            engine,
            eval_ops: AtomicU64::new(0),
        })
    }

    pub fn sample(&self) -> &SortedSample<F> {
        &self.sample
    }

    pub fn recursion(&self) -> Recursion {
        match self.engine {
            Engine::Raw(_) => Recursion::Raw,
            Engine::Anchored(_) => Recursion::Anchored,
        }
    }

    /// The `ℓ`/`r` tables, when built with [`Recursion::Raw`].
    pub fn raw_tables(&self) -> Option<&CoefficientTables<F>> {
        match &self.engine {
            Engine::Raw(t) => Some(t),
            Engine::Anchored(_) => None,
        }
    }

    pub fn anchored_tables(&self) -> Option<&AnchoredTables<F>> {
        match &self.engine {
            Engine::Anchored(t) => Some(t),
            Engine::Raw(_) => None,
        }
    }

    pub fn kernel(&self) -> &PolyExpKernel<F> {
        &self.kernel
    }

    pub fn bandwidth(&self) -> F {
        self.sample.scale()
    }

    /// Table updates plus per-point recombination terms performed so far.
    pub fn op_count(&self) -> u64 {
        let build = match &self.engine {
            Engine::Raw(t) => t.op_count(),
            Engine::Anchored(t) => t.op_count(),
        };
        build + self.eval_ops.load(AtomicOrdering::Relaxed)
    }

    fn count_eval(&self, points: usize, poly_len: usize) {
        self.eval_ops.fetch_add((points * 2 * poly_len) as u64, AtomicOrdering::Relaxed);
    }

    fn evaluate(&self, poly: &[F], queries: Queries<'_, F>, signed: bool, factor: F) -> Result<Vec<F>> {
        let engine = self.engine.as_ref();
        let mut values = match queries {
            Queries::AtSamples => {
                let sorted = combine_samples(&self.sample, engine, poly, &self.binom, signed);
                let mut out = vec![F::zero(); sorted.len()];
                for (v, &i) in sorted.into_iter().zip(self.sample.order()) {
                    out[i] = v;
                }
                out
            }
            Queries::Points(points) => {
                let ctx = QueryContext::new(&self.sample, points)?;
                combine_queries(&self.sample, engine, poly, &self.binom, &ctx, signed)
            }
        };
        self.count_eval(values.len(), poly.len());
        for v in &mut values {
            *v = *v * factor;
        }
        Ok(values)
    }

    /// `f̂(q) = c / (n h) · Σ_k β_k S_k(q)`.
    pub fn density(&self, queries: Queries<'_, F>) -> Result<Vec<F>> {
        let factor = self.kernel.c() / (self.sample.total_weight() * self.bandwidth());
        self.evaluate(self.kernel.beta(), queries, false, factor)
    }

    /// `f̂′(q) = c / (n h²) · Σ_k γ_k D_k(q)` with `D_k` the signed sums.
    pub fn derivative(&self, queries: Queries<'_, F>) -> Result<Vec<F>> {
        let d = match &self.derivative {
            Some(d) => d,
            None => return Err(self.kernel.derivative().unwrap_err()),
        };
        let h = self.bandwidth();
        let factor = d.c() / (self.sample.total_weight() * h * h);
        self.evaluate(d.gamma(), queries, true, factor)
    }

    /// Leave-one-out densities `(n f̂(x_i) − K(0)/h) / (n − 1)`, input order.
    ///
    /// Only the point's own contribution is removed, so repeated values still
    /// see each other.
    pub fn loo_density(&self) -> Result<Vec<F>> {
        let n = self.sample.n();
        if n < 2 {
            return Err(KdeError::TooFewPoints { need: 2, got: n });
        }
        let nf = F::of_usize(n);
        let own = self.kernel.at_zero() / self.bandwidth();
        let full = self.density(Queries::AtSamples)?;
        Ok(full.into_iter().map(|v| (nf * v - own) / (nf - F::one())).collect())
    }
}

/// Exact density estimate of `x` with kernel `kernel` and bandwidth `h`.
pub fn kde<F: Scalar>(x: &[F], kernel: &PolyExpKernel<F>, h: F, queries: Queries<'_, F>) -> Result<Vec<F>> {
    ExactKde::new(x, kernel, h)?.density(queries)
}

/// Exact first-derivative estimate.
pub fn kde_deriv<F: Scalar>(x: &[F], kernel: &PolyExpKernel<F>, h: F, queries: Queries<'_, F>) -> Result<Vec<F>> {
    kernel.derivative()?;
    ExactKde::new(x, kernel, h)?.derivative(queries)
}

/// Leave-one-out density at each sample point, in input order.
pub fn loo_kde_at_samples<F: Scalar>(x: &[F], kernel: &PolyExpKernel<F>, h: F) -> Result<Vec<F>> {
    if x.len() < 2 {
        return Err(KdeError::TooFewPoints { need: 2, got: x.len() });
    }
    ExactKde::new(x, kernel, h)?.loo_density()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn k(alpha: usize) -> PolyExpKernel<f64> {
        PolyExpKernel::k_alpha(alpha).unwrap()
    }

    #[test]
    fn prepare_examples() {
        let s = SortedSample::prepare(&[3.0, 1.0, 2.0], 1.0).unwrap();
        assert_eq!(s.y(), &[-1.0, 0.0, 1.0]);
        assert_eq!(s.shift(), 2.0);
        assert_eq!(s.order(), &[1, 2, 0]);
        let s = SortedSample::prepare(&[5.0], 2.0).unwrap();
        assert_eq!(s.y(), &[0.0]);
        assert_eq!(s.shift(), 5.0);
        let s = SortedSample::prepare(&[0.0, 0.0, 0.0], 1.0).unwrap();
        assert_eq!(s.y(), &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn prepare_errors() {
        assert_eq!(SortedSample::<f64>::prepare(&[], 1.0).unwrap_err(), KdeError::EmptySample);
        assert!(matches!(SortedSample::prepare(&[1.0, f64::NAN], 1.0), Err(KdeError::NonFinite { index: 1, .. })));
        assert!(matches!(SortedSample::prepare(&[f64::INFINITY], 1.0), Err(KdeError::NonFinite { .. })));
        assert!(matches!(SortedSample::prepare(&[1.0], 0.0), Err(KdeError::InvalidBandwidth(_))));
        assert!(matches!(SortedSample::prepare(&[1.0], -2.0), Err(KdeError::InvalidBandwidth(_))));
    }

    #[test]
    fn single_point_tables() {
        let s = SortedSample::prepare(&[0.0], 1.0).unwrap();
        let t = CoefficientTables::build(&s, 0).unwrap();
        assert_eq!(t.ell(0, 1), 1.0);
        assert_eq!(t.r(0, 0), 1.0);
        assert_eq!(t.ell(0, 0), 0.0);
        assert_eq!(t.r(0, 1), 0.0);
    }

    #[test]
    fn two_point_tables() {
        // weighted median of {0, 1} is 0, so y = (0, 1)
        let s = SortedSample::from_sorted_weighted(&[0.0, 1.0], vec![1.0, 1.0], 1.0).unwrap();
        assert_eq!(s.y(), &[0.0, 1.0]);
        let t = CoefficientTables::build(&s, 1).unwrap();
        let e = (-1.0f64).exp();
        assert_relative_eq!(t.ell(1, 2), -1.0, max_relative = 1e-15);
        assert_relative_eq!(t.ell(0, 2), e + 1.0, max_relative = 1e-15);
        assert_relative_eq!(t.r(0, 1), e, max_relative = 1e-15);
        assert_eq!(t.r(0, 2), 0.0);
        assert_relative_eq!(t.r(0, 0), 1.0 + e, max_relative = 1e-15);
        assert_relative_eq!(t.r(1, 0), e, max_relative = 1e-15);
        assert_eq!(t.op_count(), 2 * 2 * 2);
    }

    #[test]
    fn tables_match_defining_sums() {
        // deterministic pseudo-random sample
        let mut state = 12345u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 6.0 - 3.0
        };
        let x: Vec<f64> = (0..100).map(|_| next()).collect();
        let s = SortedSample::prepare(&x, 0.7).unwrap();
        let t = CoefficientTables::build(&s, 4).unwrap();
        let y = s.y();
        let n = y.len();
        for k in 0..=4 {
            for j in 0..=n {
                let ell: f64 = (0..j).map(|i| (-y[i]).powi(k as i32) * (y[i] - y[j - 1]).exp()).sum();
                let r: f64 = if j == 0 {
                    (0..n).map(|i| y[i].powi(k as i32) * (y[0] - y[i]).exp()).sum()
                } else {
                    (j..n).map(|i| y[i].powi(k as i32) * (y[j - 1] - y[i]).exp()).sum()
                };
                let tol = 1e-12 * (1.0 + ell.abs());
                assert!((t.ell(k, j) - ell).abs() <= tol, "ell({k},{j})");
                let tol = 1e-12 * (1.0 + r.abs());
                assert!((t.r(k, j) - r).abs() <= tol, "r({k},{j})");
            }
        }
    }

    #[test]
    fn poly_exp_sum_examples() {
        let s = SortedSample::prepare(&[0.0], 1.0).unwrap();
        let t = CoefficientTables::build(&s, 1).unwrap();
        let q = QueryContext::new(&s, &[0.0]).unwrap();
        assert_eq!(poly_exp_sum(&s, &t, 0, &q, false).unwrap(), vec![1.0]);

        let s = SortedSample::prepare(&[-1.0, 1.0], 1.0).unwrap();
        let t = CoefficientTables::build(&s, 1).unwrap();
        let q = QueryContext::new(&s, &[0.0]).unwrap();
        let e = (-1.0f64).exp();
        assert_relative_eq!(poly_exp_sum(&s, &t, 0, &q, false).unwrap()[0], 2.0 * e, max_relative = 1e-15);
        assert!(poly_exp_sum(&s, &t, 1, &q, true).unwrap()[0].abs() < 1e-16);
        assert!(matches!(poly_exp_sum(&s, &t, 2, &q, false), Err(KdeError::DegreeExceedsTables { .. })));

        let other = SortedSample::prepare(&[0.0, 1.0, 2.0], 1.0).unwrap();
        let q_other = QueryContext::new(&other, &[0.0]).unwrap();
        assert!(matches!(poly_exp_sum(&s, &t, 0, &q_other, false), Err(KdeError::QueryMismatch(_))));
    }

    #[test]
    fn at_sample_sums_match_brute_force() {
        let x: [f64; 7] = [0.3, -1.2, 0.3, 2.5, 0.9, -0.4, 0.3];
        let s = SortedSample::prepare(&x, 0.8).unwrap();
        let t = CoefficientTables::build(&s, 3).unwrap();
        let y = s.y();
        for m in 0..=3 {
            let got = poly_exp_sum_at_samples(&s, &t, m, false).unwrap();
            for (j, &yj) in y.iter().enumerate() {
                let want: f64 = y.iter().map(|&yi| (yj - yi).abs().powi(m as i32) * (-(yj - yi).abs()).exp()).sum();
                assert_relative_eq!(got[j], want, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn kde_examples() {
        let k1 = k(1);
        assert_eq!(kde(&[0.0], &k1, 1.0, Queries::Points(&[0.0])).unwrap(), vec![0.25]);
        let v = kde(&[-1.0, 1.0], &k1, 1.0, Queries::Points(&[0.0])).unwrap();
        assert_relative_eq!(v[0], 0.5 * (-1.0f64).exp(), max_relative = 1e-14);
        let d = kde_deriv(&[-1.0, 1.0], &k1, 1.0, Queries::Points(&[0.0])).unwrap();
        assert!(d[0].abs() < 1e-16);
        let d = kde_deriv(&[0.0], &k1, 1.0, Queries::Points(&[1.0])).unwrap();
        assert_relative_eq!(d[0], -(-1.0f64).exp() / 4.0, max_relative = 1e-14);
    }

    #[test]
    fn queries_outside_and_between() {
        let x = [-3.0, -2.5, 0.0, 4.0];
        let k4 = k(4);
        let q = [-1e3, -10.0, -2.75, -2.5, 1.0, 4.0, 9.0, 1e3];
        let got = kde(&x, &k4, 0.5, Queries::Points(&q)).unwrap();
        for (qi, g) in q.iter().zip(&got) {
            let want: f64 = x.iter().map(|xi| k4.value((qi - xi) / 0.5)).sum::<f64>() / (4.0 * 0.5);
            assert!((g - want).abs() <= 1e-13 * want.max(1e-300), "q = {qi}: {g} vs {want}");
        }
        // far-away queries underflow to zero rather than producing NaN
        assert_eq!(got[0], 0.0);
        assert_eq!(got[7], 0.0);
    }

    #[test]
    fn at_samples_restores_input_order() {
        let x = [2.0, -1.0, 0.5, 7.0];
        let k1 = k(1);
        let at = kde(&x, &k1, 1.3, Queries::AtSamples).unwrap();
        let pts = kde(&x, &k1, 1.3, Queries::Points(&x)).unwrap();
        for (a, b) in at.iter().zip(&pts) {
            assert_relative_eq!(a, b, max_relative = 1e-13);
        }
    }

    #[test]
    fn loo_examples() {
        let k1 = k(1);
        let v = loo_kde_at_samples(&[0.0, 1.0], &k1, 1.0).unwrap();
        assert_relative_eq!(v[0], k1.value(1.0), max_relative = 1e-14);
        assert_relative_eq!(v[1], k1.value(1.0), max_relative = 1e-14);
        assert!(matches!(loo_kde_at_samples(&[0.0], &k1, 1.0), Err(KdeError::TooFewPoints { .. })));
    }

    #[test]
    fn derivative_requires_smooth_kernel() {
        let err = kde_deriv(&[0.0, 1.0], &k(0), 1.0, Queries::AtSamples).unwrap_err();
        assert!(matches!(err, KdeError::NotDifferentiable { .. }));
    }

    #[test]
    fn precision_guard() {
        let x = [0.0, 1e40];
        let err = kde(&x, &k(10), 1.0, Queries::AtSamples).unwrap_err();
        assert!(matches!(err, KdeError::PrecisionLoss { .. }));
        assert!(kde(&x, &k(0), 1.0, Queries::AtSamples).is_ok());
    }

    #[test]
    fn large_gaps_stay_finite() {
        let x = [0.0, 5000.0];
        let v = kde(&x, &k(1), 1.0, Queries::Points(&[2500.0, 0.0, 5000.0])).unwrap();
        assert_eq!(v[0], 0.0);
        assert_relative_eq!(v[1], 0.125, max_relative = 1e-14);
        assert_relative_eq!(v[2], 0.125, max_relative = 1e-14);
    }

    #[test]
    fn raw_and_anchored_agree() {
        let x = [0.3, -1.2, 0.3, 2.5, 0.9, -0.4, 1.7, 0.3];
        let q = [-3.0, -1.2, 0.0, 0.3, 0.31, 2.0, 6.0];
        for alpha in [0, 1, 4, 7] {
            let kern = k(alpha);
            let raw = ExactKde::with_recursion(&x, &kern, 0.7, Recursion::Raw).unwrap();
            let anc = ExactKde::with_recursion(&x, &kern, 0.7, Recursion::Anchored).unwrap();
            assert!(raw.raw_tables().is_some() && anc.anchored_tables().is_some());
            for queries in [Queries::AtSamples, Queries::Points(&q)] {
                let a = raw.density(queries).unwrap();
                let b = anc.density(queries).unwrap();
                for (u, v) in a.iter().zip(&b) {
                    assert_relative_eq!(u, v, max_relative = 1e-11);
                }
                if alpha > 0 {
                    let a = raw.derivative(queries).unwrap();
                    let b = anc.derivative(queries).unwrap();
                    for (u, v) in a.iter().zip(&b) {
                        assert!((u - v).abs() < 1e-11, "{u} vs {v}");
                    }
                }
            }
        }
    }

    #[test]
    fn single_precision_runs() {
        let x: Vec<f32> = vec![-0.5, 0.1, 0.2, 1.4];
        let k1 = PolyExpKernel::<f32>::k_alpha(1).unwrap();
        let v = kde(&x, &k1, 0.5, Queries::AtSamples).unwrap();
        let want: f32 = x.iter().map(|xi| k1.value((x[0] - xi) / 0.5)).sum::<f32>() / 2.0;
        assert!((v[0] - want).abs() < 1e-5);
    }
}
