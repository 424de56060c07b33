//! Formal eigenvectors, divergence of their partial norms, finite-section
//! eigenvalues and pseudospectrum grids.
//!
//! The eigen-system `U x = lambda x` reduces to `x_{n+2} + q x_{n+1} + x_n
//! = 0` with `x_2 = -q x_1`, `q = (r - lambda)/s`. Its solution is never
//! in l_p: it grows linearly at the endpoints (double root), oscillates with
//! constant amplitude on the open segment, and grows geometrically off it.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::{char_roots, CharRoots, FiniteSequence, TriBandParams};
use crate::par::Execution;
use crate::spaces::{SpaceKind, SpaceSpec};

/// Mantissas are renormalised once they pass this magnitude.
const RESCALE_AT: f64 = 1e150;

/// Checkpoint ladder used by [`no_eigenvalue_verdict`].
pub const CHECKPOINTS: [usize; 4] = [10, 100, 1_000, 10_000];

/// The verdict requires the p-th power partial sum to grow tenfold from
/// 10^2 to 10^4 terms. An l_p sequence would have the ratio tend to 1;
/// every formal eigenvector grows at least linearly.
pub const VERDICT_SUM_RATIO: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecurrenceCase {
    /// `q = ±2`.
    DoubleRoot,
    DistinctRoots,
}

/// How the formal eigenvector behaves, which fixes the checkpoint ratios.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowthClass {
    /// `x_n = ±n x_1`.
    Polynomial,
    /// `|alpha1| = |alpha2| = 1`, bounded oscillation.
    Oscillating,
    /// `|alpha2| > 1`.
    Geometric,
}

/// One entry `mantissa * exp(ln_scale)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub mantissa: Complex64,
    pub ln_scale: f64,
}

impl Term {
    pub fn value(&self) -> Complex64 {
        self.mantissa * self.ln_scale.exp()
    }

    pub fn ln_abs(&self) -> f64 {
        self.mantissa.norm().ln() + self.ln_scale
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecurrenceSolution {
    pub lambda: Complex64,
    pub case: RecurrenceCase,
    pub x1: Complex64,
    pub roots: CharRoots,
}

impl RecurrenceSolution {
    pub fn new(op: &TriBandParams, lambda: Complex64, x1: Complex64) -> Result<Self> {
        if x1 == Complex64::new(0.0, 0.0) {
            return Err(Error::ZeroSeed);
        }
        if !x1.is_finite() {
            return Err(Error::NonFinite("x1"));
        }
        let roots = char_roots(op, lambda)?;
        let case = if roots.is_double_root {
            RecurrenceCase::DoubleRoot
        } else {
            RecurrenceCase::DistinctRoots
        };
        Ok(Self {
            lambda,
            case,
            x1,
            roots,
        })
    }

    pub fn growth(&self) -> GrowthClass {
        match self.case {
            RecurrenceCase::DoubleRoot => GrowthClass::Polynomial,
            RecurrenceCase::DistinctRoots if self.roots.alpha1.norm() >= 1.0 - 1e-12 => GrowthClass::Oscillating,
            RecurrenceCase::DistinctRoots => GrowthClass::Geometric,
        }
    }

    /// `x_1, x_2, ...` without end.
    pub fn terms(&self) -> Terms {
        Terms {
            sol: *self,
            n: 0,
            a: self.x1,
            b: -self.roots.ratio_q * self.x1,
            ln_scale: 0.0,
        }
    }

    /// Closed form `(alpha2^n - alpha1^n)/(alpha2 - alpha1) x_1`, or
    /// `±n x_1` at a double root.
    pub fn closed_form(&self, n: usize) -> Complex64 {
        assert!(n >= 1, "terms are 1-based");
        match self.case {
            RecurrenceCase::DoubleRoot => double_root_term(self.roots.ratio_q, n) * self.x1,
            RecurrenceCase::DistinctRoots => {
                let (a1, a2) = (self.roots.alpha1, self.roots.alpha2);
                let e = n as i32;
                (a2.powi(e) - a1.powi(e)) / (a2 - a1) * self.x1
            }
        }
    }
}

fn double_root_term(q: Complex64, n: usize) -> Complex64 {
    let n_f = n as f64;
    if q.re > 0.0 {
        // q = 2: (-1)^(n+1) n
        Complex64::new(if n % 2 == 1 { n_f } else { -n_f }, 0.0)
    } else {
        Complex64::new(n_f, 0.0)
    }
}

/// Iterator over the formal eigenvector in scaled form.
#[derive(Debug, Clone)]
pub struct Terms {
    sol: RecurrenceSolution,
    n: usize,
    a: Complex64,
    b: Complex64,
    ln_scale: f64,
}

impl Iterator for Terms {
    type Item = Term;

    fn next(&mut self) -> Option<Term> {
        self.n += 1;
        if self.sol.case == RecurrenceCase::DoubleRoot {
            let t = double_root_term(self.sol.roots.ratio_q, self.n) * self.sol.x1;
            return Some(Term {
                mantissa: t,
                ln_scale: 0.0,
            });
        }
        let out = Term {
            mantissa: self.a,
            ln_scale: self.ln_scale,
        };
        let next = -self.sol.roots.ratio_q * self.b - self.a;
        self.a = self.b;
        self.b = next;
        let m = self.a.norm().max(self.b.norm());
        if m > RESCALE_AT {
            self.a /= m;
            self.b /= m;
            self.ln_scale += m.ln();
        }
        Some(out)
    }
}

/// First `len` entries of the formal eigenvector. Fails with
/// [`Error::Overflow`] when an entry leaves the f64 range; use
/// [`RecurrenceSolution::terms`] for those.
pub fn formal_eigenvector(op: &TriBandParams, lambda: Complex64, len: usize, x1: Complex64) -> Result<FiniteSequence> {
    let sol = RecurrenceSolution::new(op, lambda, x1)?;
    let mut out = Vec::with_capacity(len);
    for (index, t) in sol.terms().take(len).enumerate() {
        let v = t.value();
        if !v.is_finite() {
            return Err(Error::Overflow { index });
        }
        out.push(v);
    }
    FiniteSequence::new(out)
}

/// Running `ln sum |x_n|^p` in log-sum-exp form.
#[derive(Debug, Clone, Copy)]
struct LogSum {
    ln_max: f64,
    rest: f64,
}

impl LogSum {
    fn new() -> Self {
        Self {
            ln_max: f64::NEG_INFINITY,
            rest: 0.0,
        }
    }

    fn add_ln(&mut self, v: f64) {
        if v == f64::NEG_INFINITY {
            return;
        }
        if v > self.ln_max {
            self.rest = self.rest * (self.ln_max - v).exp() + 1.0;
            self.ln_max = v;
        } else {
            self.rest += (v - self.ln_max).exp();
        }
    }

    fn ln(&self) -> f64 {
        self.ln_max + self.rest.ln()
    }
}

fn validate_checkpoints(checkpoints: &[usize]) -> Result<()> {
    if checkpoints.windows(2).any(|w| w[0] >= w[1]) || checkpoints.first() == Some(&0) {
        return Err(Error::InvalidArgument(
            "checkpoints must be positive and strictly increasing".into(),
        ));
    }
    Ok(())
}

/// `ln` of the partial l_p norms of `stream` at each checkpoint.
fn ln_partial_norms<I: Iterator<Item = f64>>(ln_abs: I, p: f64, checkpoints: &[usize]) -> Vec<f64> {
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut acc = LogSum::new();
    let mut cps = checkpoints.iter().peekable();
    for (i, v) in ln_abs.enumerate() {
        acc.add_ln(p * v);
        while cps.peek() == Some(&&(i + 1)) {
            out.push(acc.ln() / p);
            cps.next();
        }
        if cps.peek().is_none() {
            break;
        }
    }
    out
}

/// Log-magnitudes of the backward differences `x_n - x_{n-1}`, `x_0 = 0`.
fn ln_abs_differences(terms: Terms) -> impl Iterator<Item = f64> {
    let mut prev: Option<Term> = None;
    terms.map(move |t| {
        let d = match prev {
            None => t.mantissa,
            Some(pt) => t.mantissa - pt.mantissa * (pt.ln_scale - t.ln_scale).exp(),
        };
        prev = Some(t);
        d.norm().ln() + t.ln_scale
    })
}

/// Natural logarithms of the l_p norms of the first N entries of the
/// formal eigenvector (seed 1), one per checkpoint.
pub fn partial_lp_log_norms(op: &TriBandParams, lambda: Complex64, p: f64, checkpoints: &[usize]) -> Result<Vec<f64>> {
    SpaceSpec::lp(p)?;
    validate_checkpoints(checkpoints)?;
    let sol = RecurrenceSolution::new(op, lambda, Complex64::new(1.0, 0.0))?;
    Ok(ln_partial_norms(sol.terms().map(|t| t.ln_abs()), p, checkpoints))
}

/// Partial l_p norms; may be `+inf` past the f64 range, in which case the
/// log form is authoritative.
pub fn partial_lp_norms(op: &TriBandParams, lambda: Complex64, p: f64, checkpoints: &[usize]) -> Result<Vec<f64>> {
    Ok(partial_lp_log_norms(op, lambda, p, checkpoints)?
        .into_iter()
        .map(f64::exp)
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceProfile {
    pub growth: GrowthClass,
    pub checkpoints: Vec<usize>,
    pub ln_norms: Vec<f64>,
}

/// Partial-norm profile in `space` along [`CHECKPOINTS`]. On bv_p the
/// differenced sequence is measured.
pub fn divergence_profile(op: &TriBandParams, lambda: Complex64, space: SpaceSpec) -> Result<DivergenceProfile> {
    let space = SpaceSpec::new(space.kind, space.p)?;
    let sol = RecurrenceSolution::new(op, lambda, Complex64::new(1.0, 0.0))?;
    let ln_norms = match space.kind {
        SpaceKind::SequenceLp => ln_partial_norms(sol.terms().map(|t| t.ln_abs()), space.p, &CHECKPOINTS),
        SpaceKind::SequenceBVp => ln_partial_norms(ln_abs_differences(sol.terms()), space.p, &CHECKPOINTS),
    };
    Ok(DivergenceProfile {
        growth: sol.growth(),
        checkpoints: CHECKPOINTS.to_vec(),
        ln_norms,
    })
}

/// Always `true` for this operator: `lambda` is not an eigenvalue of U or of
/// its adjoint (which is U again). Decided from the checkpoint ladder.
pub fn no_eigenvalue_verdict(op: &TriBandParams, lambda: Complex64, space: SpaceSpec) -> Result<bool> {
    let prof = divergence_profile(op, lambda, space)?;
    let p = space.p;
    // S(N) = norm(N)^p
    let ln_sum_ratio = p * (prof.ln_norms[3] - prof.ln_norms[1]);
    Ok(ln_sum_ratio >= VERDICT_SUM_RATIO.ln())
}

/// `r + 2s cos(j pi / (N+1))`, `j = 1..=N`, sorted by real then imaginary part.
pub fn closed_form_eigenvalues(op: &TriBandParams, order: usize) -> Vec<Complex64> {
    let mut out: Vec<Complex64> = (1..=order)
        .map(|j| op.r + op.s * 2.0 * (j as f64 * std::f64::consts::PI / (order + 1) as f64).cos())
        .collect();
    out.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    out
}

/// Number of eigenvalues of the symmetric tridiagonal matrix below `x`.
fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = diag[0] - x;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..diag.len() {
        let e = off[i - 1];
        let denom = if q == 0.0 {
            f64::EPSILON * (e.abs() + f64::MIN_POSITIVE)
        } else {
            q
        };
        q = diag[i] - x - e * e / denom;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// All eigenvalues of a real symmetric tridiagonal matrix by Sturm-sequence
/// bisection, ascending.
pub fn sturm_eigenvalues(diag: &[f64], off: &[f64], exec: Execution) -> Vec<f64> {
    let n = diag.len();
    if n == 0 {
        return Vec::new();
    }
    assert_eq!(off.len() + 1, n, "off-diagonal must have length n - 1");
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..n {
        let radius = if i > 0 { off[i - 1].abs() } else { 0.0 } + if i + 1 < n { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - radius);
        hi = hi.max(diag[i] + radius);
    }
    let pad = f64::EPSILON * lo.abs().max(hi.abs()).max(1.0);
    let (lo, hi) = (lo - pad, hi + pad);
    exec.map(n, |k| {
        let (mut a, mut b) = (lo, hi);
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            if sturm_count(diag, off, mid) > k {
                b = mid;
            } else {
                a = mid;
            }
        }
        0.5 * (a + b)
    })
}

/// Eigenvalues of the order-N truncation. Real parameters go through the
/// Sturm solver; complex ones use the closed form (the truncation is
/// complex-symmetric, not Hermitian).
pub fn finite_section_eigenvalues(op: &TriBandParams, order: usize) -> Result<Vec<Complex64>> {
    finite_section_eigenvalues_with(op, order, Execution::default())
}

pub fn finite_section_eigenvalues_with(op: &TriBandParams, order: usize, exec: Execution) -> Result<Vec<Complex64>> {
    if order == 0 {
        return Err(Error::InvalidArgument("truncation order must be at least 1".into()));
    }
    if !op.is_real() {
        return Ok(closed_form_eigenvalues(op, order));
    }
    let diag = vec![op.r.re; order];
    let off = vec![op.s.re; order - 1];
    Ok(sturm_eigenvalues(&diag, &off, exec)
        .into_iter()
        .map(|v| Complex64::new(v, 0.0))
        .collect())
}

/// Hausdorff distance between a finite point set and the segment from
/// `a` to `b`, via the segment sampled at `samples + 1` points plus the
/// exact projection of each set point.
pub fn hausdorff_to_segment(points: &[Complex64], a: Complex64, b: Complex64) -> f64 {
    let dir = b - a;
    let len2 = dir.norm_sqr();
    let project = |z: Complex64| {
        let t = if len2 > 0.0 {
            ((z - a) * dir.conj()).re / len2
        } else {
            0.0
        };
        a + dir * t.clamp(0.0, 1.0)
    };
    let set_to_segment = points.iter().map(|&z| (z - project(z)).norm()).fold(0.0, f64::max);

    // Segment to set: the farthest segment point from the set lies at an
    // endpoint or midway between consecutive projections.
    let mut ts: Vec<f64> = points
        .iter()
        .map(|&z| {
            if len2 > 0.0 {
                (((z - a) * dir.conj()).re / len2).clamp(0.0, 1.0)
            } else {
                0.0
            }
        })
        .collect();
    ts.sort_by(f64::total_cmp);
    let dist_to_set = |w: Complex64| points.iter().map(|&z| (z - w).norm()).fold(f64::INFINITY, f64::min);
    let mut candidates = vec![0.0, 1.0];
    candidates.extend(ts.windows(2).map(|w| 0.5 * (w[0] + w[1])));
    let segment_to_set = candidates
        .into_iter()
        .map(|t| dist_to_set(a + dir * t))
        .fold(0.0, f64::max);

    set_to_segment.max(segment_to_set)
}

/// Smallest singular value of `U_N - lambda I`. The truncation is
/// `r I + s T` with `T` real symmetric, so it is normal and its singular
/// values are `|lambda_j - lambda|`.
pub fn smallest_singular_value(op: &TriBandParams, order: usize, lambda: Complex64) -> f64 {
    let pi = std::f64::consts::PI;
    (1..=order)
        .map(|j| (op.r + op.s * 2.0 * (j as f64 * pi / (order + 1) as f64).cos() - lambda).norm())
        .fold(f64::INFINITY, f64::min)
}

/// Axis-aligned rectangle in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Region {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        let all = [re_min, re_max, im_min, im_max];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("region"));
        }
        if re_min > re_max || im_min > im_max {
            return Err(Error::InvalidArgument("region bounds must satisfy min <= max".into()));
        }
        Ok(Self {
            re_min,
            re_max,
            im_min,
            im_max,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub lambda: Complex64,
    /// `1 / sigma_min(U_N - lambda I)`, infinite at eigenvalues.
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PseudospectrumGrid {
    pub re_points: usize,
    pub im_points: usize,
    /// Row-major, imaginary part outer.
    pub points: Vec<GridPoint>,
}

fn axis(min: f64, max: f64, count: usize, i: usize) -> f64 {
    if count <= 1 {
        min
    } else {
        min + (max - min) * i as f64 / (count - 1) as f64
    }
}

pub fn pseudospectrum_grid(
    op: &TriBandParams,
    region: Region,
    re_points: usize,
    im_points: usize,
    order: usize,
) -> Result<PseudospectrumGrid> {
    pseudospectrum_grid_with(op, region, re_points, im_points, order, Execution::default())
}

pub fn pseudospectrum_grid_with(
    op: &TriBandParams,
    region: Region,
    re_points: usize,
    im_points: usize,
    order: usize,
    exec: Execution,
) -> Result<PseudospectrumGrid> {
    if order == 0 {
        return Err(Error::InvalidArgument("truncation order must be at least 1".into()));
    }
    let total = re_points * im_points;
    let points = exec.map(total, |idx| {
        let (row, col) = (idx / re_points, idx % re_points);
        let lambda = Complex64::new(
            axis(region.re_min, region.re_max, re_points, col),
            axis(region.im_min, region.im_max, im_points, row),
        );
        let sigma = smallest_singular_value(op, order, lambda);
        GridPoint {
            lambda,
            value: if sigma == 0.0 { f64::INFINITY } else { 1.0 / sigma },
        }
    });
    Ok(PseudospectrumGrid {
        re_points,
        im_points,
        points,
    })
}
