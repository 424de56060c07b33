//! `(U - lambda I)^{-1}` through its closed-form Green's kernel.
//!
//! Kernel indices are 1-based: `G(k, n)` is the entry in row `k`, column
//! `n`, and a 0-based [`FiniteSequence`] coordinate `y[j]` pairs with
//! column `n = j + 1`. With `alpha = alpha1` (the root inside the unit
//! disc),
//!
//! ```text
//! G(k, n) = (alpha^(|k-n|+1) - alpha^(k+n+1)) / (s (alpha^2 - 1))
//! ```
//!
//! which solves `s G(k-1,n) + (r-lambda) G(k,n) + s G(k+1,n) = delta_kn`
//! with `G(0, n) = 0`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator::{char_roots, truncation_matrix, CharRoots, FiniteSequence, TriBandParams};
use crate::spectrum::{classify_lambda, SpectralClass, DEFAULT_TOL};

/// Points with `|alpha1| > 1 - NEAR_SEGMENT_MARGIN` are refused by default.
pub const NEAR_SEGMENT_MARGIN: f64 = 1e-9;

/// Upper limit on the column recursion in the norm sweeps.
const MAX_NORM_COLUMNS: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolventKernel {
    pub op: TriBandParams,
    pub lambda: Complex64,
    pub roots: CharRoots,
    pub normalization: Complex64,
}

impl ResolventKernel {
    pub fn new(op: &TriBandParams, lambda: Complex64) -> Result<Self> {
        Self::with_margin(op, lambda, NEAR_SEGMENT_MARGIN)
    }

    /// Accepts `lambda` when `|alpha1| <= 1 - margin` and `|alpha1| < 1`.
    /// A zero margin admits every point strictly off the unit circle.
    pub fn with_margin(op: &TriBandParams, lambda: Complex64, margin: f64) -> Result<Self> {
        let roots = char_roots(op, lambda)?;
        let a = roots.alpha1.norm();
        if roots.is_double_root || a >= 1.0 || a > 1.0 - margin {
            return Err(Error::ResolventUndefined { lambda, alpha1_abs: a });
        }
        let alpha = roots.alpha1;
        let normalization = Complex64::new(1.0, 0.0) / (op.s * (alpha * alpha - 1.0));
        Ok(Self {
            op: *op,
            lambda,
            roots,
            normalization,
        })
    }

    pub fn alpha1(&self) -> Complex64 {
        self.roots.alpha1
    }

    /// `G(k, n)`, both indices 1-based.
    pub fn entry(&self, k: usize, n: usize) -> Complex64 {
        assert!(k >= 1 && n >= 1, "kernel indices are 1-based");
        let alpha = self.roots.alpha1;
        let near = pow(alpha, k.abs_diff(n) + 1);
        // alpha^(|k-n|+1) (1 - alpha^(2 min(k,n))) equals the two-term form
        // without subtracting two tiny powers.
        let far = pow(alpha, 2 * k.min(n));
        near * (Complex64::new(1.0, 0.0) - far) * self.normalization
    }

    /// `x_k = sum_n G(k, n) y_n` for `k = 1..=rows`, returned 0-based.
    pub fn apply(&self, y: &FiniteSequence, rows: usize) -> FiniteSequence {
        let x = (1..=rows)
            .map(|k| {
                y.iter()
                    .enumerate()
                    .filter(|(_, v)| v.re != 0.0 || v.im != 0.0)
                    .map(|(j, &v)| self.entry(k, j + 1) * v)
                    .sum()
            })
            .collect();
        FiniteSequence::from_vec_unchecked(x)
    }

    /// `sum_k |G(k, n)|` for one column, infinite tail summed in closed form.
    pub fn column_abs_sum(&self, n: usize) -> f64 {
        assert!(n >= 1, "kernel indices are 1-based");
        let a = self.roots.alpha1.norm();
        let head: f64 = (1..=n).map(|k| self.entry(k, n).norm()).sum();
        head + self.tail_weight(n) * a * a / (1.0 - a)
    }

    /// `|1 - alpha^(2n)| |normalization|`: the common factor of every entry
    /// below the diagonal of column `n`.
    fn tail_weight(&self, n: usize) -> f64 {
        (Complex64::new(1.0, 0.0) - pow(self.roots.alpha1, 2 * n)).norm() * self.normalization.norm()
    }

    /// Supremum of the absolute column sums. Uses
    /// `A(n) = |alpha| (A(n-1) + |1 - alpha^(2n)|)` for the part on and above
    /// the diagonal.
    fn sup_column_sum(&self) -> f64 {
        let alpha = self.roots.alpha1;
        let a = alpha.norm();
        let scale = self.normalization.norm();
        let tail_factor = a * a / (1.0 - a);

        let mut head = 0.0;
        let mut power = Complex64::new(1.0, 0.0);
        let alpha_sq = alpha * alpha;
        let mut best: f64 = 0.0;
        for _ in 1..=MAX_NORM_COLUMNS {
            power *= alpha_sq;
            let w = (Complex64::new(1.0, 0.0) - power).norm();
            head = a * (head + w);
            best = best.max(scale * (head + w * tail_factor));
            if power.norm() < 1e-17 {
                break;
            }
        }
        best.max(self.line_sum_limit())
    }

    /// Supremum of the absolute row sums, accumulated left of the diagonal
    /// by `B(k+1) = |alpha| B(k) + |alpha|^2 |1 - alpha^(2k)|`.
    fn sup_row_sum(&self) -> f64 {
        let alpha = self.roots.alpha1;
        let a = alpha.norm();
        let scale = self.normalization.norm();
        let right_factor = a / (1.0 - a);

        let mut left = 0.0;
        let mut power = Complex64::new(1.0, 0.0);
        let alpha_sq = alpha * alpha;
        let mut best: f64 = 0.0;
        for _ in 1..=MAX_NORM_COLUMNS {
            power *= alpha_sq;
            let w = (Complex64::new(1.0, 0.0) - power).norm();
            best = best.max(scale * (left + w * right_factor));
            left = a * left + a * a * w;
            if power.norm() < 1e-17 {
                break;
            }
        }
        best.max(self.line_sum_limit())
    }

    /// Line sum far from the corner, where `|1 - alpha^(2n)| -> 1`.
    fn line_sum_limit(&self) -> f64 {
        let a = self.roots.alpha1.norm();
        self.normalization.norm() * (a / (1.0 - a) + a * a / (1.0 - a))
    }
}

fn pow(z: Complex64, e: usize) -> Complex64 {
    match u32::try_from(e) {
        Ok(e) => z.powu(e),
        Err(_) => {
            if z.norm() < 1.0 {
                Complex64::new(0.0, 0.0)
            } else {
                z.powf(e as f64)
            }
        }
    }
}

pub fn kernel_entry(op: &TriBandParams, lambda: Complex64, k: usize, n: usize) -> Result<Complex64> {
    if k == 0 || n == 0 {
        return Err(Error::InvalidArgument("kernel indices are 1-based".into()));
    }
    Ok(ResolventKernel::new(op, lambda)?.entry(k, n))
}

/// Entries with exponents `|k-n|+1` and `|k-n|+3`. These agree with the
/// true inverse only when `min(k, n) = 1`; kept as a negative control.
pub fn shifted_exponent_kernel_entry(op: &TriBandParams, lambda: Complex64, k: usize, n: usize) -> Result<Complex64> {
    if k == 0 || n == 0 {
        return Err(Error::InvalidArgument("kernel indices are 1-based".into()));
    }
    let kernel = ResolventKernel::new(op, lambda)?;
    let alpha = kernel.alpha1();
    let d = k.abs_diff(n);
    Ok((pow(alpha, d + 1) - pow(alpha, d + 3)) * kernel.normalization)
}

/// Max over rows `1..=rows` of the defining-equation residual of column `n`
/// of an arbitrary kernel `g` (1-based, `g(0, n)` taken as 0).
pub fn column_residual<G>(op: &TriBandParams, lambda: Complex64, n: usize, rows: usize, g: G) -> f64
where
    G: Fn(usize, usize) -> Complex64,
{
    let at = |k: usize| if k == 0 { Complex64::new(0.0, 0.0) } else { g(k, n) };
    (1..=rows)
        .map(|k| {
            let delta = if k == n { 1.0 } else { 0.0 };
            (op.s * at(k - 1) + (op.r - lambda) * at(k) + op.s * at(k + 1) - delta).norm()
        })
        .fold(0.0, f64::max)
}

pub fn apply_resolvent(
    op: &TriBandParams,
    lambda: Complex64,
    y: &FiniteSequence,
    rows: usize,
) -> Result<FiniteSequence> {
    Ok(ResolventKernel::new(op, lambda)?.apply(y, rows))
}

/// Reciprocal condition estimate below which the oracle reports singularity.
fn singular_threshold(order: usize) -> f64 {
    10.0 * order as f64 * f64::EPSILON
}

/// Solves the order-N truncation `(U_N - lambda I) x = y` by tridiagonal
/// Gaussian elimination with partial pivoting. `y` is zero-padded or cut
/// to length N.
pub fn dense_solve_oracle(
    op: &TriBandParams,
    lambda: Complex64,
    y: &FiniteSequence,
    order: usize,
) -> Result<FiniteSequence> {
    let m = truncation_matrix(op, order, Some(lambda))?;
    let mut rhs: Vec<Complex64> = (0..order).map(|j| y.coord(j as isize)).collect();
    let x = solve_tridiagonal(m.sub(), m.diag(), m.sup(), &mut rhs)?;
    FiniteSequence::new(x)
}

/// Tridiagonal solve with row interchanges, LAPACK `gtsv` ordering.
pub fn solve_tridiagonal(
    sub: &[Complex64],
    diag: &[Complex64],
    sup: &[Complex64],
    rhs: &mut [Complex64],
) -> Result<Vec<Complex64>> {
    let n = diag.len();
    assert!(n >= 1 && sub.len() + 1 == n && sup.len() + 1 == n && rhs.len() == n);
    let norm_inf = (0..n)
        .map(|i| {
            let mut row = diag[i].norm();
            if i > 0 {
                row += sub[i - 1].norm();
            }
            if i + 1 < n {
                row += sup[i].norm();
            }
            row
        })
        .fold(0.0, f64::max);

    let mut d = diag.to_vec();
    let mut du = sup.to_vec();
    let mut dl = sub.to_vec(); // becomes the second superdiagonal fill
    let b = rhs;
    let zero = Complex64::new(0.0, 0.0);

    for i in 0..n.saturating_sub(1) {
        if d[i].norm() >= dl[i].norm() {
            if d[i] != zero {
                let fact = dl[i] / d[i];
                d[i + 1] -= fact * du[i];
                b[i + 1] -= fact * b[i];
            }
            dl[i] = zero;
        } else {
            let fact = d[i] / dl[i];
            d[i] = dl[i];
            let temp = d[i + 1];
            d[i + 1] = du[i] - fact * temp;
            if i + 2 < n {
                dl[i] = du[i + 1];
                du[i + 1] = -fact * dl[i];
            } else {
                dl[i] = zero;
            }
            du[i] = temp;
            let temp = b[i];
            b[i] = b[i + 1];
            b[i + 1] = temp - fact * b[i + 1];
        }
    }

    let min_pivot = d.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
    let rcond = if norm_inf > 0.0 { min_pivot / norm_inf } else { 0.0 };
    if rcond.is_nan() || rcond <= singular_threshold(n) {
        return Err(Error::SingularTruncation { order: n, rcond });
    }

    let mut x = vec![zero; n];
    x[n - 1] = b[n - 1] / d[n - 1];
    if n > 1 {
        x[n - 2] = (b[n - 2] - du[n - 2] * x[n - 1]) / d[n - 2];
    }
    for j in (0..n.saturating_sub(2)).rev() {
        x[j] = (b[j] - du[j] * x[j + 1] - dl[j] * x[j + 2]) / d[j];
    }
    Ok(x)
}

/// `||(U - lambda I)^{-1}||` on l_1: supremum of absolute column sums.
pub fn resolvent_norm_l1(op: &TriBandParams, lambda: Complex64) -> Result<f64> {
    Ok(ResolventKernel::new(op, lambda)?.sup_column_sum())
}

/// `||(U - lambda I)^{-1}||` on l_inf: supremum of absolute row sums.
pub fn resolvent_norm_linf(op: &TriBandParams, lambda: Complex64) -> Result<f64> {
    Ok(ResolventKernel::new(op, lambda)?.sup_row_sum())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LpCertificate {
    pub l1_norm: f64,
    pub linf_norm: f64,
    pub lp_bounded: bool,
}

/// Bounded on l_1 and on l_inf, hence on every l_p by interpolation. Points
/// on the segment report infinite norms.
pub fn resolvent_in_lp_certificate(op: &TriBandParams, lambda: Complex64) -> Result<LpCertificate> {
    let unbounded = LpCertificate {
        l1_norm: f64::INFINITY,
        linf_norm: f64::INFINITY,
        lp_bounded: false,
    };
    if classify_lambda(op, lambda, DEFAULT_TOL)?.class == SpectralClass::ContinuousSpectrum {
        return Ok(unbounded);
    }
    let kernel = match ResolventKernel::with_margin(op, lambda, 0.0) {
        Ok(k) => k,
        Err(Error::ResolventUndefined { .. }) => return Ok(unbounded),
        Err(e) => return Err(e),
    };
    let l1_norm = kernel.sup_column_sum();
    let linf_norm = kernel.sup_row_sum();
    Ok(LpCertificate {
        l1_norm,
        linf_norm,
        lp_bounded: l1_norm.is_finite() && linf_norm.is_finite(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn op01() -> TriBandParams {
        TriBandParams::real(0.0, 1.0).unwrap()
    }

    // Values frozen from the pivoted dense solve at N = 200 (see
    // tests/oracles.rs for the independent nalgebra LU run).
    #[test]
    fn kernel_examples() {
        let op = op01();
        let l = c(3.0, 0.0);
        assert_abs_diff_eq!(
            kernel_entry(&op, l, 1, 1).unwrap().re,
            -0.381966011250105,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            kernel_entry(&op, l, 2, 2).unwrap().re,
            -0.437694101250946,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            kernel_entry(&op, l, 2, 1).unwrap().re,
            -0.145898033750316,
            epsilon = 1e-14
        );
        assert_eq!(
            kernel_entry(&op, l, 0, 1),
            Err(Error::InvalidArgument("kernel indices are 1-based".into()))
        );
    }

    #[test]
    fn kernel_refuses_segment() {
        let op = op01();
        for l in [c(0.0, 0.0), c(2.0, 0.0), c(-1.3, 0.0)] {
            assert!(matches!(
                kernel_entry(&op, l, 1, 1),
                Err(Error::ResolventUndefined { .. })
            ));
        }
        // inside the resolvent set but within the margin
        assert!(ResolventKernel::new(&op, c(2.0 + 1e-19, 1e-19)).is_err());
    }

    #[test]
    fn apply_examples() {
        let op = op01();
        let y = FiniteSequence::unit(0, 1).unwrap();
        let x = apply_resolvent(&op, c(3.0, 0.0), &y, 3).unwrap();
        let want = [-0.381966011250105, -0.145898033750316, -0.0557280900008419];
        for (got, w) in x.iter().zip(want) {
            assert_abs_diff_eq!(got.re, w, epsilon = 1e-14);
            assert_eq!(got.im, 0.0);
        }
        let zero = apply_resolvent(&op, c(0.0, 5.0), &FiniteSequence::zeros(4), 10).unwrap();
        assert!(zero.is_zero());
        assert!(apply_resolvent(&op, c(1.0, 0.0), &y, 3).is_err());
    }

    #[test]
    fn apply_round_trip() {
        let op = TriBandParams::new(c(1.0, 0.0), c(1.0, 1.0)).unwrap();
        let lambda = c(4.0, -3.0);
        let y = FiniteSequence::new(vec![c(1.0, 0.0), c(0.0, -2.0), c(0.5, 0.5), c(3.0, 0.0)]).unwrap();
        let rows = 30;
        let x = apply_resolvent(&op, lambda, &y, rows).unwrap();
        let ux = crate::operator::apply(&op, &x);
        for k in 0..rows - 2 {
            let got = ux[k] - lambda * x[k];
            assert!((got - y.coord(k as isize)).norm() < 1e-13);
        }
    }

    #[test]
    fn oracle_examples() {
        let op = op01();
        let x = dense_solve_oracle(&op, c(3.0, 0.0), &FiniteSequence::unit(0, 1).unwrap(), 200).unwrap();
        assert_eq!(x.len(), 200);
        assert_abs_diff_eq!(x[0].re, -0.381966011250105, epsilon = 1e-14);

        let lambda = c(2.0 * (std::f64::consts::PI / 5.0).cos(), 0.0);
        let err = dense_solve_oracle(&op, lambda, &FiniteSequence::unit(0, 1).unwrap(), 4).unwrap_err();
        assert!(matches!(err, Error::SingularTruncation { order: 4, .. }));

        let op = TriBandParams::real(1.0, 2.0).unwrap();
        let y = FiniteSequence::unit(2, 3).unwrap();
        let x = dense_solve_oracle(&op, c(10.0, 0.0), &y, 100).unwrap();
        let k = apply_resolvent(&op, c(10.0, 0.0), &y, 20).unwrap();
        for j in 0..20 {
            assert!((x[j] - k[j]).norm() < 1e-10);
        }
    }

    #[test]
    fn solver_pivots_on_zero_diagonal() {
        // [[0,1],[1,0]] x = (2,3) needs a row swap
        let mut b = vec![c(2.0, 0.0), c(3.0, 0.0)];
        let x = solve_tridiagonal(&[c(1.0, 0.0)], &[c(0.0, 0.0); 2], &[c(1.0, 0.0)], &mut b).unwrap();
        assert_eq!(x, vec![c(3.0, 0.0), c(2.0, 0.0)]);
        let mut b = vec![c(1.0, 0.0)];
        assert!(solve_tridiagonal(&[], &[c(0.0, 0.0)], &[], &mut b).is_err());
    }

    #[test]
    fn norm_examples() {
        let op = op01();
        let kernel = ResolventKernel::new(&op, c(3.0, 0.0)).unwrap();
        let a = kernel.alpha1().re;
        assert_abs_diff_eq!(kernel.column_abs_sum(1), a / (1.0 - a), epsilon = 1e-14);
        assert_abs_diff_eq!(kernel.column_abs_sum(1), 0.618033988749895, epsilon = 1e-14);

        let n10 = resolvent_norm_l1(&op, c(10.0, 0.0)).unwrap();
        let n3 = resolvent_norm_l1(&op, c(3.0, 0.0)).unwrap();
        let near = resolvent_norm_l1(&op, c(2.0001, 0.0)).unwrap();
        assert!(n10.is_finite() && n3.is_finite() && near.is_finite());
        assert!(near > n3 && n3 > n10);
        for l in [c(10.0, 0.0), c(3.0, 0.0), c(2.0001, 0.0), c(0.3, 0.7)] {
            let a = resolvent_norm_l1(&op, l).unwrap();
            let b = resolvent_norm_linf(&op, l).unwrap();
            assert!((a - b).abs() <= 1e-12 * a.max(1.0));
        }
    }

    #[test]
    fn norm_matches_truncated_column_sums() {
        // sup over the first 200 columns of rows up to 10^4 approximates
        // the closed-form supremum from below.
        let op = TriBandParams::new(c(0.5, 0.0), c(0.7, -0.4)).unwrap();
        let lambda = c(0.2, 1.9);
        let kernel = ResolventKernel::new(&op, lambda).unwrap();
        let truncated = (1..=200)
            .map(|n| (1..=10_000).map(|k| kernel.entry(k, n).norm()).sum::<f64>())
            .fold(0.0, f64::max);
        let closed = resolvent_norm_l1(&op, lambda).unwrap();
        assert!((closed - truncated).abs() <= 1e-10 * closed, "{closed} vs {truncated}");
        let truncated_rows = (1..=200)
            .map(|k| (1..=10_000).map(|n| kernel.entry(k, n).norm()).sum::<f64>())
            .fold(0.0, f64::max);
        let closed_rows = resolvent_norm_linf(&op, lambda).unwrap();
        assert!(
            (closed_rows - truncated_rows).abs() <= 1e-10 * closed_rows,
            "{closed_rows} vs {truncated_rows}"
        );
        for n in [1, 7, 50] {
            let direct: f64 = (1..=10_000).map(|k| kernel.entry(k, n).norm()).sum();
            assert!((kernel.column_abs_sum(n) - direct).abs() < 1e-12 * direct);
        }
    }

    #[test]
    fn certificate_examples() {
        let op = TriBandParams::real(1.0, 2.0).unwrap();
        let bounded = resolvent_in_lp_certificate(&op, c(6.0, 0.0)).unwrap();
        assert!(bounded.lp_bounded && bounded.l1_norm.is_finite());
        assert!((bounded.l1_norm - bounded.linf_norm).abs() <= 1e-12 * bounded.l1_norm);
        let on = resolvent_in_lp_certificate(&op, c(0.0, 0.0)).unwrap();
        assert!(!on.lp_bounded && on.l1_norm.is_infinite());
        let end = resolvent_in_lp_certificate(&op01(), c(2.0, 0.0)).unwrap();
        assert!(!end.lp_bounded);
    }

    #[test]
    fn shifted_kernel_only_matches_first_line() {
        let op = op01();
        let l = c(3.0, 0.0);
        let k = ResolventKernel::new(&op, l).unwrap();
        for n in 1..6 {
            let s1 = shifted_exponent_kernel_entry(&op, l, 1, n).unwrap();
            let sn = shifted_exponent_kernel_entry(&op, l, n, 1).unwrap();
            assert!((s1 - k.entry(1, n)).norm() < 1e-15);
            assert!((sn - k.entry(n, 1)).norm() < 1e-15);
        }
        let alpha = k.alpha1().re;
        for n in 2..6 {
            let r = column_residual(&op, l, n, 20, |i, j| {
                shifted_exponent_kernel_entry(&op, l, i, j).unwrap()
            });
            assert!(r >= 0.1 * alpha, "column {n}: {r}");
            let good = column_residual(&op, l, n, 20, |i, j| k.entry(i, j));
            assert!(good < 1e-14);
        }
    }
}
