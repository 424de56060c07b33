//! The tri-band operator U(s,r,s), its finite sections, and the
//! characteristic roots of `s x^2 + (r - lambda) x + s`.
//!
//! Sequences are 0-based externally: `x[0]` is the first coordinate.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative tolerance on `|q^2 - 4|` below which the two characteristic
/// roots are treated as the double root `-q/2 = ±1`.
pub const DOUBLE_ROOT_TOL: f64 = 1e-12;

/// Defining scalars of U(s,r,s): `r` on the diagonal, `s` on both
/// neighbouring diagonals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriBandParams {
    pub r: Complex64,
    pub s: Complex64,
}

impl TriBandParams {
    /// Validates finiteness. `s = 0` is accepted but flagged by
    /// [`TriBandParams::is_degenerate`]; spectral routines reject it.
    pub fn new(r: Complex64, s: Complex64) -> Result<Self> {
        if !r.is_finite() {
            return Err(Error::NonFinite("r"));
        }
        if !s.is_finite() {
            return Err(Error::NonFinite("s"));
        }
        Ok(Self { r, s })
    }

    pub fn real(r: f64, s: f64) -> Result<Self> {
        Self::new(Complex64::new(r, 0.0), Complex64::new(s, 0.0))
    }

    pub fn is_degenerate(&self) -> bool {
        self.s == Complex64::new(0.0, 0.0)
    }

    pub fn is_real(&self) -> bool {
        self.r.im == 0.0 && self.s.im == 0.0
    }

    pub(crate) fn require_nondegenerate(&self) -> Result<()> {
        if self.is_degenerate() {
            Err(Error::DegenerateOperator)
        } else {
            Ok(())
        }
    }

    /// Recurrence ratio `q = (r - lambda) / s`.
    pub fn ratio_q(&self, lambda: Complex64) -> Result<Complex64> {
        self.require_nondegenerate()?;
        if !lambda.is_finite() {
            return Err(Error::NonFinite("lambda"));
        }
        Ok((self.r - lambda) / self.s)
    }
}

pub fn make_operator(r: Complex64, s: Complex64) -> Result<TriBandParams> {
    TriBandParams::new(r, s)
}

/// A finitely supported sequence. Coordinates past the end are zero.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FiniteSequence(Vec<Complex64>);

impl FiniteSequence {
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if entries.iter().any(|z| !z.is_finite()) {
            return Err(Error::NonFinite("sequence entry"));
        }
        Ok(Self(entries))
    }

    pub fn from_real(entries: &[f64]) -> Result<Self> {
        Self::new(entries.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![Complex64::new(0.0, 0.0); len])
    }

    /// `e^(k)` of length `len`.
    pub fn unit(k: usize, len: usize) -> Result<Self> {
        if k >= len {
            return Err(Error::IndexOutOfRange { index: k, len });
        }
        let mut v = Self::zeros(len);
        v.0[k] = Complex64::new(1.0, 0.0);
        Ok(v)
    }

    pub(crate) fn from_vec_unchecked(entries: Vec<Complex64>) -> Self {
        debug_assert!(entries.iter().all(|z| z.is_finite()));
        Self(entries)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.0
    }

    /// Coordinate `k`, zero outside the stored range.
    pub fn coord(&self, k: isize) -> Complex64 {
        if k < 0 {
            return Complex64::new(0.0, 0.0);
        }
        self.0.get(k as usize).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Complex64> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }
}

impl std::ops::Index<usize> for FiniteSequence {
    type Output = Complex64;

    fn index(&self, k: usize) -> &Complex64 {
        &self.0[k]
    }
}

/// Banded storage of an N×N tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncationMatrix {
    sub: Vec<Complex64>,
    diag: Vec<Complex64>,
    sup: Vec<Complex64>,
}

impl TruncationMatrix {
    pub fn from_bands(sub: Vec<Complex64>, diag: Vec<Complex64>, sup: Vec<Complex64>) -> Result<Self> {
        let n = diag.len();
        if n == 0 {
            return Err(Error::InvalidArgument("matrix order must be at least 1".into()));
        }
        if sub.len() != n - 1 || sup.len() != n - 1 {
            return Err(Error::InvalidArgument(format!(
                "band lengths {}/{}/{} inconsistent with order {n}",
                sub.len(),
                n,
                sup.len()
            )));
        }
        Ok(Self { sub, diag, sup })
    }

    pub fn order(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[Complex64] {
        &self.diag
    }

    /// Entries `(i+1, i)`.
    pub fn sub(&self) -> &[Complex64] {
        &self.sub
    }

    /// Entries `(i, i+1)`.
    pub fn sup(&self) -> &[Complex64] {
        &self.sup
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        let n = self.order();
        assert!(i < n && j < n, "({i},{j}) outside a {n}x{n} matrix");
        if i == j {
            self.diag[i]
        } else if i == j + 1 {
            self.sub[j]
        } else if j == i + 1 {
            self.sup[i]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<Complex64>> {
        let n = self.order();
        (0..n).map(|i| (0..n).map(|j| self.get(i, j)).collect()).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.sub == self.sup
    }

    /// `M x` for `x` of length N.
    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        let n = self.order();
        assert_eq!(x.len(), n, "vector length must equal matrix order");
        (0..n)
            .map(|i| {
                let mut acc = self.diag[i] * x[i];
                if i > 0 {
                    acc += self.sub[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    acc += self.sup[i] * x[i + 1];
                }
                acc
            })
            .collect()
    }
}

/// Leading N×N block of `U(s,r,s) - lambda I`.
pub fn truncation_matrix(op: &TriBandParams, order: usize, lambda: Option<Complex64>) -> Result<TruncationMatrix> {
    if order == 0 {
        return Err(Error::InvalidArgument("truncation order must be at least 1".into()));
    }
    let lambda = lambda.unwrap_or_default();
    if !lambda.is_finite() {
        return Err(Error::NonFinite("lambda"));
    }
    TruncationMatrix::from_bands(vec![op.s; order - 1], vec![op.r - lambda; order], vec![op.s; order - 1])
}

/// `y_k = s x_{k-1} + r x_k + s x_{k+1}` with `x_{-1} = 0`. The output has
/// one more coordinate than the input so the trailing `s x_{N-1}` is kept.
pub fn apply(op: &TriBandParams, x: &FiniteSequence) -> FiniteSequence {
    if x.is_empty() {
        return FiniteSequence::default();
    }
    let n = x.len() as isize;
    let y = (0..=n)
        .map(|k| op.s * x.coord(k - 1) + op.r * x.coord(k) + op.s * x.coord(k + 1))
        .collect();
    FiniteSequence::from_vec_unchecked(y)
}

/// Roots of `s x^2 + (r - lambda) x + s`, ordered `|alpha1| <= |alpha2|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharRoots {
    pub lambda: Complex64,
    pub ratio_q: Complex64,
    pub alpha1: Complex64,
    pub alpha2: Complex64,
    pub is_double_root: bool,
}

impl CharRoots {
    /// Relative residual of the characteristic polynomial at `alpha`.
    pub fn relative_residual(&self, op: &TriBandParams, alpha: Complex64) -> f64 {
        let b = op.r - self.lambda;
        let value = op.s * alpha * alpha + b * alpha + op.s;
        let scale = op.s.norm() * alpha.norm_sqr() + b.norm() * alpha.norm() + op.s.norm();
        value.norm() / scale.max(f64::MIN_POSITIVE)
    }
}

/// Cancellation-safe roots of `x^2 + q x + 1`. The larger root takes the
/// discriminant with the sign matching `q`; the smaller comes from the
/// product relation `alpha1 alpha2 = 1`.
pub fn char_roots(op: &TriBandParams, lambda: Complex64) -> Result<CharRoots> {
    let q = op.ratio_q(lambda)?;
    let one = Complex64::new(1.0, 0.0);
    let four = Complex64::new(4.0, 0.0);

    // |q| < 3 keeps q^2 finite; a double root needs q close to ±2 anyway.
    if q.norm() < 3.0 && (q * q - four).norm() <= DOUBLE_ROOT_TOL * q.norm_sqr().max(1.0) {
        let alpha = if q.re > 0.0 { -one } else { one };
        return Ok(CharRoots {
            lambda,
            ratio_q: q,
            alpha1: alpha,
            alpha2: alpha,
            is_double_root: true,
        });
    }

    let d = if q.norm() > 1.0 {
        // q * sqrt(1 - 4/q^2) avoids overflowing q^2 and already satisfies
        // Re(conj(q) d) >= 0 because the principal root has Re >= 0.
        let t = recip(q) * 2.0;
        q * (one - t * t).sqrt()
    } else {
        let d = (q * q - four).sqrt();
        if (q.conj() * d).re < 0.0 {
            -d
        } else {
            d
        }
    };
    let mut alpha2 = -(q + d) / 2.0;
    let mut alpha1 = recip(alpha2);
    if alpha1.norm() > alpha2.norm() {
        std::mem::swap(&mut alpha1, &mut alpha2);
    }
    Ok(CharRoots {
        lambda,
        ratio_q: q,
        alpha1,
        alpha2,
        is_double_root: false,
    })
}

/// `1/z` without squaring `|z|`.
fn recip(z: Complex64) -> Complex64 {
    let m = z.norm();
    (z.conj() / m) / m
}
