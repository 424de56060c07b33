//! Norms on l_p, bv_p and D_q, operator-norm bounds, the step basis of
//! bv_p and the difference transform.
//!
//! Differences are backward with a zero in front: `(delta x)_k = x_k -
//! x_{k-1}`, `x_{-1} = 0`. A finite sequence in bv_p stands for its
//! leading coordinates, so `bvp_norm` sums only the stored differences.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::operator::{apply, FiniteSequence, TriBandParams, TruncationMatrix};
use crate::resolvent::apply_resolvent;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceKind {
    SequenceLp,
    SequenceBVp,
}

/// A space with exponent `p` and conjugate `q`, `1/p + 1/q = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceSpec {
    pub kind: SpaceKind,
    pub p: f64,
    pub q: f64,
}

impl SpaceSpec {
    pub fn new(kind: SpaceKind, p: f64) -> Result<Self> {
        check_exponent(p)?;
        Ok(Self {
            kind,
            p,
            q: p / (p - 1.0),
        })
    }

    pub fn lp(p: f64) -> Result<Self> {
        Self::new(SpaceKind::SequenceLp, p)
    }

    pub fn bvp(p: f64) -> Result<Self> {
        Self::new(SpaceKind::SequenceBVp, p)
    }

    pub fn norm(&self, x: &FiniteSequence) -> f64 {
        match self.kind {
            SpaceKind::SequenceLp => lp_norm_unchecked(x.entries(), self.p),
            SpaceKind::SequenceBVp => lp_norm_unchecked(delta_transform(x).entries(), self.p),
        }
    }
}

fn check_exponent(p: f64) -> Result<()> {
    if p.is_finite() && p > 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidExponent(p))
    }
}

fn lp_norm_unchecked(x: &[Complex64], p: f64) -> f64 {
    let scale = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    let sum: f64 = x.iter().map(|z| (z.norm() / scale).powf(p)).sum();
    scale * sum.powf(1.0 / p)
}

pub fn lp_norm(x: &FiniteSequence, p: f64) -> Result<f64> {
    check_exponent(p)?;
    Ok(lp_norm_unchecked(x.entries(), p))
}

pub fn bvp_norm(x: &FiniteSequence, p: f64) -> Result<f64> {
    check_exponent(p)?;
    Ok(lp_norm_unchecked(delta_transform(x).entries(), p))
}

/// l_q norm of the suffix sums `sum_{j >= k} a_j`.
pub fn dq_norm(a: &FiniteSequence, q: f64) -> Result<f64> {
    check_exponent(q)?;
    let mut suffix: Vec<Complex64> = a
        .iter()
        .rev()
        .scan(Complex64::new(0.0, 0.0), |acc, &v| {
            *acc += v;
            Some(*acc)
        })
        .collect();
    suffix.reverse();
    Ok(lp_norm_unchecked(&suffix, q))
}

pub fn delta_transform(x: &FiniteSequence) -> FiniteSequence {
    let d = (0..x.len() as isize).map(|k| x.coord(k) - x.coord(k - 1)).collect();
    FiniteSequence::from_vec_unchecked(d)
}

pub fn inverse_delta(d: &FiniteSequence) -> FiniteSequence {
    let x = d
        .iter()
        .scan(Complex64::new(0.0, 0.0), |acc, &v| {
            *acc += v;
            Some(*acc)
        })
        .collect();
    FiniteSequence::from_vec_unchecked(x)
}

/// Step sequence `b^(k)`: zero before `k`, one from `k` on.
pub fn basis_bk(k: usize, len: usize) -> Result<FiniteSequence> {
    if k >= len {
        return Err(Error::IndexOutOfRange { index: k, len });
    }
    let b = (0..len)
        .map(|n| Complex64::new(if n >= k { 1.0 } else { 0.0 }, 0.0))
        .collect();
    Ok(FiniteSequence::from_vec_unchecked(b))
}

/// Resolvent on bv_p: differences of `y` through the l_p resolvent, then
/// summed back. `rows` coordinates are returned.
///
/// This inverts `inverse_delta . (U - lambda I) . delta`, the operator acting on
/// differences, which differs from `U - lambda I` by a rank-one term.
pub fn resolvent_bvp(op: &TriBandParams, lambda: Complex64, y: &FiniteSequence, rows: usize) -> Result<FiniteSequence> {
    let d = delta_transform(y);
    Ok(inverse_delta(&apply_resolvent(op, lambda, &d, rows)?))
}

pub fn matrix_norm_l1(m: &TruncationMatrix) -> f64 {
    let n = m.order();
    (0..n)
        .map(|j| (0..n).map(|i| m.get(i, j).norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn matrix_norm_linf(m: &TruncationMatrix) -> f64 {
    let n = m.order();
    (0..n)
        .map(|i| (0..n).map(|j| m.get(i, j).norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormReport {
    /// `None` where no lower bound is known (bv_p).
    pub lower_bound: Option<f64>,
    pub upper_bound: f64,
    pub empirical: f64,
    pub space: SpaceSpec,
}

/// Length of the windowed cosine samples.
pub const WINDOW_LEN: usize = 2000;
/// Number of windowed cosine frequencies, evenly spaced on `[0, pi]`.
pub const WINDOW_FREQUENCIES: usize = 32;
pub const RANDOM_SAMPLES: usize = 100;
pub const RANDOM_SAMPLE_LEN: usize = 64;
pub const SAMPLE_SEED: u64 = 0x7269_6261_6e64;

/// The fixed sample set behind [`NormReport::empirical`]: unit vectors
/// `e^(0..8)`, `sin(pi (k+1)/(L+1)) cos(omega k)` for 32 frequencies, and
/// 100 seeded complex random vectors.
pub fn norm_sample_set() -> Vec<FiniteSequence> {
    let mut out: Vec<FiniteSequence> = (0..8).map(|k| FiniteSequence::unit(k, k + 1).unwrap()).collect();
    let pi = std::f64::consts::PI;
    for j in 0..WINDOW_FREQUENCIES {
        let omega = pi * j as f64 / (WINDOW_FREQUENCIES - 1) as f64;
        let v = (0..WINDOW_LEN)
            .map(|k| {
                let window = (pi * (k + 1) as f64 / (WINDOW_LEN + 1) as f64).sin();
                Complex64::new(window * (omega * k as f64).cos(), 0.0)
            })
            .collect();
        out.push(FiniteSequence::from_vec_unchecked(v));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    for _ in 0..RANDOM_SAMPLES {
        let v = (0..RANDOM_SAMPLE_LEN)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        out.push(FiniteSequence::from_vec_unchecked(v));
    }
    out
}

/// `||U x|| / ||x||` for a finitely supported `x` viewed as a zero-padded
/// element of the space (for bv_p the final drop to zero counts).
pub fn gain(op: &TriBandParams, space: &SpaceSpec, x: &FiniteSequence) -> f64 {
    let ux = apply(op, x);
    match space.kind {
        SpaceKind::SequenceLp => lp_norm_unchecked(ux.entries(), space.p) / lp_norm_unchecked(x.entries(), space.p),
        SpaceKind::SequenceBVp => {
            let pad = |v: &FiniteSequence| {
                let mut e = v.entries().to_vec();
                e.push(Complex64::new(0.0, 0.0));
                FiniteSequence::from_vec_unchecked(e)
            };
            space.norm(&pad(&ux)) / space.norm(&pad(x))
        }
    }
}

pub fn operator_norm_bounds(op: &TriBandParams, space: SpaceSpec) -> Result<NormReport> {
    let space = SpaceSpec::new(space.kind, space.p)?;
    let (r, s) = (op.r.norm(), op.s.norm());
    let lower_bound = match space.kind {
        SpaceKind::SequenceLp => Some((r.powf(space.p) + 2.0 * s.powf(space.p)).powf(1.0 / space.p)),
        SpaceKind::SequenceBVp => None,
    };
    let empirical = norm_sample_set()
        .iter()
        .map(|x| gain(op, &space, x))
        .filter(|g| g.is_finite())
        .fold(0.0, f64::max);
    Ok(NormReport {
        lower_bound,
        upper_bound: 2.0 * s + r,
        empirical,
        space,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::truncation_matrix;
    use approx::assert_abs_diff_eq;

    fn seq(v: &[f64]) -> FiniteSequence {
        FiniteSequence::from_real(v).unwrap()
    }

    #[test]
    fn space_spec_conjugate() {
        for p in [1.1, 1.5, 2.0, 3.0, 10.0] {
            let sp = SpaceSpec::lp(p).unwrap();
            assert!(((sp.p - 1.0) * (sp.q - 1.0) - 1.0).abs() < 1e-12);
        }
        for bad in [1.0, 0.5, f64::INFINITY, f64::NAN] {
            assert!(SpaceSpec::bvp(bad).is_err());
        }
    }

    #[test]
    fn lp_examples() {
        assert_abs_diff_eq!(lp_norm(&seq(&[3.0, 4.0]), 2.0).unwrap(), 5.0, epsilon = 1e-15);
        for p in [1.5, 2.0, 7.0] {
            assert_eq!(lp_norm(&FiniteSequence::unit(1, 4).unwrap(), p).unwrap(), 1.0);
        }
        assert_abs_diff_eq!(
            lp_norm(&seq(&[1.0; 4]), 4.0).unwrap(),
            std::f64::consts::SQRT_2,
            epsilon = 1e-7
        );
        assert_eq!(lp_norm(&seq(&[3.0]), 1.0), Err(Error::InvalidExponent(1.0)));
        // no overflow
        assert_abs_diff_eq!(
            lp_norm(&seq(&[3e300, 4e300]), 2.0).unwrap() / 1e300,
            5.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn bvp_examples() {
        assert_abs_diff_eq!(bvp_norm(&basis_bk(2, 6).unwrap(), 2.0).unwrap(), 1.0);
        assert_abs_diff_eq!(bvp_norm(&seq(&[-2.5; 5]), 2.0).unwrap(), 2.5);
        assert_abs_diff_eq!(
            bvp_norm(&seq(&[1.0, 0.0, 1.0, 0.0]), 2.0).unwrap(),
            2.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn dq_examples() {
        assert_eq!(dq_norm(&FiniteSequence::unit(0, 3).unwrap(), 2.0).unwrap(), 1.0);
        assert_abs_diff_eq!(dq_norm(&seq(&[1.0, -1.0, 0.0]), 2.0).unwrap(), 1.0);
        assert_abs_diff_eq!(dq_norm(&seq(&[1.0, 1.0]), 2.0).unwrap(), 5f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn matrix_norm_examples() {
        let op = TriBandParams::real(1.0, 2.0).unwrap();
        let m = truncation_matrix(&op, 5, None).unwrap();
        assert_eq!(matrix_norm_l1(&m), 5.0);
        assert_eq!(matrix_norm_linf(&m), 5.0);
        let m = truncation_matrix(&TriBandParams::real(-3.0, 2.0).unwrap(), 1, None).unwrap();
        assert_eq!(matrix_norm_l1(&m), 3.0);
        let eye = truncation_matrix(&TriBandParams::real(1.0, 0.0).unwrap(), 4, None).unwrap();
        assert_eq!((matrix_norm_l1(&eye), matrix_norm_linf(&eye)), (1.0, 1.0));
    }

    #[test]
    fn basis_examples() {
        assert_eq!(basis_bk(0, 3).unwrap(), seq(&[1.0, 1.0, 1.0]));
        assert_eq!(basis_bk(2, 4).unwrap(), seq(&[0.0, 0.0, 1.0, 1.0]));
        assert_eq!(basis_bk(4, 4), Err(Error::IndexOutOfRange { index: 4, len: 4 }));

        let x = seq(&[5.0, 7.0, 7.0]);
        let coeffs = delta_transform(&x);
        assert_eq!(coeffs, seq(&[5.0, 2.0, 0.0]));
        let mut rebuilt = vec![Complex64::new(0.0, 0.0); 3];
        for (k, c) in coeffs.iter().enumerate() {
            for (slot, b) in rebuilt.iter_mut().zip(basis_bk(k, 3).unwrap().iter()) {
                *slot += c * b;
            }
        }
        assert_eq!(rebuilt, x.into_vec());
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta_transform(&seq(&[1.0, 1.0, 1.0])), seq(&[1.0, 0.0, 0.0]));
        assert_eq!(inverse_delta(&seq(&[1.0, 0.0, 0.0])), seq(&[1.0, 1.0, 1.0]));
        assert!(delta_transform(&FiniteSequence::default()).is_empty());
    }

    #[test]
    fn norm_bound_examples() {
        let op = TriBandParams::real(1.0, 2.0).unwrap();
        let rep = operator_norm_bounds(&op, SpaceSpec::lp(2.0).unwrap()).unwrap();
        assert_abs_diff_eq!(rep.lower_bound.unwrap(), 3.0, epsilon = 1e-15);
        assert_eq!(rep.upper_bound, 5.0);
        assert!(rep.lower_bound.unwrap() <= rep.empirical && rep.empirical <= rep.upper_bound + 1e-12);

        let rep = operator_norm_bounds(&TriBandParams::real(0.0, 1.0).unwrap(), SpaceSpec::lp(2.0).unwrap()).unwrap();
        assert_abs_diff_eq!(rep.lower_bound.unwrap(), 2f64.sqrt(), epsilon = 1e-15);
        assert_eq!(rep.upper_bound, 2.0);
        assert!(rep.empirical >= 1.99, "{}", rep.empirical);

        let rep = operator_norm_bounds(&op, SpaceSpec::bvp(2.0).unwrap()).unwrap();
        assert_eq!(rep.upper_bound, 5.0);
        assert_eq!(rep.lower_bound, None);
        assert!(rep.empirical <= 5.0 + 1e-12);
    }

    #[test]
    fn resolvent_bvp_zero_and_conjugation() {
        let op = TriBandParams::real(0.0, 1.0).unwrap();
        let l = Complex64::new(3.0, 0.0);
        assert!(resolvent_bvp(&op, l, &FiniteSequence::zeros(5), 8).unwrap().is_zero());
        let y = seq(&[1.0, -2.0, 0.5, 4.0]);
        let lhs = delta_transform(&resolvent_bvp(&op, l, &y, 20).unwrap());
        let rhs = apply_resolvent(&op, l, &delta_transform(&y), 20).unwrap();
        for (a, b) in lhs.iter().zip(rhs.iter()) {
            assert!((a - b).norm() <= 1e-12);
        }
    }
}
