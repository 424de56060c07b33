//! Spectrum of U(s,r,s) on l_p and bv_p and the fine-spectrum partition.
//!
//! For every `1 < p < inf` the spectrum is the segment
//! `{r + 2s t : t in [-1, 1]}`, all of it continuous spectrum. A point
//! `lambda` is regular exactly when the characteristic roots split as
//! `|alpha1| < 1 < |alpha2|`.

use num_complex::Complex64;

use crate::error::Result;
use crate::operator::{char_roots, CharRoots, TriBandParams};
use crate::spaces::SpaceSpec;

/// Default tolerance for [`classify_lambda`] and [`segment_membership`].
pub const DEFAULT_TOL: f64 = 1e-12;

/// The segment `r + 2s cos(theta)`, `theta in [0, 2 pi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumSegment {
    pub endpoint_low: Complex64,
    pub endpoint_high: Complex64,
    centre: Complex64,
    half_length: Complex64,
}

impl SpectrumSegment {
    pub fn midpoint(&self) -> Complex64 {
        self.centre
    }

    /// The vector `2s` from the midpoint to `endpoint_high`.
    pub fn half_length(&self) -> Complex64 {
        self.half_length
    }

    pub fn at_angle(&self, theta: f64) -> Complex64 {
        self.centre + self.half_length * theta.cos()
    }

    /// Euclidean distance from `lambda` to the closed segment.
    pub fn distance(&self, lambda: Complex64) -> f64 {
        let mu = (lambda - self.centre) / self.half_length;
        let t = mu.re.clamp(-1.0, 1.0);
        (lambda - self.at_param(t)).norm()
    }

    /// Point `r + 2s t`.
    pub fn at_param(&self, t: f64) -> Complex64 {
        self.centre + self.half_length * t
    }
}

pub fn spectrum_segment(op: &TriBandParams) -> Result<SpectrumSegment> {
    op.require_nondegenerate()?;
    let half_length = op.s * 2.0;
    Ok(SpectrumSegment {
        endpoint_low: op.r - half_length,
        endpoint_high: op.r + half_length,
        centre: op.r,
        half_length,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectralClass {
    ResolventSet,
    ContinuousSpectrum,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralClassification {
    pub class: SpectralClass,
    pub roots: CharRoots,
    pub alpha1_abs: f64,
    pub distance_to_segment: f64,
}

/// Root-dichotomy classification. `lambda` within `tol` of the unit-circle
/// condition counts as spectrum.
pub fn classify_lambda(op: &TriBandParams, lambda: Complex64, tol: f64) -> Result<SpectralClassification> {
    let roots = char_roots(op, lambda)?;
    let segment = spectrum_segment(op)?;
    let alpha1_abs = roots.alpha1.norm();
    let class = if alpha1_abs < 1.0 - tol {
        SpectralClass::ResolventSet
    } else {
        SpectralClass::ContinuousSpectrum
    };
    Ok(SpectralClassification {
        class,
        roots,
        alpha1_abs,
        distance_to_segment: segment.distance(lambda),
    })
}

/// Geometric test on `mu = (lambda - r) / (2s)`.
pub fn segment_membership(op: &TriBandParams, lambda: Complex64, tol: f64) -> Result<bool> {
    op.require_nondegenerate()?;
    let mu = (lambda - op.r) / (op.s * 2.0);
    Ok(mu.im.abs() <= tol && mu.re.abs() <= 1.0 + tol)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectralSet {
    Empty,
    Segment(SpectrumSegment),
    ComplementOf(SpectrumSegment),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FineSpectrumReport {
    pub space: SpaceSpec,
    pub spectrum: SpectralSet,
    pub point: SpectralSet,
    pub residual: SpectralSet,
    pub continuous: SpectralSet,
    pub resolvent_set: SpectralSet,
    pub adjoint_point: SpectralSet,
}

/// The fine spectrum on `space`. Identical for l_p and bv_p.
pub fn fine_spectrum_report(op: &TriBandParams, space: SpaceSpec) -> Result<FineSpectrumReport> {
    SpaceSpec::new(space.kind, space.p)?;
    let segment = spectrum_segment(op)?;
    Ok(FineSpectrumReport {
        space,
        spectrum: SpectralSet::Segment(segment),
        point: SpectralSet::Empty,
        residual: SpectralSet::Empty,
        continuous: SpectralSet::Segment(segment),
        resolvent_set: SpectralSet::ComplementOf(segment),
        adjoint_point: SpectralSet::Empty,
    })
}
