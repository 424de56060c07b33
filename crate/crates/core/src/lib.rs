//! Spectral toolkit for the semi-infinite symmetric tridiagonal Toeplitz
//! operator U(s,r,s) on the sequence spaces l_p and bv_p, `1 < p < inf`.
//!
//! * [`operator`]: parameters, finite sections, characteristic roots.
//! * [`spectrum`]: the spectrum segment and point classification.
//! * [`resolvent`]: Green's kernel of `(U - lambda I)^{-1}` and its norms.
//! * [`eigen`]: formal eigenvectors, finite-section eigenvalues, pseudospectra.
//! * [`spaces`]: l_p / bv_p / D_q norms, operator-norm bounds, difference transform.
//! * [`verify`]: the seeded self-check suite behind `triband verify`.

pub mod eigen;
pub mod error;
pub mod numfmt;
pub mod operator;
pub mod par;
pub mod resolvent;
pub mod spaces;
pub mod spectrum;
pub mod verify;

pub use error::{Error, Result};
pub use operator::{
    apply, char_roots, make_operator, truncation_matrix, CharRoots, FiniteSequence, TriBandParams, TruncationMatrix,
};
pub use par::Execution;
pub use spaces::{SpaceKind, SpaceSpec};
pub use spectrum::{classify_lambda, fine_spectrum_report, segment_membership, spectrum_segment, SpectralClass};
