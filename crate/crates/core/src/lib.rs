//! Exact computer algebra for the quantum Lorentz group and q-deformed
//! Minkowski space.
//!
//! The library constructs the spinor and vector R-matrices, the quantum
//! metric, the dual-functional braiding, and the noncommutative coordinate
//! algebra entirely over the exact field Q(i)(q^(1/2)), machine-verifies the
//! algebraic identities the construction must satisfy, and computes the
//! quantized boost spectra, lifetime dilatation, light-cone states, and the
//! quantum-sphere reduction that follow from them.
//!
//! Module map:
//!
//! - [`scalars`]: exact arithmetic in Q(i)(s), s = q^(1/2).
//! - [`tensors`]: typed-index tensors; sigma matrices, spinor metrics,
//!   R-matrices, the quantum metric and completeness relations.
//! - [`functionals`]: dual functionals on SL_q(2,C) generator words; the
//!   16x16 vector braiding and the coordinate commutation relations.
//! - [`coordalg`]: the q-Minkowski coordinate algebra: normal ordering,
//!   Casimir centrality, ladder maps, confluence certification.
//! - [`spectra`]: boost observables: quantized gamma, positivity intervals,
//!   causality, termination, lifetime corrections, light-cone states.
//! - [`so3q`]: the spatial-rotation restriction over SU_q(2) and the
//!   quantum-sphere parameters.
//! - [`expr`]: the text expression language shared by the CLI and the
//!   canonical serializations.
//! - [`identities`]: the named identity catalog used by the verification
//!   front end.

// Index-paired tensor loops and NaN-rejecting domain guards read better in
// their explicit forms here.
#![allow(clippy::needless_range_loop)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coordalg;
pub mod error;
pub mod expr;
pub mod functionals;
pub mod identities;
pub mod scalars;
pub mod so3q;
pub mod spectra;
pub mod tensors;

pub use coordalg::{CoordGen, NCPoly, RewriteSystem, Word};
pub use error::{FunctionalError, ParseError, ScalarError, SpectraError, TensorError};
pub use functionals::{FunctionalData, FunctionalId, GenSymbol, MWord};
pub use identities::{IdentityId, IdentityOutcome};
pub use scalars::{ExactValue, GaussRat, NumericValue, Scalar};
pub use spectra::{BoostLabel, Params, SpectrumRow};
pub use tensors::{IndexKind, LorentzData, Tensor};
