//! Error types shared across the library.

use thiserror::Error;

/// Errors from exact scalar arithmetic and evaluation.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum ScalarError {
    #[error("division by zero scalar")]
    DivisionByZero,
    #[error("denominator vanishes at q0 = {q0}")]
    PoleAt { q0: f64 },
    #[error("denominator vanishes in the classical limit q = 1")]
    PoleAtOne,
    #[error("evaluation point q0 = {q0} is not a positive real")]
    InvalidEvaluationPoint { q0: f64 },
}

/// Errors from tensor construction and contraction.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum TensorError {
    #[error("index {position} out of range for rank-{rank} tensor")]
    IndexOutOfRange { position: usize, rank: usize },
    #[error("contraction pairs index families {a:?} and {b:?}, which do not match")]
    FamilyMismatch { a: String, b: String },
    #[error("contraction requires one upper and one lower index, got {a:?} and {b:?}")]
    VarianceMismatch { a: String, b: String },
    #[error("entry count {got} does not match signature size {expected}")]
    ShapeMismatch { got: usize, expected: usize },
}

/// Errors from functional evaluation on generator words.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum FunctionalError {
    #[error("no generator value defined for antipode depth {depth}")]
    UnsupportedAntipodeDepth { depth: u8 },
    #[error("generator index {index} out of range")]
    GeneratorIndexOutOfRange { index: usize },
}

/// Errors from the boost-spectrum computations.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum SpectraError {
    #[error("positivity roots are complex: gamma^2 = {gamma_sq} < 4/Q^2 = {min_gamma_sq}")]
    ComplexRoots { gamma_sq: f64, min_gamma_sq: f64 },
    #[error("classical speed |v| = {v} must lie in [0, 1)")]
    SpeedOutOfRange { v: f64 },
    #[error("deformation parameter q0 = {q0} must be positive")]
    InvalidQ { q0: f64 },
    #[error("invalid boost label: l = {twice_l}/2, m = {twice_m}/2")]
    InvalidLabel { twice_l: i64, twice_m: i64 },
    #[error("time eigenvalue t = {t} must be nonnegative")]
    NegativeTime { t: f64 },
}

/// Parse errors for the expression language.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum ParseError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown symbol `{symbol}` at byte {position}")]
    UnknownSymbol { symbol: String, position: usize },
    #[error("division by a noncommutative or zero expression at byte {position}")]
    BadDivisor { position: usize },
}
