//! Boost observables of the q-deformed Minkowski space: the quantized
//! Lorentz factor, positivity intervals for the X3 eigenvalues, causality,
//! exact spectrum termination, lifetime dilatation with its semiclassical
//! correction, and the light-cone states.
//!
//! The discrete spectra are computed from the closed forms
//!
//! ```text
//! gamma(l)   = (q^(2l+1) + q^-(2l+1)) / Q
//! x3(l, m)   = q^-1 (q^(2m) / gamma(l) - 1) t
//! v3(l, m)   = x3(l, m) / t,    |v|^2 = 1 - 1/gamma(l)^2
//! ```
//!
//! and validated against the ladder/root chain: one ladder step off either
//! edge of the spectrum lands exactly on a root of the positivity
//! conditions. Everything supports a dual mode: exact rational arithmetic
//! (with a real quadratic extension for the interval roots) at rational q,
//! floating point at 1e-12 relative tolerance otherwise.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

use crate::error::SpectraError;
use crate::scalars::rational_to_f64;
use crate::tensors::{LorentzData, Sign};

// ---- Labels and parameters ----

/// A boost-spectrum label (l, m): half-integers with -l <= m <= l and
/// l - m an integer, stored doubled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoostLabel {
    twice_l: i64,
    twice_m: i64,
}

impl BoostLabel {
    pub fn new(twice_l: i64, twice_m: i64) -> Result<BoostLabel, SpectraError> {
        if twice_l < 0 || twice_m.abs() > twice_l || (twice_l - twice_m) % 2 != 0 {
            return Err(SpectraError::InvalidLabel { twice_l, twice_m });
        }
        Ok(BoostLabel { twice_l, twice_m })
    }

    pub fn twice_l(&self) -> i64 {
        self.twice_l
    }

    pub fn twice_m(&self) -> i64 {
        self.twice_m
    }

    pub fn l_as_f64(&self) -> f64 {
        self.twice_l as f64 / 2.0
    }

    pub fn m_as_f64(&self) -> f64 {
        self.twice_m as f64 / 2.0
    }

    /// Exact text for half-integer labels, e.g. "3/2" or "2".
    pub fn half_string(twice: i64) -> String {
        if twice % 2 == 0 {
            format!("{}", twice / 2)
        } else {
            format!("{}/2", twice)
        }
    }

    /// All m labels for a given l, ascending.
    pub fn ladder(twice_l: i64) -> impl Iterator<Item = BoostLabel> {
        (-twice_l..=twice_l)
            .step_by(2)
            .map(move |twice_m| BoostLabel { twice_l, twice_m })
    }
}

/// Physical parameters of a boost computation.
#[derive(Clone, Debug)]
pub struct Params {
    pub q0: f64,
    pub t: f64,
    pub mass: Option<f64>,
}

impl Params {
    pub fn validate(&self) -> Result<(), SpectraError> {
        if !(self.q0 > 0.0) {
            return Err(SpectraError::InvalidQ { q0: self.q0 });
        }
        if self.t < 0.0 {
            return Err(SpectraError::NegativeTime { t: self.t });
        }
        Ok(())
    }
}

/// One row of the quantized boost spectrum.
#[derive(Clone, Debug)]
pub struct SpectrumRow<T> {
    pub label: BoostLabel,
    pub gamma: T,
    pub x3: T,
    pub v3: T,
    pub vsq: T,
    pub energy: Option<T>,
    pub p3: Option<T>,
}

// ---- Rational helpers ----

pub fn rational_pow(q: &BigRational, e: i64) -> BigRational {
    let mut acc = BigRational::one();
    let base = if e >= 0 { q.clone() } else { q.recip() };
    for _ in 0..e.unsigned_abs() {
        acc *= &base;
    }
    acc
}

fn big_q_rational(q: &BigRational) -> BigRational {
    q + q.recip()
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

// ---- The quantized Lorentz factor and spectrum ----

/// gamma(l) = (q^(2l+1) + q^-(2l+1)) / Q, always >= 1.
pub fn gamma_l(twice_l: i64, q0: f64) -> Result<f64, SpectraError> {
    if !(q0 > 0.0) {
        return Err(SpectraError::InvalidQ { q0 });
    }
    let e = (twice_l + 1) as i32;
    Ok((q0.powi(e) + q0.powi(-e)) / (q0 + 1.0 / q0))
}

/// Exact-rational gamma(l).
pub fn gamma_l_exact(twice_l: i64, q0: &BigRational) -> BigRational {
    let e = twice_l + 1;
    (rational_pow(q0, e) + rational_pow(q0, -e)) / big_q_rational(q0)
}

/// x3(l, m) = q^-1 (q^(2m) / gamma(l) - 1) t, exact.
pub fn x3_exact(label: BoostLabel, q0: &BigRational, t: &BigRational) -> BigRational {
    let gamma = gamma_l_exact(label.twice_l, q0);
    (rational_pow(q0, label.twice_m) / gamma - BigRational::one()) * t / q0
}

/// The full spectrum table at l, floating point.
pub fn spectrum_table(
    twice_l: i64,
    params: &Params,
) -> Result<Vec<SpectrumRow<f64>>, SpectraError> {
    params.validate()?;
    BoostLabel::new(twice_l, twice_l)?;
    let gamma = gamma_l(twice_l, params.q0)?;
    let vsq = 1.0 - 1.0 / (gamma * gamma);
    Ok(BoostLabel::ladder(twice_l)
        .map(|label| {
            let v3 = (params.q0.powi(label.twice_m as i32) / gamma - 1.0) / params.q0;
            let x3 = v3 * params.t;
            SpectrumRow {
                label,
                gamma,
                x3,
                v3,
                vsq,
                energy: params.mass.map(|m| m * gamma),
                p3: params.mass.map(|m| m * v3 * gamma),
            }
        })
        .collect())
}

/// The full spectrum table at l, exact rational.
pub fn spectrum_table_exact(
    twice_l: i64,
    q0: &BigRational,
    t: &BigRational,
    mass: Option<&BigRational>,
) -> Result<Vec<SpectrumRow<BigRational>>, SpectraError> {
    BoostLabel::new(twice_l, twice_l)?;
    let gamma = gamma_l_exact(twice_l, q0);
    let vsq = BigRational::one() - (&gamma * &gamma).recip();
    Ok(BoostLabel::ladder(twice_l)
        .map(|label| {
            let v3 = (rational_pow(q0, label.twice_m) / &gamma - BigRational::one()) / q0;
            let x3 = &v3 * t;
            SpectrumRow {
                label,
                gamma: gamma.clone(),
                x3,
                v3: v3.clone(),
                vsq: vsq.clone(),
                energy: mass.map(|m| m * &gamma),
                p3: mass.map(|m| m * &v3 * &gamma),
            }
        })
        .collect())
}

// ---- Real quadratic extension for exact root comparisons ----

/// A real number `u + v * sqrt(rad)` with rational parts and nonnegative
/// rational radicand; supports exact sign determination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadExt {
    pub u: BigRational,
    pub v: BigRational,
    pub rad: BigRational,
}

impl QuadExt {
    pub fn rational(u: BigRational, rad: BigRational) -> QuadExt {
        QuadExt {
            u,
            v: BigRational::zero(),
            rad,
        }
    }

    pub fn new(u: BigRational, v: BigRational, rad: BigRational) -> QuadExt {
        debug_assert!(!rad.is_negative());
        QuadExt { u, v, rad }
    }

    pub fn scale(&self, c: &BigRational) -> QuadExt {
        QuadExt::new(&self.u * c, &self.v * c, self.rad.clone())
    }

    pub fn sub(&self, rhs: &QuadExt) -> QuadExt {
        debug_assert_eq!(self.rad, rhs.rad);
        QuadExt::new(&self.u - &rhs.u, &self.v - &rhs.v, self.rad.clone())
    }

    /// Exact sign of the real value, as an Ordering against zero.
    pub fn sign(&self) -> Ordering {
        if self.rad.is_zero() || self.v.is_zero() {
            return self.u.cmp(&BigRational::zero());
        }
        let u_sign = self.u.cmp(&BigRational::zero());
        let v_sign = self.v.cmp(&BigRational::zero());
        match (u_sign, v_sign) {
            (Ordering::Equal, s) => s,
            (s, Ordering::Equal) => s,
            (Ordering::Greater, Ordering::Greater) => Ordering::Greater,
            (Ordering::Less, Ordering::Less) => Ordering::Less,
            (Ordering::Greater, Ordering::Less) | (Ordering::Less, Ordering::Greater) => {
                // sign(u + v sqrt(rad)) for mixed signs follows the sign of
                // u^2 - v^2 rad, oriented by the sign of u.
                let lhs = &self.u * &self.u;
                let rhs = &self.v * &self.v * &self.rad;
                match (lhs.cmp(&rhs), u_sign) {
                    (Ordering::Equal, _) => Ordering::Equal,
                    (Ordering::Greater, s) => s,
                    (Ordering::Less, s) => s.reverse(),
                }
            }
        }
    }

    pub fn le(&self, rhs: &QuadExt) -> bool {
        self.sub(rhs).sign() != Ordering::Greater
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.u) + rational_to_f64(&self.v) * rational_to_f64(&self.rad).sqrt()
    }
}

// ---- Positivity roots and causality ----

/// The four roots of the positivity conditions, floating point.
#[derive(Clone, Copy, Debug)]
pub struct Roots {
    pub a_minus: f64,
    pub a_plus: f64,
    pub b_plus: f64,
    pub b_minus: f64,
}

impl Roots {
    /// The admissible closed interval, empty when lo > hi.
    pub fn interval(&self) -> (f64, f64) {
        (self.a_minus.max(self.b_plus), self.a_plus.min(self.b_minus))
    }

    pub fn is_nonempty(&self) -> bool {
        let (lo, hi) = self.interval();
        lo <= hi
    }

    pub fn contains(&self, x3: f64, tol: f64) -> bool {
        let (lo, hi) = self.interval();
        x3 >= lo - tol && x3 <= hi + tol
    }
}

/// Roots of the positivity conditions:
/// `x_a_pm = ((q - q^-1) +- sqrt(Q^2 - 4/gamma^2)) / 2 * t` and
/// `x_b_pm = -q^-2 x_a_pm`. Requires gamma^2 >= 4/Q^2 for real roots;
/// gamma may be infinite (the light-cone limit).
pub fn interval_roots(t: f64, gamma: f64, q0: f64) -> Result<Roots, SpectraError> {
    if !(q0 > 0.0) {
        return Err(SpectraError::InvalidQ { q0 });
    }
    let big_q = q0 + 1.0 / q0;
    let gamma_sq = gamma * gamma;
    let disc = big_q * big_q - 4.0 / gamma_sq;
    if disc < 0.0 {
        return Err(SpectraError::ComplexRoots {
            gamma_sq,
            min_gamma_sq: 4.0 / (big_q * big_q),
        });
    }
    let d = q0 - 1.0 / q0;
    let w = disc.sqrt();
    let a_minus = (d - w) / 2.0 * t;
    let a_plus = (d + w) / 2.0 * t;
    let s = -1.0 / (q0 * q0);
    Ok(Roots {
        a_minus,
        a_plus,
        b_plus: s * a_plus,
        b_minus: s * a_minus,
    })
}

/// Positivity values of the two product factorizations at fixed t and
/// alpha^2 = t^2/gamma^2; nonnegative exactly on the admissible interval.
pub fn positivity_values(t: f64, gamma: f64, q0: f64, x3: f64) -> (f64, f64) {
    let alpha_sq = (t / gamma) * (t / gamma);
    let a = (t + q0 * x3) * (t - x3 / q0) / (q0 * q0) - alpha_sq / (q0 * q0);
    let b = (t + q0 * x3) * (t - q0.powi(3) * x3) / (q0 * q0) - alpha_sq / (q0 * q0);
    (a, b)
}

/// Exact roots over the quadratic extension by `Q^2 - 4/gamma^2`.
pub struct RootsExact {
    pub a_minus: QuadExt,
    pub a_plus: QuadExt,
    pub b_plus: QuadExt,
    pub b_minus: QuadExt,
}

impl RootsExact {
    pub fn is_nonempty(&self) -> bool {
        self.b_plus.le(&self.a_plus) && self.a_minus.le(&self.b_minus)
    }
}

pub fn interval_roots_exact(
    t: &BigRational,
    gamma_sq: &BigRational,
    q0: &BigRational,
) -> Result<RootsExact, SpectraError> {
    let big_q = big_q_rational(q0);
    let disc = &big_q * &big_q - ratio(4, 1) / gamma_sq;
    if disc.is_negative() {
        return Err(SpectraError::ComplexRoots {
            gamma_sq: rational_to_f64(gamma_sq),
            min_gamma_sq: rational_to_f64(&(ratio(4, 1) / (&big_q * &big_q))),
        });
    }
    let d = q0 - q0.recip();
    let half_t = t / ratio(2, 1);
    let a_minus = QuadExt::new(&d * &half_t, -half_t.clone(), disc.clone());
    let a_plus = QuadExt::new(&d * &half_t, half_t.clone(), disc.clone());
    let s = -rational_pow(q0, -2);
    Ok(RootsExact {
        b_plus: a_plus.scale(&s),
        b_minus: a_minus.scale(&s),
        a_minus,
        a_plus,
    })
}

/// Causality: the admissible interval is nonempty exactly when
/// gamma^2 >= 1. The predicate is evaluated from the roots with a 1e-12
/// relative tolerance for the degenerate single-point interval at the
/// boundary; the exact closed-form equivalence is what the identity catalog
/// checks.
pub fn causality_check(gamma: f64, q0: f64) -> Result<bool, SpectraError> {
    let roots = interval_roots(1.0, gamma, q0)?;
    let (lo, hi) = roots.interval();
    let tol = 1e-12 * (lo.abs() + hi.abs() + 1.0);
    Ok(lo <= hi + tol)
}

/// Exact interval-nonemptiness at rational gamma^2 and q.
pub fn causality_check_exact(
    gamma_sq: &BigRational,
    q0: &BigRational,
) -> Result<bool, SpectraError> {
    let one = BigRational::one();
    let roots = interval_roots_exact(&one, gamma_sq, q0)?;
    Ok(roots.is_nonempty())
}

// ---- Spectrum termination ----

/// Which root of a positivity pair an exact landing matched.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootLabel {
    Plus,
    Minus,
}

/// Exact termination data for one l: the spectrum edges sit on positivity
/// roots and one further ladder step lands exactly on the complementary
/// roots, so the chain closes precisely where positivity saturates.
#[derive(Clone, Debug)]
pub struct TerminationReport {
    pub twice_l: i64,
    /// One raising step from x3(l, l) equals this a-family root.
    pub raise_overshoot_label: Option<RootLabel>,
    /// One lowering step from x3(l, -l) equals this b-family root.
    pub lower_overshoot_label: Option<RootLabel>,
    /// The edge x3(l, -l) itself equals this a-family root.
    pub lower_edge_label: Option<RootLabel>,
    /// The edge x3(l, l) itself equals this b-family root.
    pub upper_edge_label: Option<RootLabel>,
    /// Whether the saturation roots a+ and b+ are hit exactly (by an edge
    /// or by the one-step overshoot, depending on the q branch).
    pub lands_on_a_plus: bool,
    pub lands_on_b_plus: bool,
}

impl TerminationReport {
    pub fn passed(&self) -> bool {
        self.raise_overshoot_label.is_some()
            && self.lower_overshoot_label.is_some()
            && self.lower_edge_label.is_some()
            && self.upper_edge_label.is_some()
            && self.lands_on_a_plus
            && self.lands_on_b_plus
    }
}

/// Exact termination check at rational q. With
/// `W = |q^(2l+1) - q^-(2l+1)| / gamma(l)` the four roots are rational and
/// every landing is tested by exact equality. Passing `gamma_scale`
/// perturbs gamma as a negative control; the chain then misses the roots.
pub fn termination_check(
    twice_l: i64,
    q0: &BigRational,
    t: &BigRational,
    gamma_scale: Option<&BigRational>,
) -> TerminationReport {
    let one = BigRational::one();
    let mut gamma = gamma_l_exact(twice_l, q0);
    if let Some(s) = gamma_scale {
        gamma *= s;
    }
    let e = twice_l + 1;
    let big_q = big_q_rational(q0);
    let disc = &big_q * &big_q - ratio(4, 1) / (&gamma * &gamma);
    let d = q0 - q0.recip();
    let exact_sqrt = if gamma_scale.is_none() {
        let cand = (rational_pow(q0, e) - rational_pow(q0, -e)).abs() / &gamma;
        if &cand * &cand == disc {
            Some(cand)
        } else {
            crate::scalars::rational_sqrt(&disc)
        }
    } else {
        crate::scalars::rational_sqrt(&disc)
    };
    let missed = TerminationReport {
        twice_l,
        raise_overshoot_label: None,
        lower_overshoot_label: None,
        lower_edge_label: None,
        upper_edge_label: None,
        lands_on_a_plus: false,
        lands_on_b_plus: false,
    };
    let w = match exact_sqrt {
        Some(w) => w,
        // Irrational discriminant: no rational landing is possible.
        None => return missed,
    };
    let x3_at = |twice_m: i64| -> BigRational {
        (rational_pow(q0, twice_m) / &gamma - &one) * t / q0
    };
    let raise = |x: &BigRational| -> BigRational {
        let f = rational_pow(q0, 2);
        &f * x + (&f - &one) * t / q0
    };
    let lower = |x: &BigRational| -> BigRational {
        let f = rational_pow(q0, -2);
        &f * x + (&f - &one) * t / q0
    };
    let half_t = t / ratio(2, 1);
    let a_plus = (&d + &w) * &half_t;
    let a_minus = (&d - &w) * &half_t;
    let s = -rational_pow(q0, -2);
    let b_plus = &s * &a_plus;
    let b_minus = &s * &a_minus;
    let classify = |value: &BigRational, plus: &BigRational, minus: &BigRational| {
        if value == plus {
            Some(RootLabel::Plus)
        } else if value == minus {
            Some(RootLabel::Minus)
        } else {
            None
        }
    };
    let raise_img = raise(&x3_at(twice_l));
    let lower_img = lower(&x3_at(-twice_l));
    let lower_edge = x3_at(-twice_l);
    let upper_edge = x3_at(twice_l);
    TerminationReport {
        twice_l,
        raise_overshoot_label: classify(&raise_img, &a_plus, &a_minus),
        lower_overshoot_label: classify(&lower_img, &b_plus, &b_minus),
        lower_edge_label: classify(&lower_edge, &a_plus, &a_minus),
        upper_edge_label: classify(&upper_edge, &b_plus, &b_minus),
        lands_on_a_plus: raise_img == a_plus || lower_edge == a_plus,
        lands_on_b_plus: lower_img == b_plus || upper_edge == b_plus,
    }
}

/// Symbolic termination identities at fixed l, as exact rational functions
/// of q (t scales out): the one-step overshoot images equal
/// `rootA = ((q - q^-1) + (q^(2l+1) - q^-(2l+1))/gamma)/2` and
/// `rootB = -q^-2 rootA`, and the edges equal the opposite-sign partners.
pub fn termination_symbolic(twice_l: i64) -> bool {
    use crate::scalars::Scalar;
    let e = twice_l + 1;
    let q = Scalar::q_pow(1);
    let q_inv = Scalar::q_pow(-1);
    let one = Scalar::one();
    let half = Scalar::from_ratio(1, 2);
    let gamma = &(&Scalar::q_pow(e) + &Scalar::q_pow(-e)) / &Scalar::big_q();
    let x3 = |twice_m: i64| -> Scalar {
        &(&(&Scalar::q_pow(twice_m) / &gamma) - &one) * &q_inv
    };
    let raise = |x: &Scalar| -> Scalar {
        let f = Scalar::q_pow(2);
        &(&f * x) + &(&(&f - &one) * &q_inv)
    };
    let lower = |x: &Scalar| -> Scalar {
        let f = Scalar::q_pow(-2);
        &(&f * x) + &(&(&f - &one) * &q_inv)
    };
    let w = &(&Scalar::q_pow(e) - &Scalar::q_pow(-e)) / &gamma;
    let d = &q - &q_inv;
    let root_a_plus = &(&d + &w) * &half;
    let root_a_minus = &(&d - &w) * &half;
    let s = -Scalar::q_pow(-2);
    let root_b_plus = &s * &root_a_plus;
    let root_b_minus = &s * &root_a_minus;
    raise(&x3(twice_l)) == root_a_plus
        && lower(&x3(-twice_l)) == root_b_plus
        && x3(-twice_l) == root_a_minus
        && x3(twice_l) == root_b_minus
}

/// The chain-indexed form of the eigenvalues,
/// `x3(L, n) = (Q q^-(L+1-2n) / (q^(L+1) + q^-(L+1)) - q^-1) t` with
/// n = 0..L. It relabels the closed form via L = 2l, m = n - l; the (l, m)
/// form is canonical and this one exists for compatibility checks.
pub fn x3_chain_indexed(big_l: i64, n: i64, q0: &BigRational, t: &BigRational) -> BigRational {
    let e = big_l + 1;
    let denom = rational_pow(q0, e) + rational_pow(q0, -e);
    (big_q_rational(q0) * rational_pow(q0, -(e - 2 * n)) / denom - q0.recip()) * t
}

/// Symbolic ladder closure at fixed l: the raising map sends x3(l, m) to
/// x3(l, m + 1) exactly, and the lowering map inverts it.
pub fn ladder_closure_symbolic(twice_l: i64) -> bool {
    use crate::scalars::Scalar;
    let e = twice_l + 1;
    let one = Scalar::one();
    let q_inv = Scalar::q_pow(-1);
    let gamma = &(&Scalar::q_pow(e) + &Scalar::q_pow(-e)) / &Scalar::big_q();
    let x3 = |twice_m: i64| -> Scalar {
        &(&(&Scalar::q_pow(twice_m) / &gamma) - &one) * &q_inv
    };
    let raise = |x: &Scalar| -> Scalar {
        let f = Scalar::q_pow(2);
        &(&f * x) + &(&(&f - &one) * &q_inv)
    };
    let lower = |x: &Scalar| -> Scalar {
        let f = Scalar::q_pow(-2);
        &(&f * x) + &(&(&f - &one) * &q_inv)
    };
    let mut twice_m = -twice_l;
    while twice_m < twice_l {
        if raise(&x3(twice_m)) != x3(twice_m + 2) {
            return false;
        }
        if lower(&x3(twice_m + 2)) != x3(twice_m) {
            return false;
        }
        twice_m += 2;
    }
    true
}

// ---- Boost events and lifetime dilatation ----

/// The boosted observables of a rest state with time eigenvalue t.
#[derive(Clone, Debug)]
pub struct BoostEvent {
    pub t_prime: f64,
    pub x3_prime: f64,
    pub energy: Option<f64>,
    pub p3: Option<f64>,
}

/// t' = gamma(l) t, x3' = v3(l, m) t', E = m gamma, p3 = m v3 gamma.
pub fn boost_event(params: &Params, label: BoostLabel) -> Result<BoostEvent, SpectraError> {
    params.validate()?;
    let gamma = gamma_l(label.twice_l, params.q0)?;
    let v3 = (params.q0.powi(label.twice_m as i32) / gamma - 1.0) / params.q0;
    let t_prime = gamma * params.t;
    Ok(BoostEvent {
        t_prime,
        x3_prime: v3 * t_prime,
        energy: params.mass.map(|m| m * gamma),
        p3: params.mass.map(|m| m * v3 * gamma),
    })
}

/// The deformed squared speed obtained by contracting fixed Cartesian
/// velocity components with the spatial metric block:
/// `|v|_q^2 = -G^{ij} v_i v_j / G^{00}` evaluated at q0.
pub fn metric_speed_sq(ld: &LorentzData, v: [f64; 3], q0: f64) -> Result<f64, SpectraError> {
    let g = &ld.g_up[Sign::Plus.index()];
    let mut num = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            let gij = g
                .get(i + 1, j + 1)
                .eval_at(q0)
                .map_err(|_| SpectraError::InvalidQ { q0 })?;
            // The antisymmetric off-diagonal block is imaginary and cancels
            // under the symmetric v_i v_j sum; only the real part remains.
            num += gij.re() * v[i] * v[j];
        }
    }
    let g00 = g
        .get(0, 0)
        .eval_at(q0)
        .map_err(|_| SpectraError::InvalidQ { q0 })?
        .re();
    Ok(-num / g00)
}

/// First-order lifetime correction magnitude `kappa t v^2 / (1 - v^2)`,
/// with the caller-selected sign branch.
pub fn lifetime_correction(
    t_cl: f64,
    v_cl: f64,
    kappa: f64,
    positive_branch: bool,
) -> Result<f64, SpectraError> {
    if v_cl.abs() >= 1.0 {
        return Err(SpectraError::SpeedOutOfRange { v: v_cl });
    }
    let magnitude = kappa * t_cl * v_cl * v_cl / (1.0 - v_cl * v_cl);
    Ok(if positive_branch { magnitude } else { -magnitude })
}

/// Semiclassical comparison of the exact dilatation at q = 1 +- kappa
/// against the first-order form.
#[derive(Clone, Debug)]
pub struct LifetimeReport {
    pub t_cl: f64,
    pub v_cl: f64,
    pub kappa: f64,
    /// Exact dilated lifetime at q = 1 + kappa.
    pub exact_plus: f64,
    /// Exact dilated lifetime at q = 1 - kappa.
    pub exact_minus: f64,
    /// First-order form t_cl (1 + kappa v^2/(1 - v^2)).
    pub first_order_plus: f64,
    /// Sign of the correction on the q = 1 + kappa branch derived from the
    /// exact metric contraction: +1 means the lifetime grows with q.
    pub derived_sign_plus_branch: f64,
}

/// Exact dilated lifetime with the deformed speed from the metric
/// contraction: t_q = t_cl sqrt(1 - v^2) / sqrt(1 - |v|_q^2), normalized so
/// that t_q = t_cl at q = 1.
pub fn exact_dilatation(
    ld: &LorentzData,
    t_cl: f64,
    v_cl: f64,
    q0: f64,
) -> Result<f64, SpectraError> {
    if v_cl.abs() >= 1.0 {
        return Err(SpectraError::SpeedOutOfRange { v: v_cl });
    }
    let vq_sq = metric_speed_sq(ld, [0.0, 0.0, v_cl], q0)?;
    if vq_sq >= 1.0 {
        return Err(SpectraError::SpeedOutOfRange { v: vq_sq.sqrt() });
    }
    Ok(t_cl * (1.0 - v_cl * v_cl).sqrt() / (1.0 - vq_sq).sqrt())
}

pub fn lifetime_report(
    ld: &LorentzData,
    t_cl: f64,
    v_cl: f64,
    kappa: f64,
) -> Result<LifetimeReport, SpectraError> {
    let exact_plus = exact_dilatation(ld, t_cl, v_cl, 1.0 + kappa)?;
    let exact_minus = exact_dilatation(ld, t_cl, v_cl, 1.0 - kappa)?;
    let correction = lifetime_correction(t_cl, v_cl, kappa, true)?;
    Ok(LifetimeReport {
        t_cl,
        v_cl,
        kappa,
        exact_plus,
        exact_minus,
        first_order_plus: t_cl + correction,
        derived_sign_plus_branch: if exact_plus >= t_cl { 1.0 } else { -1.0 },
    })
}

// ---- Light-cone states ----

/// Light-cone eigenvalues (zero invariant length):
/// `x3(n) = q^(2n) Q t - q^-1 t` for q <= 1 and
/// `x3(n) = q^(-2(n+1)) Q t - q^-1 t` for q >= 1.
pub fn lightcone_spectrum(n: u32, t: f64, q0: f64) -> Result<f64, SpectraError> {
    if !(q0 > 0.0) {
        return Err(SpectraError::InvalidQ { q0 });
    }
    if t < 0.0 {
        return Err(SpectraError::NegativeTime { t });
    }
    let big_q = q0 + 1.0 / q0;
    let factor = if q0 <= 1.0 {
        q0.powi(2 * n as i32)
    } else {
        q0.powi(-2 * (n as i32 + 1))
    };
    Ok(factor * big_q * t - t / q0)
}

/// Exact-rational light-cone eigenvalue.
pub fn lightcone_spectrum_exact(n: u32, t: &BigRational, q0: &BigRational) -> BigRational {
    let big_q = big_q_rational(q0);
    let factor = if q0 <= &BigRational::one() {
        rational_pow(q0, 2 * n as i64)
    } else {
        rational_pow(q0, -2 * (n as i64 + 1))
    };
    factor * big_q * t - t / q0
}

/// The state at x3 = -q^-1 t is fixed by both ladder maps and moves at the
/// light speed: q^2 v3^2 = 1.
pub fn stable_state_check(t: &BigRational, q0: &BigRational) -> bool {
    let one = BigRational::one();
    let x = -(t / q0);
    let raise = {
        let f = rational_pow(q0, 2);
        &f * &x + (&f - &one) * t / q0
    };
    let lower = {
        let f = rational_pow(q0, -2);
        &f * &x + (&f - &one) * t / q0
    };
    if raise != x || lower != x {
        return false;
    }
    if t.is_zero() {
        return true;
    }
    let v3 = &x / t;
    rational_pow(q0, 2) * &v3 * &v3 == one
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        ratio(n, d)
    }

    #[test]
    fn gamma_examples() {
        // l = 0 gives 1 for every q; q = 1 gives 1 for every l.
        assert_eq!(gamma_l(0, 2.0).unwrap(), 1.0);
        for twice_l in 0..=20 {
            assert_eq!(gamma_l_exact(twice_l, &rat(1, 1)), rat(1, 1));
        }
        // l = 1/2, q = 2: (4 + 1/4) / (5/2) = 17/10.
        assert_eq!(gamma_l_exact(1, &rat(2, 1)), rat(17, 10));
        assert!((gamma_l(1, 2.0).unwrap() - 1.7).abs() < 1e-15);
    }

    #[test]
    fn spectrum_row_example() {
        // l = 1/2, m = 1/2, q = 2, t = 1: x3 = (2/1.7 - 1)/2 = 3/34.
        let rows = spectrum_table_exact(1, &rat(2, 1), &rat(1, 1), None).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[1].label.twice_m(), 1);
        assert_eq!(rows[1].x3, rat(3, 34));
        let rows_f = spectrum_table(
            1,
            &Params {
                q0: 2.0,
                t: 1.0,
                mass: None,
            },
        )
        .unwrap();
        assert!((rows_f[1].x3 - 0.0882352941176).abs() < 1e-10);
    }

    #[test]
    fn rest_state_is_trivial() {
        let rows = spectrum_table_exact(0, &rat(2, 1), &rat(1, 1), None).unwrap();
        assert_eq!(rows.len(), 1);
        assert!(rows[0].x3.is_zero());
        assert!(rows[0].v3.is_zero());
        assert_eq!(rows[0].gamma, rat(1, 1));
    }

    #[test]
    fn energy_momentum_invariant() {
        // E^2 - (m gamma |v|)^2 = m^2 for every row.
        let mass = rat(1, 1);
        for twice_l in [0, 1, 2, 3] {
            let rows =
                spectrum_table_exact(twice_l, &rat(3, 2), &rat(1, 1), Some(&mass)).unwrap();
            for row in rows {
                let e = row.energy.clone().unwrap();
                let g2 = &row.gamma * &row.gamma;
                let lhs = &e * &e - &g2 * &row.vsq * &mass * &mass;
                assert_eq!(lhs, &mass * &mass, "invariant at 2l = {}", twice_l);
            }
        }
    }

    #[test]
    fn rows_lie_in_admissible_interval() {
        for q0 in [rat(1, 2), rat(4, 5), rat(3, 2), rat(2, 1)] {
            for twice_l in [0i64, 1, 2, 3, 4] {
                let gamma = gamma_l_exact(twice_l, &q0);
                let gamma_sq = &gamma * &gamma;
                let roots = interval_roots_exact(&rat(1, 1), &gamma_sq, &q0).unwrap();
                let rows = spectrum_table_exact(twice_l, &q0, &rat(1, 1), None).unwrap();
                for row in rows {
                    let x = QuadExt::rational(row.x3.clone(), roots.a_plus.rad.clone());
                    let lo_ok = roots.a_minus.le(&x) && roots.b_plus.le(&x);
                    let hi_ok = x.le(&roots.a_plus) && x.le(&roots.b_minus);
                    assert!(lo_ok && hi_ok, "row outside interval");
                    if row.label.twice_m().abs() < twice_l {
                        assert!(
                            roots.a_minus.sub(&x).sign() == Ordering::Less
                                && roots.b_plus.sub(&x).sign() == Ordering::Less
                                && x.sub(&roots.a_plus).sign() == Ordering::Less
                                && x.sub(&roots.b_minus).sign() == Ordering::Less,
                            "interior row touches the boundary"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn roots_at_gamma_one() {
        // gamma = 1, q > 1: a_plus = (q - q^-1) t; the interval degenerates
        // to the single point 0.
        let roots = interval_roots(1.0, 1.0, 2.0).unwrap();
        assert!((roots.a_plus - 1.5).abs() < 1e-12);
        let (lo, hi) = roots.interval();
        assert!(lo.abs() < 1e-12 && hi.abs() < 1e-12);
    }

    #[test]
    fn roots_light_cone_limit() {
        // gamma -> infinity: roots -q^-1 t, q t, -q^-1 t, q^-3 t.
        let roots = interval_roots(1.0, f64::INFINITY, 2.0).unwrap();
        assert!((roots.a_minus + 0.5).abs() < 1e-12);
        assert!((roots.a_plus - 2.0).abs() < 1e-12);
        assert!((roots.b_plus + 0.5).abs() < 1e-12);
        assert!((roots.b_minus - 0.125).abs() < 1e-12);
    }

    #[test]
    fn roots_b_is_scaled_a() {
        let roots = interval_roots(1.3, 1.9, 1.7).unwrap();
        let s = -1.0 / (1.7f64 * 1.7);
        assert!((roots.b_plus - s * roots.a_plus).abs() < 1e-12);
        assert!((roots.b_minus - s * roots.a_minus).abs() < 1e-12);
    }

    #[test]
    fn complex_roots_rejected() {
        // gamma^2 < 4/Q^2 has no real roots.
        let err = interval_roots(1.0, 0.5, 1.05).unwrap_err();
        assert!(matches!(err, SpectraError::ComplexRoots { .. }));
    }

    #[test]
    fn causality_equivalence_exact() {
        // Interval nonemptiness from the roots matches gamma^2 >= 1 on a
        // rational grid including the boundary.
        for qi in 0..20 {
            let q0 = rat(1, 2) + rat(3, 2) * rat(qi, 19);
            let big_q = big_q_rational(&q0);
            let min_gsq = rat(4, 1) / (&big_q * &big_q);
            for gi in 0..20 {
                let gamma_sq = &min_gsq + (rat(4, 1) - &min_gsq) * rat(gi, 19);
                let nonempty = causality_check_exact(&gamma_sq, &q0).unwrap();
                assert_eq!(
                    nonempty,
                    gamma_sq >= rat(1, 1),
                    "grid point q = {}, gamma^2 = {}",
                    q0,
                    gamma_sq
                );
            }
            assert!(causality_check_exact(&rat(1, 1), &q0).unwrap());
        }
    }

    #[test]
    fn causality_float_examples() {
        assert!(!causality_check(0.99, 1.3).unwrap());
        assert!(causality_check(1.0, 1.3).unwrap());
        assert!(causality_check(2.5, 0.7).unwrap());
    }

    #[test]
    fn termination_exact_examples() {
        // q = 2, l = 1/2: the raising overshoot lands on a+, the lowering
        // overshoot on b+, and the edges sit on a- and b-.
        let report = termination_check(1, &rat(2, 1), &rat(1, 1), None);
        assert!(report.passed());
        assert_eq!(report.raise_overshoot_label, Some(RootLabel::Plus));
        assert_eq!(report.lower_overshoot_label, Some(RootLabel::Plus));
        assert_eq!(report.lower_edge_label, Some(RootLabel::Minus));
        assert_eq!(report.upper_edge_label, Some(RootLabel::Minus));
        // q = 3/2, l = 1: same structure.
        let report = termination_check(2, &rat(3, 2), &rat(1, 1), None);
        assert!(report.passed());
        // q < 1: the labels swap; the edges sit on the saturation roots.
        let report = termination_check(1, &rat(1, 2), &rat(1, 1), None);
        assert!(report.passed());
        assert_eq!(report.raise_overshoot_label, Some(RootLabel::Minus));
        assert_eq!(report.lower_edge_label, Some(RootLabel::Plus));
    }

    #[test]
    fn termination_negative_control() {
        // A 1% gamma perturbation misses every root.
        let scale = rat(101, 100);
        let report = termination_check(1, &rat(2, 1), &rat(1, 1), Some(&scale));
        assert!(!report.passed());
        assert!(report.raise_overshoot_label.is_none());
        assert!(report.lower_overshoot_label.is_none());
    }

    #[test]
    fn termination_symbolic_small_l() {
        for twice_l in 0..=4 {
            assert!(termination_symbolic(twice_l), "2l = {}", twice_l);
        }
    }

    #[test]
    fn ladder_closure_small_l() {
        for twice_l in 0..=5 {
            assert!(ladder_closure_symbolic(twice_l), "2l = {}", twice_l);
        }
    }

    #[test]
    fn boost_event_examples() {
        let params = Params {
            q0: 2.0,
            t: 1.0,
            mass: None,
        };
        let rest = boost_event(&params, BoostLabel::new(0, 0).unwrap()).unwrap();
        assert_eq!(rest.t_prime, 1.0);
        assert_eq!(rest.x3_prime, 0.0);
        let b = boost_event(&params, BoostLabel::new(1, 1).unwrap()).unwrap();
        assert!((b.t_prime - 1.7).abs() < 1e-12);
    }

    #[test]
    fn metric_speed_is_q_squared_speed() {
        // The spatial metric contraction gives |v|_q^2 = q^2 v^2 because the
        // off-diagonal block is antisymmetric.
        let ld = LorentzData::new();
        for q0 in [0.5, 0.9, 1.0, 1.4, 2.0] {
            for v in [[0.3, 0.0, 0.0], [0.1, 0.2, 0.3], [0.0, 0.0, 0.6]] {
                let vsq = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
                let got = metric_speed_sq(&ld, v, q0).unwrap();
                assert!((got - q0 * q0 * vsq).abs() < 1e-12, "q = {}", q0);
            }
        }
    }

    #[test]
    fn lifetime_magnitude_example() {
        // v = 0.6, kappa = 0.01, t = 1: 0.01 * 0.36 / 0.64 = 0.005625.
        let c = lifetime_correction(1.0, 0.6, 0.01, true).unwrap();
        assert!((c - 0.005625).abs() < 1e-15);
        assert_eq!(lifetime_correction(1.0, 0.0, 0.01, true).unwrap(), 0.0);
        assert!(matches!(
            lifetime_correction(1.0, 1.0, 0.01, true),
            Err(SpectraError::SpeedOutOfRange { .. })
        ));
    }

    #[test]
    fn lifetime_residual_is_second_order() {
        // Halving kappa divides the residual against the first-order form
        // by about four.
        let ld = LorentzData::new();
        for v in [0.3, 0.6, 0.9] {
            let residual = |kappa: f64| -> f64 {
                let r = lifetime_report(&ld, 1.0, v, kappa).unwrap();
                (r.exact_plus - r.first_order_plus).abs()
            };
            let ratio = residual(0.02) / residual(0.01);
            assert!((3.5..=4.5).contains(&ratio), "v = {}: ratio = {}", v, ratio);
        }
    }

    #[test]
    fn lifetime_derived_sign() {
        // On the q = 1 + kappa branch the deformed speed grows, so the
        // dilatation increases.
        let ld = LorentzData::new();
        let r = lifetime_report(&ld, 1.0, 0.6, 0.01).unwrap();
        assert_eq!(r.derived_sign_plus_branch, 1.0);
        assert!(r.exact_minus < r.t_cl);
    }

    #[test]
    fn lightcone_examples() {
        // n = 0, q < 1: x3 = q t; n = 0, q > 1: x3 = q^-3 t.
        let t = rat(1, 1);
        assert_eq!(lightcone_spectrum_exact(0, &t, &rat(1, 2)), rat(1, 2));
        assert_eq!(lightcone_spectrum_exact(0, &t, &rat(2, 1)), rat(1, 8));
        let v = lightcone_spectrum(0, 1.0, 2.0).unwrap();
        assert!((v - 0.125).abs() < 1e-15);
    }

    #[test]
    fn lightcone_matches_degenerate_roots() {
        // At zero invariant length the n = 0 eigenvalue is the a+ root for
        // q < 1 and the b- root for q > 1.
        for (q0, q0f) in [(rat(1, 2), 0.5), (rat(2, 1), 2.0)] {
            let x = lightcone_spectrum_exact(0, &rat(1, 1), &q0);
            let roots = interval_roots(1.0, f64::INFINITY, q0f).unwrap();
            let expect = if q0f < 1.0 { roots.a_plus } else { roots.b_minus };
            assert!((rational_to_f64(&x) - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn lightcone_stable_state() {
        for q in [rat(1, 2), rat(4, 5), rat(3, 2), rat(2, 1)] {
            assert!(stable_state_check(&rat(1, 1), &q));
            assert!(stable_state_check(&rat(7, 3), &q));
        }
    }

    #[test]
    fn vsq_monotone_in_l() {
        // vsq increases toward 1 as l grows.
        let q0 = rat(3, 2);
        let mut prev = rat(-1, 1);
        for twice_l in 0..=20 {
            let gamma = gamma_l_exact(twice_l, &q0);
            let vsq = BigRational::one() - (&gamma * &gamma).recip();
            assert!(vsq > prev);
            assert!(vsq < rat(1, 1));
            prev = vsq;
        }
    }

    #[test]
    fn q_branches_agree_on_gamma() {
        // q and 1/q give the same gamma(l).
        for twice_l in 0..=6 {
            assert_eq!(
                gamma_l_exact(twice_l, &rat(2, 1)),
                gamma_l_exact(twice_l, &rat(1, 2))
            );
        }
    }

    #[test]
    fn collapse_at_q_one() {
        for twice_l in 0..=20 {
            assert_eq!(gamma_l_exact(twice_l, &rat(1, 1)), rat(1, 1));
        }
        let rows = spectrum_table_exact(4, &rat(1, 1), &rat(5, 1), None).unwrap();
        for row in rows {
            assert!(row.x3.is_zero());
            assert!(row.vsq.is_zero());
        }
    }

    #[test]
    fn positivity_values_vanish_at_roots() {
        let t = 1.0;
        let gamma = gamma_l(2, 1.7).unwrap();
        let roots = interval_roots(t, gamma, 1.7).unwrap();
        let (a, _) = positivity_values(t, gamma, 1.7, roots.a_plus);
        assert!(a.abs() < 1e-12);
        let (a2, _) = positivity_values(t, gamma, 1.7, roots.a_minus);
        assert!(a2.abs() < 1e-12);
        let (_, b) = positivity_values(t, gamma, 1.7, roots.b_plus);
        assert!(b.abs() < 1e-12);
    }

    #[test]
    fn labeling_compatibility() {
        // The chain-indexed eigenvalues agree with the canonical (l, m) form
        // under m = n - l, for every n = 0..2l.
        let t = rat(1, 1);
        for q0 in [rat(1, 2), rat(2, 1), rat(3, 2)] {
            for twice_l in 0..=4i64 {
                for n in 0..=twice_l {
                    let chain = x3_chain_indexed(twice_l, n, &q0, &t);
                    let twice_m = 2 * n - twice_l;
                    let label = BoostLabel::new(twice_l, twice_m).unwrap();
                    assert_eq!(chain, x3_exact(label, &q0, &t), "L={} n={}", twice_l, n);
                }
            }
        }
    }

    #[test]
    fn quad_ext_signs() {
        // 1 - sqrt(2) < 0, 2 - sqrt(2) > 0, sqrt(4) - 2 = 0.
        let x = QuadExt::new(rat(1, 1), rat(-1, 1), rat(2, 1));
        assert_eq!(x.sign(), Ordering::Less);
        let y = QuadExt::new(rat(2, 1), rat(-1, 1), rat(2, 1));
        assert_eq!(y.sign(), Ordering::Greater);
        let z = QuadExt::new(rat(-2, 1), rat(1, 1), rat(4, 1));
        assert_eq!(z.sign(), Ordering::Equal);
    }

    #[test]
    fn invalid_labels_rejected() {
        assert!(BoostLabel::new(-1, 0).is_err());
        assert!(BoostLabel::new(2, 1).is_err());
        assert!(BoostLabel::new(2, 4).is_err());
        assert!(BoostLabel::new(3, 1).is_ok());
    }
}
