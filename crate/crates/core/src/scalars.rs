//! Exact arithmetic in the coefficient field Q(i)(s), where s = q^(1/2).
//!
//! Every quantity in the library (tensor entries, functional values,
//! commutation-rule coefficients) lives in this field. A [`Scalar`] is kept in
//! a unique canonical form, so equality is structural equality and identity
//! checks reduce to "the difference canonicalizes to zero".
//!
//! Working in s rather than q makes the half-integer powers of q that appear
//! in the spinor metric and the quantum metric (q^(1/2), q^(-3/2), ...)
//! ordinary Laurent monomials.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::ScalarError;

// ---- Gaussian rationals ----

/// A Gaussian rational `re + im*i` with arbitrary-precision rational parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat { re, im }
    }

    pub fn zero() -> Self {
        GaussRat::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        GaussRat::new(BigRational::one(), BigRational::zero())
    }

    pub fn i() -> Self {
        GaussRat::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        GaussRat::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "GaussRat::from_ratio: zero denominator");
        GaussRat::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Complex conjugate: i -> -i.
    pub fn conj(&self) -> Self {
        GaussRat::new(self.re.clone(), -self.im.clone())
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "GaussRat::inv: division by zero");
        let norm = &self.re * &self.re + &self.im * &self.im;
        GaussRat::new(&self.re / &norm, -(&self.im / &norm))
    }

    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }
}

impl Add for &GaussRat {
    type Output = GaussRat;
    fn add(self, rhs: &GaussRat) -> GaussRat {
        GaussRat::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &GaussRat {
    type Output = GaussRat;
    fn sub(self, rhs: &GaussRat) -> GaussRat {
        GaussRat::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul for &GaussRat {
    type Output = GaussRat;
    fn mul(self, rhs: &GaussRat) -> GaussRat {
        GaussRat::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Neg for &GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat::new(-self.re.clone(), -self.im.clone())
    }
}

/// Lossy conversion used only by the numeric evaluation path.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    let num = r.numer();
    let den = r.denom();
    // Exact when the parts fit in i128; otherwise fall back to string parsing,
    // which is still correctly rounded for the sizes reached here.
    if let (Some(n), Some(d)) = (i128::try_from(num.clone()).ok(), i128::try_from(den.clone()).ok())
    {
        n as f64 / d as f64
    } else {
        let n: f64 = num.to_string().parse().unwrap_or(f64::NAN);
        let d: f64 = den.to_string().parse().unwrap_or(f64::NAN);
        n / d
    }
}

// ---- Dense polynomials in s over GaussRat ----

/// A dense univariate polynomial in s with Gaussian-rational coefficients,
/// ascending degree order. Canonical: empty for zero, last coefficient nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SPoly {
    coeffs: Vec<GaussRat>,
}

impl SPoly {
    fn normalize(mut coeffs: Vec<GaussRat>) -> Self {
        while coeffs.last().map_or(false, GaussRat::is_zero) {
            coeffs.pop();
        }
        SPoly { coeffs }
    }

    pub fn zero() -> Self {
        SPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        SPoly {
            coeffs: vec![GaussRat::one()],
        }
    }

    pub fn constant(c: GaussRat) -> Self {
        SPoly::normalize(vec![c])
    }

    pub fn monomial(c: GaussRat, deg: usize) -> Self {
        if c.is_zero() {
            return SPoly::zero();
        }
        let mut coeffs = vec![GaussRat::zero(); deg + 1];
        coeffs[deg] = c;
        SPoly { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<GaussRat>) -> Self {
        SPoly::normalize(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> GaussRat {
        self.coeffs.get(i).cloned().unwrap_or_else(GaussRat::zero)
    }

    pub fn coeffs(&self) -> &[GaussRat] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&GaussRat> {
        self.coeffs.last()
    }

    /// Index of the lowest nonzero coefficient (the s-adic valuation).
    /// Returns 0 for the zero polynomial.
    pub fn valuation(&self) -> usize {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .unwrap_or(0)
    }

    /// Divide by s^k, dropping the k lowest coefficients. The caller must
    /// ensure those coefficients vanish.
    pub fn shift_down(&self, k: usize) -> SPoly {
        debug_assert!(self.coeffs.iter().take(k).all(GaussRat::is_zero));
        SPoly::normalize(self.coeffs.iter().skip(k).cloned().collect())
    }

    pub fn scale(&self, c: &GaussRat) -> SPoly {
        if c.is_zero() {
            return SPoly::zero();
        }
        SPoly::normalize(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn conj(&self) -> SPoly {
        SPoly {
            coeffs: self.coeffs.iter().map(GaussRat::conj).collect(),
        }
    }

    pub fn eval_gauss(&self, x: &GaussRat) -> GaussRat {
        let mut acc = GaussRat::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn eval_complex(&self, x: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.to_complex64();
        }
        acc
    }

    /// Split into even and odd parts: p(s) = even(s^2) + s*odd(s^2).
    pub fn split_even_odd(&self) -> (SPoly, SPoly) {
        let mut even = Vec::new();
        let mut odd = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if k % 2 == 0 {
                even.push(c.clone());
            } else {
                odd.push(c.clone());
            }
        }
        (SPoly::normalize(even), SPoly::normalize(odd))
    }

    /// Euclidean division. Panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &SPoly) -> (SPoly, SPoly) {
        assert!(!divisor.is_zero(), "SPoly::div_rem: division by zero");
        let d_deg = divisor.degree().unwrap();
        let s_deg = match self.degree() {
            Some(d) => d,
            None => return (SPoly::zero(), SPoly::zero()),
        };
        if s_deg < d_deg {
            return (SPoly::zero(), self.clone());
        }
        let lc_inv = divisor.leading().unwrap().inv();
        let mut rem = self.coeffs.clone();
        let q_len = s_deg - d_deg + 1;
        let mut quot = vec![GaussRat::zero(); q_len];
        for i in (0..q_len).rev() {
            let c = &rem[i + d_deg] * &lc_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dj) in divisor.coeffs.iter().enumerate() {
                let t = dj * &c;
                rem[i + j] = &rem[i + j] - &t;
            }
            quot[i] = c;
        }
        (SPoly::normalize(quot), SPoly::normalize(rem))
    }

    /// Monic greatest common divisor via the Euclidean algorithm.
    pub fn gcd(a: &SPoly, b: &SPoly) -> SPoly {
        let mut a = a.clone();
        let mut b = b.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let lc_inv = a.leading().unwrap().inv();
        a.scale(&lc_inv)
    }
}

impl Add for &SPoly {
    type Output = SPoly;
    fn add(self, rhs: &SPoly) -> SPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(len);
        for i in 0..len {
            out.push(&self.coeff(i) + &rhs.coeff(i));
        }
        SPoly::normalize(out)
    }
}

impl Sub for &SPoly {
    type Output = SPoly;
    fn sub(self, rhs: &SPoly) -> SPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(len);
        for i in 0..len {
            out.push(&self.coeff(i) - &rhs.coeff(i));
        }
        SPoly::normalize(out)
    }
}

impl Mul for &SPoly {
    type Output = SPoly;
    fn mul(self, rhs: &SPoly) -> SPoly {
        if self.is_zero() || rhs.is_zero() {
            return SPoly::zero();
        }
        let mut out = vec![GaussRat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let t = a * b;
                out[i + j] = &out[i + j] + &t;
            }
        }
        SPoly::normalize(out)
    }
}

// ---- Scalars: the field Q(i)(s) ----

/// An element of Q(i)(s), stored as `s^shift * num / den` with
///
/// * `num`, `den` ordinary polynomials in s with nonzero constant term,
/// * `den` monic and coprime to `num`,
/// * zero represented as `shift = 0, num = 0, den = 1`.
///
/// This factorization is unique, so `PartialEq` is semantic equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scalar {
    shift: i64,
    num: SPoly,
    den: SPoly,
}

impl Scalar {
    fn canonical(mut shift: i64, mut num: SPoly, mut den: SPoly) -> Scalar {
        assert!(!den.is_zero(), "Scalar: zero denominator");
        if num.is_zero() {
            return Scalar {
                shift: 0,
                num: SPoly::zero(),
                den: SPoly::one(),
            };
        }
        let vn = num.valuation();
        let vd = den.valuation();
        shift += vn as i64 - vd as i64;
        num = num.shift_down(vn);
        den = den.shift_down(vd);
        let g = SPoly::gcd(&num, &den);
        if !g.is_one() {
            num = num.div_rem(&g).0;
            den = den.div_rem(&g).0;
        }
        let lc_inv = den.leading().unwrap().inv();
        if !lc_inv.is_one() {
            num = num.scale(&lc_inv);
            den = den.scale(&lc_inv);
        }
        Scalar { shift, num, den }
    }

    pub fn zero() -> Scalar {
        Scalar {
            shift: 0,
            num: SPoly::zero(),
            den: SPoly::one(),
        }
    }

    pub fn one() -> Scalar {
        Scalar {
            shift: 0,
            num: SPoly::one(),
            den: SPoly::one(),
        }
    }

    pub fn i() -> Scalar {
        Scalar::from_gauss(GaussRat::i())
    }

    pub fn from_gauss(c: GaussRat) -> Scalar {
        Scalar::canonical(0, SPoly::constant(c), SPoly::one())
    }

    pub fn from_int(n: i64) -> Scalar {
        Scalar::from_gauss(GaussRat::from_int(n))
    }

    pub fn from_ratio(num: i64, den: i64) -> Scalar {
        Scalar::from_gauss(GaussRat::from_ratio(num, den))
    }

    pub fn from_rational(r: &BigRational) -> Scalar {
        Scalar::from_gauss(GaussRat::new(r.clone(), BigRational::zero()))
    }

    /// The monomial s^e = q^(e/2).
    pub fn s_pow(e: i64) -> Scalar {
        Scalar {
            shift: e,
            num: SPoly::one(),
            den: SPoly::one(),
        }
    }

    /// The monomial q^e.
    pub fn q_pow(e: i64) -> Scalar {
        Scalar::s_pow(2 * e)
    }

    /// q^(p/2), i.e. a half-integer power of q given by its doubled exponent.
    pub fn q_half_pow(p: i64) -> Scalar {
        Scalar::s_pow(p)
    }

    /// Q = q + q^-1.
    pub fn big_q() -> Scalar {
        &Scalar::q_pow(1) + &Scalar::q_pow(-1)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.shift == 0 && self.num.is_one() && self.den.is_one()
    }

    /// True when the scalar only involves integer powers of q, i.e. all
    /// s-exponents are even. Such scalars evaluate rationally at rational q.
    pub fn is_integral_in_q(&self) -> bool {
        let even_only = |p: &SPoly| {
            p.coeffs()
                .iter()
                .enumerate()
                .all(|(k, c)| c.is_zero() || k % 2 == 0)
        };
        // den has nonzero constant term; if den is even-only and num is
        // even-only with an even shift, the scalar is a function of q alone.
        self.is_zero() || (self.shift % 2 == 0 && even_only(&self.num) && even_only(&self.den))
    }

    /// Star conjugation: i -> -i, s fixed (q is real). An involution.
    pub fn star(&self) -> Scalar {
        // Conjugation is a field automorphism fixing s, so the canonical
        // shape is preserved except that the monic leading coefficient of
        // den is real and stays 1.
        Scalar {
            shift: self.shift,
            num: self.num.conj(),
            den: self.den.conj(),
        }
    }

    pub fn inv(&self) -> Result<Scalar, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Scalar::canonical(
            -self.shift,
            self.den.clone(),
            self.num.clone(),
        ))
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar, ScalarError> {
        Ok(self * &rhs.inv()?)
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Numeric evaluation at a positive real q0 within 1e-12 relative error.
    ///
    /// A pole is detected exactly: the f64 input is a rational number, so
    /// the vanishing of the denominator at sqrt(q0) is decidable.
    pub fn eval_at(&self, q0: f64) -> Result<NumericValue, ScalarError> {
        if !(q0 > 0.0) || !q0.is_finite() {
            return Err(ScalarError::InvalidEvaluationPoint { q0 });
        }
        let q0_exact = BigRational::from_float(q0).expect("finite float is rational");
        if self.den_vanishes_at(&q0_exact) {
            return Err(ScalarError::PoleAt { q0 });
        }
        let s0 = Complex64::new(q0.sqrt(), 0.0);
        let den = self.den.eval_complex(s0);
        let num = self.num.eval_complex(s0);
        let shift = s0.powi(self.shift as i32);
        Ok(NumericValue {
            value: shift * num / den,
            q0,
        })
    }

    fn den_vanishes_at(&self, q0: &BigRational) -> bool {
        if let Some(root) = rational_sqrt(q0) {
            let s0 = GaussRat::new(root, BigRational::zero());
            return self.den.eval_gauss(&s0).is_zero();
        }
        let (even, odd) = self.den.split_even_odd();
        let q0g = GaussRat::new(q0.clone(), BigRational::zero());
        even.eval_gauss(&q0g).is_zero() && odd.eval_gauss(&q0g).is_zero()
    }

    /// Exact evaluation at a positive rational q0. The result lives in the
    /// quadratic extension Q(i)(sqrt(q0)); when q0 is a perfect rational
    /// square the radical part is resolved away.
    pub fn eval_exact(&self, q0: &BigRational) -> Result<ExactValue, ScalarError> {
        if !q0.is_positive() {
            return Err(ScalarError::InvalidEvaluationPoint {
                q0: rational_to_f64(q0),
            });
        }
        if let Some(root) = rational_sqrt(q0) {
            let s0 = GaussRat::new(root, BigRational::zero());
            let den = self.den.eval_gauss(&s0);
            if den.is_zero() {
                return Err(ScalarError::PoleAt {
                    q0: rational_to_f64(q0),
                });
            }
            let num = self.num.eval_gauss(&s0);
            let shift = gauss_pow(&s0, self.shift);
            return Ok(ExactValue::Rational(&(&num * &den.inv()) * &shift));
        }
        let eval_pair = |p: &SPoly| -> (GaussRat, GaussRat) {
            let (even, odd) = p.split_even_odd();
            let q0g = GaussRat::new(q0.clone(), BigRational::zero());
            (even.eval_gauss(&q0g), odd.eval_gauss(&q0g))
        };
        let (na, nb) = eval_pair(&self.num);
        let (da, db) = eval_pair(&self.den);
        let num = QExt::new(na, nb, q0.clone());
        let den = QExt::new(da, db, q0.clone());
        if den.is_zero() {
            return Err(ScalarError::PoleAt {
                q0: rational_to_f64(q0),
            });
        }
        let mut v = num.mul(&den.inv());
        // Fold in s^shift: s^2 = q0.
        let half = self.shift.div_euclid(2);
        let rem = self.shift.rem_euclid(2);
        let q0g = GaussRat::new(q0.clone(), BigRational::zero());
        let scale = gauss_pow(&q0g, half);
        v = v.scale(&scale);
        if rem == 1 {
            v = v.mul_sqrt();
        }
        Ok(ExactValue::Quadratic(v))
    }

    /// The value at q = 1 (s = 1), as an exact constant scalar.
    pub fn classical_limit(&self) -> Result<Scalar, ScalarError> {
        let one = GaussRat::one();
        let den = self.den.eval_gauss(&one);
        if den.is_zero() {
            // num and den are coprime, so the numerator cannot also vanish.
            return Err(ScalarError::PoleAtOne);
        }
        let num = self.num.eval_gauss(&one);
        Ok(Scalar::from_gauss(&num * &den.inv()))
    }

    /// The constant term when the scalar is a constant; None otherwise.
    pub fn as_constant(&self) -> Option<GaussRat> {
        if self.is_zero() {
            return Some(GaussRat::zero());
        }
        if self.shift == 0 && self.num.degree() == Some(0) && self.den.is_one() {
            return Some(self.num.coeff(0));
        }
        None
    }

    #[cfg(test)]
    pub(crate) fn parts(&self) -> (i64, &SPoly, &SPoly) {
        (self.shift, &self.num, &self.den)
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let m = self.shift.min(rhs.shift);
        let la = SPoly::monomial(GaussRat::one(), (self.shift - m) as usize);
        let lb = SPoly::monomial(GaussRat::one(), (rhs.shift - m) as usize);
        let num = &(&(&la * &self.num) * &rhs.den) + &(&(&lb * &rhs.num) * &self.den);
        let den = &self.den * &rhs.den;
        Scalar::canonical(m, num, den)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.is_zero() || rhs.is_zero() {
            return Scalar::zero();
        }
        Scalar::canonical(
            self.shift + rhs.shift,
            &self.num * &rhs.num,
            &self.den * &rhs.den,
        )
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            shift: self.shift,
            num: self.num.scale(&GaussRat::from_int(-1)),
            den: self.den.clone(),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self.checked_div(rhs)
            .expect("Scalar division by zero; use checked_div for a fallible path")
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

// ---- Numeric and exact evaluation results ----

/// Floating-point value of a scalar at a fixed positive origin q0.
#[derive(Clone, Copy, Debug)]
pub struct NumericValue {
    pub value: Complex64,
    pub q0: f64,
}

impl NumericValue {
    pub fn re(&self) -> f64 {
        self.value.re
    }
}

/// Exact value at a rational q0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExactValue {
    /// q0 was a perfect rational square; the value is a Gaussian rational.
    Rational(GaussRat),
    /// Value `a + b*sqrt(q0)` in the quadratic extension.
    Quadratic(QExt),
}

impl ExactValue {
    pub fn is_zero(&self) -> bool {
        match self {
            ExactValue::Rational(g) => g.is_zero(),
            ExactValue::Quadratic(q) => q.is_zero(),
        }
    }

    pub fn to_complex64(&self) -> Complex64 {
        match self {
            ExactValue::Rational(g) => g.to_complex64(),
            ExactValue::Quadratic(q) => q.to_complex64(),
        }
    }

    /// The rational part when the radical component vanishes.
    pub fn as_gauss(&self) -> Option<GaussRat> {
        match self {
            ExactValue::Rational(g) => Some(g.clone()),
            ExactValue::Quadratic(q) if q.b.is_zero() => Some(q.a.clone()),
            _ => None,
        }
    }
}

/// An element `a + b*sqrt(q0)` of the quadratic extension of the Gaussian
/// rationals by a non-square positive rational q0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QExt {
    pub a: GaussRat,
    pub b: GaussRat,
    pub q0: BigRational,
}

impl QExt {
    pub fn new(a: GaussRat, b: GaussRat, q0: BigRational) -> Self {
        QExt { a, b, q0 }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn mul(&self, rhs: &QExt) -> QExt {
        debug_assert_eq!(self.q0, rhs.q0);
        let q0 = GaussRat::new(self.q0.clone(), BigRational::zero());
        QExt::new(
            &(&self.a * &rhs.a) + &(&(&self.b * &rhs.b) * &q0),
            &(&self.a * &rhs.b) + &(&self.b * &rhs.a),
            self.q0.clone(),
        )
    }

    /// Multiply by sqrt(q0).
    pub fn mul_sqrt(&self) -> QExt {
        let q0 = GaussRat::new(self.q0.clone(), BigRational::zero());
        QExt::new(&self.b * &q0, self.a.clone(), self.q0.clone())
    }

    pub fn scale(&self, c: &GaussRat) -> QExt {
        QExt::new(&self.a * c, &self.b * c, self.q0.clone())
    }

    /// Inverse; valid because q0 is not a rational square, so the norm
    /// a^2 - b^2*q0 of a nonzero element is nonzero.
    pub fn inv(&self) -> QExt {
        assert!(!self.is_zero(), "QExt::inv: division by zero");
        let q0 = GaussRat::new(self.q0.clone(), BigRational::zero());
        let norm = &(&self.a * &self.a) - &(&(&self.b * &self.b) * &q0);
        let ninv = norm.inv();
        QExt::new(&self.a * &ninv, -&(&self.b * &ninv), self.q0.clone())
    }

    pub fn to_complex64(&self) -> Complex64 {
        let root = rational_to_f64(&self.q0).sqrt();
        self.a.to_complex64() + self.b.to_complex64() * root
    }
}

fn gauss_pow(base: &GaussRat, e: i64) -> GaussRat {
    if e == 0 {
        return GaussRat::one();
    }
    let b = if e > 0 { base.clone() } else { base.inv() };
    let mut acc = GaussRat::one();
    for _ in 0..e.unsigned_abs() {
        acc = &acc * &b;
    }
    acc
}

/// The exact square root of a nonnegative rational, when it exists.
pub fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let num = r.numer().sqrt();
    let den = r.denom().sqrt();
    if &(&num * &num) == r.numer() && &(&den * &den) == r.denom() {
        Some(BigRational::new(num, den))
    } else {
        None
    }
}

// ---- Display ----

struct TermParts {
    sign_negative: bool,
    body: String,
}

fn power_string(s_exp: i64) -> Option<String> {
    match s_exp {
        0 => None,
        2 => Some("q".to_string()),
        e if e % 2 == 0 => Some(format!("q^{}", e / 2)),
        e => Some(format!("q^({}/2)", e)),
    }
}

fn rational_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn term_parts(c: &GaussRat, s_exp: i64) -> TermParts {
    let negative = if !c.re.is_zero() {
        c.re.is_negative()
    } else {
        c.im.is_negative()
    };
    let mag = if negative { -c } else { c.clone() };
    let pow = power_string(s_exp);
    let has_pow = pow.is_some();
    // Fractional rationals are parenthesized only when they multiply a
    // power factor, keeping "-3/2" bare but "(3/2)*q^2" unambiguous.
    let coeff = if mag.is_one() {
        None
    } else if mag.re.is_zero() && mag.im.is_one() {
        Some("i".to_string())
    } else if mag.im.is_zero() {
        let s = rational_string(&mag.re);
        if mag.re.denom().is_one() || !has_pow {
            Some(s)
        } else {
            Some(format!("({})", s))
        }
    } else if mag.re.is_zero() {
        let s = rational_string(&mag.im);
        if mag.im.denom().is_one() {
            Some(format!("{}*i", s))
        } else {
            Some(format!("({})*i", s))
        }
    } else {
        let im_part = term_parts(&GaussRat::new(mag.im.clone(), BigRational::zero()), 0);
        let joiner = if im_part.sign_negative { " - " } else { " + " };
        let im_body = if im_part.body == "1" {
            "i".to_string()
        } else {
            format!("{}*i", im_part.body)
        };
        Some(format!("({}{}{})", rational_string(&mag.re), joiner, im_body))
    };
    let body = match (coeff, pow) {
        (None, None) => "1".to_string(),
        (None, Some(p)) => p,
        (Some(c), None) => c,
        (Some(c), Some(p)) => format!("{}*{}", c, p),
    };
    TermParts {
        sign_negative: negative,
        body,
    }
}

/// Render a Laurent polynomial (poly with an s-exponent offset) in q-notation,
/// terms by descending exponent. Returns the string and whether it has more
/// than one term.
fn laurent_string(p: &SPoly, shift: i64) -> (String, bool) {
    let mut terms = Vec::new();
    for (k, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        terms.push(term_parts(c, shift + k as i64));
    }
    if terms.is_empty() {
        return ("0".to_string(), false);
    }
    let multi = terms.len() > 1;
    let mut out = String::new();
    for (i, t) in terms.iter().enumerate() {
        if i == 0 {
            if t.sign_negative {
                out.push('-');
            }
        } else {
            out.push_str(if t.sign_negative { " - " } else { " + " });
        }
        out.push_str(&t.body);
    }
    (out, multi)
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if self.den.is_one() {
            let (num_s, _) = laurent_string(&self.num, self.shift);
            return write!(f, "{}", num_s);
        }
        // Center the denominator's exponent range so that Q = q + q^-1
        // displays symmetrically rather than as (q^2 + 1) over a shifted
        // numerator. Both parts share the offset, so the value is unchanged.
        let offset = (self.den.degree().unwrap_or(0) / 2) as i64;
        let (num_s, num_multi) = laurent_string(&self.num, self.shift - offset);
        let (den_s, den_multi) = laurent_string(&self.den, -offset);
        let num_wrapped = if num_multi || num_s.starts_with('-') || num_s.contains('*') {
            format!("({})", num_s)
        } else {
            num_s
        };
        let den_wrapped = if den_multi || den_s.contains('*') {
            format!("({})", den_s)
        } else {
            den_s
        };
        write!(f, "{}/{}", num_wrapped, den_wrapped)
    }
}
