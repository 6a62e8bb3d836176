//! The noncommutative coordinate algebra of q-deformed Minkowski space.
//!
//! Generators are the time coordinate X0, the space coordinate X3, the
//! ladder combinations Z = X1 + i X2 and Zb = X1 - i X2, and a central
//! symbol Tau2 for the invariant squared length. The commutation relations
//!
//! ```text
//! X3*Z  = q^2 Z*X3 + (q - q^-1) X0*Z
//! X3*Zb = q^-2 Zb*X3 - q^-2 (q - q^-1) X0*Zb
//! Z*Zb  = Zb*Z + (q^2 - q^-2) X3^2 + q^-1 (q^2 - q^-2) X0*X3
//! ```
//!
//! together with centrality of X0 and Tau2 are oriented left-to-right as a
//! rewrite system. Normal-form words are ascending in the generator order
//! X0 < Tau2 < Zb < Z < X3, i.e. X0^a Tau2^b Zb^c Z^d X3^e; with this order
//! every right-hand side above is already normally ordered and the rules
//! terminate (the letter-weight multiset with inversion-count tiebreak
//! strictly decreases).

use std::collections::BTreeMap;
use std::fmt;

use crate::scalars::Scalar;

// ---- Generators and words ----

/// Generators of the coordinate algebra. The declaration order is the
/// normal-ordering order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum CoordGen {
    X0,
    Tau2,
    Zb,
    Z,
    X3,
}

impl CoordGen {
    pub fn symbol(self) -> &'static str {
        match self {
            CoordGen::X0 => "X0",
            CoordGen::Tau2 => "tau2",
            CoordGen::Zb => "Zb",
            CoordGen::Z => "Z",
            CoordGen::X3 => "X3",
        }
    }

    pub const ALL: [CoordGen; 5] = [
        CoordGen::X0,
        CoordGen::Tau2,
        CoordGen::Zb,
        CoordGen::Z,
        CoordGen::X3,
    ];
}

/// A word in the free monoid on the generators.
pub type Word = Vec<CoordGen>;

fn word_degree(w: &Word) -> usize {
    w.len()
}

fn first_descent(w: &Word) -> Option<usize> {
    (0..w.len().saturating_sub(1)).find(|&i| w[i] > w[i + 1])
}

// ---- Noncommutative polynomials ----

/// A noncommutative polynomial: a finite Scalar-weighted sum of words.
/// No zero coefficients are stored, so `PartialEq` is equality of the
/// stored (not necessarily normal-ordered) form.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct NCPoly {
    terms: BTreeMap<Word, Scalar>,
}

impl NCPoly {
    pub fn zero() -> NCPoly {
        NCPoly::default()
    }

    pub fn one() -> NCPoly {
        NCPoly::from_term(Vec::new(), Scalar::one())
    }

    pub fn gen(g: CoordGen) -> NCPoly {
        NCPoly::from_term(vec![g], Scalar::one())
    }

    pub fn scalar(c: Scalar) -> NCPoly {
        NCPoly::from_term(Vec::new(), c)
    }

    pub fn from_term(word: Word, coeff: Scalar) -> NCPoly {
        let mut p = NCPoly::zero();
        p.add_term(word, coeff);
        p
    }

    pub fn add_term(&mut self, word: Word, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(word) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &coeff;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, word: &Word) -> Scalar {
        self.terms.get(word).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add(&self, rhs: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &NCPoly) -> NCPoly {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> NCPoly {
        NCPoly {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> NCPoly {
        if c.is_zero() {
            return NCPoly::zero();
        }
        NCPoly {
            terms: self
                .terms
                .iter()
                .map(|(w, s)| (w.clone(), s * c))
                .collect(),
        }
    }

    pub fn mul(&self, rhs: &NCPoly) -> NCPoly {
        let mut out = NCPoly::zero();
        for (wa, ca) in &self.terms {
            for (wb, cb) in &rhs.terms {
                let mut w = wa.clone();
                w.extend_from_slice(wb);
                out.add_term(w, ca * cb);
            }
        }
        out
    }

    pub fn commutator(&self, rhs: &NCPoly) -> NCPoly {
        self.mul(rhs).sub(&rhs.mul(self))
    }

    /// Substitute a polynomial for every occurrence of one generator.
    pub fn substitute(&self, g: CoordGen, value: &NCPoly) -> NCPoly {
        let mut out = NCPoly::zero();
        for (w, c) in &self.terms {
            let mut acc = NCPoly::scalar(c.clone());
            for &letter in w {
                let factor = if letter == g {
                    value.clone()
                } else {
                    NCPoly::gen(letter)
                };
                acc = acc.mul(&factor);
            }
            out = out.add(&acc);
        }
        out
    }

    /// Apply the classical limit q -> 1 to every coefficient.
    pub fn classical_limit(&self) -> Result<NCPoly, crate::error::ScalarError> {
        let mut out = NCPoly::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c.classical_limit()?);
        }
        Ok(out)
    }

    /// Evaluate in a commutative sample: each generator is replaced by a
    /// fixed scalar and words collapse to products. Used by tests to compare
    /// against ordinary polynomial identities.
    pub fn eval_commutative(&self, values: &dyn Fn(CoordGen) -> Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for (w, c) in &self.terms {
            let mut term = c.clone();
            for &g in w {
                term = &term * &values(g);
            }
            acc = &acc + &term;
        }
        acc
    }
}

impl fmt::Display for NCPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Descending by (degree, word) so leading products print first.
        let mut items: Vec<(&Word, &Scalar)> = self.terms.iter().collect();
        items.sort_by(|a, b| (word_degree(b.0), b.0).cmp(&(word_degree(a.0), a.0)));
        let mut first = true;
        for (w, c) in items {
            let cs = c.to_string();
            let needs_paren = cs.contains(" + ") || cs.contains(" - ") || cs.contains('/');
            let (mut sign_neg, mut body) = (false, cs.clone());
            if !needs_paren && cs.starts_with('-') {
                sign_neg = true;
                body = cs[1..].to_string();
            }
            let word_str = word_string(w);
            let term = match (word_str.as_deref(), body.as_str()) {
                (None, _) if needs_paren => format!("({})", cs),
                (None, _) => body.clone(),
                (Some(ws), "1") if !needs_paren => ws.to_string(),
                (Some(ws), _) if needs_paren => format!("({})*{}", cs, ws),
                (Some(ws), _) => format!("{}*{}", body, ws),
            };
            if first {
                if sign_neg && !needs_paren {
                    write!(f, "-{}", term)?;
                } else {
                    write!(f, "{}", term)?;
                }
                first = false;
            } else if sign_neg && !needs_paren {
                write!(f, " - {}", term)?;
            } else {
                write!(f, " + {}", term)?;
            }
        }
        Ok(())
    }
}

fn word_string(w: &Word) -> Option<String> {
    if w.is_empty() {
        return None;
    }
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0;
    while i < w.len() {
        let g = w[i];
        let mut count = 1;
        while i + count < w.len() && w[i + count] == g {
            count += 1;
        }
        if count == 1 {
            parts.push(g.symbol().to_string());
        } else {
            parts.push(format!("{}^{}", g.symbol(), count));
        }
        i += count;
    }
    Some(parts.join("*"))
}

// ---- The rewrite system ----

/// Oriented reduction rules carrying the coordinate commutation relations to
/// the canonical normal form. Immutable after construction.
#[derive(Clone, Debug)]
pub struct RewriteSystem {
    rules: BTreeMap<(CoordGen, CoordGen), NCPoly>,
}

impl RewriteSystem {
    /// The standard q-Minkowski relations.
    pub fn standard() -> RewriteSystem {
        use CoordGen::*;
        let q = Scalar::q_pow(1);
        let q_inv = Scalar::q_pow(-1);
        let q2 = Scalar::q_pow(2);
        let q2_inv = Scalar::q_pow(-2);
        let dq = &q - &q_inv;
        let dq2 = &q2 - &q2_inv;

        let mut rules = BTreeMap::new();
        // Central swaps: X0 and Tau2 commute with everything.
        for &g in &[Tau2, Zb, Z, X3] {
            rules.insert((g, X0), NCPoly::from_term(vec![X0, g], Scalar::one()));
        }
        for &g in &[Zb, Z, X3] {
            rules.insert((g, Tau2), NCPoly::from_term(vec![Tau2, g], Scalar::one()));
        }
        // X3*Z -> q^2 Z*X3 + (q - q^-1) X0*Z
        let mut r = NCPoly::from_term(vec![Z, X3], q2.clone());
        r.add_term(vec![X0, Z], dq.clone());
        rules.insert((X3, Z), r);
        // X3*Zb -> q^-2 Zb*X3 - q^-2 (q - q^-1) X0*Zb
        let mut r = NCPoly::from_term(vec![Zb, X3], q2_inv.clone());
        r.add_term(vec![X0, Zb], -&(&q2_inv * &dq));
        rules.insert((X3, Zb), r);
        // Z*Zb -> Zb*Z + (q^2 - q^-2) X3^2 + q^-1 (q^2 - q^-2) X0*X3
        let mut r = NCPoly::from_term(vec![Zb, Z], Scalar::one());
        r.add_term(vec![X3, X3], dq2.clone());
        r.add_term(vec![X0, X3], &q_inv * &dq2);
        rules.insert((Z, Zb), r);

        RewriteSystem { rules }
    }

    /// A copy of this system with one rule replaced. Used by the confluence
    /// negative controls.
    pub fn with_rule(&self, lhs: (CoordGen, CoordGen), rhs: NCPoly) -> RewriteSystem {
        let mut rules = self.rules.clone();
        rules.insert(lhs, rhs);
        RewriteSystem { rules }
    }

    pub fn rules(&self) -> impl Iterator<Item = (&(CoordGen, CoordGen), &NCPoly)> {
        self.rules.iter()
    }

    /// The defining relations as polynomials `lhs - rhs`, generators of the
    /// two-sided relation ideal.
    pub fn relation_polys(&self) -> Vec<NCPoly> {
        self.rules
            .iter()
            .map(|(&(a, b), rhs)| NCPoly::from_term(vec![a, b], Scalar::one()).sub(rhs))
            .collect()
    }

    /// Rewrite `p` to its unique normal form: leftmost-innermost reduction
    /// until no word contains a descending adjacent pair.
    pub fn normal_order(&self, p: &NCPoly) -> NCPoly {
        let mut out = NCPoly::zero();
        let mut pending: Vec<(Word, Scalar)> = p
            .terms
            .iter()
            .map(|(w, c)| (w.clone(), c.clone()))
            .collect();
        while let Some((word, coeff)) = pending.pop() {
            if coeff.is_zero() {
                continue;
            }
            match first_descent(&word) {
                None => out.add_term(word, coeff),
                Some(i) => {
                    let rhs = self
                        .rules
                        .get(&(word[i], word[i + 1]))
                        .expect("every descending pair has a rule");
                    for (rw, rc) in &rhs.terms {
                        let mut w = Vec::with_capacity(word.len() + rw.len());
                        w.extend_from_slice(&word[..i]);
                        w.extend_from_slice(rw);
                        w.extend_from_slice(&word[i + 2..]);
                        pending.push((w, &coeff * rc));
                    }
                }
            }
        }
        out
    }

    /// All distinct full normal forms reachable by choosing different first
    /// reduction steps of `word`. A confluent system yields one element.
    pub fn normal_forms_all_paths(&self, word: &Word) -> Vec<NCPoly> {
        let redexes: Vec<usize> = (0..word.len().saturating_sub(1))
            .filter(|&i| word[i] > word[i + 1])
            .collect();
        if redexes.is_empty() {
            return vec![NCPoly::from_term(word.clone(), Scalar::one())];
        }
        let mut forms: Vec<NCPoly> = Vec::new();
        for i in redexes {
            let rhs = &self.rules[&(word[i], word[i + 1])];
            let mut reduct = NCPoly::zero();
            for (rw, rc) in &rhs.terms {
                let mut w = Vec::with_capacity(word.len() + rw.len());
                w.extend_from_slice(&word[..i]);
                w.extend_from_slice(rw);
                w.extend_from_slice(&word[i + 2..]);
                reduct.add_term(w, rc.clone());
            }
            let nf = self.normal_order(&reduct);
            if !forms.contains(&nf) {
                forms.push(nf);
            }
        }
        forms
    }

    /// Diamond-lemma certification: every word up to `max_degree` reduces to
    /// a unique normal form regardless of the first step chosen.
    pub fn confluence_check(&self, max_degree: usize) -> ConfluenceReport {
        let mut checked = 0usize;
        let mut failures = Vec::new();
        let mut words: Vec<Word> = vec![Vec::new()];
        for _ in 0..max_degree {
            let mut next = Vec::new();
            for w in &words {
                for g in CoordGen::ALL {
                    let mut nw = w.clone();
                    nw.push(g);
                    next.push(nw);
                }
            }
            for w in &next {
                let forms = self.normal_forms_all_paths(w);
                checked += 1;
                if forms.len() > 1 {
                    failures.push(ConfluenceFailure {
                        word: w.clone(),
                        forms,
                    });
                }
            }
            words = next;
        }
        ConfluenceReport { checked, failures }
    }
}

/// An unresolved critical pair found by [`RewriteSystem::confluence_check`].
#[derive(Clone, Debug)]
pub struct ConfluenceFailure {
    pub word: Word,
    pub forms: Vec<NCPoly>,
}

/// Outcome of the diamond-lemma check.
#[derive(Clone, Debug)]
pub struct ConfluenceReport {
    pub checked: usize,
    pub failures: Vec<ConfluenceFailure>,
}

impl ConfluenceReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

// ---- The invariant length and its factorizations ----

/// The invariant squared-length combination
/// `q^-3/2 X0^2 - (q^3/2 / Q) Z Zb - (q^-1/2 / Q) Zb Z - q^1/2 X3^2`,
/// which equals the central symbol Tau2 on the defining relations.
pub fn casimir() -> NCPoly {
    use CoordGen::*;
    let big_q = Scalar::big_q();
    let mut c = NCPoly::from_term(vec![X0, X0], Scalar::q_half_pow(-3));
    c.add_term(vec![Z, Zb], -&(&Scalar::q_half_pow(3) / &big_q));
    c.add_term(vec![Zb, Z], -&(&Scalar::q_half_pow(-1) / &big_q));
    c.add_term(vec![X3, X3], -Scalar::q_half_pow(1));
    c
}

/// True when `c` commutes with all four coordinate generators under the
/// given rewrite system.
pub fn check_central(rs: &RewriteSystem, c: &NCPoly) -> bool {
    use CoordGen::*;
    [X0, X3, Z, Zb]
        .iter()
        .all(|&g| rs.normal_order(&c.commutator(&NCPoly::gen(g))).is_zero())
}

/// Report of the two product factorizations of Z*Zb and Zb*Z against the
/// invariant length; residuals are exact normal-ordered differences.
#[derive(Clone, Debug)]
pub struct ZzbarReport {
    pub residual_a: NCPoly,
    pub residual_b: NCPoly,
}

impl ZzbarReport {
    pub fn passed(&self) -> bool {
        self.residual_a.is_zero() && self.residual_b.is_zero()
    }
}

/// Verify the exact factorizations
///
/// ```text
/// (a) Z*Zb = q^-2 (X0 + q X3)(X0 - q^-1 X3) - q^-1/2 C
/// (b) Zb*Z = q^-2 (X0 + q X3)(X0 - q^3  X3) - q^-1/2 C
/// ```
///
/// with the invariant combination C substituted for Tau2.
pub fn verify_zzbar(rs: &RewriteSystem) -> ZzbarReport {
    use CoordGen::*;
    let q = Scalar::q_pow(1);
    let cas = casimir();
    let x0 = NCPoly::gen(X0);
    let x3 = NCPoly::gen(X3);
    let left = x0.add(&x3.scale(&q));
    let factor = |k: i64| x0.sub(&x3.scale(&Scalar::q_pow(k)));
    let rhs = |k: i64| {
        left.mul(&factor(k))
            .scale(&Scalar::q_pow(-2))
            .sub(&cas.scale(&Scalar::q_half_pow(-1)))
    };
    let zzb = NCPoly::from_term(vec![Z, Zb], Scalar::one());
    let zbz = NCPoly::from_term(vec![Zb, Z], Scalar::one());
    ZzbarReport {
        residual_a: rs.normal_order(&zzb.sub(&rhs(-1))),
        residual_b: rs.normal_order(&zbz.sub(&rhs(3))),
    }
}

/// Symbolic ladder consistency up to the given power: normal ordering
/// `X3 * Z^n` gives `Z^n (q^{2n} X3 + q^-1 (q^{2n} - 1) X0)` and the Zb
/// analog with q^{-2n}.
pub fn ladder_identity_holds(max_power: usize) -> bool {
    use CoordGen::*;
    let sys = RewriteSystem::standard();
    for n in 1..=max_power {
        for (gen, sign) in [(Z, 1i64), (Zb, -1i64)] {
            let e = sign * 2 * n as i64;
            let mut w = vec![X3];
            w.extend(std::iter::repeat(gen).take(n));
            let lhs = sys.normal_order(&NCPoly::from_term(w, Scalar::one()));
            let mut gen_x3: Word = std::iter::repeat(gen).take(n).collect();
            gen_x3.push(X3);
            let mut x0_gen: Word = vec![X0];
            x0_gen.extend(std::iter::repeat(gen).take(n));
            let mut rhs = NCPoly::from_term(gen_x3, Scalar::q_pow(e));
            rhs.add_term(
                x0_gen,
                &Scalar::q_pow(-1) * &(&Scalar::q_pow(e) - &Scalar::one()),
            );
            if lhs != sys.normal_order(&rhs) {
                return false;
            }
        }
    }
    true
}

// ---- Ladder eigenvalue maps ----

/// Direction of a ladder application: `RaiseN` applies the q^{+2} affine map
/// n times (the n-fold Z action on eigenvalues), `LowerM` the q^{-2} map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LadderDirection {
    RaiseN,
    LowerM,
}

/// Eigenvalue image of the X3 ladder maps:
/// `x3 -> q^{+-2n} x3 + q^-1 (q^{+-2n} - 1) t`.
///
/// States are never materialized; this is the induced affine action on the
/// X3 eigenvalue, certified symbolically by `normal_order(X3 * Z^n)`.
pub fn ladder_eigenvalue(
    direction: LadderDirection,
    steps: u32,
    x3: f64,
    t: f64,
    q0: f64,
) -> f64 {
    debug_assert!(t >= 0.0, "ladder maps assume t >= 0");
    debug_assert!(q0 > 0.0);
    let e = match direction {
        LadderDirection::RaiseN => 2.0 * steps as f64,
        LadderDirection::LowerM => -2.0 * steps as f64,
    };
    let factor = q0.powf(e);
    factor * x3 + (factor - 1.0) * t / q0
}

/// Exact-rational version of [`ladder_eigenvalue`].
pub fn ladder_eigenvalue_exact(
    direction: LadderDirection,
    steps: u32,
    x3: &num_rational::BigRational,
    t: &num_rational::BigRational,
    q0: &num_rational::BigRational,
) -> num_rational::BigRational {
    use num_traits::One;
    let mut factor = num_rational::BigRational::one();
    for _ in 0..steps {
        factor *= q0;
    }
    let factor = &factor * &factor; // q^{2 steps}
    let factor = match direction {
        LadderDirection::RaiseN => factor,
        LadderDirection::LowerM => factor.recip(),
    };
    &factor * x3 + (&factor - num_rational::BigRational::one()) * t / q0
}

#[cfg(test)]
mod tests {
    use super::*;
    use CoordGen::*;

    fn rs() -> RewriteSystem {
        RewriteSystem::standard()
    }

    fn q_pow(e: i64) -> Scalar {
        Scalar::q_pow(e)
    }

    #[test]
    fn normal_order_x3_z() {
        // X3*Z -> q^2 Z*X3 + (q - q^-1) X0*Z
        let p = NCPoly::from_term(vec![X3, Z], Scalar::one());
        let nf = rs().normal_order(&p);
        assert_eq!(nf.coeff(&vec![Z, X3]), q_pow(2));
        assert_eq!(nf.coeff(&vec![X0, Z]), &q_pow(1) - &q_pow(-1));
        assert_eq!(nf.num_terms(), 2);
    }

    #[test]
    fn normal_order_z_zb() {
        let p = NCPoly::from_term(vec![Z, Zb], Scalar::one());
        let nf = rs().normal_order(&p);
        let dq2 = &q_pow(2) - &q_pow(-2);
        assert_eq!(nf.coeff(&vec![Zb, Z]), Scalar::one());
        assert_eq!(nf.coeff(&vec![X3, X3]), dq2);
        assert_eq!(nf.coeff(&vec![X0, X3]), &q_pow(-1) * &dq2);
    }

    #[test]
    fn x0_is_central() {
        let p = NCPoly::from_term(vec![X3, X0], Scalar::one());
        let nf = rs().normal_order(&p);
        assert_eq!(nf.coeff(&vec![X0, X3]), Scalar::one());
        assert_eq!(nf.num_terms(), 1);
    }

    #[test]
    fn normal_order_is_idempotent() {
        let p = NCPoly::from_term(vec![X3, Z, Zb, X3], Scalar::one());
        let nf = rs().normal_order(&p);
        assert_eq!(rs().normal_order(&nf), nf);
    }

    #[test]
    fn normal_order_is_linear() {
        let a = NCPoly::from_term(vec![X3, Z], Scalar::q_pow(1));
        let b = NCPoly::from_term(vec![Z, Zb, X3], Scalar::i());
        let sys = rs();
        let left = sys.normal_order(&a.add(&b));
        let right = sys.normal_order(&a).add(&sys.normal_order(&b));
        assert_eq!(left, right);
    }

    #[test]
    fn casimir_commutes_with_generators() {
        assert!(check_central(&rs(), &casimir()));
    }

    #[test]
    fn casimir_noncentral_control() {
        // X3^2 alone is not central.
        let p = NCPoly::from_term(vec![X3, X3], Scalar::one());
        assert!(!check_central(&rs(), &p));
    }

    #[test]
    fn casimir_classical_limit() {
        // At q = 1 the combination is X0^2 - X1^2 - X2^2 - X3^2, checked on
        // a commutative sample X0 = 2, X1 = 3, X2 = 5, X3 = 7 where
        // Z = 3 + 5i and Zb = 3 - 5i.
        let c = casimir().classical_limit().unwrap();
        let value = c.eval_commutative(&|g| match g {
            X0 => Scalar::from_int(2),
            X3 => Scalar::from_int(7),
            Z => &Scalar::from_int(3) + &(&Scalar::i() * &Scalar::from_int(5)),
            Zb => &Scalar::from_int(3) - &(&Scalar::i() * &Scalar::from_int(5)),
            Tau2 => Scalar::zero(),
        });
        // 4 - 9 - 25 - 49 = -79
        assert_eq!(value, Scalar::from_int(-79));
    }

    #[test]
    fn zzbar_factorizations_hold() {
        let report = verify_zzbar(&rs());
        assert!(
            report.passed(),
            "residuals: {} / {}",
            report.residual_a,
            report.residual_b
        );
    }

    #[test]
    fn zzbar_right_sides_coincide_classically() {
        // (a) - (b) is proportional to q - q^3, so the two right sides agree
        // at q = 1.
        let x0 = NCPoly::gen(X0);
        let x3 = NCPoly::gen(X3);
        let left = x0.add(&x3.scale(&Scalar::q_pow(1)));
        let rhs_a = left.mul(&x0.sub(&x3.scale(&Scalar::q_pow(-1))));
        let rhs_b = left.mul(&x0.sub(&x3.scale(&Scalar::q_pow(3))));
        let diff = rhs_a.sub(&rhs_b).classical_limit().unwrap();
        assert!(diff.is_zero());
    }

    #[test]
    fn ladder_symbolic_consistency() {
        // normal_order(X3 * Z^n) = Z^n * (q^{2n} X3 + q^-1 (q^{2n} - 1) X0)
        // and the Zb analog with q^{-2m}, for n, m <= 5.
        let sys = rs();
        for n in 1..=5usize {
            let mut w = vec![X3];
            w.extend(std::iter::repeat(Z).take(n));
            let lhs = sys.normal_order(&NCPoly::from_term(w, Scalar::one()));

            let e = 2 * n as i64;
            let mut zn_x3: Word = std::iter::repeat(Z).take(n).collect();
            zn_x3.push(X3);
            let mut x0_zn: Word = vec![X0];
            x0_zn.extend(std::iter::repeat(Z).take(n));
            let mut rhs = NCPoly::from_term(zn_x3, Scalar::q_pow(e));
            rhs.add_term(
                x0_zn,
                &Scalar::q_pow(-1) * &(&Scalar::q_pow(e) - &Scalar::one()),
            );
            assert_eq!(lhs, sys.normal_order(&rhs), "Z ladder at n = {}", n);

            let mut w = vec![X3];
            w.extend(std::iter::repeat(Zb).take(n));
            let lhs = sys.normal_order(&NCPoly::from_term(w, Scalar::one()));
            let mut zbn_x3: Word = std::iter::repeat(Zb).take(n).collect();
            zbn_x3.push(X3);
            let mut x0_zbn: Word = vec![X0];
            x0_zbn.extend(std::iter::repeat(Zb).take(n));
            let mut rhs = NCPoly::from_term(zbn_x3, Scalar::q_pow(-e));
            rhs.add_term(
                x0_zbn,
                &Scalar::q_pow(-1) * &(&Scalar::q_pow(-e) - &Scalar::one()),
            );
            assert_eq!(lhs, sys.normal_order(&rhs), "Zb ladder at m = {}", n);
        }
    }

    #[test]
    fn ladder_eigenvalue_examples() {
        // n = 0 leaves x3 unchanged.
        assert_eq!(
            ladder_eigenvalue(LadderDirection::RaiseN, 0, 0.3, 1.0, 2.0),
            0.3
        );
        // One raise at x3 = 0, t = 1, q = 2: q^-1 (q^2 - 1) = 1.5.
        let v = ladder_eigenvalue(LadderDirection::RaiseN, 1, 0.0, 1.0, 2.0);
        assert!((v - 1.5).abs() < 1e-15);
        // One raise then one lower returns to x3 (inverse affine maps).
        let up = ladder_eigenvalue(LadderDirection::RaiseN, 1, 0.7, 1.3, 1.7);
        let back = ladder_eigenvalue(LadderDirection::LowerM, 1, up, 1.3, 1.7);
        assert!((back - 0.7).abs() < 1e-12);
    }

    #[test]
    fn confluence_degree_three() {
        let report = rs().confluence_check(3);
        assert!(report.passed());
        assert_eq!(report.checked, 5 + 25 + 125);
    }

    #[test]
    fn confluence_overlap_x3_z_zb_resolves() {
        // The overlap word X3*Z*Zb reduces to the same normal form along
        // both reduction orders.
        let forms = rs().normal_forms_all_paths(&vec![X3, Z, Zb]);
        assert_eq!(forms.len(), 1);
    }

    #[test]
    fn confluence_negative_control() {
        // Perturbing the X3*Z coefficient from q^2 to q^3 breaks confluence.
        let mut bad_rhs = NCPoly::from_term(vec![Z, X3], Scalar::q_pow(3));
        bad_rhs.add_term(vec![X0, Z], &Scalar::q_pow(1) - &Scalar::q_pow(-1));
        let bad = rs().with_rule((X3, Z), bad_rhs);
        let report = bad.confluence_check(3);
        assert!(!report.passed());
    }

    #[test]
    fn display_normal_ordered_commutator() {
        // normal_order(Z*Zb - Zb*Z) prints with the X3^2 term first.
        let p = NCPoly::from_term(vec![Z, Zb], Scalar::one())
            .sub(&NCPoly::from_term(vec![Zb, Z], Scalar::one()));
        let nf = rs().normal_order(&p);
        assert_eq!(nf.to_string(), "(q^2 - q^-2)*X3^2 + (q - q^-3)*X0*X3");
    }
}
