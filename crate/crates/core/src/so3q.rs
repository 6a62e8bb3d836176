//! The spatial-rotation restriction: unitary SU_q(2) generators, the
//! three-dimensional corepresentation matrix over them, orthogonality with
//! the restricted spatial metric, time-coordinate invariance, and the
//! quantum-sphere parameters of the fixed-time slice.
//!
//! The SU_q(2) relations are the standard ones compatible with the unitary
//! generator matrix
//!
//! ```text
//! u = ( alpha      q gamma^* )
//!     ( -gamma     alpha^*   )
//! ```
//!
//! namely `alpha gamma = q gamma alpha`, `alpha gamma^* = q gamma^* alpha`,
//! `gamma gamma^* = gamma^* gamma`, `alpha^* alpha + gamma^* gamma = 1` and
//! `alpha alpha^* + q^2 gamma^* gamma = 1`. The orthogonality identities
//! verified here over-determine this convention: they reduce to exactly
//! zero polynomials under it.

use std::collections::BTreeMap;
use std::fmt;

use crate::coordalg::{casimir, CoordGen, NCPoly, RewriteSystem};
use crate::functionals::FunctionalData;
use crate::scalars::Scalar;
use crate::tensors::{Mat, Sign};

// ---- Generators and polynomials ----

/// Generators of the unitary quantum-group algebra. Declaration order is
/// the normal-ordering order; alpha and alpha-star sort last and adjacent,
/// so the unit relations always fire and normal words are
/// gamma^a gamma*^b alpha^k or gamma^a gamma*^b alpha*^k.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SUq2Gen {
    Gamma,
    GammaStar,
    Alpha,
    AlphaStar,
}

impl SUq2Gen {
    pub fn symbol(self) -> &'static str {
        match self {
            SUq2Gen::Alpha => "alpha",
            SUq2Gen::Gamma => "gamma",
            SUq2Gen::GammaStar => "gamma^*",
            SUq2Gen::AlphaStar => "alpha^*",
        }
    }

    fn star(self) -> SUq2Gen {
        match self {
            SUq2Gen::Alpha => SUq2Gen::AlphaStar,
            SUq2Gen::AlphaStar => SUq2Gen::Alpha,
            SUq2Gen::Gamma => SUq2Gen::GammaStar,
            SUq2Gen::GammaStar => SUq2Gen::Gamma,
        }
    }
}

type SUWord = Vec<SUq2Gen>;

/// A polynomial in the unitary quantum-group generators with exact scalar
/// coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SUq2Poly {
    terms: BTreeMap<SUWord, Scalar>,
}

impl SUq2Poly {
    pub fn zero() -> SUq2Poly {
        SUq2Poly::default()
    }

    pub fn one() -> SUq2Poly {
        SUq2Poly::from_term(Vec::new(), Scalar::one())
    }

    pub fn gen(g: SUq2Gen) -> SUq2Poly {
        SUq2Poly::from_term(vec![g], Scalar::one())
    }

    pub fn scalar(c: Scalar) -> SUq2Poly {
        SUq2Poly::from_term(Vec::new(), c)
    }

    pub fn from_term(word: SUWord, coeff: Scalar) -> SUq2Poly {
        let mut p = SUq2Poly::zero();
        p.add_term(word, coeff);
        p
    }

    pub fn add_term(&mut self, word: SUWord, coeff: Scalar) {
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

    pub fn terms(&self) -> impl Iterator<Item = (&SUWord, &Scalar)> {
        self.terms.iter()
    }

    pub fn add(&self, rhs: &SUq2Poly) -> SUq2Poly {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &SUq2Poly) -> SUq2Poly {
        self.add(&rhs.scale(&-Scalar::one()))
    }

    pub fn scale(&self, c: &Scalar) -> SUq2Poly {
        if c.is_zero() {
            return SUq2Poly::zero();
        }
        SUq2Poly {
            terms: self
                .terms
                .iter()
                .map(|(w, s)| (w.clone(), s * c))
                .collect(),
        }
    }

    pub fn mul(&self, rhs: &SUq2Poly) -> SUq2Poly {
        let mut out = SUq2Poly::zero();
        for (wa, ca) in &self.terms {
            for (wb, cb) in &rhs.terms {
                let mut w = wa.clone();
                w.extend_from_slice(wb);
                out.add_term(w, ca * cb);
            }
        }
        out
    }

    /// Star structure: conjugate coefficients, reverse words, star each
    /// generator.
    pub fn star(&self) -> SUq2Poly {
        let mut out = SUq2Poly::zero();
        for (w, c) in &self.terms {
            let sw: SUWord = w.iter().rev().map(|g| g.star()).collect();
            out.add_term(sw, c.star());
        }
        out
    }

    /// The counit: alpha -> 1, gamma -> 0.
    pub fn counit(&self) -> Scalar {
        let mut acc = Scalar::zero();
        for (w, c) in &self.terms {
            let vanishes = w
                .iter()
                .any(|g| matches!(g, SUq2Gen::Gamma | SUq2Gen::GammaStar));
            if !vanishes {
                acc = &acc + c;
            }
        }
        acc
    }
}

impl fmt::Display for SUq2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut items: Vec<(&SUWord, &Scalar)> = self.terms.iter().collect();
        items.sort_by(|a, b| (b.0.len(), b.0).cmp(&(a.0.len(), a.0)));
        let mut first = true;
        for (w, c) in items {
            let cs = c.to_string();
            let word: Vec<&str> = w.iter().map(|g| g.symbol()).collect();
            let term = if w.is_empty() {
                format!("({})", cs)
            } else if cs == "1" {
                word.join("*")
            } else {
                format!("({})*{}", cs, word.join("*"))
            };
            if first {
                write!(f, "{}", term)?;
                first = false;
            } else {
                write!(f, " + {}", term)?;
            }
        }
        Ok(())
    }
}

// ---- The rewrite system ----

/// Normal ordering for the unitary quantum-group relations. Words reduce to
/// the basis alpha^k gamma^a gamma*^b / gamma^a gamma*^b alpha*^k.
pub struct SUq2Rewrite {
    rules: BTreeMap<(SUq2Gen, SUq2Gen), SUq2Poly>,
}

impl SUq2Rewrite {
    pub fn standard() -> SUq2Rewrite {
        use SUq2Gen::*;
        let q = Scalar::q_pow(1);
        let q_inv = Scalar::q_pow(-1);
        let mut rules = BTreeMap::new();
        let swap_scaled = |a: SUq2Gen, b: SUq2Gen, c: &Scalar| {
            SUq2Poly::from_term(vec![b, a], c.clone())
        };
        // alpha gamma = q gamma alpha and the star/conjugate companions
        rules.insert((Alpha, Gamma), swap_scaled(Alpha, Gamma, &q));
        rules.insert((Alpha, GammaStar), swap_scaled(Alpha, GammaStar, &q));
        rules.insert((AlphaStar, Gamma), swap_scaled(AlphaStar, Gamma, &q_inv));
        rules.insert(
            (AlphaStar, GammaStar),
            swap_scaled(AlphaStar, GammaStar, &q_inv),
        );
        rules.insert(
            (GammaStar, Gamma),
            swap_scaled(GammaStar, Gamma, &Scalar::one()),
        );
        // alpha^* alpha = 1 - gamma gamma^*
        let mut r = SUq2Poly::one();
        r.add_term(vec![Gamma, GammaStar], -Scalar::one());
        rules.insert((AlphaStar, Alpha), r);
        // alpha alpha^* = 1 - q^2 gamma gamma^*
        let mut r = SUq2Poly::one();
        r.add_term(vec![Gamma, GammaStar], -Scalar::q_pow(2));
        rules.insert((Alpha, AlphaStar), r);
        SUq2Rewrite { rules }
    }

    fn first_redex(&self, w: &SUWord) -> Option<usize> {
        (0..w.len().saturating_sub(1)).find(|&i| self.rules.contains_key(&(w[i], w[i + 1])))
    }

    pub fn normal_order(&self, p: &SUq2Poly) -> SUq2Poly {
        let mut out = SUq2Poly::zero();
        let mut pending: Vec<(SUWord, Scalar)> = p
            .terms
            .iter()
            .map(|(w, c)| (w.clone(), c.clone()))
            .collect();
        while let Some((word, coeff)) = pending.pop() {
            if coeff.is_zero() {
                continue;
            }
            match self.first_redex(&word) {
                None => out.add_term(word, coeff),
                Some(i) => {
                    let rhs = &self.rules[&(word[i], word[i + 1])];
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

    /// Diamond check on all words up to the given degree.
    pub fn confluent_to_degree(&self, max_degree: usize) -> bool {
        use SUq2Gen::*;
        let gens = [Alpha, Gamma, GammaStar, AlphaStar];
        let mut words: Vec<SUWord> = vec![Vec::new()];
        for _ in 0..max_degree {
            let mut next = Vec::new();
            for w in &words {
                for &g in &gens {
                    let mut nw = w.clone();
                    nw.push(g);
                    next.push(nw);
                }
            }
            for w in &next {
                let redexes: Vec<usize> = (0..w.len().saturating_sub(1))
                    .filter(|&i| self.rules.contains_key(&(w[i], w[i + 1])))
                    .collect();
                let mut forms: Vec<SUq2Poly> = Vec::new();
                for i in redexes {
                    let rhs = &self.rules[&(w[i], w[i + 1])];
                    let mut reduct = SUq2Poly::zero();
                    for (rw, rc) in &rhs.terms {
                        let mut nw = Vec::new();
                        nw.extend_from_slice(&w[..i]);
                        nw.extend_from_slice(rw);
                        nw.extend_from_slice(&w[i + 2..]);
                        reduct.add_term(nw, rc.clone());
                    }
                    let nf = self.normal_order(&reduct);
                    if !forms.contains(&nf) {
                        forms.push(nf);
                    }
                }
                if forms.len() > 1 {
                    return false;
                }
            }
            words = next;
        }
        true
    }
}

// ---- The unitary matrix and the spin-one block ----

/// The defining unitary generator matrix.
pub fn unitary_matrix() -> [[SUq2Poly; 2]; 2] {
    use SUq2Gen::*;
    [
        [
            SUq2Poly::gen(Alpha),
            SUq2Poly::gen(GammaStar).scale(&Scalar::q_pow(1)),
        ],
        [
            SUq2Poly::gen(Gamma).scale(&-Scalar::one()),
            SUq2Poly::gen(AlphaStar),
        ],
    ]
}

/// The three-dimensional corepresentation matrix in the spherical basis
/// (indices -1, 0, 1 stored as 0, 1, 2).
pub fn build_d1() -> [[SUq2Poly; 3]; 3] {
    use SUq2Gen::*;
    let q = Scalar::q_pow(1);
    let one_plus_q2 = &Scalar::one() + &Scalar::q_pow(2);
    let m = |w: Vec<SUq2Gen>, c: Scalar| SUq2Poly::from_term(w, c);
    [
        [
            m(vec![AlphaStar, AlphaStar], Scalar::one()),
            m(vec![AlphaStar, Gamma], -&one_plus_q2),
            m(vec![Gamma, Gamma], -&q),
        ],
        [
            m(vec![GammaStar, AlphaStar], Scalar::one()),
            {
                let mut p = SUq2Poly::one();
                p.add_term(vec![GammaStar, Gamma], -&one_plus_q2);
                p
            },
            m(vec![Alpha, Gamma], Scalar::one()),
        ],
        [
            m(vec![GammaStar, GammaStar], -&q),
            m(vec![GammaStar, Alpha], -&one_plus_q2),
            m(vec![Alpha, Alpha], Scalar::one()),
        ],
    ]
}

/// The 4x4 Lorentz generator matrix with the quantum SL(2,C) generators
/// specialized to the unitary ones: entry (N, M) of the restriction.
pub fn lorentz_restriction(fd: &FunctionalData) -> [[SUq2Poly; 4]; 4] {
    let u = unitary_matrix();
    let u_star: [[SUq2Poly; 2]; 2] =
        std::array::from_fn(|i| std::array::from_fn(|j| u[i][j].star()));
    std::array::from_fn(|n| {
        std::array::from_fn(|m| {
            let mut acc = SUq2Poly::zero();
            for (c, w) in fd.lambda_expansion(n, m) {
                // words are (undotted letter, dotted letter)
                let (a, s) = (w[0].lower, w[0].upper);
                let (b, r) = (w[1].lower, w[1].upper);
                acc = acc.add(&u[a][s].mul(&u_star[b][r]).scale(&c));
            }
            acc
        })
    })
}

// ---- Verification report ----

/// Outcome of the spatial-restriction checks; residuals are exact
/// normal-ordered polynomials, zero on success.
pub struct SO3Report {
    /// Lambda_0^0 - 1 after normal ordering.
    pub time_diagonal_residual: SUq2Poly,
    /// Nonzero mixed time-space entries, if any.
    pub time_mixing_residuals: Vec<SUq2Poly>,
    /// Residuals of G^{ij} L_i^l L_j^k = G^{lk}, flattened over (l, k).
    pub upper_orthogonality: Vec<SUq2Poly>,
    /// Residuals of G_{lk} L_i^l L_j^k = G_{ij}, flattened over (i, j).
    pub lower_orthogonality: Vec<SUq2Poly>,
    /// Restriction transformed to the spherical basis minus the printed
    /// spin-one matrix, flattened.
    pub d1_residuals: Vec<SUq2Poly>,
    /// Counit of the spin-one matrix minus the identity matrix.
    pub counit_residuals: Vec<Scalar>,
}

impl SO3Report {
    pub fn passed(&self) -> bool {
        self.time_diagonal_residual.is_zero()
            && self.time_mixing_residuals.iter().all(SUq2Poly::is_zero)
            && self.upper_orthogonality.iter().all(SUq2Poly::is_zero)
            && self.lower_orthogonality.iter().all(SUq2Poly::is_zero)
            && self.d1_residuals.iter().all(SUq2Poly::is_zero)
            && self.counit_residuals.iter().all(Scalar::is_zero)
    }

    pub fn failing_lines(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.time_diagonal_residual.is_zero() {
            out.push(format!("time diagonal: {}", self.time_diagonal_residual));
        }
        for (i, r) in self.time_mixing_residuals.iter().enumerate() {
            if !r.is_zero() {
                out.push(format!("time mixing {}: {}", i, r));
            }
        }
        for (i, r) in self.upper_orthogonality.iter().enumerate() {
            if !r.is_zero() {
                out.push(format!("upper orthogonality ({}, {}): {}", i / 3, i % 3, r));
            }
        }
        for (i, r) in self.lower_orthogonality.iter().enumerate() {
            if !r.is_zero() {
                out.push(format!("lower orthogonality ({}, {}): {}", i / 3, i % 3, r));
            }
        }
        for (i, r) in self.d1_residuals.iter().enumerate() {
            if !r.is_zero() {
                out.push(format!("spin-one entry ({}, {}): {}", i / 3, i % 3, r));
            }
        }
        for (i, r) in self.counit_residuals.iter().enumerate() {
            if !r.is_zero() {
                out.push(format!("counit entry ({}, {}): {}", i / 3, i % 3, r));
            }
        }
        out
    }
}

/// Run the full restriction verification: time invariance, both
/// orthogonality families against the restricted metric block, agreement
/// with the printed spin-one matrix, and the counit identity.
pub fn verify_so3(fd: &FunctionalData) -> SO3Report {
    let rw = SUq2Rewrite::standard();
    let ld = fd.lorentz();
    let lam = lorentz_restriction(fd);

    let time_diagonal_residual = rw.normal_order(&lam[0][0].sub(&SUq2Poly::one()));
    let mut time_mixing_residuals = Vec::new();
    for i in 1..4 {
        time_mixing_residuals.push(rw.normal_order(&lam[0][i]));
        time_mixing_residuals.push(rw.normal_order(&lam[i][0]));
    }

    let g = &ld.g_up[Sign::Plus.index()];
    let glo = &ld.g_lo[Sign::Plus.index()];
    let mut upper_orthogonality = Vec::new();
    for l in 1..4 {
        for k in 1..4 {
            let mut acc = SUq2Poly::zero();
            for i in 1..4 {
                for j in 1..4 {
                    let gij = g.get(i, j);
                    if gij.is_zero() {
                        continue;
                    }
                    acc = acc.add(&lam[i][l].mul(&lam[j][k]).scale(gij));
                }
            }
            acc = acc.sub(&SUq2Poly::scalar(g.get(l, k).clone()));
            upper_orthogonality.push(rw.normal_order(&acc));
        }
    }
    let mut lower_orthogonality = Vec::new();
    for i in 1..4 {
        for j in 1..4 {
            let mut acc = SUq2Poly::zero();
            for l in 1..4 {
                for k in 1..4 {
                    let glk = glo.get(l, k);
                    if glk.is_zero() {
                        continue;
                    }
                    acc = acc.add(&lam[i][l].mul(&lam[j][k]).scale(glk));
                }
            }
            acc = acc.sub(&SUq2Poly::scalar(glo.get(i, j).clone()));
            lower_orthogonality.push(rw.normal_order(&acc));
        }
    }

    // Basis change to (Z, X3, Zb), the Q-scaled spherical basis the printed
    // spin-one matrix acts on: X1 = (Z + Zb)/2, X2 = (Z - Zb)/(2i).
    let half = Scalar::from_ratio(1, 2);
    let i_half = &half * &Scalar::i();
    let mut c_mat = Mat::zeros(3, 3);
    c_mat.set(0, 0, half.clone());
    c_mat.set(0, 2, half.clone());
    c_mat.set(1, 0, -&i_half);
    c_mat.set(1, 2, i_half.clone());
    c_mat.set(2, 1, Scalar::one());
    let c_inv = c_mat.inverse();
    let d1 = build_d1();
    let mut d1_residuals = Vec::new();
    for a in 0..3 {
        for b in 0..3 {
            let mut acc = SUq2Poly::zero();
            for i in 0..3 {
                for j in 0..3 {
                    let coeff = &(c_inv.get(a, i) * c_mat.get(j, b)).clone();
                    if coeff.is_zero() {
                        continue;
                    }
                    acc = acc.add(&lam[i + 1][j + 1].scale(coeff));
                }
            }
            d1_residuals.push(rw.normal_order(&acc.sub(&d1[a][b])));
        }
    }

    let mut counit_residuals = Vec::new();
    for a in 0..3 {
        for b in 0..3 {
            let expect = if a == b { Scalar::one() } else { Scalar::zero() };
            counit_residuals.push(&d1[a][b].counit() - &expect);
        }
    }

    SO3Report {
        time_diagonal_residual,
        time_mixing_residuals,
        upper_orthogonality,
        lower_orthogonality,
        d1_residuals,
        counit_residuals,
    }
}

// ---- Quantum-sphere parameters ----

/// The fixed-time slice parameters: lambda = (q - q^-1) t and
/// rho = q^-2 t^2 - q^-1/2 tau2.
pub fn sphere_parameters(t: &Scalar, tau2: &Scalar) -> (Scalar, Scalar) {
    let lambda = &(&Scalar::q_pow(1) - &Scalar::q_pow(-1)) * t;
    let rho = &(&Scalar::q_pow(-2) * &(t * t)) - &(&Scalar::q_half_pow(-1) * tau2);
    (lambda, rho)
}

/// Closure certificate: with the time coordinate fixed to the number t, the
/// coordinate relations close on {Z, X3, Zb} with exactly the sphere
/// parameters. The invariant-length combination is checked with the
/// invariant symbol kept symbolic.
pub fn sphere_closure(t: &Scalar) -> bool {
    use CoordGen::*;
    let rs = RewriteSystem::standard();
    // Normal ordering can reintroduce the central time generator, so the
    // substitution happens after reduction.
    let reduce_at_t =
        |p: &NCPoly| rs.normal_order(p).substitute(X0, &NCPoly::scalar(t.clone()));
    let (lambda, _) = sphere_parameters(t, &Scalar::zero());

    // Ladder relations with the lambda parameter.
    let rel1 = {
        // X3 Z - q^2 Z X3 - lambda Z
        let mut p = NCPoly::from_term(vec![X3, Z], Scalar::one());
        p.add_term(vec![Z, X3], -Scalar::q_pow(2));
        p.add_term(vec![Z], -&lambda);
        p
    };
    let rel2 = {
        // X3 Zb - q^-2 Zb X3 + q^-2 lambda Zb
        let mut p = NCPoly::from_term(vec![X3, Zb], Scalar::one());
        p.add_term(vec![Zb, X3], -Scalar::q_pow(-2));
        p.add_term(vec![Zb], &Scalar::q_pow(-2) * &lambda);
        p
    };
    if !reduce_at_t(&rel1).is_zero() || !reduce_at_t(&rel2).is_zero() {
        return false;
    }

    // Radius relation: (q/Q) Z Zb + (q^-1/Q) Zb Z + X3^2 - rho reduces to
    // -q^-1/2 (C - tau2) with the invariant combination C, identically.
    let big_q = Scalar::big_q();
    let mut target = NCPoly::from_term(vec![Z, Zb], &Scalar::q_pow(1) / &big_q);
    target.add_term(vec![Zb, Z], &Scalar::q_pow(-1) / &big_q);
    target.add_term(vec![X3, X3], Scalar::one());
    let (_, rho_sym) = sphere_parameters(t, &Scalar::zero());
    // rho with the symbolic invariant: rho = q^-2 t^2 - q^-1/2 Tau2
    let mut rho_poly = NCPoly::scalar(rho_sym);
    rho_poly.add_term(vec![Tau2], -Scalar::q_half_pow(-1));
    let mut claim = target.sub(&rho_poly);
    let cas_minus_tau = casimir().sub(&NCPoly::gen(Tau2));
    claim = claim.add(&cas_minus_tau.scale(&Scalar::q_half_pow(-1)));
    reduce_at_t(&claim).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensors::LorentzData;

    #[test]
    fn rewrite_normalizes_and_is_confluent() {
        let rw = SUq2Rewrite::standard();
        use SUq2Gen::*;
        // alpha gamma -> q gamma alpha
        let p = SUq2Poly::from_term(vec![Alpha, Gamma], Scalar::one());
        let nf = rw.normal_order(&p);
        let mut expect = SUq2Poly::zero();
        expect.add_term(vec![Gamma, Alpha], Scalar::q_pow(1));
        assert_eq!(nf, expect);
        // mixed alpha/alpha-star words reduce through the unit relations
        let p = SUq2Poly::from_term(vec![Alpha, Gamma, AlphaStar], Scalar::one());
        let nf = rw.normal_order(&p);
        let mut expect = SUq2Poly::from_term(vec![Gamma], Scalar::q_pow(1));
        expect.add_term(vec![Gamma, Gamma, GammaStar], -Scalar::q_pow(3));
        assert_eq!(nf, expect);
        assert!(rw.confluent_to_degree(3));
    }

    #[test]
    fn unitarity_of_generator_matrix() {
        // u u^dagger = 1 = u^dagger u with the chosen relations.
        let rw = SUq2Rewrite::standard();
        let u = unitary_matrix();
        let ud: [[SUq2Poly; 2]; 2] =
            std::array::from_fn(|i| std::array::from_fn(|j| u[j][i].star()));
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j {
                    SUq2Poly::one()
                } else {
                    SUq2Poly::zero()
                };
                let mut left = SUq2Poly::zero();
                let mut right = SUq2Poly::zero();
                for k in 0..2 {
                    left = left.add(&u[i][k].mul(&ud[k][j]));
                    right = right.add(&ud[i][k].mul(&u[k][j]));
                }
                assert!(rw.normal_order(&left.sub(&expect)).is_zero(), "u u* at ({}, {})", i, j);
                assert!(rw.normal_order(&right.sub(&expect)).is_zero(), "u* u at ({}, {})", i, j);
            }
        }
    }

    #[test]
    fn d1_printed_entries() {
        use SUq2Gen::*;
        let d1 = build_d1();
        // entry (0,0) in spherical labels (-1,-1): alpha*^2
        assert_eq!(
            d1[0][0],
            SUq2Poly::from_term(vec![AlphaStar, AlphaStar], Scalar::one())
        );
        // entry (-1, 1): -q gamma^2
        assert_eq!(
            d1[0][2],
            SUq2Poly::from_term(vec![Gamma, Gamma], -Scalar::q_pow(1))
        );
        // entry (0, 0): 1 - (1 + q^2) gamma^* gamma
        let mut expect = SUq2Poly::one();
        expect.add_term(
            vec![GammaStar, Gamma],
            -&(&Scalar::one() + &Scalar::q_pow(2)),
        );
        assert_eq!(d1[1][1], expect);
    }

    #[test]
    fn d1_counit_is_identity() {
        let d1 = build_d1();
        for a in 0..3 {
            for b in 0..3 {
                let expect = if a == b { Scalar::one() } else { Scalar::zero() };
                assert_eq!(d1[a][b].counit(), expect);
            }
        }
    }

    #[test]
    fn restriction_passes_all_checks() {
        let ld = LorentzData::new();
        let fd = FunctionalData::new(&ld);
        let report = verify_so3(&fd);
        assert!(report.passed(), "failures: {:?}", report.failing_lines());
    }

    #[test]
    fn d1_coproduct_sample() {
        // Delta(d1[a][b]) = sum_k d1[a][k] (x) d1[k][b] on a sample of
        // entries, with both legs normal-ordered.
        use SUq2Gen::*;
        let rw = SUq2Rewrite::standard();
        let d1 = build_d1();
        // coproduct on generators
        let delta_gen = |g: SUq2Gen| -> Vec<(SUq2Poly, SUq2Poly)> {
            let one = SUq2Poly::gen;
            match g {
                Alpha => vec![
                    (one(Alpha), one(Alpha)),
                    (
                        SUq2Poly::gen(GammaStar).scale(&-Scalar::q_pow(1)),
                        one(Gamma),
                    ),
                ],
                Gamma => vec![(one(Gamma), one(Alpha)), (one(AlphaStar), one(Gamma))],
                GammaStar => vec![
                    (one(Alpha), one(GammaStar)),
                    (one(GammaStar), one(AlphaStar)),
                ],
                AlphaStar => vec![
                    (one(AlphaStar), one(AlphaStar)),
                    (SUq2Poly::gen(Gamma).scale(&-Scalar::q_pow(1)), one(GammaStar)),
                ],
            }
        };
        // extend multiplicatively to a polynomial
        let delta_poly = |p: &SUq2Poly| -> Vec<(SUq2Poly, SUq2Poly)> {
            let mut out: Vec<(SUq2Poly, SUq2Poly)> = Vec::new();
            for (w, c) in p.terms() {
                let mut legs = vec![(SUq2Poly::scalar(c.clone()), SUq2Poly::one())];
                for &g in w {
                    let mut next = Vec::new();
                    for (l, r) in &legs {
                        for (gl, gr) in delta_gen(g) {
                            next.push((l.mul(&gl), r.mul(&gr)));
                        }
                    }
                    legs = next;
                }
                out.extend(legs);
            }
            out
        };
        // compare normal-ordered two-leg expansions via a coefficient map
        let collect = |legs: Vec<(SUq2Poly, SUq2Poly)>| {
            let mut map: BTreeMap<(SUWord, SUWord), Scalar> = BTreeMap::new();
            for (l, r) in legs {
                let l = rw.normal_order(&l);
                let r = rw.normal_order(&r);
                for (wl, cl) in l.terms() {
                    for (wr, cr) in r.terms() {
                        let key = (wl.clone(), wr.clone());
                        let add = cl * cr;
                        let entry = map.entry(key).or_insert_with(Scalar::zero);
                        *entry = &*entry + &add;
                    }
                }
            }
            map.retain(|_, v| !v.is_zero());
            map
        };
        for (a, b) in [(0usize, 0usize), (0, 2), (1, 1), (2, 0)] {
            let lhs = collect(delta_poly(&d1[a][b]));
            let mut rhs_legs = Vec::new();
            for k in 0..3 {
                rhs_legs.push((d1[a][k].clone(), d1[k][b].clone()));
            }
            let rhs = collect(rhs_legs);
            assert_eq!(lhs, rhs, "coproduct mismatch at ({}, {})", a, b);
        }
    }

    #[test]
    fn sphere_parameter_formulas() {
        let t = Scalar::from_int(3);
        let tau2 = Scalar::from_int(2);
        let (lambda, rho) = sphere_parameters(&t, &tau2);
        let expect_lambda = &(&Scalar::q_pow(1) - &Scalar::q_pow(-1)) * &t;
        assert_eq!(lambda, expect_lambda);
        let expect_rho =
            &(&Scalar::q_pow(-2) * &Scalar::from_int(9)) - &(&Scalar::q_half_pow(-1) * &tau2);
        assert_eq!(rho, expect_rho);
        // tau2 = 0 gives rho = q^-2 t^2; q = 1 gives lambda = 0, rho = t^2 - tau2.
        let (l0, r0) = sphere_parameters(&t, &Scalar::zero());
        assert_eq!(r0, &Scalar::q_pow(-2) * &Scalar::from_int(9));
        assert_eq!(l0.classical_limit().unwrap(), Scalar::zero());
        let (_, r1) = sphere_parameters(&t, &tau2);
        assert_eq!(
            r1.classical_limit().unwrap(),
            &Scalar::from_int(9) - &tau2
        );
    }

    #[test]
    fn sphere_closure_certificate() {
        for t in [Scalar::from_int(1), Scalar::from_int(3), Scalar::from_ratio(5, 2)] {
            assert!(sphere_closure(&t));
        }
    }

    #[test]
    fn classical_orthogonality_limit() {
        // At q = 1 the restriction entries have classical limits and the
        // orthogonality residuals vanish there as well (they vanish exactly,
        // so this is a smoke test of the limit path).
        let ld = LorentzData::new();
        let fd = FunctionalData::new(&ld);
        let lam = lorentz_restriction(&fd);
        for i in 1..4 {
            for j in 1..4 {
                for (_, c) in lam[i][j].terms() {
                    let _ = c.classical_limit().unwrap();
                }
            }
        }
    }
}
