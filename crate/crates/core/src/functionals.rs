//! Dual functionals on words in the quantum SL(2,C) generators, the vector
//! braiding they induce, and the coordinate commutation relations derived
//! from it.
//!
//! The base family f carries matrix generator values built from the spinor
//! R-matrices and extends to words multiplicatively through the matrix
//! coproduct: `f[a,b](uv) = sum_c f[a,c](u) f[c,b](v)`. The companion family
//! f-tilde is the spinor-metric conjugate of f; being an antipode conjugate,
//! its value matrices compose in reversed word order. Dotted-index
//! functionals are exchange relabels: the dotted f is the transposed
//! undotted f-tilde and vice versa.
//!
//! Values on dotted generators are forced, not chosen: a dotted generator is
//! the antipode of an undotted one, so its value table is the matrix inverse
//! of the undotted table. The identity catalog re-verifies on every run that
//! this wiring reproduces the braiding row identities, the cubic Hecke
//! condition and the printed commutation relations.

use crate::coordalg::{CoordGen, NCPoly};
use crate::error::FunctionalError;
use crate::scalars::Scalar;
use crate::tensors::{IndexKind, LorentzData, Mat, Sign, Tensor};

// ---- Generator symbols and words ----

/// Which copy of the generator matrix a symbol belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenFamily {
    Undotted,
    Dotted,
}

/// One letter of a generator word: a matrix generator with its index pair
/// and the number of antipode applications (at most one is evaluable).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenSymbol {
    pub family: GenFamily,
    pub lower: usize,
    pub upper: usize,
    pub antipode_depth: u8,
}

impl GenSymbol {
    pub fn undotted(lower: usize, upper: usize) -> GenSymbol {
        GenSymbol {
            family: GenFamily::Undotted,
            lower,
            upper,
            antipode_depth: 0,
        }
    }

    pub fn dotted(lower: usize, upper: usize) -> GenSymbol {
        GenSymbol {
            family: GenFamily::Dotted,
            lower,
            upper,
            antipode_depth: 0,
        }
    }

    pub fn antipode(mut self) -> GenSymbol {
        self.antipode_depth += 1;
        self
    }
}

/// A word in the generators; the empty word is the algebra unit.
pub type MWord = Vec<GenSymbol>;

/// The f / f-tilde family tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FnFamily {
    F,
    FTilde,
}

impl FnFamily {
    fn other(self) -> FnFamily {
        match self {
            FnFamily::F => FnFamily::FTilde,
            FnFamily::FTilde => FnFamily::F,
        }
    }
}

/// Identifies one matrix entry of a dual functional.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FunctionalId {
    pub family: FnFamily,
    pub sign: Sign,
    /// Dotted index pair; dotted functionals are exchange relabels of the
    /// opposite undotted family.
    pub dotted: bool,
    pub lower: usize,
    pub upper: usize,
}

type Mat2 = [[Scalar; 2]; 2];
/// Value table indexed [fn_lo][fn_up][gen_lo][gen_up].
type Table = [[Mat2; 2]; 2];

fn table_from_fn(f: impl Fn(usize, usize, usize, usize) -> Scalar) -> Table {
    std::array::from_fn(|a| {
        std::array::from_fn(|b| std::array::from_fn(|g| std::array::from_fn(|d| f(a, b, g, d))))
    })
}

/// Given the value table of a family on some generator set X[g,d], the table
/// of values on the antipodes S(X[g,d]) is forced by the antipode law
/// `sum_x X[g,x] S(X[x,u]) = delta_{gu} 1` and multiplicativity: it is the
/// inverse of the table as a map on (fn x gen) space.
fn antipode_table(tab: &Table) -> Table {
    let mut a_mat = Mat::zeros(4, 4);
    for a in 0..2 {
        for g in 0..2 {
            for c in 0..2 {
                for x in 0..2 {
                    a_mat.set(a * 2 + g, c * 2 + x, tab[a][c][g][x].clone());
                }
            }
        }
    }
    let inv = a_mat.inverse();
    table_from_fn(|a, b, g, d| inv.get(a * 2 + g, b * 2 + d).clone())
}

// ---- The evaluation engine ----

/// Generator-value tables plus everything needed to evaluate functionals on
/// words and assemble the vector braiding. Read-only after construction.
pub struct FunctionalData<'a> {
    ld: &'a LorentzData,
    /// f_sign on undotted generators.
    f_und: [Table; 2],
    /// f_sign on dotted generators (antipode-inverse of `f_und`).
    f_dot: [Table; 2],
    /// f-tilde_sign on undotted generators (metric conjugate of `f_und`).
    ftil_und: [Table; 2],
    /// f-tilde_sign on dotted generators.
    ftil_dot: [Table; 2],
    /// f_sign on antipodes of dotted generators (inverse of `f_dot`).
    f_dot_s: [Table; 2],
    /// f-tilde_sign on antipodes of dotted generators.
    ftil_dot_s: [Table; 2],
}

impl<'a> FunctionalData<'a> {
    pub fn new(ld: &'a LorentzData) -> FunctionalData<'a> {
        // f_sign(M_und)[a,b,g,d] = q^(-sign/2) R^sign[d, b, a, g]
        let f_und: [Table; 2] = std::array::from_fn(|si| {
            let sign = if si == 0 { Sign::Plus } else { Sign::Minus };
            let pref = Scalar::q_half_pow(-sign.exponent());
            table_from_fn(|a, b, g, d| &pref * ld.r_spinor_entry(sign, d, b, a, g))
        });
        // A dotted generator is the antipode of the index-swapped undotted
        // one, so its value table is the antipode table with swapped
        // generator indices.
        let s_und = [antipode_table(&f_und[0]), antipode_table(&f_und[1])];
        let f_dot: [Table; 2] = std::array::from_fn(|si| {
            table_from_fn(|a, b, g, d| s_und[si][a][b][d][g].clone())
        });
        let f_dot_s: [Table; 2] = [antipode_table(&f_dot[0]), antipode_table(&f_dot[1])];
        // f-tilde[r,t] = sum eps_lo[r][x] eps_up[y][t] f[y,x]
        let conj = |tab: &Table| -> Table {
            table_from_fn(|r, t, g, d| {
                let mut acc = Scalar::zero();
                for x in 0..2 {
                    if ld.eps_lo[r][x].is_zero() {
                        continue;
                    }
                    for y in 0..2 {
                        if ld.eps_up[y][t].is_zero() {
                            continue;
                        }
                        acc = &acc + &(&(&ld.eps_lo[r][x] * &ld.eps_up[y][t]) * &tab[y][x][g][d]);
                    }
                }
                acc
            })
        };
        let ftil_und = [conj(&f_und[0]), conj(&f_und[1])];
        let ftil_dot = [conj(&f_dot[0]), conj(&f_dot[1])];
        let ftil_dot_s = [conj(&f_dot_s[0]), conj(&f_dot_s[1])];
        FunctionalData {
            ld,
            f_und,
            f_dot,
            ftil_und,
            ftil_dot,
            f_dot_s,
            ftil_dot_s,
        }
    }

    pub fn lorentz(&self) -> &LorentzData {
        self.ld
    }

    /// True when the functional's value matrices compose in reversed word
    /// order. The f-tilde family is an antipode conjugate of f and therefore
    /// anti-multiplicative; exchange relabels transpose the value matrices,
    /// which flips the composition order back for the dotted f-tilde.
    fn reversed(family: FnFamily, dotted: bool) -> bool {
        match (family, dotted) {
            (FnFamily::F, false) => false,
            (FnFamily::FTilde, false) => true,
            // dotted f = transposed undotted f-tilde: reversed twice.
            (FnFamily::F, true) => false,
            (FnFamily::FTilde, true) => true,
        }
    }

    /// The 2x2 value matrix (over the functional index pair) of the given
    /// family on a single generator symbol.
    fn letter_matrix(
        &self,
        family: FnFamily,
        sign: Sign,
        fn_dotted: bool,
        gen: &GenSymbol,
    ) -> Result<Mat2, FunctionalError> {
        if gen.lower > 1 || gen.upper > 1 {
            return Err(FunctionalError::GeneratorIndexOutOfRange {
                index: gen.lower.max(gen.upper),
            });
        }
        if gen.antipode_depth > 1 {
            return Err(FunctionalError::UnsupportedAntipodeDepth {
                depth: gen.antipode_depth,
            });
        }
        // Dotted functionals are the exchange relabels of the opposite
        // undotted family with transposed indices.
        let (eff_family, transpose) = if fn_dotted {
            (family.other(), true)
        } else {
            (family, false)
        };
        let si = sign.index();
        // The antipode of an undotted generator is the dotted generator with
        // swapped indices; antipodes of dotted generators have their own
        // (inverse-law) tables.
        let raw: Mat2 = match (gen.family, gen.antipode_depth) {
            (GenFamily::Undotted, 0) => {
                self.pick(eff_family, si, TableKind::Undotted, gen.lower, gen.upper)
            }
            (GenFamily::Dotted, 0) => {
                self.pick(eff_family, si, TableKind::Dotted, gen.lower, gen.upper)
            }
            (GenFamily::Undotted, 1) => {
                self.pick(eff_family, si, TableKind::Dotted, gen.upper, gen.lower)
            }
            (GenFamily::Dotted, 1) => {
                self.pick(eff_family, si, TableKind::DottedAntipode, gen.lower, gen.upper)
            }
            _ => unreachable!("antipode depth checked above"),
        };
        if transpose {
            Ok(std::array::from_fn(|a| {
                std::array::from_fn(|b| raw[b][a].clone())
            }))
        } else {
            Ok(raw)
        }
    }

    fn pick(
        &self,
        family: FnFamily,
        sign_index: usize,
        kind: TableKind,
        g: usize,
        d: usize,
    ) -> Mat2 {
        let table = match (family, kind) {
            (FnFamily::F, TableKind::Undotted) => &self.f_und[sign_index],
            (FnFamily::F, TableKind::Dotted) => &self.f_dot[sign_index],
            (FnFamily::F, TableKind::DottedAntipode) => &self.f_dot_s[sign_index],
            (FnFamily::FTilde, TableKind::Undotted) => &self.ftil_und[sign_index],
            (FnFamily::FTilde, TableKind::Dotted) => &self.ftil_dot[sign_index],
            (FnFamily::FTilde, TableKind::DottedAntipode) => &self.ftil_dot_s[sign_index],
        };
        std::array::from_fn(|a| std::array::from_fn(|b| table[a][b][g][d].clone()))
    }

    /// Evaluate a functional on a word: the matrix product of letter values
    /// (reversed for anti-multiplicative families), with the Kronecker delta
    /// on the empty word.
    pub fn eval_f(&self, id: FunctionalId, word: &[GenSymbol]) -> Result<Scalar, FunctionalError> {
        let mut acc: Mat2 = std::array::from_fn(|a| {
            std::array::from_fn(|b| {
                if a == b {
                    Scalar::one()
                } else {
                    Scalar::zero()
                }
            })
        });
        let reversed = Self::reversed(id.family, id.dotted);
        let mut letters: Vec<&GenSymbol> = word.iter().collect();
        if reversed {
            letters.reverse();
        }
        for gen in letters {
            let m = self.letter_matrix(id.family, id.sign, id.dotted, gen)?;
            let mut next: Mat2 = std::array::from_fn(|_| std::array::from_fn(|_| Scalar::zero()));
            for a in 0..2 {
                for b in 0..2 {
                    let mut s = Scalar::zero();
                    for c in 0..2 {
                        s = &s + &(&acc[a][c] * &m[c][b]);
                    }
                    next[a][b] = s;
                }
            }
            acc = next;
        }
        Ok(acc[id.lower][id.upper].clone())
    }

    /// Expansion of the Lorentz generator with the given lower and upper
    /// vector indices over the sixteen two-letter generator words, as exact
    /// coefficient/word pairs. Words are (undotted letter, dotted letter).
    pub fn lambda_expansion(&self, lower: usize, upper: usize) -> Vec<(Scalar, MWord)> {
        let ld = self.ld;
        let q_inv = Scalar::big_q().inv().expect("Q nonzero");
        let sb = &ld.sigma_bar_lo[Sign::Plus.index()][lower];
        let sg = &ld.sigma[upper];
        let mut out = Vec::new();
        for alpha in 0..2 {
            for s in 0..2 {
                for beta_dot in 0..2 {
                    for rho_dot in 0..2 {
                        let mut coeff = Scalar::zero();
                        for g in 0..2 {
                            for dd in 0..2 {
                                let term = &(&ld.eps_dot_lo[g][dd] * &sb[dd][alpha])
                                    * &(&sg[s][rho_dot] * &ld.eps_dot_up[g][beta_dot]);
                                coeff = &coeff + &term;
                            }
                        }
                        coeff = &coeff * &q_inv;
                        if !coeff.is_zero() {
                            out.push((
                                coeff,
                                vec![
                                    GenSymbol::undotted(alpha, s),
                                    GenSymbol::dotted(beta_dot, rho_dot),
                                ],
                            ));
                        }
                    }
                }
            }
        }
        out
    }

    /// The expansion of the antipode of a Lorentz generator: the antipode
    /// reverses the word and sends each letter to its antipode.
    pub fn lambda_antipode_expansion(&self, lower: usize, upper: usize) -> Vec<(Scalar, MWord)> {
        self.lambda_expansion(lower, upper)
            .into_iter()
            .map(|(c, w)| {
                let mut rev: MWord = w.into_iter().rev().map(GenSymbol::antipode).collect();
                (c, std::mem::take(&mut rev))
            })
            .collect()
    }

    /// Lowered sigma-bar contracted on its dotted index, used by the induced
    /// functionals: sb_K[alpha_dot][delta].
    fn sb_lowered(&self, sign: Sign, k: usize) -> Mat2 {
        let ld = self.ld;
        let sb = &ld.sigma_bar_lo[sign.index()][k];
        std::array::from_fn(|alpha_dot| {
            std::array::from_fn(|delta| {
                let mut acc = Scalar::zero();
                for x in 0..2 {
                    acc = &acc + &(&ld.eps_dot_lo[alpha_dot][x] * &sb[x][delta]);
                }
                acc
            })
        })
    }

    /// sigma^M with its dotted index raised: sg_M[beta_dot][gamma].
    fn sg_raised(&self, m: usize) -> Mat2 {
        let ld = self.ld;
        std::array::from_fn(|beta_dot| {
            std::array::from_fn(|gamma| {
                let mut acc = Scalar::zero();
                for y in 0..2 {
                    acc = &acc + &(&ld.eps_dot_up[beta_dot][y] * &ld.sigma[m][gamma][y]);
                }
                acc
            })
        })
    }

    /// Joint transfer matrix of one letter under the coproduct split. The
    /// f-tilde chain is anti-multiplicative, so its letter values enter
    /// transposed; rows and columns are (ftilde-upper, f-lower) and
    /// (ftilde-lower, f-upper) accordingly.
    fn joint_letter(&self, sign: Sign, gen: &GenSymbol) -> Result<Mat, FunctionalError> {
        let mut t = Mat::zeros(4, 4);
        for x in 0..2 {
            // The coproduct splits a generator index-wise; on an antipode
            // letter the legs swap, since Delta(S(x)) = (S x S)(swap
            // Delta(x)).
            let (left_pair, right_pair) = if gen.antipode_depth % 2 == 0 {
                ((gen.lower, x), (x, gen.upper))
            } else {
                ((x, gen.upper), (gen.lower, x))
            };
            let left = GenSymbol {
                family: gen.family,
                lower: left_pair.0,
                upper: left_pair.1,
                antipode_depth: gen.antipode_depth,
            };
            let right = GenSymbol {
                family: gen.family,
                lower: right_pair.0,
                upper: right_pair.1,
                antipode_depth: gen.antipode_depth,
            };
            let lm = self.letter_matrix(FnFamily::FTilde, sign.other(), true, &left)?;
            let rm = self.letter_matrix(FnFamily::F, sign, false, &right)?;
            for e in 0..2 {
                for ep in 0..2 {
                    if lm[ep][e].is_zero() {
                        continue;
                    }
                    for d in 0..2 {
                        for dp in 0..2 {
                            if rm[d][dp].is_zero() {
                                continue;
                            }
                            let row = e * 2 + d;
                            let col = ep * 2 + dp;
                            let v = t.get(row, col) + &(&lm[ep][e] * &rm[d][dp]);
                            t.set(row, col, v);
                        }
                    }
                }
            }
        }
        Ok(t)
    }

    fn joint_word(&self, sign: Sign, word: &[GenSymbol]) -> Result<Mat, FunctionalError> {
        let mut acc = Mat::identity(4);
        for gen in word {
            acc = acc.mul(&self.joint_letter(sign, gen)?);
        }
        Ok(acc)
    }

    /// The induced vector functional on a generator word, with the Kronecker
    /// delta on the empty word.
    pub fn eval_big_f(
        &self,
        sign: Sign,
        k: usize,
        m: usize,
        word: &[GenSymbol],
    ) -> Result<Scalar, FunctionalError> {
        let joint = self.joint_word(sign, word)?;
        Ok(self.contract_big_f(sign, k, m, &joint))
    }

    fn contract_big_f(&self, sign: Sign, k: usize, m: usize, joint: &Mat) -> Scalar {
        let sb = self.sb_lowered(sign, k);
        let sg = self.sg_raised(m);
        let q_inv = Scalar::big_q().inv().expect("Q nonzero");
        let mut acc = Scalar::zero();
        for alpha_dot in 0..2 {
            for delta in 0..2 {
                if sb[alpha_dot][delta].is_zero() {
                    continue;
                }
                for beta_dot in 0..2 {
                    for gamma in 0..2 {
                        if sg[beta_dot][gamma].is_zero() {
                            continue;
                        }
                        let row = alpha_dot * 2 + delta;
                        let col = beta_dot * 2 + gamma;
                        let j = joint.get(row, col);
                        if j.is_zero() {
                            continue;
                        }
                        acc = &acc + &(&(&sb[alpha_dot][delta] * &sg[beta_dot][gamma]) * j);
                    }
                }
            }
        }
        &acc * &q_inv
    }

    fn big_r_from_words(
        &self,
        sign: Sign,
        expansion: impl Fn(usize, usize) -> Vec<(Scalar, MWord)>,
    ) -> Tensor {
        let mut t = Tensor::zeros(vec![
            IndexKind::VectorUpper,
            IndexKind::VectorUpper,
            IndexKind::VectorLower,
            IndexKind::VectorLower,
        ]);
        for l in 0..4 {
            for n in 0..4 {
                let words = expansion(l, n);
                let joints: Vec<(Scalar, Mat)> = words
                    .iter()
                    .map(|(c, w)| {
                        (
                            c.clone(),
                            self.joint_word(sign, w).expect("letters are evaluable"),
                        )
                    })
                    .collect();
                for k in 0..4 {
                    for m in 0..4 {
                        let mut acc = Scalar::zero();
                        for (c, joint) in &joints {
                            let v = self.contract_big_f(sign, k, m, joint);
                            acc = &acc + &(c * &v);
                        }
                        t.set(&[n, m, k, l], acc);
                    }
                }
            }
        }
        t
    }

    /// The 16x16 vector braiding: entry [N, M, K, L] is the value of the
    /// induced functional F_K^M on the Lorentz generator with lower index L
    /// and upper index N. Signature (upper, upper, lower, lower).
    pub fn big_r(&self, sign: Sign) -> Tensor {
        self.big_r_from_words(sign, |l, n| self.lambda_expansion(l, n))
    }

    /// The inverse braiding obtained through the antipode: the entry at
    /// [N, M, R, T] is F_T^N evaluated on the antipode of the Lorentz
    /// generator with lower index R and upper index M. The product with
    /// [`Self::big_r`] of the same family is the identity.
    pub fn big_r_antipode_inverse(&self, sign: Sign) -> Tensor {
        // Evaluate on the reversed words of letter antipodes; both index
        // pairs swap relative to the plain braiding layout.
        let raw = self.big_r_from_words(sign, |l, n| self.lambda_antipode_expansion(l, n));
        Tensor::from_fn(raw.signature().to_vec(), |idx| {
            raw.get(&[idx[1], idx[0], idx[3], idx[2]]).clone()
        })
    }

    /// The sixteen quadratic coordinate relations obtained from the braiding,
    /// `X_L X_K - R^{NM}_{LK} X_N X_M`, expressed in the Z basis.
    pub fn derive_coordinate_relations(&self, big_r_plus: &Tensor) -> Vec<NCPoly> {
        let x = coordinate_polys();
        let mut rels = Vec::new();
        for l in 0..4 {
            for k in 0..4 {
                let mut rel = x[l].mul(&x[k]);
                for n in 0..4 {
                    for m in 0..4 {
                        let c = big_r_plus.get(&[n, m, l, k]);
                        if c.is_zero() {
                            continue;
                        }
                        rel = rel.sub(&x[n].mul(&x[m]).scale(c));
                    }
                }
                rels.push(rel);
            }
        }
        rels
    }
}

#[derive(Clone, Copy)]
enum TableKind {
    Undotted,
    Dotted,
    DottedAntipode,
}

/// The four vector coordinates as Z-basis polynomials:
/// X1 = (Z + Zb)/2 and X2 = (Z - Zb)/(2i).
pub fn coordinate_polys() -> [NCPoly; 4] {
    let half = Scalar::from_ratio(1, 2);
    let half_i = &Scalar::i() * &half;
    [
        NCPoly::gen(CoordGen::X0),
        NCPoly::gen(CoordGen::Z)
            .add(&NCPoly::gen(CoordGen::Zb))
            .scale(&half),
        NCPoly::gen(CoordGen::Z)
            .scale(&-&half_i)
            .add(&NCPoly::gen(CoordGen::Zb).scale(&half_i)),
        NCPoly::gen(CoordGen::X3),
    ]
}

// ---- Relation-span comparison ----

/// Exact row reduction of degree-two relation vectors; returns a reduced
/// basis usable for membership tests.
pub struct RelationSpan {
    /// Ordered list of degree-two words over {X0, Zb, Z, X3}.
    words: Vec<crate::coordalg::Word>,
    rows: Vec<Vec<Scalar>>,
}

impl RelationSpan {
    pub fn new(relations: &[NCPoly]) -> RelationSpan {
        use CoordGen::*;
        let gens = [X0, Zb, Z, X3];
        let mut words = Vec::new();
        for &a in &gens {
            for &b in &gens {
                words.push(vec![a, b]);
            }
        }
        let mut span = RelationSpan {
            words,
            rows: Vec::new(),
        };
        for rel in relations {
            span.insert(rel);
        }
        span
    }

    fn to_vector(&self, p: &NCPoly) -> Option<Vec<Scalar>> {
        let mut v = vec![Scalar::zero(); self.words.len()];
        for (w, c) in p.terms() {
            let pos = self.words.iter().position(|x| x == w)?;
            v[pos] = c.clone();
        }
        Some(v)
    }

    fn reduce(&self, mut v: Vec<Scalar>) -> Vec<Scalar> {
        for row in &self.rows {
            let pivot = row
                .iter()
                .position(|c| !c.is_zero())
                .expect("rows are nonzero");
            if v[pivot].is_zero() {
                continue;
            }
            let factor = v[pivot].clone();
            for (a, b) in v.iter_mut().zip(row.iter()) {
                *a = &*a - &(&factor * b);
            }
        }
        v
    }

    fn insert(&mut self, p: &NCPoly) {
        let v = match self.to_vector(p) {
            Some(v) => v,
            None => return,
        };
        let mut v = self.reduce(v);
        if let Some(pivot) = v.iter().position(|c| !c.is_zero()) {
            let inv = v[pivot].inv().expect("pivot nonzero");
            for a in v.iter_mut() {
                *a = &*a * &inv;
            }
            self.rows.push(v);
            self.rows.sort_by_key(|row| {
                row.iter().position(|c| !c.is_zero()).unwrap_or(usize::MAX)
            });
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// True when the given degree-two relation lies in the span.
    pub fn contains(&self, p: &NCPoly) -> bool {
        match self.to_vector(p) {
            Some(v) => self.reduce(v).iter().all(Scalar::is_zero),
            None => false,
        }
    }
}
