//! Typed-index tensors over [`Scalar`] and the defining constants of the
//! construction: sigma matrices, spinor metrics, the spinor R-matrices, the
//! sigma-bar matrices, and the quantum Minkowski metric with its inverse.
//!
//! Index conventions. Spinor indices come in an undotted and a dotted family,
//! each of range {0, 1}; vector indices range over {0, 1, 2, 3}. The dotted
//! spinor metric is the transpose of the undotted one (star conjugation maps
//! one onto the other). Raising and lowering:
//!
//! - undotted: `v^a = v_r eps_up[r][a]`, `v_b = v^a eps_lo[a][b]`
//! - dotted:   `v^a = eps_dot_up[a][r] v_r`, `v_b = eps_dot_lo[b][a] v^a`
//!
//! Contraction is only permitted between one upper and one lower index of the
//! same family; the API takes explicit position pairs to keep convention
//! drift out of call sites.

use std::fmt;

use crate::error::TensorError;
use crate::scalars::Scalar;

// ---- Index kinds ----

/// Families an index can belong to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndexFamily {
    Spinor,
    Dotted,
    Vector,
}

/// A typed tensor index: family plus variance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndexKind {
    SpinorLower,
    SpinorUpper,
    DottedLower,
    DottedUpper,
    VectorLower,
    VectorUpper,
}

impl IndexKind {
    pub fn dim(self) -> usize {
        match self.family() {
            IndexFamily::Spinor | IndexFamily::Dotted => 2,
            IndexFamily::Vector => 4,
        }
    }

    pub fn family(self) -> IndexFamily {
        match self {
            IndexKind::SpinorLower | IndexKind::SpinorUpper => IndexFamily::Spinor,
            IndexKind::DottedLower | IndexKind::DottedUpper => IndexFamily::Dotted,
            IndexKind::VectorLower | IndexKind::VectorUpper => IndexFamily::Vector,
        }
    }

    pub fn is_upper(self) -> bool {
        matches!(
            self,
            IndexKind::SpinorUpper | IndexKind::DottedUpper | IndexKind::VectorUpper
        )
    }
}

// ---- Dense tensors ----

/// A dense tensor of [`Scalar`] entries with a typed index signature, stored
/// row-major in the printed index order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor {
    signature: Vec<IndexKind>,
    entries: Vec<Scalar>,
}

impl Tensor {
    pub fn zeros(signature: Vec<IndexKind>) -> Tensor {
        let size = signature.iter().map(|k| k.dim()).product();
        Tensor {
            signature,
            entries: vec![Scalar::zero(); size],
        }
    }

    pub fn from_fn(signature: Vec<IndexKind>, f: impl Fn(&[usize]) -> Scalar) -> Tensor {
        let mut t = Tensor::zeros(signature);
        let rank = t.signature.len();
        let mut idx = vec![0usize; rank];
        loop {
            let flat = t.flat_index(&idx);
            t.entries[flat] = f(&idx);
            if !step(&mut idx, &t.signature) {
                break;
            }
        }
        t
    }

    pub fn from_entries(
        signature: Vec<IndexKind>,
        entries: Vec<Scalar>,
    ) -> Result<Tensor, TensorError> {
        let expected = signature.iter().map(|k| k.dim()).product();
        if entries.len() != expected {
            return Err(TensorError::ShapeMismatch {
                got: entries.len(),
                expected,
            });
        }
        Ok(Tensor { signature, entries })
    }

    pub fn signature(&self) -> &[IndexKind] {
        &self.signature
    }

    pub fn rank(&self) -> usize {
        self.signature.len()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    fn flat_index(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.signature.len());
        let mut flat = 0;
        for (i, &v) in idx.iter().enumerate() {
            debug_assert!(v < self.signature[i].dim());
            flat = flat * self.signature[i].dim() + v;
        }
        flat
    }

    pub fn get(&self, idx: &[usize]) -> &Scalar {
        &self.entries[self.flat_index(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: Scalar) {
        let flat = self.flat_index(idx);
        self.entries[flat] = value;
    }

    /// Reinterpret the index kinds without touching entries. Dimensions must
    /// match. Used to move numerically equal data between the dotted and
    /// undotted families.
    pub fn relabel(&self, signature: Vec<IndexKind>) -> Result<Tensor, TensorError> {
        let expected: usize = signature.iter().map(|k| k.dim()).product();
        if expected != self.entries.len() {
            return Err(TensorError::ShapeMismatch {
                got: self.entries.len(),
                expected,
            });
        }
        Ok(Tensor {
            signature,
            entries: self.entries.clone(),
        })
    }

    pub fn scale(&self, c: &Scalar) -> Tensor {
        Tensor {
            signature: self.signature.clone(),
            entries: self.entries.iter().map(|e| e * c).collect(),
        }
    }

    pub fn add(&self, rhs: &Tensor) -> Result<Tensor, TensorError> {
        if self.signature != rhs.signature {
            return Err(TensorError::ShapeMismatch {
                got: rhs.entries.len(),
                expected: self.entries.len(),
            });
        }
        Ok(Tensor {
            signature: self.signature.clone(),
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, rhs: &Tensor) -> Result<Tensor, TensorError> {
        self.add(&rhs.scale(&-Scalar::one()))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    fn check_pair(&self, other: &Tensor, pa: usize, pb: usize) -> Result<(), TensorError> {
        if pa >= self.rank() {
            return Err(TensorError::IndexOutOfRange {
                position: pa,
                rank: self.rank(),
            });
        }
        if pb >= other.rank() {
            return Err(TensorError::IndexOutOfRange {
                position: pb,
                rank: other.rank(),
            });
        }
        let ka = self.signature[pa];
        let kb = other.signature[pb];
        if ka.family() != kb.family() {
            return Err(TensorError::FamilyMismatch {
                a: format!("{:?}", ka),
                b: format!("{:?}", kb),
            });
        }
        if ka.is_upper() == kb.is_upper() {
            return Err(TensorError::VarianceMismatch {
                a: format!("{:?}", ka),
                b: format!("{:?}", kb),
            });
        }
        Ok(())
    }

    /// Einstein contraction of `self` with `rhs` over the given position
    /// pairs `(pos_in_self, pos_in_rhs)`. Remaining indices of `self` precede
    /// remaining indices of `rhs` in the result.
    pub fn contract(&self, rhs: &Tensor, pairs: &[(usize, usize)]) -> Result<Tensor, TensorError> {
        for &(pa, pb) in pairs {
            self.check_pair(rhs, pa, pb)?;
        }
        let a_kept: Vec<usize> = (0..self.rank())
            .filter(|p| !pairs.iter().any(|&(pa, _)| pa == *p))
            .collect();
        let b_kept: Vec<usize> = (0..rhs.rank())
            .filter(|p| !pairs.iter().any(|&(_, pb)| pb == *p))
            .collect();
        let mut signature: Vec<IndexKind> =
            a_kept.iter().map(|&p| self.signature[p]).collect();
        signature.extend(b_kept.iter().map(|&p| rhs.signature[p]));
        let mut out = Tensor::zeros(signature);

        let mut a_idx = vec![0usize; self.rank()];
        loop {
            let a_val = self.get(&a_idx);
            if !a_val.is_zero() {
                let mut b_idx = vec![0usize; rhs.rank()];
                loop {
                    let matched = pairs
                        .iter()
                        .all(|&(pa, pb)| a_idx[pa] == b_idx[pb]);
                    if matched {
                        let b_val = rhs.get(&b_idx);
                        if !b_val.is_zero() {
                            let mut out_idx: Vec<usize> =
                                a_kept.iter().map(|&p| a_idx[p]).collect();
                            out_idx.extend(b_kept.iter().map(|&p| b_idx[p]));
                            let flat = out.flat_index(&out_idx);
                            out.entries[flat] = &out.entries[flat] + &(a_val * b_val);
                        }
                    }
                    if !step(&mut b_idx, &rhs.signature) {
                        break;
                    }
                }
            }
            if !step(&mut a_idx, &self.signature) {
                break;
            }
        }
        Ok(out)
    }

    /// Trace over two indices of a single tensor.
    pub fn trace(&self, p1: usize, p2: usize) -> Result<Tensor, TensorError> {
        self.check_pair(self, p1, p2)?;
        let kept: Vec<usize> = (0..self.rank()).filter(|&p| p != p1 && p != p2).collect();
        let signature: Vec<IndexKind> = kept.iter().map(|&p| self.signature[p]).collect();
        let mut out = Tensor::zeros(signature);
        let mut idx = vec![0usize; self.rank()];
        loop {
            if idx[p1] == idx[p2] {
                let v = self.get(&idx);
                if !v.is_zero() {
                    let out_idx: Vec<usize> = kept.iter().map(|&p| idx[p]).collect();
                    let flat = out.flat_index(&out_idx);
                    out.entries[flat] = &out.entries[flat] + v;
                }
            }
            if !step(&mut idx, &self.signature) {
                break;
            }
        }
        Ok(out)
    }

    /// Row-major pretty print, one `index = value` line per nonzero entry.
    pub fn pretty(&self) -> String {
        let mut out = String::new();
        let mut idx = vec![0usize; self.rank()];
        loop {
            let v = self.get(&idx);
            if !v.is_zero() {
                let ix: Vec<String> = idx.iter().map(|i| i.to_string()).collect();
                out.push_str(&format!("[{}] = {}\n", ix.join(","), v));
            }
            if !step(&mut idx, &self.signature) {
                break;
            }
        }
        if out.is_empty() {
            out.push_str("(zero tensor)\n");
        }
        out
    }

    /// JSON export `{"signature": [...], "entries": [...]}` with entries in
    /// row-major order as canonical scalar strings.
    pub fn to_json(&self) -> String {
        let sig: Vec<String> = self
            .signature
            .iter()
            .map(|k| format!("\"{:?}\"", k))
            .collect();
        let entries: Vec<String> = self
            .entries
            .iter()
            .map(|e| format!("\"{}\"", e))
            .collect();
        format!(
            "{{\"signature\": [{}], \"entries\": [{}]}}",
            sig.join(", "),
            entries.join(", ")
        )
    }
}

impl fmt::Display for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pretty())
    }
}

/// Advance a multi-index through its ranges; false when exhausted.
fn step(idx: &mut [usize], signature: &[IndexKind]) -> bool {
    for i in (0..idx.len()).rev() {
        idx[i] += 1;
        if idx[i] < signature[i].dim() {
            return true;
        }
        idx[i] = 0;
    }
    false
}

// ---- Exact matrices (flattened tensors) ----

/// A dense matrix over [`Scalar`], used for the R-matrix polynomial
/// conditions and metric inversion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Scalar>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Mat {
        Mat {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn add(&self, rhs: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, rhs: &Mat) -> Mat {
        assert_eq!(self.cols, rhs.rows);
        let mut out = Mat::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = rhs.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let v = &out.data[r * out.cols + c] + &(a * b);
                    out.data[r * out.cols + c] = v;
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    /// Exact inverse by Gauss-Jordan elimination. Panics on a singular
    /// matrix; the metrics inverted here are invertible by construction.
    pub fn inverse(&self) -> Mat {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Mat::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a.get(r, col).is_zero())
                .expect("Mat::inverse: singular matrix");
            if pivot != col {
                for c in 0..n {
                    let tmp = a.get(pivot, c).clone();
                    a.set(pivot, c, a.get(col, c).clone());
                    a.set(col, c, tmp);
                    let tmp = inv.get(pivot, c).clone();
                    inv.set(pivot, c, inv.get(col, c).clone());
                    inv.set(col, c, tmp);
                }
            }
            let p_inv = a.get(col, col).inv().expect("pivot is nonzero");
            for c in 0..n {
                a.set(col, c, &p_inv * a.get(col, c));
                inv.set(col, c, &p_inv * inv.get(col, c));
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let factor = a.get(r, col).clone();
                for c in 0..n {
                    let va = a.get(r, c) - &(&factor * a.get(col, c));
                    a.set(r, c, va);
                    let vi = inv.get(r, c) - &(&factor * inv.get(col, c));
                    inv.set(r, c, vi);
                }
            }
        }
        inv
    }
}

/// Flatten a rank-4 tensor into a matrix with rows (i0,i1) and cols (i2,i3).
pub fn rank4_to_mat(t: &Tensor) -> Mat {
    assert_eq!(t.rank(), 4);
    let d0 = t.signature()[0].dim();
    let d1 = t.signature()[1].dim();
    let d2 = t.signature()[2].dim();
    let d3 = t.signature()[3].dim();
    let mut m = Mat::zeros(d0 * d1, d2 * d3);
    for a in 0..d0 {
        for b in 0..d1 {
            for c in 0..d2 {
                for d in 0..d3 {
                    m.set(a * d1 + b, c * d3 + d, t.get(&[a, b, c, d]).clone());
                }
            }
        }
    }
    m
}

/// Embed a rank-4 tensor acting on strands (i, j) of a 3-strand space of
/// local dimension `dim`, as a dim^3 x dim^3 matrix.
pub fn embed_three_strands(t: &Tensor, i: usize, j: usize, dim: usize) -> Mat {
    assert!(i < j && j < 3);
    let n = dim * dim * dim;
    let mut m = Mat::zeros(n, n);
    for a in 0..dim {
        for b in 0..dim {
            for c in 0..dim {
                let row = [a, b, c];
                for d in 0..dim {
                    for e in 0..dim {
                        let v = t.get(&[row[i], row[j], d, e]);
                        if v.is_zero() {
                            continue;
                        }
                        let mut col = row;
                        col[i] = d;
                        col[j] = e;
                        let r = (row[0] * dim + row[1]) * dim + row[2];
                        let cc = (col[0] * dim + col[1]) * dim + col[2];
                        m.set(r, cc, &m.get(r, cc).clone() + v);
                    }
                }
            }
        }
    }
    m
}

/// Yang-Baxter check in the braid form R12 R23 R12 = R23 R12 R23 for a
/// rank-4 R-tensor of local dimension `dim`. The R-matrices built here are
/// Hecke-type braid generators, so this is the equation they satisfy.
pub fn yang_baxter_holds(r: &Tensor, dim: usize) -> bool {
    let r12 = embed_three_strands(r, 0, 1, dim);
    let r23 = embed_three_strands(r, 1, 2, dim);
    let lhs = r12.mul(&r23).mul(&r12);
    let rhs = r23.mul(&r12).mul(&r23);
    lhs.sub(&rhs).is_zero()
}

// ---- The construction constants ----

type Mat2 = [[Scalar; 2]; 2];
type R4 = Vec<Scalar>; // 2x2x2x2, flat

fn mat2(f: impl Fn(usize, usize) -> Scalar) -> Mat2 {
    std::array::from_fn(|a| std::array::from_fn(|b| f(a, b)))
}

fn r4_get(r: &R4, a: usize, b: usize, c: usize, d: usize) -> &Scalar {
    &r[((a * 2 + b) * 2 + c) * 2 + d]
}

/// The sign family (plus/minus) used throughout the construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn exponent(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn other(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Sign::Plus => 0,
            Sign::Minus => 1,
        }
    }
}

/// All exactly-constructed constants: spinor metrics, sigma matrices, the
/// spinor R-matrices, sigma-bar, and the quantum metric with its inverse,
/// for both sign families. Immutable once built; cheap to share by reference.
pub struct LorentzData {
    /// Undotted spinor metric, lower indices.
    pub eps_lo: Mat2,
    /// Undotted spinor metric, upper indices (= minus the lower one).
    pub eps_up: Mat2,
    /// Dotted spinor metric, lower indices (transpose of the undotted one).
    pub eps_dot_lo: Mat2,
    /// Dotted spinor metric, upper indices.
    pub eps_dot_up: Mat2,
    /// sigma^0..sigma^3 as 2x2 matrices, index order (undotted, dotted).
    pub sigma: [Mat2; 4],
    /// Spinor R-matrices R^[sign][up1, up2, lo1, lo2], undotted family.
    r_spinor: [R4; 2],
    /// Dotted-family spinor R-matrices (built from the dotted metric).
    r_spinor_dot: [R4; 2],
    /// sigma-bar^I for each sign family; upper vector label, indices
    /// (dotted-upper, undotted-upper).
    pub sigma_bar: [[Mat2; 4]; 2],
    /// sigma-bar with the vector label lowered by the metric inverse.
    pub sigma_bar_lo: [[Mat2; 4]; 2],
    /// sigma with the vector label lowered: sigma_{I} = G_{IJ} sigma^J.
    pub sigma_lo: [[Mat2; 4]; 2],
    /// Quantum metric G^{IJ} per sign family, 4x4.
    pub g_up: [Mat; 2],
    /// Inverse metric G_{IJ} per sign family, 4x4.
    pub g_lo: [Mat; 2],
}

impl LorentzData {
    pub fn new() -> LorentzData {
        let s = Scalar::q_half_pow(1); // q^(1/2)
        let s_inv = Scalar::q_half_pow(-1);

        // eps_lo = [[0, -q^(-1/2)], [q^(1/2), 0]]
        let eps_lo = mat2(|a, b| match (a, b) {
            (0, 1) => -s_inv.clone(),
            (1, 0) => s.clone(),
            _ => Scalar::zero(),
        });
        let eps_up = mat2(|a, b| -&eps_lo[a][b]);
        let eps_dot_lo = mat2(|a, b| eps_lo[b][a].clone());
        let eps_dot_up = mat2(|a, b| -&eps_dot_lo[a][b]);

        let q = Scalar::q_pow(1);
        let q_inv = Scalar::q_pow(-1);
        let i = Scalar::i();
        let sigma: [Mat2; 4] = [
            mat2(|a, b| {
                if a == b {
                    Scalar::one()
                } else {
                    Scalar::zero()
                }
            }),
            mat2(|a, b| {
                if a != b {
                    Scalar::one()
                } else {
                    Scalar::zero()
                }
            }),
            mat2(|a, b| match (a, b) {
                (0, 1) => -&i,
                (1, 0) => i.clone(),
                _ => Scalar::zero(),
            }),
            mat2(|a, b| match (a, b) {
                (0, 0) => q.clone(),
                (1, 1) => -&q_inv,
                _ => Scalar::zero(),
            }),
        ];

        let build_r = |sign: Sign, up: &Mat2, lo: &Mat2| -> R4 {
            let a_pow = Scalar::q_pow(sign.exponent());
            let mut r = Vec::with_capacity(16);
            for u1 in 0..2 {
                for u2 in 0..2 {
                    for l1 in 0..2 {
                        for l2 in 0..2 {
                            let delta = if u1 == l1 && u2 == l2 {
                                Scalar::one()
                            } else {
                                Scalar::zero()
                            };
                            r.push(&delta + &(&(&a_pow * &up[u1][u2]) * &lo[l1][l2]));
                        }
                    }
                }
            }
            r
        };
        let r_spinor = [
            build_r(Sign::Plus, &eps_up, &eps_lo),
            build_r(Sign::Minus, &eps_up, &eps_lo),
        ];
        let r_spinor_dot = [
            build_r(Sign::Plus, &eps_dot_up, &eps_dot_lo),
            build_r(Sign::Minus, &eps_dot_up, &eps_dot_lo),
        ];

        // sigma-bar^I for family `sign`: contract the value table of the
        // dotted functional of the opposite family on undotted generators
        // against the spinor metrics and sigma^I. The table is the
        // eps-conjugated spinor R-matrix of the opposite family with the
        // q^(sign/2) pairing normalization.
        let sigma_bar = [
            Self::build_sigma_bar_family(Sign::Plus, &eps_lo, &eps_up, &eps_dot_up, &sigma, &r_spinor),
            Self::build_sigma_bar_family(Sign::Minus, &eps_lo, &eps_up, &eps_dot_up, &sigma, &r_spinor),
        ];

        let big_q = Scalar::big_q();
        let q_inv_scalar = big_q.inv().expect("Q is nonzero");
        let g_up: [Mat; 2] = std::array::from_fn(|si| {
            let mut g = Mat::zeros(4, 4);
            for big_i in 0..4 {
                for big_j in 0..4 {
                    // (1/Q) eps_up[a][n] sigma^I[a][b] sigma_bar^J[b][c] eps_lo[c][n]
                    let mut acc = Scalar::zero();
                    for a in 0..2 {
                        for n in 0..2 {
                            if eps_up[a][n].is_zero() {
                                continue;
                            }
                            for b in 0..2 {
                                for c in 0..2 {
                                    let term = &(&eps_up[a][n] * &sigma[big_i][a][b])
                                        * &(&sigma_bar[si][big_j][b][c] * &eps_lo[c][n]);
                                    acc = &acc + &term;
                                }
                            }
                        }
                    }
                    g.set(big_i, big_j, &acc * &q_inv_scalar);
                }
            }
            g
        });
        let g_lo: [Mat; 2] = [g_up[0].inverse(), g_up[1].inverse()];

        let lower_label = |mats: &[Mat2; 4], ginv: &Mat| -> [Mat2; 4] {
            std::array::from_fn(|n| {
                mat2(|a, b| {
                    let mut acc = Scalar::zero();
                    for k in 0..4 {
                        let c = ginv.get(n, k);
                        if c.is_zero() {
                            continue;
                        }
                        acc = &acc + &(c * &mats[k][a][b]);
                    }
                    acc
                })
            })
        };
        let sigma_bar_lo = [
            lower_label(&sigma_bar[0], &g_lo[0]),
            lower_label(&sigma_bar[1], &g_lo[1]),
        ];
        let sigma_lo = [
            lower_label(&sigma, &g_lo[0]),
            lower_label(&sigma, &g_lo[1]),
        ];

        LorentzData {
            eps_lo,
            eps_up,
            eps_dot_lo,
            eps_dot_up,
            sigma,
            r_spinor,
            r_spinor_dot,
            sigma_bar,
            sigma_bar_lo,
            sigma_lo,
            g_up,
            g_lo,
        }
    }

    fn build_sigma_bar_family(
        sign: Sign,
        eps_lo: &Mat2,
        eps_up: &Mat2,
        eps_dot_up: &Mat2,
        sigma: &[Mat2; 4],
        r_spinor: &[R4; 2],
    ) -> [Mat2; 4] {
        // Value table V[l, r, n, s'] of the dotted functional of the family
        // opposite to `sign` on an undotted generator with (lower, upper)
        // indices (n, s'):
        //   V = q^(sign/2) * sum_{x,y} eps_lo[r][x] eps_up[y][l] R^{-sign}[s', x, y, n]
        let pref = Scalar::q_half_pow(sign.exponent());
        let r_opp = &r_spinor[sign.other().index()];
        let v = |l: usize, r: usize, n: usize, sp: usize| -> Scalar {
            let mut acc = Scalar::zero();
            for x in 0..2 {
                if eps_lo[r][x].is_zero() {
                    continue;
                }
                for y in 0..2 {
                    if eps_up[y][l].is_zero() {
                        continue;
                    }
                    let rv = r4_get(r_opp, sp, x, y, n);
                    if rv.is_zero() {
                        continue;
                    }
                    acc = &acc + &(&(&eps_lo[r][x] * &eps_up[y][l]) * rv);
                }
            }
            &pref * &acc
        };
        std::array::from_fn(|big_i| {
            mat2(|alpha_dot, beta| {
                let mut acc = Scalar::zero();
                for l in 0..2 {
                    if eps_dot_up[alpha_dot][l].is_zero() {
                        continue;
                    }
                    for n in 0..2 {
                        if eps_up[n][beta].is_zero() {
                            continue;
                        }
                        for r in 0..2 {
                            for sp in 0..2 {
                                if sigma[big_i][sp][r].is_zero() {
                                    continue;
                                }
                                let term = &(&eps_dot_up[alpha_dot][l] * &v(l, r, n, sp))
                                    * &(&eps_up[n][beta] * &sigma[big_i][sp][r]);
                                acc = &acc + &term;
                            }
                        }
                    }
                }
                acc
            })
        })
    }

    // ---- Tensor views of the constants ----

    pub fn eps_lo_tensor(&self) -> Tensor {
        mat2_to_tensor(&self.eps_lo, IndexKind::SpinorLower, IndexKind::SpinorLower)
    }

    pub fn eps_up_tensor(&self) -> Tensor {
        mat2_to_tensor(&self.eps_up, IndexKind::SpinorUpper, IndexKind::SpinorUpper)
    }

    pub fn eps_dot_lo_tensor(&self) -> Tensor {
        mat2_to_tensor(&self.eps_dot_lo, IndexKind::DottedLower, IndexKind::DottedLower)
    }

    pub fn eps_dot_up_tensor(&self) -> Tensor {
        mat2_to_tensor(&self.eps_dot_up, IndexKind::DottedUpper, IndexKind::DottedUpper)
    }

    /// sigma^N as a rank-3 tensor (vector-upper, spinor-lower, dotted-lower).
    pub fn sigma_tensor(&self) -> Tensor {
        Tensor::from_fn(
            vec![
                IndexKind::VectorUpper,
                IndexKind::SpinorLower,
                IndexKind::DottedLower,
            ],
            |idx| self.sigma[idx[0]][idx[1]][idx[2]].clone(),
        )
    }

    /// The spinor R-matrix of the given family as a rank-4 tensor
    /// (upper, upper, lower, lower).
    pub fn r_spinor_tensor(&self, sign: Sign) -> Tensor {
        let r = &self.r_spinor[sign.index()];
        Tensor::from_fn(
            vec![
                IndexKind::SpinorUpper,
                IndexKind::SpinorUpper,
                IndexKind::SpinorLower,
                IndexKind::SpinorLower,
            ],
            |idx| r4_get(r, idx[0], idx[1], idx[2], idx[3]).clone(),
        )
    }

    pub fn r_spinor_entry(&self, sign: Sign, u1: usize, u2: usize, l1: usize, l2: usize) -> &Scalar {
        r4_get(&self.r_spinor[sign.index()], u1, u2, l1, l2)
    }

    pub fn r_spinor_dot_entry(
        &self,
        sign: Sign,
        u1: usize,
        u2: usize,
        l1: usize,
        l2: usize,
    ) -> &Scalar {
        r4_get(&self.r_spinor_dot[sign.index()], u1, u2, l1, l2)
    }

    /// sigma-bar^I (upper label) as a rank-3 tensor
    /// (vector-upper, dotted-upper, spinor-upper).
    pub fn sigma_bar_tensor(&self, sign: Sign) -> Tensor {
        let m = &self.sigma_bar[sign.index()];
        Tensor::from_fn(
            vec![
                IndexKind::VectorUpper,
                IndexKind::DottedUpper,
                IndexKind::SpinorUpper,
            ],
            |idx| m[idx[0]][idx[1]][idx[2]].clone(),
        )
    }

    /// sigma-bar with the vector label lowered, as a rank-3 tensor
    /// (vector-lower, dotted-upper, spinor-upper).
    pub fn sigma_bar_lo_tensor(&self, sign: Sign) -> Tensor {
        let m = &self.sigma_bar_lo[sign.index()];
        Tensor::from_fn(
            vec![
                IndexKind::VectorLower,
                IndexKind::DottedUpper,
                IndexKind::SpinorUpper,
            ],
            |idx| m[idx[0]][idx[1]][idx[2]].clone(),
        )
    }

    /// The quantum metric as a rank-2 tensor (vector-upper, vector-upper).
    pub fn metric_tensor(&self, sign: Sign) -> Tensor {
        let g = &self.g_up[sign.index()];
        Tensor::from_fn(vec![IndexKind::VectorUpper, IndexKind::VectorUpper], |idx| {
            g.get(idx[0], idx[1]).clone()
        })
    }

    /// The inverse metric as a rank-2 tensor (vector-lower, vector-lower).
    pub fn metric_inverse_tensor(&self, sign: Sign) -> Tensor {
        let g = &self.g_lo[sign.index()];
        Tensor::from_fn(vec![IndexKind::VectorLower, IndexKind::VectorLower], |idx| {
            g.get(idx[0], idx[1]).clone()
        })
    }

    /// Second form of the metric: (1/Q) eps_dot_lo[n][c] sigma_bar^I[c][a]
    /// sigma^J[a][b] eps_dot_up[n][b]. Must agree with `g_up`.
    pub fn metric_second_trace(&self, sign: Sign) -> Mat {
        let sb = &self.sigma_bar[sign.index()];
        let q_inv = Scalar::big_q().inv().expect("Q nonzero");
        let mut g = Mat::zeros(4, 4);
        for big_i in 0..4 {
            for big_j in 0..4 {
                let mut acc = Scalar::zero();
                for n in 0..2 {
                    for c in 0..2 {
                        if self.eps_dot_lo[n][c].is_zero() {
                            continue;
                        }
                        for a in 0..2 {
                            for b in 0..2 {
                                let term = &(&self.eps_dot_lo[n][c] * &sb[big_i][c][a])
                                    * &(&self.sigma[big_j][a][b] * &self.eps_dot_up[n][b]);
                                acc = &acc + &term;
                            }
                        }
                    }
                }
                g.set(big_i, big_j, &acc * &q_inv);
            }
        }
        g
    }

    /// Inverse-metric trace form: (1/Q) eps_dot_lo[n][c] sigma_bar_lo[J][c][a]
    /// sigma_lo[I][a][b] eps_dot_up[n][b]. Must agree with `g_lo`.
    pub fn metric_inverse_trace(&self, sign: Sign) -> Mat {
        let sb = &self.sigma_bar_lo[sign.index()];
        let slo = &self.sigma_lo[sign.index()];
        let q_inv = Scalar::big_q().inv().expect("Q nonzero");
        let mut g = Mat::zeros(4, 4);
        for big_i in 0..4 {
            for big_j in 0..4 {
                let mut acc = Scalar::zero();
                for n in 0..2 {
                    for c in 0..2 {
                        if self.eps_dot_lo[n][c].is_zero() {
                            continue;
                        }
                        for a in 0..2 {
                            for b in 0..2 {
                                let term = &(&self.eps_dot_lo[n][c] * &sb[big_j][c][a])
                                    * &(&slo[big_i][a][b] * &self.eps_dot_up[n][b]);
                                acc = &acc + &term;
                            }
                        }
                    }
                }
                g.set(big_i, big_j, &acc * &q_inv);
            }
        }
        g
    }
}

impl Default for LorentzData {
    fn default() -> Self {
        LorentzData::new()
    }
}

fn mat2_to_tensor(m: &Mat2, k0: IndexKind, k1: IndexKind) -> Tensor {
    Tensor::from_fn(vec![k0, k1], |idx| m[idx[0]][idx[1]].clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q_half(p: i64) -> Scalar {
        Scalar::q_half_pow(p)
    }

    #[test]
    fn eps_inverse_pair() {
        // eps_lo[a][d] eps_up[d][b] = delta_a^b, and the dotted analog.
        let ld = LorentzData::new();
        for a in 0..2 {
            for b in 0..2 {
                let mut acc = Scalar::zero();
                let mut acc_dot = Scalar::zero();
                for d in 0..2 {
                    acc = &acc + &(&ld.eps_lo[a][d] * &ld.eps_up[d][b]);
                    acc_dot = &acc_dot + &(&ld.eps_dot_lo[a][d] * &ld.eps_dot_up[d][b]);
                }
                let expect = if a == b { Scalar::one() } else { Scalar::zero() };
                assert_eq!(acc, expect);
                assert_eq!(acc_dot, expect);
            }
        }
    }

    #[test]
    fn eps_full_contraction_is_minus_q() {
        let ld = LorentzData::new();
        let mut acc = Scalar::zero();
        for a in 0..2 {
            for b in 0..2 {
                acc = &acc + &(&ld.eps_lo[a][b] * &ld.eps_up[a][b]);
            }
        }
        assert_eq!(acc, -Scalar::big_q());
    }

    #[test]
    fn sigma_three_entries() {
        let ld = LorentzData::new();
        assert_eq!(ld.sigma[3][0][0], Scalar::q_pow(1));
        assert_eq!(ld.sigma[3][1][1], -Scalar::q_pow(-1));
    }

    #[test]
    fn contract_raises_sigma_zero() {
        // sigma^{0 a}_{b} = eps_up[r][a] sigma^0[r][b] has the entries of
        // eps_up read with swapped slots.
        let ld = LorentzData::new();
        let sigma = ld.sigma_tensor();
        let eps_up = ld.eps_up_tensor();
        let raised = eps_up.contract(&sigma, &[(0, 1)]).unwrap();
        // raised signature: (SpinorUpper from eps, VectorUpper, DottedLower)
        assert_eq!(
            raised.signature(),
            &[
                IndexKind::SpinorUpper,
                IndexKind::VectorUpper,
                IndexKind::DottedLower
            ]
        );
        for a in 0..2 {
            for b in 0..2 {
                assert_eq!(raised.get(&[a, 0, b]), &ld.eps_up[b][a]);
            }
        }
    }

    #[test]
    fn contract_rejects_family_mismatch() {
        let ld = LorentzData::new();
        let eps_up = ld.eps_up_tensor();
        let eps_dot_lo = ld.eps_dot_lo_tensor();
        let err = eps_up.contract(&eps_dot_lo, &[(0, 0)]).unwrap_err();
        assert!(matches!(err, TensorError::FamilyMismatch { .. }));
    }

    #[test]
    fn contract_rejects_variance_mismatch() {
        let ld = LorentzData::new();
        let eps_up = ld.eps_up_tensor();
        let err = eps_up.contract(&eps_up.clone(), &[(0, 0)]).unwrap_err();
        assert!(matches!(err, TensorError::VarianceMismatch { .. }));
    }

    #[test]
    fn spinor_r_hecke_and_inverse() {
        let ld = LorentzData::new();
        for sign in [Sign::Plus, Sign::Minus] {
            let r = rank4_to_mat(&ld.r_spinor_tensor(sign));
            let id = Mat::identity(4);
            let a2 = Scalar::q_pow(2 * sign.exponent());
            // (R + a^{+-2})(R - 1) = 0
            let h = r.add(&id.scale(&a2)).mul(&r.sub(&id));
            assert!(h.is_zero(), "Hecke fails for {:?}", sign);
        }
        let rp = rank4_to_mat(&ld.r_spinor_tensor(Sign::Plus));
        let rm = rank4_to_mat(&ld.r_spinor_tensor(Sign::Minus));
        assert_eq!(rp.mul(&rm), Mat::identity(4));
    }

    #[test]
    fn spinor_r_entry_example() {
        // R^{+ 1 2}_{1 2} = 1 + q eps^{12} eps_{12} = 0 (1-based indices).
        let ld = LorentzData::new();
        assert!(ld.r_spinor_entry(Sign::Plus, 0, 1, 0, 1).is_zero());
    }

    #[test]
    fn spinor_yang_baxter() {
        let ld = LorentzData::new();
        assert!(yang_baxter_holds(&ld.r_spinor_tensor(Sign::Plus), 2));
        assert!(yang_baxter_holds(&ld.r_spinor_tensor(Sign::Minus), 2));
    }

    #[test]
    fn sigma_bar_zero_is_diagonal() {
        // sigma-bar^0 = q^(-3/2) Id, so the label-lowered sigma-bar_0 = -Id.
        let ld = LorentzData::new();
        let sb0 = &ld.sigma_bar[Sign::Plus.index()][0];
        assert_eq!(sb0[0][0], q_half(-3));
        assert_eq!(sb0[1][1], q_half(-3));
        assert!(sb0[0][1].is_zero() && sb0[1][0].is_zero());
        let sb0_lo = &ld.sigma_bar_lo[Sign::Plus.index()][0];
        assert_eq!(sb0_lo[0][0], -Scalar::one());
        assert_eq!(sb0_lo[1][1], -Scalar::one());
    }

    #[test]
    fn sigma_bar_lowered_trace() {
        // Lowering both spinor indices of sigma-bar_N and tracing gives
        // -Q delta_N^0.
        let ld = LorentzData::new();
        for n in 0..4 {
            let sb = &ld.sigma_bar_lo[Sign::Plus.index()][n];
            let mut tr = Scalar::zero();
            for r in 0..2 {
                for x in 0..2 {
                    for y in 0..2 {
                        tr = &tr
                            + &(&(&ld.eps_dot_lo[r][x] * &sb[x][y]) * &ld.eps_lo[y][r]);
                    }
                }
            }
            let expect = if n == 0 { -Scalar::big_q() } else { Scalar::zero() };
            assert_eq!(tr, expect, "trace of sigma-bar_{}", n);
        }
    }

    #[test]
    fn sigma_raised_trace() {
        // Raising both spinor indices of sigma^N and tracing gives Q delta_0^N.
        let ld = LorentzData::new();
        for n in 0..4 {
            let mut tr = Scalar::zero();
            for a in 0..2 {
                for r in 0..2 {
                    for b in 0..2 {
                        tr = &tr
                            + &(&(&ld.sigma[n][r][b] * &ld.eps_up[r][a]) * &ld.eps_dot_up[a][b]);
                    }
                }
            }
            let expect = if n == 0 { Scalar::big_q() } else { Scalar::zero() };
            assert_eq!(tr, expect, "trace of raised sigma^{}", n);
        }
    }

    #[test]
    fn metric_printed_entries() {
        let ld = LorentzData::new();
        let g = &ld.g_up[Sign::Plus.index()];
        let dq = &Scalar::q_pow(1) - &Scalar::q_pow(-1);
        let g12 = &(&(-Scalar::i()) * &q_half(1)) * &(&dq / &Scalar::big_q());
        assert_eq!(g.get(0, 0), &-q_half(-3));
        assert_eq!(g.get(1, 1), &q_half(1));
        assert_eq!(g.get(2, 2), &q_half(1));
        assert_eq!(g.get(3, 3), &q_half(1));
        assert_eq!(g.get(1, 2), &g12);
        assert_eq!(g.get(2, 1), &-g12);
        for (i, j) in [(0, 1), (0, 2), (0, 3), (1, 0), (2, 0), (3, 0), (1, 3), (3, 1), (2, 3), (3, 2)] {
            assert!(g.get(i, j).is_zero(), "G^{{{}{}}} should vanish", i, j);
        }
    }

    #[test]
    fn metric_inverse_printed_entries() {
        let ld = LorentzData::new();
        let g = &ld.g_lo[Sign::Plus.index()];
        let dq = &Scalar::q_pow(1) - &Scalar::q_pow(-1);
        let quarter = Scalar::from_ratio(1, 4);
        let q2 = &Scalar::big_q() * &Scalar::big_q();
        let g11 = &(&q_half(-1) * &q2) * &quarter;
        let g12 = &(&(&Scalar::i() * &q_half(-1)) * &(&dq * &Scalar::big_q())) * &quarter;
        assert_eq!(g.get(0, 0), &-q_half(3));
        assert_eq!(g.get(1, 1), &g11);
        assert_eq!(g.get(2, 2), &g11);
        assert_eq!(g.get(3, 3), &q_half(-1));
        assert_eq!(g.get(1, 2), &g12);
        assert_eq!(g.get(2, 1), &-g12);
    }

    #[test]
    fn metric_contraction_is_identity() {
        // G^{ik} G_{kj} = delta^i_j via the public contract API; the 1-2
        // block reduces to (Q^2 - (q - q^-1)^2)/4 = 1, checked separately.
        let ld = LorentzData::new();
        let dq = &Scalar::q_pow(1) - &Scalar::q_pow(-1);
        let lhs = &(&(&Scalar::big_q() * &Scalar::big_q()) - &(&dq * &dq)) * &Scalar::from_ratio(1, 4);
        assert_eq!(lhs, Scalar::one());

        let g = ld.metric_tensor(Sign::Plus);
        let ginv = ld.metric_inverse_tensor(Sign::Plus);
        let prod = g.contract(&ginv, &[(1, 0)]).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == j { Scalar::one() } else { Scalar::zero() };
                assert_eq!(prod.get(&[i, j]), &expect);
            }
        }
    }

    #[test]
    fn metric_trace_forms_agree() {
        let ld = LorentzData::new();
        for sign in [Sign::Plus, Sign::Minus] {
            let second = ld.metric_second_trace(sign);
            assert_eq!(&ld.g_up[sign.index()], &second);
            let inv_trace = ld.metric_inverse_trace(sign);
            assert_eq!(&ld.g_lo[sign.index()], &inv_trace);
        }
    }

    #[test]
    fn metric_hermitian_under_star_and_swap() {
        let ld = LorentzData::new();
        let g = &ld.g_up[Sign::Plus.index()];
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(&g.get(i, j).star(), g.get(j, i));
            }
        }
    }

    #[test]
    fn metric_classical_limit_is_minkowski() {
        let ld = LorentzData::new();
        for sign in [Sign::Plus, Sign::Minus] {
            let g = &ld.g_up[sign.index()];
            for i in 0..4 {
                for j in 0..4 {
                    let v = g.get(i, j).classical_limit().unwrap();
                    let expect = match (i, j) {
                        (0, 0) => Scalar::from_int(-1),
                        (a, b) if a == b => Scalar::one(),
                        _ => Scalar::zero(),
                    };
                    assert_eq!(v, expect, "entry ({}, {}) of {:?}", i, j, sign);
                }
            }
        }
    }

    #[test]
    fn completeness_relations() {
        let ld = LorentzData::new();
        // sigma^{I b.}_a sigma-bar_{I r.}^{s} = Q delta^s_a delta_r^b
        for a in 0..2 {
            for bdot in 0..2 {
                for rdot in 0..2 {
                    for s in 0..2 {
                        let mut acc = Scalar::zero();
                        for big_i in 0..4 {
                            // raise the dotted index of sigma^I
                            for y in 0..2 {
                                // lower the dotted index of sigma-bar_I
                                for x in 0..2 {
                                    let term = &(&ld.eps_dot_up[bdot][y] * &ld.sigma[big_i][a][y])
                                        * &(&ld.eps_dot_lo[rdot][x]
                                            * &ld.sigma_bar_lo[Sign::Plus.index()][big_i][x][s]);
                                    acc = &acc + &term;
                                }
                            }
                        }
                        let expect = if a == s && bdot == rdot {
                            Scalar::big_q()
                        } else {
                            Scalar::zero()
                        };
                        assert_eq!(acc, expect, "completeness at {} {} {} {}", a, bdot, rdot, s);
                    }
                }
            }
        }
    }

    #[test]
    fn completeness_lowered_family() {
        // sigma_{+I}^{a}_{b.} sigma-bar^{I r.}_{s} = Q delta_s^a delta^r_b
        let ld = LorentzData::new();
        for sign in [Sign::Plus, Sign::Minus] {
            for a in 0..2 {
                for bdot in 0..2 {
                    for rdot in 0..2 {
                        for s in 0..2 {
                            let mut acc = Scalar::zero();
                            for big_i in 0..4 {
                                for r in 0..2 {
                                    for y in 0..2 {
                                        let term = &(&ld.eps_up[r][a]
                                            * &ld.sigma_lo[sign.index()][big_i][r][bdot])
                                            * &(&ld.sigma_bar[sign.index()][big_i][rdot][y]
                                                * &ld.eps_lo[y][s]);
                                        acc = &acc + &term;
                                    }
                                }
                            }
                            let expect = if a == s && bdot == rdot {
                                Scalar::big_q()
                            } else {
                                Scalar::zero()
                            };
                            assert_eq!(acc, expect, "{:?} {} {} {} {}", sign, a, bdot, rdot, s);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn tensor_json_and_pretty_are_stable() {
        let ld = LorentzData::new();
        let eps = ld.eps_lo_tensor();
        let json = eps.to_json();
        assert!(json.contains("\"signature\": [\"SpinorLower\", \"SpinorLower\"]"));
        assert!(json.contains("-q^(-1/2)"));
        let p1 = eps.pretty();
        let p2 = eps.pretty();
        assert_eq!(p1, p2);
    }
}
