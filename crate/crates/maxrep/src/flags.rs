//! Partial flags in `V = Λⁿ R²ⁿ`, partial Iwasawa cocycles and Gromov products.

use crate::error::{Error, Result};
use crate::linalg::{hstack, orthogonal_complement, orthonormalize, singular_values, subspace_excess};
use crate::positivity::{is_nonzero_psd, TOL_POSITIVE};
use crate::wedge::{annihilator, basis, basis_wedge, wedge_of_columns};
use nalgebra::{DMatrix, DVector};

/// Relative threshold on the smallest singular value of stacked bases.
pub const TOL_TRANSVERSE: f64 = 1e-9;

/// A symmetric index set `I ⊂ {1, …, d−1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSet {
    d: usize,
    indices: Vec<usize>,
}

impl IndexSet {
    pub fn new(d: usize, mut indices: Vec<usize>) -> Result<Self> {
        indices.sort_unstable();
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Domain("repeated index".into()));
        }
        if indices.iter().any(|&i| i == 0 || i >= d) {
            return Err(Error::Domain(format!("indices must lie in (0, {d})")));
        }
        if indices.iter().any(|&i| indices.binary_search(&(d - i)).is_err()) {
            return Err(Error::Domain("index set is not symmetric".into()));
        }
        Ok(IndexSet { d, indices })
    }

    /// `{1, d−1}`.
    pub fn lines(d: usize) -> Self {
        IndexSet { d, indices: vec![1, d - 1] }
    }

    /// `{1, 2, d−2, d−1}`.
    pub fn planes(d: usize) -> Self {
        IndexSet { d, indices: vec![1, 2, d - 2, d - 1] }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }
}

/// Nested subspaces `F_i`, `i ∈ I`, each held by an orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Flag {
    index_set: IndexSet,
    subspaces: Vec<DMatrix<f64>>,
}

impl Flag {
    /// Validates dimensions, ranks and nesting; bases are orthonormalised.
    pub fn new(index_set: IndexSet, bases: Vec<DMatrix<f64>>) -> Result<Self> {
        if bases.len() != index_set.indices().len() {
            return Err(Error::Dimension("one basis per index expected".into()));
        }
        let mut subspaces = Vec::with_capacity(bases.len());
        for (b, &i) in bases.iter().zip(index_set.indices()) {
            if b.nrows() != index_set.d() || b.ncols() != i {
                return Err(Error::Dimension(format!("F_{i} needs a {}x{i} basis", index_set.d())));
            }
            if !crate::linalg::has_full_column_rank(b, 1e-10) {
                return Err(Error::DegenerateInput(format!("F_{i} basis is rank deficient")));
            }
            subspaces.push(orthonormalize(b));
        }
        for w in subspaces.windows(2) {
            if subspace_excess(&w[0], &w[1]) > 1e-8 {
                return Err(Error::Domain("flag subspaces are not nested".into()));
            }
        }
        Ok(Flag { index_set, subspaces })
    }

    /// Flag of spans of the leading columns of an invertible `d × d` matrix.
    pub fn from_columns(index_set: IndexSet, m: &DMatrix<f64>) -> Result<Self> {
        let bases = index_set.indices().iter().map(|&i| m.columns(0, i).into_owned()).collect();
        Flag::new(index_set, bases)
    }

    /// `span(v) ⊂ Ann(span(v))` for a vector isotropic under `ω′`.
    pub fn line_and_annihilator(v: &DVector<f64>) -> Result<Self> {
        let d = v.len();
        let line = DMatrix::from_column_slice(d, 1, v.as_slice());
        let ann = annihilator(&line)?;
        Flag::new(IndexSet::lines(d), vec![line, ann])
    }

    pub fn index_set(&self) -> &IndexSet {
        &self.index_set
    }

    pub fn subspace(&self, i: usize) -> Option<&DMatrix<f64>> {
        self.index_set.indices().iter().position(|&j| j == i).map(|p| &self.subspaces[p])
    }

    /// Image under a linear map of `V`.
    pub fn transform(&self, g: &DMatrix<f64>) -> Result<Flag> {
        let bases = self.subspaces.iter().map(|b| g * b).collect();
        Flag::new(self.index_set.clone(), bases)
    }
}

/// Values `ω_i`, `i ∈ I`, of an element of `𝔞_I`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialCartanValue {
    pub index_set: IndexSet,
    pub values: Vec<f64>,
}

impl PartialCartanValue {
    pub fn get(&self, i: usize) -> Option<f64> {
        self.index_set.indices().iter().position(|&j| j == i).map(|p| self.values[p])
    }
}

/// `ω_i(B_I(g, F)) = log ‖Λⁱg · v_i‖ / ‖v_i‖` for each `i ∈ I`, computed as
/// the sum of log singular values of `g` restricted to `F_i`.
pub fn iwasawa_cocycle(g: &DMatrix<f64>, f: &Flag) -> Result<PartialCartanValue> {
    let d = f.index_set.d();
    if g.nrows() != d || g.ncols() != d {
        return Err(Error::Dimension("cocycle matrix does not act on the flag space".into()));
    }
    let mut values = Vec::with_capacity(f.subspaces.len());
    for q in &f.subspaces {
        let s = singular_values(&(g * q));
        if s.iter().any(|&x| !(x > 0.0)) {
            return Err(Error::DegenerateInput("map collapses a flag subspace".into()));
        }
        values.push(s.iter().map(|x| x.ln()).sum());
    }
    Ok(PartialCartanValue { index_set: f.index_set.clone(), values })
}

fn check_pair(f1: &Flag, f2: &Flag) -> Result<()> {
    if f1.index_set != f2.index_set {
        return Err(Error::Domain("flags carry different index sets".into()));
    }
    Ok(())
}

fn transverse_stack(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<()> {
    let s = singular_values(&hstack(a, b));
    if !(s[s.len() - 1] >= TOL_TRANSVERSE * s[0]) {
        return Err(Error::NotTransverse);
    }
    Ok(())
}

/// Determinant form: `log |det(Q₁ᵀ Q₂′)|` with `Q₁` orthonormal for `A` and
/// `Q₂′` orthonormal for `B^⊥`, where `dim A + dim B = d`.
fn det_form(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<f64> {
    transverse_stack(a, b)?;
    let comp = orthogonal_complement(b);
    let det = (a.transpose() * comp).determinant().abs();
    Ok(det.ln())
}

/// `ω_s([F₁, F₂]_I)` for each `s ∈ I`. Values for `s ≤ d/2` use the
/// determinant form on `((F₁)_s, (F₂)_{d−s})`; the remaining ones come from
/// `ω_{d−s}([F₂, F₁])`.
pub fn gromov_product(f1: &Flag, f2: &Flag) -> Result<PartialCartanValue> {
    check_pair(f1, f2)?;
    let d = f1.index_set.d();
    let mut values = Vec::new();
    for &s in f1.index_set.indices() {
        let v = if 2 * s <= d {
            det_form(f1.subspace(s).unwrap(), f2.subspace(d - s).unwrap())?
        } else {
            det_form(f2.subspace(d - s).unwrap(), f1.subspace(s).unwrap())?
        };
        values.push(v);
    }
    Ok(PartialCartanValue { index_set: f1.index_set.clone(), values })
}

/// Wedge-norm form `log ‖v₁ ∧ v₂‖` with unit `v₁ ∈ Λˢ(F₁)_s` and
/// `v₂ ∈ Λ^{d−s}(F₂)_{d−s}`, i.e. `log |det[Q₁ | Q₂]|` for orthonormal bases.
pub fn gromov_product_wedge_form(f1: &Flag, f2: &Flag) -> Result<PartialCartanValue> {
    check_pair(f1, f2)?;
    let d = f1.index_set.d();
    let mut values = Vec::new();
    for &s in f1.index_set.indices() {
        let a = f1.subspace(s).unwrap();
        let b = f2.subspace(d - s).unwrap();
        transverse_stack(a, b)?;
        values.push(hstack(a, b).determinant().abs().ln());
    }
    Ok(PartialCartanValue { index_set: f1.index_set.clone(), values })
}

/// Which standard Lagrangian a tangent-decorated flag is anchored at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `v = e₁∧⋯∧eₙ`, tangent direction from `U_{tN}`.
    Lower,
    /// `v = eₙ₊₁∧⋯∧e₂ₙ`, tangent direction from `U^{tN}`.
    Upper,
}

/// The pair `(v, w)` with `w = d/dt|₀ Λⁿ(U_{tN}) v` (or `U^{tN}` on the upper side).
pub fn tangent_pair(side: Side, nmat: &DMatrix<f64>) -> Result<(DVector<f64>, DVector<f64>)> {
    let n = nmat.nrows();
    if nmat.ncols() != n {
        return Err(Error::Dimension("tangent matrix must be square".into()));
    }
    let (anchor, other): (Vec<usize>, usize) = match side {
        Side::Lower => ((0..n).collect(), n),
        Side::Upper => ((n..2 * n).collect(), 0),
    };
    let v = basis_wedge(n, &anchor)?;
    let mut w = DVector::zeros(v.len());
    for i in 0..n {
        let mut cols = DMatrix::zeros(2 * n, n);
        for (j, &a) in anchor.iter().enumerate() {
            cols[(a, j)] = 1.0;
        }
        for k in 0..2 * n {
            cols[(k, i)] = 0.0;
        }
        for k in 0..n {
            cols[(other + k, i)] = nmat[(k, i)];
        }
        w += wedge_of_columns(&cols)?;
    }
    Ok((v, w))
}

/// `Span(v) ⊂ Span(v, w) ⊂ Ann(Span(v, w)) ⊂ Ann(Span(v))` for `n ≥ 3`.
pub fn tangent_decorated_flag(side: Side, nmat: &DMatrix<f64>) -> Result<Flag> {
    let n = nmat.nrows();
    if n < 3 {
        return Err(Error::UnsupportedRank(n));
    }
    if !is_nonzero_psd(nmat, TOL_POSITIVE)? {
        return Err(Error::Domain("tangent matrix must be positive semidefinite and nonzero".into()));
    }
    let d = basis(n)?.dim();
    let (v, w) = tangent_pair(side, nmat)?;
    let line = DMatrix::from_column_slice(d, 1, v.as_slice());
    let plane = hstack(&line, &DMatrix::from_column_slice(d, 1, w.as_slice()));
    let ann_plane = annihilator(&plane)?;
    let ann_line = annihilator(&line)?;
    Flag::new(IndexSet::planes(d), vec![line, plane, ann_plane, ann_line])
}

/// `tr(NM) / (‖M‖₂ ‖N‖₂)` with Frobenius norms.
pub fn gromov_closed_form(nmat: &DMatrix<f64>, m: &DMatrix<f64>) -> Result<f64> {
    if nmat.shape() != m.shape() || m.nrows() != m.ncols() {
        return Err(Error::Dimension("M and N must be square of equal size".into()));
    }
    let nn = nmat.norm();
    let mn = m.norm();
    if nn == 0.0 || mn == 0.0 {
        return Err(Error::Domain("M and N must be nonzero".into()));
    }
    let ratio = (nmat * m).trace() / (mn * nn);
    if !(ratio > TOL_TRANSVERSE) {
        return Err(Error::NotTransverse);
    }
    Ok(ratio)
}
