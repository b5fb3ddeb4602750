//! The exterior power `V = Λⁿ R²ⁿ` with its lexicographic basis of
//! `n`-subsets, the wedge representation, Plücker vectors, the top-degree
//! pairing `ω′`, the Hodge star `P` and annihilators.
//!
//! Basis vectors `e_I` are indexed by sorted subsets `I ⊂ {0, …, 2n−1}`
//! (zero-based); signs follow from sorting-permutation parity.

use crate::error::{Error, Result};
use crate::linalg::{det_in_place, has_full_column_rank, normalize_projective, orthogonal_complement, orthonormalize, singular_values};
use crate::positivity::Lagrangian;
use crate::sp::{cartan_projection, SymplecticMatrix, WeightFunctional};
use nalgebra::{DMatrix, DVector};
use std::sync::OnceLock;

/// Largest supported half-rank; `C(10, 5) = 252`.
pub const MAX_N: usize = 5;

/// Coordinates over the lexicographic basis.
pub type WedgeVector = DVector<f64>;

/// Lexicographic basis of `n`-subsets of `{0, …, 2n−1}`.
#[derive(Debug)]
pub struct MultiIndexBasis {
    n: usize,
    indices: Vec<Vec<usize>>,
    masks: Vec<u32>,
    position: Vec<usize>,
    complement: Vec<usize>,
    complement_sign: Vec<f64>,
}

fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            if m - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, m, k, &mut Vec::new(), &mut out);
    out
}

/// Sign of the permutation sorting the concatenation `I ++ J` of disjoint sets.
fn concat_sign(i: u32, j: u32) -> f64 {
    let mut inversions = 0u32;
    let mut rest = i;
    while rest != 0 {
        let b = rest.trailing_zeros();
        inversions += (j & ((1u32 << b) - 1)).count_ones();
        rest &= rest - 1;
    }
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

impl MultiIndexBasis {
    fn build(n: usize) -> Self {
        let indices = subsets(2 * n, n);
        let masks: Vec<u32> = indices.iter().map(|s| s.iter().map(|&i| 1u32 << i).sum()).collect();
        let full = (1u32 << (2 * n)) - 1;
        let mut position = vec![usize::MAX; 1usize << (2 * n)];
        for (p, &m) in masks.iter().enumerate() {
            position[m as usize] = p;
        }
        let complement: Vec<usize> = masks.iter().map(|&m| position[(full ^ m) as usize]).collect();
        let complement_sign = masks.iter().map(|&m| concat_sign(m, full ^ m)).collect();
        MultiIndexBasis { n, indices, masks, position, complement, complement_sign }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `d = C(2n, n)`.
    pub fn dim(&self) -> usize {
        self.indices.len()
    }

    pub fn indices(&self) -> &[Vec<usize>] {
        &self.indices
    }

    /// Position of the subset (any order, distinct entries) in the basis.
    pub fn position_of(&self, subset: &[usize]) -> Option<usize> {
        let mut mask = 0u32;
        for &i in subset {
            if i >= 2 * self.n || mask & (1 << i) != 0 {
                return None;
            }
            mask |= 1 << i;
        }
        match self.position.get(mask as usize) {
            Some(&p) if p != usize::MAX => Some(p),
            _ => None,
        }
    }

    /// `ω′(e_I, e_J)`: the sign of `I ++ J` when disjoint, otherwise 0.
    pub fn pairing_sign(&self, a: usize, b: usize) -> f64 {
        if self.complement[a] == b {
            self.complement_sign[a]
        } else {
            0.0
        }
    }

    /// Index of the complementary subset.
    pub fn complement(&self, a: usize) -> usize {
        self.complement[a]
    }

    fn mask(&self, a: usize) -> u32 {
        self.masks[a]
    }
}

/// Shared basis table for `1 ≤ n ≤ 5`.
pub fn basis(n: usize) -> Result<&'static MultiIndexBasis> {
    static TABLES: [OnceLock<MultiIndexBasis>; MAX_N + 1] =
        [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];
    if n == 0 {
        return Err(Error::Dimension("n must be positive".into()));
    }
    if n > MAX_N {
        return Err(Error::ResourceLimit(format!("wedge space capped at n <= {MAX_N}, got {n}")));
    }
    Ok(TABLES[n].get_or_init(|| MultiIndexBasis::build(n)))
}

fn half_rank_of(rows: usize) -> Result<usize> {
    if rows == 0 || rows % 2 != 0 {
        return Err(Error::Dimension(format!("expected 2n rows, got {rows}")));
    }
    Ok(rows / 2)
}

/// `Λⁿ(g)`: entry `(I, J)` is the minor of `g` on rows `I`, columns `J`.
pub fn wedge_power_matrix(g: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if g.nrows() != g.ncols() {
        return Err(Error::Dimension("wedge power needs a square matrix".into()));
    }
    let n = half_rank_of(g.nrows())?;
    let b = basis(n)?;
    let d = b.dim();
    let mut out = DMatrix::zeros(d, d);
    let mut buf = vec![0.0; n * n];
    for (r, rows) in b.indices().iter().enumerate() {
        for (c, cols) in b.indices().iter().enumerate() {
            for (i, &ri) in rows.iter().enumerate() {
                for (j, &cj) in cols.iter().enumerate() {
                    buf[i * n + j] = g[(ri, cj)];
                }
            }
            out[(r, c)] = det_in_place(&mut buf, n);
        }
    }
    Ok(out)
}

/// Wedge of the `n` columns of a `2n × n` matrix (not normalised).
pub fn wedge_of_columns(cols: &DMatrix<f64>) -> Result<WedgeVector> {
    let n = half_rank_of(cols.nrows())?;
    if cols.ncols() != n {
        return Err(Error::Dimension(format!("expected {n} columns, got {}", cols.ncols())));
    }
    let b = basis(n)?;
    let mut buf = vec![0.0; n * n];
    Ok(DVector::from_iterator(
        b.dim(),
        b.indices().iter().map(|rows| {
            for (i, &ri) in rows.iter().enumerate() {
                for j in 0..n {
                    buf[i * n + j] = cols[(ri, j)];
                }
            }
            det_in_place(&mut buf, n)
        }),
    ))
}

/// Plücker vector of the column span of a full-rank `2n × n` basis, unit
/// norm with first nonzero coordinate positive.
pub fn plucker_of_basis(cols: &DMatrix<f64>) -> Result<WedgeVector> {
    if !has_full_column_rank(cols, 1e-12) {
        return Err(Error::DegenerateInput("basis is rank deficient".into()));
    }
    let q = orthonormalize(cols);
    let v = wedge_of_columns(&q)?;
    normalize_projective(&v, 1e-12).ok_or_else(|| Error::DegenerateInput("zero wedge".into()))
}

/// Plücker vector of a Lagrangian.
pub fn plucker(l: &Lagrangian) -> Result<WedgeVector> {
    plucker_of_basis(l.basis())
}

/// Basis vector `e_I` for a subset given in any order; the returned vector
/// carries the sign of the sorting permutation.
pub fn basis_wedge(n: usize, subset: &[usize]) -> Result<WedgeVector> {
    let b = basis(n)?;
    let p = b
        .position_of(subset)
        .ok_or_else(|| Error::Domain(format!("{subset:?} is not an n-subset")))?;
    let mut inversions = 0;
    for i in 0..subset.len() {
        for j in i + 1..subset.len() {
            if subset[i] > subset[j] {
                inversions += 1;
            }
        }
    }
    let mut v = DVector::zeros(b.dim());
    v[p] = if inversions % 2 == 0 { 1.0 } else { -1.0 };
    Ok(v)
}

fn rank_of_dim(d: usize) -> Result<usize> {
    (1..=MAX_N)
        .find(|&n| basis(n).map(|b| b.dim() == d).unwrap_or(false))
        .ok_or_else(|| Error::Dimension(format!("{d} is not C(2n, n) for n <= {MAX_N}")))
}

/// `ω′(v, w) = (v ∧ w) / (e₁ ∧ ⋯ ∧ e₂ₙ)`.
pub fn omega_prime(v: &WedgeVector, w: &WedgeVector) -> Result<f64> {
    if v.len() != w.len() {
        return Err(Error::Dimension("wedge vectors of different length".into()));
    }
    let b = basis(rank_of_dim(v.len())?)?;
    Ok((0..b.dim()).map(|a| v[a] * w[b.complement(a)] * b.complement_sign[a]).sum())
}

/// Gram matrix of `ω′` over the basis.
pub fn omega_prime_gram(n: usize) -> Result<DMatrix<f64>> {
    let b = basis(n)?;
    let d = b.dim();
    Ok(DMatrix::from_fn(d, d, |i, j| b.pairing_sign(i, j)))
}

/// Hodge star `P(e_I) = sign(I, Iᶜ) e_{Iᶜ}`, so that `⟨v, w⟩ = ω′(v, P w)`.
pub fn hodge_star(v: &WedgeVector) -> Result<WedgeVector> {
    let b = basis(rank_of_dim(v.len())?)?;
    let mut out = DVector::zeros(b.dim());
    for a in 0..b.dim() {
        out[b.complement(a)] += b.complement_sign[a] * v[a];
    }
    Ok(out)
}

/// Matrix of the Hodge star.
pub fn hodge_star_matrix(n: usize) -> Result<DMatrix<f64>> {
    let b = basis(n)?;
    let d = b.dim();
    let mut m = DMatrix::zeros(d, d);
    for a in 0..d {
        m[(b.complement(a), a)] = b.complement_sign[a];
    }
    Ok(m)
}

/// Orthonormal basis of `Ann(W) = {w : ω′(w, u) = 0 for all u ∈ W}`,
/// computed as the orthogonal complement of `P(W)`.
pub fn annihilator(w: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = rank_of_dim(w.nrows())?;
    if !has_full_column_rank(w, 1e-10) {
        return Err(Error::DegenerateInput("annihilator of a dependent family".into()));
    }
    let p = hodge_star_matrix(n)?;
    let pw = orthonormalize(&(p * w));
    Ok(orthogonal_complement(&pw))
}

/// Bit mask of a basis element; exposed for diagnostic tests.
pub fn basis_mask(n: usize, a: usize) -> Result<u32> {
    Ok(basis(n)?.mask(a))
}

/// Residuals of the singular-value identities linking `κ_d(Λⁿ g)` to `κ(g)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapResiduals {
    /// `|𝒥₂(κ_d(Λⁿg)) − α(κ(g))|`, relative.
    pub j2_check: f64,
    /// `|ω₁(κ_d(Λⁿg)) − ω_α(κ(g))|`, relative.
    pub omega1_check: f64,
    /// `|σ′₁/σ′₂ − σₙ²|`, relative.
    pub gap1_check: f64,
    /// `|σ′₂/σ′₃ − σₙ₋₁/σₙ|`, relative.
    pub gap2_check: f64,
}

impl GapResiduals {
    pub fn max(&self) -> f64 {
        self.j2_check.max(self.omega1_check).max(self.gap1_check).max(self.gap2_check)
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

/// Evaluates the singular-value identities for `n ≥ 2`.
pub fn singular_gap_identities(g: &SymplecticMatrix) -> Result<GapResiduals> {
    let n = g.n();
    if n < 2 {
        return Err(Error::UnsupportedRank(n));
    }
    let sig = singular_values(g.matrix());
    let wedge = wedge_power_matrix(g.matrix())?;
    let sp = singular_values(&wedge);
    let kappa = cartan_projection(g);
    let alpha = WeightFunctional::Alpha.evaluate(&kappa)?;
    let omega_alpha: f64 = kappa.lambdas().iter().sum();
    let w1 = sp[0].ln();
    let w2 = sp[0].ln() + sp[1].ln();
    Ok(GapResiduals {
        j2_check: rel(2.0 * w1 - w2, alpha),
        omega1_check: rel(w1, omega_alpha),
        gap1_check: rel(sp[0] / sp[1], sig[n - 1] * sig[n - 1]),
        gap2_check: rel(sp[1] / sp[2], sig[n - 2] / sig[n - 1]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_sizes_and_order() {
        for (n, d) in [(1, 2), (2, 6), (3, 20), (4, 70), (5, 252)] {
            let b = basis(n).unwrap();
            assert_eq!(b.dim(), d);
            assert!(b.indices().windows(2).all(|w| w[0] < w[1]));
        }
        assert!(matches!(basis(6), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn wedge_of_identity_and_diagonal() {
        let id = wedge_power_matrix(&DMatrix::identity(6, 6)).unwrap();
        assert_eq!(id, DMatrix::identity(20, 20));
        let (a, b) = (3.0, 0.5);
        let g = DMatrix::from_diagonal(&DVector::from_row_slice(&[a, b, 1.0 / a, 1.0 / b]));
        let w = wedge_power_matrix(&g).unwrap();
        let diag: Vec<f64> = (0..6).map(|i| w[(i, i)]).collect();
        let expected = [a * b, a / a, a / b, b / a, b / b, 1.0 / (a * b)];
        for (x, y) in diag.iter().zip(expected.iter()) {
            assert!((x - y).abs() < 1e-14);
        }
        assert!((w.clone() - DMatrix::from_diagonal(&w.diagonal())).abs().max() == 0.0);
    }

    #[test]
    fn standard_plucker_vectors() {
        let l = Lagrangian::standard(3);
        let v = plucker(&l).unwrap();
        assert!((&v - basis_wedge(3, &[0, 1, 2]).unwrap()).amax() < 1e-14);
        let o = plucker(&Lagrangian::opposite(3)).unwrap();
        assert!((&o - basis_wedge(3, &[3, 4, 5]).unwrap()).amax() < 1e-14);
        assert!((omega_prime(&v, &o).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn hodge_star_examples() {
        let p = hodge_star(&basis_wedge(3, &[0, 1, 2]).unwrap()).unwrap();
        assert_eq!(p, basis_wedge(3, &[3, 4, 5]).unwrap());
    }

    #[test]
    fn rank_deficient_plucker() {
        let mut b = DMatrix::zeros(4, 2);
        b[(0, 0)] = 1.0;
        assert!(matches!(plucker_of_basis(&b), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn gap_identities_on_diagonal() {
        let g = SymplecticMatrix::new(DMatrix::from_diagonal(&DVector::from_row_slice(&[
            4.0, 2.0, 0.25, 0.5,
        ])))
        .unwrap();
        let w = wedge_power_matrix(g.matrix()).unwrap();
        let s = singular_values(&w);
        let expected = [8.0, 2.0, 1.0, 1.0, 0.5, 0.125];
        for (x, y) in s.iter().zip(expected.iter()) {
            assert!((x - y).abs() < 1e-14);
        }
        assert!(singular_gap_identities(&g).unwrap().max() < 1e-14);
        assert_eq!(singular_gap_identities(&SymplecticMatrix::identity(3)).unwrap().max(), 0.0);
    }
}
