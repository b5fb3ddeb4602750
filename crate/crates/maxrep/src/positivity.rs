//! Lagrangian subspaces of `(R²ⁿ, Ω)`, transversality, the cone of positive
//! definite matrices, unipotent chart coordinates and positivity of tuples.

use crate::error::{Error, Result};
use crate::linalg::{
    asymmetry, has_full_column_rank, hstack, inf_norm, max_abs, omega, orthonormalize, singular_values,
    subspace_distance, symmetric_eigenvalues, symmetrize, vstack,
};
use crate::sp::{jordan_projection, SymplecticMatrix};
use crate::wedge::{basis_wedge, omega_prime, wedge_of_columns};
use nalgebra::{DMatrix, Matrix2};

/// Relative tolerance for isotropy, rank and transversality tests.
pub const TOL_LAGRANGIAN: f64 = 1e-9;
/// Relative threshold on the smallest eigenvalue for positive definiteness.
pub const TOL_POSITIVE: f64 = 1e-9;
/// Margin on the `n`-th eigenvalue modulus for proximality.
pub const TOL_PROXIMAL: f64 = 1e-6;

/// An `n`-dimensional isotropic subspace of `R²ⁿ`, stored by a basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Lagrangian {
    basis: DMatrix<f64>,
}

/// Isotropy and rank test for a `2n × n` basis.
pub fn is_lagrangian(b: &DMatrix<f64>, tol: f64) -> bool {
    let n = b.ncols();
    if n == 0 || b.nrows() != 2 * n {
        return false;
    }
    if !has_full_column_rank(b, tol) {
        return false;
    }
    let iso = b.transpose() * omega(n) * b;
    inf_norm(&iso) <= tol * inf_norm(b).powi(2)
}

impl Lagrangian {
    pub fn new(basis: DMatrix<f64>) -> Result<Self> {
        if !is_lagrangian(&basis, TOL_LAGRANGIAN) {
            return Err(Error::Domain("basis does not span a Lagrangian".into()));
        }
        Ok(Lagrangian { basis })
    }

    /// `𝓛 = span(e₁, …, eₙ)`.
    pub fn standard(n: usize) -> Self {
        Lagrangian { basis: vstack(&DMatrix::identity(n, n), &DMatrix::zeros(n, n)) }
    }

    /// `𝓛^opp = span(eₙ₊₁, …, e₂ₙ)`.
    pub fn opposite(n: usize) -> Self {
        Lagrangian { basis: vstack(&DMatrix::zeros(n, n), &DMatrix::identity(n, n)) }
    }

    /// `U^S 𝓛^opp = span[S; I]` for symmetric `S`.
    pub fn from_chart(s: &DMatrix<f64>) -> Result<Self> {
        if asymmetry(s) > 1e-12 {
            return Err(Error::Domain("chart point must be symmetric".into()));
        }
        Ok(Lagrangian { basis: vstack(s, &DMatrix::identity(s.nrows(), s.nrows())) })
    }

    /// `U_M 𝓛 = span[I; M]` for symmetric `M`.
    pub fn graph(m: &DMatrix<f64>) -> Result<Self> {
        if asymmetry(m) > 1e-12 {
            return Err(Error::Domain("graph matrix must be symmetric".into()));
        }
        Ok(Lagrangian { basis: vstack(&DMatrix::identity(m.nrows(), m.nrows()), m) })
    }

    pub fn n(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    /// Image under a symplectic matrix.
    pub fn transform(&self, g: &SymplecticMatrix) -> Lagrangian {
        Lagrangian { basis: orthonormalize(&(g.matrix() * &self.basis)) }
    }

    /// Largest principal-angle sine between the two subspaces.
    pub fn distance(&self, other: &Lagrangian) -> f64 {
        subspace_distance(&self.basis, &other.basis)
    }
}

/// Normalised transversality test: `|det[B₁ B₂]|` against the product of column norms.
pub fn is_transverse(l1: &Lagrangian, l2: &Lagrangian) -> bool {
    transversality_ratio(l1, l2) >= TOL_LAGRANGIAN
}

/// `|det[B₁ B₂]| / Π‖columns‖`, in `[0, 1]`.
pub fn transversality_ratio(l1: &Lagrangian, l2: &Lagrangian) -> f64 {
    if l1.n() != l2.n() {
        return 0.0;
    }
    let m = hstack(l1.basis(), l2.basis());
    let norms: f64 = m.column_iter().map(|c| c.norm()).product();
    if norms == 0.0 {
        return 0.0;
    }
    m.determinant().abs() / norms
}

/// Tri-state outcome of the definiteness test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Definiteness {
    Positive,
    /// Within the numerical margin of the cone boundary.
    Indeterminate,
    NotPositive,
}

/// Classifies a symmetric matrix against `λ_min ≥ tol·‖M‖₂`.
pub fn definiteness(m: &DMatrix<f64>, tol: f64) -> Result<(Definiteness, f64)> {
    if m.nrows() != m.ncols() {
        return Err(Error::Dimension("definiteness needs a square matrix".into()));
    }
    if asymmetry(m) > 1e-8 {
        return Err(Error::Domain("matrix is not symmetric".into()));
    }
    let e = symmetric_eigenvalues(m);
    let lo = e[0];
    let norm = e.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let class = if norm == 0.0 {
        Definiteness::Indeterminate
    } else if lo >= tol * norm {
        Definiteness::Positive
    } else if lo > -tol * norm {
        Definiteness::Indeterminate
    } else {
        Definiteness::NotPositive
    };
    Ok((class, lo))
}

/// `true` iff the smallest eigenvalue is at least `tol·‖M‖₂`.
pub fn is_positive_definite(m: &DMatrix<f64>, tol: f64) -> Result<bool> {
    Ok(definiteness(m, tol)?.0 == Definiteness::Positive)
}

/// `true` for nonzero positive semidefinite matrices (closure of `Pos(n)` minus 0).
pub fn is_nonzero_psd(m: &DMatrix<f64>, tol: f64) -> Result<bool> {
    let (class, _) = definiteness(m, tol)?;
    Ok(class != Definiteness::NotPositive && max_abs(m) > 0.0)
}

/// Returns `g` with `g𝓛 = L1` and `g𝓛^opp = L2`: `g = [A | B (AᵀΩB)⁻¹]`.
pub fn normalize_transverse_pair(l1: &Lagrangian, l2: &Lagrangian) -> Result<SymplecticMatrix> {
    if l1.n() != l2.n() {
        return Err(Error::Dimension("Lagrangians of different rank".into()));
    }
    if !is_transverse(l1, l2) {
        return Err(Error::NotTransverse);
    }
    let n = l1.n();
    let a = orthonormalize(l1.basis());
    let b = orthonormalize(l2.basis());
    let c = a.transpose() * omega(n) * &b;
    let cinv = c.try_inverse().ok_or(Error::NotTransverse)?;
    let g = hstack(&a, &(b * cinv));
    SymplecticMatrix::with_tol(g, 1e-8)
}

/// A symmetric matrix giving coordinates `U^S 𝓛^opp` in a frame.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricChartPoint {
    pub s: DMatrix<f64>,
}

/// Chart coordinate `S` with `frame⁻¹ L = span[S; I]`.
pub fn chart_coordinate(l: &Lagrangian, frame: &SymplecticMatrix) -> Result<SymmetricChartPoint> {
    let n = l.n();
    if frame.n() != n {
        return Err(Error::Dimension("frame and Lagrangian ranks differ".into()));
    }
    let x = frame.inverse().matrix() * orthonormalize(l.basis());
    let top = x.rows(0, n).into_owned();
    let bottom = x.rows(n, n).into_owned();
    let sv = singular_values(&bottom);
    let scale = singular_values(&x)[0];
    if !(sv[n - 1] >= TOL_LAGRANGIAN * scale) {
        return Err(Error::NotTransverse);
    }
    let inv = bottom.try_inverse().ok_or(Error::NotTransverse)?;
    Ok(SymmetricChartPoint { s: symmetrize(&(top * inv)) })
}

/// Outcome of [`is_positive_tuple`].
#[derive(Debug, Clone, PartialEq)]
pub struct PositivityCertificate {
    pub is_positive: bool,
    /// Some sign reached the boundary margin without a strict failure.
    pub indeterminate: bool,
    /// Cone orientation `ε` that certified (or came closest).
    pub sign: i8,
    /// Chart points `S₂, …, S_{N−1}` in the frame normalising `(x₁, x_N)`.
    pub chart_points: Vec<SymmetricChartPoint>,
    /// Smallest eigenvalue over the tested increments after the sign `ε`.
    pub witness_min_eig: f64,
}

/// Certifies positivity of `(x₁, …, x_N)`: in the frame sending
/// `(𝓛, 𝓛^opp)` to `(x₁, x_N)`, some sign `ε` must make `ε S_{N−1}` and every
/// `ε (S_k − S_{k+1})` positive definite.
pub fn is_positive_tuple(tuple: &[Lagrangian]) -> Result<PositivityCertificate> {
    let big_n = tuple.len();
    if big_n < 3 {
        return Err(Error::Domain("a tuple needs at least three Lagrangians".into()));
    }
    let g = normalize_transverse_pair(&tuple[0], &tuple[big_n - 1])?;
    let charts: Vec<SymmetricChartPoint> = tuple[1..big_n - 1]
        .iter()
        .map(|x| chart_coordinate(x, &g))
        .collect::<Result<_>>()?;
    let mut increments = vec![charts[charts.len() - 1].s.clone()];
    for k in 0..charts.len() - 1 {
        increments.push(&charts[k].s - &charts[k + 1].s);
    }
    let mut best: Option<(i8, Definiteness, f64)> = None;
    for eps in [1i8, -1] {
        let mut worst = Definiteness::Positive;
        let mut min_eig = f64::INFINITY;
        for m in &increments {
            let (class, lo) = definiteness(&(m * eps as f64), TOL_POSITIVE)?;
            min_eig = min_eig.min(lo);
            worst = match (worst, class) {
                (Definiteness::NotPositive, _) | (_, Definiteness::NotPositive) => Definiteness::NotPositive,
                (Definiteness::Indeterminate, _) | (_, Definiteness::Indeterminate) => Definiteness::Indeterminate,
                _ => Definiteness::Positive,
            };
        }
        let rank = |d: Definiteness| match d {
            Definiteness::Positive => 2,
            Definiteness::Indeterminate => 1,
            Definiteness::NotPositive => 0,
        };
        let better = match best {
            None => true,
            Some((_, d, m)) => rank(worst) > rank(d) || (rank(worst) == rank(d) && min_eig > m),
        };
        if better {
            best = Some((eps, worst, min_eig));
        }
    }
    let (sign, class, witness) = best.expect("two signs tested");
    Ok(PositivityCertificate {
        is_positive: class == Definiteness::Positive,
        indeterminate: class == Definiteness::Indeterminate,
        sign,
        chart_points: charts,
        witness_min_eig: witness,
    })
}

fn orth_step(g: &DMatrix<f64>, q: &DMatrix<f64>) -> DMatrix<f64> {
    orthonormalize(&(g * q))
}

/// The `g`-invariant Lagrangian for the `n` eigenvalues of largest modulus.
pub fn attracting_lagrangian(g: &SymplecticMatrix) -> Result<Lagrangian> {
    let n = g.n();
    let moduli: Vec<f64> = jordan_projection(g).lambdas().iter().map(|l| l.exp()).collect();
    let mn = moduli[n - 1];
    if !(mn > 1.0 + TOL_PROXIMAL) {
        return Err(Error::NotProximal(mn));
    }
    let m = g.matrix();
    // Orthogonal iteration, first with a power of g whose dynamic range stays
    // below 1e4, then with g itself.
    let spread = moduli[0] / mn;
    let mut p: u32 = 1;
    while p < (1 << 20) && spread.powi(2 * p as i32) <= 1e4 && mn.powi(2 * p as i32) < 1e300 {
        p *= 2;
    }
    let mut gp = m.clone();
    let mut done = 1;
    while done < p {
        gp = &gp * &gp;
        let s = gp.norm();
        gp /= s;
        done *= 2;
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let mut order: Vec<usize> = (0..2 * n).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let mut q = DMatrix::zeros(2 * n, n);
    for (j, &i) in order.iter().take(n).enumerate() {
        q.set_column(j, &u.column(i));
    }
    let moved = |a: &DMatrix<f64>, b: &DMatrix<f64>| (b - a * (a.transpose() * b)).norm();
    for _ in 0..2000 {
        let next = orth_step(&gp, &q);
        let delta = moved(&q, &next);
        q = next;
        if delta < 1e-15 {
            break;
        }
    }
    for _ in 0..20000 {
        let next = orth_step(m, &q);
        let delta = moved(&q, &next);
        q = next;
        if delta < 1e-15 {
            break;
        }
    }
    let invariance = moved(&q, &orthonormalize(&(m * &q)));
    if invariance > 1e-7 {
        return Err(Error::NotProximal(mn));
    }
    Lagrangian::new(q)
}

/// Pairing matrix `[[ω′(w₁,v_x), ω′(w₁,v_y)], [ω′(w₂,v_x), ω′(w₂,v_y)]]`
/// from explicit wedge expansions, where `v_x = eₙ₊₁∧⋯∧e₂ₙ`,
/// `v_y = wedge of [I; M]`, `w₁ = e₁∧⋯∧eₙ` and
/// `w₂ = Σᵢ e₁∧⋯∧(u_N eᵢ)∧⋯∧eₙ` with `u_N eᵢ = Σ_k N_{ki} eₙ₊ₖ`.
pub fn hypertransversality_pairing(m: &DMatrix<f64>, nmat: &DMatrix<f64>) -> Result<Matrix2<f64>> {
    let n = m.nrows();
    if m.ncols() != n || nmat.nrows() != n || nmat.ncols() != n {
        return Err(Error::Dimension("M and N must be square of equal size".into()));
    }
    if !is_positive_definite(m, TOL_POSITIVE)? {
        return Err(Error::Domain("M must be positive definite".into()));
    }
    if !is_nonzero_psd(nmat, TOL_POSITIVE)? {
        return Err(Error::Domain("N must be positive semidefinite and nonzero".into()));
    }
    let upper: Vec<usize> = (n..2 * n).collect();
    let lower: Vec<usize> = (0..n).collect();
    let v_x = basis_wedge(n, &upper)?;
    let v_y = wedge_of_columns(&vstack(&DMatrix::identity(n, n), m))?;
    let w1 = basis_wedge(n, &lower)?;
    let mut w2 = nalgebra::DVector::zeros(w1.len());
    for i in 0..n {
        let mut cols = vstack(&DMatrix::identity(n, n), &DMatrix::zeros(n, n));
        for k in 0..2 * n {
            cols[(k, i)] = 0.0;
        }
        for k in 0..n {
            cols[(n + k, i)] = nmat[(k, i)];
        }
        w2 += wedge_of_columns(&cols)?;
    }
    Ok(Matrix2::new(
        omega_prime(&w1, &v_x)?,
        omega_prime(&w1, &v_y)?,
        omega_prime(&w2, &v_x)?,
        omega_prime(&w2, &v_y)?,
    ))
}

/// `[[1, det M], [0, −det M · tr(M⁻¹N)]]`.
pub fn hypertransversality_closed_form(m: &DMatrix<f64>, nmat: &DMatrix<f64>) -> Result<Matrix2<f64>> {
    let det = m.determinant();
    let inv = m.clone().try_inverse().ok_or_else(|| Error::Domain("M is singular".into()))?;
    let tr = (inv * nmat).trace();
    Ok(Matrix2::new(1.0, det, 0.0, -det * tr))
}
