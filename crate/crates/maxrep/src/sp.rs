//! The symplectic group `Sp(2n, R)`: membership, Cartan and Jordan
//! projections, and functionals on the Cartan subspace.

use crate::error::{Error, Result};
use crate::linalg::{inf_norm, omega, singular_values};
use nalgebra::DMatrix;
use std::ops::Mul;

/// Default relative tolerance for symplectic membership.
pub const TOL_SYM: f64 = 1e-9;

/// Tiny negative `λₙ` values down to this magnitude are clamped to zero.
pub const CLAMP_TOL: f64 = 1e-10;

/// Tests `‖MᵀΩM − Ω‖_∞ ≤ tol·‖M‖_∞²`.
pub fn is_symplectic(m: &DMatrix<f64>, tol: f64) -> Result<bool> {
    Ok(symplectic_residual(m)? <= tol)
}

/// Relative residual `‖MᵀΩM − Ω‖_∞ / ‖M‖_∞²`.
pub fn symplectic_residual(m: &DMatrix<f64>) -> Result<f64> {
    if m.nrows() != m.ncols() || m.nrows() % 2 != 0 || m.nrows() == 0 {
        return Err(Error::Dimension(format!(
            "expected a square matrix of even size, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let n = m.nrows() / 2;
    let om = omega(n);
    let r = m.transpose() * &om * m - &om;
    let scale = inf_norm(m).powi(2);
    if !(scale > 0.0) || !scale.is_finite() {
        return Ok(f64::INFINITY);
    }
    Ok(inf_norm(&r) / scale)
}

/// A `2n × 2n` matrix verified to lie in `Sp(2n, R)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticMatrix {
    m: DMatrix<f64>,
    n: usize,
}

impl SymplecticMatrix {
    /// Validates membership at [`TOL_SYM`].
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        Self::with_tol(m, TOL_SYM)
    }

    pub fn with_tol(m: DMatrix<f64>, tol: f64) -> Result<Self> {
        let residual = symplectic_residual(&m)?;
        if !(residual <= tol) {
            return Err(Error::NotSymplectic { residual });
        }
        let n = m.nrows() / 2;
        Ok(SymplecticMatrix { m, n })
    }

    /// Wraps a matrix known to be symplectic by construction.
    pub(crate) fn from_trusted(m: DMatrix<f64>) -> Self {
        debug_assert!(m.nrows() == m.ncols() && m.nrows() % 2 == 0);
        let n = m.nrows() / 2;
        SymplecticMatrix { m, n }
    }

    pub fn identity(n: usize) -> Self {
        SymplecticMatrix { m: DMatrix::identity(2 * n, 2 * n), n }
    }

    /// `Ω` itself.
    pub fn omega(n: usize) -> Self {
        SymplecticMatrix { m: omega(n), n }
    }

    /// Block diagonal `diag(A, A⁻ᵀ)` for invertible `A`.
    pub fn levi(a: &DMatrix<f64>) -> Result<Self> {
        let n = a.nrows();
        let inv = a
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::DegenerateInput("Levi block is singular".into()))?;
        let mut m = DMatrix::zeros(2 * n, 2 * n);
        m.view_mut((0, 0), (n, n)).copy_from(a);
        m.view_mut((n, n), (n, n)).copy_from(&inv.transpose());
        Ok(SymplecticMatrix { m, n })
    }

    /// Upper unipotent `U^M = [[I, M], [0, I]]` for symmetric `M`.
    pub fn upper_unipotent(s: &DMatrix<f64>) -> Result<Self> {
        Self::unipotent(s, true)
    }

    /// Lower unipotent `U_M = [[I, 0], [M, I]]` for symmetric `M`.
    pub fn lower_unipotent(s: &DMatrix<f64>) -> Result<Self> {
        Self::unipotent(s, false)
    }

    fn unipotent(s: &DMatrix<f64>, upper: bool) -> Result<Self> {
        let n = s.nrows();
        if s.ncols() != n {
            return Err(Error::Dimension("unipotent block must be square".into()));
        }
        if crate::linalg::asymmetry(s) > 1e-12 {
            return Err(Error::Domain("unipotent block must be symmetric".into()));
        }
        let mut m = DMatrix::identity(2 * n, 2 * n);
        if upper {
            m.view_mut((0, n), (n, n)).copy_from(s);
        } else {
            m.view_mut((n, 0), (n, n)).copy_from(s);
        }
        Ok(SymplecticMatrix { m, n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.m
    }

    /// Exact inverse `−Ω gᵀ Ω`.
    pub fn inverse(&self) -> SymplecticMatrix {
        let om = omega(self.n);
        SymplecticMatrix { m: -(&om * self.m.transpose() * &om), n: self.n }
    }

    pub fn transpose(&self) -> SymplecticMatrix {
        SymplecticMatrix { m: self.m.transpose(), n: self.n }
    }

    pub fn pow(&self, k: u32) -> SymplecticMatrix {
        let mut out = SymplecticMatrix::identity(self.n);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }
}

impl Mul for &SymplecticMatrix {
    type Output = SymplecticMatrix;
    fn mul(self, rhs: &SymplecticMatrix) -> SymplecticMatrix {
        assert_eq!(self.n, rhs.n, "rank mismatch in product");
        SymplecticMatrix { m: &self.m * &rhs.m, n: self.n }
    }
}

/// A point `λ₁ ≥ … ≥ λₙ ≥ 0` of the closed positive Weyl chamber.
#[derive(Debug, Clone, PartialEq)]
pub struct CartanVector {
    lambdas: Vec<f64>,
}

impl CartanVector {
    /// Validates ordering and non-negativity, clamping `λₙ ∈ [−1e−10, 0)` to 0.
    pub fn new(mut lambdas: Vec<f64>) -> Result<Self> {
        if lambdas.is_empty() {
            return Err(Error::Dimension("empty Cartan vector".into()));
        }
        if lambdas.iter().any(|x| !x.is_finite()) {
            return Err(Error::Domain("non-finite Cartan entry".into()));
        }
        if lambdas.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Domain("Cartan entries must be nonincreasing".into()));
        }
        for x in lambdas.iter_mut() {
            if *x < 0.0 {
                if *x >= -CLAMP_TOL {
                    *x = 0.0;
                } else {
                    return Err(Error::Domain(format!("negative Cartan entry {x}")));
                }
            }
        }
        Ok(CartanVector { lambdas })
    }

    /// Sorts descending and clamps negatives produced by rounding.
    pub(crate) fn from_logs(mut logs: Vec<f64>) -> Self {
        logs.sort_by(|a, b| b.total_cmp(a));
        for x in logs.iter_mut() {
            if *x < 0.0 {
                *x = 0.0;
            }
        }
        CartanVector { lambdas: logs }
    }

    pub fn n(&self) -> usize {
        self.lambdas.len()
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }
}

/// Cartan projection `κ(g) = (log σ₁, …, log σₙ)`.
pub fn cartan_projection(g: &SymplecticMatrix) -> CartanVector {
    let s = singular_values(g.matrix());
    CartanVector::from_logs(s[..g.n()].iter().map(|x| x.ln()).collect())
}

/// Jordan projection: logs of the `n` largest eigenvalue moduli.
pub fn jordan_projection(g: &SymplecticMatrix) -> CartanVector {
    let mut moduli: Vec<f64> =
        g.matrix().complex_eigenvalues().iter().map(|z| z.norm()).collect();
    moduli.sort_by(|a, b| b.total_cmp(a));
    CartanVector::from_logs(moduli[..g.n()].iter().map(|x| x.ln()).collect())
}

/// Linear and quadratic functionals on the Cartan subspace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WeightFunctional {
    /// The long simple root `α = 2λₙ`.
    Alpha,
    /// `ω̂_α = (2/n) Σ λᵢ`.
    OmegaHatAlpha,
    /// The short simple root `βᵢ = λᵢ − λᵢ₊₁`, `1 ≤ i ≤ n − 1`.
    Beta(usize),
    /// Symmetric-space distance form `(1/n)√(4n Σ λᵢ²)`.
    DX,
}

impl WeightFunctional {
    pub fn name(&self) -> String {
        match self {
            WeightFunctional::Alpha => "alpha".into(),
            WeightFunctional::OmegaHatAlpha => "omega_hat".into(),
            WeightFunctional::Beta(i) => format!("beta{i}"),
            WeightFunctional::DX => "dX".into(),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "alpha" => Ok(WeightFunctional::Alpha),
            "omega_hat" | "omega_hat_alpha" => Ok(WeightFunctional::OmegaHatAlpha),
            "dX" | "dx" | "dX_quadratic" => Ok(WeightFunctional::DX),
            _ => {
                if let Some(rest) = s.strip_prefix("beta") {
                    let i: usize = rest
                        .trim_start_matches('_')
                        .parse()
                        .map_err(|_| Error::Config(format!("bad functional '{s}'")))?;
                    Ok(WeightFunctional::Beta(i))
                } else {
                    Err(Error::Config(format!("unknown functional '{s}'")))
                }
            }
        }
    }

    /// Evaluates the functional on `a`.
    pub fn evaluate(&self, a: &CartanVector) -> Result<f64> {
        let l = a.lambdas();
        let n = l.len();
        Ok(match *self {
            WeightFunctional::Alpha => 2.0 * l[n - 1],
            WeightFunctional::OmegaHatAlpha => 2.0 / n as f64 * l.iter().sum::<f64>(),
            WeightFunctional::Beta(i) => {
                if i == 0 || i >= n {
                    return Err(Error::Index { index: i, n });
                }
                l[i - 1] - l[i]
            }
            WeightFunctional::DX => {
                let q: f64 = l.iter().map(|x| x * x).sum();
                (4.0 * n as f64 * q).sqrt() / n as f64
            }
        })
    }
}

/// Functional evaluation in free-function form.
pub fn evaluate_functional(phi: WeightFunctional, a: &CartanVector) -> Result<f64> {
    phi.evaluate(a)
}

/// `d_X(basepoint, g·basepoint)`.
pub fn symmetric_space_distance(g: &SymplecticMatrix) -> f64 {
    WeightFunctional::DX
        .evaluate(&cartan_projection(g))
        .expect("dX is defined for every rank")
}
