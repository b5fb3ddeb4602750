//! Seeded generators for symplectic matrices and positive cones.

use crate::sp::SymplecticMatrix;
use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Deterministic generator used throughout the crate.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Matrix with independent standard normal entries.
pub fn gaussian<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.sample::<f64, _>(StandardNormal))
}

/// Haar-distributed orthogonal matrix.
pub fn orthogonal<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DMatrix<f64> {
    let qr = gaussian(rng, n, n).qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            let mut c = q.column_mut(j);
            c.neg_mut();
        }
    }
    q
}

/// A random element of `Sp(2n) ∩ O(2n)`, i.e. of `U(n)` in real form.
pub fn symplectic_orthogonal<R: Rng + ?Sized>(rng: &mut R, n: usize) -> SymplecticMatrix {
    let phases = |rng: &mut R| {
        let mut m = DMatrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            let t: f64 = rng.random_range(0.0..std::f64::consts::TAU);
            let (s, c) = t.sin_cos();
            m[(i, i)] = c;
            m[(i, n + i)] = s;
            m[(n + i, i)] = -s;
            m[(n + i, n + i)] = c;
        }
        SymplecticMatrix::from_trusted(m)
    };
    let q1 = SymplecticMatrix::levi(&orthogonal(rng, n)).expect("orthogonal is invertible");
    let p1 = phases(rng);
    let q2 = SymplecticMatrix::levi(&orthogonal(rng, n)).expect("orthogonal is invertible");
    let p2 = phases(rng);
    &(&(&q1 * &p1) * &q2) * &p2
}

/// `k₁ · diag(a, a⁻¹) · k₂` with prescribed `log a` (any order).
pub fn symplectic_with_logs<R: Rng + ?Sized>(rng: &mut R, logs: &[f64]) -> SymplecticMatrix {
    let n = logs.len();
    let mut d = DMatrix::zeros(2 * n, 2 * n);
    for (i, &l) in logs.iter().enumerate() {
        d[(i, i)] = l.exp();
        d[(n + i, n + i)] = (-l).exp();
    }
    let k1 = symplectic_orthogonal(rng, n);
    let k2 = symplectic_orthogonal(rng, n);
    &(&k1 * &SymplecticMatrix::from_trusted(d)) * &k2
}

/// Random symplectic matrix whose log singular values are uniform in `[0, spread]`.
pub fn symplectic<R: Rng + ?Sized>(rng: &mut R, n: usize, spread: f64) -> SymplecticMatrix {
    let logs: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..spread)).collect();
    symplectic_with_logs(rng, &logs)
}

/// Random symmetric matrix with standard normal entries.
pub fn symmetric<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DMatrix<f64> {
    let a = gaussian(rng, n, n);
    (&a + a.transpose()) * 0.5
}

/// Random positive-definite matrix `AᵀA/n + εI`.
pub fn positive_definite<R: Rng + ?Sized>(rng: &mut R, n: usize, eps: f64) -> DMatrix<f64> {
    let a = gaussian(rng, n, n);
    a.transpose() * &a / n as f64 + DMatrix::identity(n, n) * eps
}

/// Random positive-semidefinite matrix of the given rank (nonzero when `rank ≥ 1`).
pub fn psd_of_rank<R: Rng + ?Sized>(rng: &mut R, n: usize, rank: usize) -> DMatrix<f64> {
    let a = gaussian(rng, n, rank);
    &a * a.transpose()
}
