//! Fuchsian presets, the diagonal embedding `ρ_D`, the interleaved embedding
//! `ρ_{1,2}`, word evaluation, and sampling of limit maps with their chart
//! parametrisation.

use crate::error::{Error, Result};
use crate::hyperbolic::{angle_diff, displacement, fixed_points, orbit_ball, wrap_angle, MobiusElement, Word};
use crate::linalg::{frobenius, symmetric_eigenvalues};
use crate::positivity::{attracting_lagrangian, chart_coordinate, definiteness, normalize_transverse_pair, Definiteness, Lagrangian, TOL_POSITIVE};
use crate::sp::{CartanVector, SymplecticMatrix};
use nalgebra::{DMatrix, Matrix2};
use std::f64::consts::FRAC_PI_4;

/// How distinct group elements are recognised during enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelationMode {
    /// Exact integer matrices up to sign, hashed.
    HashDedup,
    /// Free group: words are freely reduced, nothing else is identified.
    FreeReduction,
}

/// Which family a preset belongs to.
#[derive(Debug, Clone, PartialEq)]
pub enum PresetKind {
    Modular,
    Fricke { x: f64, y: f64, z: f64 },
    Schottky { trace: f64 },
    Conjugated { base: Box<FuchsianPreset>, h: Matrix2<f64> },
}

/// A finitely generated Fuchsian group with a fixed generating alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct FuchsianPreset {
    kind: PresetKind,
    generators: Vec<Matrix2<f64>>,
    integer: Option<Vec<[i64; 4]>>,
    inverse: Vec<u8>,
    symbols: Vec<&'static str>,
    is_lattice: bool,
    mode: RelationMode,
}

const FREE_SYMBOLS: [&str; 4] = ["a", "A", "b", "B"];
const FREE_INVERSE: [u8; 4] = [1, 0, 3, 2];

fn inv2(m: &Matrix2<f64>) -> Matrix2<f64> {
    Matrix2::new(m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)])
}

impl FuchsianPreset {
    /// `PSL(2, Z)` generated by `S`, `T`, `T⁻¹` (symbols `S`, `T`, `t`).
    pub fn modular() -> Self {
        let s = [0, -1, 1, 0];
        let t = [1, 1, 0, 1];
        let ti = [1, -1, 0, 1];
        let to_f = |m: [i64; 4]| Matrix2::new(m[0] as f64, m[1] as f64, m[2] as f64, m[3] as f64);
        FuchsianPreset {
            kind: PresetKind::Modular,
            generators: vec![to_f(s), to_f(t), to_f(ti)],
            integer: Some(vec![s, t, ti]),
            inverse: vec![0, 2, 1],
            symbols: vec!["S", "T", "t"],
            is_lattice: true,
            mode: RelationMode::HashDedup,
        }
    }

    /// Once-punctured torus group with trace coordinates on `x² + y² + z² = xyz`:
    /// `A = [[x, −1], [1, 0]]`, `B = [[0, ζ], [−1/ζ, y]]` with `ζ + 1/ζ = z`.
    pub fn fricke(x: f64, y: f64, z: f64) -> Result<Self> {
        if !(x > 2.0 && y > 2.0 && z > 2.0) {
            return Err(Error::Config("Fricke traces must exceed 2".into()));
        }
        let markov = x * x + y * y + z * z - x * y * z;
        if markov.abs() > 1e-9 * (x * y * z) {
            return Err(Error::Config(format!(
                "traces ({x}, {y}, {z}) are off the Markov surface (residual {markov:.3e})"
            )));
        }
        let zeta = 0.5 * (z + (z * z - 4.0).sqrt());
        let a = Matrix2::new(x, -1.0, 1.0, 0.0);
        let b = Matrix2::new(0.0, zeta, -1.0 / zeta, y);
        Ok(Self::free(PresetKind::Fricke { x, y, z }, a, b, true))
    }

    /// Solves the Markov relation for `z`, taking the larger or smaller root.
    pub fn fricke_from_xy(x: f64, y: f64, larger_root: bool) -> Result<Self> {
        let disc = x * x * y * y - 4.0 * (x * x + y * y);
        if !(disc >= 0.0) {
            return Err(Error::Config(format!("no real Fricke trace z for x = {x}, y = {y}")));
        }
        let s = disc.sqrt();
        let z = if larger_root { 0.5 * (x * y + s) } else { 0.5 * (x * y - s) };
        Self::fricke(x, y, z)
    }

    /// Classical Schottky group: `A` of trace `t` with axis through the
    /// basepoint, `B` its rotation by a quarter turn. Requires `t > 2√2`.
    pub fn schottky(trace: f64) -> Result<Self> {
        if !(trace > 2.0 * std::f64::consts::SQRT_2) {
            return Err(Error::Config("Schottky trace must exceed 2√2".into()));
        }
        let c = 0.5 * trace;
        let s = (c * c - 1.0).sqrt();
        let a = Matrix2::new(c, s, s, c);
        let (sn, cs) = FRAC_PI_4.sin_cos();
        let k = Matrix2::new(cs, sn, -sn, cs);
        let b = k * a * inv2(&k);
        Ok(Self::free(PresetKind::Schottky { trace }, a, b, false))
    }

    /// Conjugate `h g h⁻¹` of every generator; `det h` must be 1.
    pub fn conjugated(base: &FuchsianPreset, h: Matrix2<f64>) -> Result<Self> {
        MobiusElement::new(h).map_err(|_| Error::Config("conjugator must have determinant 1".into()))?;
        let hi = inv2(&h);
        let mut out = base.clone();
        out.generators = base.generators.iter().map(|g| h * g * hi).collect();
        out.kind = PresetKind::Conjugated { base: Box::new(base.clone()), h };
        Ok(out)
    }

    fn free(kind: PresetKind, a: Matrix2<f64>, b: Matrix2<f64>, is_lattice: bool) -> Self {
        FuchsianPreset {
            kind,
            generators: vec![a, inv2(&a), b, inv2(&b)],
            integer: None,
            inverse: FREE_INVERSE.to_vec(),
            symbols: FREE_SYMBOLS.to_vec(),
            is_lattice,
            mode: RelationMode::FreeReduction,
        }
    }

    pub fn kind(&self) -> &PresetKind {
        &self.kind
    }

    pub fn name(&self) -> String {
        match &self.kind {
            PresetKind::Modular => "modular".into(),
            PresetKind::Fricke { x, y, z } => format!("fricke:{x},{y},{z}"),
            PresetKind::Schottky { trace } => format!("schottky:{trace}"),
            PresetKind::Conjugated { base, h } => {
                format!("conjugated:{},{},{},{}:{}", h[(0, 0)], h[(0, 1)], h[(1, 0)], h[(1, 1)], base.name())
            }
        }
    }

    /// Generator matrices, indexed by letter.
    pub fn generators(&self) -> &[Matrix2<f64>] {
        &self.generators
    }

    /// Exact integer generators used for deduplication, if any.
    pub fn integer_generators(&self) -> Option<&[[i64; 4]]> {
        self.integer.as_deref()
    }

    /// Letter of the inverse generator.
    pub fn letter_inverse(&self) -> &[u8] {
        &self.inverse
    }

    pub fn symbols(&self) -> &[&'static str] {
        &self.symbols
    }

    pub fn is_lattice(&self) -> bool {
        self.is_lattice
    }

    pub fn relation_mode(&self) -> RelationMode {
        self.mode
    }

    /// Largest materialised word ball.
    pub fn ball_cap(&self) -> usize {
        match self.mode {
            RelationMode::HashDedup => 26,
            RelationMode::FreeReduction => 12,
        }
    }

    /// `true` when both presets use the same abstract alphabet.
    pub fn same_alphabet(&self, other: &FuchsianPreset) -> bool {
        self.mode == other.mode
            && self.inverse == other.inverse
            && self.symbols == other.symbols
            && self.integer == other.integer
    }

    /// Product of generator matrices along a word.
    pub fn evaluate(&self, w: &Word) -> Result<Matrix2<f64>> {
        let mut m = Matrix2::identity();
        for l in w.letters() {
            let g = self
                .generators
                .get(l as usize)
                .ok_or_else(|| Error::Config(format!("letter {l} is not a generator")))?;
            m *= g;
        }
        Ok(m)
    }

    /// Commutator trace `tr(A B A⁻¹ B⁻¹)` for two-generator free presets.
    pub fn commutator_trace(&self) -> Option<f64> {
        if self.mode != RelationMode::FreeReduction {
            return None;
        }
        let g = &self.generators;
        Some((g[0] * g[2] * g[1] * g[3]).trace())
    }

    /// Half of the largest generator displacement; shadow radii below it
    /// are rejected by the shadow experiments.
    pub fn adequacy_radius(&self) -> f64 {
        0.5 * self.generators.iter().map(displacement).fold(0.0, f64::max)
    }
}

/// `(a b; c d) ↦ (a Iₙ, b Iₙ; c Iₙ, d Iₙ)`.
pub fn lift_diagonal(g: &Matrix2<f64>, n: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        m[(i, i)] = g[(0, 0)];
        m[(i, n + i)] = g[(0, 1)];
        m[(n + i, i)] = g[(1, 0)];
        m[(n + i, n + i)] = g[(1, 1)];
    }
    m
}

/// `(a₁ 0 b₁ 0; 0 a₂ 0 b₂; c₁ 0 d₁ 0; 0 c₂ 0 d₂)`.
pub fn lift_interleaved(g1: &Matrix2<f64>, g2: &Matrix2<f64>) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(4, 4);
    for (k, g) in [g1, g2].into_iter().enumerate() {
        m[(k, k)] = g[(0, 0)];
        m[(k, 2 + k)] = g[(0, 1)];
        m[(2 + k, k)] = g[(1, 0)];
        m[(2 + k, 2 + k)] = g[(1, 1)];
    }
    m
}

/// `log σ₁` of a real 2×2 matrix of determinant one.
pub fn log_sigma1(g: &Matrix2<f64>) -> f64 {
    0.5 * displacement(g)
}

/// A representation of a preset's free alphabet into `Sp(2n, R)`.
#[derive(Debug, Clone, PartialEq)]
pub enum SymplecticRep {
    Diagonal { n: usize, gens: Vec<Matrix2<f64>> },
    Interleaved { gens1: Vec<Matrix2<f64>>, gens2: Vec<Matrix2<f64>> },
    Generic { n: usize, gens: Vec<SymplecticMatrix> },
}

/// `ρ_D` over a preset.
pub fn rho_diagonal(preset: &FuchsianPreset, n: usize) -> Result<SymplecticRep> {
    if n == 0 {
        return Err(Error::Config("n must be positive".into()));
    }
    Ok(SymplecticRep::Diagonal { n, gens: preset.generators().to_vec() })
}

/// `ρ_{1,2}` into `Sp(4, R)` for two presets on the same alphabet.
pub fn rho_interleaved(p1: &FuchsianPreset, p2: &FuchsianPreset) -> Result<SymplecticRep> {
    if !p1.same_alphabet(p2) {
        return Err(Error::Config("presets do not share a generating alphabet".into()));
    }
    Ok(SymplecticRep::Interleaved { gens1: p1.generators().to_vec(), gens2: p2.generators().to_vec() })
}

impl SymplecticRep {
    pub fn n(&self) -> usize {
        match self {
            SymplecticRep::Diagonal { n, .. } | SymplecticRep::Generic { n, .. } => *n,
            SymplecticRep::Interleaved { .. } => 2,
        }
    }

    pub fn generator_count(&self) -> usize {
        match self {
            SymplecticRep::Diagonal { gens, .. } => gens.len(),
            SymplecticRep::Interleaved { gens1, .. } => gens1.len(),
            SymplecticRep::Generic { gens, .. } => gens.len(),
        }
    }

    /// Images of the generators.
    pub fn images(&self) -> Vec<DMatrix<f64>> {
        match self {
            SymplecticRep::Diagonal { n, gens } => gens.iter().map(|g| lift_diagonal(g, *n)).collect(),
            SymplecticRep::Interleaved { gens1, gens2 } => {
                gens1.iter().zip(gens2).map(|(a, b)| lift_interleaved(a, b)).collect()
            }
            SymplecticRep::Generic { gens, .. } => gens.iter().map(|g| g.matrix().clone()).collect(),
        }
    }

    fn check_word(&self, w: &Word) -> Result<()> {
        let k = self.generator_count();
        match w.letters().find(|&l| l as usize >= k) {
            Some(l) => Err(Error::Config(format!("letter {l} is not a generator"))),
            None => Ok(()),
        }
    }

    fn product2(gens: &[Matrix2<f64>], w: &Word) -> Matrix2<f64> {
        w.letters().fold(Matrix2::identity(), |m, l| m * gens[l as usize])
    }

    /// Image of a word, as an ordered product.
    pub fn evaluate(&self, w: &Word) -> Result<SymplecticMatrix> {
        self.check_word(w)?;
        let m = match self {
            SymplecticRep::Diagonal { n, gens } => lift_diagonal(&Self::product2(gens, w), *n),
            SymplecticRep::Interleaved { gens1, gens2 } => {
                lift_interleaved(&Self::product2(gens1, w), &Self::product2(gens2, w))
            }
            SymplecticRep::Generic { n, gens } => {
                let mut m = DMatrix::identity(2 * n, 2 * n);
                for l in w.letters() {
                    m = m * gens[l as usize].matrix();
                }
                m
            }
        };
        SymplecticMatrix::with_tol(m, 1e-8)
    }

    /// Cartan projection of a word's image; block-structured reps use the
    /// closed form of their 2×2 blocks.
    pub fn cartan(&self, w: &Word) -> Result<CartanVector> {
        self.check_word(w)?;
        Ok(match self {
            SymplecticRep::Diagonal { n, gens } => {
                CartanVector::from_logs(vec![log_sigma1(&Self::product2(gens, w)); *n])
            }
            SymplecticRep::Interleaved { gens1, gens2 } => CartanVector::from_logs(vec![
                log_sigma1(&Self::product2(gens1, w)),
                log_sigma1(&Self::product2(gens2, w)),
            ]),
            SymplecticRep::Generic { .. } => crate::sp::cartan_projection(&self.evaluate(w)?),
        })
    }
}

/// A sampled boundary point with its limit Lagrangian.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitPoint {
    pub angle: f64,
    pub lagrangian: Lagrangian,
    pub word: Word,
}

/// Attracting fixed points of hyperbolic elements of growing word balls and
/// the attracting Lagrangians of their images, sorted by angle.
pub fn limit_map_samples(rep: &SymplecticRep, preset: &FuchsianPreset, count: usize) -> Result<Vec<LimitPoint>> {
    if count < 3 {
        return Err(Error::Domain("at least three samples are needed".into()));
    }
    if rep.generator_count() != preset.generators().len() {
        return Err(Error::Config("representation and preset alphabets differ".into()));
    }
    let mut out: Vec<LimitPoint> = Vec::new();
    for l in 1..=preset.ball_cap().min(10) {
        out.clear();
        for el in orbit_ball(preset, l)? {
            let Ok(mob) = MobiusElement::new(el.matrix) else { continue };
            let Ok((attr, _)) = fixed_points(&mob) else { continue };
            if out.iter().any(|p| angle_diff(p.angle, attr).abs() < 1e-9) {
                continue;
            }
            let Ok(lag) = rep.evaluate(&el.word).and_then(|g| attracting_lagrangian(&g)) else { continue };
            out.push(LimitPoint { angle: attr, lagrangian: lag, word: el.word });
            if out.len() == count {
                out.sort_by(|a, b| a.angle.total_cmp(&b.angle));
                return Ok(out);
            }
        }
    }
    Err(Error::InsufficientData(format!("found only {} distinct hyperbolic fixed points", out.len())))
}

/// Chart value of the limit curve at one boundary point.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitCurveSample {
    pub angle: f64,
    pub f: DMatrix<f64>,
    pub frame: SymplecticMatrix,
}

/// Sign `ε` making all successive increments positive semidefinite, if any.
fn monotone_sign(values: &[&DMatrix<f64>]) -> Result<Option<f64>> {
    'signs: for eps in [1.0, -1.0] {
        for w in values.windows(2) {
            let d = (w[1] - w[0]) * eps;
            if definiteness(&d, TOL_POSITIVE)?.0 == Definiteness::NotPositive {
                continue 'signs;
            }
        }
        return Ok(Some(eps));
    }
    Ok(None)
}

/// Chart `f` on the counterclockwise arc from `x` to `y`: with the frame `g`
/// sending `(𝓛^opp, 𝓛)` to `(ξ(x), ξ(y))`, `ξ(z) = g U^{f(z)} 𝓛^opp`. The
/// anchor `x` comes first with `f(x) = 0`.
pub fn limit_curve_chart(samples: &[LimitPoint], x: &LimitPoint, y: &LimitPoint) -> Result<Vec<LimitCurveSample>> {
    let span = wrap_angle(y.angle - x.angle);
    if span == 0.0 {
        return Err(Error::Domain("chart anchors coincide".into()));
    }
    let frame = normalize_transverse_pair(&y.lagrangian, &x.lagrangian)?;
    let mut inside: Vec<&LimitPoint> = samples
        .iter()
        .filter(|p| {
            let o = wrap_angle(p.angle - x.angle);
            o > 1e-12 && o < span - 1e-12
        })
        .collect();
    inside.sort_by(|a, b| wrap_angle(a.angle - x.angle).total_cmp(&wrap_angle(b.angle - x.angle)));
    let mut out = vec![LimitCurveSample {
        angle: x.angle,
        f: chart_coordinate(&x.lagrangian, &frame)?.s,
        frame: frame.clone(),
    }];
    for p in inside {
        out.push(LimitCurveSample {
            angle: p.angle,
            f: chart_coordinate(&p.lagrangian, &frame)?.s,
            frame: frame.clone(),
        });
    }
    let values: Vec<&DMatrix<f64>> = out.iter().map(|s| &s.f).collect();
    if monotone_sign(&values)?.is_none() {
        return Err(Error::Domain("limit curve chart is not monotone".into()));
    }
    Ok(out)
}

/// `(‖Δf‖₂, (det Δf)^{1/n})` for consecutive chart samples, with Frobenius
/// norm and `Δf` oriented to be positive semidefinite.
pub fn chart_increment_stats(chart: &[LimitCurveSample]) -> Result<Vec<(f64, f64)>> {
    if chart.len() < 2 {
        return Err(Error::InsufficientData("need at least two chart samples".into()));
    }
    let values: Vec<&DMatrix<f64>> = chart.iter().map(|s| &s.f).collect();
    let eps = monotone_sign(&values)?.ok_or_else(|| Error::Domain("chart is not monotone".into()))?;
    Ok(values
        .windows(2)
        .map(|w| {
            let d = (w[1] - w[0]) * eps;
            let n = d.nrows() as f64;
            let det = d.determinant().max(0.0);
            (frobenius(&d), det.powf(1.0 / n))
        })
        .collect())
}

/// Finite-difference rank over windows of angular width `h`: the number of
/// eigenvalues of `Δf` at least `0.05·‖Δf‖₂`.
pub fn rank_estimate(chart: &[LimitCurveSample], h: f64) -> Result<Vec<usize>> {
    if !(h > 0.0) {
        return Err(Error::Domain("window width must be positive".into()));
    }
    let values: Vec<&DMatrix<f64>> = chart.iter().map(|s| &s.f).collect();
    let eps = monotone_sign(&values)?.ok_or_else(|| Error::Domain("chart is not monotone".into()))?;
    let origin = chart.first().map(|s| s.angle).unwrap_or(0.0);
    let t: Vec<f64> = chart.iter().map(|s| wrap_angle(s.angle - origin)).collect();
    let mut ranks = Vec::new();
    let mut j = 0;
    for k in 0..chart.len() {
        j = j.max(k + 1);
        while j < chart.len() && t[j] - t[k] < h {
            j += 1;
        }
        if j >= chart.len() {
            break;
        }
        let d = (values[j] - values[k]) * eps;
        let norm = frobenius(&d);
        let rank = symmetric_eigenvalues(&d).iter().filter(|&&e| e >= 0.05 * norm).count();
        ranks.push(rank);
    }
    if ranks.is_empty() {
        return Err(Error::InsufficientData("no window of the requested width".into()));
    }
    Ok(ranks)
}
