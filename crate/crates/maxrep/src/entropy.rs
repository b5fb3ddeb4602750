//! Functional spectra over word balls, critical-exponent estimation and the
//! orbit-counting experiments.
//!
//! The exponent of a functional `φ` is estimated from the counting function
//! `N(T) = #{γ : φ(κ(ρ(γ))) ≤ T}` by a least-squares fit of `log N(T)`
//! against `T`, cross-checked by locating the exponent `s` at which the
//! shell contributions to `Σ e^{−sφ}` stop growing.

use crate::error::{Error, Result};
use crate::exec::{map_slice, ExecMode};
use crate::flags::{gromov_product, Flag};
use crate::hyperbolic::{
    arc_lebesgue, displacement, free_ball_map, orbit_ball_with, shadow, OrbitElement, PairAlgebra, WordAlgebra,
};
use crate::linalg::vstack;
use crate::positivity::Lagrangian;
use crate::representations::{lift_diagonal, log_sigma1, rho_diagonal, rho_interleaved, FuchsianPreset, RelationMode, SymplecticRep};
use crate::sp::{CartanVector, WeightFunctional};
use crate::wedge::plucker;
use arrayvec::ArrayVec;
use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;

/// At most this many functionals are carried per sample.
pub const MAX_FUNCTIONALS: usize = 4;
/// Minimum number of samples inside an estimation window.
pub const MIN_WINDOW_SAMPLES: usize = 100;
/// Grid points for the counting-curve regression.
pub const GRID_POINTS: usize = 64;
/// Shells used by the divergence scan.
pub const SCAN_SHELLS: usize = 8;
/// Default width `T_max − T_min` of the counting window.
pub const DEFAULT_WINDOW_WIDTH: f64 = 3.0;
/// Largest word length for streamed (non-materialised) free balls.
pub const STREAM_CAP: usize = 16;

/// Per-element data for the Poincaré series.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionalSample {
    pub word_len: u8,
    /// `d_𝔻(0, γ·0)` for the underlying Fuchsian element.
    pub displacement: f64,
    /// `φ(κ(ρ(γ)))` in the order the functionals were requested.
    pub values: ArrayVec<f64, MAX_FUNCTIONALS>,
}

fn check_functionals(functionals: &[WeightFunctional]) -> Result<()> {
    if functionals.is_empty() || functionals.len() > MAX_FUNCTIONALS {
        return Err(Error::Config(format!("between 1 and {MAX_FUNCTIONALS} functionals may be requested")));
    }
    Ok(())
}

fn sample_from_cartan(
    word_len: usize,
    disp: f64,
    kappa: &CartanVector,
    functionals: &[WeightFunctional],
) -> Result<FunctionalSample> {
    let mut values = ArrayVec::new();
    for phi in functionals {
        values.push(phi.evaluate(kappa)?);
    }
    Ok(FunctionalSample { word_len: word_len as u8, displacement: disp, values })
}

/// One sample per orbit element.
pub fn functional_spectrum(
    rep: &SymplecticRep,
    elements: &[OrbitElement],
    functionals: &[WeightFunctional],
) -> Result<Vec<FunctionalSample>> {
    functional_spectrum_with(rep, elements, functionals, ExecMode::default())
}

/// [`functional_spectrum`] with an explicit execution mode.
pub fn functional_spectrum_with(
    rep: &SymplecticRep,
    elements: &[OrbitElement],
    functionals: &[WeightFunctional],
    mode: ExecMode,
) -> Result<Vec<FunctionalSample>> {
    check_functionals(functionals)?;
    crate::exec::try_map_slice(mode, elements, |el| {
        let kappa = rep.cartan(&el.word)?;
        sample_from_cartan(el.word.len(), displacement(&el.matrix), &kappa, functionals)
    })
}

struct RepAlgebra<'a> {
    base: &'a [Matrix2<f64>],
    rep: &'a SymplecticRep,
    generic: Vec<DMatrix<f64>>,
}

#[derive(Clone)]
struct RepElem {
    base: Matrix2<f64>,
    b1: Matrix2<f64>,
    b2: Matrix2<f64>,
    full: Option<DMatrix<f64>>,
}

impl WordAlgebra for RepAlgebra<'_> {
    type Elem = RepElem;
    fn identity(&self) -> RepElem {
        let full = match self.rep {
            SymplecticRep::Generic { n, .. } => Some(DMatrix::identity(2 * n, 2 * n)),
            _ => None,
        };
        RepElem { base: Matrix2::identity(), b1: Matrix2::identity(), b2: Matrix2::identity(), full }
    }
    fn step(&self, e: &RepElem, l: u8) -> RepElem {
        let l = l as usize;
        let (b1, b2, full) = match self.rep {
            SymplecticRep::Diagonal { gens, .. } => (e.b1 * gens[l], e.b2, None),
            SymplecticRep::Interleaved { gens1, gens2 } => (e.b1 * gens1[l], e.b2 * gens2[l], None),
            SymplecticRep::Generic { .. } => (e.b1, e.b2, e.full.as_ref().map(|m| m * &self.generic[l])),
        };
        RepElem { base: e.base * self.base[l], b1, b2, full }
    }
}

fn cartan_of_elem(rep: &SymplecticRep, e: &RepElem) -> CartanVector {
    match rep {
        SymplecticRep::Diagonal { n, .. } => CartanVector::from_logs(vec![log_sigma1(&e.b1); *n]),
        SymplecticRep::Interleaved { .. } => CartanVector::from_logs(vec![log_sigma1(&e.b1), log_sigma1(&e.b2)]),
        SymplecticRep::Generic { n, .. } => {
            let s = crate::linalg::singular_values(e.full.as_ref().expect("generic element"));
            CartanVector::from_logs(s[..*n].iter().map(|x| x.ln()).collect())
        }
    }
}

/// Spectrum over the whole word ball of radius `l`. Free presets are
/// streamed depth first up to [`STREAM_CAP`]; other presets are enumerated
/// with deduplication.
pub fn ball_spectrum(
    preset: &FuchsianPreset,
    rep: &SymplecticRep,
    l: usize,
    functionals: &[WeightFunctional],
    mode: ExecMode,
) -> Result<Vec<FunctionalSample>> {
    check_functionals(functionals)?;
    if rep.generator_count() != preset.generators().len() {
        return Err(Error::Config("representation and preset alphabets differ".into()));
    }
    match preset.relation_mode() {
        RelationMode::HashDedup => {
            let ball = orbit_ball_with(preset, l, mode)?;
            functional_spectrum_with(rep, &ball, functionals, mode)
        }
        RelationMode::FreeReduction => {
            if l > STREAM_CAP {
                return Err(Error::ResourceLimit(format!("streamed balls are capped at L = {STREAM_CAP}")));
            }
            let alg = RepAlgebra { base: preset.generators(), rep, generic: rep.images() };
            let out = free_ball_map(&alg, preset.letter_inverse(), l, mode, |len, e| {
                sample_from_cartan(len, displacement(&e.base), &cartan_of_elem(rep, e), functionals)
            });
            out.into_iter().collect()
        }
    }
}

/// Result of a critical-exponent fit.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentEstimate {
    pub delta_hat: f64,
    pub stderr: f64,
    pub window: (f64, f64),
    /// `(T, N(T))` on the regression grid.
    pub count_curve: Vec<(f64, usize)>,
    /// Exponent located by the shell-sum scan, when enough shells are occupied.
    pub scan_delta: Option<f64>,
    /// Set when the scan disagrees with the fit by more than `2·stderr`.
    pub warning: bool,
    pub samples_in_window: usize,
}

fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let m = x.len() as f64;
    let mx = x.iter().sum::<f64>() / m;
    let my = y.iter().sum::<f64>() / m;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    let stderr = if x.len() > 2 { (ssr / (m - 2.0) / sxx).sqrt() } else { 0.0 };
    (slope, intercept, stderr)
}

fn sorted_finite(values: &[f64]) -> Result<Vec<f64>> {
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Domain("non-finite functional value".into()));
    }
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    Ok(v)
}

fn shell_scan(sorted: &[f64], window: (f64, f64)) -> Option<f64> {
    let (lo, hi) = window;
    let width = (hi - lo) / SCAN_SHELLS as f64;
    let mut shells: Vec<(f64, &[f64])> = Vec::new();
    for j in 0..SCAN_SHELLS {
        let a = lo + j as f64 * width;
        let b = a + width;
        let i0 = sorted.partition_point(|&v| v <= a);
        let i1 = sorted.partition_point(|&v| v <= b);
        if i1 > i0 {
            shells.push((a + 0.5 * width, &sorted[i0..i1]));
        }
    }
    if shells.len() < 3 {
        return None;
    }
    let slope_at = |s: f64| {
        let x: Vec<f64> = shells.iter().map(|(c, _)| *c).collect();
        let y: Vec<f64> = shells
            .iter()
            .map(|(c, vals)| -s * c + vals.iter().map(|v| (-s * (v - c)).exp()).sum::<f64>().ln())
            .collect();
        linear_fit(&x, &y).0
    };
    let (mut a, mut b) = (0.0, 20.0);
    if slope_at(a) <= 0.0 {
        return Some(0.0);
    }
    if slope_at(b) >= 0.0 {
        return None;
    }
    for _ in 0..80 {
        let m = 0.5 * (a + b);
        if slope_at(m) > 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    Some(0.5 * (a + b))
}

/// Fits the exponent on `window = (T_min, T_max)`.
pub fn estimate_exponent_values(values: &[f64], window: (f64, f64)) -> Result<ExponentEstimate> {
    let (lo, hi) = window;
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Domain(format!("invalid window ({lo}, {hi})")));
    }
    let sorted = sorted_finite(values)?;
    let (Some(&min), Some(&max)) = (sorted.first(), sorted.last()) else {
        return Err(Error::InsufficientData("no samples".into()));
    };
    if lo < min.min(0.0) || hi > max {
        return Err(Error::Domain(format!("window ({lo}, {hi}) leaves the observed range [{min}, {max}]")));
    }
    let count = |t: f64| sorted.partition_point(|&v| v <= t);
    let inside = count(hi) - count(lo);
    if inside < MIN_WINDOW_SAMPLES {
        return Err(Error::InsufficientData(format!(
            "{inside} samples in window ({lo:.4}, {hi:.4}); at least {MIN_WINDOW_SAMPLES} needed"
        )));
    }
    let mut curve = Vec::with_capacity(GRID_POINTS);
    for j in 0..GRID_POINTS {
        let t = lo + (hi - lo) * j as f64 / (GRID_POINTS - 1) as f64;
        let c = count(t);
        if c > 0 {
            curve.push((t, c));
        }
    }
    if curve.len() < 3 {
        return Err(Error::InsufficientData("counting curve is empty on the window".into()));
    }
    let x: Vec<f64> = curve.iter().map(|p| p.0).collect();
    let y: Vec<f64> = curve.iter().map(|p| (p.1 as f64).ln()).collect();
    let (slope, _, stderr) = linear_fit(&x, &y);
    let scan = shell_scan(&sorted, window);
    let warning = match scan {
        Some(s) => (s - slope).abs() > 2.0 * stderr,
        None => true,
    };
    Ok(ExponentEstimate {
        delta_hat: slope,
        stderr,
        window,
        count_curve: curve,
        scan_delta: scan,
        warning,
        samples_in_window: inside,
    })
}

/// Fits the exponent of the functional at position `k` of each sample.
pub fn estimate_exponent(samples: &[FunctionalSample], k: usize, window: (f64, f64)) -> Result<ExponentEstimate> {
    let values = column(samples, k)?;
    estimate_exponent_values(&values, window)
}

fn column(samples: &[FunctionalSample], k: usize) -> Result<Vec<f64>> {
    samples
        .iter()
        .map(|s| s.values.get(k).copied().ok_or(Error::Index { index: k, n: s.values.len() }))
        .collect()
}

/// `Σ e^{−s·v}` over the given values.
pub fn poincare_partial_sum(values: &[f64], s: f64) -> f64 {
    values.iter().map(|v| (-s * v).exp()).sum()
}

/// Largest `T` with `N_{l_small}(T) = N_{l_large}(T)`: the smallest value
/// carried by a word longer than `l_small`.
pub fn completeness_bound(lens: &[u8], values: &[f64], l_small: usize) -> Result<f64> {
    lens.iter()
        .zip(values)
        .filter(|(&l, _)| l as usize > l_small)
        .map(|(_, &v)| v)
        .min_by(|a, b| a.total_cmp(b))
        .ok_or_else(|| Error::InsufficientData(format!("no words longer than {l_small} in the ball")))
}

/// Completeness-controlled fit: `T_max` from the probe pair
/// `(l_large − 2, l_large)`, `T_min = T_max − width`.
pub fn estimate_with_completeness(lens: &[u8], values: &[f64], l_large: usize, width: f64) -> Result<ExponentEstimate> {
    if l_large < 2 {
        return Err(Error::InsufficientData("completeness probing needs L >= 2".into()));
    }
    let t_max = completeness_bound(lens, values, l_large - 2)?;
    let hi = t_max - 1e-9 * t_max.abs().max(1.0);
    let lo = (hi - width).max(0.0);
    estimate_exponent_values(values, (lo, hi))
}

/// Estimates for several functionals over one ball.
#[derive(Debug, Clone)]
pub struct EntropyReport {
    pub l: usize,
    pub ball_size: usize,
    pub rows: Vec<(WeightFunctional, ExponentEstimate)>,
}

/// Exponents of each functional over the ball of radius `l`, with a fixed
/// window or (when `window` is `None`) the completeness window of width `width`.
pub fn entropy_experiment(
    preset: &FuchsianPreset,
    rep: &SymplecticRep,
    l: usize,
    functionals: &[WeightFunctional],
    window: Option<(f64, f64)>,
    width: f64,
    mode: ExecMode,
) -> Result<EntropyReport> {
    let samples = ball_spectrum(preset, rep, l, functionals, mode)?;
    let lens: Vec<u8> = samples.iter().map(|s| s.word_len).collect();
    let mut rows = Vec::new();
    for (k, phi) in functionals.iter().enumerate() {
        let values = column(&samples, k)?;
        let est = match window {
            Some(w) => estimate_exponent_values(&values, w)?,
            None => estimate_with_completeness(&lens, &values, l, width)?,
        };
        rows.push((*phi, est));
    }
    Ok(EntropyReport { l, ball_size: samples.len(), rows })
}

/// Verdict of the Manhattan experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ManhattanVerdict {
    ConjugateConsistent,
    StrictDrop,
}

/// Exponents of `l₁`, `l₂` and `(l₁ + l₂)/2 = ω̂_α(κ(ρ_{1,2}))`.
#[derive(Debug, Clone)]
pub struct ManhattanReport {
    pub l: usize,
    pub ball_size: usize,
    pub est1: ExponentEstimate,
    pub est2: ExponentEstimate,
    pub est_avg: ExponentEstimate,
    pub delta1: f64,
    pub delta2: f64,
    pub delta_avg: f64,
    /// `δ̂_avg − min(δ̂₁, δ̂₂)`.
    pub gap: f64,
    pub verdict: ManhattanVerdict,
}

/// Per-element `(word length, l₁, l₂, ω̂_α(κ(ρ_{1,2}(γ))))`.
pub fn pair_spectrum(p1: &FuchsianPreset, p2: &FuchsianPreset, l: usize, mode: ExecMode) -> Result<Vec<(u8, f64, f64, f64)>> {
    let rep = rho_interleaved(p1, p2)?;
    let omega_hat = |a: &Matrix2<f64>, b: &Matrix2<f64>| {
        let k = CartanVector::from_logs(vec![log_sigma1(a), log_sigma1(b)]);
        WeightFunctional::OmegaHatAlpha.evaluate(&k).expect("rank two")
    };
    match p1.relation_mode() {
        RelationMode::HashDedup => {
            let ball = orbit_ball_with(p1, l, mode)?;
            crate::exec::try_map_slice(mode, &ball, |el| {
                let SymplecticRep::Interleaved { gens1, gens2 } = &rep else { unreachable!() };
                let a = el.word.letters().fold(Matrix2::identity(), |m, x| m * gens1[x as usize]);
                let b = el.word.letters().fold(Matrix2::identity(), |m, x| m * gens2[x as usize]);
                Ok((el.word.len() as u8, displacement(&a), displacement(&b), omega_hat(&a, &b)))
            })
        }
        RelationMode::FreeReduction => {
            if l > STREAM_CAP {
                return Err(Error::ResourceLimit(format!("streamed balls are capped at L = {STREAM_CAP}")));
            }
            let alg = PairAlgebra(p1.generators(), p2.generators());
            Ok(free_ball_map(&alg, p1.letter_inverse(), l, mode, |len, (a, b)| {
                (len as u8, displacement(a), displacement(b), omega_hat(a, b))
            }))
        }
    }
}

/// Compares the exponents of `l₁`, `l₂` and `(l₁ + l₂)/2`; the verdict is
/// conjugate-consistent iff `δ̂_avg − min(δ̂₁, δ̂₂) ≥ −0.05`.
pub fn manhattan_experiment(
    p1: &FuchsianPreset,
    p2: &FuchsianPreset,
    l: usize,
    width: f64,
    mode: ExecMode,
) -> Result<ManhattanReport> {
    let data = pair_spectrum(p1, p2, l, mode)?;
    let lens: Vec<u8> = data.iter().map(|d| d.0).collect();
    let pick = |f: fn(&(u8, f64, f64, f64)) -> f64| data.iter().map(f).collect::<Vec<f64>>();
    let est1 = estimate_with_completeness(&lens, &pick(|d| d.1), l, width)?;
    let est2 = estimate_with_completeness(&lens, &pick(|d| d.2), l, width)?;
    let est_avg = estimate_with_completeness(&lens, &pick(|d| d.3), l, width)?;
    let (delta1, delta2, delta_avg) = (est1.delta_hat, est2.delta_hat, est_avg.delta_hat);
    let gap = delta_avg - delta1.min(delta2);
    let verdict = if gap >= -0.05 { ManhattanVerdict::ConjugateConsistent } else { ManhattanVerdict::StrictDrop };
    Ok(ManhattanReport { l, ball_size: data.len(), est1, est2, est_avg, delta1, delta2, delta_avg, gap, verdict })
}

/// Per-element shadow data: `(arc measure, e^{−α(κ(ρ_D(γ)))})`.
#[derive(Debug, Clone)]
pub struct ShadowReport {
    pub r: f64,
    pub l: usize,
    pub pairs: Vec<(f64, f64)>,
    pub excluded: usize,
    /// Slope of `log arc` against `log e^{−α}`.
    pub slope: f64,
    pub ratio_min: f64,
    pub ratio_max: f64,
    /// `ratio_max / ratio_min` for `ratio = arc / e^{−α}`.
    pub ratio_spread: f64,
}

fn check_shadow_pre(preset: &FuchsianPreset, r: f64, l: usize) -> Result<()> {
    if !preset.is_lattice() {
        return Err(Error::Config("shadow experiments need a lattice preset".into()));
    }
    if !(r >= preset.adequacy_radius()) {
        return Err(Error::Config(format!(
            "radius {r} is below the adequacy radius {:.4} of the preset",
            preset.adequacy_radius()
        )));
    }
    if l < 6 {
        return Err(Error::Config("shadow experiments need L >= 6".into()));
    }
    Ok(())
}

/// Shadow-lemma regression for `ρ_D` with Lebesgue arc measure.
pub fn shadow_lemma_experiment(preset: &FuchsianPreset, n: usize, r: f64, l: usize, mode: ExecMode) -> Result<ShadowReport> {
    check_shadow_pre(preset, r, l)?;
    let rep = rho_diagonal(preset, n)?;
    let ball = orbit_ball_with(preset, l, mode)?;
    let origin = Complex64::new(0.0, 0.0);
    let rows: Vec<Option<(f64, f64)>> = crate::exec::try_map_slice(mode, &ball, |el| {
        if displacement(&el.matrix) <= r {
            return Ok(None);
        }
        let arc = shadow(origin, el.disk_point, r)?;
        if arc.is_full() {
            return Ok(None);
        }
        let alpha = WeightFunctional::Alpha.evaluate(&rep.cartan(&el.word)?)?;
        Ok(Some((arc_lebesgue(&arc), (-alpha).exp())))
    })?;
    let excluded = rows.iter().filter(|r| r.is_none()).count();
    let pairs: Vec<(f64, f64)> = rows.into_iter().flatten().collect();
    if pairs.len() < 3 {
        return Err(Error::InsufficientData("too few elements outside the radius".into()));
    }
    let x: Vec<f64> = pairs.iter().map(|p| p.1.ln()).collect();
    let y: Vec<f64> = pairs.iter().map(|p| p.0.ln()).collect();
    let (slope, _, _) = linear_fit(&x, &y);
    let ratios = pairs.iter().map(|p| p.0 / p.1);
    let ratio_min = ratios.clone().fold(f64::INFINITY, f64::min);
    let ratio_max = ratios.fold(0.0, f64::max);
    Ok(ShadowReport { r, l, pairs, excluded, slope, ratio_min, ratio_max, ratio_spread: ratio_max / ratio_min })
}

/// `ξ(θ) = span[p Iₙ; q Iₙ]` for the diagonal embedding.
pub fn diagonal_limit_lagrangian(theta: f64, n: usize) -> Lagrangian {
    let (p, q) = crate::hyperbolic::vector_of_angle(theta);
    let basis = vstack(&(DMatrix::identity(n, n) * p), &(DMatrix::identity(n, n) * q));
    Lagrangian::new(basis).expect("diagonal limit subspaces are Lagrangian")
}

/// Ratio data comparing shadow arcs with the Gromov-product prediction.
#[derive(Debug, Clone)]
pub struct AhlforsReport {
    pub r: f64,
    pub l: usize,
    /// `(arc measure, exp(½ ω̂₁[F_x, F_y]))` per element.
    pub pairs: Vec<(f64, f64)>,
    pub ratio_min: f64,
    pub ratio_max: f64,
    pub ratio_spread: f64,
    /// Largest Gromov-product value encountered (expected `≤ 0`).
    pub max_gromov: f64,
}

/// For each `z = γ·0` outside the radius, compares the arc measure of the
/// shadow with `exp(δ · ½ ω̂₁)` where `ω̂₁ = (2/n) ω₁` is evaluated on the
/// Gromov product of the line flags at `ξ(x_z)`, `ξ(y_z)` and `δ = 1`.
pub fn ahlfors_slope_experiment(preset: &FuchsianPreset, n: usize, r: f64, l: usize, mode: ExecMode) -> Result<AhlforsReport> {
    check_shadow_pre(preset, r, l)?;
    let ball = orbit_ball_with(preset, l, mode)?;
    let origin = Complex64::new(0.0, 0.0);
    let flag_at = |theta: f64| -> Result<Flag> {
        let v = plucker(&diagonal_limit_lagrangian(theta, n))?;
        Flag::line_and_annihilator(&v)
    };
    let rows: Vec<Option<(f64, f64, f64)>> = crate::exec::try_map_slice(mode, &ball, |el| {
        if displacement(&el.matrix) <= r {
            return Ok(None);
        }
        let arc = shadow(origin, el.disk_point, r)?;
        if arc.is_full() {
            return Ok(None);
        }
        let (x, y) = arc.endpoints();
        let g = gromov_product(&flag_at(x)?, &flag_at(y)?)?;
        let w1 = g.get(1).expect("line index present");
        let omega_hat1 = 2.0 / n as f64 * w1;
        Ok(Some((arc_lebesgue(&arc), (0.5 * omega_hat1).exp(), g.values.iter().copied().fold(f64::MIN, f64::max))))
    })?;
    let rows: Vec<(f64, f64, f64)> = rows.into_iter().flatten().collect();
    if rows.len() < 3 {
        return Err(Error::InsufficientData("too few elements outside the radius".into()));
    }
    let pairs: Vec<(f64, f64)> = rows.iter().map(|r| (r.0, r.1)).collect();
    let max_gromov = rows.iter().map(|r| r.2).fold(f64::MIN, f64::max);
    let ratios = pairs.iter().map(|p| p.0 / p.1);
    let ratio_min = ratios.clone().fold(f64::INFINITY, f64::min);
    let ratio_max = ratios.fold(0.0, f64::max);
    Ok(AhlforsReport { r, l, pairs, ratio_min, ratio_max, ratio_spread: ratio_max / ratio_min, max_gromov })
}

/// Lift helper re-exported for callers building `ρ_D` images directly.
pub fn diagonal_image(g: &Matrix2<f64>, n: usize) -> DMatrix<f64> {
    lift_diagonal(g, n)
}

/// Maps `f` over samples with the requested mode (kept for callers that
/// post-process spectra in parallel).
pub fn map_samples<U: Send>(samples: &[FunctionalSample], mode: ExecMode, f: impl Fn(&FunctionalSample) -> U + Sync + Send) -> Vec<U> {
    map_slice(mode, samples, f)
}
