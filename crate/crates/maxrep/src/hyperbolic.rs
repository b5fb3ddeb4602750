//! Poincaré disk geometry and word enumeration for Fuchsian groups.
//!
//! Points of the upper half plane are carried to the disk by the Cayley map
//! `w ↦ (w − i)/(w + i)`, so `i` becomes the centre `0`. A boundary point is
//! stored as an angle in `[0, 2π)`; the projective vector `(p, q)` (the point
//! `p/q` of `R ∪ {∞}`) has angle `−2·atan2(q, p)`.

use crate::error::{Error, Result};
use crate::exec::{flat_map_slice, ExecMode};
use crate::representations::{FuchsianPreset, RelationMode};
use nalgebra::Matrix2;
use num_complex::Complex64;
use std::collections::HashSet;
use std::f64::consts::{PI, TAU};

/// A point of the open unit disk.
pub type DiskPoint = Complex64;

/// Reduces an angle to `[0, 2π)`.
pub fn wrap_angle(t: f64) -> f64 {
    let r = t.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Signed difference `a − b` reduced to `(−π, π]`.
pub fn angle_diff(a: f64, b: f64) -> f64 {
    let d = wrap_angle(a - b);
    if d > PI {
        d - TAU
    } else {
        d
    }
}

/// Angle of the boundary point `p/q`.
pub fn angle_of_vector(p: f64, q: f64) -> f64 {
    wrap_angle(-2.0 * q.atan2(p))
}

/// Unit projective vector `(cos(θ/2), −sin(θ/2))` of a boundary angle.
pub fn vector_of_angle(theta: f64) -> (f64, f64) {
    let h = 0.5 * theta;
    (h.cos(), -h.sin())
}

/// An orientation-preserving isometry given by a real matrix of determinant one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusElement {
    m: Matrix2<f64>,
}

impl MobiusElement {
    pub fn new(m: Matrix2<f64>) -> Result<Self> {
        let det = m.determinant();
        if !((det - 1.0).abs() <= 1e-9 * m.norm_squared().max(1.0)) {
            return Err(Error::Domain(format!("Möbius matrix has determinant {det}")));
        }
        Ok(MobiusElement { m })
    }

    pub fn identity() -> Self {
        MobiusElement { m: Matrix2::identity() }
    }

    /// Rotation of the disk about `0` by the angle `t`.
    pub fn rotation(t: f64) -> Self {
        let (s, c) = (0.5 * t).sin_cos();
        MobiusElement { m: Matrix2::new(c, s, -s, c) }
    }

    pub fn matrix(&self) -> &Matrix2<f64> {
        &self.m
    }

    pub fn inverse(&self) -> Self {
        let m = self.m;
        MobiusElement { m: Matrix2::new(m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)]) }
    }

    pub fn trace(&self) -> f64 {
        self.m.trace()
    }

    fn disk_coefficients(&self) -> [Complex64; 4] {
        let i = Complex64::i();
        let one = Complex64::new(1.0, 0.0);
        let (a, b, c, d) = (self.m[(0, 0)], self.m[(0, 1)], self.m[(1, 0)], self.m[(1, 1)]);
        // K = C · g · adj(C) with C = [[1, −i], [1, i]], adj(C) = [[i, i], [−1, 1]].
        let g = [Complex64::new(a, 0.0), Complex64::new(b, 0.0), Complex64::new(c, 0.0), Complex64::new(d, 0.0)];
        let cm = [one, -i, one, i];
        let adj = [i, i, -one, one];
        let mul = |x: &[Complex64; 4], y: &[Complex64; 4]| {
            [
                x[0] * y[0] + x[1] * y[2],
                x[0] * y[1] + x[1] * y[3],
                x[2] * y[0] + x[3] * y[2],
                x[2] * y[1] + x[3] * y[3],
            ]
        };
        mul(&mul(&cm, &g), &adj)
    }

    /// Action on a closed-disk point.
    pub fn act(&self, z: DiskPoint) -> DiskPoint {
        let k = self.disk_coefficients();
        (k[0] * z + k[1]) / (k[2] * z + k[3])
    }

    /// Action on a boundary angle.
    pub fn act_angle(&self, theta: f64) -> f64 {
        let (p, q) = vector_of_angle(theta);
        let m = self.m;
        angle_of_vector(m[(0, 0)] * p + m[(0, 1)] * q, m[(1, 0)] * p + m[(1, 1)] * q)
    }
}

/// Möbius action in free-function form.
pub fn mobius_act(g: &MobiusElement, z: DiskPoint) -> DiskPoint {
    g.act(z)
}

/// Hyperbolic distance in the disk (curvature −1).
pub fn disk_distance(z: DiskPoint, w: DiskPoint) -> Result<f64> {
    if !(z.norm() < 1.0 && w.norm() < 1.0) {
        return Err(Error::Domain("distance needs interior points".into()));
    }
    let num = (z - w).norm();
    let den = (Complex64::new(1.0, 0.0) - z.conj() * w).norm();
    Ok(2.0 * (num / den).atanh())
}

/// `d(0, g·0) = arcosh(‖g‖_F² / 2)` for `g` of determinant one.
pub fn displacement(g: &Matrix2<f64>) -> f64 {
    (0.5 * g.norm_squared()).max(1.0).acosh()
}

/// Attracting and repelling boundary fixed points of a hyperbolic element.
pub fn fixed_points(g: &MobiusElement) -> Result<(f64, f64)> {
    let tr = g.trace();
    if !(tr.abs() > 2.0 + 1e-9) {
        return Err(Error::NotHyperbolic(tr));
    }
    let m = g.m;
    let disc = (tr * tr - 4.0).sqrt();
    let big = if tr > 0.0 { 0.5 * (tr + disc) } else { 0.5 * (tr - disc) };
    let small = 1.0 / big;
    let eigvec = |lam: f64| {
        let v1 = (m[(0, 1)], lam - m[(0, 0)]);
        let v2 = (lam - m[(1, 1)], m[(1, 0)]);
        if v1.0.hypot(v1.1) >= v2.0.hypot(v2.1) {
            v1
        } else {
            v2
        }
    };
    let a = eigvec(big);
    let r = eigvec(small);
    Ok((angle_of_vector(a.0, a.1), angle_of_vector(r.0, r.1)))
}

/// A closed boundary arc `[center − half_width, center + half_width]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryArc {
    pub center: f64,
    pub half_width: f64,
}

impl BoundaryArc {
    pub fn full() -> Self {
        BoundaryArc { center: 0.0, half_width: PI }
    }

    pub fn is_full(&self) -> bool {
        self.half_width >= PI
    }

    /// Counterclockwise start and end angles.
    pub fn endpoints(&self) -> (f64, f64) {
        (wrap_angle(self.center - self.half_width), wrap_angle(self.center + self.half_width))
    }

    pub fn contains(&self, theta: f64) -> bool {
        self.is_full() || angle_diff(theta, self.center).abs() <= self.half_width
    }

    /// Arc from `start` counterclockwise to `end`.
    pub fn from_endpoints(start: f64, end: f64) -> Self {
        let width = wrap_angle(end - start);
        BoundaryArc { center: wrap_angle(start + 0.5 * width), half_width: 0.5 * width }
    }
}

/// Lebesgue measure of an arc, in `(0, 2π]`.
pub fn arc_lebesgue(a: &BoundaryArc) -> f64 {
    2.0 * a.half_width.min(PI)
}

/// Shadow `𝒪_R(b₀, z)`: directions of geodesic rays from `b₀` meeting the
/// closed ball `B(z, R)`.
pub fn shadow(b0: DiskPoint, z: DiskPoint, r: f64) -> Result<BoundaryArc> {
    if !(r > 0.0) {
        return Err(Error::Domain("shadow radius must be positive".into()));
    }
    let d = disk_distance(b0, z)?;
    if d <= r {
        return Ok(BoundaryArc::full());
    }
    let one = Complex64::new(1.0, 0.0);
    let moved = (z - b0) / (one - b0.conj() * z);
    let center = wrap_angle(moved.arg());
    let half = (r.sinh() / d.sinh()).min(1.0).asin();
    if b0.norm() == 0.0 {
        return Ok(BoundaryArc { center, half_width: half });
    }
    let back = |t: f64| {
        let u = Complex64::from_polar(1.0, t);
        wrap_angle(((u + b0) / (one + b0.conj() * u)).arg())
    };
    Ok(BoundaryArc::from_endpoints(back(center - half), back(center + half)))
}

/// A reduced word over an alphabet of at most four letters, packed two bits
/// per letter. Ordering is by length, then lexicographic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word {
    len: u8,
    code: u64,
}

impl Word {
    pub const MAX_LEN: usize = 32;

    pub fn empty() -> Self {
        Word::default()
    }

    pub fn from_letters(letters: &[u8]) -> Result<Self> {
        if letters.len() > Self::MAX_LEN {
            return Err(Error::ResourceLimit(format!("words are capped at {} letters", Self::MAX_LEN)));
        }
        let mut w = Word::empty();
        for &l in letters {
            if l > 3 {
                return Err(Error::Config(format!("letter {l} outside a four-letter alphabet")));
            }
            w = w.push(l);
        }
        Ok(w)
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn letter(&self, i: usize) -> u8 {
        assert!(i < self.len());
        ((self.code >> (2 * (self.len() - 1 - i))) & 3) as u8
    }

    pub fn last(&self) -> Option<u8> {
        if self.len == 0 {
            None
        } else {
            Some((self.code & 3) as u8)
        }
    }

    /// Appends a letter.
    pub fn push(self, l: u8) -> Word {
        assert!(self.len() < Self::MAX_LEN && l < 4);
        Word { len: self.len + 1, code: (self.code << 2) | l as u64 }
    }

    pub fn letters(&self) -> impl Iterator<Item = u8> + '_ {
        (0..self.len()).map(move |i| self.letter(i))
    }

    /// Concatenation (no reduction).
    pub fn concat(&self, other: &Word) -> Result<Word> {
        if self.len() + other.len() > Self::MAX_LEN {
            return Err(Error::ResourceLimit("concatenated word too long".into()));
        }
        Ok(Word { len: self.len + other.len, code: (self.code << (2 * other.len())) | other.code })
    }

    /// Formal inverse: reversed word with each letter replaced by its inverse.
    pub fn inverse(&self, inverse_letter: &[u8]) -> Word {
        let mut w = Word::empty();
        for i in (0..self.len()).rev() {
            w = w.push(inverse_letter[self.letter(i) as usize]);
        }
        w
    }

    /// Human-readable form over the given symbols; the empty word is `e`.
    pub fn render(&self, symbols: &[&str]) -> String {
        if self.is_empty() {
            return "e".into();
        }
        self.letters().map(|l| symbols[l as usize]).collect()
    }
}

/// One group element of a word ball.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitElement {
    pub word: Word,
    /// Product of the generator matrices along the word.
    pub matrix: Matrix2<f64>,
    /// Exact integer matrix, normalised up to sign, when the preset has one.
    pub integer: Option<[i64; 4]>,
    /// Image of the basepoint `0`.
    pub disk_point: DiskPoint,
}

fn normalize_sign(m: [i64; 4]) -> [i64; 4] {
    match m.iter().find(|&&x| x != 0) {
        Some(&x) if x < 0 => [-m[0], -m[1], -m[2], -m[3]],
        _ => m,
    }
}

fn int_mul(a: &[i64; 4], b: &[i64; 4]) -> Option<[i64; 4]> {
    let e = |x: i64, y: i64, z: i64, w: i64| x.checked_mul(y)?.checked_add(z.checked_mul(w)?);
    Some([
        e(a[0], b[0], a[1], b[2])?,
        e(a[0], b[1], a[1], b[3])?,
        e(a[2], b[0], a[3], b[2])?,
        e(a[2], b[1], a[3], b[3])?,
    ])
}

#[derive(Clone)]
struct Node {
    word: Word,
    matrix: Matrix2<f64>,
    integer: Option<[i64; 4]>,
}

/// Word ball of radius `l`: one representative per group element, in
/// (length, lexicographic) order, with the default execution mode.
pub fn orbit_ball(preset: &FuchsianPreset, l: usize) -> Result<Vec<OrbitElement>> {
    orbit_ball_with(preset, l, ExecMode::default())
}

/// [`orbit_ball`] with an explicit execution mode.
pub fn orbit_ball_with(preset: &FuchsianPreset, l: usize, mode: ExecMode) -> Result<Vec<OrbitElement>> {
    if l > preset.ball_cap() {
        return Err(Error::ResourceLimit(format!(
            "word balls of preset '{}' are capped at L = {}",
            preset.name(),
            preset.ball_cap()
        )));
    }
    let gens = preset.generators();
    let int_gens = preset.integer_generators();
    let inverse = preset.letter_inverse();
    let k = gens.len() as u8;
    let mode_rel = preset.relation_mode();
    let root = Node { word: Word::empty(), matrix: Matrix2::identity(), integer: int_gens.map(|_| [1, 0, 0, 1]) };
    let mut seen: HashSet<[i64; 4]> = HashSet::new();
    if let Some(i) = root.integer {
        seen.insert(i);
    }
    let mut all = vec![root.clone()];
    let mut level = vec![root];
    let overflow = std::sync::atomic::AtomicBool::new(false);
    for _ in 0..l {
        let children: Vec<Node> = flat_map_slice(mode, &level, |node| {
            let mut out = Vec::with_capacity(k as usize);
            for a in 0..k {
                if mode_rel == RelationMode::FreeReduction {
                    if let Some(last) = node.word.last() {
                        if inverse[last as usize] == a {
                            continue;
                        }
                    }
                }
                let integer = match (node.integer, int_gens) {
                    (Some(m), Some(g)) => match int_mul(&m, &g[a as usize]) {
                        Some(p) => Some(normalize_sign(p)),
                        None => {
                            overflow.store(true, std::sync::atomic::Ordering::Relaxed);
                            None
                        }
                    },
                    _ => None,
                };
                out.push(Node { word: node.word.push(a), matrix: node.matrix * gens[a as usize], integer });
            }
            out
        });
        if overflow.load(std::sync::atomic::Ordering::Relaxed) {
            return Err(Error::ResourceLimit("integer matrix entries overflowed".into()));
        }
        level = match mode_rel {
            RelationMode::FreeReduction => children,
            RelationMode::HashDedup => children
                .into_iter()
                .filter(|c| seen.insert(c.integer.expect("hash dedup needs integer matrices")))
                .collect(),
        };
        all.extend(level.iter().cloned());
    }
    Ok(all
        .into_iter()
        .map(|n| OrbitElement {
            word: n.word,
            disk_point: MobiusElement { m: n.matrix }.act(Complex64::new(0.0, 0.0)),
            matrix: n.matrix,
            integer: n.integer,
        })
        .collect())
}

/// Group-element arithmetic used by [`free_ball_map`].
pub trait WordAlgebra: Sync {
    type Elem: Clone + Send + Sync;
    fn identity(&self) -> Self::Elem;
    /// Right multiplication by a generator.
    fn step(&self, e: &Self::Elem, letter: u8) -> Self::Elem;
}

/// Real 2×2 matrices under a list of generators.
pub struct MatrixAlgebra<'a>(pub &'a [Matrix2<f64>]);

impl WordAlgebra for MatrixAlgebra<'_> {
    type Elem = Matrix2<f64>;
    fn identity(&self) -> Matrix2<f64> {
        Matrix2::identity()
    }
    fn step(&self, e: &Matrix2<f64>, letter: u8) -> Matrix2<f64> {
        e * self.0[letter as usize]
    }
}

/// Two generator lists evaluated on the same word.
pub struct PairAlgebra<'a>(pub &'a [Matrix2<f64>], pub &'a [Matrix2<f64>]);

impl WordAlgebra for PairAlgebra<'_> {
    type Elem = (Matrix2<f64>, Matrix2<f64>);
    fn identity(&self) -> Self::Elem {
        (Matrix2::identity(), Matrix2::identity())
    }
    fn step(&self, e: &Self::Elem, letter: u8) -> Self::Elem {
        (e.0 * self.0[letter as usize], e.1 * self.1[letter as usize])
    }
}

/// Maps `f(length, element)` over every freely reduced word of length `≤ l`
/// without materialising the ball. Subtrees below each length-two prefix
/// are walked depth first and concatenated in prefix order, so the output
/// order is deterministic and independent of the execution mode.
pub fn free_ball_map<A, T, F>(alg: &A, inverse: &[u8], l: usize, mode: ExecMode, f: F) -> Vec<T>
where
    A: WordAlgebra,
    T: Send,
    F: Fn(usize, &A::Elem) -> T + Sync + Send,
{
    let k = inverse.len() as u8;
    let id = alg.identity();
    let mut head = vec![f(0, &id)];
    if l == 0 {
        return head;
    }
    let mut prefixes = Vec::new();
    for a in 0..k {
        let ea = alg.step(&id, a);
        head.push(f(1, &ea));
        if l >= 2 {
            for b in 0..k {
                if inverse[a as usize] != b {
                    prefixes.push((b, alg.step(&ea, b)));
                }
            }
        }
    }
    fn walk<A: WordAlgebra, T, F: Fn(usize, &A::Elem) -> T>(
        alg: &A,
        inverse: &[u8],
        e: &A::Elem,
        last: u8,
        depth: usize,
        l: usize,
        f: &F,
        out: &mut Vec<T>,
    ) {
        out.push(f(depth, e));
        if depth == l {
            return;
        }
        for a in 0..inverse.len() as u8 {
            if inverse[last as usize] != a {
                let next = alg.step(e, a);
                walk(alg, inverse, &next, a, depth + 1, l, f, out);
            }
        }
    }
    let tails = flat_map_slice(mode, &prefixes, |(last, e)| {
        let mut out = Vec::new();
        walk(alg, inverse, e, *last, 2, l, &f, &mut out);
        out
    });
    head.extend(tails);
    head
}

/// Size of the free reduced-word ball of rank 2: `1 + 2(3^L − 1)`.
pub fn free_rank2_ball_size(l: u32) -> u64 {
    1 + 2 * (3u64.pow(l) - 1)
}
