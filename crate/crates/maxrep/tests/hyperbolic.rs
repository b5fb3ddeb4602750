use maxrep::exec::ExecMode;
use maxrep::hyperbolic::*;
use maxrep::representations::FuchsianPreset;
use maxrep::Error;
use nalgebra::Matrix2;
use num_complex::Complex64;
use proptest::prelude::*;
use std::collections::HashSet;
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_mobius(seed: u64) -> MobiusElement {
    let mut rng = maxrep::random::rng(seed);
    let g = maxrep::random::gaussian(&mut rng, 2, 2);
    let mut m = Matrix2::new(g[(0, 0)], g[(0, 1)], g[(1, 0)], g[(1, 1)]);
    if m.determinant() < 0.0 {
        m.swap_columns(0, 1);
    }
    MobiusElement::new(m / m.determinant().sqrt()).unwrap()
}

fn random_disk_point(seed: u64, max_radius: f64) -> Complex64 {
    use rand::Rng;
    let mut rng = maxrep::random::rng(seed);
    Complex64::from_polar(rng.random_range(0.0..max_radius), rng.random_range(-PI..PI))
}

#[test]
fn mobius_examples() {
    for seed in 0..20 {
        let z = random_disk_point(seed, 0.99);
        assert!((MobiusElement::identity().act(z) - z).norm() < 1e-15);
        let r = MobiusElement::rotation(seed as f64 * 0.3);
        assert!(mobius_act(&r, c(0.0, 0.0)).norm() < 1e-15);
    }
    let r = MobiusElement::rotation(0.7);
    let z = c(0.5, 0.0);
    assert!((r.act(z) - z * Complex64::from_polar(1.0, 0.7)).norm() < 1e-14);
}

#[test]
fn distance_examples() {
    assert_eq!(disk_distance(c(0.0, 0.0), c(0.0, 0.0)).unwrap(), 0.0);
    let e = 1f64.exp();
    let g = MobiusElement::new(Matrix2::new(e, 0.0, 0.0, 1.0 / e)).unwrap();
    let d = disk_distance(c(0.0, 0.0), g.act(c(0.0, 0.0))).unwrap();
    assert!((d - 2.0).abs() < 1e-12);
    assert!((d - (0.5 * g.matrix().norm_squared()).acosh()).abs() < 1e-12);
    assert!((displacement(g.matrix()) - 2.0).abs() < 1e-12);
    assert!(matches!(disk_distance(c(1.0, 0.0), c(0.0, 0.0)), Err(Error::Domain(_))));
    for seed in 0..200 {
        let (x, y, z) = (random_disk_point(seed, 0.95), random_disk_point(seed + 1000, 0.95), random_disk_point(seed + 2000, 0.95));
        let d = |a, b| disk_distance(a, b).unwrap();
        assert!(d(x, z) <= d(x, y) + d(y, z) + 1e-12);
    }
}

#[test]
fn fixed_point_examples() {
    let e = 1f64.exp();
    let g = MobiusElement::new(Matrix2::new(e, 0.0, 0.0, 1.0 / e)).unwrap();
    let (attr, rep) = fixed_points(&g).unwrap();
    // Upper half-plane ∞ and 0 map to the disk points 1 and −1.
    assert!(angle_diff(attr, 0.0).abs() < 1e-12);
    assert!(angle_diff(rep, PI).abs() < 1e-12);
    assert!(matches!(fixed_points(&MobiusElement::new(Matrix2::new(1.0, 1.0, 0.0, 1.0)).unwrap()), Err(Error::NotHyperbolic(_))));
    for seed in 0..100 {
        let g = random_mobius(seed);
        let Ok((a, r)) = fixed_points(&g) else { continue };
        let (ai, ri) = fixed_points(&g.inverse()).unwrap();
        assert!(angle_diff(a, ri).abs() < 1e-9 && angle_diff(r, ai).abs() < 1e-9);
        let mut z = random_disk_point(seed + 7, 0.5);
        for _ in 0..200 {
            z = g.act(z);
        }
        assert!(angle_diff(z.arg(), a).abs() < 1e-6, "iteration does not approach the attracting point");
    }
}

fn ray_oracle_half_width(z: Complex64, r: f64, rays: usize) -> f64 {
    let center = z.arg();
    let d = disk_distance(c(0.0, 0.0), z).unwrap();
    let mut widest: f64 = 0.0;
    for k in 0..rays {
        let theta = -PI + 2.0 * PI * k as f64 / rays as f64;
        let dir = Complex64::from_polar(1.0, theta);
        let dist_at = |t: f64| disk_distance(dir * (0.5 * t).tanh(), z).unwrap();
        let (mut lo, mut hi) = (0.0, d + r + 1.0);
        for _ in 0..120 {
            let m1 = lo + (hi - lo) / 3.0;
            let m2 = hi - (hi - lo) / 3.0;
            if dist_at(m1) < dist_at(m2) {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        if dist_at(0.5 * (lo + hi)) <= r {
            widest = widest.max(angle_diff(theta, center).abs());
        }
    }
    widest
}

#[test]
fn shadow_examples() {
    let origin = c(0.0, 0.0);
    assert!(shadow(origin, c(0.3, 0.0), 2.0).unwrap().is_full());
    let z = c((0.5f64 * 4.0).tanh(), 0.0);
    let arc = shadow(origin, z, 1.0).unwrap();
    assert!(arc.center.abs() < 1e-15);
    assert!(!arc.is_full());
    for (z, r) in [(c(0.9, 0.2), 1.0), (Complex64::from_polar(0.97, 2.0), 2.0)] {
        let arc = shadow(origin, z, r).unwrap();
        let oracle = ray_oracle_half_width(z, r, 10_000);
        assert!((arc.half_width - oracle).abs() < 1e-3, "{} vs {}", arc.half_width, oracle);
    }
}

#[test]
fn arc_measure_examples() {
    assert!((arc_lebesgue(&BoundaryArc::full()) - 2.0 * PI).abs() < 1e-15);
    assert!((arc_lebesgue(&BoundaryArc { center: 1.0, half_width: PI / 4.0 }) - PI / 2.0).abs() < 1e-15);
    let (a, b, cc) = (-0.4, 0.9, 2.5);
    let whole = arc_lebesgue(&BoundaryArc::from_endpoints(a, cc));
    let parts = arc_lebesgue(&BoundaryArc::from_endpoints(a, b)) + arc_lebesgue(&BoundaryArc::from_endpoints(b, cc));
    assert!((whole - parts).abs() < 1e-14);
}

#[test]
fn orbit_ball_examples() {
    let modular = FuchsianPreset::modular();
    assert_eq!(orbit_ball(&modular, 0).unwrap().len(), 1);
    let one = orbit_ball(&modular, 1).unwrap();
    assert_eq!(one.len(), 4);
    let free = FuchsianPreset::fricke(3.0, 3.0, 3.0).unwrap();
    for l in 0..=6 {
        let ball = orbit_ball(&free, l).unwrap();
        assert_eq!(ball.len() as u64, free_rank2_ball_size(l as u32));
    }
    assert_eq!((0..4).map(free_rank2_ball_size).collect::<Vec<_>>(), vec![1, 5, 17, 53]);
    assert!(matches!(orbit_ball(&free, free.ball_cap() + 1), Err(Error::ResourceLimit(_))));
}

#[test]
fn ball_order_and_products() {
    for preset in [FuchsianPreset::modular(), FuchsianPreset::fricke(3.0, 3.0, 3.0).unwrap()] {
        let ball = orbit_ball(&preset, 6).unwrap();
        for w in ball.windows(2) {
            assert!(w[0].word < w[1].word);
            assert!(w[0].word.len() <= w[1].word.len());
        }
        for el in &ball {
            let product = el.word.letters().fold(Matrix2::identity(), |m, x| m * preset.generators()[x as usize]);
            assert!((product - el.matrix).amax() < 1e-9 * (1.0 + product.amax()));
            assert!((el.disk_point - MobiusElement::new(el.matrix).unwrap().act(c(0.0, 0.0))).norm() < 1e-12);
        }
    }
}

#[test]
fn parallel_and_sequential_balls_agree() {
    let preset = FuchsianPreset::modular();
    let a = orbit_ball_with(&preset, 10, ExecMode::Sequential).unwrap();
    let b = orbit_ball_with(&preset, 10, ExecMode::default()).unwrap();
    assert_eq!(a, b);
    let free = FuchsianPreset::fricke(3.0, 3.0, 3.0).unwrap();
    let alg = MatrixAlgebra(free.generators());
    let f = |len: usize, m: &Matrix2<f64>| (len, m[(0, 0)], m[(1, 1)]);
    let s = free_ball_map(&alg, free.letter_inverse(), 7, ExecMode::Sequential, f);
    let p = free_ball_map(&alg, free.letter_inverse(), 7, ExecMode::default(), f);
    assert_eq!(s, p);
    assert_eq!(s.len() as u64, free_rank2_ball_size(7));
}

#[test]
fn balls_grow_and_dedup_exactly() {
    let preset = FuchsianPreset::modular();
    let mut prev = 0;
    for l in 0..=12 {
        let ball = orbit_ball(&preset, l).unwrap();
        assert!(ball.len() > prev);
        prev = ball.len();
        let mut seen = HashSet::new();
        for el in &ball {
            let m = el.integer.unwrap();
            let neg = [-m[0], -m[1], -m[2], -m[3]];
            assert!(seen.insert(m) && !seen.contains(&neg));
        }
    }
}

#[test]
fn displacement_is_bounded_by_word_length() {
    for preset in [FuchsianPreset::modular(), FuchsianPreset::fricke(3.0, 3.0, 3.0).unwrap(), FuchsianPreset::schottky(6.0).unwrap()] {
        let gmax = preset.generators().iter().map(displacement).fold(0.0, f64::max);
        for el in orbit_ball(&preset, 8).unwrap() {
            assert!(displacement(&el.matrix) <= el.word.len() as f64 * gmax + 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mobius_is_isometric_and_preserves_boundary(seed in any::<u64>(), t in -PI..PI) {
        let g = random_mobius(seed);
        let (z, w) = (random_disk_point(seed ^ 1, 0.9), random_disk_point(seed ^ 2, 0.9));
        let (gz, gw) = (g.act(z), g.act(w));
        prop_assume!(gz.norm() < 0.999999 && gw.norm() < 0.999999);
        let before = disk_distance(z, w).unwrap();
        prop_assert!((disk_distance(gz, gw).unwrap() - before).abs() < 1e-8 * (1.0 + before));
        let b = g.act(Complex64::from_polar(1.0, t));
        prop_assert!((b.norm() - 1.0).abs() < 1e-9);
        prop_assert!(angle_diff(b.arg(), g.act_angle(t)).abs() < 1e-9);
    }

    #[test]
    fn shadow_is_equivariant(seed in any::<u64>(), r in 0.3f64..2.5) {
        let g = random_mobius(seed);
        let b0 = random_disk_point(seed ^ 3, 0.5);
        let z = random_disk_point(seed ^ 4, 0.99);
        prop_assume!(disk_distance(b0, z).unwrap() > r + 0.1);
        let (gb, gz) = (g.act(b0), g.act(z));
        prop_assume!(gb.norm() < 0.99 && gz.norm() < 0.9999);
        let arc = shadow(b0, z, r).unwrap();
        let moved = shadow(gb, gz, r).unwrap();
        let (s, e) = arc.endpoints();
        let (ms, me) = moved.endpoints();
        prop_assert!(angle_diff(g.act_angle(s), ms).abs() < 1e-8);
        prop_assert!(angle_diff(g.act_angle(e), me).abs() < 1e-8);
    }
}
