use maxrep::random;
use maxrep::sp::*;
use maxrep::Error;
use nalgebra::DMatrix;
use proptest::prelude::*;

fn diag(v: &[f64]) -> DMatrix<f64> {
    DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(v))
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

#[test]
fn membership_examples() {
    assert!(is_symplectic(&DMatrix::identity(4, 4), TOL_SYM).unwrap());
    assert!(is_symplectic(SymplecticMatrix::omega(2).matrix(), TOL_SYM).unwrap());
    assert!(!is_symplectic(&diag(&[2.0, 1.0, 1.0, 1.0]), TOL_SYM).unwrap());
    assert!(matches!(is_symplectic(&DMatrix::identity(3, 3), TOL_SYM), Err(Error::Dimension(_))));
    assert!(matches!(SymplecticMatrix::new(diag(&[2.0, 1.0, 1.0, 1.0])), Err(Error::NotSymplectic { .. })));
}

#[test]
fn projection_examples() {
    let g = SymplecticMatrix::new(diag(&[4.0, 2.0, 0.25, 0.5])).unwrap();
    for k in [cartan_projection(&g), jordan_projection(&g)] {
        assert!(close(k.lambdas()[0], 4f64.ln(), 1e-12));
        assert!(close(k.lambdas()[1], 2f64.ln(), 1e-12));
    }
    let id = SymplecticMatrix::identity(3);
    assert!(cartan_projection(&id).lambdas().iter().all(|&x| x == 0.0));
    assert!(jordan_projection(&id).lambdas().iter().all(|&x| x == 0.0));
    let mut rng = random::rng(5);
    let m = random::positive_definite(&mut rng, 3, 0.1);
    let u = SymplecticMatrix::upper_unipotent(&m).unwrap();
    assert!(jordan_projection(&u).lambdas().iter().all(|&x| x.abs() < 1e-6));
}

#[test]
fn cartan_of_assembled_product_recovers_logs() {
    let mut rng = random::rng(11);
    for _ in 0..50 {
        let mut logs: Vec<f64> = (0..3).map(|_| rand::Rng::random_range(&mut rng, 0.0..3.0)).collect();
        let g = random::symplectic_with_logs(&mut rng, &logs);
        logs.sort_by(|a, b| b.total_cmp(a));
        let k = cartan_projection(&g);
        for (a, b) in k.lambdas().iter().zip(&logs) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }
}

#[test]
fn functional_examples() {
    let a = CartanVector::new(vec![4f64.ln(), 2f64.ln()]).unwrap();
    assert!(close(evaluate_functional(WeightFunctional::Alpha, &a).unwrap(), 2.0 * 2f64.ln(), 1e-14));
    assert!(close(evaluate_functional(WeightFunctional::OmegaHatAlpha, &a).unwrap(), 8f64.ln(), 1e-14));
    assert!(close(evaluate_functional(WeightFunctional::Beta(1), &a).unwrap(), 2f64.ln(), 1e-14));
    let ones = CartanVector::new(vec![1.0, 1.0]).unwrap();
    assert!(close(evaluate_functional(WeightFunctional::DX, &ones).unwrap(), 2.0, 1e-14));
    assert!(matches!(evaluate_functional(WeightFunctional::Beta(2), &a), Err(Error::Index { .. })));
}

#[test]
fn distance_examples() {
    assert_eq!(symmetric_space_distance(&SymplecticMatrix::identity(2)), 0.0);
    let e = 1f64.exp();
    for n in 1..=4 {
        let mut d = vec![e; n];
        d.extend(vec![1.0 / e; n]);
        let g = SymplecticMatrix::new(diag(&d)).unwrap();
        assert!(close(symmetric_space_distance(&g), 2.0, 1e-12));
    }
}

#[test]
fn cartan_vector_rejects_unsorted_and_negative() {
    assert!(CartanVector::new(vec![1.0, 2.0]).is_err());
    assert!(CartanVector::new(vec![1.0, -0.1]).is_err());
    let c = CartanVector::new(vec![1.0, -1e-11]).unwrap();
    assert_eq!(c.lambdas()[1], 0.0);
}

fn symplectic_strategy() -> impl Strategy<Value = (u64, usize)> {
    (any::<u64>(), 1usize..=4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn singular_values_pair_and_inverse_has_same_cartan((seed, n) in symplectic_strategy()) {
        let mut rng = random::rng(seed);
        let g = random::symplectic(&mut rng, n, 2.0);
        let s = maxrep::linalg::singular_values(g.matrix());
        for i in 0..n {
            prop_assert!((s[i] * s[2 * n - 1 - i] - 1.0).abs() < 1e-8 * s[0]);
        }
        let a = cartan_projection(&g);
        let b = cartan_projection(&g.inverse());
        for (x, y) in a.lambdas().iter().zip(b.lambdas()) {
            prop_assert!((x - y).abs() < 1e-8);
        }
    }

    #[test]
    fn omega_hat_is_subadditive((seed, n) in symplectic_strategy()) {
        let mut rng = random::rng(seed);
        let g = random::symplectic(&mut rng, n, 2.0);
        let h = random::symplectic(&mut rng, n, 2.0);
        let w = |x: &SymplecticMatrix| WeightFunctional::OmegaHatAlpha.evaluate(&cartan_projection(x)).unwrap();
        prop_assert!(w(&(&g * &h)) <= w(&g) + w(&h) + 1e-8);
    }

    #[test]
    fn jordan_power_law((seed, n) in symplectic_strategy(), k in 1u32..=5) {
        let mut rng = random::rng(seed);
        let g = random::symplectic(&mut rng, n, 0.6);
        let j1 = jordan_projection(&g);
        let jk = jordan_projection(&g.pow(k));
        for (a, b) in j1.lambdas().iter().zip(jk.lambdas()) {
            prop_assert!((k as f64 * a - b).abs() < 1e-6 * (1.0 + b.abs()), "{} {}", k as f64 * a, b);
        }
    }

    #[test]
    fn functional_chain(mut v in proptest::collection::vec(0.0f64..10.0, 1..=6)) {
        v.sort_by(|a, b| b.total_cmp(a));
        let c = CartanVector::new(v).unwrap();
        let alpha = WeightFunctional::Alpha.evaluate(&c).unwrap();
        let omega = WeightFunctional::OmegaHatAlpha.evaluate(&c).unwrap();
        let dx = WeightFunctional::DX.evaluate(&c).unwrap();
        prop_assert!(alpha <= omega + 1e-12);
        prop_assert!(omega <= dx + 1e-12);
    }

    #[test]
    fn distance_dominates_omega_hat((seed, n) in symplectic_strategy()) {
        let mut rng = random::rng(seed);
        let g = random::symplectic(&mut rng, n, 2.0);
        let k = cartan_projection(&g);
        let d = symmetric_space_distance(&g);
        prop_assert!((d - WeightFunctional::DX.evaluate(&k).unwrap()).abs() < 1e-12);
        prop_assert!(d >= WeightFunctional::OmegaHatAlpha.evaluate(&k).unwrap() - 1e-10);
    }
}
