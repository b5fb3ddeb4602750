use maxrep::flags::*;
use maxrep::linalg::{hstack, subspace_excess, vstack};
use maxrep::random;
use maxrep::wedge::{annihilator, basis_wedge, omega_prime, wedge_of_columns, wedge_power_matrix};
use maxrep::Error;
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

fn diag(v: &[f64]) -> DMatrix<f64> {
    DMatrix::from_diagonal(&DVector::from_row_slice(v))
}

fn random_flag(seed: u64, index_set: IndexSet) -> Flag {
    let mut rng = random::rng(seed);
    let d = index_set.d();
    Flag::from_columns(index_set, &random::gaussian(&mut rng, d, d)).unwrap()
}

fn wedge_symplectic(seed: u64, n: usize) -> DMatrix<f64> {
    let mut rng = random::rng(seed);
    wedge_power_matrix(random::symplectic(&mut rng, n, 0.8).matrix()).unwrap()
}

#[test]
fn cocycle_examples() {
    let f = random_flag(1, IndexSet::planes(20));
    let b = iwasawa_cocycle(&DMatrix::identity(20, 20), &f).unwrap();
    assert!(b.values.iter().all(|x| x.abs() < 1e-13));
    let logs: [f64; 8] = [0.9, -0.3, 0.2, 0.5, -0.4, 0.1, -1.0, 0.3];
    let g = DMatrix::from_diagonal(&DVector::from_iterator(8, logs.iter().map(|x| x.exp())));
    let coord = Flag::from_columns(IndexSet::planes(8), &DMatrix::identity(8, 8)).unwrap();
    let b = iwasawa_cocycle(&g, &coord).unwrap();
    for &i in coord.index_set().indices() {
        let expected: f64 = logs[..i].iter().sum();
        assert!((b.get(i).unwrap() - expected).abs() < 1e-13);
    }
}

#[test]
fn gromov_product_examples() {
    let v1 = basis_wedge(3, &[0, 1, 2]).unwrap();
    let v2 = basis_wedge(3, &[3, 4, 5]).unwrap();
    let g = gromov_product(&Flag::line_and_annihilator(&v1).unwrap(), &Flag::line_and_annihilator(&v2).unwrap()).unwrap();
    assert!(g.get(1).unwrap().abs() < 1e-12);
    for seed in 0..50 {
        let f1 = random_flag(seed, IndexSet::planes(10));
        let f2 = random_flag(seed + 1000, IndexSet::planes(10));
        assert!(gromov_product(&f1, &f2).unwrap().values.iter().all(|&x| x <= 1e-10));
    }
    let f = random_flag(7, IndexSet::lines(6));
    assert_eq!(gromov_product(&f, &f), Err(Error::NotTransverse));
}

#[test]
fn tangent_vector_is_a_derivative() {
    let mut rng = random::rng(3);
    let h = 1e-6;
    for n in 3..=4 {
        let nm = random::psd_of_rank(&mut rng, n, 2);
        let id = DMatrix::identity(n, n);
        for (side, base, moved) in [
            (Side::Lower, vstack(&id, &DMatrix::zeros(n, n)), vstack(&id, &(&nm * h))),
            (Side::Upper, vstack(&DMatrix::zeros(n, n), &id), vstack(&(&nm * h), &id)),
        ] {
            let (v, w) = tangent_pair(side, &nm).unwrap();
            let v0 = wedge_of_columns(&base).unwrap();
            let fd = (wedge_of_columns(&moved).unwrap() - &v0) / h;
            assert!((v - v0).amax() < 1e-15);
            assert!((fd - &w).amax() < 1e-4, "{side:?}");
        }
    }
}

#[test]
fn tangent_flag_nesting() {
    let mut rng = random::rng(4);
    for n in 3..=4 {
        let nm = random::positive_definite(&mut rng, n, 0.1);
        for side in [Side::Lower, Side::Upper] {
            let f = tangent_decorated_flag(side, &nm).unwrap();
            let d = f.index_set().d();
            assert_eq!(f.index_set().indices(), &[1, 2, d - 2, d - 1]);
            let (v, w) = tangent_pair(side, &nm).unwrap();
            assert_eq!(omega_prime(&v, &w).unwrap().abs() < 1e-12, true);
            assert_eq!(omega_prime(&w, &w).unwrap().abs() < 1e-10, true);
            let plane = hstack(&DMatrix::from_column_slice(d, 1, v.as_slice()), &DMatrix::from_column_slice(d, 1, w.as_slice()));
            assert!(subspace_excess(f.subspace(1).unwrap(), f.subspace(2).unwrap()) < 1e-10);
            assert!(subspace_excess(&maxrep::linalg::orthonormalize(&plane), &annihilator(&plane).unwrap()) < 1e-10);
        }
    }
    assert_eq!(tangent_decorated_flag(Side::Lower, &DMatrix::identity(2, 2)), Err(Error::UnsupportedRank(2)));
}

#[test]
fn closed_form_examples() {
    let id = DMatrix::<f64>::identity(3, 3);
    assert!((gromov_closed_form(&id, &id).unwrap() - 1.0).abs() < 1e-15);
    let m = diag(&[2.0, 1.0, 1.0]);
    let nm = diag(&[1.0, 0.0, 0.0]);
    let expected = 2.0 / 6f64.sqrt();
    assert!((gromov_closed_form(&nm, &m).unwrap() - expected).abs() < 1e-15);
    let f1 = tangent_decorated_flag(Side::Lower, &nm).unwrap();
    let f2 = tangent_decorated_flag(Side::Upper, &m).unwrap();
    assert!((gromov_product(&f1, &f2).unwrap().get(2).unwrap().exp() - expected).abs() < 1e-7);
    let orth = diag(&[0.0, 0.0, 1.0]);
    assert_eq!(gromov_closed_form(&nm, &orth), Err(Error::NotTransverse));
    let f3 = tangent_decorated_flag(Side::Upper, &orth).unwrap();
    assert_eq!(gromov_product(&f1, &f3), Err(Error::NotTransverse));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn wedge_and_determinant_forms_agree(seed in any::<u64>(), d in 4usize..=20) {
        let f1 = random_flag(seed, IndexSet::lines(d));
        let f2 = random_flag(seed ^ 0xabcdef, IndexSet::lines(d));
        let a = gromov_product(&f1, &f2).unwrap();
        let b = gromov_product_wedge_form(&f1, &f2).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            prop_assert!((x - y).abs() < 1e-8);
        }
    }

    #[test]
    fn iwasawa_cocycle_is_additive(seed in any::<u64>(), n in 2usize..=3) {
        let g = wedge_symplectic(seed, n);
        let h = wedge_symplectic(seed.wrapping_add(1), n);
        let d = g.nrows();
        let f = random_flag(seed.wrapping_add(2), IndexSet::planes(d));
        let lhs = iwasawa_cocycle(&(&g * &h), &f).unwrap();
        let a = iwasawa_cocycle(&g, &f.transform(&h).unwrap()).unwrap();
        let b = iwasawa_cocycle(&h, &f).unwrap();
        for i in 0..lhs.values.len() {
            prop_assert!((lhs.values[i] - a.values[i] - b.values[i]).abs() < 1e-8);
        }
    }

    #[test]
    fn gromov_cocycle_relation_and_involution(seed in any::<u64>(), n in 2usize..=3) {
        let g = wedge_symplectic(seed, n);
        let d = g.nrows();
        let f1 = random_flag(seed.wrapping_add(3), IndexSet::planes(d));
        let f2 = random_flag(seed.wrapping_add(4), IndexSet::planes(d));
        let before = gromov_product(&f1, &f2).unwrap();
        let after = gromov_product(&f1.transform(&g).unwrap(), &f2.transform(&g).unwrap()).unwrap();
        let b1 = iwasawa_cocycle(&g, &f1).unwrap();
        let b2 = iwasawa_cocycle(&g, &f2).unwrap();
        let swapped = gromov_product(&f2, &f1).unwrap();
        for &s in f1.index_set().indices() {
            let lhs = after.get(s).unwrap() - before.get(s).unwrap();
            let rhs = -b1.get(s).unwrap() - b2.get(d - s).unwrap();
            prop_assert!((lhs - rhs).abs() < 1e-7, "s={} {} {}", s, lhs, rhs);
            prop_assert!((before.get(d - s).unwrap() - swapped.get(s).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn closed_form_is_scale_invariant(seed in any::<u64>(), n in 1usize..=5, i in -20i32..20, j in -20i32..20) {
        let mut rng = random::rng(seed);
        let m = random::positive_definite(&mut rng, n, 0.1);
        let nm = random::psd_of_rank(&mut rng, n, 1);
        let base = gromov_closed_form(&nm, &m).unwrap();
        let scaled = gromov_closed_form(&(&nm * 2f64.powi(i)), &(&m * 2f64.powi(j))).unwrap();
        prop_assert_eq!(base, scaled);
        prop_assert_eq!((&nm * &m).trace() > 0.0, (&m * &nm).trace() > 0.0);
    }

    #[test]
    fn brute_force_matches_closed_form(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let m = random::psd_of_rank(&mut rng, 3, 1 + (seed % 3) as usize);
        let nm = random::psd_of_rank(&mut rng, 3, 1 + ((seed >> 8) % 3) as usize);
        let f1 = tangent_decorated_flag(Side::Lower, &nm).unwrap();
        let f2 = tangent_decorated_flag(Side::Upper, &m).unwrap();
        let cf = gromov_closed_form(&nm, &m).unwrap();
        let brute = gromov_product(&f1, &f2).unwrap().get(2).unwrap().exp();
        prop_assert!((cf - brute).abs() < 1e-7);
    }
}
