mod common;

use common::{real, rng, rotation};
use proptest::prelude::*;
use tnn_orbits::flagorbit::signed_perm;
use tnn_orbits::linalg::*;
use tnn_orbits::perm::Perm;
use tnn_orbits::positivity::*;

const TOL: f64 = DEFAULT_TOL;

fn idx(v: &[usize]) -> IndexSet {
    IndexSet::new(v.to_vec()).unwrap()
}

fn counterexample_g(alpha: f64) -> ComplexMatrix {
    let (s, co) = (alpha.sin(), alpha.cos());
    let r = 0.5f64.sqrt();
    real(3, 3, &[s * r, -r, co * r, co, 0.0, -s, s * r, r, co * r])
}

fn example_outside() -> ComplexMatrix {
    let a = 3.0 * 2f64.sqrt();
    real(3, 3, &[11.0, a, -1.0, a, 10.0, a, -1.0, a, 11.0])
}

#[test]
fn matrix_examples() {
    let g = real(3, 3, &[1.0, 2.0, 1.0, 1.0, 3.0, 2.0, 1.0, 4.0, 4.0]);
    assert_eq!(is_tp_matrix(&g, TOL).unwrap().status, Status::Positive);
    assert_eq!(
        is_tp_matrix(&ComplexMatrix::identity(3, 3), TOL)
            .unwrap()
            .status,
        Status::Nonnegative
    );
    let v = is_tp_matrix(&example_outside(), TOL).unwrap();
    assert_eq!(v.status, Status::Outside);
    assert!(v.witness.unwrap().value < 0.0);
    let cplx = ComplexMatrix::identity(2, 2) * c(1.0, 1.0);
    assert!(is_tp_matrix(&cplx, TOL).is_err());
    assert!(is_tp_matrix(&ComplexMatrix::identity(9, 9), TOL).is_err());
}

#[test]
fn jacobi_cone_examples() {
    let d = diag_real(&[1.0, 2.0, 3.0]);
    assert_eq!(is_jacobi_cone(&d, TOL).unwrap().status, Status::Nonnegative);
    let mut m = d.clone();
    m[(0, 2)] = c(0.1, 0.0);
    let v = is_jacobi_cone(&m, TOL).unwrap();
    assert_eq!(v.status, Status::Outside);
    let w = v.witness.unwrap();
    assert_eq!((w.rows, w.cols), (idx(&[1]), idx(&[3])));
    let t = real(3, 3, &[0.0, 1.0, 0.0, 1.0, 0.0, 2.0, 0.0, 2.0, 0.0]);
    assert_eq!(is_jacobi_cone(&t, TOL).unwrap().status, Status::Positive);
    let neg = real(2, 2, &[0.0, -1.0, -1.0, 0.0]);
    assert_eq!(is_jacobi_cone(&neg, TOL).unwrap().status, Status::Outside);
}

#[test]
fn unitary_examples() {
    assert_eq!(
        is_tnn_unitary(&rotation(0.6), TOL).unwrap().status,
        Status::Positive
    );
    assert_eq!(
        is_tnn_unitary(&rotation(-0.6), TOL).unwrap().status,
        Status::Outside
    );
    let p312 = real(3, 3, &[0.0, -1.0, 0.0, 0.0, 0.0, -1.0, 1.0, 0.0, 0.0]);
    assert_eq!(
        is_tnn_unitary(&p312, TOL).unwrap().status,
        Status::Nonnegative
    );
    let w0 = signed_perm(&Perm::longest(4));
    assert_eq!(
        is_tnn_unitary(&w0, TOL).unwrap().status,
        Status::Nonnegative
    );
    assert!(is_tnn_unitary(&real(2, 2, &[1.0, 1.0, 0.0, 1.0]), TOL).is_err());
}

#[test]
fn plucker_example_with_gap() {
    let rep = real(
        4,
        4,
        &[
            1.0, 0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 1.0, 1.0, 2.0, 0.0, 1.0, 0.0, 1.0, 1.0,
        ],
    );
    let v = is_plucker_nonneg(&rep, &[1, 3], TOL).unwrap();
    assert_eq!(v.status, Status::Positive);
    assert!(v.note.unwrap().contains("undecided"));
    let narrow = rep.columns(0, 2).into_owned();
    let v2 = is_plucker_nonneg(&narrow, &[1, 2], TOL).unwrap();
    assert!(v2.note.unwrap().contains("coincides"));
    let phased = &rep * c(0.0, 1.0);
    assert_eq!(
        is_plucker_nonneg(&phased, &[1, 3], TOL).unwrap().status,
        Status::Positive
    );
}

#[test]
fn eventually_tp_examples() {
    assert_eq!(
        is_eventually_tp(&real(2, 2, &[2.0, 1.0, 1.0, 2.0]), 10).unwrap(),
        Some(1)
    );
    let l = example_outside() * c(0.25, 0.0);
    let m = is_eventually_tp(&l, 60).unwrap();
    assert!(matches!(m, Some(k) if k > 1), "got {m:?}");
    let g = counterexample_g(0.0);
    let lam = diag_real(&[3.0, 2.0, 1.0]);
    let l = &g * lam * g.transpose();
    assert_eq!(is_eventually_tp(&l, 60).unwrap(), None);
}

#[test]
fn sample_tp_certifies_on_hundred_seeds() {
    for seed in 0..100 {
        let g = sample_tp(5, &mut rng(seed)).unwrap();
        assert!(is_tp_matrix(&g, TOL).unwrap().is_positive());
    }
    assert!(sample_tp(1, &mut rng(3)).unwrap()[(0, 0)].re > 0.0);
}

#[test]
fn sampled_flags_are_certified() {
    let mut r = rng(11);
    for n in 2..=6 {
        let g = sample_tnn_flag(n, &mut r).unwrap();
        assert!(is_tnn_unitary(&g, TOL).unwrap().is_positive());
        let b = sample_tnn_boundary(n, &mut r).unwrap();
        assert!(is_tnn_unitary(&b, TOL).unwrap().is_nonnegative());
    }
    assert_eq!(
        signed_perm(&Perm::identity(3)),
        ComplexMatrix::identity(3, 3)
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn semigroup_property(seed in any::<u64>(), n in 1usize..=4) {
        let mut r = rng(seed);
        let a = sample_tp(n, &mut r).unwrap();
        let b = sample_tp(n, &mut r).unwrap();
        let p = &a * &b;
        prop_assert!(is_tp_matrix(&p, TOL).unwrap().is_nonnegative());
        for k in 1..=n {
            for rows in subsets(n, k) {
                for cols in subsets(n, k) {
                    let terms: Vec<f64> = subsets(n, k).iter()
                        .map(|s| minor(&a, &rows, s).unwrap().re * minor(&b, s, &cols).unwrap().re)
                        .collect();
                    prop_assert!(terms.iter().all(|&t| t > 0.0));
                    let sum: f64 = terms.iter().sum();
                    let direct = minor(&p, &rows, &cols).unwrap().re;
                    prop_assert!((direct - sum).abs() <= 1e-9 * terms.iter().map(|t| t.abs()).sum::<f64>().max(1.0));
                }
            }
        }
    }

    #[test]
    fn tp_spectrum_is_distinct_and_positive(seed in any::<u64>(), n in 1usize..=5) {
        let g = sample_tp(n, &mut rng(seed)).unwrap();
        let (vals, _) = general_eig(&g).unwrap();
        for v in &vals {
            prop_assert!(v.im.abs() < 1e-8 * v.norm() && v.re > 0.0);
        }
        for w in vals.windows(2) {
            prop_assert!(w[0].re > w[1].re);
        }
    }

    #[test]
    fn iota_preserves_positive_unitaries(seed in any::<u64>(), n in 2usize..=6) {
        let g = sample_tnn_flag(n, &mut rng(seed)).unwrap();
        let t = delta(n) * g.transpose() * delta(n);
        prop_assert!(is_tnn_unitary(&t, TOL).unwrap().is_positive());
    }

    #[test]
    fn first_row_alternates(seed in any::<u64>(), n in 2usize..=6) {
        let g = sample_tnn_flag(n, &mut rng(seed)).unwrap();
        for j in 0..n {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            prop_assert!(sign * g[(0, j)].re > 0.0);
        }
    }
}
