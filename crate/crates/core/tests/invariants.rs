use proptest::prelude::*;

use qortho::algebra::{conditional_expectation, quasi_orthogonality_defect, OperatorAlgebra};
use qortho::bell::{c_form, kappa};
use qortho::block::unitary_defect;
use qortho::cartan::{cartan_n, CartanParams, class_member, CartanClass};
use qortho::entropy::{mu_slack, observable_entropy, ObservableSpec, State};
use qortho::matrix::{haar_unitary, hs_inner, Matrix, C64};
use qortho::weyl::Basis;
use qortho::Tolerance;

fn tol() -> Tolerance {
    Tolerance::default()
}

fn complex() -> impl Strategy<Value = C64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| C64::new(re, im))
}

fn matrix(n: usize) -> impl Strategy<Value = Matrix> {
    proptest::collection::vec(complex(), n * n).prop_map(move |v| Matrix::from_fn(n, |i, j| v[i * n + j]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inner_product_is_hermitian_and_conjugation_invariant(a in matrix(3), b in matrix(3), seed in 0u64..1000) {
        let ab = hs_inner(&a, &b).unwrap();
        let ba = hs_inner(&b, &a).unwrap();
        prop_assert!((ab - ba.conj()).norm() < 1e-12);
        let u = haar_unitary(3, seed);
        let uab = hs_inner(&(&u * &a * u.adjoint()), &(&u * &b * u.adjoint())).unwrap();
        prop_assert!((uab - ab).norm() < 1e-12);
        prop_assert!(hs_inner(&a, &a).unwrap().re >= 0.0);
    }

    #[test]
    fn quasi_orthogonality_is_symmetric(s1 in 0u64..500, s2 in 0u64..500) {
        let a = OperatorAlgebra::factor(&haar_unitary(4, s1), 2, 2, tol()).unwrap();
        let b = OperatorAlgebra::factor(&haar_unitary(4, s2 + 500), 2, 2, tol()).unwrap();
        let d1 = quasi_orthogonality_defect(&a, &b).unwrap();
        let d2 = quasi_orthogonality_defect(&b, &a).unwrap();
        prop_assert!((d1 - d2).abs() < 1e-10);
    }

    #[test]
    fn conditional_expectation_is_idempotent_and_trace_preserving(x in matrix(4), seed in 0u64..1000) {
        let alg = OperatorAlgebra::factor(&haar_unitary(4, seed), 2, 2, tol()).unwrap();
        let e = conditional_expectation(&alg, &x).unwrap();
        prop_assert!(conditional_expectation(&alg, &e).unwrap().distance(&e) < 1e-10);
        prop_assert!((e.tau() - x.tau()).norm() < 1e-10);
        prop_assert!(alg.contains(&e, tol()));
    }

    #[test]
    fn usefulness_survives_local_dressing(free in -3.0..3.0f64, k1 in -2i32..3, k2 in -2i32..3, cls in 0usize..3, s in 0u64..1000) {
        let p: CartanParams = class_member(CartanClass::all()[cls], free, k1, k2);
        let w = cartan_n(p);
        let left = haar_unitary(2, s).kron(&haar_unitary(2, s + 1));
        let right = haar_unitary(2, s + 2).kron(&haar_unitary(2, s + 3));
        prop_assert!(unitary_defect(&w, 2, 2, tol()).unwrap() < 1e-10);
        prop_assert!(unitary_defect(&(&left * &w * &right), 2, 2, tol()).unwrap() < 1e-10);
    }

    #[test]
    fn kappa_is_multiplicative(a in proptest::array::uniform4(complex()), b in proptest::array::uniform4(complex())) {
        let x = c_form(a[0], a[1], a[2], a[3]);
        let y = c_form(b[0], b[1], b[2], b[3]);
        let (kx, ky, kxy) = (kappa(&x), kappa(&y), kappa(&(&x * &y)));
        for i in 0..4 {
            prop_assert!((kxy[i] - kx[i] * ky[i]).norm() < 1e-12);
        }
    }

    #[test]
    fn entropy_bounds_and_mu_slack(n in 2usize..6, v in proptest::collection::vec(complex(), 5)) {
        let mut v: Vec<C64> = v[..n].to_vec();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        prop_assume!(norm > 1e-3);
        v.iter_mut().for_each(|z| *z /= norm);
        let state = State::pure(&v, tol()).unwrap();
        let a = ObservableSpec::from_basis(&Basis::standard(n));
        let b = ObservableSpec::from_basis(&Basis::fourier(n));
        let h = observable_entropy(&a, &state).unwrap();
        prop_assert!(h >= -1e-12 && h <= (n as f64).ln() + 1e-12);
        prop_assert!(mu_slack(&a, &b, &state).unwrap() >= -1e-9);
    }
}
