use magphon_core::linalg::Mat2;
use magphon_core::spectral::{build_hamiltonian, discriminant, eigenpairs};
use magphon_core::{SystemConfig, C64};
use nalgebra::{Matrix2, Schur};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

fn entry() -> impl Strategy<Value = C64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| C64::new(re, im))
}

fn matrix() -> impl Strategy<Value = Mat2> {
    (entry(), entry(), entry(), entry()).prop_map(|(a, b, c, d)| Mat2::new(a, b, c, d))
}

fn oracle_eigenvalues(h: &Mat2) -> [C64; 2] {
    let m = Matrix2::new(h[(0, 0)], h[(0, 1)], h[(1, 0)], h[(1, 1)]);
    let ev = Schur::new(m).eigenvalues().expect("complex Schur form is triangular");
    [ev[0], ev[1]]
}

fn set_distance(a: [C64; 2], b: [C64; 2]) -> f64 {
    let same = (a[0] - b[0]).norm().max((a[1] - b[1]).norm());
    let swapped = (a[0] - b[1]).norm().max((a[1] - b[0]).norm());
    same.min(swapped)
}

#[test]
fn closed_form_matches_schur_oracle() {
    let mut runner = TestRunner::new(Config {
        cases: 10_000,
        ..Config::default()
    });
    runner
        .run(&matrix(), |h| {
            let e = eigenpairs(&h);
            let ours = [e.lambda_plus, e.lambda_minus];
            let oracle = oracle_eigenvalues(&h);
            let scale = 1.0f64.max(oracle[0].norm()).max(oracle[1].norm());
            // ill-conditioned near-defective draws lose accuracy in every solver
            let separation = (oracle[0] - oracle[1]).norm();
            prop_assume!(separation > 1e-3 * scale);
            prop_assert!(set_distance(ours, oracle) <= 1e-10 * scale);
            Ok(())
        })
        .unwrap();
}

proptest! {
    #![proptest_config(Config::with_cases(2000))]

    #[test]
    fn vieta_and_discriminant(h in matrix()) {
        let e = eigenpairs(&h);
        let (tr, det) = (h.trace(), h.det());
        let scale = 1.0f64.max(h.norm());
        prop_assert!((e.lambda_plus + e.lambda_minus - tr).norm() <= 1e-12 * scale);
        prop_assert!((e.lambda_plus * e.lambda_minus - det).norm() <= 1e-12 * scale * scale);
        let d = discriminant(&h);
        let gap = e.lambda_plus - e.lambda_minus;
        prop_assert!((gap * gap - d).norm() <= 1e-12 * scale * scale);
    }

    #[test]
    fn eigenvectors_are_normalised_right_eigenvectors(h in matrix()) {
        let e = eigenpairs(&h);
        prop_assume!(e.gap() > 1e-3);
        for (l, v) in [(e.lambda_plus, e.v_plus), (e.lambda_minus, e.v_minus)] {
            let hv = h.apply(&v);
            let r = ((hv[0] - l * v[0]).norm_sqr() + (hv[1] - l * v[1]).norm_sqr()).sqrt();
            prop_assert!(r <= 1e-12 * h.norm());
            prop_assert!((v[0].norm_sqr() + v[1].norm_sqr() - 1.0).abs() < 1e-14);
            let lead = if v[0].norm() > 1e-14 { v[0] } else { v[1] };
            prop_assert!(lead.im == 0.0 && lead.re > 0.0);
        }
    }

    #[test]
    fn physical_hamiltonians_obey_vieta(
        strength in 0.0f64..4e12,
        dte in -6e7f64..6e7,
        dtm in -6e7f64..6e7,
    ) {
        let c = SystemConfig::symmetric(2e7, 1e9 - 1.6e7, 1e9 + 1.6e7, strength)
            .unwrap()
            .with_te_detuning(dte)
            .with_tm_detuning(dtm);
        let h = build_hamiltonian(&c).h;
        let e = eigenpairs(&h);
        let scale = h.norm();
        prop_assert!((e.lambda_plus + e.lambda_minus - h.trace()).norm() <= 1e-12 * scale);
        prop_assert!((e.lambda_plus * e.lambda_minus - h.det()).norm() <= 1e-12 * scale * scale);
        prop_assert!(set_distance([e.lambda_plus, e.lambda_minus], oracle_eigenvalues(&h)) <= 1e-10 * scale);
    }
}
