use landau_core::oscillator::{basis_change, lz_matrix, zeeman_split, SphericalLabel};
use landau_core::C64;
use proptest::prelude::*;

#[test]
fn shell_two_matrix_spectrum() {
    // dense Hermitian eigensolver on i·(real antisymmetric)
    let m = lz_matrix(2);
    for k in 0..3 {
        for l in 0..3 {
            assert_eq!(m[(k, l)].re, 0.0);
            assert_eq!(m[(k, l)], m[(l, k)].conj());
        }
    }
    let mut ev: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    for (a, b) in ev.iter().zip([2.0, 0.0, -2.0]) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn shell_three_levels() {
    let z = zeeman_split(3, 0.25);
    for (a, b) in z.eigenvalues.iter().zip([0.75, 0.25, -0.25, -0.75]) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn eigenvectors_match_spherical_basis() {
    for n in 1..=6usize {
        let z = zeeman_split(n, 1.0);
        for (v, l) in z.eigenvectors.iter().zip(SphericalLabel::shell(n)) {
            let b = basis_change(n, l.m).unwrap().vector;
            let overlap: C64 = v
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(a, c)| a.conj() * c)
                .sum();
            assert!((overlap.norm() - 1.0).abs() < 1e-10, "n={n} m={}", l.m);
        }
    }
}

proptest! {
    #[test]
    fn shell_spectrum_is_evenly_spaced(n in 0usize..=8, lambda in -3.0f64..3.0) {
        let z = zeeman_split(n, lambda);
        let mut want: Vec<f64> = (0..=n).map(|k| lambda * (n as f64 - 2.0 * k as f64)).collect();
        want.sort_by(|a, b| b.total_cmp(a));
        for (a, b) in z.eigenvalues.iter().zip(&want) {
            prop_assert!((a - b).abs() < 1e-12 * (1.0 + lambda.abs() * n as f64));
        }
    }

    #[test]
    fn number_states_carry_no_first_order_shift(n in 0usize..=8) {
        let m = lz_matrix(n);
        for k in 0..=n {
            prop_assert_eq!(m[(k, k)], C64::new(0.0, 0.0));
        }
    }

    #[test]
    fn basis_vectors_are_eigenvectors(n in 0usize..=8, k in 0usize..=8) {
        prop_assume!(k <= n);
        let mm = n as i64 - 2 * k as i64;
        let b = basis_change(n, mm).unwrap();
        let v = b.vector.to_dvector();
        let r = &lz_matrix(n) * &v - v.scale(mm as f64);
        prop_assert!(r.norm() < 1e-12);
        prop_assert!((b.raw_norm - 1.0).abs() < 1e-12);
    }
}
