//! Property-based tests: square-free decomposition, unitarity and symmetry
//! of the evolution, gcd structure of eigenvalue gaps, exact quadratic
//! arithmetic, and edge-list round trips.

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use qwalk::graph::{make_family, read_edge_list, write_edge_list, Graph};
use qwalk::quadratic::{square_free_part, QuadraticNumber};
use qwalk::spectral::{eigendecompose, DEFAULT_EIGEN_TOL};
use qwalk::transfer::compute_g;
use qwalk::walk::{amplitude, transition_matrix};

fn is_square_free(k: u64) -> bool {
    let mut p = 2u64;
    while p * p <= k {
        if k % (p * p) == 0 {
            return false;
        }
        p += 1;
    }
    true
}

proptest! {
    #[test]
    fn square_free_decomposition(k in 1u64..1_000_000) {
        let (sigma, theta) = square_free_part(k);
        prop_assert_eq!(sigma * sigma * theta, k);
        prop_assert!(is_square_free(theta));
    }

    #[test]
    fn evolution_is_unitary(t in -50.0f64..50.0) {
        let g = make_family("petersen", &[]).unwrap();
        let dec = eigendecompose(&g.adjacency(), DEFAULT_EIGEN_TOL).unwrap();
        let h = transition_matrix(&dec, t);
        let mut hh = DMatrix::from_element(10, 10, Complex64::new(0.0, 0.0));
        for i in 0..10 {
            for j in 0..10 {
                for k in 0..10 {
                    hh[(i, j)] += h[(i, k)] * h[(j, k)].conj();
                }
            }
        }
        for i in 0..10 {
            for j in 0..10 {
                let expect = if i == j { 1.0 } else { 0.0 };
                prop_assert!((hh[(i, j)] - Complex64::new(expect, 0.0)).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn amplitude_symmetry_and_time_reversal(t in -50.0f64..50.0, u in 0usize..6, v in 0usize..6) {
        let g = make_family("cocktail", &[3]).unwrap();
        let dec = eigendecompose(&g.adjacency(), DEFAULT_EIGEN_TOL).unwrap();
        let a_uv = amplitude(&dec, t, u, v).unwrap();
        let a_vu = amplitude(&dec, t, v, u).unwrap();
        prop_assert!((a_uv - a_vu).norm() < 1e-12, "symmetric adjacency gives symmetric amplitudes");
        let back = amplitude(&dec, -t, u, v).unwrap();
        prop_assert!((a_uv.conj() - back).norm() < 1e-12, "time reversal conjugates the amplitude");
    }

    #[test]
    fn compute_g_divides_every_gap(mut values in prop::collection::btree_set(-100i64..100, 2..8)) {
        let support: Vec<QuadraticNumber> = values.iter().rev().map(|&k| QuadraticNumber::integer(k)).collect();
        let lambda0 = support[0];
        let g = compute_g(&support, lambda0, 1).unwrap();
        prop_assert!(g >= 1);
        for lam in &support {
            let gap = (lambda0 - *lam).as_integer().unwrap();
            prop_assert_eq!(gap % g as i64, 0);
        }
        values.clear();
    }

    #[test]
    fn quadratic_arithmetic_tracks_floats(
        a1 in -20i64..20, b1 in -20i64..20, a2 in -20i64..20, b2 in -20i64..20,
        d in prop::sample::select(vec![2i64, 3, 5, 7, 13]),
    ) {
        let x = QuadraticNumber::half(a1, b1, d);
        let y = QuadraticNumber::half(a2, b2, d);
        let pairs = [
            (x + y, x.to_f64() + y.to_f64()),
            (x - y, x.to_f64() - y.to_f64()),
            (x * y, x.to_f64() * y.to_f64()),
        ];
        for (exact, float) in pairs {
            prop_assert!((exact.to_f64() - float).abs() < 1e-9 * (1.0 + float.abs()));
        }
    }

    #[test]
    fn edge_list_round_trip(n in 2usize..9, seed in any::<u64>()) {
        // pseudo-random subset of the complete graph's edges
        let mut state = seed | 1;
        let mut edges = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                if state >> 63 == 1 {
                    edges.push((i, j));
                }
            }
        }
        let g = Graph::from_edges(n, edges).unwrap();
        let text = write_edge_list(&g);
        let back = read_edge_list(&text).unwrap();
        prop_assert_eq!(g, back);
    }
}
