use proptest::prelude::*;
use qmagic_core::bell::{ic_bound, quantum_value, weil_bound};
use qmagic_core::entropy::{min_entropy_bound, min_total, mub_table, reconstruct};
use qmagic_core::lhv::lhv_best;
use qmagic_core::linalg::{ComplexVector, C64};
use qmagic_core::magic::{magic_state, MagicParams};
use qmagic_core::weyl::MubLabel;
use qmagic_core::wigner::{wigner_function, wigner_of_density};

const PRIMES: [u64; 4] = [3, 5, 7, 11];

fn state(p: u64, seeds: &[(f64, f64)]) -> ComplexVector {
    ComplexVector::new(
        seeds
            .iter()
            .take(p as usize)
            .map(|&(re, im)| C64::new(re, im))
            .collect(),
    )
    .normalized()
}

fn amplitudes() -> impl Strategy<Value = (u64, Vec<(f64, f64)>)> {
    (
        0..PRIMES.len(),
        prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 11),
    )
        .prop_filter("nonzero state", |(i, v)| {
            v.iter()
                .take(PRIMES[*i] as usize)
                .any(|&(a, b)| a.abs() + b.abs() > 1e-3)
        })
        .prop_map(|(i, v)| (PRIMES[i], v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn wigner_marginal_is_computational_distribution((p, v) in amplitudes()) {
        let psi = state(p, &v);
        let w = wigner_function(&psi).unwrap();
        for (x, m) in w.marginal_x().into_iter().enumerate() {
            prop_assert!((m - psi.as_slice()[x].norm_sqr()).abs() < 1e-10);
        }
    }

    #[test]
    fn mub_table_reconstructs_density((p, v) in amplitudes()) {
        let psi = state(p, &v);
        let rho = psi.projector();
        let back = reconstruct(&mub_table(&psi, p).unwrap(), 1.0).unwrap();
        prop_assert!(back.max_abs_diff(&rho) < 1e-10);
        let w = wigner_of_density(&back).unwrap();
        prop_assert!((w.total() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn equatorial_min_entropy_bound((p, v) in amplitudes()) {
        let psi = state(p, &v);
        prop_assert!(min_total(&psi, &MubLabel::finite(p)).unwrap() >= min_entropy_bound(p) - 1e-9);
    }

    #[test]
    fn magic_states_respect_min_entropy_bound(pi in 0..PRIMES.len(), a in 1i64..100, b in 0i64..100, c in 0i64..100) {
        let p = PRIMES[pi];
        prop_assume!(a % p as i64 != 0);
        let f = magic_state(&MagicParams::new(a, b, c, p).unwrap());
        prop_assert!(min_total(&f, &MubLabel::finite(p)).unwrap() >= min_entropy_bound(p) - 1e-9);
    }
}

#[test]
fn classical_quantum_and_bounds_are_ordered() {
    for p in [3u64, 5, 7, 11, 13] {
        let q = quantum_value(p).unwrap();
        let l = lhv_best(p, 20, 0).unwrap();
        assert!(l.value as f64 <= q.ic_bound, "p={p}");
        assert!(q.lambda_max_b <= ic_bound(p) + 1e-9, "p={p}");
        if let Some(w) = weil_bound(p) {
            assert!(q.lambda_max_b <= w + 1e-9, "p={p}");
        }
    }
}
