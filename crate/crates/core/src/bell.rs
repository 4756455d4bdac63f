//! The qudit CHSH Bell operator built from Pauli measurements, its CSUM
//! reduction to the single-qudit operator `S`, and the quantum-value bounds.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::inv_mod;
use crate::linalg::{
    hermitian_eigen, ComplexMatrix, ComplexVector, EigenResult, C64, HERMITIAN_TOL, ONE,
};
use crate::magic::{jamiolkowski, MagicParams};
use crate::weyl::{
    csum, displacement_unchecked, ensure_odd_prime, half, mub_ket_unchecked, omega_pow,
    MubVectorRef,
};

/// Largest p for which the full p² × p² operator is materialized by default.
pub const FULL_OPERATOR_LIMIT: u64 = 13;

/// Alice's `A_x = ω^{x(2x+1)/2} D_(1|x)` and Bob's `B_y = ω^{y(y+1)/4} D_(1|y/2)`,
/// phase exponents evaluated in Z_p.
#[derive(Clone, Debug)]
pub struct MeasurementOps {
    pub alice: Vec<ComplexMatrix>,
    pub bob: Vec<ComplexMatrix>,
}

pub fn measurement_ops(p: u64) -> Result<MeasurementOps> {
    ensure_odd_prime(p)?;
    let h = half(p);
    let quarter = inv_mod(4, p).expect("odd prime");
    let alice = (0..p)
        .map(|x| {
            let e = x * ((2 * x + 1) % p) % p * h % p;
            displacement_unchecked(1, x, p).scale(omega_pow(e as i64, p))
        })
        .collect();
    let bob = (0..p)
        .map(|y| {
            let e = y * ((y + 1) % p) % p * quarter % p;
            displacement_unchecked(1, y * h % p, p).scale(omega_pow(e as i64, p))
        })
        .collect();
    Ok(MeasurementOps { alice, bob })
}

/// `B = p^{-1} Σ_{n,x,y} ω^{nxy} A_x^n ⊗ B_y^n` and its traceless part `B*`
/// (the same sum with `n ≠ 0`), related by `B = B* + p·I`.
#[derive(Clone, Debug)]
pub struct BellOperators {
    pub p: u64,
    pub full: ComplexMatrix,
    pub traceless: ComplexMatrix,
}

pub fn bell_operator(p: u64) -> Result<BellOperators> {
    let ops = measurement_ops(p)?;
    let n = p as usize;
    let dim = n * n;
    let mut traceless = ComplexMatrix::zeros(dim, dim);
    for (x, ax) in ops.alice.iter().enumerate() {
        for (y, by) in ops.bob.iter().enumerate() {
            let mut a_pow = ax.clone();
            let mut b_pow = by.clone();
            for k in 1..p {
                let phase = omega_pow((k * x as u64 % p * y as u64 % p) as i64, p);
                traceless.add_assign_scaled(&a_pow.kron(&b_pow), phase);
                a_pow = a_pow.matmul(ax);
                b_pow = b_pow.matmul(by);
            }
        }
    }
    let traceless = traceless.scale_real(1.0 / p as f64).hermitian_part();
    let mut full = traceless.clone();
    full.add_assign_scaled(&ComplexMatrix::identity(dim), C64::new(p as f64, 0.0));
    Ok(BellOperators { p, full, traceless })
}

/// `V_B = -B(B + 1/2)` in Z_p: the vector of basis `B` picked out by `S`.
pub fn s_vector(b: u64, p: u64) -> u64 {
    let h = half(p);
    let t = b % p * ((b + h) % p) % p;
    (p - t) % p
}

/// `S = Σ_B |ψ_B^{V_B}⟩⟨ψ_B^{V_B}|` with `V_B = -B(B + 1/2)`: one projector
/// from each non-computational stabilizer basis.
pub fn s_operator(p: u64) -> Result<ComplexMatrix> {
    ensure_odd_prime(p)?;
    let n = p as usize;
    let mut s = ComplexMatrix::zeros(n, n);
    for b in 0..p {
        let ket = mub_ket_unchecked(MubVectorRef::finite(b, s_vector(b, p)), p);
        s.add_assign_scaled(&ket.projector(), ONE);
    }
    Ok(s.hermitian_part())
}

/// `S* = S - I`, the `n ≠ 0` part of the displacement sum defining `S`.
pub fn s_operator_traceless(p: u64) -> Result<ComplexMatrix> {
    let mut s = s_operator(p)?;
    s.add_assign_scaled(&ComplexMatrix::identity(p as usize), -ONE);
    Ok(s)
}

/// `S` from its displacement expansion
/// `p^{-1} Σ_{n,s} (ω^{s(s+1/2)} D_(1|s))^n`.
pub fn s_operator_from_displacements(p: u64) -> Result<ComplexMatrix> {
    ensure_odd_prime(p)?;
    let n = p as usize;
    let h = half(p);
    let mut acc = ComplexMatrix::zeros(n, n);
    for s in 0..p {
        let e = s * ((s + h) % p) % p;
        let g = displacement_unchecked(1, s, p).scale(omega_pow(e as i64, p));
        let mut power = ComplexMatrix::identity(n);
        for _ in 0..p {
            acc.add_assign_scaled(&power, ONE);
            power = power.matmul(&g);
        }
    }
    Ok(acc.scale_real(1.0 / p as f64))
}

/// Outcome of the CSUM reduction check
/// `CSUM† B* CSUM = p · S* ⊗ |0⟩⟨0|`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReductionCheck {
    pub p: u64,
    pub holds: bool,
    pub residual: f64,
}

pub const REDUCTION_TOL: f64 = 1e-8;

pub fn verify_reduction(p: u64) -> Result<ReductionCheck> {
    verify_reduction_with_limit(p, FULL_OPERATOR_LIMIT)
}

pub fn verify_reduction_with_limit(p: u64, limit: u64) -> Result<ReductionCheck> {
    check_full_limit(p, limit)?;
    let bell = bell_operator(p)?;
    let c = csum(p)?;
    let lhs = c.adjoint().matmul(&bell.traceless).matmul(&c);
    let n = p as usize;
    let mut e00 = ComplexMatrix::zeros(n, n);
    e00[(0, 0)] = ONE;
    let rhs = s_operator_traceless(p)?.kron(&e00).scale_real(p as f64);
    let residual = lhs.max_abs_diff(&rhs);
    Ok(ReductionCheck {
        p,
        holds: residual <= REDUCTION_TOL,
        residual,
    })
}

fn check_full_limit(p: u64, limit: u64) -> Result<()> {
    if p > limit {
        return Err(Error::InvalidArgument(format!(
            "full p^2 x p^2 Bell operator requested for p = {p} (limit {limit})"
        )));
    }
    Ok(())
}

/// `λ_max(B)` from the full p² × p² eigenproblem.
pub fn lambda_max_full(p: u64, limit: u64) -> Result<f64> {
    check_full_limit(p, limit)?;
    let bell = bell_operator(p)?;
    Ok(hermitian_eigen(&bell.full, HERMITIAN_TOL)?.max_eigenvalue())
}

pub fn s_spectrum(p: u64) -> Result<EigenResult> {
    hermitian_eigen(&s_operator(p)?, HERMITIAN_TOL)
}

/// `p (1 + (p-1)/√p)`: the Information Causality bound scaled to `⟨B⟩`.
pub fn ic_bound(p: u64) -> f64 {
    let pf = p as f64;
    pf * (1.0 + (pf - 1.0) / pf.sqrt())
}

/// `4p` from the Weil bound on cubic exponential sums; only for `p > 3`.
pub fn weil_bound(p: u64) -> Option<f64> {
    (p > 3).then_some(4.0 * p as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LhvEntry {
    pub value: u32,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameValueReport {
    pub p: u64,
    pub lambda_max_b: f64,
    /// `λ_max(B) / p²`.
    pub nu: f64,
    pub ic_bound: f64,
    pub weil_bound: Option<f64>,
    pub lhv: Option<LhvEntry>,
    /// Always true: the value is optimal for the Pauli measurements above,
    /// and non-Pauli measurements can exceed it for p > 3.
    pub pauli_restricted: bool,
}

impl GameValueReport {
    pub fn with_lhv(mut self, value: u32, exact: bool) -> Self {
        self.lhv = Some(LhvEntry { value, exact });
        self
    }
}

/// Quantum value of the Pauli-restricted game via `λ_max(B) = p·λ_max(S)`.
pub fn quantum_value(p: u64) -> Result<GameValueReport> {
    let lambda = p as f64 * s_spectrum(p)?.max_eigenvalue();
    Ok(GameValueReport {
        p,
        lambda_max_b: lambda,
        nu: lambda / (p * p) as f64,
        ic_bound: ic_bound(p),
        weil_bound: weil_bound(p),
        lhv: None,
        pauli_restricted: true,
    })
}

/// `Re ⟨ψ|O|ψ⟩`.
pub fn expectation(state: &ComplexVector, op: &ComplexMatrix) -> Result<f64> {
    if op.rows() != state.dim() || op.cols() != state.dim() {
        return Err(Error::DimensionMismatch {
            expected: op.cols(),
            got: state.dim(),
        });
    }
    Ok(state.inner(&op.mul_vec(state)).re)
}

/// `⟨J_{a,b,c}| B |J_{a,b,c}⟩`.
pub fn jamiolkowski_value(params: &MagicParams) -> Result<f64> {
    let bell = bell_operator(params.p())?;
    expectation(&jamiolkowski(params), &bell.full)
}

#[derive(Clone, Debug)]
pub struct QubitChsh {
    /// `XX + XY + YX - YY`.
    pub operator: ComplexMatrix,
    pub lambda_max: f64,
    /// `|J_{1,0,0}⟩`.
    pub optimal_state: ComplexVector,
    /// Game value `(4 + λ_max) / 8`.
    pub nu: f64,
    pub lhv_value: u32,
}

pub fn qubit_chsh() -> QubitChsh {
    let i = C64::new(0.0, 1.0);
    let x = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]);
    let y = ComplexMatrix::from_fn(2, 2, |r, c| match (r, c) {
        (0, 1) => -i,
        (1, 0) => i,
        _ => C64::new(0.0, 0.0),
    });
    let mut op = x.kron(&x);
    op.add_assign_scaled(&x.kron(&y), ONE);
    op.add_assign_scaled(&y.kron(&x), ONE);
    op.add_assign_scaled(&y.kron(&y), -ONE);
    let lambda_max = hermitian_eigen(&op, HERMITIAN_TOL)
        .expect("CHSH operator is Hermitian")
        .max_eigenvalue();
    let optimal_state = jamiolkowski(&MagicParams::new(1, 0, 0, 2).expect("valid qubit params"));
    // (1/p) Σ_{n,x,y} (ω^{xy} A_x B_y)^n with ω = -1 is (4I + CHSH)/2
    let nu = (4.0 + lambda_max) / 8.0;
    QubitChsh {
        operator: op,
        lambda_max,
        optimal_state,
        nu,
        lhv_value: 3,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::magic::magic_state;
    use crate::weyl::displacement_xz;

    #[test]
    fn a0_is_shift() {
        for p in [3u64, 5, 7] {
            let ops = measurement_ops(p).unwrap();
            assert!(ops.alice[0].max_abs_diff(&displacement_xz(1, 0, p).unwrap()) < 1e-15);
        }
    }

    #[test]
    fn alice_and_bob_settings_coincide() {
        let p = 7u64;
        let ops = measurement_ops(p).unwrap();
        let h = half(p);
        for y in 0..p {
            let x = (y * h % p) as usize;
            assert!(
                ops.alice[x].max_abs_diff(&ops.bob[y as usize]) < 1e-12,
                "y={y}"
            );
        }
    }

    #[test]
    fn measurements_have_full_root_of_unity_spectrum() {
        let p = 5u64;
        let ops = measurement_ops(p).unwrap();
        for a in ops.alice.iter().chain(&ops.bob) {
            assert!(a.is_unitary(1e-12));
            assert!(a.pow(p).max_abs_diff(&ComplexMatrix::identity(5)) < 1e-10);
            // eigenvalues of a unitary U via the Hermitian generator-free route:
            // the spectrum of (U + U†)/2 is {cos(2πj/p)} when U has all p-th roots
            let h = (&a.clone() + &a.adjoint()).scale_real(0.5);
            let eig = hermitian_eigen(&h, 1e-10).unwrap();
            let mut expect: Vec<f64> = (0..p)
                .map(|j| (2.0 * std::f64::consts::PI * j as f64 / p as f64).cos())
                .collect();
            expect.sort_by(f64::total_cmp);
            for (g, e) in eig.eigenvalues.iter().zip(&expect) {
                assert!((g - e).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn bell_traces_and_offset() {
        let bell = bell_operator(5).unwrap();
        assert!((bell.full.trace().re - 125.0).abs() < 1e-9);
        assert!(bell.traceless.trace().norm() < 1e-9);
        assert!(bell.full.is_hermitian(1e-10));
        assert!(bell.traceless.is_hermitian(1e-10));
        let diff = &bell.full - &bell.traceless;
        assert!(diff.max_abs_diff(&ComplexMatrix::identity(25).scale_real(5.0)) < 1e-12);
    }

    #[test]
    fn qutrit_bell_maximum() {
        // 3 + 2√3 cos(π/18)
        let expect = 3.0 + 2.0 * 3f64.sqrt() * (std::f64::consts::PI / 18.0).cos();
        assert!((expect - 6.4115).abs() < 1e-4);
        let full = lambda_max_full(3, FULL_OPERATOR_LIMIT).unwrap();
        assert!((full - expect).abs() < 1e-9);
        let bell = bell_operator(3).unwrap();
        let star = hermitian_eigen(&bell.traceless, 1e-10)
            .unwrap()
            .max_eigenvalue();
        assert!((full - (star + 3.0)).abs() < 1e-9);
    }

    #[test]
    fn p5_bell_maximum() {
        assert!((lambda_max_full(5, FULL_OPERATOR_LIMIT).unwrap() - 13.0902).abs() < 1e-4);
    }

    #[test]
    fn s_operator_qutrit_selects_paper_vectors() {
        assert_eq!(
            (0..3).map(|b| s_vector(b, 3)).collect::<Vec<_>>(),
            vec![0, 0, 1]
        );
        let s = s_operator(3).unwrap();
        let lmax = hermitian_eigen(&s, 1e-10).unwrap().max_eigenvalue();
        assert!((lmax - 6.4115 / 3.0).abs() < 1e-4);
    }

    #[test]
    fn s_operator_is_psd_with_trace_p() {
        for p in [3u64, 5, 7, 11] {
            let s = s_operator(p).unwrap();
            assert!((s.trace().re - p as f64).abs() < 1e-10);
            let eig = hermitian_eigen(&s, 1e-10).unwrap();
            assert!(eig.min_eigenvalue() > -1e-10);
        }
    }

    #[test]
    fn s_closed_form_matrix_elements() {
        // s_uv = (1/p) Σ_B ω^{(B/2)(u²-v²) + B(B+1/2)(u-v)}
        let p = 5u64;
        let h = half(p);
        let s = s_operator(p).unwrap();
        for u in 0..p {
            for v in 0..p {
                let mut acc = C64::new(0.0, 0.0);
                for b in 0..p {
                    let quad = (b * h % p) * ((u * u + p * p - v * v % p) % p) % p;
                    let lin = b * ((b + h) % p) % p * ((u + p - v) % p) % p;
                    acc += omega_pow((quad + lin) as i64, p);
                }
                acc /= p as f64;
                assert!((acc - s[(u as usize, v as usize)]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn s_projector_sum_matches_displacement_sum() {
        for p in [3u64, 5, 7, 11] {
            let a = s_operator(p).unwrap();
            let b = s_operator_from_displacements(p).unwrap();
            assert!(a.max_abs_diff(&b) < 1e-10, "p={p}");
        }
    }

    #[test]
    fn reduction_identity_small_primes() {
        for p in [3u64, 5, 7] {
            let r = verify_reduction(p).unwrap();
            assert!(r.holds, "p={p} residual={}", r.residual);
        }
        assert!(verify_reduction(17).is_err());
    }

    #[test]
    fn full_and_reduced_spectra_agree() {
        for p in [3u64, 5, 7, 11] {
            let full = lambda_max_full(p, FULL_OPERATOR_LIMIT).unwrap();
            let reduced = quantum_value(p).unwrap().lambda_max_b;
            assert!((full - reduced).abs() < 1e-7, "p={p}: {full} vs {reduced}");
        }
    }

    #[test]
    fn report_fields() {
        let r = quantum_value(11).unwrap();
        assert!((r.lambda_max_b - 34.6464).abs() < 1e-4);
        assert!((r.ic_bound - 44.1662).abs() < 1e-4);
        assert_eq!(r.weil_bound, Some(44.0));
        assert!((r.nu - r.lambda_max_b / 121.0).abs() < 1e-15);
        let r3 = quantum_value(3).unwrap();
        assert!((r3.ic_bound - 6.4641).abs() < 1e-4);
        assert_eq!(r3.weil_bound, None);
        let r29 = quantum_value(29).unwrap();
        assert!((r29.lambda_max_b - 104.819).abs() < 1e-3);
        assert_eq!(r29.weil_bound, Some(116.0));
    }

    #[test]
    fn bounds_dominate_quantum_value() {
        for p in [5u64, 7, 11, 13, 17, 19, 23, 29, 31] {
            let r = quantum_value(p).unwrap();
            assert!(r.lambda_max_b <= 4.0 * p as f64 + 1e-9);
            assert!(r.lambda_max_b <= r.ic_bound + 1e-9);
        }
    }

    #[test]
    fn expectation_examples() {
        let j = jamiolkowski(&MagicParams::new(1, 1, 0, 3).unwrap());
        let bell = bell_operator(3).unwrap();
        let v = expectation(&j, &bell.full).unwrap();
        assert!((v - 3.0 - 2.0 * 3f64.sqrt() * (std::f64::consts::PI / 18.0).cos()).abs() < 1e-10);

        let phi = crate::magic::bell_pair(5);
        assert!((expectation(&phi, &ComplexMatrix::identity(25)).unwrap() - 1.0).abs() < 1e-14);

        assert!(matches!(
            expectation(&phi, &ComplexMatrix::identity(5)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn optimal_jamiolkowski_attains_lambda_max_p5() {
        let p = 5u64;
        let lmax = lambda_max_full(p, FULL_OPERATOR_LIMIT).unwrap();
        let best = (0..p as i64)
            .map(|c| jamiolkowski_value(&MagicParams::chsh_optimal(c, p).unwrap()).unwrap())
            .fold(f64::MIN, f64::max);
        assert!((best - lmax).abs() < 1e-9);
    }

    #[test]
    fn lambda_max_s_from_plus_overlap() {
        for p in [5u64, 7, 11, 13] {
            let lmax = s_spectrum(p).unwrap().max_eigenvalue();
            let plus = mub_ket_unchecked(MubVectorRef::finite(0, 0), p);
            let best = (0..p as i64)
                .map(|c| {
                    let f = magic_state(&MagicParams::chsh_optimal(c, p).unwrap());
                    p as f64 * plus.fidelity(&f)
                })
                .fold(f64::MIN, f64::max);
            assert!((best - lmax).abs() < 1e-9, "p={p}");
        }
    }

    #[test]
    fn qubit_anchor() {
        let q = qubit_chsh();
        assert!((q.lambda_max - 2.0 * 2f64.sqrt()).abs() < 1e-10);
        assert!(
            (expectation(&q.optimal_state, &q.operator).unwrap() - 2.0 * 2f64.sqrt()).abs() < 1e-12
        );
        assert!((q.nu - (2.0 + 2f64.sqrt()) / 4.0).abs() < 1e-12);
        assert!((q.nu - 0.5 * (1.0 + 1.0 / 2f64.sqrt())).abs() < 1e-12);
        assert_eq!(q.lhv_value, 3);
    }
}
