//! Magic states `|f_{a,b,c}⟩`, diagonal magic gates `M_{a,b,c}`, their
//! Jamiołkowski states and the magic-fixing Clifford `M X M†`.
//!
//! For `p > 3` the amplitudes are `ω^{ak³+bk²+ck}/√p`. The two smallest
//! primes use dedicated forms with eighth (p = 2) and ninth (p = 3) roots of
//! unity; for those the exponents are taken mod 8 and mod 9 respectively.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{ensure_prime, eval_cubic, frac, Fp};
use crate::linalg::{ComplexMatrix, ComplexVector, C64};
use crate::weyl::{displacement, ensure_odd_prime, omega_pow, PauliIndex};

/// `(a, b, c)` with `a ∈ Z_p^*`, `b, c ∈ Z_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MagicParams {
    a: Fp,
    b: Fp,
    c: Fp,
}

impl MagicParams {
    pub fn new(a: i64, b: i64, c: i64, p: u64) -> Result<Self> {
        Self::from_fp(Fp::new(a, p)?, Fp::new(b, p)?, Fp::new(c, p)?)
    }

    pub fn from_fp(a: Fp, b: Fp, c: Fp) -> Result<Self> {
        let p = a.modulus();
        for m in [b.modulus(), c.modulus()] {
            if m != p {
                return Err(Error::ModulusMismatch(p, m));
            }
        }
        if a.is_zero() {
            return Err(Error::InvalidMagicParams(format!(
                "a must be nonzero in Z_{p}"
            )));
        }
        Ok(MagicParams { a, b, c })
    }

    /// `(a, b) = (-1/12, -1/8)`: the family that diagonalizes the CHSH
    /// single-qudit operator. Needs `p > 3`.
    pub fn chsh_optimal(c: i64, p: u64) -> Result<Self> {
        if p <= 3 {
            return Err(Error::UnsupportedDimension {
                p,
                reason: "-1/12 and -1/8 are undefined for p <= 3",
            });
        }
        Self::from_fp(frac(-1, 12, p)?, frac(-1, 8, p)?, Fp::new(c, p)?)
    }

    pub fn a(&self) -> Fp {
        self.a
    }

    pub fn b(&self) -> Fp {
        self.b
    }

    pub fn c(&self) -> Fp {
        self.c
    }

    pub fn p(&self) -> u64 {
        self.a.modulus()
    }

    pub fn with_c(&self, c: i64) -> Self {
        MagicParams {
            c: self.c.with_value(c),
            ..*self
        }
    }

    /// Phase of amplitude `k` in radians (`k = 0` is always 0).
    pub fn phases(&self) -> Vec<f64> {
        let (a, b, c) = (
            self.a.value() as f64,
            self.b.value() as f64,
            self.c.value() as f64,
        );
        match self.p() {
            2 => vec![0.0, 2.0 * PI / 8.0 * ((a + 2.0 * b + 4.0 * c) % 8.0)],
            3 => vec![
                0.0,
                2.0 * PI / 9.0 * ((2.0 * a + 6.0 * b + 3.0 * c) % 9.0),
                2.0 * PI / 9.0 * ((a + 6.0 * b + 6.0 * c) % 9.0),
            ],
            p => (0..p as i64)
                .map(|k| {
                    let e = eval_cubic(self.a, self.b, self.c, self.a.with_value(k))
                        .expect("shared modulus");
                    2.0 * PI * e.value() as f64 / p as f64
                })
                .collect(),
        }
    }

    /// Unimodular diagonal of `M_{a,b,c}`.
    fn diagonal(&self) -> Vec<C64> {
        match self.p() {
            2 | 3 => self
                .phases()
                .into_iter()
                .map(|t| C64::from_polar(1.0, t))
                .collect(),
            p => (0..p as i64)
                .map(|k| {
                    let e = eval_cubic(self.a, self.b, self.c, self.a.with_value(k))
                        .expect("shared modulus");
                    omega_pow(e.value() as i64, p)
                })
                .collect(),
        }
    }
}

pub fn magic_state(params: &MagicParams) -> ComplexVector {
    let amp = 1.0 / (params.p() as f64).sqrt();
    ComplexVector::new(params.diagonal().into_iter().map(|z| z * amp).collect())
}

/// Diagonal gate with `M |+⟩ = |f_{a,b,c}⟩`.
pub fn magic_gate(params: &MagicParams) -> ComplexMatrix {
    ComplexMatrix::from_diag(&params.diagonal())
}

/// `|Φ⟩ = Σ_j |jj⟩ / √p`.
pub fn bell_pair(p: u64) -> ComplexVector {
    let n = p as usize;
    let mut v = ComplexVector::zeros(n * n);
    for j in 0..n {
        v[j * n + j] = C64::new(1.0 / (p as f64).sqrt(), 0.0);
    }
    v
}

/// `(I ⊗ M_{a,b,c}) |Φ⟩`.
pub fn jamiolkowski(params: &MagicParams) -> ComplexVector {
    let n = params.p() as usize;
    let f = magic_state(params);
    let mut v = ComplexVector::zeros(n * n);
    for j in 0..n {
        v[j * n + j] = f[j];
    }
    v
}

/// `C_{a,b,c} = M X M†`, which fixes `|f_{a,b,c}⟩`.
pub fn magic_clifford(params: &MagicParams) -> Result<ComplexMatrix> {
    let p = params.p();
    ensure_odd_prime(p)?;
    let m = magic_gate(params);
    let x = crate::weyl::displacement_xz(1, 0, p)?;
    Ok(x.conjugate_by(&m))
}

/// The displacement `(x, z) = (-b/3a, c - b²/3a)` with
/// `D_(x|z)|f_{a,0,0}⟩ ∝ |f_{a,b,c}⟩`.
pub fn displacement_from_params(params: &MagicParams) -> Result<(Fp, Fp)> {
    let p = params.p();
    require_above_three(p)?;
    let three_a = params.a.with_value(3) * params.a;
    let inv = three_a.inv()?;
    let x = -(params.b * inv);
    let z = params.c - params.b * params.b * inv;
    Ok((x, z))
}

/// Inverse of [`displacement_from_params`]: `b = -3ax`, `c = z + 3ax²`.
///
/// The result is checked numerically against the state vectors (up to global
/// phase); a mismatch is reported as a violation rather than returned.
pub fn params_from_displacement(a: Fp, x: Fp, z: Fp) -> Result<(Fp, Fp)> {
    let p = a.modulus();
    ensure_prime(p)?;
    require_above_three(p)?;
    if x.modulus() != p || z.modulus() != p {
        return Err(Error::ModulusMismatch(p, x.modulus().max(z.modulus())));
    }
    let three_a = a.with_value(3) * a;
    let b = -(three_a * x);
    let c = z + three_a * x * x;

    let base = magic_state(&MagicParams::from_fp(a, a.with_value(0), a.with_value(0))?);
    let moved = displacement(PauliIndex::new(x, z)?)?.mul_vec(&base);
    let target = magic_state(&MagicParams::from_fp(a, b, c)?);
    let overlap = moved.fidelity(&target);
    if (overlap - 1.0).abs() > 1e-9 {
        return Err(Error::violation(
            "Pauli action on magic states",
            format!("p={p} a={a} x={x} z={z}"),
            format!("|<f_(a,b,c)|D f_(a,0,0)>|^2 = {overlap}"),
        ));
    }
    Ok((b, c))
}

fn require_above_three(p: u64) -> Result<()> {
    if p <= 3 {
        Err(Error::UnsupportedDimension {
            p,
            reason: "3^{-1} is needed, so p > 3",
        })
    } else {
        Ok(())
    }
}

/// Whether `state` equals some `|f_{a,b,c}⟩` up to global phase; returns the
/// first matching parameters.
pub fn identify_magic_state(state: &ComplexVector, tol: f64) -> Option<MagicParams> {
    let p = state.dim() as u64;
    if ensure_prime(p).is_err() {
        return None;
    }
    for a in 1..p as i64 {
        for b in 0..p as i64 {
            for c in 0..p as i64 {
                let params = MagicParams::new(a, b, c, p).ok()?;
                if magic_state(&params).fidelity(state) > 1.0 - tol {
                    return Some(params);
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ONE;
    use crate::weyl::displacement_coefficient;

    fn params(a: i64, b: i64, c: i64, p: u64) -> MagicParams {
        MagicParams::new(a, b, c, p).unwrap()
    }

    #[test]
    fn zero_a_is_rejected() {
        assert!(matches!(
            MagicParams::new(0, 1, 1, 5),
            Err(Error::InvalidMagicParams(_))
        ));
        assert!(matches!(
            MagicParams::new(7, 1, 1, 7),
            Err(Error::InvalidMagicParams(_))
        ));
    }

    #[test]
    fn qubit_h_state() {
        let f = magic_state(&params(1, 0, 0, 2));
        let gamma = C64::from_polar(1.0, PI / 4.0);
        let s = 1.0 / 2f64.sqrt();
        assert!((f[0] - C64::new(s, 0.0)).norm() < 1e-15);
        assert!((f[1] - gamma * s).norm() < 1e-15);
        let m = magic_gate(&params(1, 0, 0, 2));
        assert!(m.max_abs_diff(&ComplexMatrix::from_diag(&[ONE, gamma])) < 1e-15);
    }

    #[test]
    fn p5_amplitudes_are_cubic_phases() {
        let f = magic_state(&params(1, 0, 0, 5));
        for k in 0..5i64 {
            let expect = omega_pow(k * k * k, 5) / 5f64.sqrt();
            assert!((f[k as usize] - expect).norm() < 1e-15);
        }
    }

    #[test]
    fn overlap_pattern_p7() {
        let f = magic_state(&params(1, 2, 3, 7));
        let g = magic_state(&params(1, 2, 4, 7));
        let h = magic_state(&params(1, 3, 3, 7));
        assert!(f.inner(&g).norm() < 1e-12);
        assert!((f.inner(&h).norm() - 1.0 / 7f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn fixed_a_gives_unbiased_orthonormal_bases() {
        for p in [5u64, 7] {
            for a in 1..p as i64 {
                let states: Vec<Vec<ComplexVector>> = (0..p as i64)
                    .map(|b| {
                        (0..p as i64)
                            .map(|c| magic_state(&params(a, b, c, p)))
                            .collect()
                    })
                    .collect();
                for b1 in 0..p as usize {
                    for b2 in 0..p as usize {
                        for c1 in 0..p as usize {
                            for c2 in 0..p as usize {
                                let o = states[b1][c1].inner(&states[b2][c2]).norm();
                                let expect = if b1 != b2 {
                                    1.0 / (p as f64).sqrt()
                                } else if c1 == c2 {
                                    1.0
                                } else {
                                    0.0
                                };
                                assert!((o - expect).abs() < 1e-12);
                            }
                        }
                    }
                }
                // unbiased with the computational basis as well
                assert!(states[0][0]
                    .iter()
                    .all(|z| (z.norm_sqr() - 1.0 / p as f64).abs() < 1e-14));
            }
        }
    }

    #[test]
    fn gate_prepares_state_from_plus() {
        let p = 7;
        let plus = ComplexVector::new(vec![C64::new(1.0 / 7f64.sqrt(), 0.0); 7]);
        for (a, b, c) in [(1, 0, 0), (3, 2, 5), (6, 6, 6), (2, 1, 0)] {
            let pr = params(a, b, c, p);
            let m = magic_gate(&pr);
            assert!(m.mul_vec(&plus).max_abs_diff(&magic_state(&pr)) < 1e-14);
        }
    }

    #[test]
    fn gates_are_diagonal_unitaries() {
        for a in 1..5 {
            for b in 0..5 {
                for c in 0..5 {
                    let m = magic_gate(&params(a, b, c, 5));
                    assert_eq!(m.max_off_diagonal(), 0.0);
                    assert!(m.is_unitary(1e-12));
                    assert!(m.diagonal().iter().all(|z| (z.norm() - 1.0).abs() < 1e-14));
                }
            }
        }
    }

    #[test]
    fn qutrit_forms_use_ninth_roots() {
        let f = magic_state(&params(1, 1, 0, 3));
        let xi = |e: f64| C64::from_polar(1.0, 2.0 * PI * e / 9.0) / 3f64.sqrt();
        assert!((f[1] - xi(8.0)).norm() < 1e-14);
        assert!((f[2] - xi(7.0)).norm() < 1e-14);
    }

    #[test]
    fn jamiolkowski_structure() {
        for p in [2u64, 3, 5, 7] {
            let pr = params(1, 1 % p as i64, 0, p);
            let j = jamiolkowski(&pr);
            let f = magic_state(&pr);
            let n = p as usize;
            assert!((j.norm() - 1.0).abs() < 1e-14);
            for a in 0..n {
                for b in 0..n {
                    let expect = if a == b { f[a] } else { C64::new(0.0, 0.0) };
                    assert_eq!(j[a * n + b], expect);
                }
            }
            let rho = j.projector();
            let identity_over_p = ComplexMatrix::identity(n).scale_real(1.0 / p as f64);
            assert!(rho.partial_trace_first(n, n).max_abs_diff(&identity_over_p) < 1e-14);
            assert!(
                rho.partial_trace_second(n, n)
                    .max_abs_diff(&identity_over_p)
                    < 1e-14
            );
        }
    }

    #[test]
    fn jamiolkowski_is_gate_on_bell_pair() {
        let pr = params(2, 3, 1, 5);
        let op = ComplexMatrix::identity(5).kron(&magic_gate(&pr));
        assert!(op.mul_vec(&bell_pair(5)).max_abs_diff(&jamiolkowski(&pr)) < 1e-14);
    }

    #[test]
    fn clifford_fixes_its_magic_state() {
        let pr = params(1, 0, 0, 5);
        let c = magic_clifford(&pr).unwrap();
        let f = magic_state(&pr);
        assert!(c.mul_vec(&f).max_abs_diff(&f) < 1e-10);
        assert!(c.is_unitary(1e-12));
    }

    #[test]
    fn clifford_maps_paulis_to_paulis() {
        let p = 5u64;
        let c = magic_clifford(&params(1, 2, 3, p)).unwrap();
        for (x, z) in [(1i64, 0i64), (0, 1), (2, 3), (4, 4)] {
            let conj = crate::weyl::displacement_xz(x, z, p)
                .unwrap()
                .conjugate_by(&c);
            // exactly one displacement coefficient of modulus 1, the rest zero
            let mags: Vec<f64> = (0..p)
                .flat_map(|u| (0..p).map(move |v| (u, v)))
                .map(|(u, v)| displacement_coefficient(&conj, u, v, p).norm())
                .collect();
            let ones = mags.iter().filter(|&&m| (m - 1.0).abs() < 1e-10).count();
            let zeros = mags.iter().filter(|&&m| m < 1e-10).count();
            assert_eq!((ones, zeros), (1, (p * p - 1) as usize), "(x|z)=({x}|{z})");
        }
    }

    #[test]
    fn params_from_displacement_examples() {
        let p = 7;
        let f = |v| Fp::new(v, p).unwrap();
        let (b, c) = params_from_displacement(f(3), f(0), f(0)).unwrap();
        assert_eq!((b.value(), c.value()), (0, 0));

        let p5 = |v| Fp::new(v, 5).unwrap();
        let (x, z) = displacement_from_params(&MagicParams::new(1, 3, 0, 5).unwrap()).unwrap();
        assert_eq!((x.value(), z.value()), (4, 2));
        let (b, c) = params_from_displacement(p5(1), x, z).unwrap();
        assert_eq!((b.value(), c.value()), (3, 0));
    }

    #[test]
    fn params_round_trip_p7() {
        let p = 7u64;
        for a in 1..7 {
            for b in 0..7 {
                for c in 0..7 {
                    let pr = params(a, b, c, p);
                    let (x, z) = displacement_from_params(&pr).unwrap();
                    let (b2, c2) = params_from_displacement(pr.a(), x, z).unwrap();
                    assert_eq!((b2, c2), (pr.b(), pr.c()));
                }
            }
        }
    }

    #[test]
    fn params_from_displacement_needs_p_above_three() {
        let f = |v| Fp::new(v, 3).unwrap();
        assert!(matches!(
            params_from_displacement(f(1), f(1), f(0)),
            Err(Error::UnsupportedDimension { p: 3, .. })
        ));
    }

    #[test]
    fn identify_recovers_parameters() {
        let pr = params(4, 2, 6, 7);
        let rotated = magic_state(&pr).scale(C64::from_polar(1.0, 0.7));
        let found = identify_magic_state(&rotated, 1e-9).unwrap();
        assert_eq!(found, pr);
        assert!(identify_magic_state(&ComplexVector::basis(7, 0), 1e-9).is_none());
    }

    #[test]
    fn canonical_phase_is_deterministic() {
        let pr = params(1, 0, 0, 5);
        let f = magic_state(&pr);
        let g = f.scale(C64::from_polar(1.0, 2.1)).canonical_phase();
        assert!(g.max_abs_diff(&f.canonical_phase()) < 1e-14);
        assert!(g[0].im.abs() < 1e-15 && g[0].re > 0.0);
    }
}
