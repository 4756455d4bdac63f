//! Weyl–Heisenberg displacement operators, the p + 1 stabilizer MUBs and the
//! CSUM gate for odd prime p.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{ensure_prime, inv_mod, reduce, Fp};
use crate::linalg::{ComplexMatrix, ComplexVector, C64, ZERO};

/// `ω^m` with `ω = e^{2πi/p}`; `m` is reduced mod p before exponentiation.
#[inline]
pub fn omega_pow(m: i64, p: u64) -> C64 {
    let r = reduce(m, p);
    C64::from_polar(1.0, 2.0 * PI * r as f64 / p as f64)
}

/// Table of `ω^j` for `j = 0..p`.
pub fn omega_table(p: u64) -> Vec<C64> {
    (0..p as i64).map(|j| omega_pow(j, p)).collect()
}

pub fn ensure_odd_prime(p: u64) -> Result<()> {
    ensure_prime(p)?;
    if p == 2 {
        return Err(Error::UnsupportedDimension {
            p,
            reason: "the Weyl-Heisenberg phase 2^{-1} needs an odd prime",
        });
    }
    Ok(())
}

/// `2^{-1}` in Z_p for odd p.
pub(crate) fn half(p: u64) -> u64 {
    inv_mod(2, p).expect("odd prime")
}

/// Single-qudit phase-space point `(x|z)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliIndex {
    pub x: Fp,
    pub z: Fp,
}

impl PauliIndex {
    pub fn new(x: Fp, z: Fp) -> Result<Self> {
        if x.modulus() != z.modulus() {
            return Err(Error::ModulusMismatch(x.modulus(), z.modulus()));
        }
        Ok(PauliIndex { x, z })
    }

    pub fn from_ints(x: i64, z: i64, p: u64) -> Result<Self> {
        Self::new(Fp::new(x, p)?, Fp::new(z, p)?)
    }

    pub fn modulus(&self) -> u64 {
        self.x.modulus()
    }

    /// `(nx|nz)`.
    pub fn scaled(&self, n: i64) -> Self {
        let n = self.x.with_value(n);
        PauliIndex {
            x: self.x * n,
            z: self.z * n,
        }
    }
}

/// A basis in the complete set of stabilizer MUBs: the computational basis or
/// the eigenbasis of `D_(1|B)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MubLabel {
    Infinity,
    Finite(u64),
}

impl MubLabel {
    /// `∞, 0, 1, …, p-1`.
    pub fn all(p: u64) -> Vec<MubLabel> {
        std::iter::once(MubLabel::Infinity)
            .chain((0..p).map(MubLabel::Finite))
            .collect()
    }

    /// The p non-computational bases.
    pub fn finite(p: u64) -> Vec<MubLabel> {
        (0..p).map(MubLabel::Finite).collect()
    }

    /// Column index in a MUB table (∞ first).
    pub fn column(self) -> usize {
        match self {
            MubLabel::Infinity => 0,
            MubLabel::Finite(b) => b as usize + 1,
        }
    }
}

impl fmt::Display for MubLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MubLabel::Infinity => write!(f, "inf"),
            MubLabel::Finite(b) => write!(f, "{b}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MubVectorRef {
    pub basis: MubLabel,
    pub vector: u64,
}

impl MubVectorRef {
    pub fn new(basis: MubLabel, vector: u64) -> Self {
        MubVectorRef { basis, vector }
    }

    pub fn finite(basis: u64, vector: u64) -> Self {
        MubVectorRef {
            basis: MubLabel::Finite(basis),
            vector,
        }
    }
}

/// `D_(x|z) = ω^{2^{-1}xz} X^x Z^z`, with the phase exponent evaluated in Z_p
/// so that `D_(x|z)^n = D_(nx|nz)`.
pub fn displacement(idx: PauliIndex) -> Result<ComplexMatrix> {
    let p = idx.modulus();
    ensure_odd_prime(p)?;
    Ok(displacement_unchecked(idx.x.value(), idx.z.value(), p))
}

pub fn displacement_xz(x: i64, z: i64, p: u64) -> Result<ComplexMatrix> {
    displacement(PauliIndex::from_ints(x, z, p)?)
}

pub(crate) fn displacement_unchecked(x: u64, z: u64, p: u64) -> ComplexMatrix {
    let n = p as usize;
    let phase = half(p) * x % p * z % p;
    let mut m = ComplexMatrix::zeros(n, n);
    for k in 0..p {
        let row = ((k + x) % p) as usize;
        m[(row, k as usize)] = omega_pow((phase + k * z % p) as i64, p);
    }
    m
}

/// `|ψ_B^V⟩ = p^{-1/2} Σ_k ω^{2^{-1}Bk² - Vk} |k⟩`; the computational vector
/// `|V⟩` for the ∞ basis. `|ψ_B^V⟩` is the `ω^V` eigenvector of `D_(1|B)`.
pub fn mub_ket(r: MubVectorRef, p: u64) -> Result<ComplexVector> {
    ensure_odd_prime(p)?;
    Ok(mub_ket_unchecked(r, p))
}

pub(crate) fn mub_ket_unchecked(r: MubVectorRef, p: u64) -> ComplexVector {
    let n = p as usize;
    let v = r.vector % p;
    match r.basis {
        MubLabel::Infinity => ComplexVector::basis(n, v as usize),
        MubLabel::Finite(b) => {
            let h = half(p);
            let amp = 1.0 / (p as f64).sqrt();
            ComplexVector::new(
                (0..p)
                    .map(|k| {
                        let e = (h * (b % p) % p * k % p * k + (p - v) * k) % p;
                        omega_pow(e as i64, p) * amp
                    })
                    .collect(),
            )
        }
    }
}

/// All `p + 1` bases, indexed `[basis column][V]` with ∞ first.
pub fn all_mub_kets(p: u64) -> Result<Vec<Vec<ComplexVector>>> {
    ensure_odd_prime(p)?;
    Ok(MubLabel::all(p)
        .into_iter()
        .map(|label| {
            (0..p)
                .map(|v| mub_ket_unchecked(MubVectorRef::new(label, v), p))
                .collect()
        })
        .collect())
}

/// Rank-one projector `|ψ_B^V⟩⟨ψ_B^V|`, built as an outer product of
/// [`mub_ket`].
pub fn mub_projector(r: MubVectorRef, p: u64) -> Result<ComplexMatrix> {
    Ok(mub_ket(r, p)?.projector())
}

/// The same projector as the spectral sum `p^{-1} Σ_j ω^{-jV} D_(1|B)^j`.
pub fn mub_projector_spectral(r: MubVectorRef, p: u64) -> Result<ComplexMatrix> {
    ensure_odd_prime(p)?;
    let n = p as usize;
    let b = match r.basis {
        MubLabel::Infinity => return mub_projector(r, p),
        MubLabel::Finite(b) => b % p,
    };
    let d = displacement_unchecked(1, b, p);
    let mut acc = ComplexMatrix::zeros(n, n);
    let mut power = ComplexMatrix::identity(n);
    for j in 0..p {
        acc.add_assign_scaled(&power, omega_pow(-((j * (r.vector % p)) as i64), p));
        power = power.matmul(&d);
    }
    Ok(acc.scale_real(1.0 / p as f64))
}

/// `CSUM: |j, k⟩ ↦ |j, k + j⟩` on `C^p ⊗ C^p`.
pub fn csum(p: u64) -> Result<ComplexMatrix> {
    ensure_odd_prime(p)?;
    let n = p as usize;
    let mut m = ComplexMatrix::zeros(n * n, n * n);
    for j in 0..n {
        for k in 0..n {
            m[(j * n + (k + j) % n, j * n + k)] = C64::new(1.0, 0.0);
        }
    }
    Ok(m)
}

/// Two-qudit displacement `D_(x1,x2|z1,z2) = D_(x1|z1) ⊗ D_(x2|z2)`.
pub fn displacement2(x: [i64; 2], z: [i64; 2], p: u64) -> Result<ComplexMatrix> {
    Ok(displacement_xz(x[0], z[0], p)?.kron(&displacement_xz(x[1], z[1], p)?))
}

/// Expansion coefficient of `m` along `D_(x|z)`: `Tr(D_(x|z)† m) / p`.
pub fn displacement_coefficient(m: &ComplexMatrix, x: u64, z: u64, p: u64) -> C64 {
    let d = displacement_unchecked(x, z, p);
    let n = p as usize;
    let mut acc = ZERO;
    for i in 0..n {
        for j in 0..n {
            acc += d[(j, i)].conj() * m[(j, i)];
        }
    }
    acc / p as f64
}
