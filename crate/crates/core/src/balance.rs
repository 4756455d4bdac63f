//! Checks that magic states are balanced across the `p` non-computational
//! stabilizer bases, that they diagonalize `S`, that their Clifford
//! stabilizer cycles through those bases, and the Sato–Tate statistics of the
//! underlying cubic sums.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::bell::s_operator;
use crate::entropy::mub_table;
use crate::error::{Error, Result};
use crate::field::{ensure_prime, Fp};
use crate::linalg::{
    hermitian_eigen, ComplexMatrix, ComplexVector, EigenResult, C64, HERMITIAN_TOL,
};
use crate::magic::{magic_clifford, magic_state, MagicParams};
use crate::weyl::{all_mub_kets, half, mub_ket_unchecked, omega_pow, MubLabel, MubVectorRef};

pub const BALANCE_TOL: f64 = 1e-10;
pub const OFF_DIAGONAL_TOL: f64 = 1e-9;
pub const IDENTIFY_TOL: f64 = 1e-9;

fn require_above_three(p: u64) -> Result<()> {
    ensure_prime(p)?;
    if p <= 3 {
        return Err(Error::UnsupportedDimension {
            p,
            reason: "12^{-1} does not exist for p <= 3",
        });
    }
    Ok(())
}

fn cubic_sum(a: u64, b: u64, c: u64, p: u64) -> C64 {
    (0..p)
        .map(|k| {
            let e = (a * (k * k % p * k % p) + b * (k * k % p) + c * k) % p;
            omega_pow(e as i64, p)
        })
        .sum()
}

/// `T_{a,b,c} = |Σ_k ω^{ak³+bk²+ck}| / p`.
pub fn t_value(a: i64, b: i64, c: i64, p: u64) -> Result<f64> {
    require_above_three(p)?;
    let params = MagicParams::new(a, b, c, p)?;
    let s = cubic_sum(
        params.a().value(),
        params.b().value(),
        params.c().value(),
        p,
    );
    Ok(s.norm() / p as f64)
}

/// `V ↦ V + Δ(B)` with `Δ(B) = (B² - 4Bb)/(12a)` maps the probabilities of
/// `|f_{a,b,c}⟩` in basis 0 onto those in basis `B`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BalancePermutation {
    pub p: u64,
    pub a: u64,
    pub b: u64,
    pub c: u64,
    /// `Δ(B)` for `B = 0 … p-1`.
    pub offsets: Vec<u64>,
    /// Largest `|c_{V,0} - c_{V+Δ(B),B}|` seen.
    pub residual: f64,
}

pub fn balance_offset(a: Fp, b: Fp, basis: u64) -> Result<Fp> {
    let big_b = a.with_value(basis as i64);
    let twelve_a = a.with_value(12).checked_mul(a)?;
    let num = big_b * big_b - a.with_value(4) * big_b * b;
    num.checked_div(twelve_a)
}

pub fn balanced_permutation(a: i64, b: i64, p: u64, c: i64) -> Result<BalancePermutation> {
    require_above_three(p)?;
    let params = MagicParams::new(a, b, c, p)?;
    let offsets = (0..p)
        .map(|basis| balance_offset(params.a(), params.b(), basis).map(Fp::value))
        .collect::<Result<Vec<_>>>()?;
    let table = mub_table(&magic_state(&params), p)?;
    let base = table.column(MubLabel::Finite(0));
    let mut residual: f64 = 0.0;
    for basis in 0..p {
        let col = table.column(MubLabel::Finite(basis));
        for v in 0..p {
            let w = (v + offsets[basis as usize]) % p;
            let d = (base[v as usize] - col[w as usize]).abs();
            residual = residual.max(d);
            if d > BALANCE_TOL {
                return Err(Error::violation(
                    "balance::permutation",
                    format!(
                        "(a,b,c)=({},{},{}) B={basis} V={v}",
                        params.a().value(),
                        params.b().value(),
                        params.c().value()
                    ),
                    format!(
                        "c(V,0)={} but c(V+offset,B)={} (offset {})",
                        base[v as usize], col[w as usize], offsets[basis as usize]
                    ),
                ));
            }
        }
    }
    Ok(BalancePermutation {
        p,
        a: params.a().value(),
        b: params.b().value(),
        c: params.c().value(),
        offsets,
        residual,
    })
}

/// Checks that every non-computational basis sees the same multiset of
/// outcome probabilities, without using an offset formula.
pub fn verify_multiset_balance(state: &ComplexVector, tol: f64) -> Result<f64> {
    let p = state.dim() as u64;
    let table = mub_table(state, p)?;
    let sorted = |basis: u64| {
        let mut col = table.column(MubLabel::Finite(basis)).to_vec();
        col.sort_by(f64::total_cmp);
        col
    };
    let reference = sorted(0);
    let mut residual: f64 = 0.0;
    for basis in 1..p {
        for (v, (x, y)) in reference.iter().zip(sorted(basis)).enumerate() {
            let d = (x - y).abs();
            residual = residual.max(d);
            if d > tol {
                return Err(Error::violation(
                    "balance::multiset",
                    format!("B={basis} rank={v}"),
                    format!("{x} vs {y}"),
                ));
            }
        }
    }
    Ok(residual)
}

#[derive(Clone, Debug)]
pub struct SDiagonalization {
    pub p: u64,
    /// Columns `|f_{-1/12,-1/8,c}⟩` for `c = 0 … p-1`.
    pub unitary: ComplexMatrix,
    /// Diagonal of `U† S U`, indexed by `c`.
    pub diagonal: Vec<f64>,
    pub off_diagonal_max: f64,
    /// The `c` with the largest diagonal entry.
    pub best_c: u64,
    /// Spectrum sorted ascending with matching eigenvectors.
    pub eigen: EigenResult,
}

impl SDiagonalization {
    pub fn lambda_max(&self) -> f64 {
        self.diagonal[self.best_c as usize]
    }
}

/// `S` in the basis of magic states `|f_{-1/12,-1/8,c}⟩`.
pub fn diagonalize_s(p: u64) -> Result<SDiagonalization> {
    require_above_three(p)?;
    let states: Vec<ComplexVector> = (0..p as i64)
        .map(|c| MagicParams::chsh_optimal(c, p).map(|m| magic_state(&m)))
        .collect::<Result<_>>()?;
    let u = ComplexMatrix::from_columns(&states);
    if !u.is_unitary(1e-10) {
        return Err(Error::violation(
            "balance::unitary",
            format!("p={p}"),
            "magic columns not orthonormal",
        ));
    }
    let s = s_operator(p)?;
    let d = u.adjoint().matmul(&s).matmul(&u);
    let off = d.max_off_diagonal();
    if off > OFF_DIAGONAL_TOL {
        return Err(Error::violation(
            "balance::diagonalize",
            format!("p={p}"),
            format!("off-diagonal entry {off:e} of U^dag S U"),
        ));
    }
    let diagonal: Vec<f64> = d.diagonal().iter().map(|z| z.re).collect();
    let best_c = diagonal
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.total_cmp(y.1).then(y.0.cmp(&x.0)))
        .map(|(i, _)| i as u64)
        .expect("p > 0");

    let plus = mub_ket_unchecked(MubVectorRef::finite(0, 0), p);
    let overlap = p as f64 * plus.fidelity(&states[best_c as usize]);
    let lmax = diagonal[best_c as usize];
    if (overlap - lmax).abs() > 1e-9 {
        return Err(Error::violation(
            "balance::plus_overlap",
            format!("p={p} c={best_c}"),
            format!("max diagonal {lmax} but p|<+|f>|^2 = {overlap}"),
        ));
    }

    let mut order: Vec<usize> = (0..p as usize).collect();
    order.sort_by(|&i, &j| diagonal[i].total_cmp(&diagonal[j]));
    let eigen = EigenResult {
        eigenvalues: order.iter().map(|&i| diagonal[i]).collect(),
        eigenvectors: ComplexMatrix::from_columns(
            &order.iter().map(|&i| states[i].clone()).collect::<Vec<_>>(),
        ),
    };
    Ok(SDiagonalization {
        p,
        unitary: u,
        diagonal,
        off_diagonal_max: off,
        best_c,
        eigen,
    })
}

/// Largest deviation between the magic-basis spectrum and an independent
/// Jacobi eigensolve of `S`, compared as sorted lists.
pub fn spectrum_mismatch(p: u64) -> Result<f64> {
    let diag = diagonalize_s(p)?;
    let eig = hermitian_eigen(&s_operator(p)?, HERMITIAN_TOL)?;
    Ok(diag
        .eigen
        .eigenvalues
        .iter()
        .zip(&eig.eigenvalues)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitStep {
    pub r: u64,
    pub basis: MubLabel,
    pub vector: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclerOrbit {
    pub p: u64,
    pub c: u64,
    pub steps: Vec<OrbitStep>,
}

impl CyclerOrbit {
    pub fn basis_sequence(&self) -> Vec<u64> {
        self.steps
            .iter()
            .map(|s| match s.basis {
                MubLabel::Finite(b) => b,
                MubLabel::Infinity => u64::MAX,
            })
            .collect()
    }
}

/// `B_r = -r/2`, `V_r = (r/2)(1/2 - r/2)`.
pub fn cycler_closed_form(r: u64, p: u64) -> (u64, u64) {
    let h = half(p);
    let rh = r % p * h % p;
    let b = (p - rh) % p;
    let v = rh * ((h + p - rh) % p) % p;
    (b, v)
}

fn identify_mub(
    state: &ComplexVector,
    kets: &[Vec<ComplexVector>],
    p: u64,
) -> Option<(MubLabel, u64)> {
    for (label, basis) in MubLabel::all(p).into_iter().zip(kets) {
        for (v, ket) in basis.iter().enumerate() {
            if ket.fidelity(state) > 1.0 - IDENTIFY_TOL {
                return Some((label, v as u64));
            }
        }
    }
    None
}

/// Repeatedly applies `C = M X M†` for `M = M_{-1/12,-1/8,c}` to `|ψ_0^0⟩`
/// and names the stabilizer vector reached at each step.
pub fn cycler_orbit(c: i64, p: u64) -> Result<CyclerOrbit> {
    require_above_three(p)?;
    let params = MagicParams::chsh_optimal(c, p)?;
    let cycler = magic_clifford(&params)?;
    let kets = all_mub_kets(p)?;
    let mut state = mub_ket_unchecked(MubVectorRef::finite(0, 0), p);
    let mut steps = Vec::with_capacity(p as usize);
    for r in 0..p {
        let (basis, vector) = identify_mub(&state, &kets, p).ok_or_else(|| {
            Error::violation(
                "balance::cycler",
                format!("p={p} r={r}"),
                "state is not a stabilizer vector",
            )
        })?;
        let (eb, ev) = cycler_closed_form(r, p);
        if basis != MubLabel::Finite(eb) || vector != ev {
            return Err(Error::violation(
                "balance::cycler",
                format!("p={p} r={r}"),
                format!("reached ({basis},{vector}), closed form gives ({eb},{ev})"),
            ));
        }
        steps.push(OrbitStep { r, basis, vector });
        state = cycler.mul_vec(&state);
    }
    Ok(CyclerOrbit {
        p,
        c: params.c().value(),
        steps,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SatoTateSample {
    pub p: u64,
    pub a: u64,
    pub c: u64,
    pub theta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SatoTateReport {
    pub p: u64,
    pub samples: Vec<SatoTateSample>,
    pub min: f64,
    pub max: f64,
    /// Counts over equal-width bins covering `[-1, 1]`.
    pub histogram: Vec<usize>,
    /// `max |Σ_k ω^{ak³+ck}|`, to compare with `2√p`.
    pub max_abs_sum: f64,
    pub weil_limit: f64,
    pub max_imaginary: f64,
    /// Kolmogorov–Smirnov distance to the semicircle law.
    pub ks_statistic: f64,
}

pub const DEFAULT_BINS: usize = 20;
pub const KS_THRESHOLD: f64 = 0.08;
pub const REAL_TOL: f64 = 1e-10;

/// `F(θ) = 1/2 + (θ√(1-θ²) + arcsin θ)/π` for density `(2/π)√(1-θ²)`.
pub fn semicircle_cdf(theta: f64) -> f64 {
    let t = theta.clamp(-1.0, 1.0);
    0.5 + (t * (1.0 - t * t).sqrt() + t.asin()) / PI
}

pub fn ks_statistic(values: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    v.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// `θ_{a,c} = Σ_k ω^{ak³+ck} / (2√p)` over `a ∈ Z_p*` (or the single `a` in
/// `a_filter`) and `c ∈ Z_p`.
pub fn sato_tate(p: u64, a_filter: Option<u64>, bins: usize) -> Result<SatoTateReport> {
    require_above_three(p)?;
    if bins == 0 {
        return Err(Error::InvalidArgument("bins must be positive".into()));
    }
    let a_values: Vec<u64> = match a_filter {
        Some(a) if a % p == 0 => {
            return Err(Error::InvalidMagicParams(format!(
                "a = {a} vanishes mod {p}"
            )))
        }
        Some(a) => vec![a % p],
        None => (1..p).collect(),
    };
    let scale = 2.0 * (p as f64).sqrt();
    let mut samples = Vec::with_capacity(a_values.len() * p as usize);
    let mut max_imaginary: f64 = 0.0;
    let mut max_abs_sum: f64 = 0.0;
    for &a in &a_values {
        for c in 0..p {
            let s = cubic_sum(a, 0, c, p);
            max_imaginary = max_imaginary.max((s.im / scale).abs());
            max_abs_sum = max_abs_sum.max(s.norm());
            let theta = s.re / scale;
            if (s.im / scale).abs() > REAL_TOL
                || !(-1.0 - REAL_TOL..=1.0 + REAL_TOL).contains(&theta)
            {
                return Err(Error::violation(
                    "balance::sato_tate",
                    format!("p={p} a={a} c={c}"),
                    format!("theta = {} + {}i", theta, s.im / scale),
                ));
            }
            samples.push(SatoTateSample { p, a, c, theta });
        }
    }
    let thetas: Vec<f64> = samples.iter().map(|s| s.theta).collect();
    let mut histogram = vec![0usize; bins];
    for &t in &thetas {
        let i = (((t + 1.0) / 2.0 * bins as f64).floor() as usize).min(bins - 1);
        histogram[i] += 1;
    }
    Ok(SatoTateReport {
        p,
        min: thetas.iter().copied().fold(f64::INFINITY, f64::min),
        max: thetas.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        histogram,
        max_abs_sum,
        weil_limit: scale,
        max_imaginary,
        ks_statistic: ks_statistic(&thetas, semicircle_cdf),
        samples,
    })
}
