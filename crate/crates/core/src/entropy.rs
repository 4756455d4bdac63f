//! Probability tables over all `p + 1` mutually unbiased bases, collision and
//! min-entropies (in bits), and minimization of the total min-entropy over
//! equatorial states.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::cubic_residue_classes;
use crate::linalg::{ComplexMatrix, ComplexVector, C64, ONE};
use crate::magic::{identify_magic_state, magic_state, MagicParams};
use crate::optimize::{nelder_mead, NelderMeadOptions};
use crate::weyl::{all_mub_kets, ensure_odd_prime, half, omega_table, MubLabel};

pub const NORM_TOL: f64 = 1e-10;

/// `c_{V,B}` for `V ∈ Z_p` and `B ∈ {∞} ∪ Z_p`, stored by column with ∞ first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MubTable {
    pub p: u64,
    pub columns: Vec<Vec<f64>>,
}

impl MubTable {
    pub fn column(&self, basis: MubLabel) -> &[f64] {
        &self.columns[basis.column()]
    }

    pub fn get(&self, basis: MubLabel, v: u64) -> f64 {
        self.columns[basis.column()][v as usize]
    }

    /// `Σ_{B,V} c_{V,B}²`; equals 2 for every pure state.
    pub fn sum_of_squares(&self) -> f64 {
        self.columns.iter().flatten().map(|c| c * c).sum()
    }

    /// Largest deviation of a column sum from 1.
    pub fn column_sum_error(&self) -> f64 {
        self.columns
            .iter()
            .map(|col| (col.iter().sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn collision_entropy(&self, basis: MubLabel) -> f64 {
        -self.column(basis).iter().map(|c| c * c).sum::<f64>().log2()
    }

    pub fn min_entropy(&self, basis: MubLabel) -> f64 {
        -self
            .column(basis)
            .iter()
            .copied()
            .fold(0.0, f64::max)
            .log2()
    }
}

pub fn mub_table(state: &ComplexVector, p: u64) -> Result<MubTable> {
    ensure_odd_prime(p)?;
    check_state(state, p)?;
    let kets = all_mub_kets(p)?;
    let columns = kets
        .iter()
        .map(|basis| basis.iter().map(|k| k.fidelity(state)).collect())
        .collect();
    Ok(MubTable { p, columns })
}

/// `c_{V,B} = ⟨ψ_B^V|K|ψ_B^V⟩` for a Hermitian operator `K`.
pub fn mub_table_of_operator(k: &ComplexMatrix, p: u64) -> Result<MubTable> {
    ensure_odd_prime(p)?;
    if k.rows() != p as usize || k.cols() != p as usize {
        return Err(Error::DimensionMismatch {
            expected: p as usize,
            got: k.rows(),
        });
    }
    let kets = all_mub_kets(p)?;
    let columns = kets
        .iter()
        .map(|basis| basis.iter().map(|v| v.inner(&k.mul_vec(v)).re).collect())
        .collect();
    Ok(MubTable { p, columns })
}

/// `K = Σ_{B,V} c_{V,B} |ψ_B^V⟩⟨ψ_B^V| - Tr(K)·I`.
pub fn reconstruct(table: &MubTable, trace_k: f64) -> Result<ComplexMatrix> {
    let p = table.p;
    let n = p as usize;
    let kets = all_mub_kets(p)?;
    let mut k = ComplexMatrix::identity(n).scale_real(-trace_k);
    for (basis, col) in kets.iter().zip(&table.columns) {
        for (ket, c) in basis.iter().zip(col) {
            k.add_assign_scaled(&ket.projector(), C64::new(*c, 0.0));
        }
    }
    Ok(k)
}

fn check_state(state: &ComplexVector, p: u64) -> Result<()> {
    if state.dim() != p as usize {
        return Err(Error::DimensionMismatch {
            expected: p as usize,
            got: state.dim(),
        });
    }
    let norm = state.norm_sqr();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized(norm));
    }
    Ok(())
}

pub fn collision_total(state: &ComplexVector, bases: &[MubLabel]) -> Result<f64> {
    let t = mub_table(state, state.dim() as u64)?;
    Ok(bases.iter().map(|&b| t.collision_entropy(b)).sum())
}

pub fn min_total(state: &ComplexVector, bases: &[MubLabel]) -> Result<f64> {
    let t = mub_table(state, state.dim() as u64)?;
    Ok(bases.iter().map(|&b| t.min_entropy(b)).sum())
}

/// `-(p+1) log₂(2/(p+1))`: total collision entropy over all bases.
pub fn collision_bound_all(p: u64) -> f64 {
    let q = (p + 1) as f64;
    -q * (2.0 / q).log2()
}

/// `-p log₂((2 - 1/p)/p)`: total collision entropy over the finite bases for
/// equatorial states.
pub fn equatorial_collision_bound(p: u64) -> f64 {
    let pf = p as f64;
    -pf * ((2.0 - 1.0 / pf) / pf).log2()
}

/// `-p log₂((1 + (p-1)/√p)/p)`: total min-entropy over the finite bases.
pub fn min_entropy_bound(p: u64) -> f64 {
    let pf = p as f64;
    -pf * ((1.0 + (pf - 1.0) / pf.sqrt()) / pf).log2()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisEntropy {
    pub basis: MubLabel,
    pub collision: f64,
    pub min: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyReport {
    pub p: u64,
    pub per_basis: Vec<BasisEntropy>,
    /// Totals over the finite bases `Z_p`.
    pub collision_total: f64,
    pub min_total: f64,
    pub collision_bound_all: f64,
    pub equatorial_collision_bound: f64,
    pub min_entropy_bound: f64,
    pub log_base: u32,
}

pub fn entropy_report(state: &ComplexVector) -> Result<EntropyReport> {
    let p = state.dim() as u64;
    let t = mub_table(state, p)?;
    let per_basis: Vec<BasisEntropy> = MubLabel::all(p)
        .into_iter()
        .map(|basis| BasisEntropy {
            basis,
            collision: t.collision_entropy(basis),
            min: t.min_entropy(basis),
        })
        .collect();
    let finite = &per_basis[1..];
    Ok(EntropyReport {
        p,
        collision_total: finite.iter().map(|e| e.collision).sum(),
        min_total: finite.iter().map(|e| e.min).sum(),
        per_basis,
        collision_bound_all: collision_bound_all(p),
        equatorial_collision_bound: equatorial_collision_bound(p),
        min_entropy_bound: min_entropy_bound(p),
        log_base: 2,
    })
}

/// Phases `φ_1 … φ_{p-1}` of `p^{-1/2} Σ_k e^{iφ_k} |k⟩` (`φ_0 = 0`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquatorialPhases {
    phases: Vec<f64>,
}

impl EquatorialPhases {
    pub fn new(phases: Vec<f64>) -> Result<Self> {
        if phases.is_empty() {
            return Err(Error::InvalidArgument("need at least one phase".into()));
        }
        if let Some(bad) = phases.iter().find(|t| !t.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite phase {bad}")));
        }
        Ok(Self { phases })
    }

    pub fn zeros(p: u64) -> Self {
        Self {
            phases: vec![0.0; p as usize - 1],
        }
    }

    /// Phases of a magic state.
    pub fn magic(params: &MagicParams) -> Self {
        Self {
            phases: params.phases()[1..].to_vec(),
        }
    }

    pub fn p(&self) -> u64 {
        self.phases.len() as u64 + 1
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.phases
    }

    /// Every phase wrapped into `[0, 2π)`.
    pub fn canonical(&self) -> Self {
        Self {
            phases: self.phases.iter().map(|t| wrap(*t)).collect(),
        }
    }
}

fn wrap(t: f64) -> f64 {
    let w = t.rem_euclid(2.0 * PI);
    if w >= 2.0 * PI {
        0.0
    } else {
        w
    }
}

pub fn equatorial_state(phi: &EquatorialPhases) -> ComplexVector {
    let amp = 1.0 / (phi.p() as f64).sqrt();
    ComplexVector::new(
        std::iter::once(C64::new(amp, 0.0))
            .chain(phi.as_slice().iter().map(|t| C64::from_polar(amp, *t)))
            .collect(),
    )
}

/// Total min-entropy over the finite bases as a function of equatorial
/// phases, evaluated without building the full table.
#[derive(Clone, Debug)]
pub struct EquatorialObjective {
    p: usize,
    omega: Vec<C64>,
    /// `-2^{-1} B k² mod p`, indexed `[B][k]`.
    chirp: Vec<Vec<usize>>,
}

impl EquatorialObjective {
    pub fn new(p: u64) -> Result<Self> {
        ensure_odd_prime(p)?;
        let h = half(p);
        let chirp = (0..p)
            .map(|b| {
                (0..p)
                    .map(|k| ((p - h * b % p * k % p * k % p) % p) as usize)
                    .collect()
            })
            .collect();
        Ok(Self {
            p: p as usize,
            omega: omega_table(p),
            chirp,
        })
    }

    pub fn dim(&self) -> usize {
        self.p - 1
    }

    pub fn eval(&self, phases: &[f64]) -> f64 {
        let p = self.p;
        let mut psi = Vec::with_capacity(p);
        psi.push(ONE);
        psi.extend(phases.iter().map(|t| C64::from_polar(1.0, *t)));
        let norm = 1.0 / (p * p) as f64;
        let mut total = 0.0;
        let mut u = vec![ONE; p];
        for chirp in &self.chirp {
            for k in 0..p {
                u[k] = self.omega[chirp[k]] * psi[k];
            }
            let mut best: f64 = 0.0;
            for v in 0..p {
                let mut acc = C64::new(0.0, 0.0);
                let mut idx = 0;
                for uk in &u {
                    acc += self.omega[idx] * uk;
                    idx += v;
                    if idx >= p {
                        idx -= p;
                    }
                }
                best = best.max(acc.norm_sqr());
            }
            total -= (best * norm).log2();
        }
        total
    }
}

pub const MAX_MINIMIZE_P: u64 = 13;

pub fn default_restarts(p: u64) -> usize {
    if p >= 11 {
        200
    } else {
        50
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinEntropyResult {
    pub p: u64,
    pub phases: EquatorialPhases,
    pub value: f64,
    /// Parameters of the magic state at the optimum, if it is one.
    pub magic: Option<MagicParams>,
    /// Best value among the magic-state starting points.
    pub best_magic_value: f64,
    pub restarts_used: usize,
}

/// Multistart Nelder–Mead over the equatorial manifold. Magic phases for
/// every `a` are always among the starts, followed by `restarts` uniformly
/// random starts.
pub fn minimize_min_entropy(p: u64, restarts: usize, seed: u64) -> Result<MinEntropyResult> {
    ensure_odd_prime(p)?;
    if p > MAX_MINIMIZE_P {
        return Err(Error::BudgetExceeded {
            p,
            max: MAX_MINIMIZE_P,
        });
    }
    if restarts == 0 {
        return Err(Error::InvalidArgument("restarts must be at least 1".into()));
    }
    let objective = EquatorialObjective::new(p)?;
    let dim = objective.dim();
    let opts = NelderMeadOptions::default();

    let magic_starts: Vec<Vec<f64>> = (1..p as i64)
        .map(|a| {
            let params = MagicParams::new(a, 0, 0, p).expect("valid magic params");
            EquatorialPhases::magic(&params).phases
        })
        .collect();
    let best_magic_value = magic_starts
        .iter()
        .map(|x| objective.eval(x))
        .fold(f64::INFINITY, f64::min);

    let start = |i: usize| -> Vec<f64> {
        if i < magic_starts.len() {
            magic_starts[i].clone()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream((i - magic_starts.len()) as u64);
            (0..dim).map(|_| rng.gen_range(0.0..2.0 * PI)).collect()
        }
    };
    let run = |i: usize| {
        let m = nelder_mead(|x| objective.eval(x), &start(i), &opts);
        (i, m.x, m.value)
    };
    let total = magic_starts.len() + restarts;
    #[cfg(feature = "parallel")]
    let runs: Vec<_> = {
        use rayon::prelude::*;
        (0..total).into_par_iter().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let runs: Vec<_> = (0..total).map(run).collect();

    let (_, x, value) = runs
        .into_iter()
        .reduce(|best, cand| if cand.2 < best.2 { cand } else { best })
        .expect("at least one start");
    let phases = EquatorialPhases { phases: x }.canonical();
    let magic = identify_magic_state(&equatorial_state(&phases), 1e-8);
    Ok(MinEntropyResult {
        p,
        phases,
        value,
        magic,
        best_magic_value,
        restarts_used: restarts,
    })
}

/// Total min-entropy over the finite bases of `|f_{a,0,0}⟩` for each `a`.
pub fn magic_min_entropy_by_a(p: u64) -> Result<Vec<(u64, f64)>> {
    ensure_odd_prime(p)?;
    let bases = MubLabel::finite(p);
    (1..p)
        .map(|a| {
            let f = magic_state(&MagicParams::new(a as i64, 0, 0, p)?);
            Ok((a, min_total(&f, &bases)?))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassValue {
    /// Members of the cubic-residue class of `a`.
    pub class: Vec<u64>,
    pub value: f64,
}

/// Magic-state total min-entropy per cubic-residue class of `a` (`p > 3`).
pub fn magic_min_entropy_by_class(p: u64) -> Result<Vec<ClassValue>> {
    let classes = cubic_residue_classes(p)?;
    let bases = MubLabel::finite(p);
    classes
        .into_iter()
        .map(|class| {
            let f = magic_state(&MagicParams::new(class[0] as i64, 0, 0, p)?);
            Ok(ClassValue {
                value: min_total(&f, &bases)?,
                class,
            })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fig2Point {
    pub x: f64,
    pub y: f64,
    pub total_min_entropy: f64,
}

pub const FIG2_MIN_RESOLUTION: usize = 16;

/// Total min-entropy over the three finite qutrit bases of
/// `(1, ξ^x, ξ^y)/√3`, `ξ = e^{2πi/9}`, on a `resolution × resolution` grid
/// covering `x, y ∈ [0, 9)`. Rows are ordered by `x`, then `y`.
pub fn fig2_grid(resolution: usize) -> Result<Vec<Fig2Point>> {
    if resolution < FIG2_MIN_RESOLUTION {
        return Err(Error::InvalidArgument(format!(
            "resolution must be at least {FIG2_MIN_RESOLUTION}, got {resolution}"
        )));
    }
    let objective = EquatorialObjective::new(3)?;
    let step = 9.0 / resolution as f64;
    let point = |i: usize| {
        let x = (i / resolution) as f64 * step;
        let y = (i % resolution) as f64 * step;
        Fig2Point {
            x,
            y,
            total_min_entropy: fig2_value_with(&objective, x, y),
        }
    };
    let n = resolution * resolution;
    #[cfg(feature = "parallel")]
    let grid = {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(point).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let grid = (0..n).map(point).collect();
    Ok(grid)
}

pub fn fig2_value(x: f64, y: f64) -> f64 {
    let objective = EquatorialObjective::new(3).expect("3 is an odd prime");
    fig2_value_with(&objective, x, y)
}

fn fig2_value_with(objective: &EquatorialObjective, x: f64, y: f64) -> f64 {
    let s = 2.0 * PI / 9.0;
    objective.eval(&[s * x, s * y])
}
