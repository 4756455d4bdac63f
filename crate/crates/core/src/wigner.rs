//! Discrete Wigner function for odd prime dimension, built from the parity
//! operator and its displaced copies.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::entropy::NORM_TOL;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, ComplexVector, ONE};
use crate::weyl::{displacement_unchecked, ensure_odd_prime};

type OperatorSet = Arc<Vec<ComplexMatrix>>;

fn cache() -> &'static Mutex<HashMap<u64, OperatorSet>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, OperatorSet>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `A_u = D_u A_0 D_u†` with `A_0 = p^{-1} Σ_u D_u`, indexed by `x·p + z`.
/// Built once per `p` and shared afterwards.
pub fn phase_point_operators(p: u64) -> Result<OperatorSet> {
    ensure_odd_prime(p)?;
    if let Some(ops) = cache().lock().expect("cache lock").get(&p) {
        return Ok(Arc::clone(ops));
    }
    let ops = Arc::new(build_operators(p));
    cache()
        .lock()
        .expect("cache lock")
        .entry(p)
        .or_insert_with(|| Arc::clone(&ops));
    Ok(ops)
}

fn build_operators(p: u64) -> Vec<ComplexMatrix> {
    let n = p as usize;
    let mut a0 = ComplexMatrix::zeros(n, n);
    for x in 0..p {
        for z in 0..p {
            a0.add_assign_scaled(&displacement_unchecked(x, z, p), ONE);
        }
    }
    let a0 = a0.scale_real(1.0 / p as f64);
    let mut ops = Vec::with_capacity(n * n);
    for x in 0..p {
        for z in 0..p {
            ops.push(a0.conjugate_by(&displacement_unchecked(x, z, p)));
        }
    }
    ops
}

/// `W(x, z) = Tr(ρ A_(x|z)) / p`, stored row-major in `x`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WignerFunction {
    pub p: u64,
    pub values: Vec<f64>,
}

impl WignerFunction {
    pub fn get(&self, x: u64, z: u64) -> f64 {
        self.values[(x * self.p + z) as usize]
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn abs_sum(&self) -> f64 {
        self.values.iter().map(|w| w.abs()).sum()
    }

    /// Magnitude of the total negative quasi-probability.
    pub fn negativity(&self) -> f64 {
        self.values.iter().filter(|w| **w < 0.0).map(|w| -w).sum()
    }

    /// `ln Σ_u |W(u)|`.
    pub fn mana(&self) -> f64 {
        self.abs_sum().ln()
    }

    /// `Σ_z W(x, z)` for each `x`: the computational-basis distribution.
    pub fn marginal_x(&self) -> Vec<f64> {
        let n = self.p as usize;
        self.values.chunks(n).map(|row| row.iter().sum()).collect()
    }

    /// `(x, z, W)` triples in row-major order.
    pub fn points(&self) -> impl Iterator<Item = (u64, u64, f64)> + '_ {
        let p = self.p;
        self.values
            .iter()
            .enumerate()
            .map(move |(i, w)| (i as u64 / p, i as u64 % p, *w))
    }
}

pub fn wigner_function(state: &ComplexVector) -> Result<WignerFunction> {
    let p = state.dim() as u64;
    ensure_odd_prime(p)?;
    let norm = state.norm_sqr();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized(norm));
    }
    let ops = phase_point_operators(p)?;
    let values = ops
        .iter()
        .map(|a| state.inner(&a.mul_vec(state)).re / p as f64)
        .collect();
    Ok(WignerFunction { p, values })
}

pub fn wigner_of_density(rho: &ComplexMatrix) -> Result<WignerFunction> {
    let p = rho.rows() as u64;
    ensure_odd_prime(p)?;
    if !rho.is_square() {
        return Err(Error::DimensionMismatch {
            expected: rho.rows(),
            got: rho.cols(),
        });
    }
    let ops = phase_point_operators(p)?;
    let values = ops
        .iter()
        .map(|a| rho.matmul(a).trace().re / p as f64)
        .collect();
    Ok(WignerFunction { p, values })
}

pub fn w_min(state: &ComplexVector) -> Result<f64> {
    Ok(wigner_function(state)?.min())
}

pub fn mana(state: &ComplexVector) -> Result<f64> {
    Ok(wigner_function(state)?.mana())
}
