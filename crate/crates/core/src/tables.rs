//! Row builders for the game-value table and the p = 7 magic-state table.

use serde::{Deserialize, Serialize};

use crate::bell::{ic_bound, quantum_value, weil_bound};
use crate::entropy::{min_entropy_bound, min_total};
use crate::error::{Error, Result};
use crate::lhv::lhv_best;
use crate::magic::{magic_state, MagicParams};
use crate::weyl::{ensure_odd_prime, MubLabel};
use crate::wigner::wigner_function;

pub const TABLE1_MAX_P: u64 = 29;
pub const TABLE2_MAX_P: u64 = 11;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table1Row {
    pub p: u64,
    pub ic_bound: f64,
    pub weil_bound: Option<f64>,
    pub lambda_max: f64,
    pub lhv: u32,
    /// False when `lhv` is only a search lower bound.
    pub lhv_exact: bool,
}

pub fn table1_row(p: u64, restarts: usize, seed: u64) -> Result<Table1Row> {
    ensure_odd_prime(p)?;
    if p > TABLE1_MAX_P {
        return Err(Error::BudgetExceeded {
            p,
            max: TABLE1_MAX_P,
        });
    }
    let q = quantum_value(p)?;
    let lhv = lhv_best(p, restarts, seed)?;
    Ok(Table1Row {
        p,
        ic_bound: ic_bound(p),
        weil_bound: weil_bound(p),
        lambda_max: q.lambda_max_b,
        lhv: lhv.value,
        lhv_exact: lhv.exact,
    })
}

pub fn table1(ps: &[u64], restarts: usize, seed: u64) -> Result<Vec<Table1Row>> {
    ps.iter().map(|&p| table1_row(p, restarts, seed)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table2Row {
    pub a: u64,
    pub w_min: f64,
    pub mana: f64,
    pub min_entropy_total: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table2 {
    pub p: u64,
    pub rows: Vec<Table2Row>,
    /// Lower bound on the total min-entropy for any state.
    pub min_entropy_bound: f64,
}

/// One row per `a ∈ Z_p*` for `|f_{a,0,0}⟩`.
pub fn table2(p: u64) -> Result<Table2> {
    ensure_odd_prime(p)?;
    if p > TABLE2_MAX_P {
        return Err(Error::BudgetExceeded {
            p,
            max: TABLE2_MAX_P,
        });
    }
    let bases = MubLabel::finite(p);
    let rows = (1..p)
        .map(|a| {
            let f = magic_state(&MagicParams::new(a as i64, 0, 0, p)?);
            let w = wigner_function(&f)?;
            Ok(Table2Row {
                a,
                w_min: w.min(),
                mana: w.mana(),
                min_entropy_total: min_total(&f, &bases)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Table2 {
        p,
        rows,
        min_entropy_bound: min_entropy_bound(p),
    })
}
