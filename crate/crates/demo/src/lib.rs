//! Browser bindings: the qutrit min-entropy landscape, magic-state Wigner
//! grids and one row of the CHSH game table. Every export returns a flat
//! `Vec<f64>` so the page can read it as a `Float64Array`.

use qmagic_core::bell::quantum_value;
use qmagic_core::entropy::fig2_grid;
use qmagic_core::lhv::lhv_best;
use qmagic_core::magic::{magic_state, MagicParams};
use qmagic_core::wigner::wigner_function;
use wasm_bindgen::prelude::*;

const LHV_RESTARTS: usize = 50;

fn js_err(e: qmagic_core::Error) -> JsError {
    JsError::new(&format!("{}: {e}", e.code()))
}

/// Total qutrit min-entropy over a `resolution × resolution` grid, row-major
/// with x outer.
#[wasm_bindgen]
pub fn min_entropy_landscape(resolution: usize) -> Result<Vec<f64>, JsError> {
    let grid = fig2_grid(resolution).map_err(js_err)?;
    Ok(grid.into_iter().map(|g| g.total_min_entropy).collect())
}

/// Wigner function of the magic state f(a,b,c), indexed `x * p + z`,
/// followed by its minimum and mana.
#[wasm_bindgen]
pub fn wigner_grid(p: u32, a: i32, b: i32, c: i32) -> Result<Vec<f64>, JsError> {
    let params = MagicParams::new(a as i64, b as i64, c as i64, p as u64).map_err(js_err)?;
    let w = wigner_function(&magic_state(&params)).map_err(js_err)?;
    let mut out: Vec<f64> = w.points().map(|(_, _, v)| v).collect();
    out.push(w.min());
    out.push(w.mana());
    Ok(out)
}

/// `[p, ic_bound, weil_bound (NaN if none), lambda_max, lhv, lhv_exact]`.
#[wasm_bindgen]
pub fn chsh_row(p: u32) -> Result<Vec<f64>, JsError> {
    let q = quantum_value(p as u64).map_err(js_err)?;
    let l = lhv_best(p as u64, LHV_RESTARTS, 0).map_err(js_err)?;
    Ok(vec![
        p as f64,
        q.ic_bound,
        q.weil_bound.unwrap_or(f64::NAN),
        q.lambda_max_b,
        l.value as f64,
        if l.exact { 1.0 } else { 0.0 },
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn landscape_has_full_grid() {
        let v = min_entropy_landscape(18).unwrap();
        assert_eq!(v.len(), 324);
        assert!(v.iter().all(|h| h.is_finite() && *h > 0.0));
    }

    #[test]
    fn wigner_grid_sums_to_one() {
        let v = wigner_grid(5, 1, 0, 0).unwrap();
        assert_eq!(v.len(), 27);
        let total: f64 = v[..25].iter().sum();
        assert!((total - 1.0).abs() < 1e-10);
        assert!(v[25] < 0.0);
    }

    #[test]
    fn chsh_row_p5() {
        let r = chsh_row(5).unwrap();
        assert_eq!(r[4], 12.0);
        assert_eq!(r[5], 1.0);
        assert!((r[3] - 13.0902).abs() < 1e-3);
    }
}
