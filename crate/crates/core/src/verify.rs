//! A self-check suite over the structural identities of every module, run
//! per prime and stopping at the first violation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::balance::{
    balanced_permutation, cycler_orbit, diagonalize_s, spectrum_mismatch, verify_multiset_balance,
};
use crate::bell::{quantum_value, verify_reduction_with_limit, FULL_OPERATOR_LIMIT};
use crate::entropy::{min_entropy_bound, min_total, mub_table};
use crate::error::{Error, Result};
use crate::field::{inv_mod, is_prime};
use crate::lhv::{lhv_exact, lhv_value, LhvStrategy, EXACT_LIMIT};
use crate::linalg::{ComplexVector, C64};
use crate::magic::{
    displacement_from_params, magic_clifford, magic_state, params_from_displacement, MagicParams,
};
use crate::weyl::{displacement_xz, mub_projector, mub_projector_spectral, MubLabel, MubVectorRef};
use crate::wigner::wigner_function;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub check: String,
    pub p: u64,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub passed: Vec<CheckOutcome>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerifyOptions {
    pub tol: f64,
    pub seed: u64,
    /// Random pure states per prime in the purity check.
    pub samples: usize,
    /// Largest p for which the full p² × p² reduction identity is checked.
    pub reduction_limit: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            seed: 0,
            samples: 20,
            reduction_limit: 7,
        }
    }
}

struct Suite<'a> {
    p: u64,
    opts: &'a VerifyOptions,
    report: VerifyReport,
}

impl Suite<'_> {
    fn check(&mut self, name: &'static str, ok: bool, detail: String) -> Result<()> {
        if !ok {
            return Err(Error::violation(name, format!("p={}", self.p), detail));
        }
        self.report.passed.push(CheckOutcome {
            check: name.into(),
            p: self.p,
            detail,
        });
        Ok(())
    }

    fn within(&mut self, name: &'static str, residual: f64) -> Result<()> {
        let ok = residual <= self.opts.tol;
        self.check(name, ok, format!("residual {residual:.3e}"))
    }
}

/// Runs every check for each `p`; the first failure is returned as a
/// [`Error::TheoremViolation`] naming the check and prime.
pub fn run_suite(ps: &[u64], opts: &VerifyOptions) -> Result<VerifyReport> {
    let mut report = VerifyReport::default();
    for &p in ps {
        if !is_prime(p) || p == 2 {
            return Err(Error::InvalidArgument(format!(
                "verify needs odd primes, got {p}"
            )));
        }
        let mut suite = Suite { p, opts, report };
        run_prime(&mut suite)?;
        report = suite.report;
    }
    Ok(report)
}

fn run_prime(s: &mut Suite<'_>) -> Result<()> {
    let p = s.p;
    let tol = s.opts.tol;

    let inverses = (1..p).all(|x| inv_mod(x, p).is_some_and(|y| x * y % p == 1));
    s.check("field::inverse", inverses, format!("{} units", p - 1))?;

    let mut worst: f64 = 0.0;
    for x in 0..p as i64 {
        for z in 0..p as i64 {
            let d = displacement_xz(x, z, p)?;
            let n = d.adjoint().matmul(&d);
            worst = worst.max(n.max_abs_diff(&crate::linalg::ComplexMatrix::identity(p as usize)));
        }
    }
    s.within("weyl::displacement_unitary", worst)?;

    let mut worst: f64 = 0.0;
    for basis in MubLabel::all(p) {
        for v in 0..p {
            let r = MubVectorRef::new(basis, v);
            worst = worst.max(mub_projector(r, p)?.max_abs_diff(&mub_projector_spectral(r, p)?));
        }
    }
    s.within("weyl::projector_routes", worst)?;

    if p > 3 {
        let mut worst: f64 = 0.0;
        for a in 1..p as i64 {
            let params = MagicParams::new(a, 1, 2, p)?;
            let (x, z) = displacement_from_params(&params)?;
            let (b, c) = params_from_displacement(params.a(), x, z)?;
            let ok = b == params.b() && c == params.c();
            s.check("magic::displacement_roundtrip", ok, format!("a={a}"))?;
            let f = magic_state(&params);
            let cl = magic_clifford(&params)?;
            worst = worst.max(cl.mul_vec(&f).max_abs_diff(&f));
        }
        s.within("magic::clifford_eigenstate", worst)?;
    }

    if p <= s.opts.reduction_limit.min(FULL_OPERATOR_LIMIT) {
        let r = verify_reduction_with_limit(p, FULL_OPERATOR_LIMIT)?;
        s.check(
            "bell::reduction",
            r.holds,
            format!("residual {:.3e}", r.residual),
        )?;
    }
    let q = quantum_value(p)?;
    let bounded = q.lambda_max_b <= q.ic_bound + tol
        && q.weil_bound.is_none_or(|w| q.lambda_max_b <= w + tol);
    s.check(
        "bell::bounds",
        bounded,
        format!("lambda_max {:.6}", q.lambda_max_b),
    )?;

    if p > 3 {
        let d = diagonalize_s(p)?;
        s.within("balance::diagonalize_s", d.off_diagonal_max)?;
        s.within("balance::spectrum", spectrum_mismatch(p)?)?;
        let mut worst: f64 = 0.0;
        for a in 1..p as i64 {
            for b in 0..p as i64 {
                worst = worst.max(balanced_permutation(a, b, p, (a + 2 * b) % p as i64)?.residual);
            }
        }
        s.within("balance::permutation", worst)?;
        let orbit = cycler_orbit(0, p)?;
        s.check(
            "balance::cycler",
            orbit.steps.len() == p as usize,
            format!("{} steps", orbit.steps.len()),
        )?;
    } else {
        let f = magic_state(&MagicParams::new(1, 1, 0, p)?);
        s.within("balance::multiset", verify_multiset_balance(&f, tol)?)?;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(s.opts.seed ^ p);
    let mut purity: f64 = 0.0;
    let mut below_bound = false;
    for _ in 0..s.opts.samples {
        let psi = random_state(p, &mut rng);
        let t = mub_table(&psi, p)?;
        purity = purity.max((t.sum_of_squares() - 2.0).abs());
        below_bound |= min_total(&psi, &MubLabel::finite(p))? < min_entropy_bound(p) - tol;
    }
    s.within("entropy::purity", purity)?;
    s.check(
        "entropy::min_bound",
        !below_bound,
        format!("{} samples", s.opts.samples),
    )?;

    let mut worst: f64 = 0.0;
    for a in 1..p as i64 {
        let w = wigner_function(&magic_state(&MagicParams::new(a, 0, 0, p)?))?;
        worst = worst.max((w.total() - 1.0).abs());
    }
    s.within("wigner::normalization", worst)?;

    if p <= EXACT_LIMIT {
        let best = lhv_exact(p)?;
        let rescored = lhv_value(&best.strategy, p) == best.value;
        s.check("lhv::rescore", rescored, format!("value {}", best.value))?;
        let mut shift_ok = true;
        for _ in 0..20 {
            let strat = LhvStrategy {
                alice: (0..p).map(|_| rng.gen_range(0..p)).collect(),
                bob: (0..p).map(|_| rng.gen_range(0..p)).collect(),
            };
            let t = rng.gen_range(0..p);
            shift_ok &= lhv_value(&strat, p) == lhv_value(&strat.shifted(t, p), p);
        }
        s.check(
            "lhv::shift_symmetry",
            shift_ok,
            "20 random strategies".into(),
        )?;
    }
    Ok(())
}

fn random_state(p: u64, rng: &mut ChaCha8Rng) -> ComplexVector {
    ComplexVector::new(
        (0..p)
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect(),
    )
    .normalized()
}
