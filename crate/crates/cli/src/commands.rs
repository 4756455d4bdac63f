use std::fs;

use qmagic_core::balance::{cycler_orbit, sato_tate as sato_tate_report};
use qmagic_core::entropy::{default_restarts, fig2_grid, minimize_min_entropy};
use qmagic_core::field::is_prime;
use qmagic_core::magic::{magic_state, MagicParams};
use qmagic_core::tables::{table1 as table1_rows, table2 as table2_rows};
use qmagic_core::verify::{run_suite, VerifyOptions};
use qmagic_core::wigner::wigner_function;
use serde_json::{json, Value};

use crate::output::{col, Artifact, Format};
use crate::{CliError, RunConfig};

type CmdResult = Result<String, CliError>;

const TABLE1_PRIMES: [u64; 9] = [3, 5, 7, 11, 13, 17, 19, 23, 29];
const LHV_RESTARTS: usize = 200;

fn primes(cfg: &RunConfig, default: &[u64]) -> Result<Vec<u64>, CliError> {
    let ps = if cfg.p.is_empty() {
        default.to_vec()
    } else {
        cfg.p.clone()
    };
    if let Some(bad) = ps.iter().find(|&&p| !is_prime(p) || p == 2) {
        return Err(CliError::Usage(format!("--p {bad} is not an odd prime")));
    }
    Ok(ps)
}

fn single_prime(cfg: &RunConfig, default: u64) -> Result<u64, CliError> {
    let ps = primes(cfg, &[default])?;
    match ps.as_slice() {
        [p] => Ok(*p),
        _ => Err(CliError::Usage("this command takes a single --p".into())),
    }
}

fn restarts(cfg: &RunConfig, default: usize) -> Result<usize, CliError> {
    match cfg.restarts {
        Some(0) => Err(CliError::Usage("--restarts must be at least 1".into())),
        Some(r) => Ok(r),
        None => Ok(default),
    }
}

fn format(cfg: &RunConfig, default: Format) -> Format {
    cfg.format.unwrap_or(default)
}

pub fn emit(cfg: &RunConfig, text: &str) -> Result<(), CliError> {
    match &cfg.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn table1(cfg: &RunConfig) -> CmdResult {
    let ps = primes(cfg, &TABLE1_PRIMES)?;
    let restarts = restarts(cfg, LHV_RESTARTS)?;
    let rows = table1_rows(&ps, restarts, cfg.seed)?;
    let mut a = Artifact::new(
        "table1",
        cfg.seed,
        vec![
            col("p", None),
            col("ic_bound", Some(1e-3)),
            col("weil_bound", Some(1e-3)),
            col("lambda_max", Some(1e-3)),
            col("lhv", None),
            col("lhv_exact", None),
        ],
    );
    a.meta("restarts", restarts);
    for r in rows {
        a.row(vec![
            json!(r.p),
            json!(r.ic_bound),
            r.weil_bound.map_or(Value::Null, |w| json!(w)),
            json!(r.lambda_max),
            json!(r.lhv),
            json!(r.lhv_exact),
        ]);
    }
    a.notes
        .push("lhv_exact=false marks a search lower bound".into());
    Ok(a.render(format(cfg, Format::Csv)))
}

pub fn table2(cfg: &RunConfig) -> CmdResult {
    let p = single_prime(cfg, 7)?;
    let t = table2_rows(p)?;
    let mut a = Artifact::new(
        "table2",
        cfg.seed,
        vec![
            col("a", None),
            col("w_min", Some(1e-4)),
            col("mana", Some(1e-4)),
            col("min_entropy_total", Some(1e-4)),
        ],
    );
    a.meta("p", p);
    a.meta("mana_log", "natural");
    for r in &t.rows {
        a.row(vec![
            json!(r.a),
            json!(r.w_min),
            json!(r.mana),
            json!(r.min_entropy_total),
        ]);
    }
    a.notes
        .push(format!("min_entropy_bound: {}", t.min_entropy_bound));
    Ok(a.render(format(cfg, Format::Csv)))
}

pub fn fig2(cfg: &RunConfig) -> CmdResult {
    let resolution = cfg.resolution.unwrap_or(90);
    let grid = fig2_grid(resolution)?;
    let mut a = Artifact::new(
        "fig2",
        cfg.seed,
        vec![
            col("x", None),
            col("y", None),
            col("total_min_entropy", Some(1e-4)),
        ],
    );
    a.meta("resolution", resolution);
    let min = grid
        .iter()
        .map(|g| g.total_min_entropy)
        .fold(f64::INFINITY, f64::min);
    for g in grid {
        a.row(vec![json!(g.x), json!(g.y), json!(g.total_min_entropy)]);
    }
    a.notes.push(format!("grid_min: {min}"));
    Ok(a.render(format(cfg, Format::Csv)))
}

pub fn sato_tate(cfg: &RunConfig, a_filter: Option<u64>, bins: usize) -> CmdResult {
    let p = single_prime(cfg, 101)?;
    let r = sato_tate_report(p, a_filter, bins)?;
    let mut a = Artifact::new(
        "sato-tate",
        cfg.seed,
        vec![col("a", None), col("c", None), col("theta", Some(1e-10))],
    );
    a.meta("p", p);
    a.meta("bins", bins);
    for s in &r.samples {
        a.row(vec![json!(s.a), json!(s.c), json!(s.theta)]);
    }
    a.notes.push(format!("min: {}", r.min));
    a.notes.push(format!("max: {}", r.max));
    a.notes.push(format!(
        "max_abs_sum: {} (2 sqrt p = {})",
        r.max_abs_sum, r.weil_limit
    ));
    a.notes.push(format!("ks_semicircle: {}", r.ks_statistic));
    let hist: Vec<String> = r.histogram.iter().map(|h| h.to_string()).collect();
    a.notes.push(format!("histogram: {}", hist.join(" ")));
    Ok(a.render(format(cfg, Format::Csv)))
}

pub fn entropy_min(cfg: &RunConfig) -> CmdResult {
    let ps = primes(cfg, &[11])?;
    let mut a = Artifact::new(
        "entropy-min",
        cfg.seed,
        vec![
            col("p", None),
            col("restarts", None),
            col("value", Some(1e-2)),
            col("is_magic", None),
            col("magic_params", None),
            col("best_magic_value", Some(1e-4)),
            col("phases", None),
        ],
    );
    for p in ps {
        let restarts = restarts(cfg, default_restarts(p))?;
        let r = minimize_min_entropy(p, restarts, cfg.seed)?;
        let params = r.magic.map_or(Value::Null, |m| {
            json!(format!(
                "{} {} {}",
                m.a().value(),
                m.b().value(),
                m.c().value()
            ))
        });
        let phases: Vec<String> = r.phases.as_slice().iter().map(|t| t.to_string()).collect();
        a.row(vec![
            json!(p),
            json!(restarts),
            json!(r.value),
            json!(r.magic.is_some()),
            params,
            json!(r.best_magic_value),
            json!(phases.join(" ")),
        ]);
    }
    Ok(a.render(format(cfg, Format::Json)))
}

pub fn verify(cfg: &RunConfig) -> CmdResult {
    let ps = primes(cfg, &[3, 5, 7])?;
    let mut opts = VerifyOptions {
        seed: cfg.seed,
        ..Default::default()
    };
    if let Some(tol) = cfg.tol {
        opts.tol = tol;
    }
    let report = run_suite(&ps, &opts)?;
    let mut a = Artifact::new(
        "verify",
        cfg.seed,
        vec![
            col("p", None),
            col("check", None),
            col("status", None),
            col("detail", Some(opts.tol)),
        ],
    );
    for c in &report.passed {
        a.row(vec![
            json!(c.p),
            json!(c.check),
            json!("pass"),
            json!(c.detail),
        ]);
    }
    a.notes
        .push(format!("{} checks passed", report.passed.len()));
    Ok(a.render(format(cfg, Format::Csv)))
}

pub fn orbit(cfg: &RunConfig, c: i64) -> CmdResult {
    let ps = primes(cfg, &[5])?;
    let mut a = Artifact::new(
        "orbit",
        cfg.seed,
        vec![
            col("p", None),
            col("c", None),
            col("r", None),
            col("basis", None),
            col("vector", None),
        ],
    );
    for p in ps {
        let o = cycler_orbit(c, p)?;
        for s in &o.steps {
            a.row(vec![
                json!(p),
                json!(o.c),
                json!(s.r),
                json!(s.basis.to_string()),
                json!(s.vector),
            ]);
        }
    }
    Ok(a.render(format(cfg, Format::Json)))
}

pub fn wigner(cfg: &RunConfig, a_: i64, b: i64, c: i64) -> CmdResult {
    let p = single_prime(cfg, 7)?;
    let params = MagicParams::new(a_, b, c, p)?;
    let w = wigner_function(&magic_state(&params))?;
    let mut a = Artifact::new(
        "wigner",
        cfg.seed,
        vec![col("x", None), col("z", None), col("W", Some(1e-10))],
    );
    a.meta("p", p);
    a.meta(
        "state",
        format!(
            "f({},{},{})",
            params.a().value(),
            params.b().value(),
            params.c().value()
        ),
    );
    for (x, z, v) in w.points() {
        a.row(vec![json!(x), json!(z), json!(v)]);
    }
    a.notes.push(format!("w_min: {}", w.min()));
    a.notes.push(format!("mana: {}", w.mana()));
    Ok(a.render(format(cfg, Format::Csv)))
}
