//! Derivative-free local minimization (Nelder–Mead with dimension-adaptive
//! coefficients).

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NelderMeadOptions {
    /// Edge length of the initial axis-aligned simplex.
    pub scale: f64,
    /// Stop once every vertex lies within this distance of the best one.
    pub diameter_tol: f64,
    pub max_evals: usize,
    /// Re-run from the converged point while it keeps improving.
    pub restart_until_stable: bool,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            scale: 0.3,
            diameter_tol: 1e-7,
            max_evals: 200_000,
            restart_until_stable: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
    pub converged: bool,
}

pub fn nelder_mead<F>(f: F, x0: &[f64], opts: &NelderMeadOptions) -> Minimum
where
    F: Fn(&[f64]) -> f64,
{
    let mut best = single_run(&f, x0, opts, opts.max_evals);
    if !opts.restart_until_stable {
        return best;
    }
    while best.evals < opts.max_evals {
        let next = single_run(&f, &best.x, opts, opts.max_evals - best.evals);
        let evals = best.evals + next.evals;
        if next.value < best.value - 1e-12 {
            best = Minimum { evals, ..next };
        } else {
            best.evals = evals;
            break;
        }
    }
    best
}

fn single_run<F>(f: &F, x0: &[f64], opts: &NelderMeadOptions, budget: usize) -> Minimum
where
    F: Fn(&[f64]) -> f64,
{
    let n = x0.len();
    if n == 0 {
        return Minimum {
            x: vec![],
            value: f(&[]),
            evals: 1,
            converged: true,
        };
    }
    let nf = n as f64;
    let alpha = 1.0;
    let beta = 1.0 + 2.0 / nf;
    let gamma = 0.75 - 1.0 / (2.0 * nf);
    let delta = 1.0 - 1.0 / nf;

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += opts.scale;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| f(v)).collect();
    let mut evals = n + 1;
    let mut converged = false;

    let point = |c: &[f64], w: &[f64], t: f64| -> Vec<f64> {
        c.iter().zip(w).map(|(ci, wi)| ci + t * (wi - ci)).collect()
    };

    while evals < budget {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let diameter = simplex[1..]
            .iter()
            .map(|v| {
                v.iter()
                    .zip(&simplex[0])
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if diameter < opts.diameter_tol {
            converged = true;
            break;
        }

        let mut centroid = vec![0.0; n];
        for v in &simplex[..n] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / nf;
            }
        }
        let worst = simplex[n].clone();
        let xr = point(&centroid, &worst, -alpha);
        let fr = f(&xr);
        evals += 1;

        if fr < values[0] {
            let xe = point(&centroid, &worst, -alpha * beta);
            let fe = f(&xe);
            evals += 1;
            if fe < fr {
                simplex[n] = xe;
                values[n] = fe;
            } else {
                simplex[n] = xr;
                values[n] = fr;
            }
        } else if fr < values[n - 1] {
            simplex[n] = xr;
            values[n] = fr;
        } else {
            let (xc, fc, accept_at) = if fr < values[n] {
                let xc = point(&centroid, &worst, -alpha * gamma);
                let fc = f(&xc);
                (xc, fc, fr)
            } else {
                let xc = point(&centroid, &worst, gamma);
                let fc = f(&xc);
                (xc, fc, values[n])
            };
            evals += 1;
            if fc <= accept_at {
                simplex[n] = xc;
                values[n] = fc;
            } else {
                let x0 = simplex[0].clone();
                for i in 1..=n {
                    simplex[i] = point(&x0, &simplex[i], delta);
                    values[i] = f(&simplex[i]);
                }
                evals += n;
            }
        }
    }

    let (bi, _) = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty simplex");
    Minimum {
        x: simplex[bi].clone(),
        value: values[bi],
        evals,
        converged,
    }
}
