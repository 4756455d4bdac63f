//! Classical value of the qudit CHSH game: the number of pairs `(x, y)` with
//! `a_x + b_y + xy ≡ 0 (mod p)` under deterministic assignments.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::ensure_prime;

/// Largest p handled by exhaustive enumeration.
pub const EXACT_LIMIT: u64 = 7;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LhvStrategy {
    pub alice: Vec<u64>,
    pub bob: Vec<u64>,
}

impl LhvStrategy {
    pub fn new(alice: Vec<u64>, bob: Vec<u64>, p: u64) -> Result<Self> {
        let n = p as usize;
        if alice.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: alice.len(),
            });
        }
        if bob.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: bob.len(),
            });
        }
        Ok(Self {
            alice: alice.into_iter().map(|v| v % p).collect(),
            bob: bob.into_iter().map(|v| v % p).collect(),
        })
    }

    pub fn zeros(p: u64) -> Self {
        Self {
            alice: vec![0; p as usize],
            bob: vec![0; p as usize],
        }
    }

    /// `a_x + t`, `b_y - t`.
    pub fn shifted(&self, t: u64, p: u64) -> Self {
        let t = t % p;
        Self {
            alice: self.alice.iter().map(|a| (a + t) % p).collect(),
            bob: self.bob.iter().map(|b| (b + p - t) % p).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LhvResult {
    pub p: u64,
    pub value: u32,
    pub strategy: LhvStrategy,
    pub exact: bool,
    pub restarts_used: usize,
}

pub fn lhv_value(s: &LhvStrategy, p: u64) -> u32 {
    let mut count = 0;
    for (x, a) in s.alice.iter().enumerate() {
        for (y, b) in s.bob.iter().enumerate() {
            if (a + b + (x as u64 * y as u64) % p).is_multiple_of(p) {
                count += 1;
            }
        }
    }
    count
}

/// Bob's optimal reply to `alice` with ties going to the smallest `b`,
/// together with the resulting score.
pub fn best_response(alice: &[u64], p: u64) -> (Vec<u64>, u32) {
    let mut hist = vec![0u32; p as usize];
    best_response_with(alice, p, &mut hist)
}

fn best_response_with(alice: &[u64], p: u64, hist: &mut [u32]) -> (Vec<u64>, u32) {
    let mut bob = Vec::with_capacity(alice.len());
    let mut total = 0;
    for y in 0..p {
        let (b, c) = column_best(alice, y, p, hist);
        bob.push(b);
        total += c;
    }
    (bob, total)
}

fn score_only(alice: &[u64], p: u64, hist: &mut [u32]) -> u32 {
    (0..p).map(|y| column_best(alice, y, p, hist).1).sum()
}

fn column_best(alice: &[u64], y: u64, p: u64, hist: &mut [u32]) -> (u64, u32) {
    hist.fill(0);
    for (x, a) in alice.iter().enumerate() {
        // a_x + xy + b ≡ 0  ⇒  b = -(a_x + xy)
        let s = (a + x as u64 * y % p) % p;
        hist[((p - s) % p) as usize] += 1;
    }
    let mut best = (0u64, hist[0]);
    for (b, &c) in hist.iter().enumerate().skip(1) {
        if c > best.1 {
            best = (b as u64, c);
        }
    }
    best
}

/// Global maximum by enumerating every Alice assignment with `a_0 = 0`.
pub fn lhv_exact(p: u64) -> Result<LhvResult> {
    ensure_prime(p)?;
    if p > EXACT_LIMIT {
        return Err(Error::BudgetExceeded {
            p,
            max: EXACT_LIMIT,
        });
    }
    let n = p as usize;
    let mut alice = vec![0u64; n];
    let mut hist = vec![0u32; n];
    let mut best_value = 0;
    let mut best_alice = alice.clone();
    loop {
        let v = score_only(&alice, p, &mut hist);
        if v > best_value {
            best_value = v;
            best_alice.copy_from_slice(&alice);
        }
        // odometer over a_1 .. a_{p-1}
        let mut i = 1;
        while i < n {
            alice[i] += 1;
            if alice[i] < p {
                break;
            }
            alice[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    let (bob, value) = best_response(&best_alice, p);
    debug_assert_eq!(value, best_value);
    Ok(LhvResult {
        p,
        value,
        strategy: LhvStrategy {
            alice: best_alice,
            bob,
        },
        exact: true,
        restarts_used: 0,
    })
}

fn restart_rng(seed: u64, restart: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    rng
}

fn hill_climb(p: u64, rng: &mut ChaCha8Rng) -> (Vec<u64>, u32) {
    let n = p as usize;
    let mut hist = vec![0u32; n];
    let mut alice: Vec<u64> = (0..n).map(|_| rng.gen_range(0..p)).collect();
    let mut current = score_only(&alice, p, &mut hist);
    let mut moves: Vec<(usize, u64)> = (0..n).flat_map(|x| (1..p).map(move |d| (x, d))).collect();
    loop {
        // first strict improvement in a freshly shuffled move order
        moves.shuffle(rng);
        let mut improved = false;
        for &(x, d) in &moves {
            let original = alice[x];
            alice[x] = (original + d) % p;
            let s = score_only(&alice, p, &mut hist);
            if s > current {
                current = s;
                improved = true;
                break;
            }
            alice[x] = original;
        }
        if !improved {
            return (alice, current);
        }
    }
}

/// Seeded random-restart hill climbing over Alice's assignment with Bob's
/// exact best response. The value is a lower bound carried by the returned
/// strategy.
pub fn lhv_search(p: u64, restarts: usize, seed: u64) -> Result<LhvResult> {
    ensure_prime(p)?;
    if restarts == 0 {
        return Err(Error::InvalidArgument("restarts must be at least 1".into()));
    }
    let run = |r: usize| {
        let mut rng = restart_rng(seed, r);
        let (alice, value) = hill_climb(p, &mut rng);
        (r, alice, value)
    };
    #[cfg(feature = "parallel")]
    let runs: Vec<_> = {
        use rayon::prelude::*;
        (0..restarts).into_par_iter().map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let runs: Vec<_> = (0..restarts).map(run).collect();

    let (_, alice, _) = runs
        .into_iter()
        .reduce(|best, cand| if cand.2 > best.2 { cand } else { best })
        .expect("at least one restart");
    let (bob, value) = best_response(&alice, p);
    Ok(LhvResult {
        p,
        value,
        strategy: LhvStrategy { alice, bob },
        exact: false,
        restarts_used: restarts,
    })
}

/// Exact value where enumeration is affordable, seeded search otherwise.
pub fn lhv_best(p: u64, restarts: usize, seed: u64) -> Result<LhvResult> {
    if p <= EXACT_LIMIT {
        lhv_exact(p)
    } else {
        lhv_search(p, restarts, seed)
    }
}
