//! Arithmetic in the prime field Z_p.
//!
//! Fractions such as `-1/12` are read as field elements: `frac(-1, 12, p)`
//! is `-(12^{-1}) mod p`. Moduli are small (trial-division primality), so
//! everything is carried in `u64` without overflow concerns for `p < 2^31`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Deterministic trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn ensure_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// Reduce a signed integer into `[0, p)`.
#[inline]
pub fn reduce(v: i64, p: u64) -> u64 {
    v.rem_euclid(p as i64) as u64
}

/// Extended Euclid: returns `(g, s, t)` with `s*a + t*b = g = gcd(a, b)`.
fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i64, 0i64);
    let (mut old_t, mut t) = (0i64, 1i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    (old_r, old_s, old_t)
}

/// Inverse of `x` modulo `p`, or `None` when `x ≡ 0`.
pub fn inv_mod(x: u64, p: u64) -> Option<u64> {
    let x = x % p;
    if x == 0 {
        return None;
    }
    let (g, s, _) = ext_gcd(x as i64, p as i64);
    debug_assert_eq!(g, 1);
    Some(reduce(s, p))
}

/// A residue modulo a prime.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fp {
    value: u64,
    modulus: u64,
}

impl Fp {
    /// Builds `value mod p`; negative literals are normalized.
    pub fn new(value: i64, p: u64) -> Result<Self> {
        ensure_prime(p)?;
        Ok(Self::new_unchecked(value, p))
    }

    /// Skips the primality check. Callers must already hold a prime modulus.
    pub(crate) fn new_unchecked(value: i64, p: u64) -> Self {
        Fp {
            value: reduce(value, p),
            modulus: p,
        }
    }

    pub fn zero(p: u64) -> Result<Self> {
        Self::new(0, p)
    }

    pub fn one(p: u64) -> Result<Self> {
        Self::new(1, p)
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    /// Same modulus, different value.
    pub fn with_value(self, value: i64) -> Self {
        Self::new_unchecked(value, self.modulus)
    }

    pub fn inv(self) -> Result<Self> {
        inv_mod(self.value, self.modulus)
            .map(|v| Fp {
                value: v,
                modulus: self.modulus,
            })
            .ok_or(Error::InversionOfZero(self.modulus))
    }

    pub fn pow(self, mut e: u64) -> Self {
        let p = self.modulus;
        let mut base = self.value;
        let mut acc = 1 % p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        Fp {
            value: acc,
            modulus: p,
        }
    }

    pub fn checked_add(self, rhs: Self) -> Result<Self> {
        same_modulus(self, rhs)?;
        Ok(self + rhs)
    }

    pub fn checked_mul(self, rhs: Self) -> Result<Self> {
        same_modulus(self, rhs)?;
        Ok(self * rhs)
    }

    pub fn checked_div(self, rhs: Self) -> Result<Self> {
        same_modulus(self, rhs)?;
        Ok(self * rhs.inv()?)
    }
}

fn same_modulus(a: Fp, b: Fp) -> Result<()> {
    if a.modulus == b.modulus {
        Ok(())
    } else {
        Err(Error::ModulusMismatch(a.modulus, b.modulus))
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

// The operator impls panic on mixed moduli; use the `checked_*` forms when the
// operands come from untrusted input.
impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        assert_eq!(self.modulus, rhs.modulus, "modulus mismatch");
        Fp {
            value: (self.value + rhs.value) % self.modulus,
            modulus: self.modulus,
        }
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        assert_eq!(self.modulus, rhs.modulus, "modulus mismatch");
        Fp {
            value: (self.value + self.modulus - rhs.value) % self.modulus,
            modulus: self.modulus,
        }
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        assert_eq!(self.modulus, rhs.modulus, "modulus mismatch");
        Fp {
            value: self.value * rhs.value % self.modulus,
            modulus: self.modulus,
        }
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp {
            value: (self.modulus - self.value) % self.modulus,
            modulus: self.modulus,
        }
    }
}

pub fn inv(x: Fp) -> Result<Fp> {
    x.inv()
}

/// The field element `num / den`.
pub fn frac(num: i64, den: i64, p: u64) -> Result<Fp> {
    Fp::new(num, p)?.checked_div(Fp::new(den, p)?)
}

/// `a k^3 + b k^2 + c k` in Z_p.
pub fn eval_cubic(a: Fp, b: Fp, c: Fp, k: Fp) -> Result<Fp> {
    same_modulus(a, b)?;
    same_modulus(a, c)?;
    same_modulus(a, k)?;
    Ok(((a * k + b) * k + c) * k)
}

/// Partition of Z_p^* into cubic-residue classes.
///
/// For `p ≡ 2 (mod 3)` cubing is a bijection and there is a single class.
/// For `p ≡ 1 (mod 3)` the cubic residues form a subgroup of index 3; the
/// first class returned is that subgroup, the next two are its cosets, each
/// generated by the smallest element not yet covered. Classes are sorted.
pub fn cubic_residue_classes(p: u64) -> Result<Vec<Vec<u64>>> {
    ensure_prime(p)?;
    if p <= 3 {
        return Err(Error::UnsupportedDimension {
            p,
            reason: "cubic residue classes are defined here for p > 3",
        });
    }
    if p % 3 == 2 {
        return Ok(vec![(1..p).collect()]);
    }
    let mut residues: Vec<u64> = (1..p).map(|k| k * k % p * k % p).collect();
    residues.sort_unstable();
    residues.dedup();

    let mut covered = vec![false; p as usize];
    let mut classes = Vec::with_capacity(3);
    for &r in &residues {
        covered[r as usize] = true;
    }
    classes.push(residues.clone());
    while let Some(g) = (1..p).find(|&v| !covered[v as usize]) {
        let mut coset: Vec<u64> = residues.iter().map(|&r| r * g % p).collect();
        coset.sort_unstable();
        for &v in &coset {
            covered[v as usize] = true;
        }
        classes.push(coset);
    }
    Ok(classes)
}

/// Index of the cubic-residue class containing `a`.
pub fn cubic_class_of(a: u64, p: u64) -> Result<usize> {
    let classes = cubic_residue_classes(p)?;
    classes
        .iter()
        .position(|cls| cls.contains(&(a % p)))
        .ok_or(Error::InversionOfZero(p))
}
