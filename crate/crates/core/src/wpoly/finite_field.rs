//! Univariate polynomials over a prime field and their factorization:
//! square-free decomposition, distinct-degree splitting, then
//! Cantor–Zassenhaus equal-degree splitting.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use rand::Rng;
use thiserror::Error;

use crate::rng::trial_rng;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FactorError {
    #[error("modulus {0} is not prime")]
    CompositeModulus(u64),
    #[error("leading coefficient vanishes modulo {0}")]
    LeadingCoefficientVanishes(u64),
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    (a as u128 * b as u128 % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

/// Inverse of a nonzero residue modulo a prime.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Polynomial over the field with `p` elements; ascending coefficients,
/// no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpPoly {
    p: u64,
    coeffs: Vec<u64>,
}

impl FpPoly {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        let mut coeffs: Vec<u64> = coeffs.into_iter().map(|c| c % p).collect();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FpPoly { p, coeffs }
    }

    pub fn from_integers(p: u64, coeffs: &[BigInt]) -> Self {
        let pb = BigInt::from(p);
        Self::new(
            p,
            coeffs
                .iter()
                .map(|c| u64::try_from(c.mod_floor(&pb)).expect("residue fits in u64"))
                .collect(),
        )
    }

    fn zero(p: u64) -> Self {
        FpPoly { p, coeffs: Vec::new() }
    }

    fn one(p: u64) -> Self {
        Self::new(p, vec![1])
    }

    fn x(p: u64) -> Self {
        Self::new(p, vec![0, 1])
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let get = |v: &[u64], i: usize| v.get(i).copied().unwrap_or(0);
        Self::new(self.p, (0..n).map(|i| (get(&self.coeffs, i) + get(&o.coeffs, i)) % self.p).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let get = |v: &[u64], i: usize| v.get(i).copied().unwrap_or(0);
        Self::new(
            self.p,
            (0..n).map(|i| (get(&self.coeffs, i) + self.p - get(&o.coeffs, i)) % self.p).collect(),
        )
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.p);
        }
        let mut out = vec![0u64; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + mul_mod(a, b, self.p)) % self.p;
            }
        }
        Self::new(self.p, out)
    }

    fn scale(&self, c: u64) -> Self {
        Self::new(self.p, self.coeffs.iter().map(|&a| mul_mod(a, c, self.p)).collect())
    }

    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            None => self.clone(),
            Some(&lc) => self.scale(inv_mod(lc, self.p)),
        }
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let inv = inv_mod(d.coeffs[dd], self.p);
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(self.p), self.clone());
        }
        let mut q = vec![0u64; r.len() - dd];
        for k in (dd..r.len()).rev() {
            if r[k] == 0 {
                continue;
            }
            let f = mul_mod(r[k], inv, self.p);
            for (j, &c) in d.coeffs.iter().enumerate() {
                let t = mul_mod(f, c, self.p);
                r[k - dd + j] = (r[k - dd + j] + self.p - t) % self.p;
            }
            q[k - dd] = f;
        }
        (Self::new(self.p, q), Self::new(self.p, r))
    }

    fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.p,
            self.coeffs.iter().enumerate().skip(1).map(|(k, &c)| mul_mod(c, k as u64 % self.p, self.p)).collect(),
        )
    }

    /// `self^e mod m`.
    fn pow_rem(&self, e: &BigUint, m: &Self) -> Self {
        let mut result = Self::one(self.p);
        let base = self.rem(m);
        for i in (0..e.bits()).rev() {
            result = result.mul(&result).rem(m);
            if e.bit(i) {
                result = result.mul(&base).rem(m);
            }
        }
        result
    }

    /// p-th root of a polynomial whose derivative vanishes.
    fn pth_root(&self) -> Self {
        let p = self.p as usize;
        Self::new(self.p, self.coeffs.iter().step_by(p).copied().collect())
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.coeffs.iter().rev().fold(0, |acc, &c| (mul_mod(acc, x, self.p) + c) % self.p)
    }
}

impl fmt::Debug for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0 (mod {})", self.p);
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| match (k, c) {
                (0, c) => format!("{c}"),
                (1, 1) => "x".to_string(),
                (1, c) => format!("{c}*x"),
                (k, 1) => format!("x^{k}"),
                (k, c) => format!("{c}*x^{k}"),
            })
            .collect();
        write!(f, "{} (mod {})", parts.join(" + "), self.p)
    }
}

/// Monic irreducible factors with multiplicities and the leading unit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: u64,
    pub factors: Vec<(FpPoly, usize)>,
}

impl Factorization {
    pub fn is_irreducible(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }

    /// Reconstructs `unit * prod f^k`.
    pub fn product(&self, p: u64) -> FpPoly {
        self.factors
            .iter()
            .fold(FpPoly::new(p, vec![self.unit]), |acc, (f, k)| (0..*k).fold(acc, |a, _| a.mul(f)))
    }
}

fn squarefree(f: &FpPoly) -> Vec<(FpPoly, usize)> {
    let p = f.p;
    let mut out = Vec::new();
    let c0 = f.gcd(&f.derivative());
    let mut w = f.div_rem(&c0).0;
    let mut c = c0;
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = w.div_rem(&y).0;
        if fac.degree().is_some_and(|d| d > 0) {
            out.push((fac.monic(), i));
        }
        w = y.clone();
        c = c.div_rem(&y).0;
        i += 1;
    }
    if c.degree().is_some_and(|d| d > 0) {
        for (g, m) in squarefree(&c.pth_root().monic()) {
            out.push((g, m * p as usize));
        }
    }
    out
}

fn distinct_degree(f: &FpPoly) -> Vec<(FpPoly, usize)> {
    let p = f.p;
    let x = FpPoly::x(p);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = x.rem(&rest);
    let pe = BigUint::from(p);
    let mut d = 1;
    while rest.degree().unwrap_or(0) >= 2 * d {
        h = h.pow_rem(&pe, &rest);
        let g = rest.gcd(&h.sub(&x));
        if !g.is_one() {
            rest = rest.div_rem(&g).0.monic();
            h = h.rem(&rest);
            out.push((g, d));
        }
        d += 1;
    }
    if rest.degree().is_some_and(|k| k > 0) {
        let k = rest.degree().unwrap_or(0);
        out.push((rest, k));
    }
    out
}

fn equal_degree(f: &FpPoly, d: usize, seed: u64) -> Vec<FpPoly> {
    let n = f.degree().unwrap_or(0);
    if n <= d {
        return vec![f.monic()];
    }
    let p = f.p;
    let mut rng = trial_rng(seed, (n as u64) << 32 | d as u64);
    let exponent = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
    loop {
        let a = FpPoly::new(p, (0..n).map(|_| rng.random_range(0..p)).collect());
        if a.degree().is_none_or(|k| k == 0) {
            continue;
        }
        let g = f.gcd(&a);
        let candidate = if !g.is_one() {
            g
        } else if p == 2 {
            let mut t = a.rem(f);
            let mut acc = t.clone();
            for _ in 1..d {
                t = t.mul(&t).rem(f);
                acc = acc.add(&t);
            }
            f.gcd(&acc)
        } else {
            let b = a.pow_rem(&exponent, f).sub(&FpPoly::one(p));
            f.gcd(&b)
        };
        let k = candidate.degree().unwrap_or(0);
        if k > 0 && k < n {
            let other = f.div_rem(&candidate).0.monic();
            let mut out = equal_degree(&candidate, d, seed.wrapping_add(1));
            out.extend(equal_degree(&other, d, seed.wrapping_add(2)));
            return out;
        }
    }
}

/// Factors an integer polynomial (ascending coefficients) modulo a prime.
pub fn factor_mod_p(f: &[BigInt], p: u64) -> Result<Factorization, FactorError> {
    if !is_prime(p) {
        return Err(FactorError::CompositeModulus(p));
    }
    let fp = FpPoly::from_integers(p, f);
    if fp.coeffs.len() != f.len() || fp.is_zero() {
        return Err(FactorError::LeadingCoefficientVanishes(p));
    }
    let unit = *fp.coeffs.last().expect("nonzero");
    let mut factors = Vec::new();
    for (sq, mult) in squarefree(&fp.monic()) {
        for (block, d) in distinct_degree(&sq) {
            for g in equal_degree(&block, d, p ^ 0x9e37_79b9_7f4a_7c15) {
                factors.push((g, mult));
            }
        }
    }
    factors.sort_by(|(f, j), (g, k)| (f.coeffs.len(), &f.coeffs, j).cmp(&(g.coeffs.len(), &g.coeffs, k)));
    Ok(Factorization { unit, factors })
}
