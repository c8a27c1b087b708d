//! Sparse multivariate polynomials over the rationals with a weighted grading.
//!
//! Exponent vectors are packed into a `u64`, one byte per variable with the
//! first declared variable in the most significant byte, so integer order on
//! the packed key is lexicographic order on exponents. Terms are kept sorted
//! by (weighted degree, packed exponents), both descending.

pub mod content;
pub mod finite_field;
mod parse;
pub mod univariate;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exactalg::BareissRing;
use crate::par::Execution;

pub use content::{content_in_var, Content};
pub use finite_field::{factor_mod_p, FactorError, FpPoly};
pub use univariate::QPoly;

pub const MAX_VARIABLES: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("variable tables differ")]
    TableMismatch,
    #[error("unknown variable `{name}`")]
    UnknownVariable { name: String, position: usize },
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("invalid variable table: {0}")]
    InvalidTable(String),
    #[error("exponent overflow (degree above 255)")]
    ExponentOverflow,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("not divisible; remainder has {} terms", remainder.len())]
    NotDivisible { remainder: Box<WeightedPolynomial> },
    #[error("point has {got} coordinates, table has {expected} variables")]
    PointLength { expected: usize, got: usize },
    #[error("degree {degree} in `{var}` exceeds {bound}")]
    DegreeBound { var: String, degree: u32, bound: u32 },
}

#[derive(Debug, PartialEq, Eq)]
struct TableInner {
    names: Vec<String>,
    weights: Vec<u32>,
}

/// Ordered variable names with positive integer weights.
#[derive(Clone, Debug)]
pub struct VariableTable(Arc<TableInner>);

impl PartialEq for VariableTable {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}
impl Eq for VariableTable {}

impl VariableTable {
    pub fn new(names: &[&str], weights: &[u32]) -> Result<Self, PolyError> {
        if names.len() != weights.len() {
            return Err(PolyError::InvalidTable("names and weights differ in length".into()));
        }
        if names.len() > MAX_VARIABLES {
            return Err(PolyError::InvalidTable(format!("at most {MAX_VARIABLES} variables")));
        }
        if weights.contains(&0) {
            return Err(PolyError::InvalidTable("weights must be at least 1".into()));
        }
        for (i, n) in names.iter().enumerate() {
            let valid = n.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid {
                return Err(PolyError::InvalidTable(format!("bad variable name `{n}`")));
            }
            if names[..i].contains(n) {
                return Err(PolyError::InvalidTable(format!("duplicate variable `{n}`")));
            }
        }
        Ok(VariableTable(Arc::new(TableInner {
            names: names.iter().map(|s| s.to_string()).collect(),
            weights: weights.to_vec(),
        })))
    }

    pub fn len(&self) -> usize {
        self.0.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0.names
    }

    pub fn weights(&self) -> &[u32] {
        &self.0.weights
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.names.iter().position(|n| n == name)
    }

    fn require(&self, name: &str) -> Result<usize, PolyError> {
        self.index_of(name)
            .ok_or_else(|| PolyError::UnknownVariable { name: name.to_string(), position: 0 })
    }
}

type Mono = u64;

#[inline]
fn shift(i: usize) -> u32 {
    8 * (MAX_VARIABLES - 1 - i) as u32
}

#[inline]
fn exponent(m: Mono, i: usize) -> u32 {
    ((m >> shift(i)) & 0xff) as u32
}

fn pack(exps: &[u32]) -> Result<Mono, PolyError> {
    let mut m = 0u64;
    for (i, &e) in exps.iter().enumerate() {
        if e > 255 {
            return Err(PolyError::ExponentOverflow);
        }
        m |= (e as u64) << shift(i);
    }
    Ok(m)
}

#[inline]
fn divides(small: Mono, big: Mono, nvars: usize) -> bool {
    (0..nvars).all(|i| exponent(small, i) <= exponent(big, i))
}

/// Sparse polynomial with exact rational coefficients over a [`VariableTable`].
#[derive(Clone, PartialEq, Eq)]
pub struct WeightedPolynomial {
    table: VariableTable,
    /// Sorted descending by (weighted degree, packed exponents); no zeros.
    terms: Vec<(Mono, BigRational)>,
}

impl WeightedPolynomial {
    pub fn zero(table: &VariableTable) -> Self {
        WeightedPolynomial { table: table.clone(), terms: Vec::new() }
    }

    pub fn one(table: &VariableTable) -> Self {
        Self::constant(table, BigRational::one())
    }

    pub fn constant(table: &VariableTable, c: BigRational) -> Self {
        let terms = if c.is_zero() { Vec::new() } else { vec![(0, c)] };
        WeightedPolynomial { table: table.clone(), terms }
    }

    pub fn from_int(table: &VariableTable, c: i64) -> Self {
        Self::constant(table, BigRational::from_integer(BigInt::from(c)))
    }

    pub fn var(table: &VariableTable, name: &str) -> Result<Self, PolyError> {
        let i = table.require(name)?;
        let mut exps = vec![0; table.len()];
        exps[i] = 1;
        Self::monomial(table, &exps, BigRational::one())
    }

    pub fn monomial(table: &VariableTable, exps: &[u32], coeff: BigRational) -> Result<Self, PolyError> {
        if exps.len() != table.len() {
            return Err(PolyError::PointLength { expected: table.len(), got: exps.len() });
        }
        let m = pack(exps)?;
        let terms = if coeff.is_zero() { Vec::new() } else { vec![(m, coeff)] };
        Ok(WeightedPolynomial { table: table.clone(), terms })
    }

    /// Builds a polynomial from (exponents, coefficient) pairs, merging like terms.
    pub fn from_terms<I>(table: &VariableTable, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Vec<u32>, BigRational)>,
    {
        let mut acc: HashMap<Mono, BigRational> = HashMap::new();
        for (exps, c) in terms {
            if exps.len() != table.len() {
                return Err(PolyError::PointLength { expected: table.len(), got: exps.len() });
            }
            *acc.entry(pack(&exps)?).or_insert_with(BigRational::zero) += c;
        }
        Ok(Self::from_map(table, acc))
    }

    fn from_map(table: &VariableTable, acc: HashMap<Mono, BigRational>) -> Self {
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Self::from_unsorted(table, terms)
    }

    fn from_unsorted(table: &VariableTable, mut terms: Vec<(Mono, BigRational)>) -> Self {
        let w = table.weights();
        terms.sort_unstable_by_key(|(m, _)| std::cmp::Reverse((wdeg(*m, w), *m)));
        WeightedPolynomial { table: table.clone(), terms }
    }

    pub fn parse(text: &str, table: &VariableTable) -> Result<Self, PolyError> {
        parse::parse(text, table)
    }

    /// Canonical text form, the inverse of [`WeightedPolynomial::parse`].
    pub fn render(&self) -> String {
        self.to_string()
    }

    pub fn table(&self) -> &VariableTable {
        &self.table
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| *m == 0)
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order as (exponent vector, coefficient).
    pub fn terms(&self) -> impl Iterator<Item = (Vec<u32>, &BigRational)> + '_ {
        let n = self.table.len();
        self.terms.iter().map(move |(m, c)| ((0..n).map(|i| exponent(*m, i)).collect(), c))
    }

    pub fn coefficient(&self, exps: &[u32]) -> BigRational {
        pack(exps)
            .ok()
            .and_then(|m| self.terms.iter().find(|(t, _)| *t == m))
            .map_or_else(BigRational::zero, |(_, c)| c.clone())
    }

    /// Constant term.
    pub fn constant_term(&self) -> BigRational {
        self.terms.iter().find(|(m, _)| *m == 0).map_or_else(BigRational::zero, |(_, c)| c.clone())
    }

    /// Leading coefficient in canonical order.
    pub fn leading_coefficient(&self) -> Option<&BigRational> {
        self.terms.first().map(|(_, c)| c)
    }

    /// Maximum over terms of the weighted degree; `None` for the zero polynomial.
    pub fn weighted_degree(&self) -> Option<u32> {
        self.terms.first().map(|(m, _)| wdeg(*m, self.table.weights()))
    }

    pub fn is_weighted_homogeneous(&self) -> bool {
        let w = self.table.weights();
        match self.terms.first() {
            None => true,
            Some((m0, _)) => {
                let d = wdeg(*m0, w);
                self.terms.iter().all(|(m, _)| wdeg(*m, w) == d)
            }
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        let n = self.table.len();
        self.terms.iter().map(|(m, _)| (0..n).map(|i| exponent(*m, i)).sum()).max()
    }

    pub fn degree_in(&self, var: &str) -> Result<Option<u32>, PolyError> {
        let i = self.table.require(var)?;
        Ok(self.terms.iter().map(|(m, _)| exponent(*m, i)).max())
    }

    fn check_table(&self, other: &Self) -> Result<(), PolyError> {
        if self.table == other.table {
            Ok(())
        } else {
            Err(PolyError::TableMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_table(other)?;
        Ok(self.merge(other, false))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_table(other)?;
        Ok(self.merge(other, true))
    }

    fn merge(&self, other: &Self, negate: bool) -> Self {
        let w = self.table.weights();
        let key = |m: Mono| (wdeg(m, w), m);
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let take_left = match (self.terms.get(i), other.terms.get(j)) {
                (Some(a), Some(b)) => key(a.0).cmp(&key(b.0)),
                (Some(_), None) => std::cmp::Ordering::Greater,
                _ => std::cmp::Ordering::Less,
            };
            match take_left {
                std::cmp::Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    let (m, c) = &other.terms[j];
                    out.push((*m, if negate { -c } else { c.clone() }));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate {
                        &self.terms[i].1 - &other.terms[j].1
                    } else {
                        &self.terms[i].1 + &other.terms[j].1
                    };
                    if !c.is_zero() {
                        out.push((self.terms[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        WeightedPolynomial { table: self.table.clone(), terms: out }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.try_mul_with(other, Execution::default())
    }

    /// Product; large products are split into chunks of `self`'s terms and
    /// the partial sums merged exactly, so the result is scheduling-independent.
    pub fn try_mul_with(&self, other: &Self, exec: Execution) -> Result<Self, PolyError> {
        self.check_table(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.table));
        }
        let n = self.table.len();
        for i in 0..n {
            let a = self.terms.iter().map(|(m, _)| exponent(*m, i)).max().unwrap_or(0);
            let b = other.terms.iter().map(|(m, _)| exponent(*m, i)).max().unwrap_or(0);
            if a + b > 255 {
                return Err(PolyError::ExponentOverflow);
            }
        }
        let (small, large) =
            if self.terms.len() <= other.terms.len() { (self, other) } else { (other, self) };
        let work = small.terms.len() * large.terms.len();
        let partial = |chunk: &[(Mono, BigRational)]| {
            let mut acc: HashMap<Mono, BigRational> = HashMap::with_capacity(large.terms.len());
            for (ma, ca) in chunk {
                for (mb, cb) in &large.terms {
                    let prod = ca * cb;
                    match acc.entry(ma + mb) {
                        std::collections::hash_map::Entry::Occupied(mut e) => *e.get_mut() += prod,
                        std::collections::hash_map::Entry::Vacant(e) => {
                            e.insert(prod);
                        }
                    }
                }
            }
            acc
        };
        if !exec.is_parallel() || work < 20_000 || small.terms.len() < 4 {
            return Ok(Self::from_map(&self.table, partial(&small.terms)));
        }
        let chunks: Vec<&[(Mono, BigRational)]> =
            small.terms.chunks(small.terms.len().div_ceil(16).max(1)).collect();
        let maps = exec.map_slice(&chunks, |c| partial(c));
        let mut iter = maps.into_iter();
        let mut acc = iter.next().unwrap_or_default();
        for map in iter {
            for (m, c) in map {
                *acc.entry(m).or_insert_with(BigRational::zero) += c;
            }
        }
        Ok(Self::from_map(&self.table, acc))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.table);
        }
        WeightedPolynomial {
            table: self.table.clone(),
            terms: self.terms.iter().map(|(m, x)| (*m, x * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Result<Self, PolyError> {
        let mut result = Self::one(&self.table);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = result.try_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.try_mul(&base)?;
            }
        }
        Ok(result)
    }

    /// Exact evaluation at a point, one coordinate per variable.
    pub fn evaluate(&self, point: &[BigRational]) -> Result<BigRational, PolyError> {
        let n = self.table.len();
        if point.len() != n {
            return Err(PolyError::PointLength { expected: n, got: point.len() });
        }
        let mut powers: Vec<Vec<BigRational>> = Vec::with_capacity(n);
        for (i, x) in point.iter().enumerate() {
            let maxe = self.terms.iter().map(|(m, _)| exponent(*m, i)).max().unwrap_or(0) as usize;
            let mut p = Vec::with_capacity(maxe + 1);
            p.push(BigRational::one());
            for k in 1..=maxe {
                let next = &p[k - 1] * x;
                p.push(next);
            }
            powers.push(p);
        }
        let mut sum = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, pw) in powers.iter().enumerate() {
                let e = exponent(*m, i) as usize;
                if e > 0 {
                    t *= &pw[e];
                }
            }
            sum += t;
        }
        Ok(sum)
    }

    /// Substitutes a value for one variable, keeping the table.
    pub fn specialize(&self, var: &str, value: &BigRational) -> Result<Self, PolyError> {
        let i = self.table.require(var)?;
        let mask = !(0xffu64 << shift(i));
        let mut acc: HashMap<Mono, BigRational> = HashMap::new();
        for (m, c) in &self.terms {
            let e = exponent(*m, i);
            let t = c * num_traits::pow(value.clone(), e as usize);
            *acc.entry(m & mask).or_insert_with(BigRational::zero) += t;
        }
        Ok(Self::from_map(&self.table, acc))
    }

    /// Composes with `var -> replacement` assignments. Variables without an
    /// assignment are mapped by name into `target`; every replacement must
    /// live over `target`.
    pub fn substitute(
        &self,
        assignments: &[(&str, WeightedPolynomial)],
        target: &VariableTable,
    ) -> Result<Self, PolyError> {
        let n = self.table.len();
        let mut images: Vec<WeightedPolynomial> = Vec::with_capacity(n);
        for name in self.table.names() {
            let img = match assignments.iter().find(|(v, _)| v == name) {
                Some((_, p)) => {
                    if &p.table != target {
                        return Err(PolyError::TableMismatch);
                    }
                    p.clone()
                }
                None => WeightedPolynomial::var(target, name)?,
            };
            images.push(img);
        }
        for (v, _) in assignments {
            self.table.require(v)?;
        }
        let mut cache: Vec<Vec<WeightedPolynomial>> = images.into_iter().map(|p| vec![p]).collect();
        let mut result = Self::zero(target);
        for (m, c) in &self.terms {
            let mut t = Self::constant(target, c.clone());
            for (i, powers) in cache.iter_mut().enumerate() {
                let e = exponent(*m, i) as usize;
                if e == 0 {
                    continue;
                }
                while powers.len() < e {
                    let next = powers[powers.len() - 1].try_mul(&powers[0])?;
                    powers.push(next);
                }
                t = t.try_mul(&powers[e - 1])?;
            }
            result = result.try_add(&t)?;
        }
        Ok(result)
    }

    /// Re-expresses the polynomial over another table by variable name.
    pub fn embed(&self, target: &VariableTable) -> Result<Self, PolyError> {
        let n = self.table.len();
        let map: Vec<usize> = self
            .table
            .names()
            .iter()
            .map(|name| target.require(name))
            .collect::<Result<_, _>>()?;
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut exps = vec![0; target.len()];
            for i in 0..n {
                exps[map[i]] = exponent(*m, i);
            }
            terms.push((pack(&exps)?, c.clone()));
        }
        Ok(Self::from_unsorted(target, terms))
    }

    /// Exact quotient `self / q`; fails with the full remainder otherwise.
    pub fn exact_divide(&self, q: &Self) -> Result<Self, PolyError> {
        self.check_table(q)?;
        let Some(&(lead_m, ref lead_c)) = q.terms.first() else {
            return Err(PolyError::DivisionByZero);
        };
        let n = self.table.len();
        let w = self.table.weights();
        let key = |m: Mono| (wdeg(m, w), m);
        let mut rem: BTreeMap<(u32, Mono), BigRational> =
            self.terms.iter().map(|(m, c)| (key(*m), c.clone())).collect();
        let mut quotient = Vec::new();
        let mut residual = Vec::new();
        while let Some(((_, m), c)) = rem.pop_last() {
            if !divides(lead_m, m, n) {
                residual.push((m, c));
                continue;
            }
            let qm = m - lead_m;
            let qc = &c / lead_c;
            for (tm, tc) in &q.terms[1..] {
                let k = key(qm + tm);
                let delta = &qc * tc;
                match rem.entry(k) {
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        *e.get_mut() -= delta;
                        if e.get().is_zero() {
                            e.remove();
                        }
                    }
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(-delta);
                    }
                }
            }
            quotient.push((qm, qc));
        }
        if !residual.is_empty() {
            return Err(PolyError::NotDivisible {
                remainder: Box::new(Self::from_unsorted(&self.table, residual)),
            });
        }
        Ok(Self::from_unsorted(&self.table, quotient))
    }

    /// Coefficients of powers of `var`, index = power. The coefficients keep
    /// the same table and do not involve `var`.
    pub fn univariate_view(&self, var: &str) -> Result<Vec<WeightedPolynomial>, PolyError> {
        let i = self.table.require(var)?;
        let deg = self.degree_in(var)?.map_or(0, |d| d as usize + 1);
        let mask = !(0xffu64 << shift(i));
        let mut buckets: Vec<Vec<(Mono, BigRational)>> = vec![Vec::new(); deg];
        for (m, c) in &self.terms {
            buckets[exponent(*m, i) as usize].push((m & mask, c.clone()));
        }
        Ok(buckets.into_iter().map(|b| Self::from_unsorted(&self.table, b)).collect())
    }

    /// Inverse of [`WeightedPolynomial::univariate_view`].
    pub fn from_univariate(var: &str, coeffs: &[WeightedPolynomial], table: &VariableTable) -> Result<Self, PolyError> {
        let x = Self::var(table, var)?;
        let mut acc = Self::zero(table);
        let mut xp = Self::one(table);
        for (k, c) in coeffs.iter().enumerate() {
            if k > 0 {
                xp = xp.try_mul(&x)?;
            }
            if !c.is_zero() {
                acc = acc.try_add(&c.try_mul(&xp)?)?;
            }
        }
        Ok(acc)
    }

    pub fn derivative(&self, var: &str) -> Result<Self, PolyError> {
        let i = self.table.require(var)?;
        let one = 1u64 << shift(i);
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| exponent(*m, i) > 0)
            .map(|(m, c)| (m - one, c * BigRational::from_integer(exponent(*m, i).into())))
            .collect();
        Ok(Self::from_unsorted(&self.table, terms))
    }

    /// `var^n * p(1/var)`: the chart swap at infinity for a polynomial of
    /// degree at most `n` in `var`.
    pub fn reciprocal(&self, var: &str, n: u32) -> Result<Self, PolyError> {
        let i = self.table.require(var)?;
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let e = exponent(*m, i);
            if e > n {
                return Err(PolyError::DegreeBound { var: var.to_string(), degree: e, bound: n });
            }
            let mask = !(0xffu64 << shift(i));
            terms.push(((m & mask) | (((n - e) as u64) << shift(i)), c.clone()));
        }
        Ok(Self::from_unsorted(&self.table, terms))
    }

    /// Largest monomial dividing every term, as exponents.
    pub fn monomial_content(&self) -> Vec<u32> {
        let n = self.table.len();
        (0..n)
            .map(|i| self.terms.iter().map(|(m, _)| exponent(*m, i)).min().unwrap_or(0))
            .collect()
    }

    /// Univariate dense view when the polynomial only involves `var`.
    pub fn to_qpoly(&self, var: &str) -> Result<Option<QPoly>, PolyError> {
        let i = self.table.require(var)?;
        let others = !(0xffu64 << shift(i));
        if self.terms.iter().any(|(m, _)| m & others != 0) {
            return Ok(None);
        }
        let deg = self.degree_in(var)?.unwrap_or(0) as usize;
        let mut coeffs = vec![BigRational::zero(); deg + 1];
        for (m, c) in &self.terms {
            coeffs[exponent(*m, i) as usize] = c.clone();
        }
        Ok(Some(QPoly::new(coeffs)))
    }

    /// Whether every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_integer())
    }

    /// Term-by-term difference report: monomials present with different
    /// coefficients, rendered as `(monomial, left, right)`.
    pub fn diff_terms(&self, other: &Self) -> Result<Vec<(String, BigRational, BigRational)>, PolyError> {
        let d = self.try_sub(other)?;
        Ok(d.terms
            .iter()
            .map(|(m, _)| {
                let mono = Self { table: self.table.clone(), terms: vec![(*m, BigRational::one())] };
                let exps: Vec<u32> = (0..self.table.len()).map(|i| exponent(*m, i)).collect();
                (mono.to_string(), self.coefficient(&exps), other.coefficient(&exps))
            })
            .collect())
    }
}

#[inline]
fn wdeg(m: Mono, w: &[u32]) -> u32 {
    w.iter().enumerate().map(|(i, &wi)| exponent(m, i) * wi).sum()
}

impl fmt::Display for WeightedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = self.table.names();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let a = c.abs();
            let vars: Vec<String> = (0..names.len())
                .filter_map(|i| match exponent(*m, i) {
                    0 => None,
                    1 => Some(names[i].clone()),
                    e => Some(format!("{}^{}", names[i], e)),
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{}*{}", a, vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for WeightedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeightedPolynomial({self})")
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $call:ident) => {
        impl $tr<&WeightedPolynomial> for &WeightedPolynomial {
            type Output = WeightedPolynomial;
            fn $method(self, rhs: &WeightedPolynomial) -> WeightedPolynomial {
                self.$call(rhs).expect("polynomial operands must share a variable table")
            }
        }
    };
}
binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &WeightedPolynomial {
    type Output = WeightedPolynomial;
    fn neg(self) -> WeightedPolynomial {
        WeightedPolynomial {
            table: self.table.clone(),
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl BareissRing for WeightedPolynomial {
    fn vanishes(&self) -> bool {
        self.terms.is_empty()
    }
    fn ring_mul(&self, other: &Self) -> Self {
        self * other
    }
    fn ring_sub(&self, other: &Self) -> Self {
        self - other
    }
    fn ring_neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, other: &Self) -> Self {
        self.exact_divide(other).expect("Bareiss division is exact")
    }
}
