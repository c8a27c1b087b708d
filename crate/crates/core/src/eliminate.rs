//! Resultants, discriminants and randomized identity testing.
//!
//! The resultant is the determinant of the Sylvester matrix with the rows of
//! `f` first. The default strategy runs the subresultant remainder sequence
//! and falls back to a fraction-free Sylvester determinant when the
//! intermediate remainders grow past a term budget.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactalg::bareiss_determinant;
use crate::par::Execution;
use crate::rng::{sample_point, trial_rng};
use crate::wpoly::{PolyError, QPoly, WeightedPolynomial};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EliminateError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("both polynomials are constant in the elimination variable")]
    BothConstant,
    #[error("degree {0} is too low for a discriminant")]
    DegreeTooLow(usize),
    #[error("invalid identity-test configuration: {0}")]
    InvalidConfig(&'static str),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Subresultant sequence with Sylvester fallback on coefficient swell.
    Auto,
    Subresultant,
    Sylvester,
}

#[derive(Clone, Copy, Debug)]
pub struct ResultantOptions {
    pub strategy: Strategy,
    /// Total terms across the current pair of remainders that triggers the
    /// fallback under [`Strategy::Auto`].
    pub swell_threshold: usize,
    pub exec: Execution,
}

impl Default for ResultantOptions {
    fn default() -> Self {
        ResultantOptions { strategy: Strategy::Auto, swell_threshold: 200_000, exec: Execution::default() }
    }
}

type Coeffs = Vec<WeightedPolynomial>;

fn degree(c: &Coeffs) -> Option<usize> {
    c.iter().rposition(|x| !x.is_zero())
}

fn trim(mut c: Coeffs) -> Coeffs {
    while c.last().is_some_and(WeightedPolynomial::is_zero) {
        c.pop();
    }
    c
}

fn pow(p: &WeightedPolynomial, k: usize) -> Result<WeightedPolynomial, PolyError> {
    p.pow(k as u32)
}

pub fn resultant(
    f: &WeightedPolynomial,
    g: &WeightedPolynomial,
    var: &str,
) -> Result<WeightedPolynomial, EliminateError> {
    resultant_with(f, g, var, ResultantOptions::default())
}

pub fn resultant_with(
    f: &WeightedPolynomial,
    g: &WeightedPolynomial,
    var: &str,
    opts: ResultantOptions,
) -> Result<WeightedPolynomial, EliminateError> {
    if f.table() != g.table() {
        return Err(PolyError::TableMismatch.into());
    }
    let table = f.table().clone();
    let a = trim(f.univariate_view(var)?);
    let b = trim(g.univariate_view(var)?);
    let (Some(m), Some(n)) = (degree(&a), degree(&b)) else {
        return Ok(WeightedPolynomial::zero(&table));
    };
    match (m, n) {
        (0, 0) => return Err(EliminateError::BothConstant),
        (_, 0) => return Ok(pow(&b[0], m)?),
        (0, _) => return Ok(pow(&a[0], n)?),
        _ => {}
    }
    match opts.strategy {
        Strategy::Sylvester => Ok(sylvester_determinant(&a, &b, opts.exec)),
        Strategy::Subresultant => Ok(subresultant(a, b, usize::MAX)?.expect("no budget")),
        Strategy::Auto => match subresultant(a.clone(), b.clone(), opts.swell_threshold)? {
            Some(r) => Ok(r),
            None => Ok(sylvester_determinant(&a, &b, opts.exec)),
        },
    }
}

/// Sylvester matrix in `var`, rows of `f` first, highest powers leftmost.
pub fn sylvester_matrix(
    f: &WeightedPolynomial,
    g: &WeightedPolynomial,
    var: &str,
) -> Result<Vec<Vec<WeightedPolynomial>>, EliminateError> {
    let a = trim(f.univariate_view(var)?);
    let b = trim(g.univariate_view(var)?);
    Ok(sylvester_rows(&a, &b))
}

fn sylvester_rows(a: &Coeffs, b: &Coeffs) -> Vec<Vec<WeightedPolynomial>> {
    let table = a[0].table().clone();
    let m = a.len() - 1;
    let n = b.len() - 1;
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for (src, shifts) in [(a, n), (b, m)] {
        let d = src.len() - 1;
        for s in 0..shifts {
            let mut row = vec![WeightedPolynomial::zero(&table); size];
            for k in 0..=d {
                row[s + k] = src[d - k].clone();
            }
            rows.push(row);
        }
    }
    rows
}

fn sylvester_determinant(a: &Coeffs, b: &Coeffs, exec: Execution) -> WeightedPolynomial {
    let one = WeightedPolynomial::one(a[0].table());
    bareiss_determinant(sylvester_rows(a, b), one, exec)
}

/// `lc(b)^(deg a - deg b + 1) * a mod b`.
fn pseudo_remainder(a: &Coeffs, b: &Coeffs) -> Result<Coeffs, PolyError> {
    let db = b.len() - 1;
    let lb = &b[db];
    let delta = a.len() - 1 - db;
    let mut r = a.clone();
    let mut steps = 0;
    while let Some(dr) = degree(&r).filter(|&d| d >= db) {
        let lr = r[dr].clone();
        let shift = dr - db;
        for x in r.iter_mut() {
            *x = x.try_mul(lb)?;
        }
        for (k, bk) in b.iter().enumerate() {
            r[shift + k] = r[shift + k].try_sub(&lr.try_mul(bk)?)?;
        }
        r = trim(r);
        steps += 1;
    }
    if steps < delta + 1 {
        let f = pow(lb, delta + 1 - steps)?;
        for x in r.iter_mut() {
            *x = x.try_mul(&f)?;
        }
    }
    Ok(r)
}

fn term_count(c: &Coeffs) -> usize {
    c.iter().map(WeightedPolynomial::len).sum()
}

/// Subresultant remainder sequence; `None` when the term budget is exceeded.
fn subresultant(mut a: Coeffs, mut b: Coeffs, budget: usize) -> Result<Option<WeightedPolynomial>, PolyError> {
    let table = a[0].table().clone();
    let mut sign_negative = false;
    if a.len() < b.len() {
        if (a.len() - 1) % 2 == 1 && (b.len() - 1) % 2 == 1 {
            sign_negative = true;
        }
        std::mem::swap(&mut a, &mut b);
    }
    let mut g = WeightedPolynomial::one(&table);
    let mut h = WeightedPolynomial::one(&table);
    loop {
        let da = a.len() - 1;
        let db = b.len() - 1;
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            sign_negative = !sign_negative;
        }
        let r = pseudo_remainder(&a, &b)?;
        let divisor = g.try_mul(&pow(&h, delta)?)?;
        a = b;
        b = r.iter().map(|x| x.exact_divide(&divisor)).collect::<Result<_, _>>()?;
        g = a[a.len() - 1].clone();
        h = match delta {
            0 => h,
            1 => g.clone(),
            _ => pow(&g, delta)?.exact_divide(&pow(&h, delta - 1)?)?,
        };
        if term_count(&a) + term_count(&b) > budget {
            return Ok(None);
        }
        match degree(&b) {
            None => return Ok(Some(WeightedPolynomial::zero(&table))),
            Some(0) => {
                let da = a.len() - 1;
                let lb = &b[0];
                let mut res = pow(lb, da)?.exact_divide(&pow(&h, da - 1)?)?;
                if sign_negative {
                    res = -&res;
                }
                return Ok(Some(res));
            }
            Some(_) => {}
        }
    }
}

/// `(-1)^(n(n-1)/2) res(f, f') / lc(f)` with `n = deg f`.
pub fn discriminant(f: &WeightedPolynomial, var: &str) -> Result<WeightedPolynomial, EliminateError> {
    discriminant_with(f, var, ResultantOptions::default())
}

pub fn discriminant_with(
    f: &WeightedPolynomial,
    var: &str,
    opts: ResultantOptions,
) -> Result<WeightedPolynomial, EliminateError> {
    let coeffs = trim(f.univariate_view(var)?);
    let n = degree(&coeffs).unwrap_or(0);
    if n < 2 {
        return Err(EliminateError::DegreeTooLow(n));
    }
    let res = resultant_with(f, &f.derivative(var)?, var, opts)?;
    let q = res.exact_divide(&coeffs[n])?;
    Ok(if (n * (n - 1) / 2) % 2 == 1 { -&q } else { q })
}

/// Resultant of univariate rational polynomials by the Euclidean recursion.
pub fn resultant_q(f: &QPoly, g: &QPoly) -> BigRational {
    let (Some(m), Some(n)) = (f.degree(), g.degree()) else {
        return BigRational::zero();
    };
    if n == 0 {
        return num_traits::pow(g.coeff(0), m);
    }
    if m == 0 {
        return num_traits::pow(f.coeff(0), n);
    }
    // res(f, g) = (-1)^(mn) res(g, f) and res(g, f) = lc(g)^(m - deg r) res(g, r).
    let r = f.div_rem(g).1;
    let Some(dr) = r.degree() else {
        return BigRational::zero();
    };
    let lc = g.leading().expect("nonzero").clone();
    let sign = if (m * n) % 2 == 1 { -BigRational::one() } else { BigRational::one() };
    sign * num_traits::pow(lc, m - dr) * resultant_q(g, &r)
}

pub fn discriminant_q(f: &QPoly) -> Result<BigRational, EliminateError> {
    let n = f.degree().unwrap_or(0);
    if n < 2 {
        return Err(EliminateError::DegreeTooLow(n));
    }
    let d = resultant_q(f, &f.derivative()) / f.leading().expect("nonzero");
    Ok(if (n * (n - 1) / 2) % 2 == 1 { -d } else { d })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PitConfig {
    pub trials: u64,
    pub seed: u64,
    /// Coordinates are drawn uniformly from `[-sample_bound, sample_bound]`.
    pub sample_bound: u64,
}

impl Default for PitConfig {
    fn default() -> Self {
        PitConfig { trials: 100, seed: 0, sample_bound: 1000 }
    }
}

impl PitConfig {
    pub fn validate(&self) -> Result<(), EliminateError> {
        if self.trials < 1 {
            return Err(EliminateError::InvalidConfig("trials must be at least 1"));
        }
        if self.sample_bound < 2 {
            return Err(EliminateError::InvalidConfig("sample bound must be at least 2"));
        }
        Ok(())
    }

    /// Schwartz–Zippel bound on the chance that one trial misses a nonzero
    /// polynomial of the given total degree.
    pub fn per_trial_bound(&self, total_degree: u32) -> f64 {
        total_degree as f64 / (2 * self.sample_bound + 1) as f64
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum PitVerdict {
    ProbablyEqual { trials: u64, total_degree: u32, per_trial_bound: f64 },
    UnequalWitness { trial: u64, point: Vec<BigRational>, difference: BigRational },
}

impl PitVerdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, PitVerdict::ProbablyEqual { .. })
    }
}

pub fn pit_equal(
    f: &WeightedPolynomial,
    g: &WeightedPolynomial,
    cfg: &PitConfig,
) -> Result<PitVerdict, EliminateError> {
    pit_equal_with(f, g, cfg, Execution::default())
}

pub fn pit_equal_with(
    f: &WeightedPolynomial,
    g: &WeightedPolynomial,
    cfg: &PitConfig,
    exec: Execution,
) -> Result<PitVerdict, EliminateError> {
    let diff = f.try_sub(g)?;
    let degree = diff.total_degree().unwrap_or(0);
    pit_zero_by(f.table().len(), degree, cfg, exec, |pt| {
        diff.evaluate(pt).expect("point length matches the table")
    })
}

/// Identity test for a function known to be a polynomial of the given total
/// degree, evaluated through `eval` at trial points.
pub fn pit_zero_by<F>(
    nvars: usize,
    total_degree: u32,
    cfg: &PitConfig,
    exec: Execution,
    eval: F,
) -> Result<PitVerdict, EliminateError>
where
    F: Fn(&[BigRational]) -> BigRational + Sync + Send,
{
    cfg.validate()?;
    let hit = exec.find_first(cfg.trials as usize, |i| {
        let mut rng = trial_rng(cfg.seed, i as u64);
        let point = sample_point(&mut rng, nvars, cfg.sample_bound);
        let v = eval(&point);
        (!v.is_zero()).then_some((point, v))
    });
    Ok(match hit {
        Some((i, (point, difference))) => PitVerdict::UnequalWitness { trial: i as u64, point, difference },
        None => PitVerdict::ProbablyEqual {
            trials: cfg.trials,
            total_degree,
            per_trial_bound: cfg.per_trial_bound(total_degree),
        },
    })
}

/// Integer coordinates as exact rationals.
pub fn int_point(v: &[i64]) -> Vec<BigRational> {
    v.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wpoly::VariableTable;

    fn tab() -> VariableTable {
        VariableTable::new(&["a", "b", "c", "d", "x", "y"], &[1, 1, 1, 1, 1, 1]).unwrap()
    }

    fn p(s: &str) -> WeightedPolynomial {
        WeightedPolynomial::parse(s, &tab()).unwrap()
    }

    fn all_strategies(f: &str, g: &str, var: &str) -> WeightedPolynomial {
        let results: Vec<WeightedPolynomial> = [Strategy::Subresultant, Strategy::Sylvester, Strategy::Auto]
            .into_iter()
            .map(|s| {
                resultant_with(&p(f), &p(g), var, ResultantOptions { strategy: s, ..Default::default() }).unwrap()
            })
            .collect();
        assert_eq!(results[0], results[1], "subresultant vs Sylvester for {f}, {g}");
        assert_eq!(results[0], results[2]);
        results[0].clone()
    }

    #[test]
    fn linear_resultant() {
        // det [[1, -a], [1, -b]]
        assert_eq!(all_strategies("x - a", "x - b", "x"), p("a - b"));
    }

    #[test]
    fn quadratic_discriminant() {
        let tb = VariableTable::new(&["a", "b", "c", "x"], &[1, 1, 1, 1]).unwrap();
        let f = WeightedPolynomial::parse("a*x^2 + b*x + c", &tb).unwrap();
        assert_eq!(discriminant(&f, "x").unwrap(), WeightedPolynomial::parse("b^2 - 4*a*c", &tb).unwrap());
    }

    #[test]
    fn depressed_cubic_discriminant() {
        // Oracle: the 5x5 Sylvester determinant of y^3+py+q and 3y^2+p,
        // expanded by hand, is 4p^3 + 27q^2; the sign factor is -1.
        let tb = VariableTable::new(&["p", "q", "y"], &[2, 3, 1]).unwrap();
        let f = WeightedPolynomial::parse("y^3 + p*y + q", &tb).unwrap();
        let res = resultant(&f, &f.derivative("y").unwrap(), "y").unwrap();
        assert_eq!(res, WeightedPolynomial::parse("4*p^3 + 27*q^2", &tb).unwrap());
        assert_eq!(discriminant(&f, "y").unwrap(), WeightedPolynomial::parse("-4*p^3 - 27*q^2", &tb).unwrap());
    }

    #[test]
    fn constant_and_degenerate_inputs() {
        assert_eq!(all_strategies("x^3 + a", "b", "x"), p("b^3"));
        assert_eq!(resultant(&p("a"), &p("b"), "x"), Err(EliminateError::BothConstant));
        assert_eq!(discriminant(&p("x + a"), "x"), Err(EliminateError::DegreeTooLow(1)));
        assert!(resultant(&p("0"), &p("x"), "x").unwrap().is_zero());
    }

    #[test]
    fn common_root_gives_zero() {
        assert!(all_strategies("x - a", "x^2 - a^2", "x").is_zero());
        assert!(all_strategies("x^3 - a*x^2 + b*x - a*b", "x^2 - a^2", "x").is_zero());
    }

    #[test]
    fn strategies_agree_on_mixed_degrees() {
        all_strategies("a*x^4 + b*x^2 + c*x + d", "c*x^3 + x - a", "x");
        all_strategies("x^2 + a*x*y + b", "y*x^3 + c", "x");
        all_strategies("a*x^5 + b", "c*x^2 + d*x + 1", "x");
        all_strategies("x^2 + a", "x^2 + b", "x");
    }

    #[test]
    fn univariate_q_matches_multivariate() {
        let f = QPoly::from_ints(&[5, -3, 0, 2]);
        let g = QPoly::from_ints(&[1, 4, -1]);
        let tb = VariableTable::new(&["x"], &[1]).unwrap();
        let fw = WeightedPolynomial::parse("2*x^3 - 3*x + 5", &tb).unwrap();
        let gw = WeightedPolynomial::parse("-x^2 + 4*x + 1", &tb).unwrap();
        assert_eq!(resultant(&fw, &gw, "x").unwrap().constant_term(), resultant_q(&f, &g));
        assert_eq!(discriminant(&fw, "x").unwrap().constant_term(), discriminant_q(&f).unwrap());
    }

    #[test]
    fn pit_verdicts() {
        let cfg = PitConfig::default();
        assert!(pit_equal(&p("a*b + c"), &p("c + b*a"), &cfg).unwrap().is_equal());
        match pit_equal(&p("a"), &p("b"), &cfg).unwrap() {
            PitVerdict::UnequalWitness { point, .. } => assert_ne!(point[0], point[1]),
            other => panic!("{other:?}"),
        }
        assert!(pit_equal(&p("a"), &p("a"), &PitConfig { trials: 0, ..cfg }).is_err());
        assert!(pit_equal(&p("a"), &p("a"), &PitConfig { sample_bound: 1, ..cfg }).is_err());
    }

    #[test]
    fn pit_is_schedule_independent() {
        let f = p("a - 3");
        let cfg = PitConfig { trials: 50, seed: 7, sample_bound: 3 };
        let seq = pit_equal_with(&f, &p("0"), &cfg, Execution::Sequential).unwrap();
        let par = pit_equal_with(&f, &p("0"), &cfg, Execution::Parallel).unwrap();
        assert_eq!(seq, par);
    }
}
