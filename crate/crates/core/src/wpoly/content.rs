//! Content of a polynomial with respect to one variable: the gcd of its
//! coefficients as polynomials in the remaining variables.
//!
//! Triviality of the gcd is certified variable by variable. If `G` divides
//! every coefficient `c_i` and a specialization of all variables but `y`
//! keeps `deg_y c_i` for some `i`, then it also keeps `deg_y G`, so a
//! univariate gcd of degree 0 in `y` proves `deg_y G = 0`. Nontrivial
//! factors are found by trying candidate divisors with exact division.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::Rng;

use super::{PolyError, QPoly, WeightedPolynomial};
use crate::rng::trial_rng;

const SPECIALIZATION_ATTEMPTS: u64 = 8;
const SAMPLE_BOUND: i64 = 1000;
const MAX_ROUNDS: usize = 8;
const MAX_CANDIDATES: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Content {
    /// Normalized to leading coefficient 1.
    pub gcd: WeightedPolynomial,
    /// False when the candidate search ran out before proving the remaining
    /// cofactors coprime; `gcd` is then 1.
    pub certified: bool,
}

impl Content {
    pub fn is_trivial(&self) -> bool {
        self.certified && self.gcd.is_constant()
    }
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `var`.
pub fn content_in_var(p: &WeightedPolynomial, var: &str) -> Result<Content, PolyError> {
    let table = p.table().clone();
    let one = WeightedPolynomial::one(&table);
    let mut coeffs: Vec<WeightedPolynomial> =
        p.univariate_view(var)?.into_iter().filter(|c| !c.is_zero()).collect();
    if coeffs.is_empty() {
        return Ok(Content { gcd: WeightedPolynomial::zero(&table), certified: true });
    }
    let mut gcd = one.clone();
    for round in 0..MAX_ROUNDS {
        if coprime(&coeffs, var, round as u64)? {
            return Ok(Content { gcd: normalize(&gcd), certified: true });
        }
        let Some(divisor) = find_common_divisor(&coeffs)? else { break };
        coeffs = coeffs.iter().map(|c| c.exact_divide(&divisor)).collect::<Result<_, _>>()?;
        gcd = gcd.try_mul(&divisor)?;
    }
    Ok(Content { gcd: one, certified: false })
}

fn normalize(p: &WeightedPolynomial) -> WeightedPolynomial {
    match p.leading_coefficient() {
        Some(lc) => p.scale(&(BigRational::one() / lc)),
        None => p.clone(),
    }
}

/// Proves that the coefficients share no nonconstant factor; `false` means
/// not proven.
fn coprime(coeffs: &[WeightedPolynomial], var: &str, salt: u64) -> Result<bool, PolyError> {
    if coeffs.iter().any(WeightedPolynomial::is_constant) {
        return Ok(true);
    }
    let table = coeffs[0].table().clone();
    let names: Vec<String> = table.names().to_vec();
    for (yi, y) in names.iter().enumerate() {
        if y == var || coeffs.iter().all(|c| c.degree_in(y).ok().flatten().unwrap_or(0) == 0) {
            continue;
        }
        let mut proven = false;
        for attempt in 0..SPECIALIZATION_ATTEMPTS {
            let mut rng = trial_rng(salt.wrapping_mul(1_000_003).wrapping_add(yi as u64), attempt);
            let point: Vec<(String, BigRational)> = names
                .iter()
                .filter(|n| *n != y && *n != var)
                .map(|n| (n.clone(), BigRational::from_integer(BigInt::from(rng.random_range(-SAMPLE_BOUND..=SAMPLE_BOUND)))))
                .collect();
            let mut g = QPoly::zero();
            let mut degree_kept = false;
            for c in coeffs {
                let mut s = c.clone();
                for (n, v) in &point {
                    s = s.specialize(n, v)?;
                }
                let u = s.to_qpoly(y)?.expect("only one variable left");
                if u.degree() == c.degree_in(y)?.map(|d| d as usize) {
                    degree_kept = true;
                }
                g = g.gcd(&u);
            }
            if degree_kept && g.degree() == Some(0) {
                proven = true;
                break;
            }
        }
        if !proven {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Nonconstant polynomial dividing every coefficient, tried from the
/// monomial content and then the sparsest coefficients.
fn find_common_divisor(coeffs: &[WeightedPolynomial]) -> Result<Option<WeightedPolynomial>, PolyError> {
    let table = coeffs[0].table().clone();
    let n = table.len();
    let mono: Vec<u32> = (0..n)
        .map(|i| coeffs.iter().map(|c| c.monomial_content()[i]).min().unwrap_or(0))
        .collect();
    if mono.iter().any(|&e| e > 0) {
        return Ok(Some(WeightedPolynomial::monomial(&table, &mono, BigRational::one())?));
    }
    let mut order: Vec<&WeightedPolynomial> = coeffs.iter().collect();
    order.sort_by_key(|c| c.len());
    for cand in order.into_iter().take(MAX_CANDIDATES) {
        if cand.is_constant() {
            continue;
        }
        if coeffs.iter().all(|c| c.exact_divide(cand).is_ok()) {
            return Ok(Some(cand.clone()));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wpoly::VariableTable;

    fn t() -> VariableTable {
        VariableTable::new(&["t4", "t6", "t10", "t12", "t18"], &[4, 6, 10, 12, 18]).unwrap()
    }

    fn p(s: &str) -> WeightedPolynomial {
        WeightedPolynomial::parse(s, &t()).unwrap()
    }

    #[test]
    fn constant_coefficient_is_primitive() {
        let c = content_in_var(&p("t18^2*t4 + 3"), "t18").unwrap();
        assert!(c.is_trivial());
    }

    #[test]
    fn coprime_nonconstant_coefficients() {
        let c = content_in_var(&p("t4*t18 + t6 + t10"), "t18").unwrap();
        assert!(c.is_trivial());
    }

    #[test]
    fn common_factor_is_found() {
        let f = &p("t4 + t6") * &p("t18 + t4*t10 - t12");
        let c = content_in_var(&f, "t18").unwrap();
        assert!(c.certified);
        assert_eq!(c.gcd, p("t4 + t6"));
        let g = &p("t4^2*t6") * &p("t18^3 + t10");
        assert_eq!(content_in_var(&g, "t18").unwrap().gcd, p("t4^2*t6"));
    }

    #[test]
    fn hidden_common_factor_is_inconclusive() {
        // Every coefficient carries t4 + t6, but none equals it.
        let h = p("t4 + t6");
        let f = &(&(&h * &p("t10 + t12")) * &p("t18")) + &(&h * &p("t10 - t12 + t4^2"));
        let c = content_in_var(&f, "t18").unwrap();
        assert!(!c.certified);
        assert!(!c.is_trivial());
    }
}
