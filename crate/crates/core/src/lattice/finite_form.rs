//! Finite quadratic forms on discriminant groups, with brute-force
//! automorphism counts and isomorphism tests.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::LatticeError;

pub const DEFAULT_ORDER_BOUND: u64 = 10_000;

/// Reduces a rational into `[0, m)`.
pub fn reduce_mod(x: &BigRational, m: i64) -> BigRational {
    let m = BigRational::from_integer(BigInt::from(m));
    let k = (x / &m).floor();
    x - k * m
}

/// A finite abelian group `Z/d_1 + ... + Z/d_k` on generators `y_i` with a
/// quadratic form valued in Q/2Z.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteQuadraticForm {
    orders: Vec<u64>,
    /// `q(y_i)` mod 2 on the diagonal, `b(y_i, y_j)` mod 1 off it.
    values: Vec<Vec<BigRational>>,
}

impl FiniteQuadraticForm {
    pub fn new(orders: Vec<u64>, values: Vec<Vec<BigRational>>) -> Self {
        let k = orders.len();
        let values = (0..k)
            .map(|i| (0..k).map(|j| reduce_mod(&values[i][j], if i == j { 2 } else { 1 })).collect())
            .collect();
        FiniteQuadraticForm { orders, values }
    }

    pub fn trivial() -> Self {
        FiniteQuadraticForm { orders: Vec::new(), values: Vec::new() }
    }

    pub fn generator_orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn q_values(&self) -> &[Vec<BigRational>] {
        &self.values
    }

    pub fn order(&self) -> u64 {
        self.orders.iter().product()
    }

    /// Element with the given mixed-radix index.
    pub fn element(&self, mut index: u64) -> Vec<u64> {
        self.orders
            .iter()
            .map(|&d| {
                let c = index % d;
                index /= d;
                c
            })
            .collect()
    }

    fn index_of(&self, coords: &[u64]) -> u64 {
        coords.iter().zip(&self.orders).rev().fold(0, |acc, (&c, &d)| acc * d + c)
    }

    pub fn elements(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        (0..self.order()).map(|i| self.element(i))
    }

    /// `q(x)` mod 2.
    pub fn q(&self, x: &[u64]) -> BigRational {
        let mut s = BigRational::zero();
        for i in 0..x.len() {
            if x[i] == 0 {
                continue;
            }
            let ai = BigInt::from(x[i]);
            s += &self.values[i][i] * BigRational::from_integer(&ai * &ai);
            for j in i + 1..x.len() {
                if x[j] != 0 {
                    s += &self.values[i][j] * BigRational::from_integer(BigInt::from(2u64 * x[i] * x[j]));
                }
            }
        }
        reduce_mod(&s, 2)
    }

    /// `b(x, y)` mod 1.
    pub fn b(&self, x: &[u64], y: &[u64]) -> BigRational {
        let mut s = BigRational::zero();
        for i in 0..x.len() {
            for j in 0..y.len() {
                if x[i] != 0 && y[j] != 0 {
                    s += &self.values[i.min(j)][i.max(j)] * BigRational::from_integer(BigInt::from(x[i] * y[j]));
                }
            }
        }
        reduce_mod(&s, 1)
    }

    fn add(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        x.iter().zip(y).zip(&self.orders).map(|((a, b), d)| (a + b) % d).collect()
    }

    fn scale(&self, x: &[u64], n: u64) -> Vec<u64> {
        x.iter().zip(&self.orders).map(|(a, d)| (a * (n % d)) % d).collect()
    }

    pub fn element_order(&self, x: &[u64]) -> u64 {
        x.iter().zip(&self.orders).fold(1, |acc, (&a, &d)| acc.lcm(&(d / a.gcd(&d))))
    }

    /// Checks `q(n x) = n^2 q(x)` for every element and every `n` up to the
    /// exponent of the group.
    pub fn scaling_law_holds(&self) -> bool {
        let exponent = self.orders.iter().fold(1u64, |acc, d| acc.lcm(d));
        self.elements().all(|x| {
            let qx = self.q(&x);
            (0..=exponent).all(|n| {
                let lhs = self.q(&self.scale(&x, n));
                lhs == reduce_mod(&(&qx * BigRational::from_integer(BigInt::from(n * n))), 2)
            })
        })
    }

    fn check_bound(&self, bound: u64) -> Result<(), LatticeError> {
        let order = self.order();
        if order > bound {
            return Err(LatticeError::OrderTooLarge { order, bound });
        }
        Ok(())
    }

    /// All isometries onto `target`, each given by the images of the
    /// generators of `self`.
    pub fn isometries_to(&self, target: &FiniteQuadraticForm, bound: u64) -> Result<Vec<Vec<Vec<u64>>>, LatticeError> {
        self.check_bound(bound)?;
        target.check_bound(bound)?;
        let mut out = Vec::new();
        if self.order() != target.order() {
            return Ok(out);
        }
        let targets: Vec<Vec<u64>> = target.elements().collect();
        let mut images: Vec<Vec<u64>> = Vec::with_capacity(self.orders.len());
        self.extend(target, &targets, &mut images, &mut out, None);
        Ok(out)
    }

    fn extend(
        &self,
        target: &FiniteQuadraticForm,
        candidates: &[Vec<u64>],
        images: &mut Vec<Vec<u64>>,
        out: &mut Vec<Vec<Vec<u64>>>,
        limit: Option<usize>,
    ) {
        if limit.is_some_and(|l| out.len() >= l) {
            return;
        }
        let i = images.len();
        if i == self.orders.len() {
            if self.is_bijective(target, images) {
                out.push(images.clone());
            }
            return;
        }
        for c in candidates {
            if !self.orders[i].is_multiple_of(target.element_order(c)) || target.q(c) != self.values[i][i] {
                continue;
            }
            if (0..i).any(|j| target.b(&images[j], c) != self.values[j][i]) {
                continue;
            }
            images.push(c.clone());
            self.extend(target, candidates, images, out, limit);
            images.pop();
        }
    }

    fn is_bijective(&self, target: &FiniteQuadraticForm, images: &[Vec<u64>]) -> bool {
        let mut seen = vec![false; target.order() as usize];
        for x in self.elements() {
            let mut y = vec![0; target.orders.len()];
            for (k, &c) in x.iter().enumerate() {
                y = target.add(&y, &target.scale(&images[k], c));
            }
            let idx = target.index_of(&y) as usize;
            if seen[idx] {
                return false;
            }
            seen[idx] = true;
        }
        true
    }

    /// Automorphisms preserving `q`, as generator images.
    pub fn automorphisms(&self, bound: u64) -> Result<Vec<Vec<Vec<u64>>>, LatticeError> {
        self.isometries_to(self, bound)
    }

    pub fn is_isomorphic(&self, other: &FiniteQuadraticForm, bound: u64) -> Result<bool, LatticeError> {
        self.check_bound(bound)?;
        other.check_bound(bound)?;
        if self.order() != other.order() {
            return Ok(false);
        }
        let targets: Vec<Vec<u64>> = other.elements().collect();
        let mut out = Vec::new();
        self.extend(other, &targets, &mut Vec::new(), &mut out, Some(1));
        Ok(!out.is_empty())
    }

    /// Values `q(y_i)` as floats, for reports.
    pub fn q_generators_f64(&self) -> Vec<f64> {
        (0..self.orders.len()).map(|i| self.values[i][i].to_f64().unwrap_or(f64::NAN)).collect()
    }
}

/// Number of automorphisms of a finite quadratic form.
pub fn finite_form_automorphisms(q: &FiniteQuadraticForm, bound: u64) -> Result<usize, LatticeError> {
    Ok(q.automorphisms(bound)?.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn reduction() {
        assert_eq!(reduce_mod(&r(-2, 3), 2), r(4, 3));
        assert_eq!(reduce_mod(&r(7, 2), 1), r(1, 2));
        assert_eq!(reduce_mod(&r(4, 1), 2), r(0, 1));
    }

    #[test]
    fn cyclic_three() {
        let q = FiniteQuadraticForm::new(vec![3], vec![vec![r(-2, 3)]]);
        assert_eq!(q.q(&[1]), r(4, 3));
        assert_eq!(q.q(&[2]), r(4, 3));
        assert!(q.scaling_law_holds());
        assert_eq!(finite_form_automorphisms(&q, DEFAULT_ORDER_BOUND).unwrap(), 2);
    }

    #[test]
    fn trivial_and_two() {
        assert_eq!(finite_form_automorphisms(&FiniteQuadraticForm::trivial(), 10).unwrap(), 1);
        let q = FiniteQuadraticForm::new(vec![2], vec![vec![r(-1, 2)]]);
        assert_eq!(finite_form_automorphisms(&q, 10).unwrap(), 1);
    }

    #[test]
    fn isomorphism_distinguishes_values() {
        let a = FiniteQuadraticForm::new(vec![3], vec![vec![r(4, 3)]]);
        let b = FiniteQuadraticForm::new(vec![3], vec![vec![r(2, 3)]]);
        assert!(a.is_isomorphic(&a, 100).unwrap());
        assert!(!a.is_isomorphic(&b, 100).unwrap());
    }

    #[test]
    fn klein_group_automorphisms() {
        // (Z/2)^2 with q = diag(1/2, 1/2): swapping generators is the only
        // nontrivial isometry since q(y1 + y2) = 1.
        let q = FiniteQuadraticForm::new(vec![2, 2], vec![vec![r(1, 2), r(0, 1)], vec![r(0, 1), r(1, 2)]]);
        assert_eq!(finite_form_automorphisms(&q, 100).unwrap(), 2);
        assert!(matches!(
            finite_form_automorphisms(&q, 3),
            Err(LatticeError::OrderTooLarge { order: 4, bound: 3 })
        ));
    }
}
