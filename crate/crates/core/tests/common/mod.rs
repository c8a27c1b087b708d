//! Randomized algebraic laws shared by the property tests and the
//! acceptance harness.

#![allow(dead_code)]

use k3verify_core::eliminate::{self, resultant_q, ResultantOptions, Strategy as ResStrategy};
use k3verify_core::exactalg::{det_fraction_free, inertia, integer_kernel, smith_normal_form, ExactMatrix};
use k3verify_core::families::{printed_d90, printed_r, ParameterPoint};
use k3verify_core::lattice::{catalog, reflection};
use k3verify_core::par::Execution;
use k3verify_core::weierstrass::{Heights, WeierstrassModel};
use k3verify_core::wpoly::{factor_mod_p, FpPoly, QPoly, VariableTable, WeightedPolynomial};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestError, TestRng, TestRunner};

pub const CASES: u32 = 1000;
pub const SEED: [u8; 32] = *b"k3verify-property-suite-seed-v01";

pub fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, rng_algorithm: RngAlgorithm::ChaCha, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &SEED))
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn table3() -> VariableTable {
    VariableTable::new(&["a", "b", "x"], &[1, 2, 1]).unwrap()
}

fn poly_strategy(max_exp: u32, max_terms: usize) -> impl Strategy<Value = Vec<(Vec<u32>, i64)>> {
    prop::collection::vec((prop::collection::vec(0..=max_exp, 3), -6i64..=6), 0..=max_terms)
}

fn build(terms: &[(Vec<u32>, i64)]) -> WeightedPolynomial {
    let t = table3();
    WeightedPolynomial::from_terms(&t, terms.iter().map(|(e, c)| (e.clone(), q(*c)))).unwrap()
}

fn point_strategy() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-9i64..=9, 3)
}

fn check<T: std::fmt::Debug>(r: Result<(), TestError<T>>) -> Result<(), String> {
    r.map_err(|e| e.to_string())
}

pub fn ring_axioms(cases: u32) -> Result<(), String> {
    let s = (poly_strategy(3, 5), poly_strategy(3, 5), poly_strategy(3, 5));
    check(runner(cases).run(&s, |(a, b, c)| {
        let (a, b, c) = (build(&a), build(&b), build(&c));
        let ab = a.try_mul(&b).unwrap();
        prop_assert_eq!(&ab, &b.try_mul(&a).unwrap());
        prop_assert_eq!(ab.try_mul(&c).unwrap(), a.try_mul(&b.try_mul(&c).unwrap()).unwrap());
        let lhs = a.try_add(&b).unwrap().try_mul(&c).unwrap();
        let rhs = a.try_mul(&c).unwrap().try_add(&b.try_mul(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert!(a.try_sub(&a).unwrap().is_zero());
        let seq = a.try_mul_with(&b, Execution::Sequential).unwrap();
        prop_assert_eq!(seq, a.try_mul_with(&b, Execution::Parallel).unwrap());
        Ok(())
    }))
}

pub fn evaluation_homomorphism(cases: u32) -> Result<(), String> {
    let s = (poly_strategy(3, 5), poly_strategy(3, 5), point_strategy());
    check(runner(cases).run(&s, |(a, b, pt)| {
        let (a, b) = (build(&a), build(&b));
        let pt: Vec<BigRational> = pt.into_iter().map(q).collect();
        let ev = |p: &WeightedPolynomial| p.evaluate(&pt).unwrap();
        prop_assert_eq!(ev(&a.try_mul(&b).unwrap()), ev(&a) * ev(&b));
        prop_assert_eq!(ev(&a.try_add(&b).unwrap()), ev(&a) + ev(&b));
        let text = a.render();
        prop_assert_eq!(WeightedPolynomial::parse(&text, &table3()).unwrap(), a);
        Ok(())
    }))
}

/// `f(lambda . t) = lambda^w f(t)` for the weighted action on
/// `P(4,6,10,12,18)`, for `r`, `d90` and products of homogeneous pieces.
pub fn grading_law(cases: u32) -> Result<(), String> {
    let r = printed_r();
    let d90 = printed_d90();
    let s = (prop::collection::vec(-5i64..=5, 5), -4i64..=4, 1i64..=3);
    check(runner(cases).run(&s, |(t, num, den)| {
        prop_assume!(num != 0 && t.iter().any(|&x| x != 0));
        let lambda = BigRational::new(num.into(), den.into());
        let point = ParameterPoint::new(t.into_iter().map(q).collect()).unwrap();
        let scaled = point.scaled(&lambda);
        for (p, w) in [(&r, 30), (&d90, 90)] {
            let lhs = p.evaluate(scaled.coords()).unwrap();
            let rhs = num_traits::pow(lambda.clone(), w) * p.evaluate(point.coords()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
        let prod = r.try_mul(&r).unwrap();
        prop_assert_eq!(prod.weighted_degree(), Some(60));
        prop_assert!(prod.is_weighted_homogeneous());
        Ok(())
    }))
}

fn qpoly_strategy(max_deg: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-7i64..=7, 2..=max_deg + 1)
}

/// `res(fg, h) = res(f, h) res(g, h)`, `res(f, g) = (-1)^(mn) res(g, f)`,
/// and the multivariate routes agree with each other and with the
/// univariate one after specialization.
pub fn resultant_laws(cases: u32) -> Result<(), String> {
    let s = (qpoly_strategy(3), qpoly_strategy(3), qpoly_strategy(3), -5i64..=5);
    check(runner(cases).run(&s, |(f, g, h, a)| {
        let (f, g, h) = (QPoly::from_ints(&f), QPoly::from_ints(&g), QPoly::from_ints(&h));
        prop_assume!(f.degree().unwrap_or(0) > 0 && g.degree().unwrap_or(0) > 0 && h.degree().unwrap_or(0) > 0);
        prop_assert_eq!(resultant_q(&f.mul(&g), &h), resultant_q(&f, &h) * resultant_q(&g, &h));
        let (m, n) = (f.degree().unwrap(), g.degree().unwrap());
        let sign = if m * n % 2 == 1 { -BigRational::one() } else { BigRational::one() };
        prop_assert_eq!(resultant_q(&f, &g), sign * resultant_q(&g, &f));

        // f + a*x^m*y and g over (y, x): eliminate x, then set y = 1.
        let t = VariableTable::new(&["y", "x"], &[1, 1]).unwrap();
        let lift = |p: &QPoly, extra: bool| {
            let mut terms: Vec<(Vec<u32>, BigRational)> =
                p.coeffs().iter().enumerate().map(|(k, c)| (vec![0, k as u32], c.clone())).collect();
            if extra {
                terms.push((vec![1, 0], q(a)));
            }
            WeightedPolynomial::from_terms(&t, terms).unwrap()
        };
        let (fy, gy) = (lift(&f, true), lift(&g, false));
        let opts = |strategy| ResultantOptions { strategy, swell_threshold: 200_000, exec: Execution::Sequential };
        let sub = eliminate::resultant_with(&fy, &gy, "x", opts(ResStrategy::Subresultant)).unwrap();
        let syl = eliminate::resultant_with(&fy, &gy, "x", opts(ResStrategy::Sylvester)).unwrap();
        prop_assert_eq!(&sub, &syl);
        let at_one = sub.evaluate(&[q(1), q(0)]).unwrap();
        let shifted = f.add(&QPoly::constant(q(a)));
        prop_assert_eq!(at_one, resultant_q(&shifted, &g));
        Ok(())
    }))
}

fn matrix_strategy() -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| (Just(r), Just(c), prop::collection::vec(-6i64..=6, r * c)))
}

fn to_matrix(r: usize, c: usize, v: &[i64]) -> ExactMatrix {
    let rows: Vec<Vec<i64>> = (0..r).map(|i| v[i * c..(i + 1) * c].to_vec()).collect();
    ExactMatrix::from_int_rows(&rows).unwrap()
}

/// `U M V = D` with `U, V` unimodular and `d_i | d_{i+1}`; kernel vectors
/// are annihilated and span a space of the right dimension.
pub fn smith_and_kernel_laws(cases: u32) -> Result<(), String> {
    check(runner(cases).run(&matrix_strategy(), |(r, c, v)| {
        let m = to_matrix(r, c, &v);
        let snf = smith_normal_form(&m).unwrap();
        prop_assert_eq!(snf.u.mul(&m).unwrap().mul(&snf.v).unwrap(), snf.d.clone());
        for i in 0..r {
            for j in 0..c {
                prop_assert!(i == j || snf.d.get(i, j).is_zero());
            }
        }
        prop_assert!(det_fraction_free(&snf.u).unwrap().magnitude().is_one());
        prop_assert!(det_fraction_free(&snf.v).unwrap().magnitude().is_one());
        let divs = snf.elementary_divisors();
        for w in divs.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
        let kernel = integer_kernel(&m).unwrap();
        prop_assert_eq!(kernel.len(), c - snf.rank());
        for k in &kernel {
            let kq: Vec<BigRational> = k.iter().map(|x| BigRational::from_integer(x.clone())).collect();
            prop_assert!(m.apply(&kq).unwrap().iter().all(Zero::is_zero));
        }
        Ok(())
    }))
}

/// Congruent symmetric matrices have equal inertia.
pub fn inertia_law(cases: u32) -> Result<(), String> {
    let s = (1usize..=4).prop_flat_map(|n| {
        (Just(n), prop::collection::vec(-5i64..=5, n * n), prop::collection::vec(-3i64..=3, n * n))
    });
    check(runner(cases).run(&s, |(n, g, p)| {
        let g = to_matrix(n, n, &g);
        let sym = ExactMatrix::from_rows((0..n).map(|i| (0..n).map(|j| g.get(i, j) + g.get(j, i)).collect()).collect())
            .unwrap();
        let p = to_matrix(n, n, &p);
        prop_assume!(!det_fraction_free(&p).unwrap().is_zero());
        let moved = p.transpose().mul(&sym).unwrap().mul(&p).unwrap();
        let (a, b) = (inertia(&sym).unwrap(), inertia(&moved).unwrap());
        prop_assert_eq!((a.positive, a.negative, a.zero), (b.positive, b.negative, b.zero));
        prop_assert_eq!(a.positive + a.negative + a.zero, n);
        Ok(())
    }))
}

/// Reflections in norm -2 vectors of `A = U + U + A2(-1)` preserve the
/// form, are involutions of determinant -1 and act trivially on `A^/A`.
pub fn reflection_laws(cases: u32) -> Result<(), String> {
    let a = catalog("A").unwrap();
    let s = (-4i64..=4, -4i64..=4, -4i64..=4);
    check(runner(cases).run(&s, |(x1, x2, c)| {
        // (x1, x2) in A2(-1) has norm -2k and e1 + (k - 1) f1 has norm 2(k - 1).
        let k = x1 * x1 - x1 * x2 + x2 * x2;
        let delta: Vec<BigInt> = [1, k - 1, c, 0, x1, x2].iter().map(|&v| BigInt::from(v)).collect();
        prop_assert_eq!(a.norm(&delta).unwrap(), BigInt::from(-2));
        let s = reflection(&a, &delta).unwrap();
        prop_assert!(s.preserves(&a));
        prop_assert_eq!(s.det, -1);
        prop_assert_eq!(s.compose(&s).matrix, ExactMatrix::identity(6));
        prop_assert!(s.acts_trivially_on_discriminant(&a).unwrap());
        prop_assert_eq!(s.apply_int(&delta), delta.iter().map(|x| -x).collect::<Vec<_>>());
        Ok(())
    }))
}

fn brute_force_irreducible(f: &FpPoly) -> bool {
    let p = f.modulus();
    let d = f.degree().unwrap_or(0);
    if d == 0 {
        return false;
    }
    for k in 1..=d / 2 {
        for idx in 0..p.pow(k as u32) {
            let mut coeffs: Vec<u64> = (0..k).map(|i| (idx / p.pow(i as u32)) % p).collect();
            coeffs.push(1);
            let g = FpPoly::new(p, coeffs);
            if f.div_rem(&g).1.is_zero() {
                return false;
            }
        }
    }
    true
}

/// The factorization multiplies back to the input and every factor is
/// irreducible by exhaustive trial division.
pub fn factor_mod_p_laws(cases: u32) -> Result<(), String> {
    let s = (prop::collection::vec(-20i64..=20, 2..=7), prop::sample::select(vec![2u64, 3, 5, 7]));
    check(runner(cases).run(&s, |(coeffs, p)| {
        let ints: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
        let f = FpPoly::from_integers(p, &ints);
        prop_assume!(f.degree().is_some_and(|d| d + 1 == coeffs.len()) && f.degree().unwrap_or(0) > 0);
        let fac = factor_mod_p(&ints, p).unwrap();
        prop_assert_eq!(fac.product(p), f);
        for (g, _) in &fac.factors {
            prop_assert!(brute_force_irreducible(g), "{:?} mod {}", g, p);
        }
        Ok(())
    }))
}

/// Chart swap is an involution and exchanges the fibers at 0 and infinity.
pub fn chart_swap_laws(cases: u32) -> Result<(), String> {
    let s = (prop::collection::vec(-3i64..=3, 9), prop::collection::vec(-3i64..=3, 13));
    check(runner(cases).run(&s, |(g2, g3)| {
        let Ok(m) = WeierstrassModel::new(QPoly::from_ints(&g2), QPoly::from_ints(&g3), Heights::K3) else {
            return Ok(());
        };
        let swapped = m.chart_swap();
        prop_assert_eq!(&swapped.chart_swap(), &m);
        let zero = k3verify_core::weierstrass::BasePoint::Finite(q(0));
        let inf = k3verify_core::weierstrass::BasePoint::Infinity;
        prop_assert_eq!(m.local_valuations(&inf), swapped.local_valuations(&zero));
        Ok(())
    }))
}

pub type Property = (&'static str, fn(u32) -> Result<(), String>);

pub const PROPERTIES: [Property; 9] = [
    ("ring axioms", ring_axioms),
    ("evaluation homomorphism", evaluation_homomorphism),
    ("grading law", grading_law),
    ("resultant laws", resultant_laws),
    ("smith form and kernel", smith_and_kernel_laws),
    ("inertia under congruence", inertia_law),
    ("reflections", reflection_laws),
    ("factorization mod p", factor_mod_p_laws),
    ("chart swap", chart_swap_laws),
];
