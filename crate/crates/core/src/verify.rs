//! Verification suites. Each suite returns a [`CheckReport`] whose check
//! order is fixed, independent of how the work was scheduled.

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde_json::json;

use crate::eliminate::{PitConfig, PitVerdict};
use crate::families::{self, CdParameterPoint, CdSubstitution, Character, GenericityCertificate, ParameterPoint};
use crate::lattice::{self, catalog, Verdict, DEFAULT_ORDER_BOUND};
use crate::par::Execution;
use crate::report::{Check, CheckReport, Status};
use crate::rng::{sample_point, trial_rng};
use crate::weierstrass::{BasePoint, FiberConfiguration, KodairaType};

pub const SUITES: [&str; 7] = ["disc-factor", "d90-check", "lattices", "fibers", "cd", "irreducible", "dims"];

pub const GENERIC_FIBER_SAMPLES: u64 = 100;
pub const T18_ZERO_FIBER_SAMPLES: u64 = 20;
pub const FIBER_SAMPLE_BOUND: u64 = 50;
/// Weight up to which the dimension table is compared with the series.
pub const SERIES_CHECK_WEIGHT: u64 = 200;
pub const D90_SPOT_CONSTANTS: [i64; 5] = [3125, 14348907, 314928, -5625, 1024];

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub seed: u64,
    pub trials: u64,
    /// Box radius for the norm -2 search.
    pub bound: u64,
    /// Randomized instead of symbolic discriminant factorization.
    pub pit: bool,
    /// Classify this point instead of running the fiber suite.
    pub fiber_point: Option<ParameterPoint>,
    pub max_weight: u64,
    pub exec: Execution,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { seed: 0, trials: 100, bound: 2, pit: false, fiber_point: None, max_weight: 60, exec: Execution::default() }
    }
}

pub fn run_suite(name: &str, opts: &VerifyOptions) -> Option<CheckReport> {
    let start = Instant::now();
    let mut report = match name {
        "disc-factor" => disc_factor(opts),
        "d90-check" => d90_check(opts),
        "lattices" => lattices(opts),
        "fibers" => fibers(opts),
        "cd" => cd(opts),
        "irreducible" => irreducible(opts),
        "dims" => dims(opts),
        "all" => {
            let mut all = CheckReport::new("all", opts.seed);
            for s in SUITES {
                all.absorb(run_suite(s, opts).expect("known suite"));
            }
            all
        }
        _ => return None,
    };
    report.runtime_ms = start.elapsed().as_millis() as u64;
    Some(report)
}

fn error_check(name: &str, e: impl std::fmt::Display) -> Check {
    Check::new(name, Status::Fail, format!("error: {e}"))
}

pub fn disc_factor(opts: &VerifyOptions) -> CheckReport {
    let mut report = CheckReport::new("disc-factor", opts.seed);
    match families::checked_r_poly() {
        Ok(r) => report.push(Check::expect("r derived = printed", true, format!("r = {r}"))),
        Err(e) => report.push(error_check("r derived = printed", e)),
    }
    if opts.pit {
        let cfg = PitConfig { trials: opts.trials, seed: opts.seed, ..PitConfig::default() };
        match families::disc_factor_pit(&cfg, opts.exec) {
            Ok((c, verdict)) => {
                report.constant("c", &c);
                let check = match verdict {
                    PitVerdict::ProbablyEqual { trials, total_degree, per_trial_bound } => Check::expect(
                        "disc(R) = c r^3 d90 (PIT)",
                        true,
                        format!("{trials} zero residuals; degree {total_degree}, miss chance per trial <= {per_trial_bound:.3e}"),
                    ),
                    PitVerdict::UnequalWitness { trial, point, difference } => {
                        Check::expect("disc(R) = c r^3 d90 (PIT)", false, format!("nonzero residual at trial {trial}"))
                            .with_witness(json!({"point": strings(&point), "difference": difference.to_string()}))
                    }
                };
                report.push(check);
            }
            Err(e) => report.push(error_check("disc(R) = c r^3 d90 (PIT)", e)),
        }
    } else {
        match (families::disc_factorization(), families::disc_factor_symbolic()) {
            (Ok(f), Ok((c, diff))) => {
                report.constant("c", &c);
                let check = Check::expect(
                    "disc(R) = c r^3 d90 (symbolic)",
                    diff.is_empty() && !c.is_zero(),
                    format!("disc_x0(R) has {} terms; c = {c}", f.disc.len()),
                );
                report.push(if diff.is_empty() { check } else { check.with_witness(json!(diff)) });
            }
            (Err(e), _) | (_, Err(e)) => report.push(error_check("disc(R) = c r^3 d90 (symbolic)", e)),
        }
    }
    report
}

fn strings(v: &[BigRational]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

pub fn d90_check(opts: &VerifyOptions) -> CheckReport {
    let mut report = CheckReport::new("d90-check", opts.seed);
    let printed = families::printed_d90();
    match families::disc_factorization() {
        Ok(f) => {
            let diff = families::term_diff(&f.d90, &printed).unwrap_or_else(|e| vec![e.to_string()]);
            let check = Check::expect(
                "derived d90 = printed d90",
                diff.is_empty(),
                format!("{} derived terms, {} printed terms, {} differences", f.d90.len(), printed.len(), diff.len()),
            );
            report.push(if diff.is_empty() { check } else { check.with_witness(json!(diff)) });
            let coeffs: Vec<BigRational> = f.d90.terms().map(|(_, c)| c.clone()).collect();
            let missing: Vec<i64> = D90_SPOT_CONSTANTS
                .iter()
                .copied()
                .filter(|&k| !coeffs.contains(&BigRational::from_integer(k.into())))
                .collect();
            report.push(Check::expect(
                "spot constants",
                missing.is_empty(),
                format!("{D90_SPOT_CONSTANTS:?} among the coefficients; missing {missing:?}"),
            ));
        }
        Err(e) => report.push(error_check("derived d90 = printed d90", e)),
    }
    let top = printed.coefficient(&[0, 6, 0, 0, 3]);
    report.push(Check::expect("coefficient of t6^6 t18^3", top == BigRational::from_integer(314928.into()), top.to_string()));
    report.push(Check::expect(
        "d90 weighted homogeneous of weight 90",
        printed.is_weighted_homogeneous() && printed.weighted_degree() == Some(90),
        format!("weights {:?}", printed.weighted_degree()),
    ));
    report
}

pub fn lattices(opts: &VerifyOptions) -> CheckReport {
    let mut report = CheckReport::new("lattices", opts.seed);
    if let Err(e) = lattice_checks(opts, &mut report) {
        report.push(error_check("lattice suite", e));
    }
    report
}

fn lattice_checks(opts: &VerifyOptions, report: &mut CheckReport) -> Result<(), lattice::LatticeError> {
    for (name, pos, neg) in [("A", 2, 4), ("L", 3, 19), ("M", 1, 15)] {
        let s = lattice::signature(&catalog(name)?)?;
        report.push(Check::expect(
            format!("signature {name}"),
            (s.positive, s.negative) == (pos, neg),
            format!("{s}, expected ({pos}, {neg})"),
        ));
    }
    let det_m = catalog("M")?.determinant();
    report.push(Check::expect("|det M| = 3", det_m.abs() == BigInt::from(3), format!("det M = {det_m}")));

    let a = catalog("A")?;
    let qa = lattice::discriminant_group(&a)?;
    report.push(Check::expect(
        "discriminant group of A is Z/3",
        qa.generator_orders() == [3],
        format!("generator orders {:?}, q = {:?} mod 2", qa.generator_orders(), strings(&diag(qa.q_values()))),
    ));
    if let Some(v) = qa.q_values().first() {
        report.constant("q_A(y)", &v[0]);
    }
    let autos = qa.automorphisms(DEFAULT_ORDER_BOUND)?.len();
    report.constant("|O(q_A)|", autos);
    report.push(Check::expect("O(q_A) has order 2", autos == 2, format!("{autos} automorphisms")));

    for (name, expect_pass) in [("A", true), ("A_S", false), ("A_MSY", false), ("A_CMS", false)] {
        let k = lattice::kneser_check(&catalog(name)?, opts.bound)?;
        let expected = if expect_pass { Verdict::Pass } else { Verdict::Fail };
        let failed: Vec<&str> = k.failed_conditions().iter().map(|c| c.condition).collect();
        let details = format!(
            "{:?}; signature {}, rank mod 2 = {}, rank mod 3 = {}, failed {:?}",
            k.overall, k.signature, k.rank_mod_2, k.rank_mod_3, failed
        );
        let status = if k.overall == expected {
            Status::Pass
        } else if k.overall == Verdict::Inconclusive {
            Status::Inconclusive
        } else {
            Status::Fail
        };
        let verb = if expect_pass { "hold" } else { "fail" };
        let mut check = Check::new(format!("Kneser conditions {verb} for {name}"), status, details);
        if let Some(v) = &k.norm_minus_two {
            check = check.with_witness(json!({"norm_minus_two": v}));
        }
        report.push(check);
    }

    let l = catalog("L")?;
    let basis = lattice::standard_m_embedding();
    let m_image = lattice::restrict(&l, &basis, "M")?;
    let embedded = m_image.int_rows() == catalog("M")?.int_rows();
    let primitive = lattice::is_primitive_sublattice(&l, &basis)?;
    report.push(Check::expect(
        "M embeds primitively in L",
        embedded && primitive,
        format!("Gram of image equals M: {embedded}; primitive: {primitive}"),
    ));
    let complement = lattice::orthogonal_complement(&l, &basis)?;
    let same = lattice::same_genus_invariants(&complement, &a, DEFAULT_ORDER_BOUND)?;
    report.push(Check::expect(
        "complement of M in L has the genus invariants of A",
        same,
        format!("complement signature {}, det {}", lattice::signature(&complement)?, complement.determinant()),
    ));
    Ok(())
}

fn diag(values: &[Vec<BigRational>]) -> Vec<BigRational> {
    values.iter().enumerate().map(|(i, r)| r[i].clone()).collect()
}

/// The `index`-th sample of a family: the first candidate accepted by
/// `accept`, drawn from consecutive trial streams.
fn certified_sample<F>(seed: u64, index: u64, len: usize, accept: F) -> (Vec<BigRational>, u64)
where
    F: Fn(&[BigRational]) -> bool,
{
    (0u64..)
        .map(|k| {
            let mut rng = trial_rng(seed, (index << 20) + k);
            (sample_point(&mut rng, len, FIBER_SAMPLE_BOUND), k + 1)
        })
        .find(|(p, _)| accept(p))
        .expect("generic points are dense")
}

pub fn generic_fiber_sample(seed: u64, index: u64) -> (ParameterPoint, u64) {
    let (p, attempts) = certified_sample(seed, index, 5, |p| {
        ParameterPoint::new(p.to_vec()).is_ok_and(|t| GenericityCertificate::at(&t).is_generic())
    });
    (ParameterPoint::new(p).expect("nonzero"), attempts)
}

/// Sample with `t18 = 0`, certified by `gamma r0 d0 != 0` at the matching
/// point of the four-parameter family.
pub fn t18_zero_fiber_sample(seed: u64, index: u64) -> (ParameterPoint, u64) {
    let cd = families::cd_disc_factorization().ok();
    let (p, attempts) = certified_sample(seed, (1 << 40) + index, 4, |p| {
        let Some(f) = cd else { return false };
        let two = BigRational::from_integer(2.into());
        let three = BigRational::from_integer(3.into());
        let c = CdParameterPoint { alpha: -&p[0] / three, beta: -&p[1] / two, gamma: -p[2].clone(), delta: p[3].clone() };
        let v = c.coords();
        !c.gamma.is_zero()
            && !f.r0.evaluate(&v).expect("four coordinates").is_zero()
            && !f.d0.evaluate(&v).expect("four coordinates").is_zero()
    });
    let mut coords = p;
    coords.push(BigRational::zero());
    (ParameterPoint::new(coords).expect("nonzero"), attempts)
}

fn configuration(t: &ParameterPoint) -> Result<FiberConfiguration, families::FamilyError> {
    Ok(families::build_s(t)?.fiber_configuration_with(Execution::Sequential)?)
}

fn family_check(name: &str, expected: &str, samples: &[(ParameterPoint, Result<FiberConfiguration, families::FamilyError>)]) -> Check {
    let bad = samples.iter().find(|(_, c)| !c.as_ref().is_ok_and(|c| c.summary() == expected && c.total_euler == 24));
    match bad {
        None => Check::expect(name, true, format!("{} samples, all {expected}, Euler number 24", samples.len())),
        Some((t, c)) => {
            let got = match c {
                Ok(c) => c.to_string(),
                Err(e) => e.to_string(),
            };
            Check::expect(name, false, format!("{t}: {got}")).with_witness(json!({"t": strings(t.coords()), "got": got}))
        }
    }
}

pub fn fibers(opts: &VerifyOptions) -> CheckReport {
    let mut report = CheckReport::new("fibers", opts.seed);
    if let Some(t) = &opts.fiber_point {
        let cert = GenericityCertificate::at(t);
        let model = match families::build_s(t) {
            Ok(m) => m,
            Err(e) => {
                report.push(error_check("fiber configuration", e));
                return report;
            }
        };
        let minimal = model.minimalize();
        match minimal.fiber_configuration_with(opts.exec) {
            Ok(c) => {
                let fibers: Vec<String> =
                    c.fibers.iter().map(|f| format!("{} x{} at {}", f.kodaira, f.count, f.location)).collect();
                report.push(
                    Check::expect("fiber configuration", true, c.to_string())
                        .with_witness(json!({"summary": c.summary(), "euler": c.total_euler, "fibers": fibers})),
                );
                report.push(Check::expect("Euler number 24", c.total_euler == 24, format!("{}", c.total_euler)));
            }
            Err(e) => report.push(error_check("fiber configuration", e)),
        }
        report.push(Check::new(
            "genericity",
            if cert.is_generic() { Status::Pass } else { Status::Inconclusive },
            format!("t18 = {}, r = {}, d90 = {}", cert.t18, cert.r, cert.d90),
        ));
        return report;
    }

    let generic = opts.exec.map_range(GENERIC_FIBER_SAMPLES as usize, |i| {
        let (t, _) = generic_fiber_sample(opts.seed, i as u64);
        let c = configuration(&t);
        (t, c)
    });
    report.push(family_check("generic t: II* + IV* + 6 I1", "II* + IV* + 6 I1", &generic));

    let zero = opts.exec.map_range(T18_ZERO_FIBER_SAMPLES as usize, |i| {
        let (t, _) = t18_zero_fiber_sample(opts.seed, i as u64);
        let c = configuration(&t);
        (t, c)
    });
    report.push(family_check("t18 = 0: II* + III* + 5 I1", "II* + III* + 5 I1", &zero));

    for (label, name) in [("d90_root", "d90 root: exactly one I2"), ("r_root", "r root: a type II fiber")] {
        let check = match families::sample_point_named(label) {
            Ok(s) if s.verify() => match configuration(&s.point()) {
                Ok(c) => {
                    let ok = if label == "d90_root" {
                        s.certificate.d90.is_zero() && c.count_of(KodairaType::I(2)) == 1
                    } else {
                        s.certificate.r.is_zero() && c.count_of(KodairaType::II) >= 1
                    };
                    Check::expect(name, ok && c.total_euler == 24, format!("{}: {c}", s.point()))
                }
                Err(e) => error_check(name, e),
            },
            Ok(s) => Check::expect(name, false, format!("certificate of {} does not reproduce", s.label)),
            Err(e) => error_check(name, e),
        };
        report.push(check);
    }

    let not_k3 = ParameterPoint::from_ints([1, 1, 0, 0, 0]).expect("nonzero");
    let check = match families::build_s(&not_k3) {
        Ok(m) => {
            let local = m.local_valuations(&BasePoint::Finite(BigRational::zero()));
            let minimal = m.minimalize();
            let euler = minimal.fiber_configuration().map(|c| c.total_euler).unwrap_or(0);
            Check::expect(
                "t = (1,1,0,0,0) is not K3",
                !m.is_k3(),
                format!(
                    "orders at x0 = 0: ({}, {}, {}); minimal model has heights ({}, {}, {}) and Euler number {euler}",
                    local.g2,
                    local.g3,
                    local.disc,
                    minimal.heights().g2,
                    minimal.heights().g3,
                    minimal.heights().disc
                ),
            )
        }
        Err(e) => error_check("t = (1,1,0,0,0) is not K3", e),
    };
    report.push(check);
    report
}

pub fn cd(opts: &VerifyOptions) -> CheckReport {
    let mut report = CheckReport::new("cd", opts.seed);
    match families::cd_specialize_check() {
        Ok(c) => {
            let check = Check::expect(
                "chart change matches t = (-3a, -2b, -c, d, 0)",
                c.holds,
                format!("{} differing terms", c.witness.len()),
            );
            report.push(if c.holds { check } else { check.with_witness(json!(c.witness)) });
        }
        Err(e) => report.push(error_check("chart change matches t = (-3a, -2b, -c, d, 0)", e)),
    }
    match families::cd_specialize_check_with(CdSubstitution { t4: -2, ..CdSubstitution::STANDARD }) {
        Ok(c) => report.push(
            Check::expect("perturbed t4 = -2 alpha is rejected", !c.holds, format!("{} differing terms", c.witness.len()))
                .with_witness(json!(c.witness)),
        ),
        Err(e) => report.push(error_check("perturbed t4 = -2 alpha is rejected", e)),
    }
    match families::cd_spot_check(&CdParameterPoint::from_ints([1, 2, 3, 4])) {
        Ok(ok) => report.push(Check::expect("spot check at (1, 2, 3, 4)", ok, "both charts evaluated")),
        Err(e) => report.push(error_check("spot check at (1, 2, 3, 4)", e)),
    }
    match families::cd_disc_factorization() {
        Ok(f) => {
            report.constant("c'", &f.c_prime);
            report.constant("c_disc", &f.c_disc);
            report.push(Check::expect(
                "r0 weight 20",
                f.r0.is_weighted_homogeneous() && f.r0.weighted_degree() == Some(20),
                format!("r0 = {}", f.r0),
            ));
            let w = f.factor_weights();
            report.push(Check::expect(
                "res(R0, R0') = c' gamma^3 r0^3 d0",
                w == (30, 60, 60) && f.d0.is_weighted_homogeneous() && !f.c_prime.is_zero(),
                format!("weights {w:?}; d0 has {} terms; c' = {}", f.d0.len(), f.c_prime),
            ));
            report.push(Check::expect(
                "disc(R0) = c r0^3 d0",
                true,
                format!("normalized discriminant, c = {}", f.c_disc),
            ));
        }
        Err(e) => report.push(error_check("res(R0, R0') = c' gamma^3 r0^3 d0", e)),
    }
    report
}

pub fn irreducible(opts: &VerifyOptions) -> CheckReport {
    let mut report = CheckReport::new("irreducible", opts.seed);
    let cfg = families::IrreducibilityConfig { seed: opts.seed, ..Default::default() };
    let name = "d90 irreducible over Q";
    let check = match families::d90_irreducibility_certificate(&cfg, opts.exec) {
        Ok(families::IrreducibilityVerdict::CertifiedIrreducible { prime, specialization, trial }) => Check::expect(
            name,
            true,
            format!("specialization {trial} irreducible of degree 5 in t18 mod {prime}"),
        )
        .with_witness(json!({"prime": prime, "t4_t6_t10_t12": strings(&specialization)})),
        Ok(families::IrreducibilityVerdict::NotPrimitive { reason }) => Check::expect(name, false, reason),
        Ok(families::IrreducibilityVerdict::Inconclusive { trials }) => Check::new(
            name,
            Status::Inconclusive,
            format!("no witness in {trials} specializations x {} primes", cfg.primes.len()),
        ),
        Err(e) => error_check(name, e),
    };
    report.push(check);
    report
}

pub fn dims(opts: &VerifyOptions) -> CheckReport {
    let mut report = CheckReport::new("dims", opts.seed);
    let top = opts.max_weight.max(SERIES_CHECK_WEIGHT);
    let series = families::hilbert_series(top as usize);
    let mismatch = (0..=top).find(|&k| families::dim_forms(k, Character::Id) != series[k as usize]);
    report.push(Check::expect(
        "monomial counts = generating function",
        mismatch.is_none(),
        format!("weights 0..={top}; first mismatch {mismatch:?}"),
    ));
    let gens_ok = families::T_WEIGHTS.iter().all(|&w| families::dim_forms(w as u64, Character::Id) >= 1)
        && families::dim_forms(2, Character::Id) == 0;
    report.push(Check::expect("generator weights 4, 6, 10, 12, 18 occupied; weight 2 empty", gens_ok, ""));
    let det_ok = families::dim_forms(54, Character::Det) == 1 && families::dim_forms(53, Character::Det) == 0;
    report.push(Check::expect("det character starts at weight 54", det_ok, ""));
    for c in families::s54_square_identity_checks() {
        report.push(Check::expect(c.name, c.holds, ""));
    }
    let table: Vec<_> = (0..=opts.max_weight)
        .map(|k| json!([k, families::dim_forms(k, Character::Id), families::dim_forms(k, Character::Det)]))
        .collect();
    report.push(
        Check::expect("dimension table", true, format!("weights 0..={}: [weight, id, det]", opts.max_weight))
            .with_witness(json!(table)),
    );
    report
}
