//! The concrete families: `S(t)` over `P(4,6,10,12,18)`, its collision
//! locus `r^3 d90`, the four-parameter family in the `x1` chart, the Igusa
//! substitution, dimension counts of graded pieces, and an irreducibility
//! certificate for `d90`.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eliminate::{self, EliminateError, ResultantOptions};
use crate::par::Execution;
use crate::rng::{sample_point, trial_rng};
use crate::weierstrass::{Heights, WeierstrassError, WeierstrassModel};
use crate::wpoly::content::content_in_var;
use crate::wpoly::finite_field::{factor_mod_p, is_prime};
use crate::wpoly::{PolyError, QPoly, VariableTable, WeightedPolynomial};

pub const T_NAMES: [&str; 5] = ["t4", "t6", "t10", "t12", "t18"];
pub const T_WEIGHTS: [u32; 5] = [4, 6, 10, 12, 18];
pub const CD_NAMES: [&str; 4] = ["alpha", "beta", "gamma", "delta"];
pub const CD_WEIGHTS: [u32; 4] = [4, 6, 10, 12];

pub const PRINTED_D90: &str = include_str!("../data/d90.poly");
pub const PRINTED_R: &str = include_str!("../data/r.poly");
pub const SAMPLE_POINTS_JSON: &str = include_str!("../data/sample_points.json");

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Eliminate(#[from] EliminateError),
    #[error(transparent)]
    Weierstrass(#[from] WeierstrassError),
    #[error("parameter point is zero")]
    ZeroPoint,
    #[error("expected {expected} coordinates, got {got}")]
    WrongArity { expected: usize, got: usize },
    #[error("{what}: derivation and printed form differ in {} terms: {}", .terms.len(), .terms.join(", "))]
    ConsistencyFailure { what: &'static str, terms: Vec<String> },
    #[error("sample point data: {0}")]
    Data(String),
}

pub fn parameter_table() -> VariableTable {
    static T: OnceLock<VariableTable> = OnceLock::new();
    T.get_or_init(|| VariableTable::new(&T_NAMES, &T_WEIGHTS).expect("valid table")).clone()
}

/// `x0` of weight 6 followed by the parameters; `S(t)` is homogeneous here.
pub fn model_table() -> VariableTable {
    static T: OnceLock<VariableTable> = OnceLock::new();
    T.get_or_init(|| {
        let names: Vec<&str> = std::iter::once("x0").chain(T_NAMES).collect();
        let weights: Vec<u32> = std::iter::once(6).chain(T_WEIGHTS).collect();
        VariableTable::new(&names, &weights).expect("valid table")
    })
    .clone()
}

pub fn cd_parameter_table() -> VariableTable {
    static T: OnceLock<VariableTable> = OnceLock::new();
    T.get_or_init(|| VariableTable::new(&CD_NAMES, &CD_WEIGHTS).expect("valid table")).clone()
}

fn cd_chart_table(var: &str, weight: u32) -> VariableTable {
    let names: Vec<&str> = std::iter::once(var).chain(CD_NAMES).collect();
    let weights: Vec<u32> = std::iter::once(weight).chain(CD_WEIGHTS).collect();
    VariableTable::new(&names, &weights).expect("valid table")
}

/// `x1` followed by the CD parameters. The family is not homogeneous in
/// this chart for any positive weight of `x1`, so `x1` gets weight 1.
pub fn cd_model_table() -> VariableTable {
    static T: OnceLock<VariableTable> = OnceLock::new();
    T.get_or_init(|| cd_chart_table("x1", 1)).clone()
}

fn int(table: &VariableTable, c: i64) -> WeightedPolynomial {
    WeightedPolynomial::from_int(table, c)
}

fn var(table: &VariableTable, name: &str) -> WeightedPolynomial {
    WeightedPolynomial::var(table, name).expect("variable in table")
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn parse_on(text: &str, table: &VariableTable) -> Result<WeightedPolynomial, PolyError> {
    WeightedPolynomial::parse(text.trim(), table)
}

/// Sum of `c * x^k * m` for `(c, k, m)` with `m` a product of table
/// variables.
fn build(table: &VariableTable, x: &str, terms: &[(i64, u32, &[&str])]) -> WeightedPolynomial {
    let xv = var(table, x);
    let mut acc = WeightedPolynomial::zero(table);
    for &(c, k, m) in terms {
        let mut t = int(table, c).try_mul(&xv.pow(k).expect("small power")).expect("same table");
        for v in m {
            t = t.try_mul(&var(table, v)).expect("same table");
        }
        acc = acc.try_add(&t).expect("same table");
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParameterPoint {
    coords: Vec<BigRational>,
}

impl ParameterPoint {
    pub fn new(coords: Vec<BigRational>) -> Result<Self, FamilyError> {
        if coords.len() != 5 {
            return Err(FamilyError::WrongArity { expected: 5, got: coords.len() });
        }
        if coords.iter().all(Zero::is_zero) {
            return Err(FamilyError::ZeroPoint);
        }
        Ok(ParameterPoint { coords })
    }

    pub fn from_ints(v: [i64; 5]) -> Result<Self, FamilyError> {
        Self::new(v.iter().map(|&x| q(x)).collect())
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn t(&self, i: usize) -> &BigRational {
        &self.coords[i]
    }

    /// Action of `λ` on `P(4,6,10,12,18)`.
    pub fn scaled(&self, lambda: &BigRational) -> ParameterPoint {
        let coords = self.coords.iter().zip(T_WEIGHTS).map(|(c, w)| c * num_traits::pow(lambda.clone(), w as usize)).collect();
        ParameterPoint { coords }
    }
}

impl std::fmt::Display for ParameterPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CdParameterPoint {
    pub alpha: BigRational,
    pub beta: BigRational,
    pub gamma: BigRational,
    pub delta: BigRational,
}

impl CdParameterPoint {
    pub fn from_ints(v: [i64; 4]) -> Self {
        CdParameterPoint { alpha: q(v[0]), beta: q(v[1]), gamma: q(v[2]), delta: q(v[3]) }
    }

    pub fn is_zero(&self) -> bool {
        self.coords().iter().all(|c| c.is_zero())
    }

    pub fn coords(&self) -> [BigRational; 4] {
        [self.alpha.clone(), self.beta.clone(), self.gamma.clone(), self.delta.clone()]
    }

    /// The point of the five-parameter family with `t18 = 0`.
    pub fn to_parameter_point(&self) -> Result<ParameterPoint, FamilyError> {
        ParameterPoint::new(vec![
            -q(3) * &self.alpha,
            -q(2) * &self.beta,
            -self.gamma.clone(),
            self.delta.clone(),
            BigRational::zero(),
        ])
    }
}

/// `g2, g3` with coefficients in the parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicModel {
    pub var: &'static str,
    pub g2: WeightedPolynomial,
    pub g3: WeightedPolynomial,
}

impl SymbolicModel {
    /// `Δ = 4 g2^3 + 27 g3^2`.
    pub fn discriminant(&self) -> WeightedPolynomial {
        let t = self.g2.table();
        let a = int(t, 4).try_mul(&self.g2.pow(3).expect("small")).expect("same table");
        let b = int(t, 27).try_mul(&self.g3.pow(2).expect("small")).expect("same table");
        a.try_add(&b).expect("same table")
    }

    /// Specializes the parameters, in table order after the base variable.
    pub fn at(&self, params: &[BigRational], heights: Heights) -> Result<WeierstrassModel, FamilyError> {
        let names = self.g2.table().names().to_vec();
        let spec = |p: &WeightedPolynomial| -> Result<QPoly, FamilyError> {
            let mut p = p.clone();
            for (name, v) in names.iter().skip(1).zip(params) {
                p = p.specialize(name, v)?;
            }
            Ok(p.to_qpoly(self.var)?.expect("only the base variable remains"))
        };
        Ok(WeierstrassModel::new(spec(&self.g2)?, spec(&self.g3)?, heights)?)
    }
}

/// `g2 = t4 x0^4 + t10 x0^3`, `g3 = x0^7 + t6 x0^6 + t12 x0^5 + t18 x0^4`.
pub fn build_s_symbolic() -> SymbolicModel {
    let t = model_table();
    let g2 = build(&t, "x0", &[(1, 4, &["t4"]), (1, 3, &["t10"])]);
    let g3 = build(&t, "x0", &[(1, 7, &[]), (1, 6, &["t6"]), (1, 5, &["t12"]), (1, 4, &["t18"])]);
    SymbolicModel { var: "x0", g2, g3 }
}

pub fn build_s(t: &ParameterPoint) -> Result<WeierstrassModel, FamilyError> {
    build_s_symbolic().at(t.coords(), Heights::K3)
}

/// `R = (4 g2^3 + 27 g3^2) / x0^8`, of degree 6 in `x0`.
pub fn reduced_discriminant() -> WeightedPolynomial {
    let s = build_s_symbolic();
    let x8 = var(&model_table(), "x0").pow(8).expect("small");
    s.discriminant().exact_divide(&x8).expect("x0^8 divides the discriminant")
}

/// `R` at a point, as a polynomial in `x0`.
pub fn reduced_discriminant_at(t: &ParameterPoint) -> QPoly {
    let c = t.coords();
    let x = |k: u32| -> QPoly {
        let mut v = vec![BigRational::zero(); k as usize + 1];
        v[k as usize] = BigRational::one();
        QPoly::new(v)
    };
    let lin = QPoly::new(vec![c[2].clone(), c[0].clone()]);
    let cub = QPoly::new(vec![c[4].clone(), c[3].clone(), c[1].clone(), BigRational::one()]);
    lin.pow(3).mul(&x(1)).scale(&q(4)).add(&cub.pow(2).scale(&q(27)))
}

fn drop_base(p: &WeightedPolynomial, target: &VariableTable) -> Result<WeightedPolynomial, PolyError> {
    let base = &p.table().names()[0];
    if p.degree_in(base)?.unwrap_or(0) > 0 {
        return Err(PolyError::InvalidTable(format!("{base} still occurs")));
    }
    WeightedPolynomial::from_terms(target, p.terms().map(|(e, c)| (e[1..].to_vec(), c.clone())))
}

/// `r(t)`, the resultant in `x0` of `g2 / x0^3 = t4 x0 + t10` and
/// `g3 / x0^4`, taken with the cubic first so the `t10^3` coefficient is 1.
pub fn r_poly() -> Result<WeightedPolynomial, FamilyError> {
    let s = build_s_symbolic();
    let t = model_table();
    let x = var(&t, "x0");
    let g2v = s.g2.exact_divide(&x.pow(3)?)?;
    let g3v = s.g3.exact_divide(&x.pow(4)?)?;
    let r = eliminate::resultant(&g3v, &g2v, "x0")?;
    Ok(drop_base(&r, &parameter_table())?)
}

pub fn printed_r() -> WeightedPolynomial {
    parse_on(PRINTED_R, &parameter_table()).expect("bundled r parses")
}

pub fn printed_d90() -> WeightedPolynomial {
    parse_on(PRINTED_D90, &parameter_table()).expect("bundled d90 parses")
}

/// `Δ_T = t18 d90`.
pub fn delta_t_poly() -> WeightedPolynomial {
    let t = parameter_table();
    var(&t, "t18").try_mul(&printed_d90()).expect("same table")
}

/// Divides by the rational content and makes the leading term positive.
pub fn primitive_part(p: &WeightedPolynomial) -> (BigRational, WeightedPolynomial) {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for (_, c) in p.terms() {
        num = num.gcd(c.numer());
        den = den.lcm(c.denom());
    }
    if num.is_zero() {
        return (BigRational::one(), p.clone());
    }
    let mut content = BigRational::new(num, den);
    if p.leading_coefficient().is_some_and(|c| c.is_negative()) {
        content = -content;
    }
    (content.clone(), p.scale(&content.recip()))
}

/// Human-readable term differences between a derived and a printed
/// polynomial.
pub fn term_diff(derived: &WeightedPolynomial, printed: &WeightedPolynomial) -> Result<Vec<String>, PolyError> {
    Ok(derived
        .diff_terms(printed)?
        .into_iter()
        .map(|(m, a, b)| format!("{m}: derived {a}, printed {b}"))
        .collect())
}

/// `disc_{x0}(R)` with its factorization `c r^3 d90`.
#[derive(Clone, Debug)]
pub struct DiscFactorization {
    pub disc: WeightedPolynomial,
    pub r: WeightedPolynomial,
    /// Primitive integral quotient `disc / r^3`, leading term positive.
    pub d90: WeightedPolynomial,
    pub c: BigRational,
}

pub fn derive_disc_factorization(opts: ResultantOptions) -> Result<DiscFactorization, FamilyError> {
    let disc = eliminate::discriminant_with(&reduced_discriminant(), "x0", opts)?;
    let disc = drop_base(&disc, &parameter_table())?;
    let r = r_poly()?;
    let quotient = disc.exact_divide(&r.pow(3)?)?;
    let (c, d90) = primitive_part(&quotient);
    Ok(DiscFactorization { disc, r, d90, c })
}

/// Shared, computed once per process with the default options.
pub fn disc_factorization() -> Result<&'static DiscFactorization, FamilyError> {
    static F: OnceLock<Result<DiscFactorization, FamilyError>> = OnceLock::new();
    F.get_or_init(|| derive_disc_factorization(ResultantOptions::default())).as_ref().map_err(Clone::clone)
}

/// `r` derived and checked against the printed four-term form.
pub fn checked_r_poly() -> Result<WeightedPolynomial, FamilyError> {
    let r = r_poly()?;
    let diff = term_diff(&r, &printed_r())?;
    if !diff.is_empty() {
        return Err(FamilyError::ConsistencyFailure { what: "r", terms: diff });
    }
    Ok(r)
}

/// `d90` derived by exact division and checked term by term against the
/// bundled printed form.
pub fn d90_poly() -> Result<WeightedPolynomial, FamilyError> {
    let f = disc_factorization()?;
    let diff = term_diff(&f.d90, &printed_d90())?;
    if !diff.is_empty() {
        return Err(FamilyError::ConsistencyFailure { what: "d90", terms: diff });
    }
    Ok(f.d90.clone())
}

/// Values of `t18`, `r`, `d90` at a point; the point is generic when all
/// three are nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenericityCertificate {
    #[serde(with = "rational_text")]
    pub t18: BigRational,
    #[serde(with = "rational_text")]
    pub r: BigRational,
    #[serde(with = "rational_text")]
    pub d90: BigRational,
}

mod rational_text {
    use num_rational::BigRational;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        String::deserialize(d)?.parse().map_err(D::Error::custom)
    }
}

impl GenericityCertificate {
    pub fn at(t: &ParameterPoint) -> Self {
        GenericityCertificate {
            t18: t.t(4).clone(),
            r: printed_r().evaluate(t.coords()).expect("five coordinates"),
            d90: printed_d90().evaluate(t.coords()).expect("five coordinates"),
        }
    }

    pub fn is_generic(&self) -> bool {
        !(self.t18.is_zero() || self.r.is_zero() || self.d90.is_zero())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SamplePoint {
    pub label: String,
    pub t: [i64; 5],
    pub note: String,
    pub certificate: GenericityCertificate,
}

impl SamplePoint {
    pub fn point(&self) -> ParameterPoint {
        ParameterPoint::from_ints(self.t).expect("bundled points are nonzero")
    }

    /// Re-evaluates the certificate.
    pub fn verify(&self) -> bool {
        GenericityCertificate::at(&self.point()) == self.certificate
    }
}

pub fn sample_points() -> Result<Vec<SamplePoint>, FamilyError> {
    serde_json::from_str(SAMPLE_POINTS_JSON).map_err(|e| FamilyError::Data(e.to_string()))
}

pub fn sample_point_named(label: &str) -> Result<SamplePoint, FamilyError> {
    sample_points()?
        .into_iter()
        .find(|s| s.label == label)
        .ok_or_else(|| FamilyError::Data(format!("no sample point `{label}`")))
}

/// `disc_{x0}(R(t)) / (r^3 d90)(t)` at a generic point.
pub fn fit_constant_at(t: &ParameterPoint) -> Result<BigRational, FamilyError> {
    let cert = GenericityCertificate::at(t);
    if !cert.is_generic() {
        return Err(FamilyError::Data(format!("{t} is not generic")));
    }
    let disc = eliminate::discriminant_q(&reduced_discriminant_at(t))?;
    Ok(disc / (num_traits::pow(cert.r, 3) * cert.d90))
}

/// Randomized check of `disc_{x0}(R) = c r^3 d90` against the printed
/// `d90`, with `c` fitted at the bundled generic point.
pub fn disc_factor_pit(
    cfg: &eliminate::PitConfig,
    exec: Execution,
) -> Result<(BigRational, eliminate::PitVerdict), FamilyError> {
    let c = fit_constant_at(&sample_point_named("generic")?.point())?;
    let r = printed_r();
    let d90 = printed_d90();
    // Coefficients of R have degree at most 3 in t, so disc(R) has degree
    // at most 3 * (2 * 6 - 2); r^3 d90 has degree 9 + 15.
    let degree = (3 * 10).max(3 * r.total_degree().unwrap_or(0) + d90.total_degree().unwrap_or(0));
    let verdict = eliminate::pit_zero_by(5, degree, cfg, exec, |pt| {
        let t = ParameterPoint { coords: pt.to_vec() };
        let disc = eliminate::discriminant_q(&reduced_discriminant_at(&t)).expect("degree 6");
        let rv = r.evaluate(pt).expect("five coordinates");
        disc - &c * num_traits::pow(rv, 3) * d90.evaluate(pt).expect("five coordinates")
    })?;
    Ok((c, verdict))
}

/// Exact check of `disc_{x0}(R) = c r^3 d90` with the printed `d90`;
/// returns `c` and the differing terms.
pub fn disc_factor_symbolic() -> Result<(BigRational, Vec<String>), FamilyError> {
    let f = disc_factorization()?;
    let c = fit_constant_at(&sample_point_named("generic")?.point())?;
    let rhs = f.r.pow(3)?.try_mul(&printed_d90())?.scale(&c);
    Ok((c, term_diff(&f.disc, &rhs)?))
}

// Four-parameter family.

/// `g2 = -3 alpha x1^4 - gamma x1^5`, `g3 = x1^5 - 2 beta x1^6 + delta x1^7`.
pub fn build_scd_symbolic() -> SymbolicModel {
    let t = cd_model_table();
    let g2 = build(&t, "x1", &[(-3, 4, &["alpha"]), (-1, 5, &["gamma"])]);
    let g3 = build(&t, "x1", &[(1, 5, &[]), (-2, 6, &["beta"]), (1, 7, &["delta"])]);
    SymbolicModel { var: "x1", g2, g3 }
}

pub fn build_scd(p: &CdParameterPoint) -> Result<WeierstrassModel, FamilyError> {
    if p.is_zero() {
        return Err(FamilyError::ZeroPoint);
    }
    build_scd_symbolic().at(&p.coords(), Heights::K3)
}

/// `R0 = (4 g2^3 + 27 g3^2) / x1^10`, a quintic in `x1`.
pub fn cd_reduced_discriminant() -> WeightedPolynomial {
    let s = build_scd_symbolic();
    let x10 = var(&cd_model_table(), "x1").pow(10).expect("small");
    s.discriminant().exact_divide(&x10).expect("x1^10 divides the discriminant")
}

/// `res(R0, R0') = c' gamma^3 r0^3 d0` together with the normalized
/// discriminant, which loses the `gamma^3 = lc(R0) / -4` factor.
#[derive(Clone, Debug)]
pub struct CdFactorization {
    pub resultant: WeightedPolynomial,
    pub discriminant: WeightedPolynomial,
    pub r0: WeightedPolynomial,
    pub d0: WeightedPolynomial,
    pub c_prime: BigRational,
    /// `discriminant = c_disc r0^3 d0`.
    pub c_disc: BigRational,
}

impl CdFactorization {
    /// Weighted degrees of `gamma^3`, `r0^3`, `d0`.
    pub fn factor_weights(&self) -> (u32, u32, u32) {
        let w = |p: &WeightedPolynomial| p.weighted_degree().unwrap_or(0);
        (3 * CD_WEIGHTS[2], 3 * w(&self.r0), w(&self.d0))
    }
}

/// `r0`: resultant of `G2 / x1^4` and `G3 / x1^5` for the classical form
/// `y^3 - G2 y - G3`; equals `-(9 alpha^2 delta + 6 alpha beta gamma + gamma^2)`.
pub fn r0_poly() -> Result<WeightedPolynomial, FamilyError> {
    let s = build_scd_symbolic();
    let t = cd_model_table();
    let x = var(&t, "x1");
    let m = -BigRational::one();
    let g2 = s.g2.scale(&m).exact_divide(&x.pow(4)?)?;
    let g3 = s.g3.scale(&m).exact_divide(&x.pow(5)?)?;
    Ok(drop_base(&eliminate::resultant(&g2, &g3, "x1")?, &cd_parameter_table())?)
}

pub fn derive_cd_factorization(opts: ResultantOptions) -> Result<CdFactorization, FamilyError> {
    let r0_big = cd_reduced_discriminant();
    let deriv = r0_big.derivative("x1")?;
    let pt = cd_parameter_table();
    let resultant = drop_base(&eliminate::resultant_with(&r0_big, &deriv, "x1", opts)?, &pt)?;
    let discriminant = drop_base(&eliminate::discriminant_with(&r0_big, "x1", opts)?, &pt)?;
    let r0 = r0_poly()?;
    let r0_cubed = r0.pow(3)?;
    let gamma3 = var(&pt, "gamma").pow(3)?;
    let quotient = resultant.exact_divide(&gamma3.try_mul(&r0_cubed)?)?;
    let (c_prime, d0) = primitive_part(&quotient);
    let rest = discriminant.exact_divide(&r0_cubed)?;
    let (c_disc, d0_again) = primitive_part(&rest);
    if d0_again != d0 {
        return Err(FamilyError::ConsistencyFailure {
            what: "d0 from the normalized discriminant",
            terms: term_diff(&d0_again, &d0)?,
        });
    }
    Ok(CdFactorization { resultant, discriminant, r0, d0, c_prime, c_disc })
}

pub fn cd_disc_factorization() -> Result<&'static CdFactorization, FamilyError> {
    static F: OnceLock<Result<CdFactorization, FamilyError>> = OnceLock::new();
    F.get_or_init(|| derive_cd_factorization(ResultantOptions::default())).as_ref().map_err(Clone::clone)
}

/// Multipliers in `t4 = a alpha, t6 = b beta, t10 = c gamma, t12 = d delta`,
/// `t18 = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CdSubstitution {
    pub t4: i64,
    pub t6: i64,
    pub t10: i64,
    pub t12: i64,
}

impl CdSubstitution {
    pub const STANDARD: CdSubstitution = CdSubstitution { t4: -3, t6: -2, t10: -1, t12: 1 };
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecializeCheck {
    pub holds: bool,
    /// Differing terms of `g2` and `g3`, in the `x0` chart.
    pub witness: Vec<String>,
}

/// Moves the four-parameter family to the `x0 = 1/x1` chart and compares
/// it with `S(t)` under the substitution, exactly.
pub fn cd_specialize_check_with(sub: CdSubstitution) -> Result<SpecializeCheck, FamilyError> {
    let target = cd_chart_table("x0", 6);
    let cd = build_scd_symbolic();
    let swap = |p: &WeightedPolynomial, n: u32| -> Result<WeightedPolynomial, PolyError> {
        let r = p.reciprocal("x1", n)?;
        WeightedPolynomial::from_terms(&target, r.terms().map(|(e, c)| (e, c.clone())))
    };
    let (g2_cd, g3_cd) = (swap(&cd.g2, 8)?, swap(&cd.g3, 12)?);
    let s = build_s_symbolic();
    let scaled = |k: i64, v: &str| int(&target, k).try_mul(&var(&target, v)).expect("same table");
    let assign = [
        ("t4", scaled(sub.t4, "alpha")),
        ("t6", scaled(sub.t6, "beta")),
        ("t10", scaled(sub.t10, "gamma")),
        ("t12", scaled(sub.t12, "delta")),
        ("t18", WeightedPolynomial::zero(&target)),
    ];
    let g2_s = s.g2.substitute(&assign, &target)?;
    let g3_s = s.g3.substitute(&assign, &target)?;
    let mut witness: Vec<String> = term_diff(&g2_cd, &g2_s)?.into_iter().map(|d| format!("g2 {d}")).collect();
    witness.extend(term_diff(&g3_cd, &g3_s)?.into_iter().map(|d| format!("g3 {d}")));
    Ok(SpecializeCheck { holds: witness.is_empty(), witness })
}

pub fn cd_specialize_check() -> Result<SpecializeCheck, FamilyError> {
    cd_specialize_check_with(CdSubstitution::STANDARD)
}

/// Numeric form of the chart comparison at one point.
pub fn cd_spot_check(p: &CdParameterPoint) -> Result<bool, FamilyError> {
    let cd = build_scd(p)?.chart_swap();
    let s = build_s(&p.to_parameter_point()?)?;
    Ok(cd.g2() == s.g2() && cd.g3() == s.g3())
}

/// `alpha = I4/9`, `beta = (-I2 I4 + 3 I6)/27`, `gamma = 8 I10`,
/// `delta = 2/3 I2 I10`.
pub fn igusa_to_cd(i2: &BigRational, i4: &BigRational, i6: &BigRational, i10: &BigRational) -> CdParameterPoint {
    CdParameterPoint {
        alpha: i4 / q(9),
        beta: (-(i2 * i4) + q(3) * i6) / q(27),
        gamma: q(8) * i10,
        delta: BigRational::new(2.into(), 3.into()) * i2 * i10,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Character {
    Id,
    Det,
}

/// Weight of the form whose square is `t18 d90`.
pub const DET_FORM_WEIGHT: u64 = 54;

fn count_monomials(k: u64, weights: &[u32]) -> u64 {
    match weights.split_first() {
        None => u64::from(k == 0),
        Some((&w, rest)) => (0..=k / w as u64).map(|e| count_monomials(k - e * w as u64, rest)).sum(),
    }
}

/// Dimension of the weight-`k` piece: monomials in `t4..t18` for the trivial
/// character, shifted by the weight-54 form for `det`.
pub fn dim_forms(k: u64, character: Character) -> u64 {
    match character {
        Character::Id => count_monomials(k, &T_WEIGHTS),
        Character::Det => k.checked_sub(DET_FORM_WEIGHT).map_or(0, |j| count_monomials(j, &T_WEIGHTS)),
    }
}

/// Coefficients of `prod 1 / (1 - q^w)` up to `q^max`.
pub fn hilbert_series(max: usize) -> Vec<u64> {
    let mut series = vec![0u64; max + 1];
    series[0] = 1;
    for &w in &T_WEIGHTS {
        let w = w as usize;
        for k in w..=max {
            series[k] += series[k - w];
        }
    }
    series
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrreducibilityConfig {
    pub specializations: u64,
    pub primes: Vec<u64>,
    pub seed: u64,
    pub sample_bound: u64,
}

impl Default for IrreducibilityConfig {
    /// 64 specializations and the 16 primes from 5 to 61.
    fn default() -> Self {
        IrreducibilityConfig {
            specializations: 64,
            primes: (5..=61).filter(|&p| is_prime(p)).collect(),
            seed: 0,
            sample_bound: 1000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IrreducibilityVerdict {
    CertifiedIrreducible { prime: u64, specialization: Vec<BigRational>, trial: u64 },
    NotPrimitive { reason: String },
    Inconclusive { trials: u64 },
}

/// Certifies irreducibility over Q of `p`, viewed in `var`. Once `p` is
/// primitive in `var`, every proper factor has positive degree in `var`. A
/// specialization of the other variables that keeps the degree keeps the
/// factors proper, and so does reduction mod a prime not dividing the
/// leading coefficient. One specialization irreducible mod one prime
/// therefore rules out any factorization.
pub fn irreducibility_certificate(
    p: &WeightedPolynomial,
    var: &str,
    cfg: &IrreducibilityConfig,
    exec: Execution,
) -> Result<IrreducibilityVerdict, FamilyError> {
    let content = content_in_var(p, var)?;
    if !content.is_trivial() {
        let reason = if content.certified {
            format!("content in {var} is {}", content.gcd)
        } else {
            format!("content in {var} not certified")
        };
        return Ok(IrreducibilityVerdict::NotPrimitive { reason });
    }
    let mono = p.monomial_content();
    if mono.iter().any(|&e| e > 0) && p.len() > 1 {
        let names = p.table().names();
        let factors: Vec<String> =
            mono.iter().enumerate().filter(|(_, e)| **e > 0).map(|(i, e)| format!("{}^{e}", names[i])).collect();
        return Ok(IrreducibilityVerdict::NotPrimitive { reason: format!("monomial factor {}", factors.join("*")) });
    }
    let degree = p.degree_in(var)?.unwrap_or(0) as usize;
    let others: Vec<String> = p.table().names().iter().filter(|n| *n != var).cloned().collect();
    let primes: Vec<u64> = cfg.primes.iter().copied().filter(|&q| is_prime(q)).collect();
    let hit = exec.find_first(cfg.specializations as usize, |i| {
        let mut rng = trial_rng(cfg.seed, i as u64);
        let point = sample_point(&mut rng, others.len(), cfg.sample_bound);
        let mut s = p.clone();
        for (name, v) in others.iter().zip(&point) {
            s = s.specialize(name, v).expect("variable in table");
        }
        let u = s.to_qpoly(var).expect("variable in table").expect("univariate");
        if u.degree() != Some(degree) {
            return None;
        }
        let ints = u.primitive_integer();
        primes.iter().find_map(|&prime| {
            let f = factor_mod_p(&ints, prime).ok()?;
            (f.is_irreducible() && f.factors[0].0.degree() == Some(degree)).then(|| (prime, point.clone()))
        })
    });
    Ok(match hit {
        Some((trial, (prime, specialization))) => {
            IrreducibilityVerdict::CertifiedIrreducible { prime, specialization, trial: trial as u64 }
        }
        None => IrreducibilityVerdict::Inconclusive { trials: cfg.specializations },
    })
}

pub fn d90_irreducibility_certificate(
    cfg: &IrreducibilityConfig,
    exec: Execution,
) -> Result<IrreducibilityVerdict, FamilyError> {
    irreducibility_certificate(&printed_d90(), "t18", cfg, exec)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: String,
    pub holds: bool,
}

/// Weight bookkeeping of `s54^2 = t18 d90`, with `s9^2 = t18` and
/// `s45^2 = d90`, and the canonical-bundle equation `-50 + d/2 = 4`.
pub fn s54_square_identity_checks() -> Vec<IdentityCheck> {
    let pt = parameter_table();
    let d90 = printed_d90();
    let delta = delta_t_poly();
    let t18 = var(&pt, "t18");
    let wd = |p: &WeightedPolynomial| p.weighted_degree().unwrap_or(0) as u64;
    let sum_weights: u64 = T_WEIGHTS.iter().map(|&w| w as u64).sum();
    let d = 2 * (4 + sum_weights);
    let mut out = vec![
        ("delta_t homogeneous of weight 108", delta.is_weighted_homogeneous() && wd(&delta) == 108),
        ("delta_t / t18 = d90", delta.exact_divide(&t18).is_ok_and(|x| x == d90)),
        ("t18 does not divide d90", d90.specialize("t18", &BigRational::zero()).is_ok_and(|x| !x.is_zero())),
        ("108 = 2 * 54", wd(&delta) == 2 * DET_FORM_WEIGHT),
        ("18 = 2 * 9", wd(&t18) == 2 * 9),
        ("90 = 2 * 45", wd(&d90) == 2 * 45),
        ("108 = 18 + 90", wd(&delta) == wd(&t18) + wd(&d90)),
        ("54 = 9 + 45", DET_FORM_WEIGHT == 9 + 45),
        ("-50 + d/2 = 4 gives d = 108", sum_weights == 50 && d == wd(&delta)),
    ];
    out.drain(..).map(|(name, holds)| IdentityCheck { name: name.to_string(), holds }).collect()
}

pub fn s54_square_identity() -> bool {
    s54_square_identity_checks().iter().all(|c| c.holds)
}

pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_s_at_unit_point() {
        let m = build_s(&ParameterPoint::from_ints([1, 0, 0, 0, 0]).unwrap()).unwrap();
        assert_eq!(m.g2(), &QPoly::from_ints(&[0, 0, 0, 0, 1]));
        assert_eq!(m.g3(), &QPoly::from_ints(&[0, 0, 0, 0, 0, 0, 0, 1]));
    }

    #[test]
    fn symbolic_model_commutes_with_evaluation() {
        let t = ParameterPoint::from_ints([1, 1, 1, 1, 1]).unwrap();
        let s = build_s_symbolic();
        assert_eq!(s.at(t.coords(), Heights::K3).unwrap(), build_s(&t).unwrap());
        assert!(s.g2.is_weighted_homogeneous() && s.g3.is_weighted_homogeneous());
    }

    #[test]
    fn reduced_discriminant_matches_numeric() {
        let big = reduced_discriminant();
        assert_eq!(big.degree_in("x0").unwrap(), Some(6));
        let t = ParameterPoint::from_ints([2, -1, 3, 5, -7]).unwrap();
        let mut p = big.clone();
        for (name, v) in T_NAMES.iter().zip(t.coords()) {
            p = p.specialize(name, v).unwrap();
        }
        assert_eq!(p.to_qpoly("x0").unwrap().unwrap(), reduced_discriminant_at(&t));
    }

    #[test]
    fn r_matches_printed() {
        assert_eq!(checked_r_poly().unwrap(), printed_r());
        assert_eq!(printed_r().weighted_degree(), Some(30));
    }

    #[test]
    fn printed_d90_shape() {
        let d = printed_d90();
        assert_eq!(d.len(), 102);
        assert!(d.is_weighted_homogeneous());
        assert_eq!(d.weighted_degree(), Some(90));
        let c = |e: [u32; 5]| d.coefficient(&e);
        assert_eq!(c([0, 6, 0, 0, 3]), q(314928));
        assert_eq!(c([0, 0, 9, 0, 0]), q(3125));
        assert_eq!(c([0, 0, 0, 0, 5]), q(14348907));
    }

    #[test]
    fn d90_root_sample_point() {
        let s = sample_point_named("d90_root").unwrap();
        assert!(s.verify());
        assert!(s.certificate.d90.is_zero());
        // 5^5 t10^9 + 3^15 t18^5 on t4 = t6 = t12 = 0.
        let d = printed_d90().specialize("t4", &q(0)).unwrap();
        let d = d.specialize("t6", &q(0)).unwrap().specialize("t12", &q(0)).unwrap();
        assert_eq!(d, parse_on("3125*t10^9 + 14348907*t18^5", &parameter_table()).unwrap());
    }

    #[test]
    fn bundled_certificates_reproduce() {
        for s in sample_points().unwrap() {
            assert!(s.verify(), "{}", s.label);
        }
        assert!(sample_point_named("generic").unwrap().certificate.is_generic());
    }

    #[test]
    fn igusa_examples() {
        let z = q(0);
        let a = igusa_to_cd(&z, &q(9), &z, &z);
        assert_eq!(a, CdParameterPoint::from_ints([1, 0, 0, 0]));
        assert!(igusa_to_cd(&z, &z, &z, &z).is_zero());
        let b = igusa_to_cd(&q(3), &z, &z, &q(1));
        assert_eq!((b.gamma, b.delta), (q(8), q(2)));
    }

    #[test]
    fn dimension_counts() {
        assert_eq!(dim_forms(4, Character::Id), 1);
        assert_eq!(dim_forms(2, Character::Id), 0);
        assert_eq!(dim_forms(0, Character::Id), 1);
        assert_eq!(dim_forms(54, Character::Det), 1);
        assert_eq!(dim_forms(53, Character::Det), 0);
        let series = hilbert_series(200);
        for (k, &s) in series.iter().enumerate() {
            assert_eq!(dim_forms(k as u64, Character::Id), s, "weight {k}");
        }
    }

    #[test]
    fn chart_change_identity() {
        assert!(cd_specialize_check().unwrap().holds);
        let bad = cd_specialize_check_with(CdSubstitution { t4: -2, ..CdSubstitution::STANDARD }).unwrap();
        assert!(!bad.holds);
        assert!(bad.witness.iter().any(|w| w.contains("alpha")));
        assert!(cd_spot_check(&CdParameterPoint::from_ints([1, 2, 3, 4])).unwrap());
    }

    #[test]
    fn r0_form() {
        let r0 = r0_poly().unwrap();
        let expected = parse_on("-9*alpha^2*delta - 6*alpha*beta*gamma - gamma^2", &cd_parameter_table()).unwrap();
        assert_eq!(r0, expected);
        assert_eq!(cd_reduced_discriminant().degree_in("x1").unwrap(), Some(5));
    }

    #[test]
    fn s54_bookkeeping() {
        for c in s54_square_identity_checks() {
            assert!(c.holds, "{}", c.name);
        }
    }

    #[test]
    fn reducible_stand_in_not_certified() {
        let v = irreducibility_certificate(&delta_t_poly(), "t18", &IrreducibilityConfig::default(), Execution::Sequential)
            .unwrap();
        assert!(matches!(v, IrreducibilityVerdict::NotPrimitive { .. }));
    }

    #[test]
    fn small_certificate() {
        let t = VariableTable::new(&["a", "y"], &[1, 1]).unwrap();
        let p = WeightedPolynomial::parse("y^3 - a*y - 1", &t).unwrap();
        let v = irreducibility_certificate(&p, "y", &IrreducibilityConfig::default(), Execution::Sequential).unwrap();
        assert!(matches!(v, IrreducibilityVerdict::CertifiedIrreducible { .. }));
        let r = WeightedPolynomial::parse("y^2 - a^2", &t).unwrap();
        let v = irreducibility_certificate(&r, "y", &IrreducibilityConfig::default(), Execution::Sequential).unwrap();
        assert!(matches!(v, IrreducibilityVerdict::Inconclusive { .. }));
    }
}
