//! Elliptic fibrations over the projective line in the form
//! `z^2 = y^3 + g2(x) y + g3(x)`, classified by Kodaira type.
//!
//! The model stores the affine chart. The chart at infinity is the reversal
//! of `g2, g3, Δ` to the height bounds, `(8, 12, 24)` for a K3 surface and
//! `(4, 6, 12)` for a rational elliptic surface.
//!
//! Fibers over irrational points are classified without algebraic numbers:
//! the square-free factors of `Δ` are split into pieces on whose roots the
//! orders of `g2`, `g3` and `Δ` are constant, and each root of a piece
//! contributes one fiber of the piece's type.

use std::fmt;

use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::par::Execution;
use crate::wpoly::{PolyError, QPoly, VariableTable, WeightedPolynomial};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeierstrassError {
    #[error("discriminant vanishes identically")]
    DiscriminantVanishes,
    #[error("{which} has degree {degree} above the height bound {bound}")]
    DegreeExceedsHeight { which: &'static str, degree: usize, bound: u32 },
    #[error("valuations ({v2}, {v3}, {vd}) match no Kodaira type")]
    InconsistentValuations { v2: Order, v3: Order, vd: u32 },
    #[error("model is not minimal at {0}")]
    NonMinimal(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("model JSON: {0}")]
    Json(String),
}

/// Order of vanishing; `Infinite` for the zero polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Order {
    Finite(u32),
    Infinite,
}

impl Order {
    fn at_least(self, k: u32) -> bool {
        match self {
            Order::Finite(v) => v >= k,
            Order::Infinite => true,
        }
    }

    fn is(self, k: u32) -> bool {
        self == Order::Finite(k)
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(v) => write!(f, "{v}"),
            Order::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Heights {
    pub g2: u32,
    pub g3: u32,
    pub disc: u32,
}

impl Heights {
    pub const K3: Heights = Heights { g2: 8, g3: 12, disc: 24 };
    pub const RATIONAL: Heights = Heights { g2: 4, g3: 6, disc: 12 };

    fn reduced(self, k: u32) -> Heights {
        Heights { g2: self.g2 - 4 * k, g3: self.g3 - 6 * k, disc: self.disc - 12 * k }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BasePoint {
    Finite(BigRational),
    Infinity,
}

impl fmt::Display for BasePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasePoint::Finite(a) => write!(f, "x0 = {a}"),
            BasePoint::Infinity => write!(f, "x0 = inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KodairaType {
    /// `I_n`; `I_0` is a smooth fiber.
    I(u32),
    II,
    III,
    IV,
    /// `I_n^*`.
    IStar(u32),
    IVStar,
    IIIStar,
    IIStar,
}

impl KodairaType {
    pub fn euler_number(self) -> u32 {
        match self {
            KodairaType::I(n) => n,
            KodairaType::II => 2,
            KodairaType::III => 3,
            KodairaType::IV => 4,
            KodairaType::IStar(n) => 6 + n,
            KodairaType::IVStar => 8,
            KodairaType::IIIStar => 9,
            KodairaType::IIStar => 10,
        }
    }

    pub fn is_singular(self) -> bool {
        self != KodairaType::I(0)
    }

    /// Multiplicities of the irreducible components. For the starred types
    /// the order follows the extended Dynkin diagram from the node meeting
    /// the zero section along the longest arm.
    pub fn multiplicities(self) -> Vec<u32> {
        match self {
            KodairaType::I(0) | KodairaType::I(1) | KodairaType::II => vec![1],
            KodairaType::I(n) => vec![1; n as usize],
            KodairaType::III => vec![1, 1],
            KodairaType::IV => vec![1, 1, 1],
            KodairaType::IStar(n) => {
                let mut v = vec![1, 1];
                v.extend(std::iter::repeat_n(2, n as usize + 1));
                v.extend([1, 1]);
                v
            }
            KodairaType::IVStar => vec![1, 2, 3, 2, 1, 2, 1],
            KodairaType::IIIStar => vec![1, 2, 3, 4, 3, 2, 1, 2],
            KodairaType::IIStar => vec![1, 2, 3, 4, 5, 6, 4, 2, 3],
        }
    }
}

impl fmt::Display for KodairaType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KodairaType::I(n) => write!(f, "I{n}"),
            KodairaType::II => write!(f, "II"),
            KodairaType::III => write!(f, "III"),
            KodairaType::IV => write!(f, "IV"),
            KodairaType::IStar(n) => write!(f, "I{n}*"),
            KodairaType::IVStar => write!(f, "IV*"),
            KodairaType::IIIStar => write!(f, "III*"),
            KodairaType::IIStar => write!(f, "II*"),
        }
    }
}

/// Kodaira's table in characteristic 0.
pub fn kodaira_from_valuations(v2: Order, v3: Order, vd: u32) -> Result<KodairaType, WeierstrassError> {
    use KodairaType::*;
    if v2.at_least(4) && v3.at_least(6) {
        return Err(WeierstrassError::NonMinimal(format!("valuations ({v2}, {v3}, {vd})")));
    }
    let t = match vd {
        0 => Some(I(0)),
        n if v2.is(0) && v3.is(0) => Some(I(n)),
        2 if v2.at_least(1) && v3.is(1) => Some(II),
        3 if v2.is(1) && v3.at_least(2) => Some(III),
        4 if v2.at_least(2) && v3.is(2) => Some(IV),
        6 if (v2.is(2) && v3.at_least(3)) || (v2.at_least(2) && v3.is(3)) => Some(IStar(0)),
        n if n > 6 && v2.is(2) && v3.is(3) => Some(IStar(n - 6)),
        8 if v2.at_least(3) && v3.is(4) => Some(IVStar),
        9 if v2.is(3) && v3.at_least(5) => Some(IIIStar),
        10 if v2.at_least(4) && v3.is(5) => Some(IIStar),
        _ => None,
    };
    t.ok_or(WeierstrassError::InconsistentValuations { v2, v3, vd })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocalValuations {
    pub g2: Order,
    pub g3: Order,
    pub disc: u32,
}

/// `z^2 = y^3 + g2(x0) y + g3(x0)` with height bounds for the chart at
/// infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeierstrassModel {
    g2: QPoly,
    g3: QPoly,
    heights: Heights,
}

fn order_at(p: &QPoly, a: &BigRational) -> Order {
    p.valuation_at(a).map_or(Order::Infinite, Order::Finite)
}

fn order_at_infinity(p: &QPoly, bound: u32) -> Order {
    p.degree().map_or(Order::Infinite, |d| Order::Finite(bound - d as u32))
}

impl WeierstrassModel {
    pub fn new(g2: QPoly, g3: QPoly, heights: Heights) -> Result<Self, WeierstrassError> {
        for (which, p, bound) in [("g2", &g2, heights.g2), ("g3", &g3, heights.g3)] {
            if let Some(d) = p.degree().filter(|&d| d as u32 > bound) {
                return Err(WeierstrassError::DegreeExceedsHeight { which, degree: d, bound });
            }
        }
        let m = WeierstrassModel { g2, g3, heights };
        if m.discriminant().is_zero() {
            return Err(WeierstrassError::DiscriminantVanishes);
        }
        Ok(m)
    }

    pub fn k3(g2: QPoly, g3: QPoly) -> Result<Self, WeierstrassError> {
        Self::new(g2, g3, Heights::K3)
    }

    pub fn g2(&self) -> &QPoly {
        &self.g2
    }

    pub fn g3(&self) -> &QPoly {
        &self.g3
    }

    pub fn heights(&self) -> Heights {
        self.heights
    }

    /// `Δ = 4 g2^3 + 27 g3^2`.
    pub fn discriminant(&self) -> QPoly {
        let c = |n: i64| BigRational::from_integer(n.into());
        self.g2.pow(3).scale(&c(4)).add(&self.g3.pow(2).scale(&c(27)))
    }

    /// Coefficients of the classical form `y^3 - G2 y - G3`.
    pub fn to_classical(&self) -> (QPoly, QPoly) {
        let m = -BigRational::one();
        (self.g2.scale(&m), self.g3.scale(&m))
    }

    pub fn local_valuations(&self, point: &BasePoint) -> LocalValuations {
        let disc = self.discriminant();
        match point {
            BasePoint::Finite(a) => LocalValuations {
                g2: order_at(&self.g2, a),
                g3: order_at(&self.g3, a),
                disc: disc.valuation_at(a).expect("nonzero discriminant"),
            },
            BasePoint::Infinity => LocalValuations {
                g2: order_at_infinity(&self.g2, self.heights.g2),
                g3: order_at_infinity(&self.g3, self.heights.g3),
                disc: self.heights.disc - disc.degree().expect("nonzero discriminant") as u32,
            },
        }
    }

    pub fn kodaira_at(&self, point: &BasePoint) -> Result<KodairaType, WeierstrassError> {
        let v = self.local_valuations(point);
        kodaira_from_valuations(v.g2, v.g3, v.disc).map_err(|e| match e {
            WeierstrassError::NonMinimal(_) => WeierstrassError::NonMinimal(point.to_string()),
            other => other,
        })
    }

    /// Exchanges the charts `x0 <-> 1/x0`.
    pub fn chart_swap(&self) -> WeierstrassModel {
        WeierstrassModel {
            g2: self.g2.reversed(self.heights.g2 as usize),
            g3: self.g3.reversed(self.heights.g3 as usize),
            heights: self.heights,
        }
    }

    /// Divides out `(x0 - a)^4, (x0 - a)^6` (or lowers the heights at
    /// infinity) while the model is non-minimal at `point`.
    pub fn minimalize_at(&self, point: &BasePoint) -> WeierstrassModel {
        let mut m = self.clone();
        loop {
            let v = m.local_valuations(point);
            if !(v.g2.at_least(4) && v.g3.at_least(6)) || m.heights.g2 < 4 {
                return m;
            }
            if let BasePoint::Finite(a) = point {
                let u = QPoly::linear_root(a);
                m.g2 = divide_power(&m.g2, &u, 4);
                m.g3 = divide_power(&m.g3, &u, 6);
            }
            m.heights = m.heights.reduced(1);
        }
    }

    /// Minimal at every point, including non-rational ones.
    pub fn minimalize(&self) -> WeierstrassModel {
        let mut m = self.minimalize_at(&BasePoint::Infinity);
        loop {
            let bad: Vec<QPoly> = m
                .affine_pieces(Execution::Sequential)
                .into_iter()
                .filter(|p| p.v2.at_least(4) && p.v3.at_least(6))
                .map(|p| p.factor)
                .collect();
            if bad.is_empty() || m.heights.g2 < 4 {
                return m;
            }
            let f = bad.iter().fold(QPoly::one(), |acc, p| acc.mul(p));
            let k = f.degree().unwrap_or(0) as u32;
            if 4 * k > m.heights.g2 {
                return m;
            }
            m.g2 = divide_power(&m.g2, &f, 4);
            m.g3 = divide_power(&m.g3, &f, 6);
            m.heights = m.heights.reduced(k);
        }
    }

    fn affine_pieces(&self, exec: Execution) -> Vec<Piece> {
        let disc = self.discriminant();
        let layers = disc.squarefree_decomposition();
        let per_layer = exec.map_slice(&layers, |(f, k)| {
            let mut out = Vec::new();
            for (a, v2) in split_by_order(f, &self.g2) {
                for (b, v3) in split_by_order(&a, &self.g3) {
                    out.push(Piece { factor: b, v2, v3, vd: *k as u32 });
                }
            }
            out
        });
        per_layer.into_iter().flatten().collect()
    }

    /// Singular fibers over the affine line and at infinity.
    pub fn fiber_configuration(&self) -> Result<FiberConfiguration, WeierstrassError> {
        self.fiber_configuration_with(Execution::default())
    }

    pub fn fiber_configuration_with(&self, exec: Execution) -> Result<FiberConfiguration, WeierstrassError> {
        let mut fibers = Vec::new();
        for piece in self.affine_pieces(exec) {
            let location = match piece.factor.degree() {
                Some(1) => {
                    let c = piece.factor.coeff(0);
                    FiberLocation::Point(BasePoint::Finite(-c / piece.factor.coeff(1)))
                }
                _ => FiberLocation::RootsOf(piece.factor.clone()),
            };
            let kodaira = kodaira_from_valuations(piece.v2, piece.v3, piece.vd).map_err(|e| match e {
                WeierstrassError::NonMinimal(_) => WeierstrassError::NonMinimal(location.to_string()),
                other => other,
            })?;
            let count = piece.factor.degree().unwrap_or(0) as u32;
            fibers.push(Fiber { location, kodaira, count });
        }
        let at_inf = self.kodaira_at(&BasePoint::Infinity)?;
        if at_inf.is_singular() {
            fibers.push(Fiber { location: FiberLocation::Point(BasePoint::Infinity), kodaira: at_inf, count: 1 });
        }
        let total_euler = fibers.iter().map(|f| f.count * f.kodaira.euler_number()).sum();
        Ok(FiberConfiguration { fibers, total_euler })
    }

    /// Euler number 24 with at least one singular fiber after
    /// minimalization.
    pub fn is_k3(&self) -> bool {
        let m = self.minimalize();
        m.fiber_configuration()
            .is_ok_and(|c| c.total_euler == 24 && c.fibers.iter().any(|f| f.kodaira.is_singular()))
    }

    pub fn to_json(&self) -> String {
        let render = |p: &QPoly| qpoly_to_wpoly(p).render();
        serde_json::to_string(&ModelJson { g2: render(&self.g2), g3: render(&self.g3) }).expect("serializable")
    }

    /// Reads `{"g2": ..., "g3": ...}` in the polynomial grammar over `x0`.
    pub fn from_json(text: &str, heights: Heights) -> Result<Self, WeierstrassError> {
        let j: ModelJson = serde_json::from_str(text).map_err(|e| WeierstrassError::Json(e.to_string()))?;
        let table = x0_table();
        let parse = |s: &str| -> Result<QPoly, WeierstrassError> {
            let p = WeightedPolynomial::parse(s, &table)?;
            Ok(p.to_qpoly("x0")?.expect("single variable"))
        };
        Self::new(parse(&j.g2)?, parse(&j.g3)?, heights)
    }
}

fn x0_table() -> VariableTable {
    VariableTable::new(&["x0"], &[1]).expect("valid table")
}

fn qpoly_to_wpoly(p: &QPoly) -> WeightedPolynomial {
    let table = x0_table();
    WeightedPolynomial::from_terms(&table, p.coeffs().iter().enumerate().map(|(k, c)| (vec![k as u32], c.clone())))
        .expect("degree fits")
}

fn divide_power(p: &QPoly, f: &QPoly, k: u32) -> QPoly {
    if p.is_zero() {
        return p.clone();
    }
    p.exact_div(&f.pow(k)).expect("order of vanishing checked")
}

#[derive(Serialize, Deserialize)]
struct ModelJson {
    g2: String,
    g3: String,
}

struct Piece {
    factor: QPoly,
    v2: Order,
    v3: Order,
    vd: u32,
}

/// Splits a monic square-free `f` into factors on whose roots `g` has a
/// constant order of vanishing. Roots with order at least `j + 1` are the
/// common roots of `f, g, g', ..., g^(j)`.
fn split_by_order(f: &QPoly, g: &QPoly) -> Vec<(QPoly, Order)> {
    if g.is_zero() {
        return vec![(f.clone(), Order::Infinite)];
    }
    let mut out = Vec::new();
    let mut current = f.monic();
    let mut d = g.clone();
    let mut j = 0;
    loop {
        let deeper = current.gcd(&d);
        let exact = current.exact_div(&deeper).expect("gcd divides");
        if exact.degree().is_some_and(|k| k > 0) {
            out.push((exact.monic(), Order::Finite(j)));
        }
        if deeper.degree().is_none_or(|k| k == 0) {
            return out;
        }
        current = deeper;
        d = d.derivative();
        j += 1;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FiberLocation {
    Point(BasePoint),
    /// Each root of this monic polynomial carries one fiber.
    RootsOf(QPoly),
}

impl fmt::Display for FiberLocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiberLocation::Point(p) => write!(f, "{p}"),
            FiberLocation::RootsOf(q) => write!(f, "roots of {}", qpoly_to_wpoly(q).render()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fiber {
    pub location: FiberLocation,
    pub kodaira: KodairaType,
    /// Number of fibers (roots) at this location.
    pub count: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberConfiguration {
    pub fibers: Vec<Fiber>,
    pub total_euler: u32,
}

impl FiberConfiguration {
    /// Fiber counts by type, largest Euler number first.
    pub fn type_counts(&self) -> Vec<(KodairaType, u32)> {
        let mut counts: Vec<(KodairaType, u32)> = Vec::new();
        for f in self.fibers.iter().filter(|f| f.kodaira.is_singular()) {
            match counts.iter_mut().find(|(k, _)| *k == f.kodaira) {
                Some((_, c)) => *c += f.count,
                None => counts.push((f.kodaira, f.count)),
            }
        }
        counts.sort_by(|a, b| b.0.euler_number().cmp(&a.0.euler_number()).then(b.0.cmp(&a.0)));
        counts
    }

    pub fn count_of(&self, t: KodairaType) -> u32 {
        self.type_counts().into_iter().find(|(k, _)| *k == t).map_or(0, |(_, c)| c)
    }

    /// Summary such as `II* + IV* + 6 I1`.
    pub fn summary(&self) -> String {
        self.type_counts()
            .into_iter()
            .map(|(k, c)| if c == 1 { k.to_string() } else { format!("{c} {k}") })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Display for FiberConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (Euler number {})", self.summary(), self.total_euler)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use KodairaType::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn poly(c: &[i64]) -> QPoly {
        QPoly::from_ints(c)
    }

    #[test]
    fn kodaira_rows() {
        let f = Order::Finite;
        assert_eq!(kodaira_from_valuations(f(4), f(5), 10).unwrap(), IIStar);
        assert_eq!(kodaira_from_valuations(f(0), f(0), 1).unwrap(), I(1));
        assert_eq!(kodaira_from_valuations(f(3), f(5), 9).unwrap(), IIIStar);
        assert_eq!(kodaira_from_valuations(f(3), Order::Infinite, 9).unwrap(), IIIStar);
        assert_eq!(kodaira_from_valuations(f(3), f(4), 8).unwrap(), IVStar);
        assert_eq!(kodaira_from_valuations(f(2), f(3), 8).unwrap(), IStar(2));
        assert_eq!(kodaira_from_valuations(f(2), f(3), 6).unwrap(), IStar(0));
        assert_eq!(kodaira_from_valuations(Order::Infinite, f(1), 2).unwrap(), II);
        assert_eq!(kodaira_from_valuations(f(1), f(2), 3).unwrap(), III);
        assert_eq!(kodaira_from_valuations(f(2), f(2), 4).unwrap(), IV);
        assert!(matches!(kodaira_from_valuations(f(4), f(6), 12), Err(WeierstrassError::NonMinimal(_))));
        assert!(matches!(
            kodaira_from_valuations(f(1), f(1), 5),
            Err(WeierstrassError::InconsistentValuations { .. })
        ));
    }

    #[test]
    fn euler_numbers_and_multiplicities() {
        for t in [I(3), II, III, IV, IStar(0), IStar(2), IVStar, IIIStar, IIStar] {
            let m = t.multiplicities();
            if !matches!(t, I(_) | II | III | IV) {
                assert_eq!(m.len() as u32, t.euler_number() - 1, "{t}");
            }
        }
        assert_eq!(IIStar.multiplicities().iter().sum::<u32>(), 30);
        assert_eq!(IIStar.multiplicities(), vec![1, 2, 3, 4, 5, 6, 4, 2, 3]);
    }

    #[test]
    fn zero_g2_valuations() {
        let m = WeierstrassModel::k3(QPoly::zero(), poly(&[0, 1])).unwrap();
        let v = m.local_valuations(&BasePoint::Finite(q(0)));
        assert_eq!((v.g2, v.g3, v.disc), (Order::Infinite, Order::Finite(1), 2));
        assert_eq!(m.kodaira_at(&BasePoint::Finite(q(0))).unwrap(), II);
    }

    #[test]
    fn minimalization() {
        let m = WeierstrassModel::new(poly(&[0, 0, 0, 0, 0, 0, 0, 0, 1]), poly(&[0; 12].iter().copied().chain([1]).collect::<Vec<_>>()), Heights { g2: 16, g3: 24, disc: 48 }).unwrap();
        let r = m.minimalize_at(&BasePoint::Finite(q(0)));
        assert_eq!(r.g2(), &QPoly::one());
        assert_eq!(r.g3(), &QPoly::one());
        assert_eq!(r.heights(), Heights::K3);
        let s = WeierstrassModel::k3(poly(&[1, 1]), poly(&[0, 1])).unwrap();
        assert_eq!(s.minimalize_at(&BasePoint::Finite(q(0))), s);
    }

    #[test]
    fn irrational_roots_grouped() {
        // Δ = 4 + 27 (x^2 - 2)^2 has four simple irrational roots.
        let m = WeierstrassModel::new(poly(&[1]), poly(&[-2, 0, 1]), Heights::RATIONAL).unwrap();
        let c = m.fiber_configuration().unwrap();
        assert_eq!(c.count_of(I(1)), 4);
        assert_eq!(c.total_euler, 12);
        assert!(matches!(c.fibers[0].location, FiberLocation::RootsOf(_)));
    }

    #[test]
    fn chart_swap_round_trip() {
        let m = WeierstrassModel::k3(poly(&[0, 0, 0, 1, 1]), poly(&[0, 0, 0, 0, 2, 1, 1, 1])).unwrap();
        assert_eq!(m.chart_swap().chart_swap(), m);
        assert_eq!(m.kodaira_at(&BasePoint::Infinity).unwrap(), m.chart_swap().kodaira_at(&BasePoint::Finite(q(0))).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let m = WeierstrassModel::k3(poly(&[0, 0, 0, 1, 1]), poly(&[0, 0, 0, 0, 2, 1, 1, 1])).unwrap();
        let text = m.to_json();
        assert_eq!(text, r#"{"g2":"x0^4 + x0^3","g3":"x0^7 + x0^6 + x0^5 + 2*x0^4"}"#);
        assert_eq!(WeierstrassModel::from_json(&text, Heights::K3).unwrap(), m);
        assert!(WeierstrassModel::from_json(r#"{"g2":"0","g3":"0"}"#, Heights::K3).is_err());
        assert!(WeierstrassModel::from_json(r#"{"g2":"x0^9","g3":"1"}"#, Heights::K3).is_err());
    }
}
