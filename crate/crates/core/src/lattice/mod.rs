//! Even integral lattices given by Gram matrices: invariants, discriminant
//! forms, Kneser conditions, reflections, orthogonal complements and the
//! period-domain membership test.

mod catalog;
mod finite_form;

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactalg::{self, det_fraction_free, inertia, integer_kernel, smith_normal_form, ExactAlgError, ExactMatrix};

pub use catalog::{catalog, hyperbolic_plane, root_a, root_e, E8_EDGES};
pub use finite_form::{finite_form_automorphisms, reduce_mod, FiniteQuadraticForm, DEFAULT_ORDER_BOUND};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error(transparent)]
    Exact(#[from] ExactAlgError),
    #[error("unknown lattice name `{0}`")]
    UnknownName(String),
    #[error("Gram matrix is not even (odd diagonal entry at {0})")]
    NotEven(usize),
    #[error("Gram matrix is degenerate")]
    DegenerateLattice,
    #[error("group of order {order} exceeds the enumeration bound {bound}")]
    OrderTooLarge { order: u64, bound: u64 },
    #[error("reflection vector has norm {0}, expected -2")]
    WrongNorm(BigInt),
    #[error("sublattice basis vectors are dependent")]
    DependentBasis,
    #[error("vector has length {got}, lattice rank is {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("zero vector")]
    ZeroVector,
    #[error("signature ({0}, {1}) is not of the form (2, n)")]
    WrongSignature(usize, usize),
    #[error("lattice JSON: {0}")]
    Json(String),
}

/// Nondegenerate-by-default even lattice with an integral symmetric Gram
/// matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct GramLattice {
    label: String,
    components: Vec<String>,
    gram: ExactMatrix,
    ints: Vec<Vec<BigInt>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.positive, self.negative)
    }
}

impl GramLattice {
    pub fn from_int_rows(label: &str, rows: Vec<Vec<BigInt>>) -> Result<Self, LatticeError> {
        let gram = ExactMatrix::from_int_rows(&rows)?;
        if !gram.is_square() {
            return Err(ExactAlgError::NotSquare(gram.rows(), gram.cols()).into());
        }
        if !gram.is_symmetric() {
            return Err(ExactAlgError::NotSymmetric.into());
        }
        if let Some(i) = (0..rows.len()).find(|&i| rows[i][i].is_odd()) {
            return Err(LatticeError::NotEven(i));
        }
        Ok(GramLattice { label: label.to_string(), components: vec![label.to_string()], gram, ints: rows })
    }

    pub fn from_i64_rows(label: &str, rows: &[Vec<i64>]) -> Result<Self, LatticeError> {
        Self::from_int_rows(label, rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Labels of the direct summands this lattice was assembled from.
    pub fn components(&self) -> &[String] {
        &self.components
    }

    pub fn relabel(mut self, label: &str) -> Self {
        self.label = label.to_string();
        self
    }

    pub fn gram(&self) -> &ExactMatrix {
        &self.gram
    }

    pub fn int_rows(&self) -> &[Vec<BigInt>] {
        &self.ints
    }

    pub fn rank(&self) -> usize {
        self.ints.len()
    }

    pub fn direct_sum(parts: &[GramLattice]) -> GramLattice {
        let blocks: Vec<&ExactMatrix> = parts.iter().map(|p| &p.gram).collect();
        let gram = ExactMatrix::direct_sum(&blocks);
        let ints = gram.to_int_rows().expect("integral blocks");
        let components: Vec<String> = parts.iter().flat_map(|p| p.components.iter().cloned()).collect();
        GramLattice { label: components.join("+"), components, gram, ints }
    }

    pub fn rescale(&self, n: i64) -> GramLattice {
        let ints: Vec<Vec<BigInt>> =
            self.ints.iter().map(|r| r.iter().map(|x| x * BigInt::from(n)).collect()).collect();
        let label = format!("{}({n})", self.label);
        GramLattice {
            gram: ExactMatrix::from_int_rows(&ints).expect("rectangular"),
            ints,
            components: vec![label.clone()],
            label,
        }
    }

    pub fn determinant(&self) -> BigInt {
        det_fraction_free(&self.gram).expect("square integral Gram matrix")
    }

    /// Number of hyperbolic-plane summands in the recorded decomposition.
    pub fn hyperbolic_plane_count(&self) -> usize {
        self.components.iter().filter(|c| c.as_str() == "U").count()
    }

    fn check_len(&self, v: &[BigInt]) -> Result<(), LatticeError> {
        if v.len() != self.rank() {
            return Err(LatticeError::DimensionMismatch { expected: self.rank(), got: v.len() });
        }
        Ok(())
    }

    /// `(u, v)` for integer coordinate vectors.
    pub fn pair(&self, u: &[BigInt], v: &[BigInt]) -> Result<BigInt, LatticeError> {
        self.check_len(u)?;
        self.check_len(v)?;
        let mut s = BigInt::zero();
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                s += ui * &self.ints[i][j] * vj;
            }
        }
        Ok(s)
    }

    pub fn norm(&self, v: &[BigInt]) -> Result<BigInt, LatticeError> {
        self.pair(v, v)
    }

    /// `G v`, the pairing of `v` against each basis vector.
    fn gram_times(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.ints.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&LatticeJson {
            label: self.label.clone(),
            gram: self.ints.iter().map(|r| r.iter().map(|x| x.to_i64().expect("entry fits in i64")).collect()).collect(),
        })
        .expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self, LatticeError> {
        let j: LatticeJson = serde_json::from_str(text).map_err(|e| LatticeError::Json(e.to_string()))?;
        if j.gram.iter().any(|r| r.len() != j.gram.len()) {
            return Err(LatticeError::Json("gram must be square".into()));
        }
        Self::from_i64_rows(&j.label, &j.gram)
    }
}

impl fmt::Debug for GramLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GramLattice({}, {:?})", self.label, self.gram)
    }
}

#[derive(Serialize, Deserialize)]
struct LatticeJson {
    label: String,
    gram: Vec<Vec<i64>>,
}

pub fn signature(lat: &GramLattice) -> Result<Signature, LatticeError> {
    let i = inertia(lat.gram())?;
    if i.zero > 0 {
        return Err(LatticeError::DegenerateLattice);
    }
    Ok(Signature { positive: i.positive, negative: i.negative })
}

pub fn rank_mod_p(lat: &GramLattice, p: u64) -> usize {
    exactalg::rank_mod_p(lat.gram(), p).expect("integral Gram matrix")
}

/// Discriminant group `L^/L` with generators `V e_i / d_i` taken from the
/// Smith form `U G V = D`, for the elementary divisors `d_i > 1`.
pub fn discriminant_group(lat: &GramLattice) -> Result<FiniteQuadraticForm, LatticeError> {
    Ok(discriminant_group_with_generators(lat)?.0)
}

/// The discriminant form together with its generators as rational vectors in
/// lattice coordinates.
pub fn discriminant_group_with_generators(
    lat: &GramLattice,
) -> Result<(FiniteQuadraticForm, Vec<Vec<BigRational>>), LatticeError> {
    let n = lat.rank();
    if n == 0 {
        return Ok((FiniteQuadraticForm::trivial(), Vec::new()));
    }
    let snf = smith_normal_form(lat.gram())?;
    let divisors = snf.elementary_divisors();
    if divisors.len() < n {
        return Err(LatticeError::DegenerateLattice);
    }
    let mut orders = Vec::new();
    let mut gens = Vec::new();
    for (i, d) in divisors.iter().enumerate() {
        let d = d.abs();
        if d.is_one() {
            continue;
        }
        let order = d.to_u64().expect("group order fits in u64");
        let dq = BigRational::from_integer(d);
        gens.push((0..n).map(|r| snf.v.get(r, i) / &dq).collect::<Vec<_>>());
        orders.push(order);
    }
    let g = lat.gram();
    let values: Vec<Vec<BigRational>> = gens
        .iter()
        .map(|x| {
            let gx = g.apply(x).expect("dimensions match");
            gens.iter().map(|y| y.iter().zip(&gx).map(|(a, b)| a * b).sum()).collect()
        })
        .collect();
    Ok((FiniteQuadraticForm::new(orders, values), gens))
}

/// Outcome of one Kneser condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionResult {
    pub condition: &'static str,
    pub verdict: Verdict,
    pub details: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KneserReport {
    pub label: String,
    pub signature: Signature,
    pub rank_mod_2: usize,
    pub rank_mod_3: usize,
    /// Vector of norm -2 in lattice coordinates, if one was found.
    pub norm_minus_two: Option<Vec<i64>>,
    pub conditions: Vec<ConditionResult>,
    pub overall: Verdict,
}

impl KneserReport {
    pub fn failed_conditions(&self) -> Vec<&ConditionResult> {
        self.conditions.iter().filter(|c| c.verdict == Verdict::Fail).collect()
    }
}

/// Cap on vectors examined by the box search for a norm -2 vector.
pub const NORM_SEARCH_BUDGET: u64 = 5_000_000;

/// Vector of norm -2, trying basis vectors first and then the box
/// `[-bound, bound]^n` shell by shell in the sup norm. `None` if the box or
/// the search budget is exhausted.
pub fn find_norm_minus_two(lat: &GramLattice, bound: u64) -> Option<Vec<i64>> {
    let n = lat.rank();
    let g: Vec<Vec<i64>> = lat.int_rows().iter().map(|r| r.iter().map(|x| x.to_i64()).collect()).collect::<Option<_>>()?;
    if let Some(i) = (0..n).find(|&i| g[i][i] == -2) {
        let mut v = vec![0; n];
        v[i] = 1;
        return Some(v);
    }
    let norm = |v: &[i64]| -> i128 {
        let mut s = 0i128;
        for i in 0..n {
            if v[i] == 0 {
                continue;
            }
            for j in 0..n {
                s += v[i] as i128 * g[i][j] as i128 * v[j] as i128;
            }
        }
        s
    };
    let mut examined = 0u64;
    for radius in 1..=bound as i64 {
        let mut v = vec![-radius; n];
        loop {
            if v.iter().any(|x| x.abs() == radius) {
                examined += 1;
                if examined > NORM_SEARCH_BUDGET {
                    return None;
                }
                if norm(&v) == -2 {
                    return Some(v);
                }
            }
            let mut k = 0;
            while k < n && v[k] == radius {
                v[k] = -radius;
                k += 1;
            }
            if k == n {
                break;
            }
            v[k] += 1;
        }
    }
    None
}

/// Checks the four Kneser conditions: (i) `min(s+, s-) >= 2`, (ii) a vector
/// of norm -2 exists, (iii) rank mod 2 at least 6, (iv) rank mod 3 at least 5.
pub fn kneser_check(lat: &GramLattice, search_bound: u64) -> Result<KneserReport, LatticeError> {
    let sig = signature(lat)?;
    let r2 = rank_mod_p(lat, 2);
    let r3 = rank_mod_p(lat, 3);
    let witness = find_norm_minus_two(lat, search_bound);
    let pass = |ok: bool| if ok { Verdict::Pass } else { Verdict::Fail };
    let conditions = vec![
        ConditionResult {
            condition: "signature",
            verdict: pass(sig.positive.min(sig.negative) >= 2),
            details: format!("signature {sig}, need min >= 2"),
        },
        ConditionResult {
            condition: "norm -2 vector",
            verdict: if witness.is_some() { Verdict::Pass } else { Verdict::Inconclusive },
            details: match &witness {
                Some(v) => format!("found {v:?}"),
                None => format!("none with coordinates in [-{search_bound}, {search_bound}]"),
            },
        },
        ConditionResult {
            condition: "rank mod 2",
            verdict: pass(r2 >= 6),
            details: format!("rank mod 2 = {r2}, need >= 6"),
        },
        ConditionResult {
            condition: "rank mod 3",
            verdict: pass(r3 >= 5),
            details: format!("rank mod 3 = {r3}, need >= 5"),
        },
    ];
    let overall = if conditions.iter().any(|c| c.verdict == Verdict::Fail) {
        Verdict::Fail
    } else if conditions.iter().all(|c| c.verdict == Verdict::Pass) {
        Verdict::Pass
    } else {
        Verdict::Inconclusive
    };
    Ok(KneserReport {
        label: lat.label().to_string(),
        signature: sig,
        rank_mod_2: r2,
        rank_mod_3: r3,
        norm_minus_two: witness,
        conditions,
        overall,
    })
}

/// Integral linear map on lattice coordinates (columns are images of basis
/// vectors).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isometry {
    pub matrix: ExactMatrix,
    pub det: i32,
}

impl Isometry {
    pub fn identity(n: usize) -> Self {
        Isometry { matrix: ExactMatrix::identity(n), det: 1 }
    }

    pub fn apply(&self, v: &[BigRational]) -> Vec<BigRational> {
        self.matrix.apply(v).expect("dimensions match")
    }

    pub fn apply_int(&self, v: &[BigInt]) -> Vec<BigInt> {
        let q: Vec<BigRational> = v.iter().map(|x| BigRational::from_integer(x.clone())).collect();
        self.apply(&q).into_iter().map(|x| x.to_integer()).collect()
    }

    pub fn compose(&self, other: &Isometry) -> Isometry {
        Isometry { matrix: self.matrix.mul(&other.matrix).expect("same rank"), det: self.det * other.det }
    }

    /// `M^T G M = G`.
    pub fn preserves(&self, lat: &GramLattice) -> bool {
        let m = &self.matrix;
        m.transpose().mul(lat.gram()).and_then(|x| x.mul(m)).is_ok_and(|x| &x == lat.gram())
    }

    /// Whether every discriminant-group generator `y` satisfies
    /// `M y - y` in the lattice.
    pub fn acts_trivially_on_discriminant(&self, lat: &GramLattice) -> Result<bool, LatticeError> {
        let (_, gens) = discriminant_group_with_generators(lat)?;
        Ok(gens.iter().all(|y| self.apply(y).iter().zip(y).all(|(a, b)| (a - b).is_integer())))
    }
}

/// `z -> z + (z, delta) delta` for a vector of norm -2.
pub fn reflection(lat: &GramLattice, delta: &[BigInt]) -> Result<Isometry, LatticeError> {
    let nrm = lat.norm(delta)?;
    if nrm != BigInt::from(-2) {
        return Err(LatticeError::WrongNorm(nrm));
    }
    let n = lat.rank();
    let gd = lat.gram_times(delta);
    let rows: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() } + &delta[i] * &gd[j]).collect())
        .collect();
    let matrix = ExactMatrix::from_int_rows(&rows)?;
    let det = det_fraction_free(&matrix)?.to_i32().expect("unimodular");
    Ok(Isometry { matrix, det })
}

fn basis_matrix(lat: &GramLattice, sub_basis: &[Vec<BigInt>]) -> Result<ExactMatrix, LatticeError> {
    for v in sub_basis {
        lat.check_len(v)?;
    }
    if sub_basis.is_empty() {
        return Ok(ExactMatrix::zeros(0, lat.rank()));
    }
    let m = ExactMatrix::from_int_rows(sub_basis)?;
    if smith_normal_form(&m)?.rank() < sub_basis.len() {
        return Err(LatticeError::DependentBasis);
    }
    Ok(m)
}

/// Basis of `{v : (v, s) = 0 for all s in sub_basis}`, saturated in the
/// ambient lattice.
pub fn complement_basis(ambient: &GramLattice, sub_basis: &[Vec<BigInt>]) -> Result<Vec<Vec<BigInt>>, LatticeError> {
    let s = basis_matrix(ambient, sub_basis)?;
    if sub_basis.is_empty() {
        return Ok((0..ambient.rank())
            .map(|i| (0..ambient.rank()).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect());
    }
    Ok(integer_kernel(&s.mul(ambient.gram())?)?)
}

/// Gram matrix of a sublattice given by integer coordinate vectors.
pub fn restrict(ambient: &GramLattice, basis: &[Vec<BigInt>], label: &str) -> Result<GramLattice, LatticeError> {
    let rows: Vec<Vec<BigInt>> = basis
        .iter()
        .map(|u| basis.iter().map(|v| ambient.pair(u, v)).collect::<Result<_, _>>())
        .collect::<Result<_, _>>()?;
    GramLattice::from_int_rows(label, rows)
}

pub fn orthogonal_complement(ambient: &GramLattice, sub_basis: &[Vec<BigInt>]) -> Result<GramLattice, LatticeError> {
    let basis = complement_basis(ambient, sub_basis)?;
    restrict(ambient, &basis, &format!("complement in {}", ambient.label()))
}

/// Whether the span of `sub_basis` is saturated in the ambient lattice.
pub fn is_primitive_sublattice(ambient: &GramLattice, sub_basis: &[Vec<BigInt>]) -> Result<bool, LatticeError> {
    let m = basis_matrix(ambient, sub_basis)?;
    if sub_basis.is_empty() {
        return Ok(true);
    }
    Ok(smith_normal_form(&m)?.elementary_divisors().iter().all(|d| d.abs().is_one()))
}

/// Equal signatures and isomorphic discriminant forms.
pub fn same_genus_invariants(a: &GramLattice, b: &GramLattice, bound: u64) -> Result<bool, LatticeError> {
    if signature(a)? != signature(b)? {
        return Ok(false);
    }
    discriminant_group(a)?.is_isomorphic(&discriminant_group(b)?, bound)
}

/// Basis of `M = U + E8(-1) + E6(-1)` inside
/// `L = U1 + U2 + U3 + E8(-1) + E8(-1)`: the coordinates of `U1`, of the
/// first `E8(-1)`, and of nodes 1..6 of the second `E8(-1)`.
pub fn standard_m_embedding() -> Vec<Vec<BigInt>> {
    let unit = |i: usize| (0..22).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect();
    [0, 1].into_iter().chain(6..14).chain(14..20).map(unit).collect()
}

pub const DEFAULT_PERIOD_TOLERANCE: f64 = 1e-9;

fn max_abs_entry(lat: &GramLattice) -> f64 {
    lat.int_rows().iter().flatten().map(|x| x.abs().to_f64().unwrap_or(f64::INFINITY)).fold(0.0, f64::max)
}

fn require_period_signature(lat: &GramLattice) -> Result<(), LatticeError> {
    let s = signature(lat)?;
    if s.positive != 2 {
        return Err(LatticeError::WrongSignature(s.positive, s.negative));
    }
    Ok(())
}

/// Floating-point test of `xi G xi^T = 0` and `xi G conj(xi)^T > 0`, both
/// relative to `|xi|^2 max|G_ij|`.
pub fn is_period_point(lat: &GramLattice, xi: &[Complex64], tol: f64) -> Result<bool, LatticeError> {
    require_period_signature(lat)?;
    if xi.len() != lat.rank() {
        return Err(LatticeError::DimensionMismatch { expected: lat.rank(), got: xi.len() });
    }
    let norm2: f64 = xi.iter().map(|z| z.norm_sqr()).sum();
    if norm2 == 0.0 {
        return Err(LatticeError::ZeroVector);
    }
    let g: Vec<Vec<f64>> =
        lat.int_rows().iter().map(|r| r.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()).collect();
    let mut quad = Complex64::new(0.0, 0.0);
    let mut herm = Complex64::new(0.0, 0.0);
    for i in 0..xi.len() {
        for j in 0..xi.len() {
            quad += xi[i] * g[i][j] * xi[j];
            herm += xi[i] * g[i][j] * xi[j].conj();
        }
    }
    let scale = norm2 * max_abs_entry(lat);
    Ok(quad.norm() <= tol * scale && herm.re > tol * scale)
}

/// Exact test for Gaussian-rational vectors `xi = a + i b`:
/// `(a,a) - (b,b) = 0`, `(a,b) = 0` and `(a,a) + (b,b) > 0`.
pub fn is_period_point_exact(lat: &GramLattice, re: &[BigRational], im: &[BigRational]) -> Result<bool, LatticeError> {
    require_period_signature(lat)?;
    for v in [re, im] {
        if v.len() != lat.rank() {
            return Err(LatticeError::DimensionMismatch { expected: lat.rank(), got: v.len() });
        }
    }
    if re.iter().chain(im).all(Zero::is_zero) {
        return Err(LatticeError::ZeroVector);
    }
    let g = lat.gram();
    let form = |u: &[BigRational], v: &[BigRational]| -> BigRational {
        let gv = g.apply(v).expect("dimensions match");
        u.iter().zip(&gv).map(|(a, b)| a * b).sum()
    };
    let aa = form(re, re);
    let bb = form(im, im);
    let ab = form(re, im);
    Ok(aa == bb && ab.is_zero() && (aa + bb).is_positive())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn signatures() {
        let sig = |n| signature(&catalog(n).unwrap()).unwrap();
        assert_eq!(sig("A"), Signature { positive: 2, negative: 4 });
        assert_eq!(sig("M"), Signature { positive: 1, negative: 15 });
        assert_eq!(sig("L"), Signature { positive: 3, negative: 19 });
        assert_eq!(sig("E8(-1)"), Signature { positive: 0, negative: 8 });
        let degenerate = GramLattice::from_i64_rows("z", &[vec![0, 0], vec![0, 2]]).unwrap();
        assert_eq!(signature(&degenerate), Err(LatticeError::DegenerateLattice));
    }

    #[test]
    fn discriminant_groups() {
        assert_eq!(discriminant_group(&catalog("U").unwrap()).unwrap().order(), 1);
        let qa = discriminant_group(&catalog("A").unwrap()).unwrap();
        assert_eq!(qa.generator_orders(), &[3]);
        assert_eq!(qa.q(&[1]), BigRational::new(4.into(), 3.into()));
        assert_eq!(finite_form_automorphisms(&qa, DEFAULT_ORDER_BOUND).unwrap(), 2);
        let qs = discriminant_group(&catalog("A_S").unwrap()).unwrap();
        assert_eq!(qs.generator_orders(), &[2]);
        assert_eq!(finite_form_automorphisms(&qs, DEFAULT_ORDER_BOUND).unwrap(), 1);
    }

    #[test]
    fn ranks_mod_p() {
        let a = catalog("A").unwrap();
        assert_eq!((rank_mod_p(&a, 2), rank_mod_p(&a, 3)), (6, 5));
        assert_eq!(rank_mod_p(&catalog("A_S").unwrap(), 2), 4);
        for p in [2, 3, 5] {
            assert_eq!(rank_mod_p(&catalog("U").unwrap(), p), 2);
        }
    }

    #[test]
    fn kneser() {
        let a = kneser_check(&catalog("A").unwrap(), 2).unwrap();
        assert_eq!(a.overall, Verdict::Pass);
        assert_eq!(a.norm_minus_two, Some(vec![0, 0, 0, 0, 1, 0]));
        let s = kneser_check(&catalog("A_S").unwrap(), 2).unwrap();
        assert_eq!(s.overall, Verdict::Fail);
        assert_eq!(s.failed_conditions().len(), 1);
        assert_eq!(s.failed_conditions()[0].condition, "rank mod 2");
        let m = kneser_check(&catalog("A_MSY").unwrap(), 2).unwrap();
        assert_eq!(m.rank_mod_2, 0);
        assert_eq!(m.overall, Verdict::Fail);
        assert_eq!(kneser_check(&catalog("A_CMS").unwrap(), 2).unwrap().overall, Verdict::Fail);
    }

    #[test]
    fn norm_search_box_and_inconclusive() {
        // U has (x, x) = 2ab; -2 needs a = 1, b = -1.
        assert_eq!(find_norm_minus_two(&catalog("U").unwrap(), 1), Some(vec![1, -1]));
        assert_eq!(find_norm_minus_two(&catalog("U(2)").unwrap(), 3), None);
        let r = kneser_check(&catalog("U(2)+U(2)+U(2)").unwrap(), 1).unwrap();
        assert_eq!(r.conditions[1].verdict, Verdict::Inconclusive);
        assert_eq!(r.overall, Verdict::Fail);
    }

    #[test]
    fn reflections() {
        let a = catalog("A").unwrap();
        let delta = ints(&[0, 0, 0, 0, 1, 0]);
        let s = reflection(&a, &delta).unwrap();
        assert_eq!(s.det, -1);
        assert!(s.preserves(&a));
        assert_eq!(s.apply_int(&delta), ints(&[0, 0, 0, 0, -1, 0]));
        assert_eq!(s.compose(&s), Isometry::identity(6));
        assert!(s.acts_trivially_on_discriminant(&a).unwrap());
        // The generator (v1 + 2 v2)/3 is fixed modulo the lattice.
        let third = |n: i64| BigRational::new(n.into(), 3.into());
        let y = vec![third(0), third(0), third(0), third(0), third(1), third(2)];
        let diff: Vec<BigRational> = s.apply(&y).iter().zip(&y).map(|(a, b)| a - b).collect();
        assert!(diff.iter().all(BigRational::is_integer));
        assert!(matches!(reflection(&a, &ints(&[1, 0, 0, 0, 0, 0])), Err(LatticeError::WrongNorm(_))));
    }

    #[test]
    fn complements() {
        let l = catalog("L").unwrap();
        let m = standard_m_embedding();
        assert!(is_primitive_sublattice(&l, &m).unwrap());
        let mm = restrict(&l, &m, "M").unwrap();
        assert_eq!(mm.determinant().abs(), BigInt::from(3));
        let c = orthogonal_complement(&l, &m).unwrap();
        assert_eq!(c.rank(), 6);
        assert!(same_genus_invariants(&c, &catalog("A").unwrap(), DEFAULT_ORDER_BOUND).unwrap());
        let e8 = catalog("E8").unwrap();
        let e6: Vec<Vec<BigInt>> = (0..6).map(|i| (0..8).map(|j| BigInt::from((i == j) as i64)).collect()).collect();
        let c = orthogonal_complement(&e8, &e6).unwrap();
        assert_eq!(c.rank(), 2);
        assert!(same_genus_invariants(&c, &catalog("A2").unwrap(), DEFAULT_ORDER_BOUND).unwrap());
        let all: Vec<Vec<BigInt>> = (0..8).map(|i| (0..8).map(|j| BigInt::from((i == j) as i64)).collect()).collect();
        assert_eq!(orthogonal_complement(&e8, &all).unwrap().rank(), 0);
        let u = catalog("U").unwrap();
        assert!(!is_primitive_sublattice(&u, &[ints(&[2, 0])]).unwrap());
        assert_eq!(is_primitive_sublattice(&u, &[ints(&[1, 0]), ints(&[2, 0])]), Err(LatticeError::DependentBasis));
    }

    #[test]
    fn genus_comparisons() {
        let a = catalog("A").unwrap();
        assert!(same_genus_invariants(&a, &a, DEFAULT_ORDER_BOUND).unwrap());
        assert!(!same_genus_invariants(&a, &catalog("A_S").unwrap(), DEFAULT_ORDER_BOUND).unwrap());
    }

    #[test]
    fn period_points() {
        let a = catalog("A").unwrap();
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let xi = [c(1., 0.), c(1., 0.), c(0., 1.), c(0., 1.), c(0., 0.), c(0., 0.)];
        assert!(is_period_point(&a, &xi, DEFAULT_PERIOD_TOLERANCE).unwrap());
        let real = [c(1., 0.), c(0., 0.), c(0., 0.), c(0., 0.), c(0., 0.), c(0., 0.)];
        assert!(!is_period_point(&a, &real, DEFAULT_PERIOD_TOLERANCE).unwrap());
        let real2 = [c(1., 0.), c(1., 0.), c(1., 0.), c(-1., 0.), c(0., 0.), c(0., 0.)];
        assert!(!is_period_point(&a, &real2, DEFAULT_PERIOD_TOLERANCE).unwrap());
        assert_eq!(is_period_point(&a, &[c(0., 0.); 6], 1e-9), Err(LatticeError::ZeroVector));
        let q = |n: i64| BigRational::from_integer(n.into());
        let re = vec![q(1), q(1), q(0), q(0), q(0), q(0)];
        let im = vec![q(0), q(0), q(1), q(1), q(0), q(0)];
        assert!(is_period_point_exact(&a, &re, &im).unwrap());
        assert!(matches!(is_period_point(&catalog("M").unwrap(), &[c(1., 0.); 16], 1e-9), Err(LatticeError::WrongSignature(1, 15))));
    }

    #[test]
    fn json_round_trip() {
        let a = catalog("A").unwrap();
        let text = a.to_json();
        assert!(text.starts_with("{\"label\":\"A\",\"gram\":[[0,1,0,0,0,0]"));
        let back = GramLattice::from_json(&text).unwrap();
        assert_eq!(back.int_rows(), a.int_rows());
        assert!(GramLattice::from_json("{\"label\":\"x\",\"gram\":[[1]]}").is_err());
        assert!(GramLattice::from_json("{\"label\":\"x\",\"gram\":[[0,1]]}").is_err());
    }
}
