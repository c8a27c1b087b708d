//! Exact integer and rational linear algebra: Smith normal form, saturated
//! integer kernels, Sylvester inertia and fraction-free determinants.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::par::Execution;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactAlgError {
    #[error("matrix dimensions {0}x{1} and {2}x{3} are incompatible")]
    DimensionMismatch(usize, usize, usize, usize),
    #[error("matrix has a non-integral entry at ({0}, {1})")]
    NotIntegral(usize, usize),
    #[error("matrix is {0}x{1}, expected square")]
    NotSquare(usize, usize),
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("row {0} has length {1}, expected {2}")]
    RaggedRows(usize, usize, usize),
}

/// Dense matrix of exact rationals. Values are immutable once built; every
/// kernel returns fresh matrices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigRational>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, entries: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigRational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Result<Self, ExactAlgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(r * c);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != c {
                return Err(ExactAlgError::RaggedRows(i, row.len(), c));
            }
            entries.extend(row);
        }
        Ok(ExactMatrix { rows: r, cols: c, entries })
    }

    pub fn from_int_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self, ExactAlgError> {
        Self::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|x| BigRational::from_integer(x.clone().into())).collect())
                .collect(),
        )
    }

    /// Builds a matrix whose columns are the given integer vectors.
    pub fn from_int_columns(cols: &[Vec<BigInt>], height: usize) -> Result<Self, ExactAlgError> {
        let mut m = Self::zeros(height, cols.len());
        for (j, col) in cols.iter().enumerate() {
            if col.len() != height {
                return Err(ExactAlgError::RaggedRows(j, col.len(), height));
            }
            for (i, x) in col.iter().enumerate() {
                m.entries[i * cols.len() + j] = BigRational::from_integer(x.clone());
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(BigRational::is_integer)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.entries[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &ExactMatrix) -> Result<ExactMatrix, ExactAlgError> {
        if self.cols != other.rows {
            return Err(ExactAlgError::DimensionMismatch(self.rows, self.cols, other.rows, other.cols));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: &BigRational) -> ExactMatrix {
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|x| x * s).collect(),
        }
    }

    pub fn neg(&self) -> ExactMatrix {
        self.scale(&-BigRational::one())
    }

    /// Applies the matrix to a column vector.
    pub fn apply(&self, v: &[BigRational]) -> Result<Vec<BigRational>, ExactAlgError> {
        if v.len() != self.cols {
            return Err(ExactAlgError::DimensionMismatch(self.rows, self.cols, v.len(), 1));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Integer entries, row-major, if every entry has denominator one.
    pub fn to_int_rows(&self) -> Result<Vec<Vec<BigInt>>, ExactAlgError> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| {
                        let x = self.get(i, j);
                        if x.is_integer() {
                            Ok(x.to_integer())
                        } else {
                            Err(ExactAlgError::NotIntegral(i, j))
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Block-diagonal sum.
    pub fn direct_sum(blocks: &[&ExactMatrix]) -> ExactMatrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.entries[(r0 + i) * cols + c0 + j] = b.get(i, j).clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    /// Exact inverse by Gauss–Jordan elimination; `None` when singular.
    pub fn inverse(&self) -> Option<ExactMatrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut a: Vec<Vec<BigRational>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut inv: Vec<Vec<BigRational>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
            .collect();
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, piv);
            inv.swap(col, piv);
            let p = a[col][col].clone();
            for j in 0..n {
                a[col][j] /= &p;
                inv[col][j] /= &p;
            }
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for j in 0..n {
                        let t = &f * &a[col][j];
                        a[r][j] -= t;
                        let t = &f * &inv[col][j];
                        inv[r][j] -= t;
                    }
                }
            }
        }
        ExactMatrix::from_rows(inv).ok()
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// `u * m * v = d` with `d` in Smith normal form.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub d: ExactMatrix,
    pub u: ExactMatrix,
    pub v: ExactMatrix,
}

impl SmithForm {
    /// Nonzero diagonal entries `d_1 | d_2 | ...`.
    pub fn elementary_divisors(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i).to_integer())
            .take_while(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.elementary_divisors().len()
    }
}

fn int_identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

fn int_to_matrix(a: &[Vec<BigInt>], rows: usize, cols: usize) -> ExactMatrix {
    let mut m = ExactMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.entries[i * cols + j] = BigRational::from_integer(a[i][j].clone());
        }
    }
    m
}

/// Smith normal form with smallest-absolute-value pivoting.
pub fn smith_normal_form(m: &ExactMatrix) -> Result<SmithForm, ExactAlgError> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.to_int_rows()?;
    let mut u = int_identity(rows);
    let mut v = int_identity(cols);

    let row_axpy = |mat: &mut Vec<Vec<BigInt>>, dst: usize, src: usize, q: &BigInt| {
        if q.is_zero() {
            return;
        }
        let (s, d) = if src < dst {
            let (lo, hi) = mat.split_at_mut(dst);
            (&lo[src], &mut hi[0])
        } else {
            let (lo, hi) = mat.split_at_mut(src);
            (&hi[0], &mut lo[dst])
        };
        for (x, y) in d.iter_mut().zip(s.iter()) {
            *x -= q * y;
        }
    };
    let col_axpy = |mat: &mut Vec<Vec<BigInt>>, dst: usize, src: usize, q: &BigInt| {
        if q.is_zero() {
            return;
        }
        for row in mat.iter_mut() {
            let t = q * &row[src];
            row[dst] -= t;
        }
    };

    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !a[i][j].is_zero()
                        && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            a.swap(t, pi);
            u.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            for row in v.iter_mut() {
                row.swap(t, pj);
            }

            let mut clean = true;
            for i in t + 1..rows {
                let q = a[i][t].div_floor(&a[t][t]);
                row_axpy(&mut a, i, t, &q);
                row_axpy(&mut u, i, t, &q);
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..cols {
                let q = a[t][j].div_floor(&a[t][t]);
                col_axpy(&mut a, j, t, &q);
                col_axpy(&mut v, j, t, &q);
                clean &= a[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            let bad_row = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
            match bad_row {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    row_axpy(&mut a, t, i, &minus_one);
                    row_axpy(&mut u, t, i, &minus_one);
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -&*x;
            }
            for x in u[t].iter_mut() {
                *x = -&*x;
            }
        }
    }

    Ok(SmithForm {
        d: int_to_matrix(&a, rows, cols),
        u: int_to_matrix(&u, rows, rows),
        v: int_to_matrix(&v, cols, cols),
    })
}

/// Basis of the saturated kernel `{v in Z^n : m v = 0}`.
pub fn integer_kernel(m: &ExactMatrix) -> Result<Vec<Vec<BigInt>>, ExactAlgError> {
    let snf = smith_normal_form(m)?;
    let rank = snf.rank();
    let v = snf.v.to_int_rows()?;
    Ok((rank..m.cols()).map(|j| v.iter().map(|row| row[j].clone()).collect()).collect())
}

/// Counts of positive, negative and zero squares in a diagonalization of the
/// symmetric form `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

/// Sylvester inertia via symmetric Gaussian reduction. A hyperbolic 2x2 block
/// is split off when every remaining diagonal entry vanishes.
pub fn inertia(m: &ExactMatrix) -> Result<Inertia, ExactAlgError> {
    if !m.is_square() {
        return Err(ExactAlgError::NotSquare(m.rows(), m.cols()));
    }
    if !m.is_symmetric() {
        return Err(ExactAlgError::NotSymmetric);
    }
    let n = m.rows();
    let mut a: Vec<Vec<BigRational>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let sym_swap = |a: &mut Vec<Vec<BigRational>>, i: usize, j: usize| {
        if i != j {
            a.swap(i, j);
            for row in a.iter_mut() {
                row.swap(i, j);
            }
        }
    };
    let mut out = Inertia { positive: 0, negative: 0, zero: 0 };
    let mut k = 0;
    while k < n {
        if let Some(i) = (k..n).find(|&i| !a[i][i].is_zero()) {
            sym_swap(&mut a, k, i);
            let p = a[k][k].clone();
            if p.is_positive() {
                out.positive += 1;
            } else {
                out.negative += 1;
            }
            for r in k + 1..n {
                if a[r][k].is_zero() {
                    continue;
                }
                let f = &a[r][k] / &p;
                for s in k + 1..n {
                    let t = &f * &a[k][s];
                    a[r][s] -= t;
                }
            }
            k += 1;
            continue;
        }
        let off = (k..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| !a[i][j].is_zero());
        let Some((i, j)) = off else {
            out.zero += n - k;
            break;
        };
        sym_swap(&mut a, k, i);
        sym_swap(&mut a, k + 1, j);
        let b = a[k][k + 1].clone();
        out.positive += 1;
        out.negative += 1;
        for r in k + 2..n {
            for s in k + 2..n {
                let t = (&a[r][k] * &a[k + 1][s] + &a[r][k + 1] * &a[k][s]) / &b;
                a[r][s] -= t;
            }
        }
        k += 2;
    }
    Ok(out)
}

/// Commutative ring with exact division, as needed by Bareiss elimination.
pub trait BareissRing: Clone + Send + Sync {
    fn vanishes(&self) -> bool;
    fn ring_mul(&self, other: &Self) -> Self;
    fn ring_sub(&self, other: &Self) -> Self;
    fn ring_neg(&self) -> Self;
    /// Division known to be exact.
    fn div_exact(&self, other: &Self) -> Self;
}

impl BareissRing for BigInt {
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
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
        debug_assert!((self % other).is_zero());
        self / other
    }
}

/// Fraction-free determinant (Bareiss) over any exact-division ring whose
/// unit element is `one`.
pub fn bareiss_determinant<R: BareissRing>(mut a: Vec<Vec<R>>, one: R, exec: Execution) -> R {
    let n = a.len();
    if n == 0 {
        return one;
    }
    let zero = one.ring_sub(&one);
    let mut negate = false;
    let mut prev = one;
    for k in 0..n - 1 {
        if a[k][k].vanishes() {
            match (k + 1..n).find(|&i| !a[i][k].vanishes()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return zero,
            }
        }
        let (head, tail) = a.split_at_mut(k + 1);
        let pivot_row = &head[k];
        let updated = exec.map_slice(tail, |row| {
            let mut out = row.clone();
            for j in k + 1..n {
                let num = row[j].ring_mul(&pivot_row[k]).ring_sub(&row[k].ring_mul(&pivot_row[j]));
                out[j] = num.div_exact(&prev);
            }
            out[k] = zero.clone();
            out
        });
        for (dst, src) in tail.iter_mut().zip(updated) {
            *dst = src;
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        det.ring_neg()
    } else {
        det
    }
}

/// Exact determinant of a square integral matrix.
pub fn det_fraction_free(m: &ExactMatrix) -> Result<BigInt, ExactAlgError> {
    if !m.is_square() {
        return Err(ExactAlgError::NotSquare(m.rows(), m.cols()));
    }
    Ok(bareiss_determinant(m.to_int_rows()?, BigInt::one(), Execution::Sequential))
}

/// Rank over the prime field with `p` elements.
pub fn rank_mod_p(m: &ExactMatrix, p: u64) -> Result<usize, ExactAlgError> {
    let pb = BigInt::from(p);
    let mut a: Vec<Vec<u64>> = m
        .to_int_rows()?
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|x| {
                    let r = x.mod_floor(&pb);
                    u64::try_from(r).expect("residue fits in u64")
                })
                .collect()
        })
        .collect();
    let p128 = p as u128;
    let mut rank = 0;
    for col in 0..m.cols() {
        let Some(piv) = (rank..a.len()).find(|&r| a[r][col] != 0) else { continue };
        a.swap(rank, piv);
        let inv = crate::wpoly::finite_field::inv_mod(a[rank][col], p);
        for r in 0..a.len() {
            if r != rank && a[r][col] != 0 {
                let f = (a[r][col] as u128 * inv as u128 % p128) as u64;
                for j in col..m.cols() {
                    let sub = (f as u128 * a[rank][j] as u128 % p128) as u64;
                    a[r][j] = (a[r][j] + p - sub) % p;
                }
            }
        }
        rank += 1;
    }
    Ok(rank)
}
