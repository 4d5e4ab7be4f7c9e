//! Dense linear algebra over the rationals.
//!
//! Everything here is exact. Subspaces are kept in reduced row-echelon form,
//! so two subspaces are equal exactly when their basis matrices are equal.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

/// Integer as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `p/q` as a canonical rational. Panics if `q == 0`.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Vector of rationals from small integers.
pub fn int_vec(values: &[i64]) -> Vec<Rational> {
    values.iter().map(|&v| int(v)).collect()
}

/// Standard basis vector `e_index` of length `len`.
pub fn unit_vector(len: usize, index: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); len];
    v[index] = Rational::one();
    v
}

/// Displays a coordinate vector as `(a, b, c)`.
pub struct Coords<'a>(pub &'a [Rational]);

impl core::fmt::Display for Coords<'_> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str("(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

pub fn is_zero_vector(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinAlgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("row {row} has length {found}, expected {expected}")]
    RaggedRows { row: usize, expected: usize, found: usize },
    #[error("matrix is singular")]
    Singular,
}

fn check_len(expected: usize, found: usize) -> Result<(), LinAlgError> {
    if expected == found {
        Ok(())
    } else {
        Err(LinAlgError::DimensionMismatch { expected, found })
    }
}

/// Dense row-major matrix of rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    /// Square matrix with `diagonal` on its diagonal.
    pub fn from_diagonal(diagonal: &[Rational]) -> Self {
        let n = diagonal.len();
        let mut m = Matrix::zeros(n, n);
        for (i, d) in diagonal.iter().enumerate() {
            m[(i, i)] = d.clone();
        }
        m
    }

    pub fn from_flat(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self, LinAlgError> {
        check_len(rows * cols, entries.len())?;
        Ok(Matrix { rows, cols, entries })
    }

    /// Builds a matrix from row vectors. An empty list yields a `0 x cols`
    /// matrix only through [`Matrix::from_rows_with_cols`].
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, LinAlgError> {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows_with_cols(cols, rows)
    }

    pub fn from_rows_with_cols(cols: usize, rows: Vec<Vec<Rational>>) -> Result<Self, LinAlgError> {
        let nrows = rows.len();
        let mut entries = Vec::with_capacity(nrows * cols);
        for (r, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(LinAlgError::RaggedRows {
                    row: r,
                    expected: cols,
                    found: row.len(),
                });
            }
            entries.extend(row);
        }
        Ok(Matrix {
            rows: nrows,
            cols,
            entries,
        })
    }

    /// Convenience constructor from small integers; panics on ragged input.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows_with_cols(cols, rows.iter().map(|r| int_vec(r)).collect()).expect("ragged integer rows")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Rational> {
        self.entries
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> impl Iterator<Item = &[Rational]> + '_ {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn column(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn diagonal(&self) -> Vec<Rational> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vector(&self.entries)
    }

    pub fn is_diagonal(&self) -> bool {
        self.first_nonzero_where(|r, c| r != c).is_none()
    }

    /// First nonzero entry `(row, col)` in row-major order with `pred(row, col)`.
    pub fn first_nonzero_where(&self, pred: impl Fn(usize, usize) -> bool) -> Option<(usize, usize)> {
        (0..self.rows)
            .flat_map(|r| (0..self.cols).map(move |c| (r, c)))
            .find(|&(r, c)| pred(r, c) && !self[(r, c)].is_zero())
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix, LinAlgError> {
        check_len(self.cols, rhs.rows)?;
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for m in 0..self.cols {
                let a = &self[(r, m)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = &rhs[(m, c)];
                    if !b.is_zero() {
                        out[(r, c)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `self · v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>, LinAlgError> {
        check_len(self.cols, v.len())?;
        Ok(self.row_vectors().map(|row| dot(row, v)).collect())
    }

    /// `v · self` for a row vector `v`.
    pub fn vec_mul(&self, v: &[Rational]) -> Result<Vec<Rational>, LinAlgError> {
        check_len(self.rows, v.len())?;
        let mut out = vec![Rational::zero(); self.cols];
        for (r, coeff) in v.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(self.row(r)) {
                *o += coeff * x;
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &Matrix) -> Result<Matrix, LinAlgError> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Matrix) -> Result<Matrix, LinAlgError> {
        self.zip_with(rhs, |a, b| a - b)
    }

    pub fn scale(&self, k: &Rational) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|x| x * k).collect(),
        }
    }

    /// Matrix commutator `self·rhs − rhs·self`.
    pub fn commutator(&self, rhs: &Matrix) -> Result<Matrix, LinAlgError> {
        self.mul(rhs)?.sub(&rhs.mul(self)?)
    }

    fn zip_with(&self, rhs: &Matrix, f: impl Fn(&Rational, &Rational) -> Rational) -> Result<Matrix, LinAlgError> {
        check_len(self.rows, rhs.rows)?;
        check_len(self.cols, rhs.cols)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| f(a, b)).collect(),
        })
    }

    /// Stacks `self` on top of `below`.
    pub fn vstack(&self, below: &Matrix) -> Result<Matrix, LinAlgError> {
        check_len(self.cols, below.cols)?;
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&below.entries);
        Ok(Matrix {
            rows: self.rows + below.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn inverse(&self) -> Result<Matrix, LinAlgError> {
        check_len(self.rows, self.cols)?;
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug[(r, c)] = self[(r, c)].clone();
            }
            aug[(r, n + r)] = Rational::one();
        }
        let (reduced, pivots) = rref(&aug);
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(LinAlgError::Singular);
        }
        let mut inv = Matrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                inv[(r, c)] = reduced[(r, n + c)].clone();
            }
        }
        Ok(inv)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Rational;

    fn index(&self, (r, c): (usize, usize)) -> &Rational {
        assert!(r < self.rows && c < self.cols, "matrix index out of range");
        &self.entries[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rational {
        assert!(r < self.rows && c < self.cols, "matrix index out of range");
        &mut self.entries[r * self.cols + c]
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Reduced row-echelon form. Zero rows are dropped, so the returned matrix
/// has exactly `rank` rows; the second component lists the pivot columns.
pub fn rref(m: &Matrix) -> (Matrix, Vec<usize>) {
    let mut work = m.clone();
    let (rows, cols) = (work.rows, work.cols);
    let mut pivots = Vec::new();
    let mut pivot_row = 0;

    for col in 0..cols {
        if pivot_row == rows {
            break;
        }
        let Some(found) = (pivot_row..rows).find(|&r| !work[(r, col)].is_zero()) else {
            continue;
        };
        swap_rows(&mut work, found, pivot_row);

        let inv = work[(pivot_row, col)].recip();
        for c in col..cols {
            let scaled = &work[(pivot_row, c)] * &inv;
            work[(pivot_row, c)] = scaled;
        }
        let pivot_vals: Vec<Rational> = work.row(pivot_row).to_vec();
        for r in 0..rows {
            if r == pivot_row || work[(r, col)].is_zero() {
                continue;
            }
            let factor = work[(r, col)].clone();
            for c in col..cols {
                if !pivot_vals[c].is_zero() {
                    let delta = &factor * &pivot_vals[c];
                    work[(r, c)] -= delta;
                }
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }

    work.entries.truncate(pivot_row * cols);
    work.rows = pivot_row;
    (work, pivots)
}

fn swap_rows(m: &mut Matrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    let cols = m.cols;
    for c in 0..cols {
        m.entries.swap(a * cols + c, b * cols + c);
    }
}

pub fn rank(m: &Matrix) -> usize {
    rref(m).1.len()
}

/// Canonical basis of `{v : m·v = 0}`.
pub fn nullspace(m: &Matrix) -> Subspace {
    let (reduced, pivots) = rref(m);
    let cols = m.cols;
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let basis: Vec<Vec<Rational>> = (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = unit_vector(cols, free);
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -reduced[(r, free)].clone();
            }
            v
        })
        .collect();
    Subspace::from_vectors(cols, basis)
}

/// Some `x` with `a·x = b`, or `None` when the system is inconsistent.
/// Free variables are set to zero.
pub fn solve(a: &Matrix, b: &[Rational]) -> Result<Option<Vec<Rational>>, LinAlgError> {
    check_len(a.rows, b.len())?;
    let mut aug = Matrix::zeros(a.rows, a.cols + 1);
    for r in 0..a.rows {
        for c in 0..a.cols {
            aug[(r, c)] = a[(r, c)].clone();
        }
        aug[(r, a.cols)] = b[r].clone();
    }
    let (reduced, pivots) = rref(&aug);
    if pivots.last() == Some(&a.cols) {
        return Ok(None);
    }
    let mut x = vec![Rational::zero(); a.cols];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = reduced[(r, a.cols)].clone();
    }
    Ok(Some(x))
}

/// A linear subspace of `ℚ^ambient_dim`, stored as an RREF basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Matrix::zeros(0, ambient_dim),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Matrix::identity(ambient_dim),
            pivots: (0..ambient_dim).collect(),
        }
    }

    /// Row space of `m`.
    pub fn row_space(m: &Matrix) -> Self {
        let (basis, pivots) = rref(m);
        Subspace {
            ambient_dim: m.cols,
            basis,
            pivots,
        }
    }

    /// Span of vectors already known to have length `ambient_dim`.
    fn from_vectors(ambient_dim: usize, vectors: Vec<Vec<Rational>>) -> Self {
        let m = Matrix::from_rows_with_cols(ambient_dim, vectors).expect("vector length checked by caller");
        Self::row_space(&m)
    }

    pub fn span_of<V: AsRef<[Rational]>>(ambient_dim: usize, vectors: &[V]) -> Result<Self, LinAlgError> {
        let rows = vectors
            .iter()
            .map(|v| {
                let v = v.as_ref();
                check_len(ambient_dim, v.len()).map(|_| v.to_vec())
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_vectors(ambient_dim, rows))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// RREF basis, one vector per row.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> impl Iterator<Item = &[Rational]> + '_ {
        self.basis.row_vectors()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Remainder of `v` after reduction against the basis; zero iff `v` lies
    /// in the subspace.
    pub fn reduce(&self, v: &[Rational]) -> Result<Vec<Rational>, LinAlgError> {
        check_len(self.ambient_dim, v.len())?;
        let mut rem = v.to_vec();
        for (r, &p) in self.pivots.iter().enumerate() {
            if rem[p].is_zero() {
                continue;
            }
            let factor = rem[p].clone();
            for (x, b) in rem.iter_mut().zip(self.basis.row(r)) {
                if !b.is_zero() {
                    *x -= &factor * b;
                }
            }
        }
        Ok(rem)
    }

    pub fn contains(&self, v: &[Rational]) -> Result<bool, LinAlgError> {
        Ok(is_zero_vector(&self.reduce(v)?))
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool, LinAlgError> {
        check_len(other.ambient_dim, self.ambient_dim)?;
        for v in self.basis_vectors() {
            if !other.contains(v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinAlgError> {
        Ok(Subspace::row_space(&self.basis.vstack(&other.basis)?))
    }
}

/// Equality of canonical subspaces is equality of their basis matrices.
pub fn subspace_equal(a: &Subspace, b: &Subspace) -> Result<bool, LinAlgError> {
    check_len(a.ambient_dim, b.ambient_dim)?;
    Ok(a.basis == b.basis)
}
