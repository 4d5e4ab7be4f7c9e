//! Diagonal derivations and weights of a nilpotent algebra in an adapted basis.
//!
//! An adapted basis lists the `k` generators first and has every structure
//! constant landing in `e_{k+1} … e_n`. In such a basis the diagonal
//! derivations form a torus, and the algebra has maximal rank when that torus
//! has dimension `k`. No attempt is made to find an adapted basis; for any
//! other basis the diagonal-derivation dimension is reported as-is.

use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exactlin::{self, LinAlgError, Matrix, Rational, Subspace};
use crate::lie::{LieAlgebra, LieError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TorusError {
    #[error("torus vector {} is not normalized on the generator block", .0 + 1)]
    NotNormalized(usize),
    #[error("torus vector {} is not a derivation", .0 + 1)]
    NotADerivation(usize),
    #[error("expected {expected} torus vectors, found {found}")]
    WrongCount { expected: usize, found: usize },
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

/// Weights of the standard torus on the non-generators: `alpha(i, j)` is the
/// eigenvalue of the `j`-th standard torus element on `e_i`, `k ≤ i < n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightMatrix {
    n: usize,
    k: usize,
    rows: Matrix,
}

impl WeightMatrix {
    /// `rows` has one row per non-generator and `k` columns.
    pub fn new(n: usize, k: usize, rows: Matrix) -> Result<Self, LinAlgError> {
        if k > n || rows.rows() != n - k || (rows.rows() > 0 && rows.cols() != k) {
            return Err(LinAlgError::DimensionMismatch {
                expected: (n.saturating_sub(k)) * k,
                found: rows.rows() * rows.cols(),
            });
        }
        let rows = if rows.rows() == 0 { Matrix::zeros(0, k) } else { rows };
        Ok(WeightMatrix { n, k, rows })
    }

    pub fn empty(k: usize) -> Self {
        WeightMatrix {
            n: k,
            k,
            rows: Matrix::zeros(0, k),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rows(&self) -> &Matrix {
        &self.rows
    }

    /// Weight of generator `j` on basis vector `i` (absolute index, `i ≥ k`).
    pub fn alpha(&self, i: usize, j: usize) -> &Rational {
        &self.rows[(i - self.k, j)]
    }

    /// Diagonal of the `j`-th standard torus element: 1 at generator `j`,
    /// 0 at other generators, `alpha(i, j)` at non-generators.
    pub fn torus_vector(&self, j: usize) -> Vec<Rational> {
        let mut v = exactlin::unit_vector(self.n, j);
        for (i, vi) in v.iter_mut().enumerate().skip(self.k) {
            *vi = self.alpha(i, j).clone();
        }
        v
    }

    pub fn torus_vectors(&self) -> Vec<Vec<Rational>> {
        (0..self.k).map(|j| self.torus_vector(j)).collect()
    }

    /// All weights are nonnegative integers.
    pub fn is_integral(&self) -> bool {
        self.rows.entries().iter().all(|a| a.is_integer() && !a.is_negative())
    }
}

/// Diagonals `d` such that `diag(d)` is a derivation. Solves
/// `c_ij^k (d_k − d_i − d_j) = 0` directly in the `n` diagonal unknowns.
pub fn diagonal_derivations(algebra: &LieAlgebra) -> Subspace {
    let n = algebra.dim();
    let mut rows = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                let c = algebra.c(i, j, k);
                if c.is_zero() {
                    continue;
                }
                let mut row = alloc::vec![Rational::zero(); n];
                row[k] += Rational::one();
                row[i] -= Rational::one();
                row[j] -= Rational::one();
                rows.push(row);
            }
        }
    }
    let system = Matrix::from_rows_with_cols(n, rows).expect("rows have length n");
    exactlin::nullspace(&system)
}

/// `dim diagonal_derivations(N) == generator_count(N)`.
pub fn has_max_rank(algebra: &LieAlgebra) -> Result<bool, LieError> {
    let k = algebra.generator_count()?;
    Ok(diagonal_derivations(algebra).dim() == k)
}

/// Reads the weight matrix off a normalized torus basis.
pub fn weights_of(algebra: &LieAlgebra, torus_basis: &[Vec<Rational>]) -> Result<WeightMatrix, TorusError> {
    let n = algebra.dim();
    let k = algebra.generator_count()?;
    if torus_basis.len() != k {
        return Err(TorusError::WrongCount {
            expected: k,
            found: torus_basis.len(),
        });
    }
    let diagonals = diagonal_derivations(algebra);
    for (j, t) in torus_basis.iter().enumerate() {
        if t.len() != n {
            return Err(LinAlgError::DimensionMismatch {
                expected: n,
                found: t.len(),
            }
            .into());
        }
        let normalized = (0..k).all(|g| if g == j { t[g].is_one() } else { t[g].is_zero() });
        if !normalized {
            return Err(TorusError::NotNormalized(j));
        }
        if !diagonals.contains(t)? {
            return Err(TorusError::NotADerivation(j));
        }
    }
    let mut rows = Matrix::zeros(n - k, k);
    for i in k..n {
        for (j, t) in torus_basis.iter().enumerate() {
            rows[(i - k, j)] = t[i].clone();
        }
    }
    Ok(WeightMatrix::new(n, k, rows)?)
}

/// The standard torus in an adapted max-rank basis: the RREF basis of the
/// diagonal derivations, provided its pivots are exactly the generators.
pub fn standard_torus(algebra: &LieAlgebra) -> Result<Option<WeightMatrix>, TorusError> {
    let k = algebra.generator_count()?;
    let diagonals = diagonal_derivations(algebra);
    if diagonals.pivots() != (0..k).collect::<Vec<_>>().as_slice() {
        return Ok(None);
    }
    let basis: Vec<Vec<Rational>> = diagonals.basis_vectors().map(<[Rational]>::to_vec).collect();
    weights_of(algebra, &basis).map(Some)
}
