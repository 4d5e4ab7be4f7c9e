//! Finite-dimensional Lie algebras given by structure constants.
//!
//! Indices are 0-based in code; error messages print them 1-based so they
//! line up with the `e1 … en` labels used in files and reports.
//!
//! The adjoint operator uses the right action `ad_x(w) = [w, x]`, and every
//! matrix of a linear map is stored with row `i` holding the coordinates of
//! the image of `e_i`. With this layout the action of a Cartan-type element
//! on a graded nilpotent ideal is upper triangular.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;
use thiserror::Error;

use crate::exactlin::{self, is_zero_vector, Coords, LinAlgError, Matrix, Rational, Subspace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LieError {
    #[error("Jacobi identity fails for (e{}, e{}, e{}); residual {}", .i + 1, .j + 1, .l + 1, Coords(.residual))]
    JacobiViolation {
        i: usize,
        j: usize,
        l: usize,
        residual: Vec<Rational>,
    },
    #[error("antisymmetry fails: c[{}][{}][{}] != -c[{}][{}][{}]", .i + 1, .j + 1, .k + 1, .j + 1, .i + 1, .k + 1)]
    AntisymmetryViolation { i: usize, j: usize, k: usize },
    #[error("bracket entry ({}, {}) must satisfy i < j <= dim = {dim}", .i + 1, .j + 1)]
    InvalidPair { i: usize, j: usize, dim: usize },
    #[error("bracket entry ({}, {}) is given twice", .i + 1, .j + 1)]
    DuplicatePair { i: usize, j: usize },
    #[error("term index {} exceeds dim = {dim}", .k + 1)]
    TermOutOfRange { k: usize, dim: usize },
    #[error("expected {expected} structure constants, found {found}")]
    ConstantCount { expected: usize, found: usize },
    #[error("expected {expected} labels, found {found}")]
    LabelCount { expected: usize, found: usize },
    #[error("algebra is not nilpotent")]
    NotNilpotent,
    #[error("first {0} basis vectors do not span a subalgebra")]
    NotASubalgebra(usize),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

/// One row of a multiplication table: `[e_i, e_j] = Σ c·e_k` with `i < j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub terms: Vec<(usize, Rational)>,
}

impl BracketEntry {
    pub fn new(i: usize, j: usize, terms: Vec<(usize, Rational)>) -> Self {
        BracketEntry { i, j, terms }
    }

    /// `[e_i, e_j] = e_k`.
    pub fn unit(i: usize, j: usize, k: usize) -> Self {
        BracketEntry::new(i, j, vec![(k, exactlin::int(1))])
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LieAlgebra {
    dim: usize,
    /// `c[(i*dim + j)*dim + k]` is the coefficient of `e_k` in `[e_i, e_j]`.
    constants: Vec<Rational>,
    labels: Option<Vec<String>>,
}

impl LieAlgebra {
    /// Builds an algebra from the entries with `i < j`; the rest of the table
    /// follows by antisymmetry. The Jacobi identity is checked here.
    pub fn from_table(dim: usize, entries: &[BracketEntry]) -> Result<Self, LieError> {
        let mut constants = vec![Rational::zero(); dim * dim * dim];
        let mut seen = vec![false; dim * dim];
        for e in entries {
            if e.i >= e.j || e.j >= dim {
                return Err(LieError::InvalidPair { i: e.i, j: e.j, dim });
            }
            if core::mem::replace(&mut seen[e.i * dim + e.j], true) {
                return Err(LieError::DuplicatePair { i: e.i, j: e.j });
            }
            for (k, c) in &e.terms {
                if *k >= dim {
                    return Err(LieError::TermOutOfRange { k: *k, dim });
                }
                constants[(e.i * dim + e.j) * dim + k] += c;
                constants[(e.j * dim + e.i) * dim + k] -= c;
            }
        }
        let algebra = LieAlgebra {
            dim,
            constants,
            labels: None,
        };
        algebra.check_jacobi()?;
        Ok(algebra)
    }

    /// Builds an algebra from a full `dim³` constant array, checking
    /// antisymmetry and Jacobi.
    pub fn from_structure_constants(dim: usize, constants: Vec<Rational>) -> Result<Self, LieError> {
        if constants.len() != dim * dim * dim {
            return Err(LieError::ConstantCount {
                expected: dim * dim * dim,
                found: constants.len(),
            });
        }
        let algebra = LieAlgebra {
            dim,
            constants,
            labels: None,
        };
        for i in 0..dim {
            for j in i..dim {
                for k in 0..dim {
                    if *algebra.c(i, j, k) != -algebra.c(j, i, k).clone() {
                        return Err(LieError::AntisymmetryViolation { i, j, k });
                    }
                }
            }
        }
        algebra.check_jacobi()?;
        Ok(algebra)
    }

    pub fn abelian(dim: usize) -> Self {
        LieAlgebra {
            dim,
            constants: vec![Rational::zero(); dim * dim * dim],
            labels: None,
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, LieError> {
        if labels.len() != self.dim {
            return Err(LieError::LabelCount {
                expected: self.dim,
                found: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Label of basis vector `i`, defaulting to `e{i+1}`.
    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => format!("e{}", i + 1),
        }
    }

    /// Flat constant array, see the field documentation for the layout.
    pub fn structure_constants(&self) -> &[Rational] {
        &self.constants
    }

    pub fn c(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.constants[(i * self.dim + j) * self.dim + k]
    }

    /// Coordinates of `[e_i, e_j]`.
    pub fn basis_bracket(&self, i: usize, j: usize) -> &[Rational] {
        let start = (i * self.dim + j) * self.dim;
        &self.constants[start..start + self.dim]
    }

    /// Nonzero table entries with `i < j`, in lexicographic order.
    pub fn table(&self) -> Vec<BracketEntry> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let terms: Vec<(usize, Rational)> = self
                    .basis_bracket(i, j)
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| (k, c.clone()))
                    .collect();
                if !terms.is_empty() {
                    out.push(BracketEntry { i, j, terms });
                }
            }
        }
        out
    }

    fn check_jacobi(&self) -> Result<(), LieError> {
        let n = self.dim;
        for i in 0..n {
            for j in i + 1..n {
                for l in j + 1..n {
                    let residual = self.jacobi_residual(i, j, l);
                    if !is_zero_vector(&residual) {
                        return Err(LieError::JacobiViolation { i, j, l, residual });
                    }
                }
            }
        }
        Ok(())
    }

    /// `[[e_i,e_j],e_l] + [[e_j,e_l],e_i] + [[e_l,e_i],e_j]`.
    fn jacobi_residual(&self, i: usize, j: usize, l: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim];
        for (a, b, c) in [(i, j, l), (j, l, i), (l, i, j)] {
            for (m, coeff) in self.basis_bracket(a, b).iter().enumerate() {
                if coeff.is_zero() {
                    continue;
                }
                for (o, x) in out.iter_mut().zip(self.basis_bracket(m, c)) {
                    *o += coeff * x;
                }
            }
        }
        out
    }

    fn check_vec(&self, v: &[Rational]) -> Result<(), LieError> {
        if v.len() == self.dim {
            Ok(())
        } else {
            Err(LinAlgError::DimensionMismatch {
                expected: self.dim,
                found: v.len(),
            }
            .into())
        }
    }

    pub fn bracket(&self, u: &[Rational], v: &[Rational]) -> Result<Vec<Rational>, LieError> {
        self.check_vec(u)?;
        self.check_vec(v)?;
        Ok(self.bracket_unchecked(u, v))
    }

    pub(crate) fn bracket_unchecked(&self, u: &[Rational], v: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim];
        for (i, a) in u.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in v.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                let ab = a * b;
                for (o, c) in out.iter_mut().zip(self.basis_bracket(i, j)) {
                    if !c.is_zero() {
                        *o += &ab * c;
                    }
                }
            }
        }
        out
    }

    /// Matrix of `w ↦ [w, x]`; row `i` is `[e_i, x]`.
    pub fn ad(&self, x: &[Rational]) -> Result<Matrix, LieError> {
        self.check_vec(x)?;
        let n = self.dim;
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            for (j, xj) in x.iter().enumerate().filter(|(_, xj)| !xj.is_zero()) {
                for k in 0..n {
                    let c = self.c(i, j, k);
                    if !c.is_zero() {
                        m[(i, k)] += xj * c;
                    }
                }
            }
        }
        Ok(m)
    }

    /// `ad(e_j)`.
    pub fn ad_basis(&self, j: usize) -> Matrix {
        self.ad(&exactlin::unit_vector(self.dim, j))
            .expect("unit vector has algebra dimension")
    }

    pub fn center(&self) -> Subspace {
        let n = self.dim;
        // Row (i, k), column l: coefficient of e_k in [e_l, e_i].
        let mut system = Matrix::zeros(n * n, n);
        for i in 0..n {
            for k in 0..n {
                for l in 0..n {
                    system[(i * n + k, l)] = self.c(l, i, k).clone();
                }
            }
        }
        exactlin::nullspace(&system)
    }

    /// `[S, T]`, spanned by brackets of basis representatives.
    pub fn product(&self, s: &Subspace, t: &Subspace) -> Subspace {
        let brackets: Vec<Vec<Rational>> = s
            .basis_vectors()
            .flat_map(|u| t.basis_vectors().map(move |v| self.bracket_unchecked(u, v)))
            .collect();
        Subspace::span_of(self.dim, &brackets).expect("brackets have algebra dimension")
    }

    /// `true` if `[L, s] ⊆ s`.
    pub fn is_ideal(&self, s: &Subspace) -> bool {
        self.product(&Subspace::full(self.dim), s)
            .is_subspace_of(s)
            .expect("same ambient dimension")
    }

    pub fn derived_series(&self) -> SeriesReport {
        self.series(|_, term| self.product(term, term))
    }

    pub fn lower_central_series(&self) -> SeriesReport {
        let whole = Subspace::full(self.dim);
        self.series(|_, term| self.product(&whole, term))
    }

    fn series(&self, next: impl Fn(&Self, &Subspace) -> Subspace) -> SeriesReport {
        let mut terms = vec![Subspace::full(self.dim)];
        loop {
            let last = terms.last().expect("series is never empty");
            if last.is_zero() {
                return SeriesReport {
                    terms,
                    stabilized: false,
                };
            }
            let following = next(self, last);
            if following == *last {
                return SeriesReport {
                    terms,
                    stabilized: true,
                };
            }
            terms.push(following);
        }
    }

    pub fn is_solvable(&self) -> bool {
        !self.derived_series().stabilized
    }

    pub fn is_nilpotent(&self) -> bool {
        !self.lower_central_series().stabilized
    }

    /// `dim N − dim [N, N]` for nilpotent `N`.
    pub fn generator_count(&self) -> Result<usize, LieError> {
        if !self.is_nilpotent() {
            return Err(LieError::NotNilpotent);
        }
        let whole = Subspace::full(self.dim);
        Ok(self.dim - self.product(&whole, &whole).dim())
    }

    /// The subalgebra spanned by the first `m` basis vectors, with the same
    /// labels. Fails unless those vectors are closed under the bracket.
    pub fn prefix_subalgebra(&self, m: usize) -> Result<LieAlgebra, LieError> {
        if m > self.dim {
            return Err(LieError::NotASubalgebra(m));
        }
        let mut constants = Vec::with_capacity(m * m * m);
        for i in 0..m {
            for j in 0..m {
                let b = self.basis_bracket(i, j);
                if b[m..].iter().any(|c| !c.is_zero()) {
                    return Err(LieError::NotASubalgebra(m));
                }
                constants.extend_from_slice(&b[..m]);
            }
        }
        Ok(LieAlgebra {
            dim: m,
            constants,
            labels: self.labels.as_ref().map(|l| l[..m].to_vec()),
        })
    }

    /// The same algebra written in a new basis. Row `p` of `new_basis` gives
    /// the old coordinates of the `p`-th new basis vector. Labels are dropped.
    pub fn change_basis(&self, new_basis: &Matrix) -> Result<LieAlgebra, LieError> {
        let n = self.dim;
        if new_basis.rows() != n || new_basis.cols() != n {
            return Err(LinAlgError::DimensionMismatch {
                expected: n,
                found: new_basis.rows().max(new_basis.cols()),
            }
            .into());
        }
        let inverse = new_basis.inverse()?;
        let mut constants = Vec::with_capacity(n * n * n);
        for p in 0..n {
            for q in 0..n {
                let old = self.bracket_unchecked(new_basis.row(p), new_basis.row(q));
                constants.extend(inverse.vec_mul(&old)?);
            }
        }
        Ok(LieAlgebra {
            dim: n,
            constants,
            labels: None,
        })
    }
}

/// A descending series of subspaces starting from the whole algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesReport {
    /// Distinct terms, each containing the next.
    pub terms: Vec<Subspace>,
    /// `true` if the series became stationary at a nonzero term, `false` if
    /// it reached zero.
    pub stabilized: bool,
}

impl SeriesReport {
    pub fn dims(&self) -> Vec<usize> {
        self.terms.iter().map(Subspace::dim).collect()
    }
}
