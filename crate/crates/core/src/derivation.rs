//! Derivation spaces, inner derivations and outer-derivation certificates.
//!
//! A linear map `D` is stored as an `n x n` matrix whose row `i` holds the
//! coordinates of `D(e_i)`. Vectorization into `ℚ^(n²)` is row-major, so
//! entry `(i, k)` sits at index `i*n + k`.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_traits::Zero;
use thiserror::Error;

use crate::exactlin::{self, is_zero_vector, LinAlgError, Matrix, Rational, Subspace};
use crate::lie::LieAlgebra;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DerivationError {
    #[error("map violates the Leibniz rule on (e{}, e{})", .i + 1, .j + 1)]
    NotADerivation { i: usize, j: usize },
    #[error("map must be {expected}x{expected}, found {rows}x{cols}")]
    Shape { expected: usize, rows: usize, cols: usize },
    #[error("internal invariant violated: ad(e{}) is not a derivation", .0 + 1)]
    InternalInvariantViolation(usize),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

/// A linear map known to satisfy the Leibniz rule on its algebra.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Derivation {
    matrix: Matrix,
}

impl Derivation {
    pub fn new(algebra: &LieAlgebra, matrix: Matrix) -> Result<Self, DerivationError> {
        check_shape(algebra, &matrix)?;
        match leibniz_defect(algebra, &matrix) {
            Some((i, j)) => Err(DerivationError::NotADerivation { i, j }),
            None => Ok(Derivation { matrix }),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }

    /// Row-major vectorization.
    pub fn to_vector(&self) -> Vec<Rational> {
        self.matrix.entries().to_vec()
    }
}

fn check_shape(algebra: &LieAlgebra, m: &Matrix) -> Result<(), DerivationError> {
    let n = algebra.dim();
    if m.rows() != n || m.cols() != n {
        return Err(DerivationError::Shape {
            expected: n,
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    Ok(())
}

/// Which route produced a certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Branch {
    /// The diagonal part of some `ad(x_a)` whose nilpotent part is not inner.
    Case1EarlyExit,
    /// A torus element outside the span of the `ad(x_a')`, extended by zero.
    Case1Torus,
    /// Nontrivial center; found by scanning the derivation space.
    Case2Center,
    /// Plain scan of the derivation space.
    GenericScan,
}

impl Branch {
    pub const ALL: [Branch; 4] = [
        Branch::Case1EarlyExit,
        Branch::Case1Torus,
        Branch::Case2Center,
        Branch::GenericScan,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Branch::Case1EarlyExit => "case1-early-exit",
            Branch::Case1Torus => "case1-torus",
            Branch::Case2Center => "case2-center",
            Branch::GenericScan => "generic-scan",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown branch name")]
pub struct UnknownBranch;

impl FromStr for Branch {
    type Err = UnknownBranch;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Branch::ALL.into_iter().find(|b| b.as_str() == s).ok_or(UnknownBranch)
    }
}

/// A derivation together with the two checks that make it outer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OuterCertificate {
    pub derivation: Derivation,
    pub leibniz_checked: bool,
    /// The system `ad(z) = D` in the unknown `z` has no solution.
    pub inner_system_inconsistent: bool,
    pub branch: Branch,
}

impl OuterCertificate {
    pub fn is_valid(&self) -> bool {
        self.leibniz_checked && self.inner_system_inconsistent
    }
}

/// Runs both checks on `matrix` and packages the result. The returned
/// certificate may be invalid; callers inspect [`OuterCertificate::is_valid`].
pub fn certify(algebra: &LieAlgebra, matrix: Matrix, branch: Branch) -> Result<OuterCertificate, DerivationError> {
    check_shape(algebra, &matrix)?;
    let leibniz_checked = leibniz_defect(algebra, &matrix).is_none();
    let inner_system_inconsistent = leibniz_checked && is_inner(algebra, &matrix)?.is_none();
    Ok(OuterCertificate {
        derivation: Derivation { matrix },
        leibniz_checked,
        inner_system_inconsistent,
        branch,
    })
}

/// First basis pair `(i, j)`, `i < j`, on which the Leibniz rule fails.
pub fn leibniz_defect(algebra: &LieAlgebra, d: &Matrix) -> Option<(usize, usize)> {
    let n = algebra.dim();
    let images: Vec<&[Rational]> = d.row_vectors().collect();
    for i in 0..n {
        for j in i + 1..n {
            // D[e_i, e_j] as a row vector: [e_i, e_j] · D.
            let lhs = d.vec_mul(algebra.basis_bracket(i, j)).ok()?;
            let ej = exactlin::unit_vector(n, j);
            let ei = exactlin::unit_vector(n, i);
            let a = algebra.bracket_unchecked(images[i], &ej);
            let b = algebra.bracket_unchecked(&ei, images[j]);
            let ok = lhs.iter().zip(a.iter().zip(&b)).all(|(l, (x, y))| *l == x + y);
            if !ok {
                return Some((i, j));
            }
        }
    }
    None
}

/// The `n·n(n−1)/2 × n²` Leibniz system. Row `(i<j, k)` encodes the `e_k`
/// coordinate of `D[e_i,e_j] − [De_i,e_j] − [e_i,De_j] = 0`.
fn leibniz_system(algebra: &LieAlgebra) -> Matrix {
    let n = algebra.dim();
    let pairs = n * n.saturating_sub(1) / 2;
    let mut system = Matrix::zeros(pairs * n, n * n);
    let mut row = 0;
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                for m in 0..n {
                    let c = algebra.c(i, j, m);
                    if !c.is_zero() {
                        system[(row, m * n + k)] += c;
                    }
                }
                for b in 0..n {
                    let c = algebra.c(b, j, k);
                    if !c.is_zero() {
                        system[(row, i * n + b)] -= c;
                    }
                    let c = algebra.c(i, b, k);
                    if !c.is_zero() {
                        system[(row, j * n + b)] -= c;
                    }
                }
                row += 1;
            }
        }
    }
    system
}

/// All derivations, as a subspace of `ℚ^(n²)`.
pub fn derivation_space(algebra: &LieAlgebra) -> Subspace {
    let n = algebra.dim();
    if n < 2 {
        return Subspace::full(n * n);
    }
    exactlin::nullspace(&leibniz_system(algebra))
}

/// `n² x n` matrix whose column `l` is the vectorized `ad(e_l)`.
fn inner_system(algebra: &LieAlgebra) -> Matrix {
    let n = algebra.dim();
    let mut system = Matrix::zeros(n * n, n);
    for l in 0..n {
        for (idx, v) in algebra.ad_basis(l).entries().iter().enumerate() {
            system[(idx, l)] = v.clone();
        }
    }
    system
}

pub fn inner_derivation_space(algebra: &LieAlgebra) -> Subspace {
    Subspace::row_space(&inner_system(algebra).transpose())
}

/// `dim Der(L) − dim InDer(L)`.
pub fn outer_dimension(algebra: &LieAlgebra) -> Result<usize, DerivationError> {
    let der = derivation_space(algebra);
    for l in 0..algebra.dim() {
        if !der.contains(algebra.ad_basis(l).entries())? {
            return Err(DerivationError::InternalInvariantViolation(l));
        }
    }
    Ok(der.dim() - inner_derivation_space(algebra).dim())
}

/// Some `z` with `ad(z) = D`, or `None` if `D` is outer. The solution is
/// unique only modulo the center.
pub fn is_inner(algebra: &LieAlgebra, d: &Matrix) -> Result<Option<Vec<Rational>>, DerivationError> {
    check_shape(algebra, d)?;
    if let Some((i, j)) = leibniz_defect(algebra, d) {
        return Err(DerivationError::NotADerivation { i, j });
    }
    Ok(exactlin::solve(&inner_system(algebra), d.entries())?)
}

/// The first canonical basis vector of `Der(L)` outside `InDer(L)`, after
/// re-checking both certificate conditions.
pub fn find_outer_derivation(algebra: &LieAlgebra) -> Option<OuterCertificate> {
    find_outer_with_branch(algebra, Branch::GenericScan)
}

pub(crate) fn find_outer_with_branch(algebra: &LieAlgebra, branch: Branch) -> Option<OuterCertificate> {
    let n = algebra.dim();
    let inner = inner_derivation_space(algebra);
    let candidate = derivation_space(algebra)
        .basis_vectors()
        .find(|v| !inner.contains(v).expect("same ambient dimension"))?
        .to_vec();
    let matrix = Matrix::from_flat(n, n, candidate).expect("vector has n² entries");
    let cert = certify(algebra, matrix, branch).ok()?;
    cert.is_valid().then_some(cert)
}

/// `true` if every vector of `Der(L)` has zero residue.
pub fn all_inner(algebra: &LieAlgebra) -> bool {
    let inner = inner_derivation_space(algebra);
    derivation_space(algebra)
        .basis_vectors()
        .all(|v| is_zero_vector(&inner.reduce(v).expect("same ambient dimension")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{int, int_vec, rank};
    use crate::lie::BracketEntry;
    use alloc::vec;

    fn h3() -> LieAlgebra {
        LieAlgebra::from_table(3, &[BracketEntry::unit(0, 1, 2)]).unwrap()
    }

    fn r2() -> LieAlgebra {
        LieAlgebra::from_table(2, &[BracketEntry::unit(0, 1, 0)]).unwrap()
    }

    fn so3() -> LieAlgebra {
        LieAlgebra::from_table(
            3,
            &[
                BracketEntry::unit(0, 1, 2),
                BracketEntry::unit(1, 2, 0),
                BracketEntry::new(0, 2, vec![(1, int(-1))]),
            ],
        )
        .unwrap()
    }

    /// Independent oracle: assemble the Leibniz conditions by applying every
    /// elementary matrix unit E_{ab} to each pair and reading off coordinates.
    fn der_dim_oracle(l: &LieAlgebra) -> usize {
        let n = l.dim();
        let mut columns = Vec::new();
        for a in 0..n {
            for b in 0..n {
                let mut unit = Matrix::zeros(n, n);
                unit[(a, b)] = int(1);
                let apply = |v: &[Rational]| unit.vec_mul(v).unwrap();
                let mut col = Vec::new();
                for i in 0..n {
                    for j in i + 1..n {
                        let ei = exactlin::unit_vector(n, i);
                        let ej = exactlin::unit_vector(n, j);
                        let lhs = apply(&l.bracket(&ei, &ej).unwrap());
                        let r1 = l.bracket(&apply(&ei), &ej).unwrap();
                        let r2 = l.bracket(&ei, &apply(&ej)).unwrap();
                        col.extend(lhs.iter().zip(r1.iter().zip(&r2)).map(|(x, (y, z))| x - y - z));
                    }
                }
                columns.push(col);
            }
        }
        if columns[0].is_empty() {
            return n * n;
        }
        let system = Matrix::from_rows(columns).unwrap().transpose();
        n * n - rank(&system)
    }

    fn inner_dim_oracle(l: &LieAlgebra) -> usize {
        let vecs: Vec<Vec<Rational>> = (0..l.dim()).map(|i| l.ad_basis(i).into_entries()).collect();
        Subspace::span_of(l.dim() * l.dim(), &vecs).unwrap().dim()
    }

    #[test]
    fn derivation_space_examples() {
        assert_eq!(derivation_space(&LieAlgebra::abelian(2)).dim(), 4);
        assert_eq!(der_dim_oracle(&h3()), 6);
        assert_eq!(derivation_space(&h3()).dim(), 6);
        assert_eq!(der_dim_oracle(&r2()), 2);
        assert_eq!(derivation_space(&r2()).dim(), 2);
        // General derivation of r2: D e1 = a e1, D e2 = c e1.
        let expected = Subspace::span_of(4, &[int_vec(&[1, 0, 0, 0]), int_vec(&[0, 0, 1, 0])]).unwrap();
        assert_eq!(derivation_space(&r2()), expected);
        assert_eq!(der_dim_oracle(&so3()), 3);
    }

    #[test]
    fn inner_space_examples() {
        assert!(inner_derivation_space(&LieAlgebra::abelian(3)).is_zero());
        assert_eq!(inner_dim_oracle(&h3()), 2);
        assert_eq!(inner_derivation_space(&h3()).dim(), 2);
        assert_eq!(inner_derivation_space(&r2()).dim(), 2);
    }

    #[test]
    fn outer_dimension_examples() {
        assert_eq!(outer_dimension(&LieAlgebra::abelian(2)).unwrap(), 4);
        assert_eq!(outer_dimension(&h3()).unwrap(), 4);
        assert_eq!(outer_dimension(&r2()).unwrap(), 0);
        assert_eq!(outer_dimension(&so3()).unwrap(), 0);
    }

    #[test]
    fn is_inner_examples() {
        let h = h3();
        let z = is_inner(&h, &h.ad_basis(1)).unwrap().expect("inner by construction");
        assert_eq!(h.ad(&z).unwrap(), h.ad_basis(1));

        let weight = Matrix::from_diagonal(&int_vec(&[1, 1, 2]));
        assert_eq!(is_inner(&h, &weight).unwrap(), None);

        let z = is_inner(&h, &Matrix::zeros(3, 3)).unwrap().unwrap();
        assert!(h.center().contains(&z).unwrap());

        let not_der = Matrix::from_diagonal(&int_vec(&[1, 0, 0]));
        assert_eq!(
            is_inner(&h, &not_der),
            Err(DerivationError::NotADerivation { i: 0, j: 1 })
        );
    }

    #[test]
    fn find_outer_examples() {
        let cert = find_outer_derivation(&h3()).expect("nilpotent algebras have outer derivations");
        assert!(cert.is_valid());
        assert_eq!(cert.branch, Branch::GenericScan);
        assert!(find_outer_derivation(&r2()).is_none());
        assert!(find_outer_derivation(&so3()).is_none());
    }

    #[test]
    fn branch_names_round_trip() {
        for b in Branch::ALL {
            assert_eq!(b.as_str().parse::<Branch>(), Ok(b));
        }
        assert!("case3".parse::<Branch>().is_err());
    }

    #[test]
    fn commutators_of_derivations_are_derivations() {
        let h = h3();
        let der = derivation_space(&h);
        let mats: Vec<Matrix> = der
            .basis_vectors()
            .map(|v| Matrix::from_flat(3, 3, v.to_vec()).unwrap())
            .collect();
        for a in &mats {
            for b in &mats {
                let c = a.commutator(b).unwrap();
                assert!(der.contains(c.entries()).unwrap());
                assert!(Derivation::new(&h, c).is_ok());
            }
        }
    }
}
