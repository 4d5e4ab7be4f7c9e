//! Stand-alone re-verification of outer-derivation certificates.
//!
//! Works directly on a raw structure-constant array and a candidate matrix.
//! Nothing here calls into the algebra or derivation modules; the only shared
//! code is the exact solver.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::exactlin::{solve, Matrix, Rational};

/// Outcome of an independent certificate check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CertificateCheck {
    pub leibniz: bool,
    pub inner_system_inconsistent: bool,
}

impl CertificateCheck {
    pub fn accepted(&self) -> bool {
        self.leibniz && self.inner_system_inconsistent
    }
}

/// Checks `d` against structure constants laid out as
/// `constants[(i*dim + j)*dim + k] = coefficient of e_k in [e_i, e_j]`,
/// where row `i` of `d` is the image of `e_i`.
pub fn verify_outer(dim: usize, constants: &[Rational], d: &Matrix) -> CertificateCheck {
    let rejected = CertificateCheck {
        leibniz: false,
        inner_system_inconsistent: false,
    };
    if constants.len() != dim * dim * dim || d.rows() != dim || d.cols() != dim {
        return rejected;
    }
    let c = |i: usize, j: usize, k: usize| &constants[(i * dim + j) * dim + k];

    // D[e_i,e_j] = Σ_m c_ij^m D(e_m);  [D e_i, e_j] = Σ_b D_ib c_bj;  [e_i, D e_j] = Σ_b D_jb c_ib.
    let mut leibniz = true;
    'pairs: for i in 0..dim {
        for j in 0..dim {
            for k in 0..dim {
                let mut residual = Rational::zero();
                for m in 0..dim {
                    residual += c(i, j, m) * &d[(m, k)];
                    residual -= &d[(i, m)] * c(m, j, k);
                    residual -= &d[(j, m)] * c(i, m, k);
                }
                if !residual.is_zero() {
                    leibniz = false;
                    break 'pairs;
                }
            }
        }
    }
    if !leibniz {
        return rejected;
    }

    // ad(z)(e_i) = [e_i, z] = Σ_l z_l Σ_k c_il^k e_k; unknowns z_l.
    let mut system = Matrix::zeros(dim * dim, dim);
    let mut rhs = vec![Rational::zero(); dim * dim];
    for i in 0..dim {
        for k in 0..dim {
            for l in 0..dim {
                system[(i * dim + k, l)] = c(i, l, k).clone();
            }
            rhs[i * dim + k] = d[(i, k)].clone();
        }
    }
    let inconsistent = matches!(solve(&system, &rhs), Ok(None));
    CertificateCheck {
        leibniz,
        inner_system_inconsistent: inconsistent,
    }
}

/// Convenience form taking the matrix as row-major entries.
pub fn verify_outer_entries(dim: usize, constants: &[Rational], entries: Vec<Rational>) -> CertificateCheck {
    match Matrix::from_flat(dim, dim, entries) {
        Ok(d) => verify_outer(dim, constants, &d),
        Err(_) => CertificateCheck {
            leibniz: false,
            inner_system_inconsistent: false,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{int, int_vec};

    // [e1,e2] = e3, written out by hand.
    fn h3_constants() -> Vec<Rational> {
        let mut c = vec![Rational::zero(); 27];
        let at = |i: usize, j: usize, k: usize| (i * 3 + j) * 3 + k;
        c[at(0, 1, 2)] = int(1);
        c[at(1, 0, 2)] = int(-1);
        c
    }

    #[test]
    fn accepts_outer_weight_derivation() {
        let d = Matrix::from_diagonal(&int_vec(&[1, 1, 2]));
        assert!(verify_outer(3, &h3_constants(), &d).accepted());
    }

    #[test]
    fn rejects_inner_derivation() {
        // ad(e2): e1 ↦ e3.
        let d = Matrix::from_i64_rows(&[&[0, 0, 1], &[0, 0, 0], &[0, 0, 0]]);
        let check = verify_outer(3, &h3_constants(), &d);
        assert!(check.leibniz);
        assert!(!check.inner_system_inconsistent);
    }

    #[test]
    fn rejects_non_derivation() {
        let d = Matrix::from_diagonal(&int_vec(&[1, 0, 0]));
        assert!(!verify_outer(3, &h3_constants(), &d).leibniz);
        assert!(!verify_outer(2, &h3_constants(), &d).accepted());
    }
}
