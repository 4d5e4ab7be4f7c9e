//! Solvable extensions of maximal-rank nilpotent algebras and the
//! constructive search for their outer derivations.
//!
//! A [`MaxRankSpec`] describes a nilpotent algebra `N` in an adapted basis
//! `e_1 … e_n` (generators first), the weights of its standard torus, and a
//! choice of `s` torus elements. [`build_solvable`] produces `R = N ⊕ Q` with
//! `Q = span{x_1 … x_s}` acting diagonally. [`construct_outer`] then follows
//! the constructive argument for `s < k` and emits a checked certificate
//! along with a trace of every intermediate object.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::certcheck;
use crate::derivation::{
    self, certify, find_outer_derivation, find_outer_with_branch, Branch, DerivationError, OuterCertificate,
};
use crate::exactlin::{self, is_zero_vector, LinAlgError, Matrix, Rational, Subspace};
use crate::lie::{BracketEntry, LieAlgebra, LieError};
use crate::torus::{diagonal_derivations, WeightMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MaxRankError {
    #[error("need 1 <= k <= n, got n = {n}, k = {k}")]
    GeneratorRange { n: usize, k: usize },
    #[error("weight matrix is for n = {n}, k = {k}; spec has n = {spec_n}, k = {spec_k}")]
    AlphaShape {
        n: usize,
        k: usize,
        spec_n: usize,
        spec_k: usize,
    },
    #[error("gamma entry ({}, {}, {}) must satisfy i < j <= n and k < t <= n", .i + 1, .j + 1, .t + 1)]
    GammaIndex { i: usize, j: usize, t: usize },
    #[error("gamma entry ({}, {}, {}) is given twice", .i + 1, .j + 1, .t + 1)]
    DuplicateGamma { i: usize, j: usize, t: usize },
    #[error("selection must have k = {k} columns, found {cols}")]
    SelectionShape { k: usize, cols: usize },
    #[error("selection must have between 1 and k = {k} rows, found {s}")]
    SelectionSize { k: usize, s: usize },
    #[error("selection has rank {rank} < s = {s}")]
    RankDeficientSelection { rank: usize, s: usize },
    #[error("nilradical table is not nilpotent")]
    NotNilpotent,
    #[error("nilradical has {found} generators, spec says k = {expected}")]
    WrongGeneratorCount { expected: usize, found: usize },
    #[error("standard torus element t{} is not a derivation of N", .0 + 1)]
    AlphaNotDerivation(usize),
    #[error("first {0} basis vectors do not span an ideal")]
    NotAnIdeal(usize),
    #[error("designated nilradical block is not nilpotent")]
    BlockNotNilpotent,
    #[error("algebra is not solvable")]
    NotSolvable,
    #[error("no complement generator x{}", .0 + 1)]
    GeneratorIndex(usize),
    #[error("ad(x{}) is not upper triangular: nonzero entry at ({}, {})", .a + 1, .row + 1, .col + 1)]
    NotTriangular { a: usize, row: usize, col: usize },
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
    #[error(transparent)]
    Derivation(#[from] DerivationError),
}

/// Data of a maximal-rank nilradical together with a torus selection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxRankSpec {
    n: usize,
    k: usize,
    /// `(i, j, t) ↦ γ` with `i < j` and `t ≥ k`, meaning `[e_i, e_j] ∋ γ·e_t`.
    gamma: BTreeMap<(usize, usize, usize), Rational>,
    alpha: WeightMatrix,
    /// Row `a` expresses the action of `x_a` in the standard torus basis.
    selection: Matrix,
}

impl MaxRankSpec {
    /// Checks shapes, index ranges and the rank of the selection. Algebraic
    /// conditions (Jacobi, nilpotency, torus) are checked by [`build_nilradical`].
    pub fn new(
        n: usize,
        k: usize,
        gamma: impl IntoIterator<Item = ((usize, usize, usize), Rational)>,
        alpha: WeightMatrix,
        selection: Matrix,
    ) -> Result<Self, MaxRankError> {
        if k == 0 || k > n {
            return Err(MaxRankError::GeneratorRange { n, k });
        }
        if alpha.n() != n || alpha.k() != k {
            return Err(MaxRankError::AlphaShape {
                n: alpha.n(),
                k: alpha.k(),
                spec_n: n,
                spec_k: k,
            });
        }
        let mut table = BTreeMap::new();
        for ((i, j, t), c) in gamma {
            if i >= j || j >= n || t < k || t >= n {
                return Err(MaxRankError::GammaIndex { i, j, t });
            }
            if c.is_zero() {
                continue;
            }
            if table.insert((i, j, t), c).is_some() {
                return Err(MaxRankError::DuplicateGamma { i, j, t });
            }
        }
        let spec = MaxRankSpec {
            n,
            k,
            gamma: table,
            alpha,
            selection: Matrix::zeros(0, k),
        };
        spec.with_selection(selection)
    }

    /// Same nilradical data with a different selection.
    pub fn with_selection(mut self, selection: Matrix) -> Result<Self, MaxRankError> {
        let s = selection.rows();
        if s > 0 && selection.cols() != self.k {
            return Err(MaxRankError::SelectionShape {
                k: self.k,
                cols: selection.cols(),
            });
        }
        if s == 0 || s > self.k {
            return Err(MaxRankError::SelectionSize { k: self.k, s });
        }
        let rank = exactlin::rank(&selection);
        if rank < s {
            return Err(MaxRankError::RankDeficientSelection { rank, s });
        }
        self.selection = selection;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn s(&self) -> usize {
        self.selection.rows()
    }

    pub fn gamma(&self) -> &BTreeMap<(usize, usize, usize), Rational> {
        &self.gamma
    }

    pub fn alpha(&self) -> &WeightMatrix {
        &self.alpha
    }

    pub fn selection(&self) -> &Matrix {
        &self.selection
    }

    /// Gamma grouped into table rows.
    pub fn gamma_table(&self) -> Vec<BracketEntry> {
        let mut rows: BTreeMap<(usize, usize), Vec<(usize, Rational)>> = BTreeMap::new();
        for (&(i, j, t), c) in &self.gamma {
            rows.entry((i, j)).or_default().push((t, c.clone()));
        }
        rows.into_iter()
            .map(|((i, j), terms)| BracketEntry::new(i, j, terms))
            .collect()
    }

    /// Diagonal of the torus element `w_a = Σ_j selection[a][j]·t_j`.
    pub fn weight_vector(&self, a: usize) -> Vec<Rational> {
        let torus: Vec<Vec<Rational>> = self.alpha.torus_vectors();
        let mut w = alloc::vec![Rational::zero(); self.n];
        for (j, t) in torus.iter().enumerate() {
            let coeff = &self.selection[(a, j)];
            if coeff.is_zero() {
                continue;
            }
            for (wi, ti) in w.iter_mut().zip(t) {
                *wi += coeff * ti;
            }
        }
        w
    }
}

fn labels(prefix: &'static str, count: usize) -> impl Iterator<Item = String> {
    (1..=count).map(move |i| format!("{prefix}{i}"))
}

/// Builds and validates `N` from the gamma table.
pub fn build_nilradical(spec: &MaxRankSpec) -> Result<LieAlgebra, MaxRankError> {
    let algebra = LieAlgebra::from_table(spec.n, &spec.gamma_table())?.with_labels(labels("e", spec.n).collect())?;
    if !algebra.is_nilpotent() {
        return Err(MaxRankError::NotNilpotent);
    }
    let found = algebra.generator_count()?;
    if found != spec.k {
        return Err(MaxRankError::WrongGeneratorCount {
            expected: spec.k,
            found,
        });
    }
    let diagonals = diagonal_derivations(&algebra);
    for j in 0..spec.k {
        if !diagonals.contains(&spec.alpha.torus_vector(j))? {
            return Err(MaxRankError::AlphaNotDerivation(j));
        }
    }
    Ok(algebra)
}

/// A solvable algebra whose first `nil_dim` basis vectors span a nilpotent
/// ideal `N`; the remaining ones span the complement `Q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolvableExtension {
    algebra: LieAlgebra,
    nil_dim: usize,
}

impl SolvableExtension {
    pub fn new(algebra: LieAlgebra, nil_dim: usize) -> Result<Self, MaxRankError> {
        if nil_dim > algebra.dim() {
            return Err(MaxRankError::NotAnIdeal(nil_dim));
        }
        let block = Subspace::span_of(
            algebra.dim(),
            &(0..nil_dim)
                .map(|i| exactlin::unit_vector(algebra.dim(), i))
                .collect::<Vec<_>>(),
        )?;
        if !algebra.is_ideal(&block) {
            return Err(MaxRankError::NotAnIdeal(nil_dim));
        }
        if !algebra.prefix_subalgebra(nil_dim)?.is_nilpotent() {
            return Err(MaxRankError::BlockNotNilpotent);
        }
        if !algebra.is_solvable() {
            return Err(MaxRankError::NotSolvable);
        }
        Ok(SolvableExtension { algebra, nil_dim })
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn into_algebra(self) -> LieAlgebra {
        self.algebra
    }

    pub fn nil_dim(&self) -> usize {
        self.nil_dim
    }

    pub fn q_dim(&self) -> usize {
        self.algebra.dim() - self.nil_dim
    }

    pub fn nilradical(&self) -> LieAlgebra {
        self.algebra
            .prefix_subalgebra(self.nil_dim)
            .expect("checked at construction")
    }

    /// Index of `x_a` in the basis of `R`.
    pub fn x_index(&self, a: usize) -> usize {
        self.nil_dim + a
    }
}

/// `R = N ⊕ Q` with `[e_i, x_a] = w_a(i)·e_i` and `[x_a, x_b] = 0`.
pub fn build_solvable(spec: &MaxRankSpec) -> Result<SolvableExtension, MaxRankError> {
    build_nilradical(spec)?;
    let (n, s) = (spec.n, spec.s());
    let mut entries = spec.gamma_table();
    for a in 0..s {
        for (i, w) in spec.weight_vector(a).into_iter().enumerate() {
            if !w.is_zero() {
                entries.push(BracketEntry::new(i, n + a, alloc::vec![(i, w)]));
            }
        }
    }
    entries.sort_by_key(|e| (e.i, e.j));
    let algebra =
        LieAlgebra::from_table(n + s, &entries)?.with_labels(labels("e", n).chain(labels("x", s)).collect())?;
    SolvableExtension::new(algebra, n)
}

/// `ad(x_a) = d + d_n` with `d` diagonal and `d_n` strictly upper triangular.
/// `d` need not be a derivation, so both parts are kept as plain matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdDecomposition {
    pub generator_index: usize,
    pub diagonal_part: Matrix,
    pub nilpotent_part: Matrix,
}

pub fn decompose_ad(ext: &SolvableExtension, a: usize) -> Result<AdDecomposition, MaxRankError> {
    if a >= ext.q_dim() {
        return Err(MaxRankError::GeneratorIndex(a));
    }
    let ad = ext.algebra.ad_basis(ext.x_index(a));
    if let Some((row, col)) = ad.first_nonzero_where(|r, c| r > c) {
        return Err(MaxRankError::NotTriangular { a, row, col });
    }
    let diagonal_part = Matrix::from_diagonal(&ad.diagonal());
    let nilpotent_part = ad.sub(&diagonal_part)?;
    Ok(AdDecomposition {
        generator_index: a,
        diagonal_part,
        nilpotent_part,
    })
}

/// The nilpotent parts were all inner in `N`; `R` rewritten with
/// `x_a' = x_a − z_a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbsorbedBasis {
    pub algebra: SolvableExtension,
    /// `z_a` in the coordinates of `N`.
    pub shifts: Vec<Vec<Rational>>,
    /// Row `p` holds the coordinates in `R` of the `p`-th new basis vector.
    pub basis_change: Matrix,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Absorption {
    Absorbed(AbsorbedBasis),
    /// The nilpotent part of `ad(x_witness)` is not an inner derivation of `N`.
    Obstructed {
        witness: usize,
    },
}

pub fn absorb_nilpotent_parts(
    ext: &SolvableExtension,
    decomps: &[AdDecomposition],
) -> Result<Absorption, MaxRankError> {
    let n = ext.nil_dim;
    let dim = ext.algebra.dim();
    let nil = ext.nilradical();
    let mut shifts = Vec::with_capacity(decomps.len());
    for d in decomps {
        let mut block = Matrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                block[(r, c)] = d.nilpotent_part[(r, c)].clone();
            }
        }
        match derivation::is_inner(&nil, &block) {
            Ok(Some(z)) => shifts.push(z),
            Ok(None) | Err(DerivationError::NotADerivation { .. }) => {
                return Ok(Absorption::Obstructed {
                    witness: d.generator_index,
                })
            }
            Err(e) => return Err(e.into()),
        }
    }

    let mut basis_change = Matrix::identity(dim);
    for (d, z) in decomps.iter().zip(&shifts) {
        let row = ext.x_index(d.generator_index);
        for (i, zi) in z.iter().enumerate() {
            basis_change[(row, i)] = -zi.clone();
        }
    }
    let q_labels = (0..ext.q_dim()).map(|a| {
        if decomps.iter().any(|d| d.generator_index == a) {
            format!("x{}'", a + 1)
        } else {
            format!("x{}", a + 1)
        }
    });
    let rewritten = ext
        .algebra
        .change_basis(&basis_change)?
        .with_labels((0..n).map(|i| ext.algebra.label(i)).chain(q_labels).collect())?;
    Ok(Absorption::Absorbed(AbsorbedBasis {
        algebra: SolvableExtension::new(rewritten, n)?,
        shifts,
        basis_change,
    }))
}

/// One verification step recorded in a trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckRecord {
    pub name: &'static str,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorRecord {
    pub decomposition: AdDecomposition,
    /// `z_a ∈ N` with `ad(z_a) = d_n` on `N`, when one exists.
    pub shift: Option<Vec<Rational>>,
    /// Coordinates of `x_a' = x_a − z_a` in the basis of `R`.
    pub shifted_generator: Option<Vec<Rational>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofTrace {
    pub branch: Branch,
    pub generators: Vec<GeneratorRecord>,
    /// Generator whose nilpotent part could not be absorbed.
    pub obstruction: Option<usize>,
    /// `R` in the basis `{e_i, x_a'}`.
    pub rewritten: Option<LieAlgebra>,
    pub basis_change: Option<Matrix>,
    /// Diagonal of the chosen torus element on `N`.
    pub torus_choice: Option<Vec<Rational>>,
    /// The candidate derivation in the basis where it was built
    /// (`{e_i, x_a'}` for the torus branch, the input basis otherwise).
    pub chosen: Option<Matrix>,
    pub checks: Vec<CheckRecord>,
}

impl ProofTrace {
    fn new(branch: Branch) -> Self {
        ProofTrace {
            branch,
            generators: Vec::new(),
            obstruction: None,
            rewritten: None,
            basis_change: None,
            torus_choice: None,
            chosen: None,
            checks: Vec::new(),
        }
    }

    fn check(&mut self, name: &'static str, passed: bool) -> bool {
        self.checks.push(CheckRecord { name, passed });
        passed
    }

    pub fn all_checks_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailedCheck {
    Leibniz,
    InnerSystemConsistent,
    QNotAbelian,
    TorusInsideSpan,
    NoOuterDerivation,
}

impl FailedCheck {
    pub fn as_str(self) -> &'static str {
        match self {
            FailedCheck::Leibniz => "leibniz",
            FailedCheck::InnerSystemConsistent => "inner-system-consistent",
            FailedCheck::QNotAbelian => "q-not-abelian",
            FailedCheck::TorusInsideSpan => "torus-inside-span",
            FailedCheck::NoOuterDerivation => "no-outer-derivation",
        }
    }
}

impl fmt::Display for FailedCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The prescribed candidate failed verification. `fallback` holds the result
/// of a plain scan of the derivation space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofGapDiagnostic {
    pub branch: Branch,
    pub candidate: Option<Matrix>,
    pub failed_check: FailedCheck,
    pub fallback: Option<OuterCertificate>,
    pub trace: ProofTrace,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error("s must be < k (s = {s}, k = {k})")]
    PreconditionViolation { s: usize, k: usize },
    #[error("{} candidate failed check: {}", .0.branch, .0.failed_check)]
    ProofGap(Box<ProofGapDiagnostic>),
    #[error(transparent)]
    MaxRank(#[from] MaxRankError),
}

impl From<DerivationError> for ConstructError {
    fn from(e: DerivationError) -> Self {
        ConstructError::MaxRank(e.into())
    }
}

impl From<LieError> for ConstructError {
    fn from(e: LieError) -> Self {
        ConstructError::MaxRank(e.into())
    }
}

impl From<LinAlgError> for ConstructError {
    fn from(e: LinAlgError) -> Self {
        ConstructError::MaxRank(e.into())
    }
}

fn gap(
    algebra: &LieAlgebra,
    branch: Branch,
    candidate: Option<Matrix>,
    failed_check: FailedCheck,
    trace: ProofTrace,
) -> ConstructError {
    ConstructError::ProofGap(Box::new(ProofGapDiagnostic {
        branch,
        candidate,
        failed_check,
        fallback: find_outer_derivation(algebra),
        trace,
    }))
}

fn failed_check_of(cert: &OuterCertificate) -> FailedCheck {
    if cert.leibniz_checked {
        FailedCheck::InnerSystemConsistent
    } else {
        FailedCheck::Leibniz
    }
}

/// Produces an outer derivation of `R` for `dim Q < k`, following the
/// two-case argument: nontrivial center, otherwise either the diagonal part
/// of a non-absorbable `ad(x_a)` or a torus element missed by `Q`.
///
/// `torus` supplies the standard torus for the tie-break; without it the
/// canonical basis of the diagonal derivations of `N` is used.
pub fn construct_outer(
    ext: &SolvableExtension,
    torus: Option<&WeightMatrix>,
) -> Result<(OuterCertificate, ProofTrace), ConstructError> {
    let r = &ext.algebra;
    let n = ext.nil_dim;
    let s = ext.q_dim();
    let nil = ext.nilradical();
    let k = nil.generator_count()?;
    if s >= k {
        return Err(ConstructError::PreconditionViolation { s, k });
    }

    if !r.center().is_zero() {
        let mut trace = ProofTrace::new(Branch::Case2Center);
        trace.check("center-nontrivial", true);
        return match find_outer_with_branch(r, Branch::Case2Center) {
            Some(cert) => {
                trace.check("leibniz", cert.leibniz_checked);
                trace.check("inner-system-inconsistent", cert.inner_system_inconsistent);
                trace.chosen = Some(cert.derivation.matrix().clone());
                Ok((cert, trace))
            }
            None => {
                trace.check("outer-derivation-found", false);
                Err(gap(r, Branch::Case2Center, None, FailedCheck::NoOuterDerivation, trace))
            }
        };
    }

    let decomps = (0..s).map(|a| decompose_ad(ext, a)).collect::<Result<Vec<_>, _>>()?;
    let mut trace = ProofTrace::new(Branch::Case1Torus);
    trace.check("center-trivial", true);

    let absorbed = match absorb_nilpotent_parts(ext, &decomps)? {
        Absorption::Obstructed { witness } => {
            trace.branch = Branch::Case1EarlyExit;
            trace.obstruction = Some(witness);
            trace.generators = decomps
                .into_iter()
                .map(|decomposition| GeneratorRecord {
                    decomposition,
                    shift: None,
                    shifted_generator: None,
                })
                .collect();
            let candidate = trace.generators[witness].decomposition.diagonal_part.clone();
            trace.chosen = Some(candidate.clone());
            let cert = certify(r, candidate.clone(), Branch::Case1EarlyExit)?;
            trace.check("leibniz", cert.leibniz_checked);
            trace.check("inner-system-inconsistent", cert.inner_system_inconsistent);
            if cert.is_valid() {
                return Ok((cert, trace));
            }
            let failed = failed_check_of(&cert);
            return Err(gap(r, Branch::Case1EarlyExit, Some(candidate), failed, trace));
        }
        Absorption::Absorbed(absorbed) => absorbed,
    };

    let shifted = absorbed.algebra.algebra();
    trace.generators = decomps
        .into_iter()
        .zip(&absorbed.shifts)
        .map(|(decomposition, z)| {
            let row = absorbed
                .basis_change
                .row(ext.x_index(decomposition.generator_index))
                .to_vec();
            GeneratorRecord {
                decomposition,
                shift: Some(z.clone()),
                shifted_generator: Some(row),
            }
        })
        .collect();
    trace.rewritten = Some(shifted.clone());
    trace.basis_change = Some(absorbed.basis_change.clone());

    let ads: Vec<Matrix> = (0..s).map(|a| shifted.ad_basis(ext.x_index(a))).collect();
    let diagonal_on_n = ads
        .iter()
        .all(|ad| ad.first_nonzero_where(|r, c| r < n && c < n && r != c).is_none());
    trace.check("ad-shifted-diagonal-on-n", diagonal_on_n);

    let q_abelian =
        (0..s).all(|a| (a + 1..s).all(|b| is_zero_vector(shifted.basis_bracket(ext.x_index(a), ext.x_index(b)))));
    if !trace.check("q-abelian", q_abelian) {
        return Err(gap(r, Branch::Case1Torus, None, FailedCheck::QNotAbelian, trace));
    }

    let torus_space = diagonal_derivations(&nil);
    let span_q = Subspace::span_of(n, &ads.iter().map(|ad| ad.diagonal()[..n].to_vec()).collect::<Vec<_>>())?;
    let mut candidates: Vec<Vec<Rational>> = torus.map(WeightMatrix::torus_vectors).unwrap_or_default();
    candidates.extend(torus_space.basis_vectors().map(<[Rational]>::to_vec));
    let mut choice = None;
    for c in candidates {
        if c.len() == n && torus_space.contains(&c)? && !span_q.contains(&c)? {
            choice = Some(c);
            break;
        }
    }
    let Some(choice) = choice else {
        trace.check("torus-element-outside-span", false);
        return Err(gap(r, Branch::Case1Torus, None, FailedCheck::TorusInsideSpan, trace));
    };
    trace.check("torus-element-outside-span", true);

    let mut extended = choice.clone();
    extended.resize(r.dim(), Rational::zero());
    let d_prime = Matrix::from_diagonal(&extended);
    trace.torus_choice = Some(choice);
    trace.chosen = Some(d_prime.clone());

    let commutes = ads
        .iter()
        .all(|ad| ad.commutator(&d_prime).map(|c| c.is_zero()).unwrap_or(false));
    trace.check("commutes-with-ad-q", commutes);

    let in_shifted = certify(shifted, d_prime.clone(), Branch::Case1Torus)?;
    trace.check("leibniz", in_shifted.leibniz_checked);
    trace.check("inner-system-inconsistent", in_shifted.inner_system_inconsistent);
    if !in_shifted.is_valid() {
        let failed = failed_check_of(&in_shifted);
        return Err(gap(r, Branch::Case1Torus, Some(d_prime), failed, trace));
    }

    // Back to the input basis: D = B⁻¹ D' B.
    let b = &absorbed.basis_change;
    let original = b.inverse()?.mul(&d_prime)?.mul(b)?;
    let cert = certify(r, original.clone(), Branch::Case1Torus)?;
    trace.check("input-basis-certificate", cert.is_valid());
    if !cert.is_valid() {
        let failed = failed_check_of(&cert);
        return Err(gap(r, Branch::Case1Torus, Some(original), failed, trace));
    }
    Ok((cert, trace))
}

/// `rank{w_1 … w_s} = s`: no nonzero combination of the `x_a` acts
/// nilpotently, so `N` is the whole nilradical of `R`.
pub fn verify_nilradical_maximality(spec: &MaxRankSpec) -> bool {
    let weights: Vec<Vec<Rational>> = (0..spec.s()).map(|a| spec.weight_vector(a)).collect();
    let m = Matrix::from_rows_with_cols(spec.n, weights).expect("weight vectors have length n");
    exactlin::rank(&m) == spec.s()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremReport {
    pub n: usize,
    pub k: usize,
    pub s: usize,
    pub center_dim: usize,
    pub der_dim: usize,
    pub inner_dim: usize,
    pub outer_dim: usize,
    pub branch: Option<Branch>,
    pub certificate: Option<OuterCertificate>,
    pub trace: Option<ProofTrace>,
    /// Set when the prescribed candidate failed and the scan supplied the
    /// certificate instead.
    pub proof_gap: Option<FailedCheck>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoremError {
    #[error(transparent)]
    Spec(#[from] MaxRankError),
    #[error("theorem violated: {reason} (outer dimension {outer_dim})")]
    TheoremViolation { reason: &'static str, outer_dim: usize },
}

/// Builds `R` and checks the expected outer dimension: at least one outer
/// derivation with a certificate that passes the independent checker when
/// `s < k`, none when `s = k`.
pub fn verify_theorem(spec: &MaxRankSpec) -> Result<TheoremReport, TheoremError> {
    let ext = build_solvable(spec)?;
    let r = ext.algebra();
    let der_dim = derivation::derivation_space(r).dim();
    let inner_dim = derivation::inner_derivation_space(r).dim();
    let outer_dim = derivation::outer_dimension(r).map_err(MaxRankError::from)?;
    let mut report = TheoremReport {
        n: spec.n,
        k: spec.k,
        s: spec.s(),
        center_dim: r.center().dim(),
        der_dim,
        inner_dim,
        outer_dim,
        branch: None,
        certificate: None,
        trace: None,
        proof_gap: None,
    };
    let violation = |reason| TheoremError::TheoremViolation { reason, outer_dim };

    if spec.s() == spec.k {
        return if outer_dim == 0 {
            Ok(report)
        } else {
            Err(violation("expected every derivation to be inner"))
        };
    }
    if outer_dim == 0 {
        return Err(violation("no outer derivation exists"));
    }
    let (cert, trace) = match construct_outer(&ext, Some(spec.alpha())) {
        Ok(found) => found,
        Err(ConstructError::ProofGap(diag)) => {
            report.proof_gap = Some(diag.failed_check);
            let fallback = diag.fallback.ok_or(violation("no certificate found"))?;
            (fallback, diag.trace)
        }
        Err(ConstructError::PreconditionViolation { .. }) => unreachable!("s < k checked above"),
        Err(ConstructError::MaxRank(e)) => return Err(e.into()),
    };
    let independent = certcheck::verify_outer(r.dim(), r.structure_constants(), cert.derivation.matrix());
    if !cert.is_valid() || !independent.accepted() {
        return Err(violation("certificate failed re-verification"));
    }
    report.branch = Some(cert.branch);
    report.certificate = Some(cert);
    report.trace = Some(trace);
    Ok(report)
}
