//! Standard nilpotent families and random torus selections.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exactlin::{self, int, Matrix, Rational};
use crate::lie::{BracketEntry, LieAlgebra};
use crate::maxrank::{MaxRankError, MaxRankSpec};
use crate::torus;

const MAX_DRAWS: usize = 1000;
const ENTRY_BOUND: i64 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FamilyId {
    /// `ℚ^n`.
    Abelian(usize),
    /// Heisenberg algebra of dimension `2m + 1`.
    Heisenberg(usize),
    /// Model filiform algebra of dimension `n`: `[e_1, e_i] = e_{i+1}`.
    Filiform(usize),
}

impl FamilyId {
    pub fn name(self) -> &'static str {
        match self {
            FamilyId::Abelian(_) => "abelian",
            FamilyId::Heisenberg(_) => "heisenberg",
            FamilyId::Filiform(_) => "filiform",
        }
    }

    pub fn size(self) -> usize {
        match self {
            FamilyId::Abelian(n) | FamilyId::Heisenberg(n) | FamilyId::Filiform(n) => n,
        }
    }

    pub fn from_name(name: &str, size: usize) -> Result<Self, CatalogError> {
        let f = match name {
            "abelian" => FamilyId::Abelian(size),
            "heisenberg" => FamilyId::Heisenberg(size),
            "filiform" => FamilyId::Filiform(size),
            _ => return Err(CatalogError::UnknownFamily),
        };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(self) -> Result<(), CatalogError> {
        let ok = match self {
            FamilyId::Abelian(n) | FamilyId::Heisenberg(n) => n >= 1,
            FamilyId::Filiform(n) => n >= 3,
        };
        if ok {
            Ok(())
        } else {
            Err(CatalogError::InvalidParameter(self))
        }
    }

    pub fn dim(self) -> usize {
        match self {
            FamilyId::Abelian(n) | FamilyId::Filiform(n) => n,
            FamilyId::Heisenberg(m) => 2 * m + 1,
        }
    }

    /// Nonzero `γ_{i,j}^t` in the adapted basis, 0-based.
    fn gamma(self) -> Vec<(usize, usize, usize)> {
        match self {
            FamilyId::Abelian(_) => Vec::new(),
            FamilyId::Heisenberg(m) => (0..m).map(|i| (2 * i, 2 * i + 1, 2 * m)).collect(),
            FamilyId::Filiform(n) => (1..n - 1).map(|i| (0, i, i + 1)).collect(),
        }
    }

    /// The nilpotent algebra itself, labelled `e1 … en`.
    pub fn nilradical(self) -> Result<LieAlgebra, CatalogError> {
        self.validate()?;
        let table: Vec<BracketEntry> = self
            .gamma()
            .into_iter()
            .map(|(i, j, t)| BracketEntry::unit(i, j, t))
            .collect();
        let n = self.dim();
        let algebra = LieAlgebra::from_table(n, &table)
            .and_then(|l| l.with_labels((1..=n).map(|i| alloc::format!("e{i}")).collect()))
            .map_err(MaxRankError::from)?;
        Ok(algebra)
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.name(), self.size())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("unknown family name")]
    UnknownFamily,
    #[error("invalid family parameter: {0}")]
    InvalidParameter(FamilyId),
    #[error("{family} has toral rank {rank} but {generators} generators, so it is not of maximal rank")]
    NotMaxRank {
        family: FamilyId,
        rank: usize,
        generators: usize,
    },
    #[error("selection rows are rank deficient")]
    RankDeficientSelection,
    #[error("need 1 <= s <= k = {k}, got s = {s}")]
    SelectionSize { s: usize, k: usize },
    #[error("no full-rank selection after {MAX_DRAWS} draws")]
    GeneratorExhausted,
    #[error(transparent)]
    Spec(#[from] MaxRankError),
}

/// Spec of a catalog family with the full standard torus (`s = k`, identity
/// selection). The weights are read off the diagonal derivations rather than
/// hard-coded, so every standard torus vector is a derivation.
pub fn spec_of(family: FamilyId) -> Result<MaxRankSpec, CatalogError> {
    let nil = family.nilradical()?;
    let k = nil.generator_count().map_err(MaxRankError::from)?;
    let alpha = match torus::standard_torus(&nil) {
        Ok(Some(alpha)) => alpha,
        _ => {
            return Err(CatalogError::NotMaxRank {
                family,
                rank: torus::diagonal_derivations(&nil).dim(),
                generators: k,
            })
        }
    };
    let gamma = family.gamma().into_iter().map(|ijt| (ijt, int(1)));
    Ok(MaxRankSpec::new(nil.dim(), k, gamma, alpha, Matrix::identity(k))?)
}

/// Replaces the selection of `spec`.
pub fn restrict_selection(spec: &MaxRankSpec, rows: Matrix) -> Result<MaxRankSpec, CatalogError> {
    spec.clone().with_selection(rows).map_err(|e| match e {
        MaxRankError::RankDeficientSelection { .. } => CatalogError::RankDeficientSelection,
        MaxRankError::SelectionSize { s, k } => CatalogError::SelectionSize { s, k },
        other => CatalogError::Spec(other),
    })
}

/// Selection picking the standard torus vectors with the given indices.
pub fn subset_selection(k: usize, indices: &[usize]) -> Matrix {
    let rows = indices.iter().map(|&j| exactlin::unit_vector(k, j)).collect();
    Matrix::from_rows_with_cols(k, rows).expect("unit vectors have length k")
}

/// All nonempty proper subsets of `0..k`, as sorted index lists.
pub fn proper_subsets(k: usize) -> Vec<Vec<usize>> {
    (1u64..(1u64 << k) - 1)
        .map(|mask| (0..k).filter(|j| mask & (1 << j) != 0).collect())
        .collect()
}

/// Deterministic random `s x k` selection with entries `p/q`, `|p| ≤ 10`,
/// `1 ≤ q ≤ 10`, redrawn until it has full rank.
pub fn random_spec(seed: u64, family: FamilyId, s: usize) -> Result<MaxRankSpec, CatalogError> {
    let base = spec_of(family)?;
    let k = base.k();
    if s == 0 || s > k {
        return Err(CatalogError::SelectionSize { s, k });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_DRAWS {
        let entries: Vec<Rational> = (0..s * k)
            .map(|_| {
                let p = rng.gen_range(-ENTRY_BOUND..=ENTRY_BOUND);
                let q = rng.gen_range(1..=ENTRY_BOUND);
                Rational::new(BigInt::from(p), BigInt::from(q))
            })
            .collect();
        let selection = Matrix::from_flat(s, k, entries).expect("s*k entries");
        if exactlin::rank(&selection) == s {
            return restrict_selection(&base, selection);
        }
    }
    Err(CatalogError::GeneratorExhausted)
}

/// The families used by the acceptance corpus, in a fixed order.
pub fn standard_corpus() -> Vec<FamilyId> {
    let mut out = Vec::new();
    out.extend((2..=4).map(FamilyId::Abelian));
    out.extend((1..=3).map(FamilyId::Heisenberg));
    out.extend((4..=6).map(FamilyId::Filiform));
    out
}

/// Weight of generator `j` on `e_t` implied by additivity along `gamma`,
/// returned for every non-generator reachable from the generators.
pub fn additive_weights(spec: &MaxRankSpec) -> BTreeMap<usize, Vec<Rational>> {
    let k = spec.k();
    let mut weights: BTreeMap<usize, Vec<Rational>> = (0..k).map(|g| (g, exactlin::unit_vector(k, g))).collect();
    loop {
        let mut grew = false;
        for &(i, j, t) in spec.gamma().keys() {
            if weights.contains_key(&t) {
                continue;
            }
            if let (Some(a), Some(b)) = (weights.get(&i), weights.get(&j)) {
                let sum = a.iter().zip(b).map(|(x, y)| x + y).collect();
                weights.insert(t, sum);
                grew = true;
            }
        }
        if !grew {
            return weights;
        }
    }
}
