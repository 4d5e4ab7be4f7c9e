//! Invariant suite over the catalog and seeded random specs.

use std::fmt;

use lieder_core::catalog::{self, CatalogError, FamilyId};
use lieder_core::certcheck;
use lieder_core::derivation::{self, find_outer_derivation};
use lieder_core::exactlin::Matrix;
use lieder_core::maxrank::{self, MaxRankSpec};
use lieder_core::LieAlgebra;

use crate::format::{to_json, AlgebraFile, SpecFile};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail(String),
    NotApplicable(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckItem {
    pub subject: String,
    pub name: &'static str,
    pub outcome: Outcome,
}

impl fmt::Display for CheckItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.outcome {
            Outcome::Pass => write!(f, "PASS {} {}", self.subject, self.name),
            Outcome::Fail(why) => write!(f, "FAIL {} {}: {why}", self.subject, self.name),
            Outcome::NotApplicable(why) => write!(f, "N/A  {} {}: {why}", self.subject, self.name),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct SelftestReport {
    pub items: Vec<CheckItem>,
}

impl SelftestReport {
    fn push(&mut self, subject: &str, name: &'static str, outcome: Outcome) {
        self.items.push(CheckItem {
            subject: subject.to_string(),
            name,
            outcome,
        });
    }

    fn check(&mut self, subject: &str, name: &'static str, result: Result<(), String>) {
        let outcome = match result {
            Ok(()) => Outcome::Pass,
            Err(why) => Outcome::Fail(why),
        };
        self.push(subject, name, outcome);
    }

    pub fn failures(&self) -> usize {
        self.items
            .iter()
            .filter(|i| matches!(i.outcome, Outcome::Fail(_)))
            .count()
    }

    pub fn not_applicable(&self) -> usize {
        self.items
            .iter()
            .filter(|i| matches!(i.outcome, Outcome::NotApplicable(_)))
            .count()
    }
}

fn ensure(cond: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(why())
    }
}

/// Catalog families with a valid spec and at least two generators, i.e. the
/// ones admitting a selection with `0 < s < k`.
pub fn random_eligible() -> Vec<(FamilyId, MaxRankSpec)> {
    catalog::standard_corpus()
        .into_iter()
        .filter_map(|f| catalog::spec_of(f).ok().map(|s| (f, s)))
        .filter(|(_, s)| s.k() >= 2)
        .collect()
}

/// `count` seeded random specs with `s < k`, cycling through the eligible
/// families and selection sizes.
pub fn random_specs(seed: u64, count: usize) -> Result<Vec<(FamilyId, MaxRankSpec)>, CatalogError> {
    let eligible = random_eligible();
    (0..count)
        .map(|i| {
            let (family, base) = &eligible[i % eligible.len()];
            let s = 1 + (i / eligible.len()) % (base.k() - 1);
            catalog::random_spec(seed.wrapping_add(i as u64), *family, s).map(|spec| (*family, spec))
        })
        .collect()
}

/// `parse(emit(L))` has the same structure constants as `L`.
pub fn round_trip(algebra: &LieAlgebra) -> Result<(), String> {
    let text = to_json(&AlgebraFile::from_algebra(algebra, None));
    let parsed: AlgebraFile = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let back = parsed.to_algebra().map_err(|e| e.to_string())?;
    ensure(back.structure_constants() == algebra.structure_constants(), || {
        "structure constants changed".into()
    })?;
    ensure(to_json(&parsed) == text, || "re-emitted text differs".into())
}

/// Every inner basis derivation lies in Der, and `dim InDer = dim L − dim Z`.
pub fn inner_invariants(algebra: &LieAlgebra) -> Result<(), String> {
    let der = derivation::derivation_space(algebra);
    let inner = derivation::inner_derivation_space(algebra);
    for v in inner.basis_vectors() {
        ensure(der.contains(v).map_err(|e| e.to_string())?, || {
            "inner derivation outside Der".into()
        })?;
    }
    let expected = algebra.dim() - algebra.center().dim();
    ensure(inner.dim() == expected, || {
        format!("dim InDer = {}, expected {expected}", inner.dim())
    })
}

/// `[D1, D2] ∈ Der` for the given pairs of Der basis indices.
pub fn commutator_closure(algebra: &LieAlgebra, pairs: &[(usize, usize)]) -> Result<(), String> {
    let n = algebra.dim();
    let der = derivation::derivation_space(algebra);
    let basis: Vec<Matrix> = der
        .basis_vectors()
        .map(|v| Matrix::from_flat(n, n, v.to_vec()).expect("n*n entries"))
        .collect();
    for &(a, b) in pairs {
        if a >= basis.len() || b >= basis.len() {
            continue;
        }
        let c = basis[a].commutator(&basis[b]).map_err(|e| e.to_string())?;
        ensure(der.contains(c.entries()).map_err(|e| e.to_string())?, || {
            format!("commutator of Der basis vectors {a}, {b} is not a derivation")
        })?;
    }
    Ok(())
}

/// All ordered pairs of indices below `m`, truncated to `limit`.
pub fn index_pairs(m: usize, limit: usize) -> Vec<(usize, usize)> {
    (0..m).flat_map(|a| (0..m).map(move |b| (a, b))).take(limit).collect()
}

/// `M_x M_y − M_y M_x = M_[x,y]` for the row-convention matrices of `ad` on
/// every basis pair; as operators this is `[ad x, ad y] = −ad [x, y]`.
pub fn adjoint_anti_homomorphism(algebra: &LieAlgebra) -> Result<(), String> {
    let n = algebra.dim();
    for i in 0..n {
        for j in 0..n {
            let mx = algebra.ad_basis(i);
            let my = algebra.ad_basis(j);
            let lhs = mx.commutator(&my).map_err(|e| e.to_string())?;
            let bracket = algebra.basis_bracket(i, j).to_vec();
            let rhs = algebra.ad(&bracket).map_err(|e| e.to_string())?;
            ensure(lhs == rhs, || {
                format!("fails on ({}, {})", algebra.label(i), algebra.label(j))
            })?;
        }
    }
    Ok(())
}

/// `d + d_n = ad(x_a)` for every torus generator of the built algebra.
pub fn decomposition_reassembles(spec: &MaxRankSpec) -> Result<(), String> {
    let ext = maxrank::build_solvable(spec).map_err(|e| e.to_string())?;
    for a in 0..ext.q_dim() {
        let dec = maxrank::decompose_ad(&ext, a).map_err(|e| e.to_string())?;
        let sum = dec.diagonal_part.add(&dec.nilpotent_part).map_err(|e| e.to_string())?;
        let ad = ext.algebra().ad_basis(ext.x_index(a));
        ensure(sum == ad, || format!("reassembly fails for x{}", a + 1))?;
    }
    Ok(())
}

/// A verified, independently re-checked outer derivation of a nilpotent algebra.
pub fn nilpotent_has_outer(algebra: &LieAlgebra) -> Result<(), String> {
    let cert = find_outer_derivation(algebra).ok_or("no outer derivation found")?;
    let check = certcheck::verify_outer(algebra.dim(), algebra.structure_constants(), cert.derivation.matrix());
    ensure(cert.is_valid() && check.accepted(), || "certificate rejected".into())
}

/// Theorem check for one spec: outer dimension 0 when `s = k`, otherwise at
/// least one outer derivation with an independently accepted certificate.
pub fn theorem_holds(spec: &MaxRankSpec) -> Result<usize, String> {
    let report = maxrank::verify_theorem(spec).map_err(|e| e.to_string())?;
    if spec.s() == spec.k() {
        return ensure(report.outer_dim == 0, || {
            format!("outer dimension {}", report.outer_dim)
        })
        .map(|_| 0);
    }
    let cert = report.certificate.as_ref().ok_or("no certificate")?;
    let ext = maxrank::build_solvable(spec).map_err(|e| e.to_string())?;
    let r = ext.algebra();
    let check = certcheck::verify_outer(r.dim(), r.structure_constants(), cert.derivation.matrix());
    ensure(report.outer_dim >= 1 && check.accepted(), || {
        "certificate rejected by independent checker".into()
    })?;
    Ok(report.outer_dim)
}

pub const RANDOM_SPECS: usize = 25;

pub fn run(seed: u64) -> SelftestReport {
    let mut report = SelftestReport::default();
    for family in catalog::standard_corpus() {
        let subject = family.to_string();
        let nil = match family.nilradical() {
            Ok(n) => n,
            Err(e) => {
                report.push(&subject, "nilradical", Outcome::Fail(e.to_string()));
                continue;
            }
        };
        report.check(
            &subject,
            "nilpotent",
            ensure(nil.is_nilpotent(), || "not nilpotent".into()),
        );
        report.check(&subject, "round-trip", round_trip(&nil));
        report.check(&subject, "inner-derivations", inner_invariants(&nil));
        report.check(&subject, "adjoint-anti-homomorphism", adjoint_anti_homomorphism(&nil));
        let der_dim = derivation::derivation_space(&nil).dim();
        report.check(
            &subject,
            "derivation-closure",
            commutator_closure(&nil, &index_pairs(der_dim, 100)),
        );
        report.check(&subject, "nilpotent-outer", nilpotent_has_outer(&nil));

        let spec = match catalog::spec_of(family) {
            Ok(s) => s,
            Err(e @ CatalogError::NotMaxRank { .. }) => {
                report.push(&subject, "theorem", Outcome::NotApplicable(e.to_string()));
                continue;
            }
            Err(e) => {
                report.push(&subject, "spec", Outcome::Fail(e.to_string()));
                continue;
            }
        };
        report.check(&subject, "spec-round-trip", spec_round_trip(&spec));
        report.check(&subject, "decompose-ad", decomposition_reassembles(&spec));
        report.check(&subject, "all-inner (s = k)", theorem_holds(&spec).map(|_| ()));
        if let Ok(ext) = maxrank::build_solvable(&spec) {
            report.check(&subject, "extension-invariants", inner_invariants(ext.algebra()));
        }
        for subset in catalog::proper_subsets(spec.k()) {
            let sel = catalog::subset_selection(spec.k(), &subset);
            let name = format!("{subject} subset {subset:?}");
            let result = catalog::restrict_selection(&spec, sel)
                .map_err(|e| e.to_string())
                .and_then(|s| theorem_holds(&s).map(|_| ()));
            report.check(&name, "outer (s < k)", result);
        }
    }
    match random_specs(seed, RANDOM_SPECS) {
        Ok(specs) => {
            for (i, (family, spec)) in specs.iter().enumerate() {
                let name = format!("random #{i} {family} s={}", spec.s());
                report.check(&name, "outer (s < k)", theorem_holds(spec).map(|_| ()));
            }
        }
        Err(e) => report.push("random specs", "generate", Outcome::Fail(e.to_string())),
    }
    report
}

fn spec_round_trip(spec: &MaxRankSpec) -> Result<(), String> {
    let text = to_json(&SpecFile::from_spec(spec));
    let parsed: SpecFile = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let back = parsed.to_spec().map_err(|e| e.to_string())?;
    ensure(&back == spec, || "spec changed".into())?;
    let a = maxrank::build_nilradical(spec).map_err(|e| e.to_string())?;
    let b = maxrank::build_nilradical(&back).map_err(|e| e.to_string())?;
    ensure(a.structure_constants() == b.structure_constants(), || {
        "nilradical changed".into()
    })
}
