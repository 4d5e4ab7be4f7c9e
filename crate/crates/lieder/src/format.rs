//! JSON file formats for algebras, specs and certificates.
//!
//! Rationals are always strings (`"3"`, `"-1/2"`); indices are 1-based.

use std::fmt;
use std::str::FromStr;

use lieder_core::certcheck::{self, CertificateCheck};
use lieder_core::derivation::OuterCertificate;
use lieder_core::exactlin::{int, LinAlgError, Matrix, Rational};
use lieder_core::maxrank::{MaxRankSpec, ProofGapDiagnostic, ProofTrace};
use lieder_core::torus::WeightMatrix;
use lieder_core::{BracketEntry, LieAlgebra};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const TOOL_VERSION: &str = concat!("lieder ", env!("CARGO_PKG_VERSION"));

pub const STATUS_VERIFIED: &str = "verified";
pub const STATUS_PROOF_GAP: &str = "proof-gap";

/// Row layout of derivation matrices in certificate files.
pub const MATRIX_CONVENTION: &str = "row-major; row i lists the coordinates of D(e_i)";

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {message}")]
    Field { path: String, message: String },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Lie(#[from] lieder_core::lie::LieError),
    #[error(transparent)]
    Spec(#[from] lieder_core::maxrank::MaxRankError),
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

fn field_err(path: impl Into<String>, message: impl Into<String>) -> FormatError {
    FormatError::Field {
        path: path.into(),
        message: message.into(),
    }
}

/// A rational serialized as a canonical string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct RationalText(pub Rational);

impl TryFrom<String> for RationalText {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl FromStr for RationalText {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Rational::from_str(s)
            .map(RationalText)
            .map_err(|e| format!("invalid rational {s:?}: {e}"))
    }
}

impl From<RationalText> for String {
    fn from(r: RationalText) -> String {
        r.0.to_string()
    }
}

impl fmt::Display for RationalText {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

fn texts(v: &[Rational]) -> Vec<RationalText> {
    v.iter().cloned().map(RationalText).collect()
}

fn values(v: &[RationalText]) -> Vec<Rational> {
    v.iter().map(|r| r.0.clone()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub k: usize,
    pub c: RationalText,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketRecord {
    pub i: usize,
    pub j: usize,
    pub terms: Vec<Term>,
}

fn records_of(entries: &[BracketEntry]) -> Vec<BracketRecord> {
    entries
        .iter()
        .map(|e| BracketRecord {
            i: e.i + 1,
            j: e.j + 1,
            terms: e
                .terms
                .iter()
                .map(|(k, c)| Term {
                    k: k + 1,
                    c: RationalText(c.clone()),
                })
                .collect(),
        })
        .collect()
}

/// Converts 1-based records, checking `1 ≤ i < j ≤ dim` and `1 ≤ k ≤ dim`.
fn entries_of(field: &str, records: &[BracketRecord], dim: usize) -> Result<Vec<BracketEntry>, FormatError> {
    let index = |path: String, v: usize| {
        if v == 0 || v > dim {
            Err(field_err(path, format!("index {v} is outside 1..={dim}")))
        } else {
            Ok(v - 1)
        }
    };
    records
        .iter()
        .enumerate()
        .map(|(r, rec)| {
            let i = index(format!("{field}[{r}].i"), rec.i)?;
            let j = index(format!("{field}[{r}].j"), rec.j)?;
            if i >= j {
                return Err(field_err(
                    format!("{field}[{r}]"),
                    format!("need i < j, got i = {}, j = {}", rec.i, rec.j),
                ));
            }
            let terms = rec
                .terms
                .iter()
                .enumerate()
                .map(|(t, term)| Ok((index(format!("{field}[{r}].terms[{t}].k"), term.k)?, term.c.0.clone())))
                .collect::<Result<Vec<_>, FormatError>>()?;
            Ok(BracketEntry::new(i, j, terms))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    /// Number of leading basis vectors spanning the nilradical; needed when
    /// the file is passed to `certify`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nilradical_dim: Option<usize>,
    pub brackets: Vec<BracketRecord>,
}

impl AlgebraFile {
    pub fn from_algebra(algebra: &LieAlgebra, nilradical_dim: Option<usize>) -> Self {
        AlgebraFile {
            dim: algebra.dim(),
            labels: algebra.labels().map(<[String]>::to_vec),
            nilradical_dim,
            brackets: records_of(&algebra.table()),
        }
    }

    pub fn to_algebra(&self) -> Result<LieAlgebra, FormatError> {
        let entries = entries_of("brackets", &self.brackets, self.dim)?;
        let algebra = LieAlgebra::from_table(self.dim, &entries)?;
        match &self.labels {
            Some(labels) => algebra
                .with_labels(labels.clone())
                .map_err(|e| field_err("labels", e.to_string())),
            None => Ok(algebra),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub n: usize,
    pub k: usize,
    pub gamma: Vec<BracketRecord>,
    /// One row per non-generator `e_{k+1} … e_n`, `k` entries each.
    pub alpha: Vec<Vec<RationalText>>,
    pub selection: Vec<Vec<RationalText>>,
}

fn matrix_of(field: &str, rows: &[Vec<RationalText>], cols: usize) -> Result<Matrix, FormatError> {
    for (r, row) in rows.iter().enumerate() {
        if row.len() != cols {
            return Err(field_err(
                format!("{field}[{r}]"),
                format!("expected {cols} entries, found {}", row.len()),
            ));
        }
    }
    Ok(Matrix::from_rows_with_cols(
        cols,
        rows.iter().map(|r| values(r)).collect(),
    )?)
}

fn rows_of(m: &Matrix) -> Vec<Vec<RationalText>> {
    m.row_vectors().map(texts).collect()
}

impl SpecFile {
    pub fn from_spec(spec: &MaxRankSpec) -> Self {
        SpecFile {
            n: spec.n(),
            k: spec.k(),
            gamma: records_of(&spec.gamma_table()),
            alpha: rows_of(spec.alpha().rows()),
            selection: rows_of(spec.selection()),
        }
    }

    pub fn to_spec(&self) -> Result<MaxRankSpec, FormatError> {
        let entries = entries_of("gamma", &self.gamma, self.n)?;
        let mut gamma = Vec::new();
        for (r, e) in entries.into_iter().enumerate() {
            for (t, (k, c)) in e.terms.into_iter().enumerate() {
                if k < self.k {
                    return Err(field_err(
                        format!("gamma[{r}].terms[{t}].k"),
                        format!("index {} must exceed k = {}", k + 1, self.k),
                    ));
                }
                gamma.push(((e.i, e.j, k), c));
            }
        }
        if self.alpha.len() != self.n.saturating_sub(self.k) {
            return Err(field_err(
                "alpha",
                format!(
                    "expected {} rows (one per non-generator), found {}",
                    self.n.saturating_sub(self.k),
                    self.alpha.len()
                ),
            ));
        }
        let alpha = WeightMatrix::new(self.n, self.k, matrix_of("alpha", &self.alpha, self.k)?)
            .map_err(|e| field_err("alpha", e.to_string()))?;
        let selection = matrix_of("selection", &self.selection, self.k)?;
        Ok(MaxRankSpec::new(self.n, self.k, gamma, alpha, selection)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Checks {
    pub leibniz: bool,
    pub inner_system_inconsistent: bool,
}

impl From<CertificateCheck> for Checks {
    fn from(c: CertificateCheck) -> Self {
        Checks {
            leibniz: c.leibniz,
            inner_system_inconsistent: c.inner_system_inconsistent,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorTrace {
    /// 1-based index of `x_a`.
    pub index: usize,
    pub diagonal_part: Vec<RationalText>,
    /// Row-major.
    pub nilpotent_part: Vec<RationalText>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<Vec<RationalText>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shifted: Option<Vec<RationalText>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedCheck {
    pub name: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceRecord {
    pub branch: String,
    pub generators: Vec<GeneratorTrace>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub torus_choice: Option<Vec<RationalText>>,
    /// Candidate in the basis where it was built, row-major.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chosen: Option<Vec<RationalText>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rewritten: Option<AlgebraFile>,
    pub checks: Vec<NamedCheck>,
}

impl TraceRecord {
    pub fn from_trace(trace: &ProofTrace) -> Self {
        TraceRecord {
            branch: trace.branch.to_string(),
            generators: trace
                .generators
                .iter()
                .map(|g| GeneratorTrace {
                    index: g.decomposition.generator_index + 1,
                    diagonal_part: texts(&g.decomposition.diagonal_part.diagonal()),
                    nilpotent_part: texts(g.decomposition.nilpotent_part.entries()),
                    z: g.shift.as_deref().map(texts),
                    shifted: g.shifted_generator.as_deref().map(texts),
                })
                .collect(),
            obstruction: trace.obstruction.map(|a| a + 1),
            torus_choice: trace.torus_choice.as_deref().map(texts),
            chosen: trace.chosen.as_ref().map(|m| texts(m.entries())),
            rewritten: trace.rewritten.as_ref().map(|l| AlgebraFile::from_algebra(l, None)),
            checks: trace
                .checks
                .iter()
                .map(|c| NamedCheck {
                    name: c.name.to_string(),
                    passed: c.passed,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticRecord {
    pub branch: String,
    pub failed_check: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub candidate: Option<Vec<RationalText>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateFile {
    pub tool_version: String,
    /// `verified` or `proof-gap`.
    pub status: String,
    /// Branch that produced `derivation`, absent when nothing was found.
    pub branch: Option<String>,
    pub algebra: AlgebraFile,
    pub convention: String,
    /// `dim²` entries, row-major.
    pub derivation: Option<Vec<RationalText>>,
    pub trace: TraceRecord,
    pub checks: Checks,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<DiagnosticRecord>,
}

impl CertificateFile {
    pub fn verified(algebra: &LieAlgebra, nil_dim: usize, cert: &OuterCertificate, trace: &ProofTrace) -> Self {
        CertificateFile {
            tool_version: TOOL_VERSION.to_string(),
            status: STATUS_VERIFIED.to_string(),
            branch: Some(cert.branch.to_string()),
            algebra: AlgebraFile::from_algebra(algebra, Some(nil_dim)),
            convention: MATRIX_CONVENTION.to_string(),
            derivation: Some(texts(cert.derivation.matrix().entries())),
            trace: TraceRecord::from_trace(trace),
            checks: Checks {
                leibniz: cert.leibniz_checked,
                inner_system_inconsistent: cert.inner_system_inconsistent,
            },
            diagnostic: None,
        }
    }

    pub fn proof_gap(algebra: &LieAlgebra, nil_dim: usize, diag: &ProofGapDiagnostic) -> Self {
        let fallback = diag.fallback.as_ref();
        CertificateFile {
            tool_version: TOOL_VERSION.to_string(),
            status: STATUS_PROOF_GAP.to_string(),
            branch: fallback.map(|c| c.branch.to_string()),
            algebra: AlgebraFile::from_algebra(algebra, Some(nil_dim)),
            convention: MATRIX_CONVENTION.to_string(),
            derivation: fallback.map(|c| texts(c.derivation.matrix().entries())),
            trace: TraceRecord::from_trace(&diag.trace),
            checks: Checks {
                leibniz: fallback.is_some_and(|c| c.leibniz_checked),
                inner_system_inconsistent: fallback.is_some_and(|c| c.inner_system_inconsistent),
            },
            diagnostic: Some(DiagnosticRecord {
                branch: diag.branch.to_string(),
                failed_check: diag.failed_check.to_string(),
                candidate: diag.candidate.as_ref().map(|m| texts(m.entries())),
            }),
        }
    }

    /// Fresh check of the stored derivation against the stored table, using
    /// only the stand-alone checker.
    pub fn reverify(&self) -> Result<CertificateCheck, FormatError> {
        let Some(entries) = &self.derivation else {
            return Ok(CertificateCheck {
                leibniz: false,
                inner_system_inconsistent: false,
            });
        };
        let dim = self.algebra.dim;
        let constants = raw_constants(&self.algebra)?;
        Ok(certcheck::verify_outer_entries(dim, &constants, values(entries)))
    }
}

/// Structure constants straight from the file records, antisymmetrically
/// completed but not otherwise validated.
fn raw_constants(file: &AlgebraFile) -> Result<Vec<Rational>, FormatError> {
    let dim = file.dim;
    let mut c = vec![int(0); dim * dim * dim];
    for (i, j, terms) in entries_of("algebra.brackets", &file.brackets, dim)?
        .into_iter()
        .map(|e| (e.i, e.j, e.terms))
    {
        for (k, v) in terms {
            c[(i * dim + j) * dim + k] += &v;
            c[(j * dim + i) * dim + k] -= &v;
        }
    }
    Ok(c)
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("file types always serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use lieder_core::catalog::{spec_of, FamilyId};
    use lieder_core::exactlin::{int, ratio};

    #[test]
    fn rationals_are_canonical_strings() {
        assert_eq!(String::from(RationalText(int(3))), "3");
        assert_eq!(String::from(RationalText(ratio(-2, 4))), "-1/2");
        assert_eq!("6/4".parse::<RationalText>().unwrap().0, ratio(3, 2));
        assert!("1/0".parse::<RationalText>().is_err());
        assert!("0.5".parse::<RationalText>().is_err());
    }

    #[test]
    fn parse_errors_name_the_field() {
        let text = r#"{"dim": 3, "brackets": [{"i": 1, "j": 2, "terms": [{"k": 4, "c": "1"}]}]}"#;
        let file: AlgebraFile = serde_json::from_str(text).unwrap();
        let err = file.to_algebra().unwrap_err().to_string();
        assert!(err.starts_with("brackets[0].terms[0].k"), "{err}");

        let text = r#"{"dim": 3, "brackets": [{"i": 2, "j": 1, "terms": []}]}"#;
        let file: AlgebraFile = serde_json::from_str(text).unwrap();
        assert!(file.to_algebra().unwrap_err().to_string().contains("need i < j"));

        let text = "{\"dim\": 3,\n \"brackets\": [{\"i\": 1, \"j\": 2, \"terms\": [{\"k\": 3, \"c\": 1.5}]}]}";
        let err = serde_json::from_str::<AlgebraFile>(text).unwrap_err();
        assert_eq!(err.line(), 2);
    }

    #[test]
    fn spec_file_round_trip() {
        for f in [FamilyId::Heisenberg(1), FamilyId::Filiform(5), FamilyId::Abelian(3)] {
            let spec = spec_of(f).unwrap();
            let file = SpecFile::from_spec(&spec);
            let parsed: SpecFile = serde_json::from_str(&to_json(&file)).unwrap();
            assert_eq!(parsed.to_spec().unwrap(), spec);
        }
    }

    #[test]
    fn spec_file_rejects_non_adapted_gamma() {
        let mut file = SpecFile::from_spec(&spec_of(FamilyId::Heisenberg(1)).unwrap());
        file.gamma[0].terms[0].k = 2;
        assert!(file
            .to_spec()
            .unwrap_err()
            .to_string()
            .starts_with("gamma[0].terms[0].k"));
    }
}
