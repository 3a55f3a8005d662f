//! JSON manifests and the chain record format.

use std::cmp::Ordering;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{
    validate_algebra, AlgebraDescriptor, CdgCategory, DescriptorError, ElementRecord, Grading,
};
use crate::chern::{ChernError, ChernInput};
use crate::free_modules::{MatrixHom, ModuleError, ShiftTuple};
use crate::hochschild::{BarChain, Normalization, TruncationCaps, UChain};
use crate::scalar::{format_rational, parse_rational, SparseVec};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSpec {
    pub shifts: Vec<i64>,
}

/// A complete input: algebra, free module, twist, idempotent and caps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub grading: Grading,
    pub algebra: AlgebraDescriptor,
    pub module: ModuleSpec,
    pub alpha: Vec<Vec<ElementRecord>>,
    pub pi: Vec<Vec<ElementRecord>>,
    pub truncation: TruncationCaps,
}

#[derive(Debug, thiserror::Error)]
pub enum ManifestError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed manifest: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Descriptor(#[from] DescriptorError),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Chern(#[from] ChernError),
    #[error("bad chain record: {0}")]
    Record(String),
}

impl ManifestError {
    /// Parse-level failures (as opposed to failed checks).
    pub fn is_parse_error(&self) -> bool {
        match self {
            ManifestError::Io { .. } | ManifestError::Json(_) | ManifestError::Record(_) => true,
            ManifestError::Descriptor(e) => e.is_parse_error(),
            ManifestError::Module(e) | ManifestError::Chern(ChernError::Module(e)) => {
                matches!(e, ModuleError::ShapeMismatch(_))
            }
            ManifestError::Chern(_) => false,
        }
    }
}

impl Manifest {
    pub fn parse(text: &str) -> Result<Manifest, ManifestError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &std::path::Path) -> Result<Manifest, ManifestError> {
        let text = std::fs::read_to_string(path).map_err(|source| ManifestError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Manifest::parse(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }

    pub fn algebra(&self) -> Result<Arc<CdgCategory>, ManifestError> {
        Ok(validate_algebra(&self.algebra, self.grading)?)
    }

    fn matrix(
        &self,
        algebra: &CdgCategory,
        rows: &[Vec<ElementRecord>],
        degree: i64,
    ) -> Result<MatrixHom, ManifestError> {
        let shifts = ShiftTuple::new(self.module.shifts.clone())?;
        let rows = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|e| self.algebra.parse_element(e))
                    .collect::<Result<Vec<SparseVec>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(MatrixHom::new(
            algebra,
            shifts.clone(),
            shifts,
            degree,
            rows,
        )?)
    }

    /// Validates everything and assembles the engine input.
    pub fn build(&self) -> Result<ChernInput, ManifestError> {
        self.build_with_caps(self.truncation)
    }

    pub fn build_with_caps(&self, caps: TruncationCaps) -> Result<ChernInput, ManifestError> {
        let algebra = self.algebra()?;
        let shifts = ShiftTuple::new(self.module.shifts.clone())?;
        let alpha = self.matrix(&algebra, &self.alpha, 1)?;
        let pi = self.matrix(&algebra, &self.pi, 0)?;
        Ok(ChernInput::new(algebra, shifts, alpha, pi, caps)?)
    }
}

/// One serialized chain term `coeff · a0[bar] u^u`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainRecord {
    pub u: u32,
    pub coeff: String,
    pub a0: String,
    pub bar: Vec<String>,
}

/// Records in document order: u-power, length, degree, then labels.
pub fn chain_records(c: &UChain) -> Vec<ChainRecord> {
    let ctx = c.ctx();
    let mut keyed: Vec<(u32, usize, i64, Vec<&str>, ChainRecord)> = Vec::new();
    for (k, ck) in c.coeffs() {
        for (w, coeff) in ck.terms() {
            let labels: Vec<&str> = w.letters().iter().map(|&x| ctx.label(x)).collect();
            let record = ChainRecord {
                u: k,
                coeff: format_rational(coeff),
                a0: labels[0].to_string(),
                bar: labels[1..].iter().map(|s| s.to_string()).collect(),
            };
            keyed.push((k, w.len(), w.degree(), labels, record));
        }
    }
    keyed.sort_by(|a, b| {
        (a.0, a.1, a.2)
            .cmp(&(b.0, b.1, b.2))
            .then_with(|| a.3.cmp(&b.3))
            .then(Ordering::Equal)
    });
    keyed.into_iter().map(|t| t.4).collect()
}

/// Inverse of [`chain_records`].
pub fn parse_chain_records(
    ctx: &Arc<CdgCategory>,
    mode: Normalization,
    caps: TruncationCaps,
    records: &[ChainRecord],
) -> Result<UChain, ManifestError> {
    let lookup = |l: &str| {
        ctx.index_of(l)
            .ok_or_else(|| ManifestError::Record(format!("unknown label {l:?}")))
    };
    let mut out = UChain::new(ctx.clone(), mode, caps);
    for r in records {
        let mut letters = vec![lookup(&r.a0)?];
        for l in &r.bar {
            letters.push(lookup(l)?);
        }
        let coeff = parse_rational(&r.coeff).map_err(|e| ManifestError::Record(e.to_string()))?;
        let c = BarChain::from_words(ctx.clone(), mode, [(letters, coeff)])
            .map_err(|e| ManifestError::Record(e.to_string()))?;
        out.add_at(r.u, &c, "parse");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn manifests_round_trip() {
        for (name, text) in fixtures::MANIFESTS {
            let m = Manifest::parse(text).unwrap();
            assert_eq!(Manifest::parse(&m.to_json()).unwrap(), m, "{name}");
        }
    }

    #[test]
    fn unknown_fields_and_bad_rationals_are_parse_errors() {
        let mut v: serde_json::Value = serde_json::from_str(fixtures::MANIFESTS[0].1).unwrap();
        v["extra"] = serde_json::json!(1);
        assert!(Manifest::parse(&v.to_string())
            .unwrap_err()
            .is_parse_error());
        let bad = fixtures::MANIFESTS[1].1.replace("\"-1\"", "\"1/0\"");
        let err = Manifest::parse(&bad).unwrap().build().unwrap_err();
        assert!(err.is_parse_error(), "{err}");
    }

    #[test]
    fn chain_records_round_trip() {
        let a = Arc::new(fixtures::truncated_poly());
        let caps = TruncationCaps::new(2, 4);
        let mut u = UChain::new(a.clone(), Normalization::Normalized, caps);
        for k in 0..3 {
            u.add_at(
                k,
                &crate::hochschild::random_chain(
                    &a,
                    Normalization::Normalized,
                    k as usize + 1,
                    None,
                    k as u64,
                    6,
                ),
                "test",
            );
        }
        let recs = chain_records(&u);
        let back = parse_chain_records(&a, Normalization::Normalized, caps, &recs).unwrap();
        assert_eq!(back, u);
    }
}
