use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{CategoryParts, CdgAlgebra, Grading, ValidationError};
use crate::scalar::{parse_rational, RationalParseError, SparseVec};

/// An element written as `{label: "p/q"}`.
pub type ElementRecord = BTreeMap<String, String>;

/// Hand-writable description of a finite-dimensional cdg algebra.
///
/// Products are sparse: an omitted pair `a*b` multiplies to zero, except that
/// rows and columns of the unit default to the unit laws.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDescriptor {
    pub basis: Vec<String>,
    pub degrees: Vec<i64>,
    pub unit: String,
    #[serde(default)]
    pub products: BTreeMap<String, ElementRecord>,
    #[serde(default)]
    pub differential: BTreeMap<String, ElementRecord>,
    #[serde(default)]
    pub curvature: ElementRecord,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DescriptorError {
    #[error("empty basis")]
    EmptyBasis,
    #[error("{0} degrees given for {1} basis elements")]
    DegreeCount(usize, usize),
    #[error("duplicate basis label {0:?}")]
    DuplicateLabel(String),
    #[error("unknown basis label {0:?}")]
    UnknownLabel(String),
    #[error("malformed product key {0:?} (expected \"a*b\")")]
    BadProductKey(String),
    #[error(transparent)]
    Rational(#[from] RationalParseError),
    #[error("{0}")]
    Invalid(#[from] ValidationError),
}

impl DescriptorError {
    /// Parse-level problems, as opposed to axiom failures.
    pub fn is_parse_error(&self) -> bool {
        !matches!(self, DescriptorError::Invalid(_))
    }
}

impl AlgebraDescriptor {
    fn lookup(&self, label: &str) -> Result<u32, DescriptorError> {
        self.basis
            .iter()
            .position(|l| l == label)
            .map(|i| i as u32)
            .ok_or_else(|| DescriptorError::UnknownLabel(label.to_string()))
    }

    pub fn parse_element(&self, record: &ElementRecord) -> Result<SparseVec, DescriptorError> {
        let mut v = SparseVec::zero();
        for (label, coeff) in record {
            v.add_term(self.lookup(label)?, parse_rational(coeff)?);
        }
        Ok(v)
    }

    /// Builds the tables without checking axioms.
    pub fn assemble(&self, grading: Grading) -> Result<CdgAlgebra, DescriptorError> {
        let n = self.basis.len();
        if n == 0 {
            return Err(DescriptorError::EmptyBasis);
        }
        if self.degrees.len() != n {
            return Err(DescriptorError::DegreeCount(self.degrees.len(), n));
        }
        for (i, l) in self.basis.iter().enumerate() {
            if self.basis[..i].contains(l) {
                return Err(DescriptorError::DuplicateLabel(l.clone()));
            }
        }
        let unit = self.lookup(&self.unit)?;
        let mut mult = vec![SparseVec::zero(); n * n];
        let mut given = vec![false; n * n];
        for (key, record) in &self.products {
            let (a, b) = key
                .split_once('*')
                .ok_or_else(|| DescriptorError::BadProductKey(key.clone()))?;
            let (a, b) = (self.lookup(a.trim())?, self.lookup(b.trim())?);
            let slot = a as usize * n + b as usize;
            mult[slot] = self.parse_element(record)?;
            given[slot] = true;
        }
        for a in 0..n as u32 {
            let l = unit as usize * n + a as usize;
            let r = a as usize * n + unit as usize;
            if !given[l] {
                mult[l] = SparseVec::basis(a);
            }
            if !given[r] {
                mult[r] = SparseVec::basis(a);
            }
        }
        let mut diff = vec![SparseVec::zero(); n];
        for (label, record) in &self.differential {
            diff[self.lookup(label)? as usize] = self.parse_element(record)?;
        }
        let curvature = self.parse_element(&self.curvature)?;
        Ok(CdgAlgebra::from_parts(CategoryParts {
            grading,
            objects: vec!["*".to_string()],
            labels: self.basis.clone(),
            degrees: self.degrees.clone(),
            dom: vec![0; n],
            cod: vec![0; n],
            identities: vec![unit],
            mult,
            diff,
            curvature: vec![curvature],
        }))
    }
}

/// Parses and exhaustively validates an algebra description.
pub fn validate_algebra(
    descriptor: &AlgebraDescriptor,
    grading: Grading,
) -> Result<Arc<CdgAlgebra>, DescriptorError> {
    let algebra = descriptor.assemble(grading)?;
    algebra.validate()?;
    Ok(Arc::new(algebra))
}
