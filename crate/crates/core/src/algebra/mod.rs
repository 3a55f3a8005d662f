//! Graded scalars, Koszul signs and finite-dimensional cdg algebras.
//!
//! Everything downstream works over a [`CdgCategory`]: a finite linear
//! category with an explicit homogeneous basis of morphisms, one identity
//! basis element per object, a differential and one curvature element per
//! object. A cdg algebra is the one-object case.

mod descriptor;
mod subcategory;
mod validate;

use std::fmt;
use std::sync::Arc;

use num_traits::One;

use crate::scalar::{Rational, SparseVec};

pub use descriptor::{validate_algebra, AlgebraDescriptor, DescriptorError, ElementRecord};
pub use subcategory::{HomSpec, Subcategory, SubcategoryBuilder, SubcategoryError};
pub use validate::{Axiom, ValidationError, Violation};

/// The grading group: integers or integers mod 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Grading {
    Z,
    Z2,
}

impl Grading {
    /// Canonical representative of a degree: unchanged for `Z`, the parity
    /// for `Z2`.
    pub fn reduce(self, degree: i64) -> i64 {
        match self {
            Grading::Z => degree,
            Grading::Z2 => degree.rem_euclid(2),
        }
    }

    pub fn same(self, a: i64, b: i64) -> bool {
        self.reduce(a) == self.reduce(b)
    }
}

impl fmt::Display for Grading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Grading::Z => f.write_str("Z"),
            Grading::Z2 => f.write_str("Z2"),
        }
    }
}

/// Koszul sign of permuting a sequence of homogeneous elements.
///
/// `permutation[k]` is the original position of the element that ends up in
/// slot `k`. Only parities matter, so the result is the same in both gradings.
pub fn koszul_sign(degrees: &[i64], permutation: &[usize]) -> i8 {
    assert_eq!(
        degrees.len(),
        permutation.len(),
        "permutation length mismatch"
    );
    let mut odd = 0i64;
    for a in 0..permutation.len() {
        for b in a + 1..permutation.len() {
            if permutation[a] > permutation[b] {
                odd += degrees[permutation[a]] * degrees[permutation[b]];
            }
        }
    }
    if odd.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("elements belong to different algebras")]
    AlgebraMismatch,
    #[error("basis index {0} out of range")]
    BadIndex(u32),
    #[error("element is not homogeneous")]
    Inhomogeneous,
}

/// A finite cdg category with an explicit basis.
#[derive(Clone, PartialEq, Eq)]
pub struct CdgCategory {
    pub(crate) grading: Grading,
    pub(crate) objects: Vec<String>,
    pub(crate) labels: Vec<String>,
    pub(crate) degrees: Vec<i64>,
    pub(crate) dom: Vec<u32>,
    pub(crate) cod: Vec<u32>,
    pub(crate) identities: Vec<u32>,
    /// Dense `n * n` table; entry `i * n + j` is `b_i * b_j` (zero when
    /// `dom(b_i) != cod(b_j)`).
    pub(crate) mult: Vec<SparseVec>,
    pub(crate) diff: Vec<SparseVec>,
    pub(crate) curvature: Vec<SparseVec>,
}

/// A cdg algebra is a cdg category with a single object.
pub type CdgAlgebra = CdgCategory;

/// Raw tables for [`CdgCategory::from_parts`].
#[derive(Debug, Clone)]
pub struct CategoryParts {
    pub grading: Grading,
    pub objects: Vec<String>,
    pub labels: Vec<String>,
    pub degrees: Vec<i64>,
    pub dom: Vec<u32>,
    pub cod: Vec<u32>,
    pub identities: Vec<u32>,
    pub mult: Vec<SparseVec>,
    pub diff: Vec<SparseVec>,
    pub curvature: Vec<SparseVec>,
}

impl CdgCategory {
    /// Assembles a category from tables without checking the axioms; see
    /// [`CdgCategory::validate`].
    pub fn from_parts(parts: CategoryParts) -> Self {
        let n = parts.labels.len();
        assert_eq!(parts.degrees.len(), n);
        assert_eq!(parts.dom.len(), n);
        assert_eq!(parts.cod.len(), n);
        assert_eq!(parts.mult.len(), n * n);
        assert_eq!(parts.diff.len(), n);
        assert_eq!(parts.identities.len(), parts.objects.len());
        assert_eq!(parts.curvature.len(), parts.objects.len());
        CdgCategory {
            grading: parts.grading,
            objects: parts.objects,
            labels: parts.labels,
            degrees: parts.degrees,
            dom: parts.dom,
            cod: parts.cod,
            identities: parts.identities,
            mult: parts.mult,
            diff: parts.diff,
            curvature: parts.curvature,
        }
    }

    pub fn into_parts(self) -> CategoryParts {
        CategoryParts {
            grading: self.grading,
            objects: self.objects,
            labels: self.labels,
            degrees: self.degrees,
            dom: self.dom,
            cod: self.cod,
            identities: self.identities,
            mult: self.mult,
            diff: self.diff,
            curvature: self.curvature,
        }
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn object_name(&self, object: u32) -> &str {
        &self.objects[object as usize]
    }

    pub fn label(&self, index: u32) -> &str {
        &self.labels[index as usize]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<u32> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| i as u32)
    }

    /// Degree of a basis element, reduced mod 2 in `Z2` mode. The declared
    /// integer is kept as given.
    pub fn degree(&self, index: u32) -> i64 {
        self.grading.reduce(self.degrees[index as usize])
    }

    pub fn declared_degree(&self, index: u32) -> i64 {
        self.degrees[index as usize]
    }

    pub fn dom(&self, index: u32) -> u32 {
        self.dom[index as usize]
    }

    pub fn cod(&self, index: u32) -> u32 {
        self.cod[index as usize]
    }

    pub fn identity(&self, object: u32) -> u32 {
        self.identities[object as usize]
    }

    pub fn is_identity(&self, index: u32) -> bool {
        self.identities[self.cod(index) as usize] == index
    }

    /// For single-object algebras.
    pub fn unit(&self) -> u32 {
        self.identities[0]
    }

    pub fn curvature(&self, object: u32) -> &SparseVec {
        &self.curvature[object as usize]
    }

    pub fn has_curvature(&self) -> bool {
        self.curvature.iter().any(|h| !h.is_zero())
    }

    pub fn has_differential(&self) -> bool {
        self.diff.iter().any(|d| !d.is_zero())
    }

    pub fn composable(&self, left: u32, right: u32) -> bool {
        self.dom(left) == self.cod(right)
    }

    /// Product `b_left * b_right` of basis elements.
    pub fn mult_basis(&self, left: u32, right: u32) -> &SparseVec {
        &self.mult[left as usize * self.dim() + right as usize]
    }

    pub fn diff_basis(&self, index: u32) -> &SparseVec {
        &self.diff[index as usize]
    }

    pub fn mult_vec(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        let mut out = SparseVec::zero();
        for (i, x) in a.iter() {
            for (j, y) in b.iter() {
                let p = self.mult_basis(i, j);
                if !p.is_zero() {
                    out.add_scaled(p, &(x * y));
                }
            }
        }
        out
    }

    pub fn diff_vec(&self, a: &SparseVec) -> SparseVec {
        let mut out = SparseVec::zero();
        for (i, x) in a.iter() {
            out.add_scaled(self.diff_basis(i), x);
        }
        out
    }

    /// Degree of a vector when all its components share one degree.
    pub fn vec_degree(&self, v: &SparseVec) -> Option<i64> {
        let mut it = v.indices().map(|i| self.degree(i));
        let first = it.next()?;
        if it.all(|d| d == first) {
            Some(first)
        } else {
            None
        }
    }

    pub fn format_vec(&self, v: &SparseVec) -> String {
        if v.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (i, c)) in v.iter().enumerate() {
            let c = crate::scalar::format_rational(c);
            if k > 0 {
                out.push_str(" + ");
            }
            if c == "1" {
                out.push_str(self.label(i));
            } else {
                out.push_str(&format!("{}*{}", c, self.label(i)));
            }
        }
        out
    }

    /// Morphisms `x -> y` as basis indices.
    pub fn hom_basis(&self, x: u32, y: u32) -> Vec<u32> {
        (0..self.dim() as u32)
            .filter(|&i| self.dom(i) == x && self.cod(i) == y)
            .collect()
    }
}

impl fmt::Debug for CdgCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CdgCategory")
            .field("grading", &self.grading)
            .field("objects", &self.objects)
            .field("labels", &self.labels)
            .field("degrees", &self.degrees)
            .finish_non_exhaustive()
    }
}

/// An element of a cdg algebra, tied to the algebra it lives in.
#[derive(Clone)]
pub struct Element {
    algebra: Arc<CdgAlgebra>,
    coeffs: SparseVec,
}

impl Element {
    pub fn new(algebra: Arc<CdgAlgebra>, coeffs: SparseVec) -> Result<Self, AlgebraError> {
        if let Some(bad) = coeffs.indices().find(|&i| i as usize >= algebra.dim()) {
            return Err(AlgebraError::BadIndex(bad));
        }
        Ok(Element { algebra, coeffs })
    }

    pub fn basis(algebra: Arc<CdgAlgebra>, index: u32) -> Result<Self, AlgebraError> {
        Self::new(algebra, SparseVec::basis(index))
    }

    pub fn unit(algebra: Arc<CdgAlgebra>) -> Self {
        let u = algebra.unit();
        Element {
            algebra,
            coeffs: SparseVec::basis(u),
        }
    }

    pub fn algebra(&self) -> &Arc<CdgAlgebra> {
        &self.algebra
    }

    pub fn coeffs(&self) -> &SparseVec {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero()
    }

    pub fn degree(&self) -> Result<i64, AlgebraError> {
        if self.coeffs.is_zero() {
            return Ok(0);
        }
        self.algebra
            .vec_degree(&self.coeffs)
            .ok_or(AlgebraError::Inhomogeneous)
    }

    fn check_same(&self, other: &Element) -> Result<(), AlgebraError> {
        if Arc::ptr_eq(&self.algebra, &other.algebra) || *self.algebra == *other.algebra {
            Ok(())
        } else {
            Err(AlgebraError::AlgebraMismatch)
        }
    }

    pub fn add(&self, other: &Element) -> Result<Element, AlgebraError> {
        self.check_same(other)?;
        Ok(Element {
            algebra: self.algebra.clone(),
            coeffs: self.coeffs.add(&other.coeffs),
        })
    }

    pub fn scale(&self, c: &Rational) -> Element {
        Element {
            algebra: self.algebra.clone(),
            coeffs: self.coeffs.scaled(c),
        }
    }
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.check_same(other).is_ok() && self.coeffs == other.coeffs
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.algebra.format_vec(&self.coeffs))
    }
}

/// Bilinear extension of the multiplication table.
pub fn mult(a: &Element, b: &Element) -> Result<Element, AlgebraError> {
    a.check_same(b)?;
    Ok(Element {
        algebra: a.algebra.clone(),
        coeffs: a.algebra.mult_vec(&a.coeffs, &b.coeffs),
    })
}

/// Linear extension of the differential table.
pub fn apply_d(a: &Element) -> Element {
    Element {
        algebra: a.algebra.clone(),
        coeffs: a.algebra.diff_vec(&a.coeffs),
    }
}

pub(crate) fn one() -> Rational {
    Rational::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn koszul_examples() {
        assert_eq!(koszul_sign(&[1, 1], &[1, 0]), -1);
        assert_eq!(koszul_sign(&[1, 0], &[1, 0]), 1);
        assert_eq!(koszul_sign(&[1, 1, 3], &[0, 1, 2]), 1);
        // cyclic rotation of three odd elements: two transpositions
        assert_eq!(koszul_sign(&[1, 1, 1], &[2, 0, 1]), 1);
    }

    #[test]
    fn z2_reduction() {
        assert_eq!(Grading::Z2.reduce(-3), 1);
        assert_eq!(Grading::Z.reduce(-3), -3);
        assert!(Grading::Z2.same(2, 0));
        assert!(!Grading::Z.same(2, 0));
    }
}
