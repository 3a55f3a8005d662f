//! Shipped example inputs, compiled into the library.

use crate::algebra::{Axiom, CdgAlgebra, Violation};
use crate::chern::ChernInput;
use crate::manifest::Manifest;

/// `(name, manifest text)` for every shipped fixture.
pub const MANIFESTS: &[(&str, &str)] = &[
    (
        "exterior_summand",
        include_str!("../fixtures/exterior_summand.json"),
    ),
    ("mf", include_str!("../fixtures/mf.json")),
    ("triangular", include_str!("../fixtures/triangular.json")),
    (
        "curved_scalar",
        include_str!("../fixtures/curved_scalar.json"),
    ),
    (
        "free_rank_one",
        include_str!("../fixtures/free_rank_one.json"),
    ),
];

/// A broken variant of a fixture algebra with the violation it must produce.
#[derive(Debug, Clone, Copy)]
pub struct Mutant {
    pub name: &'static str,
    pub text: &'static str,
    /// `None` for a homogeneity failure
    pub axiom: Option<Axiom>,
    pub witness: &'static [&'static str],
}

impl Mutant {
    pub fn manifest(&self) -> Manifest {
        Manifest::parse(self.text).expect("mutants parse")
    }

    /// Whether `v` is the expected violation.
    pub fn matches(&self, v: &Violation) -> bool {
        let (axiom, witness) = match v {
            Violation::Axiom { axiom, witness, .. } => (Some(*axiom), witness),
            Violation::DegreeMismatch { witness, .. } => (None, witness),
            Violation::HomMismatch { .. } => return false,
        };
        axiom == self.axiom
            && witness
                .iter()
                .map(String::as_str)
                .eq(self.witness.iter().copied())
    }
}

pub const MUTANTS: &[Mutant] = &[
    Mutant {
        name: "associativity",
        text: include_str!("../fixtures/mutants/associativity.json"),
        axiom: Some(Axiom::Associativity),
        witness: &["x", "x", "x"],
    },
    Mutant {
        name: "unit_law",
        text: include_str!("../fixtures/mutants/unit_law.json"),
        axiom: Some(Axiom::UnitLaw),
        witness: &["xi"],
    },
    Mutant {
        name: "leibniz",
        text: include_str!("../fixtures/mutants/leibniz.json"),
        axiom: Some(Axiom::Leibniz),
        witness: &["p", "p"],
    },
    Mutant {
        name: "closed_curvature",
        text: include_str!("../fixtures/mutants/closed_curvature.json"),
        axiom: Some(Axiom::ClosedCurvature),
        witness: &["*"],
    },
    Mutant {
        name: "degree",
        text: include_str!("../fixtures/mutants/degree.json"),
        axiom: None,
        witness: &["xi", "xi"],
    },
];

pub fn manifest(name: &str) -> Manifest {
    let (_, text) = MANIFESTS
        .iter()
        .find(|(n, _)| *n == name)
        .unwrap_or_else(|| panic!("no fixture {name}"));
    Manifest::parse(text).expect("shipped fixtures parse")
}

fn input(name: &str) -> ChernInput {
    manifest(name).build().expect("shipped fixtures validate")
}

fn algebra(name: &str) -> CdgAlgebra {
    (*manifest(name).algebra().expect("shipped fixtures validate")).clone()
}

/// `Λ[ξ]`, `|ξ| = 1`.
pub fn exterior() -> CdgAlgebra {
    algebra("exterior_summand")
}

/// `k[x]/(x³)` with curvature `x²`, `Z/2`-graded.
pub fn truncated_poly() -> CdgAlgebra {
    algebra("mf")
}

/// `k⟨p, w⟩` with `dp = w` and all products of non-units zero.
pub fn triangular_algebra() -> CdgAlgebra {
    algebra("triangular")
}

/// `π = diag(1, 0)` on `Λ[ξ]²` with `α = 0`.
pub fn exterior_summand() -> ChernInput {
    input("exterior_summand")
}

/// The matrix factorization `[[0, x], [-x, 0]]` of `x²`.
pub fn mf() -> ChernInput {
    input("mf")
}

/// A nilpotent twist with a non-diagonal closed idempotent.
pub fn triangular() -> ChernInput {
    input("triangular")
}

/// `(k, 0, 2)` with `α = [[0, 1], [-2, 0]]`.
pub fn curved_scalar() -> ChernInput {
    input("curved_scalar")
}

pub fn free_rank_one() -> ChernInput {
    input("free_rank_one")
}

pub fn all() -> Vec<ChernInput> {
    MANIFESTS.iter().map(|(n, _)| input(n)).collect()
}

pub fn named() -> Vec<(&'static str, ChernInput)> {
    MANIFESTS.iter().map(|(n, _)| (*n, input(n))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::DescriptorError;
    use crate::manifest::ManifestError;

    #[test]
    fn every_mutant_reports_its_witness() {
        for m in MUTANTS {
            match m.manifest().algebra() {
                Err(ManifestError::Descriptor(DescriptorError::Invalid(e))) => {
                    assert!(e.violations.iter().any(|v| m.matches(v)), "{}: {e}", m.name)
                }
                other => panic!("{}: {other:?}", m.name),
            }
        }
    }
}
