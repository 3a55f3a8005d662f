use std::fmt;

use super::CdgCategory;
use crate::scalar::{sign, SparseVec};

/// The cdg laws checked by [`CdgCategory::validate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Axiom {
    UnitLaw,
    Associativity,
    Leibniz,
    /// `d(d(a)) = h a - a h`
    CurvatureSquare,
    /// `d(h) = 0`
    ClosedCurvature,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::UnitLaw => "unit law",
            Axiom::Associativity => "associativity",
            Axiom::Leibniz => "Leibniz rule",
            Axiom::CurvatureSquare => "d^2 = [h, -]",
            Axiom::ClosedCurvature => "d(h) = 0",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub enum Violation {
    Axiom {
        axiom: Axiom,
        witness: Vec<String>,
        residual: String,
    },
    DegreeMismatch {
        table: String,
        witness: Vec<String>,
    },
    /// A table entry lands outside the hom-space it must live in.
    HomMismatch {
        table: String,
        witness: Vec<String>,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Axiom {
                axiom,
                witness,
                residual,
            } => {
                write!(
                    f,
                    "{axiom} fails at ({}): residual {residual}",
                    witness.join(", ")
                )
            }
            Violation::DegreeMismatch { table, witness } => {
                write!(f, "inhomogeneous {table} entry at ({})", witness.join(", "))
            }
            Violation::HomMismatch { table, witness } => {
                write!(
                    f,
                    "{table} entry at ({}) leaves its hom-space",
                    witness.join(", ")
                )
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ValidationError {
    pub violations: Vec<Violation>,
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} violation(s):", self.violations.len())?;
        for v in &self.violations {
            writeln!(f, "  {v}")?;
        }
        Ok(())
    }
}

impl ValidationError {
    pub fn has_degree_mismatch(&self) -> bool {
        self.violations
            .iter()
            .any(|v| matches!(v, Violation::DegreeMismatch { .. }))
    }

    pub fn axioms(&self) -> Vec<Axiom> {
        self.violations
            .iter()
            .filter_map(|v| match v {
                Violation::Axiom { axiom, .. } => Some(*axiom),
                _ => None,
            })
            .collect()
    }
}

impl CdgCategory {
    fn names(&self, idx: &[u32]) -> Vec<String> {
        idx.iter().map(|&i| self.label(i).to_string()).collect()
    }

    fn homogeneous_of(&self, v: &SparseVec, degree: i64) -> bool {
        v.indices()
            .all(|i| self.grading.same(self.degree(i), degree))
    }

    fn in_hom(&self, v: &SparseVec, x: u32, y: u32) -> bool {
        v.indices().all(|i| self.dom(i) == x && self.cod(i) == y)
    }

    /// Checks every structural law exhaustively over basis tuples.
    pub fn validate(&self) -> Result<(), ValidationError> {
        let mut violations = Vec::new();
        let n = self.dim() as u32;

        // tables: homogeneity and hom-membership
        for a in 0..n {
            for b in 0..n {
                let p = self.mult_basis(a, b);
                if p.is_zero() {
                    continue;
                }
                if !self.composable(a, b) || !self.in_hom(p, self.dom(b), self.cod(a)) {
                    violations.push(Violation::HomMismatch {
                        table: "product".into(),
                        witness: self.names(&[a, b]),
                    });
                }
                if !self.homogeneous_of(p, self.degree(a) + self.degree(b)) {
                    violations.push(Violation::DegreeMismatch {
                        table: "product".into(),
                        witness: self.names(&[a, b]),
                    });
                }
            }
            let d = self.diff_basis(a);
            if !self.in_hom(d, self.dom(a), self.cod(a)) {
                violations.push(Violation::HomMismatch {
                    table: "differential".into(),
                    witness: self.names(&[a]),
                });
            }
            if !self.homogeneous_of(d, self.degree(a) + 1) {
                violations.push(Violation::DegreeMismatch {
                    table: "differential".into(),
                    witness: self.names(&[a]),
                });
            }
        }
        for x in 0..self.num_objects() as u32 {
            let h = self.curvature(x);
            if !self.in_hom(h, x, x) {
                violations.push(Violation::HomMismatch {
                    table: "curvature".into(),
                    witness: vec![self.object_name(x).to_string()],
                });
            }
            if !self.homogeneous_of(h, 2) {
                violations.push(Violation::DegreeMismatch {
                    table: "curvature".into(),
                    witness: vec![self.object_name(x).to_string()],
                });
            }
            let id = self.identity(x);
            if self.dom(id) != x || self.cod(id) != x || self.degree(id) != 0 {
                violations.push(Violation::DegreeMismatch {
                    table: "identity".into(),
                    witness: self.names(&[id]),
                });
            }
        }
        if !violations.is_empty() {
            return Err(ValidationError { violations });
        }

        for a in 0..n {
            let one_left = self.identity(self.cod(a));
            let one_right = self.identity(self.dom(a));
            let av = SparseVec::basis(a);
            if self.mult_basis(one_left, a) != &av || self.mult_basis(a, one_right) != &av {
                let residual = self.mult_basis(one_left, a).sub(&av);
                let residual = if residual.is_zero() {
                    self.mult_basis(a, one_right).sub(&av)
                } else {
                    residual
                };
                violations.push(Violation::Axiom {
                    axiom: Axiom::UnitLaw,
                    witness: self.names(&[a]),
                    residual: self.format_vec(&residual),
                });
            }
        }

        for a in 0..n {
            for b in 0..n {
                if !self.composable(a, b) {
                    continue;
                }
                let ab = self.mult_basis(a, b);
                for c in 0..n {
                    if !self.composable(b, c) {
                        continue;
                    }
                    let left = self.mult_vec(ab, &SparseVec::basis(c));
                    let right = self.mult_vec(&SparseVec::basis(a), self.mult_basis(b, c));
                    if left != right {
                        violations.push(Violation::Axiom {
                            axiom: Axiom::Associativity,
                            witness: self.names(&[a, b, c]),
                            residual: self.format_vec(&left.sub(&right)),
                        });
                    }
                }
            }
        }

        for a in 0..n {
            for b in 0..n {
                if !self.composable(a, b) {
                    continue;
                }
                let lhs = self.diff_vec(self.mult_basis(a, b));
                let mut rhs = self.mult_vec(self.diff_basis(a), &SparseVec::basis(b));
                let tail = self.mult_vec(&SparseVec::basis(a), self.diff_basis(b));
                rhs.add_scaled(&tail, &sign(self.degree(a)));
                if lhs != rhs {
                    violations.push(Violation::Axiom {
                        axiom: Axiom::Leibniz,
                        witness: self.names(&[a, b]),
                        residual: self.format_vec(&lhs.sub(&rhs)),
                    });
                }
            }
        }

        for a in 0..n {
            let av = SparseVec::basis(a);
            let dd = self.diff_vec(self.diff_basis(a));
            let comm = self
                .mult_vec(self.curvature(self.cod(a)), &av)
                .sub(&self.mult_vec(&av, self.curvature(self.dom(a))));
            if dd != comm {
                violations.push(Violation::Axiom {
                    axiom: Axiom::CurvatureSquare,
                    witness: self.names(&[a]),
                    residual: self.format_vec(&dd.sub(&comm)),
                });
            }
        }

        for x in 0..self.num_objects() as u32 {
            let dh = self.diff_vec(self.curvature(x));
            if !dh.is_zero() {
                violations.push(Violation::Axiom {
                    axiom: Axiom::ClosedCurvature,
                    witness: vec![self.object_name(x).to_string()],
                    residual: self.format_vec(&dh),
                });
            }
        }

        if violations.is_empty() {
            Ok(())
        } else {
            Err(ValidationError { violations })
        }
    }
}
