//! Shifted free modules `N = A[n_1] ⊕ … ⊕ A[n_l]` and matrix morphisms
//! between them.
//!
//! Entry `(i, j)` of a morphism `A[n_j] -> A[n_i]` of degree `p` is an element
//! of `A` of internal degree `p - n_i + n_j`. Think of it as `E_ij ⊗ a` with
//! `|E_ij| = n_i - n_j`; every sign below is the Koszul sign of moving an `a`
//! past some `E`.

mod matrix_algebra;
mod trace;

use std::fmt;

use crate::algebra::CdgAlgebra;
use crate::scalar::{sign, SparseVec};

pub use matrix_algebra::{ElementaryIndex, MatrixAlgebra};
pub use trace::{bullet, generalized_trace, trace_chain, TensorMatrix, Tensors};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModuleError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("entry ({row},{col}) is not homogeneous of degree {expected}")]
    EntryDegree {
        row: usize,
        col: usize,
        expected: i64,
    },
    #[error("Maurer-Cartan equation fails at ({row},{col}): residual {residual}")]
    McViolation {
        row: usize,
        col: usize,
        residual: String,
    },
    #[error("{law} fails at ({row},{col}): residual {residual}")]
    IdempotentViolation {
        law: &'static str,
        row: usize,
        col: usize,
        residual: String,
    },
}

/// The shifts `(n_1, …, n_l)` of a free module.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ShiftTuple(Vec<i64>);

impl ShiftTuple {
    pub fn new(shifts: Vec<i64>) -> Result<Self, ModuleError> {
        if shifts.is_empty() {
            return Err(ModuleError::ShapeMismatch(
                "a free module needs at least one summand".into(),
            ));
        }
        Ok(ShiftTuple(shifts))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> i64 {
        self.0[i]
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }
}

/// A homogeneous matrix morphism between shifted free modules.
#[derive(Clone, PartialEq, Eq)]
pub struct MatrixHom {
    src: ShiftTuple,
    tgt: ShiftTuple,
    degree: i64,
    /// row-major, `tgt.len()` rows and `src.len()` columns
    entries: Vec<SparseVec>,
}

impl MatrixHom {
    /// Checks shape and entry homogeneity against `algebra`.
    pub fn new(
        algebra: &CdgAlgebra,
        src: ShiftTuple,
        tgt: ShiftTuple,
        degree: i64,
        rows: Vec<Vec<SparseVec>>,
    ) -> Result<Self, ModuleError> {
        if rows.len() != tgt.len() || rows.iter().any(|r| r.len() != src.len()) {
            return Err(ModuleError::ShapeMismatch(format!(
                "expected {}x{} entries",
                tgt.len(),
                src.len()
            )));
        }
        let m = MatrixHom {
            src,
            tgt,
            degree,
            entries: rows.into_iter().flatten().collect(),
        };
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let expected = m.entry_degree(i, j);
                let e = m.entry(i, j);
                if e.indices().any(|k| k as usize >= algebra.dim()) {
                    return Err(ModuleError::ShapeMismatch(format!(
                        "entry ({i},{j}) has a bad basis index"
                    )));
                }
                if e.indices()
                    .any(|k| !algebra.grading().same(algebra.degree(k), expected))
                {
                    return Err(ModuleError::EntryDegree {
                        row: i,
                        col: j,
                        expected,
                    });
                }
            }
        }
        Ok(m)
    }

    pub fn zero(src: ShiftTuple, tgt: ShiftTuple, degree: i64) -> Self {
        let n = src.len() * tgt.len();
        MatrixHom {
            src,
            tgt,
            degree,
            entries: vec![SparseVec::zero(); n],
        }
    }

    pub fn identity(algebra: &CdgAlgebra, shifts: &ShiftTuple) -> Self {
        let mut m = Self::zero(shifts.clone(), shifts.clone(), 0);
        for i in 0..shifts.len() {
            m.set(i, i, SparseVec::basis(algebra.unit()));
        }
        m
    }

    pub fn src(&self) -> &ShiftTuple {
        &self.src
    }

    pub fn tgt(&self) -> &ShiftTuple {
        &self.tgt
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn rows(&self) -> usize {
        self.tgt.len()
    }

    pub fn cols(&self) -> usize {
        self.src.len()
    }

    pub fn is_square(&self) -> bool {
        self.src == self.tgt
    }

    pub fn entry(&self, i: usize, j: usize) -> &SparseVec {
        &self.entries[i * self.cols() + j]
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, v: SparseVec) {
        let c = self.cols();
        self.entries[i * c + j] = v;
    }

    /// Internal degree every component of entry `(i, j)` must have.
    pub fn entry_degree(&self, i: usize, j: usize) -> i64 {
        self.degree - self.tgt.get(i) + self.src.get(j)
    }

    /// Degree of the elementary matrix `E_ij` in this shape.
    pub fn elementary_degree(&self, i: usize, j: usize) -> i64 {
        self.tgt.get(i) - self.src.get(j)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn is_strictly_upper_triangular(&self) -> bool {
        self.is_square() && (0..self.rows()).all(|i| (0..=i).all(|j| self.entry(i, j).is_zero()))
    }

    fn same_shape(&self, other: &MatrixHom) -> Result<(), ModuleError> {
        if self.src != other.src || self.tgt != other.tgt {
            return Err(ModuleError::ShapeMismatch(
                "operands have different shapes".into(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &MatrixHom) -> Result<MatrixHom, ModuleError> {
        self.same_shape(other)?;
        if self.degree != other.degree && !(self.is_zero() || other.is_zero()) {
            return Err(ModuleError::DegreeMismatch(format!(
                "{} + {}",
                self.degree, other.degree
            )));
        }
        let degree = if self.is_zero() {
            other.degree
        } else {
            self.degree
        };
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.add(b))
            .collect();
        Ok(MatrixHom {
            src: self.src.clone(),
            tgt: self.tgt.clone(),
            degree,
            entries,
        })
    }

    pub fn sub(&self, other: &MatrixHom) -> Result<MatrixHom, ModuleError> {
        self.add(&other.scaled(&-crate::scalar::rat(1)))
    }

    pub fn scaled(&self, c: &crate::scalar::Rational) -> MatrixHom {
        MatrixHom {
            src: self.src.clone(),
            tgt: self.tgt.clone(),
            degree: self.degree,
            entries: self.entries.iter().map(|e| e.scaled(c)).collect(),
        }
    }

    pub fn format(&self, algebra: &CdgAlgebra) -> String {
        let rows: Vec<String> = (0..self.rows())
            .map(|i| {
                let cells: Vec<String> = (0..self.cols())
                    .map(|j| algebra.format_vec(self.entry(i, j)))
                    .collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        format!("[{}]", rows.join(", "))
    }
}

impl fmt::Debug for MatrixHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MatrixHom")
            .field("src", &self.src.0)
            .field("tgt", &self.tgt.0)
            .field("degree", &self.degree)
            .field("entries", &self.entries)
            .finish()
    }
}

/// `f ∘ g`. Entry `(i,k)` is `Σ_j ± f_ij g_jk`, the sign coming from moving
/// `f_ij` past `E_jk`.
pub fn compose(
    algebra: &CdgAlgebra,
    f: &MatrixHom,
    g: &MatrixHom,
) -> Result<MatrixHom, ModuleError> {
    if f.src != g.tgt {
        return Err(ModuleError::ShapeMismatch(
            "source of the left factor differs from target of the right".into(),
        ));
    }
    let mut out = MatrixHom::zero(g.src.clone(), f.tgt.clone(), f.degree + g.degree);
    for i in 0..f.rows() {
        for k in 0..g.cols() {
            let mut acc = SparseVec::zero();
            for j in 0..f.cols() {
                let (a, b) = (f.entry(i, j), g.entry(j, k));
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                let s = sign(f.entry_degree(i, j) * g.elementary_degree(j, k));
                acc.add_scaled(&algebra.mult_vec(a, b), &s);
            }
            out.set(i, k, acc);
        }
    }
    Ok(out)
}

/// Entrywise differential `d_F(E_ij ⊗ a) = (-1)^{|E_ij|} E_ij ⊗ d(a)`.
pub fn d_free(algebra: &CdgAlgebra, f: &MatrixHom) -> MatrixHom {
    let mut out = MatrixHom::zero(f.src.clone(), f.tgt.clone(), f.degree + 1);
    for i in 0..f.rows() {
        for j in 0..f.cols() {
            let d = algebra.diff_vec(f.entry(i, j));
            out.set(i, j, d.scaled(&sign(f.elementary_degree(i, j))));
        }
    }
    out
}

/// Twisted differential `d_F(f) + α f - (-1)^{|f|} f α` on endomorphisms.
pub fn d_twisted(
    algebra: &CdgAlgebra,
    alpha: &MatrixHom,
    f: &MatrixHom,
) -> Result<MatrixHom, ModuleError> {
    let af = compose(algebra, alpha, f)?;
    let fa = compose(algebra, f, alpha)?.scaled(&-sign(f.degree));
    let mut out = d_free(algebra, f);
    out = add_loose(&out, &af)?;
    add_loose(&out, &fa)
}

// addition that tolerates parity-equal degrees in Z2 mode
fn add_loose(a: &MatrixHom, b: &MatrixHom) -> Result<MatrixHom, ModuleError> {
    a.same_shape(b)?;
    let entries = a
        .entries
        .iter()
        .zip(&b.entries)
        .map(|(x, y)| x.add(y))
        .collect();
    Ok(MatrixHom {
        src: a.src.clone(),
        tgt: a.tgt.clone(),
        degree: a.degree,
        entries,
    })
}

fn first_nonzero(m: &MatrixHom) -> Option<(usize, usize)> {
    (0..m.rows())
        .flat_map(|i| (0..m.cols()).map(move |j| (i, j)))
        .find(|&(i, j)| !m.entry(i, j).is_zero())
}

/// Checks `d_F(α) + α² = -h·id`.
pub fn check_mc(alpha: &MatrixHom, algebra: &CdgAlgebra) -> Result<(), ModuleError> {
    if !algebra.grading().same(alpha.degree, 1) {
        return Err(ModuleError::DegreeMismatch(format!(
            "twist has degree {}, expected 1",
            alpha.degree
        )));
    }
    if !alpha.is_square() {
        return Err(ModuleError::ShapeMismatch(
            "twist must be an endomorphism".into(),
        ));
    }
    let sq = compose(algebra, alpha, alpha)?;
    let mut residual = add_loose(&d_free(algebra, alpha), &sq)?;
    let h = algebra.curvature(0);
    for i in 0..residual.rows() {
        let e = residual.entry(i, i).add(h);
        residual.set(i, i, e);
    }
    match first_nonzero(&residual) {
        None => Ok(()),
        Some((row, col)) => Err(ModuleError::McViolation {
            row,
            col,
            residual: algebra.format_vec(residual.entry(row, col)),
        }),
    }
}

/// Checks `π² = π` and `d_F(π) + απ - πα = 0`.
pub fn check_idempotent(
    pi: &MatrixHom,
    alpha: &MatrixHom,
    algebra: &CdgAlgebra,
) -> Result<(), ModuleError> {
    if !algebra.grading().same(pi.degree, 0) {
        return Err(ModuleError::DegreeMismatch(format!(
            "idempotent has degree {}, expected 0",
            pi.degree
        )));
    }
    if !pi.is_square() || pi.src != alpha.src {
        return Err(ModuleError::ShapeMismatch(
            "idempotent and twist must be endomorphisms of one module".into(),
        ));
    }
    let sq = compose(algebra, pi, pi)?;
    let diff = add_loose(&sq, &pi.scaled(&-crate::scalar::rat(1)))?;
    if let Some((row, col)) = first_nonzero(&diff) {
        return Err(ModuleError::IdempotentViolation {
            law: "pi^2 = pi",
            row,
            col,
            residual: algebra.format_vec(diff.entry(row, col)),
        });
    }
    let d = d_twisted(algebra, alpha, pi)?;
    if let Some((row, col)) = first_nonzero(&d) {
        return Err(ModuleError::IdempotentViolation {
            law: "closedness",
            row,
            col,
            residual: algebra.format_vec(d.entry(row, col)),
        });
    }
    Ok(())
}

/// `Σ_i (-1)^{n_i} m_ii`.
pub fn supertrace(m: &MatrixHom) -> Result<SparseVec, ModuleError> {
    if !m.is_square() {
        return Err(ModuleError::ShapeMismatch(
            "supertrace needs an endomorphism".into(),
        ));
    }
    let mut out = SparseVec::zero();
    for i in 0..m.rows() {
        out.add_scaled(m.entry(i, i), &sign(m.src.get(i)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::scalar::rat;

    fn x(a: &CdgAlgebra, label: &str, c: i64) -> SparseVec {
        SparseVec::term(a.index_of(label).unwrap(), rat(c))
    }

    #[test]
    fn mf_square_is_minus_h() {
        let a = fixtures::truncated_poly();
        let shifts = ShiftTuple::new(vec![0, 1]).unwrap();
        let z = SparseVec::zero();
        let alpha = MatrixHom::new(
            &a,
            shifts.clone(),
            shifts.clone(),
            1,
            vec![
                vec![z.clone(), x(&a, "x", 1)],
                vec![x(&a, "x", -1), z.clone()],
            ],
        )
        .unwrap();
        let sq = compose(&a, &alpha, &alpha).unwrap();
        assert_eq!(sq.entry(0, 0), &x(&a, "x2", -1));
        assert_eq!(sq.entry(1, 1), &x(&a, "x2", -1));
        assert!(sq.entry(0, 1).is_zero());
        assert!(check_mc(&alpha, &a).is_ok());

        let bad = MatrixHom::new(
            &a,
            shifts.clone(),
            shifts,
            1,
            vec![vec![z.clone(), x(&a, "x", 1)], vec![x(&a, "x", 1), z]],
        )
        .unwrap();
        assert!(matches!(
            check_mc(&bad, &a),
            Err(ModuleError::McViolation { .. })
        ));
    }

    #[test]
    fn supertrace_of_identity() {
        let a = fixtures::exterior();
        let id = MatrixHom::identity(&a, &ShiftTuple::new(vec![0, 1]).unwrap());
        assert!(supertrace(&id).unwrap().is_zero());
        let id = MatrixHom::identity(&a, &ShiftTuple::new(vec![0, 0]).unwrap());
        assert_eq!(supertrace(&id).unwrap(), SparseVec::term(a.unit(), rat(2)));
    }

    #[test]
    fn identity_is_neutral_and_nilpotents_vanish() {
        let a = fixtures::exterior();
        let s = ShiftTuple::new(vec![0, 0]).unwrap();
        let mut n = MatrixHom::zero(s.clone(), s.clone(), 0);
        n.set(0, 1, SparseVec::basis(a.unit()));
        let id = MatrixHom::identity(&a, &s);
        assert_eq!(compose(&a, &id, &n).unwrap(), n);
        assert!(compose(&a, &n, &n).unwrap().is_zero());
    }

    #[test]
    fn shape_and_degree_errors() {
        let a = fixtures::exterior();
        let s1 = ShiftTuple::new(vec![0]).unwrap();
        let s2 = ShiftTuple::new(vec![0, 0]).unwrap();
        let f = MatrixHom::identity(&a, &s1);
        let g = MatrixHom::identity(&a, &s2);
        assert!(matches!(
            compose(&a, &f, &g),
            Err(ModuleError::ShapeMismatch(_))
        ));
        let xi = a.index_of("xi").unwrap();
        assert!(MatrixHom::new(&a, s1.clone(), s1, 0, vec![vec![SparseVec::basis(xi)]]).is_err());
        assert!(ShiftTuple::new(vec![]).is_err());
    }

    #[test]
    fn twisted_idempotent_checks() {
        let a = fixtures::exterior();
        let s = ShiftTuple::new(vec![0, 0]).unwrap();
        let alpha = MatrixHom::zero(s.clone(), s.clone(), 1);
        let mut pi = MatrixHom::zero(s.clone(), s.clone(), 0);
        pi.set(0, 0, SparseVec::basis(a.unit()));
        assert!(check_idempotent(&pi, &alpha, &a).is_ok());
        // [[1,1],[0,0]] is idempotent, but [α, π] ≠ 0 for α = ξ E_10
        let mut p2 = pi.clone();
        p2.set(0, 1, SparseVec::basis(a.unit()));
        let mut al = MatrixHom::zero(s.clone(), s, 1);
        al.set(1, 0, SparseVec::basis(a.index_of("xi").unwrap()));
        assert!(check_mc(&al, &a).is_ok());
        assert!(matches!(
            check_idempotent(&p2, &al, &a),
            Err(ModuleError::IdempotentViolation {
                law: "closedness",
                ..
            })
        ));
    }
}
