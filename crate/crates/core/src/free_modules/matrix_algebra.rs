use std::sync::Arc;

use super::{MatrixHom, ModuleError, ShiftTuple};
use crate::algebra::{CategoryParts, CdgAlgebra, CdgCategory};
use crate::scalar::{sign, SparseVec};

/// Position of an elementary tensor `E_{row,col} ⊗ b_letter`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementaryIndex {
    pub row: usize,
    pub col: usize,
    pub letter: u32,
}

/// `End_A(N)` as a one-object cdg category with an explicit basis.
///
/// The natural basis is the elementary tensors `E_ij ⊗ b_k`; we replace
/// `E_00 ⊗ 1` by the identity matrix so that the identity is a basis vector
/// (normalization needs to recognize it). Basis index 0 is always the
/// identity. The same basis serves `End(N_0)` (entrywise differential,
/// curvature `h·I`) and every twist `End(N_α)`.
#[derive(Debug, Clone)]
pub struct MatrixAlgebra {
    base: Arc<CdgAlgebra>,
    shifts: ShiftTuple,
    to_elem: Vec<SparseVec>,
    elem_to_basis: Vec<SparseVec>,
    untwisted: Arc<CdgCategory>,
}

impl MatrixAlgebra {
    pub fn new(base: Arc<CdgAlgebra>, shifts: ShiftTuple) -> Self {
        let l = shifts.len();
        let dim_a = base.dim();
        let n_elem = l * l * dim_a;
        let unit = base.unit();
        let skip = unit as usize; // elementary index of E_00 ⊗ 1

        let mut to_elem = Vec::with_capacity(n_elem);
        let mut elem_to_basis = vec![SparseVec::zero(); n_elem];
        let mut identity = SparseVec::zero();
        for i in 0..l {
            identity.add_term(elem_index(l, dim_a, i, i, unit), crate::scalar::rat(1));
        }
        to_elem.push(identity);
        for (e, slot) in elem_to_basis.iter_mut().enumerate() {
            if e == skip {
                continue;
            }
            *slot = SparseVec::basis(to_elem.len() as u32);
            to_elem.push(SparseVec::basis(e as u32));
        }
        // E_00 ⊗ 1 = I - Σ_{i≥1} E_ii ⊗ 1
        let mut v = SparseVec::basis(0);
        for i in 1..l {
            v.add_scaled(
                &elem_to_basis[elem_index(l, dim_a, i, i, unit) as usize],
                &crate::scalar::rat(-1),
            );
        }
        elem_to_basis[skip] = v;

        let mut m = MatrixAlgebra {
            base,
            shifts,
            to_elem,
            elem_to_basis,
            untwisted: Arc::new(CdgCategory::from_parts(empty_parts())),
        };
        m.untwisted = Arc::new(m.build_untwisted());
        m
    }

    pub fn base(&self) -> &Arc<CdgAlgebra> {
        &self.base
    }

    pub fn shifts(&self) -> &ShiftTuple {
        &self.shifts
    }

    pub fn size(&self) -> usize {
        self.shifts.len()
    }

    pub fn dim(&self) -> usize {
        self.to_elem.len()
    }

    /// `End(N_0)`: entrywise differential and curvature `h·I`.
    pub fn untwisted(&self) -> &Arc<CdgCategory> {
        &self.untwisted
    }

    pub fn elementary(&self, e: u32) -> ElementaryIndex {
        let dim_a = self.base.dim();
        let l = self.size();
        let e = e as usize;
        ElementaryIndex {
            row: e / (l * dim_a),
            col: (e / dim_a) % l,
            letter: (e % dim_a) as u32,
        }
    }

    pub fn elementary_index(&self, ix: ElementaryIndex) -> u32 {
        elem_index(self.size(), self.base.dim(), ix.row, ix.col, ix.letter)
    }

    /// Basis vector in elementary coordinates.
    pub fn expansion(&self, basis_index: u32) -> &SparseVec {
        &self.to_elem[basis_index as usize]
    }

    pub fn to_elementary(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::zero();
        for (b, c) in v.iter() {
            out.add_scaled(&self.to_elem[b as usize], c);
        }
        out
    }

    pub fn from_elementary(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::zero();
        for (e, c) in v.iter() {
            out.add_scaled(&self.elem_to_basis[e as usize], c);
        }
        out
    }

    pub fn hom_to_vec(&self, m: &MatrixHom) -> Result<SparseVec, ModuleError> {
        if m.src() != &self.shifts || m.tgt() != &self.shifts {
            return Err(ModuleError::ShapeMismatch(
                "not an endomorphism of this module".into(),
            ));
        }
        let mut elem = SparseVec::zero();
        for i in 0..self.size() {
            for j in 0..self.size() {
                for (k, c) in m.entry(i, j).iter() {
                    elem.add_term(elem_index(self.size(), self.base.dim(), i, j, k), c.clone());
                }
            }
        }
        Ok(self.from_elementary(&elem))
    }

    pub fn vec_to_hom(&self, v: &SparseVec, degree: i64) -> MatrixHom {
        let mut m = MatrixHom::zero(self.shifts.clone(), self.shifts.clone(), degree);
        let elem = self.to_elementary(v);
        for (e, c) in elem.iter() {
            let ix = self.elementary(e);
            let mut entry = m.entry(ix.row, ix.col).clone();
            entry.add_term(ix.letter, c.clone());
            m.set(ix.row, ix.col, entry);
        }
        m
    }

    fn elem_degree_raw(&self, e: u32) -> i64 {
        let ix = self.elementary(e);
        self.shifts.get(ix.row) - self.shifts.get(ix.col) + self.base.declared_degree(ix.letter)
    }

    /// `(E_ij ⊗ a)(E_jm ⊗ b) = (-1)^{|a||E_jm|} E_im ⊗ ab`
    fn elem_mult(&self, u: &SparseVec, v: &SparseVec) -> SparseVec {
        let (l, dim_a) = (self.size(), self.base.dim());
        let mut out = SparseVec::zero();
        for (e1, c1) in u.iter() {
            let a = self.elementary(e1);
            for (e2, c2) in v.iter() {
                let b = self.elementary(e2);
                if a.col != b.row {
                    continue;
                }
                let p = self.base.mult_basis(a.letter, b.letter);
                if p.is_zero() {
                    continue;
                }
                let s = sign(
                    self.base.degree(a.letter) * (self.shifts.get(b.row) - self.shifts.get(b.col)),
                );
                let coeff = c1 * c2 * s;
                for (k, c) in p.iter() {
                    out.add_term(elem_index(l, dim_a, a.row, b.col, k), &coeff * c);
                }
            }
        }
        out
    }

    /// `d(E_ij ⊗ a) = (-1)^{|E_ij|} E_ij ⊗ da`
    fn elem_diff(&self, u: &SparseVec) -> SparseVec {
        let (l, dim_a) = (self.size(), self.base.dim());
        let mut out = SparseVec::zero();
        for (e, c) in u.iter() {
            let ix = self.elementary(e);
            let s = sign(self.shifts.get(ix.row) - self.shifts.get(ix.col));
            for (k, d) in self.base.diff_basis(ix.letter).iter() {
                out.add_term(elem_index(l, dim_a, ix.row, ix.col, k), c * d * &s);
            }
        }
        out
    }

    fn labels(&self) -> Vec<String> {
        let l = self.size();
        let sep = if l > 9 { "," } else { "" };
        (0..self.dim())
            .map(|b| {
                if b == 0 {
                    return "I".to_string();
                }
                let (e, _) = self.to_elem[b].leading().unwrap();
                let ix = self.elementary(e);
                format!(
                    "{}_{}{}{}",
                    self.base.label(ix.letter),
                    ix.row + 1,
                    sep,
                    ix.col + 1
                )
            })
            .collect()
    }

    fn mult_table(&self) -> Vec<SparseVec> {
        let n = self.dim();
        let mut mult = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                mult.push(
                    self.from_elementary(&self.elem_mult(&self.to_elem[a], &self.to_elem[b])),
                );
            }
        }
        mult
    }

    fn build_untwisted(&self) -> CdgCategory {
        let n = self.dim();
        let degrees = (0..n)
            .map(|b| match self.to_elem[b].leading() {
                Some((e, _)) if b > 0 => self.elem_degree_raw(e),
                _ => 0,
            })
            .collect();
        let diff = (0..n)
            .map(|b| self.from_elementary(&self.elem_diff(&self.to_elem[b])))
            .collect();
        let mut h = SparseVec::zero();
        for i in 0..self.size() {
            for (k, c) in self.base.curvature(0).iter() {
                h.add_term(elem_index(self.size(), self.base.dim(), i, i, k), c.clone());
            }
        }
        CdgCategory::from_parts(CategoryParts {
            grading: self.base.grading(),
            objects: vec!["N".to_string()],
            labels: self.labels(),
            degrees,
            dom: vec![0; n],
            cod: vec![0; n],
            identities: vec![0],
            mult: self.mult_table(),
            diff,
            curvature: vec![self.from_elementary(&h)],
        })
    }

    /// `End(N_α)`: differential `d_0 + [α, -]`, no curvature. Fails when `α`
    /// does not solve the Maurer-Cartan equation.
    pub fn twisted(&self, alpha: &MatrixHom) -> Result<Arc<CdgCategory>, ModuleError> {
        super::check_mc(alpha, &self.base)?;
        let a = self.hom_to_vec(alpha)?;
        let m0 = &self.untwisted;
        let n = self.dim();
        let diff = (0..n as u32)
            .map(|b| {
                let bv = SparseVec::basis(b);
                let mut d = m0.diff_basis(b).clone();
                d.add_assign(&m0.mult_vec(&a, &bv));
                d.add_scaled(&m0.mult_vec(&bv, &a), &-sign(m0.degree(b)));
                d
            })
            .collect();
        let mut parts = (**m0).clone().into_parts();
        parts.diff = diff;
        parts.curvature = vec![SparseVec::zero()];
        parts.objects = vec!["N".to_string()];
        Ok(Arc::new(CdgCategory::from_parts(parts)))
    }
}

fn elem_index(l: usize, dim_a: usize, i: usize, j: usize, k: u32) -> u32 {
    ((i * l + j) * dim_a + k as usize) as u32
}

fn empty_parts() -> CategoryParts {
    CategoryParts {
        grading: crate::algebra::Grading::Z,
        objects: vec![],
        labels: vec![],
        degrees: vec![],
        dom: vec![],
        cod: vec![],
        identities: vec![],
        mult: vec![],
        diff: vec![],
        curvature: vec![],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn matrix_algebras_are_cdg() {
        for f in fixtures::all() {
            let m = MatrixAlgebra::new(f.algebra.clone(), f.shifts.clone());
            m.untwisted().validate().unwrap();
            m.twisted(&f.alpha).unwrap().validate().unwrap();
        }
    }

    #[test]
    fn round_trip_through_basis() {
        let f = fixtures::mf();
        let m = MatrixAlgebra::new(f.algebra.clone(), f.shifts.clone());
        let v = m.hom_to_vec(&f.alpha).unwrap();
        assert_eq!(m.vec_to_hom(&v, 1), f.alpha);
        let id = MatrixHom::identity(&f.algebra, &f.shifts);
        assert_eq!(m.hom_to_vec(&id).unwrap(), SparseVec::basis(0));
    }

    #[test]
    fn basis_product_matches_compose() {
        let f = fixtures::triangular();
        let m = MatrixAlgebra::new(f.algebra.clone(), f.shifts.clone());
        let (a, p) = (
            m.hom_to_vec(&f.alpha).unwrap(),
            m.hom_to_vec(&f.pi).unwrap(),
        );
        let prod = m.untwisted().mult_vec(&a, &p);
        let direct = super::super::compose(&f.algebra, &f.alpha, &f.pi).unwrap();
        assert_eq!(prod, m.hom_to_vec(&direct).unwrap());
    }
}
