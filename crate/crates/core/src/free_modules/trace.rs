use std::collections::BTreeMap;

use super::{MatrixAlgebra, MatrixHom, ModuleError};
use crate::algebra::CdgAlgebra;
use crate::hochschild::{BarChain, Normalization};
use crate::scalar::{sign, Rational};

/// Formal sums of pure tensors `a_0 ⊗ … ⊗ a_n`, keyed by letter indices.
pub type Tensors = BTreeMap<Vec<u32>, Rational>;

fn add_tensor(t: &mut Tensors, word: Vec<u32>, c: Rational) {
    use num_traits::Zero;
    if c.is_zero() {
        return;
    }
    let slot = t.entry(word.clone()).or_insert_with(Rational::zero);
    *slot += c;
    if slot.is_zero() {
        t.remove(&word);
    }
}

/// A matrix whose entries are tensors over `A`, between shifted free modules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorMatrix {
    row_shifts: Vec<i64>,
    col_shifts: Vec<i64>,
    entries: Vec<Tensors>,
}

impl TensorMatrix {
    /// Each entry component `c·b_k` becomes the one-letter tensor `c·[k]`.
    pub fn from_hom(m: &MatrixHom) -> Self {
        let mut entries = Vec::with_capacity(m.rows() * m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                entries.push(
                    m.entry(i, j)
                        .iter()
                        .map(|(k, c)| (vec![k], c.clone()))
                        .collect(),
                );
            }
        }
        TensorMatrix {
            row_shifts: m.tgt().as_slice().to_vec(),
            col_shifts: m.src().as_slice().to_vec(),
            entries,
        }
    }

    /// The identity, with empty tensors (the scalar 1) on the diagonal.
    pub fn identity(shifts: &[i64]) -> Self {
        let l = shifts.len();
        let mut entries = vec![Tensors::new(); l * l];
        for i in 0..l {
            entries[i * l + i].insert(Vec::new(), crate::scalar::rat(1));
        }
        TensorMatrix {
            row_shifts: shifts.to_vec(),
            col_shifts: shifts.to_vec(),
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.row_shifts.len()
    }

    pub fn cols(&self) -> usize {
        self.col_shifts.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Tensors {
        &self.entries[i * self.cols() + j]
    }
}

/// Suspended degree `Σ (|a| - 1)` of a tensor word.
fn suspended(algebra: &CdgAlgebra, word: &[u32]) -> i64 {
    word.iter().map(|&k| algebra.degree(k) - 1).sum()
}

/// `(a_ij) • (b_jk) = (Σ_j ± a_ij ⊗ b_jk)`; the sign moves the suspended
/// letters of `a_ij` past the elementary matrix `E_jk`. With `prune_units`,
/// tensors with the unit in a slot other than the first are dropped on the
/// fly.
pub fn bullet(
    algebra: &CdgAlgebra,
    a: &TensorMatrix,
    b: &TensorMatrix,
    prune_units: bool,
) -> Result<TensorMatrix, ModuleError> {
    if a.col_shifts != b.row_shifts {
        return Err(ModuleError::ShapeMismatch(
            "inner shifts of a bullet product differ".into(),
        ));
    }
    let unit = algebra.unit();
    let mut entries = vec![Tensors::new(); a.rows() * b.cols()];
    for i in 0..a.rows() {
        for k in 0..b.cols() {
            let out = &mut entries[i * b.cols() + k];
            for j in 0..a.cols() {
                let e_jk = b.row_shifts[j] - b.col_shifts[k];
                for (w1, c1) in a.entry(i, j) {
                    let s = sign(suspended(algebra, w1) * e_jk);
                    for (w2, c2) in b.entry(j, k) {
                        if prune_units
                            && w2
                                .iter()
                                .enumerate()
                                .any(|(p, &x)| x == unit && w1.len() + p >= 1)
                        {
                            continue;
                        }
                        let mut w = w1.clone();
                        w.extend_from_slice(w2);
                        add_tensor(out, w, c1 * c2 * &s);
                    }
                }
            }
        }
    }
    Ok(TensorMatrix {
        row_shifts: a.row_shifts.clone(),
        col_shifts: b.col_shifts.clone(),
        entries,
    })
}

/// `Tr(φ_0 ⊗ … ⊗ φ_n) = str(φ_0 • … • φ_n)`.
pub fn generalized_trace(
    algebra: &CdgAlgebra,
    factors: &[MatrixHom],
    normalized: bool,
) -> Result<Tensors, ModuleError> {
    let first = factors
        .first()
        .ok_or_else(|| ModuleError::ShapeMismatch("no factors".into()))?;
    for w in factors.windows(2) {
        if w[0].src() != w[1].tgt() {
            return Err(ModuleError::ShapeMismatch(
                "factors are not composable".into(),
            ));
        }
    }
    if factors.last().unwrap().src() != first.tgt() {
        return Err(ModuleError::ShapeMismatch(
            "factors are not cyclically composable".into(),
        ));
    }
    let mut acc = TensorMatrix::from_hom(first);
    for f in &factors[1..] {
        acc = bullet(algebra, &acc, &TensorMatrix::from_hom(f), normalized)?;
    }
    let mut out = Tensors::new();
    for i in 0..acc.rows() {
        let s = sign(acc.row_shifts[i]);
        for (w, c) in acc.entry(i, i) {
            add_tensor(&mut out, w.clone(), c * &s);
        }
    }
    Ok(out)
}

/// Chain-level trace from `End(N)`-chains to `A`-chains.
///
/// A word of matrix letters expands into sums over index cycles
/// `i_0 -> i_1 -> … -> i_0`; the sign is that of [`generalized_trace`]. The
/// result is projected to `mode`, and with a normalizing mode unit letters in
/// tail slots are pruned before expansion.
pub fn trace_chain(mat: &MatrixAlgebra, chain: &BarChain, mode: Normalization) -> BarChain {
    let base = mat.base();
    let unit = base.unit();
    let prune = mode != Normalization::Unnormalized;
    let shifts = mat.shifts().as_slice();
    let mut out = BarChain::new(base.clone(), mode);

    // letter -> components grouped by row: (row, col, a-letter, coeff)
    type Comp = (usize, usize, u32, Rational);
    let comps: Vec<Vec<Comp>> = (0..mat.dim() as u32)
        .map(|b| {
            mat.expansion(b)
                .iter()
                .map(|(e, c)| {
                    let ix = mat.elementary(e);
                    (ix.row, ix.col, ix.letter, c.clone())
                })
                .collect()
        })
        .collect();

    let partials: Vec<BarChain> = {
        use rayon::prelude::*;
        let terms: Vec<_> = chain.terms().collect();
        terms
            .par_iter()
            .map(|(word, coeff)| {
                let mut local = BarChain::new(base.clone(), mode);
                let letters = word.letters();
                let mut stack: Vec<u32> = Vec::with_capacity(letters.len());
                for (r0, c0, a0, k0) in &comps[letters[0] as usize] {
                    stack.clear();
                    stack.push(*a0);
                    let susp = base.degree(*a0) - 1;
                    let exp = shifts[*r0];
                    descend(
                        base,
                        &comps,
                        letters,
                        1,
                        *r0,
                        *c0,
                        susp,
                        exp,
                        &(*coeff * k0),
                        prune,
                        unit,
                        shifts,
                        &mut stack,
                        &mut local,
                    );
                }
                local
            })
            .collect()
    };
    for p in partials {
        out.add_assign(&p);
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn descend(
    base: &CdgAlgebra,
    comps: &[Vec<(usize, usize, u32, Rational)>],
    letters: &[u32],
    pos: usize,
    start_row: usize,
    cur_col: usize,
    susp: i64,
    exp: i64,
    coeff: &Rational,
    prune: bool,
    unit: u32,
    shifts: &[i64],
    stack: &mut Vec<u32>,
    out: &mut BarChain,
) {
    if pos == letters.len() {
        if cur_col == start_row {
            out.add_word(stack.clone(), coeff * sign(exp));
        }
        return;
    }
    for (r, c, a, k) in &comps[letters[pos] as usize] {
        if *r != cur_col || (prune && *a == unit) {
            continue;
        }
        let e = shifts[*r] - shifts[*c];
        stack.push(*a);
        descend(
            base,
            comps,
            letters,
            pos + 1,
            start_row,
            *c,
            susp + base.degree(*a) - 1,
            exp + susp * e,
            &(coeff * k),
            prune,
            unit,
            shifts,
            stack,
            out,
        );
        stack.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::free_modules::ShiftTuple;
    use crate::scalar::{rat, SparseVec};

    #[test]
    fn one_by_one_bullet_is_tensor() {
        let a = fixtures::exterior();
        let xi = a.index_of("xi").unwrap();
        let s = ShiftTuple::new(vec![0]).unwrap();
        let f = MatrixHom::new(
            &a,
            s.clone(),
            s.clone(),
            1,
            vec![vec![SparseVec::basis(xi)]],
        )
        .unwrap();
        let g = MatrixHom::identity(&a, &s);
        let p = bullet(
            &a,
            &TensorMatrix::from_hom(&f),
            &TensorMatrix::from_hom(&g),
            false,
        )
        .unwrap();
        assert_eq!(
            p.entry(0, 0),
            &Tensors::from([(vec![xi, a.unit()], rat(1))])
        );
        let id = TensorMatrix::identity(&[0]);
        let q = bullet(&a, &id, &TensorMatrix::from_hom(&f), false).unwrap();
        assert_eq!(q, TensorMatrix::from_hom(&f));
    }

    #[test]
    fn elementary_bullet_single_summand() {
        let a = fixtures::exterior();
        let s = ShiftTuple::new(vec![0, 0]).unwrap();
        let mut e12 = MatrixHom::zero(s.clone(), s.clone(), 0);
        e12.set(0, 1, SparseVec::basis(a.unit()));
        let mut e21 = MatrixHom::zero(s.clone(), s, 0);
        e21.set(1, 0, SparseVec::basis(a.unit()));
        let p = bullet(
            &a,
            &TensorMatrix::from_hom(&e12),
            &TensorMatrix::from_hom(&e21),
            false,
        )
        .unwrap();
        assert_eq!(p.entry(0, 0).len(), 1);
        assert!(p.entry(1, 1).is_empty() && p.entry(0, 1).is_empty());
    }

    #[test]
    fn trace_of_projector_and_identity() {
        let a = fixtures::exterior();
        let s = ShiftTuple::new(vec![0, 0]).unwrap();
        let mut pi = MatrixHom::zero(s.clone(), s, 0);
        pi.set(0, 0, SparseVec::basis(a.unit()));
        let t = generalized_trace(&a, &[pi], false).unwrap();
        assert_eq!(t, Tensors::from([(vec![a.unit()], rat(1))]));
        let id = MatrixHom::identity(&a, &ShiftTuple::new(vec![0, 1]).unwrap());
        assert!(generalized_trace(&a, &[id], false).unwrap().is_empty());
    }
}
