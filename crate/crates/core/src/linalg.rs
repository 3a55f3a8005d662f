//! Exact sparse linear algebra over the rationals.
//!
//! [`SpanBasis`] keeps a reduced row-echelon form of the vectors added so far
//! together with, for every echelon row, its expression in terms of the
//! accepted vectors. That is enough both for extracting bases of subspaces
//! and for solving `A w = r` when the columns of `A` are fed in one at a time.

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::scalar::{Rational, SparseVec};

#[derive(Clone, Debug)]
struct Row {
    vec: SparseVec,
    /// The row as a combination of accepted vectors (by acceptance order).
    combo: SparseVec,
}

/// Incrementally maintained basis of a span of sparse vectors.
#[derive(Clone, Debug, Default)]
pub struct SpanBasis {
    rows: Vec<Row>,
    by_pivot: HashMap<u32, usize>,
    accepted: Vec<SparseVec>,
}

impl SpanBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dim(&self) -> usize {
        self.accepted.len()
    }

    /// The accepted (linearly independent) vectors, in acceptance order.
    pub fn basis(&self) -> &[SparseVec] {
        &self.accepted
    }

    fn reduce(&self, v: &SparseVec) -> (SparseVec, SparseVec) {
        let mut residual = v.clone();
        let mut combo = SparseVec::zero();
        let hits: Vec<(usize, Rational)> = v
            .iter()
            .filter_map(|(k, c)| self.by_pivot.get(&k).map(|&r| (r, c.clone())))
            .collect();
        for (r, c) in hits {
            let row = &self.rows[r];
            residual.add_scaled(&row.vec, &-c.clone());
            combo.add_scaled(&row.combo, &c);
        }
        (residual, combo)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).0.is_zero()
    }

    /// Adds `v` if it is independent of the current span. Returns the index
    /// of the new basis vector, or `None` if `v` was already in the span.
    pub fn insert(&mut self, v: &SparseVec) -> Option<usize> {
        let (residual, combo) = self.reduce(v);
        let (pivot, lead) = match residual.leading() {
            None => return None,
            Some((p, c)) => (p, c.clone()),
        };
        let k = self.accepted.len();
        self.accepted.push(v.clone());
        let inv = Rational::one() / lead;
        let mut row_combo = combo.neg();
        row_combo.add_term(k as u32, Rational::one());
        let row = Row {
            vec: residual.scaled(&inv),
            combo: row_combo.scaled(&inv),
        };
        for other in self.rows.iter_mut() {
            let c = other.vec.get(pivot);
            if !c.is_zero() {
                other.vec.add_scaled(&row.vec, &-c.clone());
                other.combo.add_scaled(&row.combo, &-c);
            }
        }
        self.by_pivot.insert(pivot, self.rows.len());
        self.rows.push(row);
        Some(k)
    }

    /// Coordinates of `v` with respect to [`SpanBasis::basis`], or `None`
    /// when `v` is not in the span.
    pub fn coordinates(&self, v: &SparseVec) -> Option<SparseVec> {
        let (residual, combo) = self.reduce(v);
        if residual.is_zero() {
            Some(combo)
        } else {
            None
        }
    }
}

/// Solves `sum_j w_j columns[j] = target`; returns the sparse solution `w`
/// indexed by column position, or `None` when the system is inconsistent.
pub fn solve_columns(columns: &[SparseVec], target: &SparseVec) -> Option<SparseVec> {
    let mut span = SpanBasis::new();
    let mut accepted_ids = Vec::new();
    for (j, col) in columns.iter().enumerate() {
        if span.insert(col).is_some() {
            accepted_ids.push(j as u32);
        }
    }
    let coords = span.coordinates(target)?;
    Some(
        coords
            .iter()
            .map(|(k, c)| (accepted_ids[k as usize], c.clone()))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn v(entries: &[(u32, i64)]) -> SparseVec {
        entries.iter().map(|&(k, c)| (k, rat(c))).collect()
    }

    #[test]
    fn span_and_coordinates() {
        let mut s = SpanBasis::new();
        assert_eq!(s.insert(&v(&[(0, 1), (1, 1)])), Some(0));
        assert_eq!(s.insert(&v(&[(1, 2), (2, 1)])), Some(1));
        assert_eq!(s.insert(&v(&[(0, 2), (1, 4), (2, 1)])), None);
        let c = s.coordinates(&v(&[(0, 3), (1, 5), (2, 1)])).unwrap();
        assert_eq!(c, v(&[(0, 3), (1, 1)]));
        assert!(s.coordinates(&v(&[(3, 1)])).is_none());
    }

    #[test]
    fn solve_small_system() {
        // columns (1,0,1), (0,1,1), (1,1,2)
        let cols = vec![
            v(&[(0, 1), (2, 1)]),
            v(&[(1, 1), (2, 1)]),
            v(&[(0, 1), (1, 1), (2, 2)]),
        ];
        let w = solve_columns(&cols, &v(&[(0, 2), (1, -1), (2, 1)])).unwrap();
        let mut check = SparseVec::zero();
        for (j, c) in w.iter() {
            check.add_scaled(&cols[j as usize], c);
        }
        assert_eq!(check, v(&[(0, 2), (1, -1), (2, 1)]));
        assert!(solve_columns(&cols, &v(&[(0, 1)])).is_none());
    }
}
