use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::algebra::CdgCategory;
use crate::scalar::{format_rational, Rational};

/// Which quotient of the Hochschild complex a chain lives in.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize,
)]
pub enum Normalization {
    Unnormalized,
    /// Terms with an identity in a tail slot are zero.
    Normalized,
    /// Normalized, and additionally length-0 identity terms are zero (the
    /// reduced complex, used for the unit-adjoined category).
    Reduced,
}

/// A basis word `a_0[a_1|…|a_n]`. Words order by length, then degree, then
/// letter indices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    len: usize,
    degree: i64,
    letters: Vec<u32>,
}

impl Word {
    pub fn new(ctx: &CdgCategory, letters: Vec<u32>) -> Self {
        assert!(!letters.is_empty(), "a bar word needs a0");
        let degree = word_degree(ctx, &letters);
        Word {
            len: letters.len() - 1,
            degree,
            letters,
        }
    }

    /// Number of tail entries `n`.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn letters(&self) -> &[u32] {
        &self.letters
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.letters)
    }
}

pub(crate) fn word_degree(ctx: &CdgCategory, letters: &[u32]) -> i64 {
    let mut d = ctx.degree(letters[0]);
    for &x in &letters[1..] {
        d += ctx.degree(x) - 1;
    }
    ctx.grading().reduce(d)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ChainError {
    #[error("word {0} is not cyclically composable")]
    NotComposable(String),
    #[error("chains live over different categories")]
    ContextMismatch,
    #[error("basis index {0} out of range")]
    BadIndex(u32),
    #[error("chain is not in the expected complex: {0}")]
    WrongComplex(String),
}

/// A finite rational combination of bar words in canonical normal form.
#[derive(Clone)]
pub struct BarChain {
    ctx: Arc<CdgCategory>,
    mode: Normalization,
    terms: BTreeMap<Word, Rational>,
}

impl BarChain {
    pub fn new(ctx: Arc<CdgCategory>, mode: Normalization) -> Self {
        BarChain {
            ctx,
            mode,
            terms: BTreeMap::new(),
        }
    }

    /// Builds a chain from raw words, checking indices and composability.
    /// Words that are zero in `mode` are dropped.
    pub fn from_words<I>(
        ctx: Arc<CdgCategory>,
        mode: Normalization,
        words: I,
    ) -> Result<Self, ChainError>
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut c = BarChain::new(ctx, mode);
        for (w, coeff) in words {
            c.check_word(&w)?;
            c.add_word(w, coeff);
        }
        Ok(c)
    }

    pub fn check_word(&self, letters: &[u32]) -> Result<(), ChainError> {
        if letters.is_empty() {
            return Err(ChainError::NotComposable("[]".into()));
        }
        if let Some(&bad) = letters.iter().find(|&&x| x as usize >= self.ctx.dim()) {
            return Err(ChainError::BadIndex(bad));
        }
        let n = letters.len();
        for i in 0..n {
            if self.ctx.dom(letters[i]) != self.ctx.cod(letters[(i + 1) % n]) {
                return Err(ChainError::NotComposable(self.format_word(letters)));
            }
        }
        Ok(())
    }

    pub fn ctx(&self) -> &Arc<CdgCategory> {
        &self.ctx
    }

    pub fn mode(&self) -> Normalization {
        self.mode
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Rational)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, letters: &[u32]) -> Rational {
        let w = Word::new(&self.ctx, letters.to_vec());
        self.terms.get(&w).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn max_len(&self) -> Option<usize> {
        self.terms.keys().map(|w| w.len).max()
    }

    /// Whether a word survives the quotient of this chain's mode.
    pub fn admits(&self, letters: &[u32]) -> bool {
        admits(&self.ctx, self.mode, letters)
    }

    /// Adds `coeff` times a word assumed composable; words that vanish in
    /// this mode are ignored.
    pub fn add_word(&mut self, letters: Vec<u32>, coeff: Rational) {
        if coeff.is_zero() || !self.admits(&letters) {
            return;
        }
        let w = Word::new(&self.ctx, letters);
        self.add_normal(w, coeff);
    }

    fn add_normal(&mut self, w: Word, coeff: Rational) {
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn same_ctx(&self, other: &BarChain) -> bool {
        Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx == other.ctx
    }

    /// `self += scale * other`. Panics when the contexts differ; callers
    /// across contexts go through an explicit map.
    pub fn add_scaled(&mut self, other: &BarChain, scale: &Rational) {
        assert!(
            self.same_ctx(other),
            "adding chains over different categories"
        );
        if scale.is_zero() {
            return;
        }
        for (w, c) in &other.terms {
            if self.mode == other.mode || self.admits(&w.letters) {
                self.add_normal(w.clone(), c * scale);
            }
        }
    }

    pub fn add_assign(&mut self, other: &BarChain) {
        self.add_scaled(other, &crate::scalar::rat(1));
    }

    pub fn add(&self, other: &BarChain) -> BarChain {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &BarChain) -> BarChain {
        let mut out = self.clone();
        out.add_scaled(other, &crate::scalar::rat(-1));
        out
    }

    pub fn scaled(&self, scale: &Rational) -> BarChain {
        let mut out = BarChain::new(self.ctx.clone(), self.mode);
        out.add_scaled(self, scale);
        out
    }

    pub fn neg(&self) -> BarChain {
        self.scaled(&crate::scalar::rat(-1))
    }

    /// Projection to another quotient (only towards stronger normalization
    /// is meaningful; the words are re-filtered).
    pub fn project(&self, mode: Normalization) -> BarChain {
        let mut out = BarChain::new(self.ctx.clone(), mode);
        for (w, c) in &self.terms {
            if out.admits(&w.letters) {
                out.add_normal(w.clone(), c.clone());
            }
        }
        out
    }

    /// The same words read in another category with an identical basis
    /// (used for `End(N_α)` versus `End(N_0)`).
    pub fn with_context(&self, ctx: Arc<CdgCategory>) -> Result<BarChain, ChainError> {
        if ctx.dim() != self.ctx.dim() {
            return Err(ChainError::ContextMismatch);
        }
        let mut out = BarChain::new(ctx, self.mode);
        for (w, c) in &self.terms {
            out.add_word(w.letters.clone(), c.clone());
        }
        Ok(out)
    }

    /// Re-reads the words in a category whose basis extends this one's
    /// (letter indices are kept), accumulating in `mode`.
    pub(crate) fn transport(&self, ctx: Arc<CdgCategory>, mode: Normalization) -> BarChain {
        let mut out = BarChain::new(ctx, mode);
        for (w, c) in &self.terms {
            out.add_word(w.letters.clone(), c.clone());
        }
        out
    }

    /// Adds `coeff · v_0[v_1|…|v_n]`, expanding the vectors multilinearly.
    pub fn add_tensor(&mut self, factors: &[crate::scalar::SparseVec], coeff: &Rational) {
        let mut partial: Vec<(Vec<u32>, Rational)> = vec![(Vec::new(), coeff.clone())];
        for (slot, v) in factors.iter().enumerate() {
            let mut next = Vec::with_capacity(partial.len() * v.len());
            for (w, c) in &partial {
                for (k, x) in v.iter() {
                    if slot > 0
                        && self.mode != Normalization::Unnormalized
                        && self.ctx.is_identity(k)
                    {
                        continue;
                    }
                    let mut w2 = w.clone();
                    w2.push(k);
                    next.push((w2, c * x));
                }
            }
            partial = next;
        }
        for (w, c) in partial {
            if self.check_word(&w).is_ok() {
                self.add_word(w, c);
            }
        }
    }

    /// Terms of tail length `len`.
    pub fn of_length(&self, len: usize) -> BarChain {
        self.filter(|w| w.len == len)
    }

    pub fn filter(&self, keep: impl Fn(&Word) -> bool) -> BarChain {
        BarChain {
            ctx: self.ctx.clone(),
            mode: self.mode,
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| keep(w))
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn format_word(&self, letters: &[u32]) -> String {
        let head = self.ctx.label(letters[0]);
        if letters.len() == 1 {
            return head.to_string();
        }
        let tail: Vec<&str> = letters[1..].iter().map(|&x| self.ctx.label(x)).collect();
        format!("{head}[{}]", tail.join("|"))
    }
}

pub(crate) fn admits(ctx: &CdgCategory, mode: Normalization, letters: &[u32]) -> bool {
    match mode {
        Normalization::Unnormalized => true,
        Normalization::Normalized => !letters[1..].iter().any(|&x| ctx.is_identity(x)),
        Normalization::Reduced => {
            !letters[1..].iter().any(|&x| ctx.is_identity(x))
                && !(letters.len() == 1 && ctx.is_identity(letters[0]))
        }
    }
}

impl PartialEq for BarChain {
    fn eq(&self, other: &Self) -> bool {
        self.same_ctx(other) && self.terms == other.terms
    }
}

impl fmt::Debug for BarChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for BarChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (w, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(
                f,
                "({})*{}",
                format_rational(c),
                self.format_word(&w.letters)
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::scalar::rat;

    #[test]
    fn normal_form_merges_and_orders() {
        let a = Arc::new(fixtures::truncated_poly());
        let (one, x) = (a.unit(), a.index_of("x").unwrap());
        let mut c = BarChain::new(a.clone(), Normalization::Normalized);
        c.add_word(vec![x, x], rat(2));
        c.add_word(vec![one], rat(1));
        c.add_word(vec![x, x], rat(-2));
        c.add_word(vec![x, one], rat(5));
        assert_eq!(c.len(), 1);
        assert_eq!(c.coeff(&[one]), rat(1));
    }

    #[test]
    fn normalization_modes() {
        let a = Arc::new(fixtures::truncated_poly());
        let (one, x) = (a.unit(), a.index_of("x").unwrap());
        let raw = BarChain::from_words(
            a.clone(),
            Normalization::Unnormalized,
            [
                (vec![one, one, one], rat(1)),
                (vec![one], rat(1)),
                (vec![x, x], rat(1)),
            ],
        )
        .unwrap();
        let n = raw.project(Normalization::Normalized);
        assert_eq!(n.len(), 2);
        assert_eq!(n.project(Normalization::Normalized), n);
        assert_eq!(raw.project(Normalization::Reduced).len(), 1);
    }
}
