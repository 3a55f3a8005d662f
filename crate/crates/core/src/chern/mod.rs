//! Chern character evaluators and their certification.
//!
//! Three routes compute the same truncated cocycle:
//!
//! * [`chern_direct`] sums the closed formula over insertion tuples,
//! * [`chern_finite`] is the same sum with every insertion block bounded by
//!   `l - 1` (strictly upper triangular twists over a `Z`-graded dg algebra),
//! * [`chern_oracle`] pushes `γ_P` through the categorical pipeline
//!   `Tr ∘ (id, α)_* ∘ quot ∘ F_*(u)`.
//!
//! Every result carries a [`CertificationReport`].

mod formula;
mod oracle;
pub(crate) mod verify;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{CdgAlgebra, CdgCategory};
use crate::free_modules::{
    check_idempotent, check_mc, MatrixAlgebra, MatrixHom, ModuleError, ShiftTuple,
};
use crate::hochschild::{BarChain, Normalization, TruncationCaps, TruncationEntry, UChain};
use crate::nonunital::NonunitalError;
use crate::scalar::{factorial, rat, sign, Rational, SparseVec};

pub use formula::{chern_direct, chern_finite, coefficient_c, direct_chain, finite_chain};
pub use oracle::{chern_oracle, oracle_chain, u0_reference, OracleTrace};
pub use verify::{
    compare, homologous, verify_cocycle, witness_residual, CertificationReport, CocycleReport,
    Comparison, HomologousOutcome, IdentityCheck, Outcome, StratumCheck, StratumStatus,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ChernError {
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Nonunital(#[from] NonunitalError),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("caps exceeded: {0}")]
    CapsExceeded(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Direct,
    Oracle,
    Finite,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Direct => "direct",
            Method::Oracle => "oracle",
            Method::Finite => "finite",
        })
    }
}

/// A validated perfect-module datum `(A, N, α, π)` with truncation caps.
#[derive(Debug, Clone)]
pub struct ChernInput {
    pub algebra: Arc<CdgAlgebra>,
    pub shifts: ShiftTuple,
    pub alpha: MatrixHom,
    pub pi: MatrixHom,
    pub caps: TruncationCaps,
    /// `End(N)` with its explicit basis
    pub mat: MatrixAlgebra,
    /// `End(N_α)`
    pub m_alpha: Arc<CdgCategory>,
}

impl ChernInput {
    pub fn new(
        algebra: Arc<CdgAlgebra>,
        shifts: ShiftTuple,
        alpha: MatrixHom,
        pi: MatrixHom,
        caps: TruncationCaps,
    ) -> Result<Self, ChernError> {
        for (name, m) in [("alpha", &alpha), ("pi", &pi)] {
            if m.src() != &shifts || m.tgt() != &shifts {
                return Err(ModuleError::ShapeMismatch(format!(
                    "{name} is not an endomorphism of N"
                ))
                .into());
            }
        }
        check_mc(&alpha, &algebra)?;
        check_idempotent(&pi, &alpha, &algebra)?;
        let mat = MatrixAlgebra::new(algebra.clone(), shifts.clone());
        let m_alpha = mat.twisted(&alpha)?;
        Ok(ChernInput {
            algebra,
            shifts,
            alpha,
            pi,
            caps,
            mat,
            m_alpha,
        })
    }

    pub fn with_caps(&self, caps: TruncationCaps) -> Self {
        ChernInput {
            caps,
            ..self.clone()
        }
    }

    /// Same module and twist with another idempotent.
    pub fn with_pi(&self, pi: MatrixHom) -> Result<Self, ChernError> {
        check_idempotent(&pi, &self.alpha, &self.algebra)?;
        Ok(ChernInput { pi, ..self.clone() })
    }

    pub fn size(&self) -> usize {
        self.shifts.len()
    }

    pub fn alpha_vec(&self) -> SparseVec {
        self.mat.hom_to_vec(&self.alpha).expect("validated shape")
    }

    pub fn pi_vec(&self) -> SparseVec {
        self.mat.hom_to_vec(&self.pi).expect("validated shape")
    }

    /// Whether the finite formula applies: `Z` grading, no curvature and a
    /// strictly upper triangular twist.
    pub fn finite_precondition(&self) -> Result<(), ChernError> {
        if self.algebra.grading() != crate::algebra::Grading::Z {
            return Err(ChernError::PreconditionFailed(
                "finite method needs Z grading".into(),
            ));
        }
        if self.algebra.has_curvature() {
            return Err(ChernError::PreconditionFailed(
                "finite method needs zero curvature".into(),
            ));
        }
        if !self.alpha.is_strictly_upper_triangular() {
            return Err(ChernError::PreconditionFailed(
                "finite method needs a strictly upper triangular twist".into(),
            ));
        }
        Ok(())
    }
}

/// A computed Chern character with its provenance.
#[derive(Debug, Clone)]
pub struct ChernResult {
    pub chain: UChain,
    pub method: Method,
    pub report: CertificationReport,
}

impl ChernResult {
    pub fn truncation(&self) -> &[TruncationEntry] {
        self.chain.ledger()
    }

    pub fn passed(&self) -> bool {
        self.report.passed()
    }
}

/// `(-1)^i (2i)! / (2 · i!)`.
pub fn series_coefficient(i: u32) -> Rational {
    sign(i as i64) * factorial(2 * i) / (rat(2) * factorial(i))
}

/// `γ_P = 1_P + Σ_i (-1)^i (2i)!/(2·i!) · 2·1_P[1_P|…|1_P] u^i` (with `2i`
/// tail entries), over `{P, N}`.
pub fn gamma_p(ctx: &Arc<CdgCategory>, p: u32, caps: TruncationCaps) -> UChain {
    let one = ctx.identity(p);
    let mut out = UChain::new(ctx.clone(), Normalization::Unnormalized, caps);
    for i in 0..=caps.u_order {
        let mut c = BarChain::new(ctx.clone(), Normalization::Unnormalized);
        let coeff = if i == 0 {
            rat(1)
        } else {
            series_coefficient(i) * rat(2)
        };
        c.add_word(vec![one; 2 * i as usize + 1], coeff);
        out.add_at(i, &c, "gamma_P");
    }
    out
}

/// `η_π = π + Σ_i (-1)^i (2i)!/(2·i!) (2π - 1)[π|…|π] u^i`, normalized.
pub fn eta_pi(ctx: &Arc<CdgCategory>, pi: &SparseVec, caps: TruncationCaps) -> UChain {
    let mut lead = pi.scaled(&rat(2));
    lead.add_term(ctx.identity(0), rat(-1));
    let mut out = UChain::new(ctx.clone(), Normalization::Normalized, caps);
    for i in 0..=caps.u_order {
        let mut c = BarChain::new(ctx.clone(), Normalization::Normalized);
        if i == 0 {
            c.add_tensor(std::slice::from_ref(pi), &rat(1));
        } else {
            let mut factors = vec![lead.clone()];
            factors.extend(std::iter::repeat_n(pi.clone(), 2 * i as usize));
            c.add_tensor(&factors, &series_coefficient(i));
        }
        out.add_at(i, &c, "eta_pi");
    }
    out
}

/// `(id, α)_*`: inserts `α^{j_k}` after every entry with sign `(-1)^J`,
/// keeping total tail length within `max_length`. Inputs and outputs share
/// the basis of `End(N)`; the output lives over `End(N_0)`.
pub fn twist_pushforward(m0: &Arc<CdgCategory>, alpha: &SparseVec, c: &UChain) -> UChain {
    twist_with(m0, m0, alpha, c, None, |acc| acc)
}

/// `Tr ∘ (id, α)_*` in one pass. Insertions that leave no closed index
/// cycle are cut early, since their trace vanishes.
pub(crate) fn twist_and_trace(mat: &MatrixAlgebra, alpha: &SparseVec, c: &UChain) -> UChain {
    let paths = IndexPaths::new(mat);
    twist_with(
        mat.untwisted(),
        mat.base(),
        alpha,
        c,
        paths.as_ref(),
        |acc| crate::free_modules::trace_chain(mat, &acc, Normalization::Normalized),
    )
}

/// Which `(start row, current column)` index pairs a prefix of matrix
/// letters can still realize, as a bitmask over `l²` pairs.
struct IndexPaths {
    l: usize,
    /// per basis letter: the `(row, col)` pairs of its elementary components
    pairs: Vec<u64>,
}

impl IndexPaths {
    fn new(mat: &MatrixAlgebra) -> Option<Self> {
        let l = mat.size();
        if l * l > 64 {
            return None;
        }
        let pairs = (0..mat.dim() as u32)
            .map(|b| {
                mat.expansion(b).indices().fold(0u64, |m, e| {
                    let ix = mat.elementary(e);
                    m | 1 << (ix.row * l + ix.col)
                })
            })
            .collect();
        Some(IndexPaths { l, pairs })
    }

    fn start(&self, letter: u32) -> u64 {
        self.pairs[letter as usize]
    }

    fn step(&self, state: u64, letter: u32) -> u64 {
        let l = self.l;
        let edges = self.pairs[letter as usize];
        let mut out = 0u64;
        for s in 0..l {
            for c in 0..l {
                if state >> (s * l + c) & 1 == 1 {
                    for c2 in 0..l {
                        if edges >> (c * l + c2) & 1 == 1 {
                            out |= 1 << (s * l + c2);
                        }
                    }
                }
            }
        }
        out
    }

    fn closed(&self, state: u64) -> bool {
        (0..self.l).any(|s| state >> (s * self.l + s) & 1 == 1)
    }
}

/// Shared driver: twists chunks of terms in parallel and hands each chunk's
/// result to `finish` before merging.
fn twist_with(
    m0: &Arc<CdgCategory>,
    target: &Arc<CdgCategory>,
    alpha: &SparseVec,
    c: &UChain,
    paths: Option<&IndexPaths>,
    finish: impl Fn(BarChain) -> BarChain + Sync,
) -> UChain {
    use rayon::prelude::*;
    let caps = c.caps();
    let mut out = UChain::new(target.clone(), Normalization::Normalized, caps);
    out.merge_ledger(c.ledger());
    let comps: Vec<(u32, Rational)> = alpha.iter().map(|(k, x)| (k, x.clone())).collect();
    for (k, ck) in c.coeffs() {
        let terms: Vec<_> = ck.terms().collect();
        let parts: Vec<BarChain> = terms
            .par_chunks(16)
            .map(|chunk| {
                let mut acc = BarChain::new(m0.clone(), Normalization::Normalized);
                for (w, coeff) in chunk {
                    if w.len() > caps.max_length {
                        continue;
                    }
                    let budget = caps.max_length - w.len();
                    let mut walk = Walk {
                        comps: &comps,
                        letters: w.letters(),
                        paths,
                        stack: Vec::new(),
                        out: &mut acc,
                    };
                    walk.insert(0, budget, 0, (*coeff).clone());
                }
                finish(acc)
            })
            .collect();
        for p in parts {
            out.add_at(k, &p, "twist");
        }
        if !comps.is_empty() || ck.terms().any(|(w, _)| w.len() > caps.max_length) {
            out.record(TruncationEntry {
                operator: "twist".into(),
                u_power: k,
                length: caps.max_length + 1,
                terms_dropped: 0,
            });
        }
    }
    out
}

struct Walk<'a> {
    comps: &'a [(u32, Rational)],
    letters: &'a [u32],
    paths: Option<&'a IndexPaths>,
    stack: Vec<u32>,
    out: &'a mut BarChain,
}

impl Walk<'_> {
    fn advance(&self, state: u64, letter: u32) -> Option<u64> {
        let Some(p) = self.paths else { return Some(0) };
        let next = if self.stack.is_empty() {
            p.start(letter)
        } else {
            p.step(state, letter)
        };
        (next != 0).then_some(next)
    }

    /// Places original letter `pos`, then any number `j ≤ budget` of α letters.
    fn insert(&mut self, pos: usize, budget: usize, state: u64, coeff: Rational) {
        if pos == self.letters.len() {
            if self.paths.is_none_or(|p| p.closed(state)) {
                self.out.add_word(self.stack.clone(), coeff);
            }
            return;
        }
        let Some(state) = self.advance(state, self.letters[pos]) else {
            return;
        };
        self.stack.push(self.letters[pos]);
        self.tail(pos, budget, state, coeff);
        self.stack.pop();
    }

    fn tail(&mut self, pos: usize, budget: usize, state: u64, coeff: Rational) {
        self.insert(pos + 1, budget, state, coeff.clone());
        if budget == 0 {
            return;
        }
        for i in 0..self.comps.len() {
            let (a, x) = &self.comps[i];
            let Some(next) = self.advance(state, *a) else {
                continue;
            };
            let c = -(&coeff * x);
            self.stack.push(*a);
            self.tail(pos, budget - 1, next, c);
            self.stack.pop();
        }
    }
}

/// The `u^0` slice of a result.
pub fn specialize_u0(r: &ChernResult) -> BarChain {
    r.chain.coeff(0)
}

/// Traces a normalized `End(N_0)` u-series down to `A`.
pub fn trace_series(mat: &MatrixAlgebra, c: &UChain) -> UChain {
    let base = mat.base().clone();
    c.map_into(base, Normalization::Normalized, "trace", 0, |ck| {
        crate::free_modules::trace_chain(mat, ck, Normalization::Normalized)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn series_coefficients_match_expansion() {
        assert_eq!(series_coefficient(1), rat(-1));
        assert_eq!(series_coefficient(2), rat(6));
        assert_eq!(series_coefficient(3), rat(-60));
        assert_eq!(series_coefficient(1) * rat(2), rat(-2));
        assert_eq!(series_coefficient(2) * rat(2), rat(12));
    }

    #[test]
    fn twist_by_zero_is_identity() {
        let f = fixtures::exterior_summand();
        let eta = eta_pi(&f.m_alpha, &f.pi_vec(), f.caps);
        let pushed = twist_pushforward(f.mat.untwisted(), &SparseVec::zero(), &eta);
        for (k, c) in eta.coeffs() {
            assert_eq!(
                pushed.coeff(k),
                c.with_context(f.mat.untwisted().clone()).unwrap()
            );
        }
        assert!(pushed.ledger().is_empty());
    }

    #[test]
    fn twist_of_length_zero() {
        let f = fixtures::mf();
        let caps = TruncationCaps::new(0, 3);
        let pi = BarChain::from_words(
            f.m_alpha.clone(),
            Normalization::Normalized,
            [(vec![0], rat(1))],
        )
        .unwrap();
        let pushed = twist_pushforward(
            f.mat.untwisted(),
            &f.alpha_vec(),
            &UChain::constant(pi, caps),
        );
        // Σ_j (-1)^j I[α^j], α having two components
        assert_eq!(pushed.coeff(0).len(), 1 + 2 + 4 + 8);
        assert_eq!(pushed.ledger().len(), 1);
    }
}
