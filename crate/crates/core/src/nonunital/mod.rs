//! Non-unital cyclic machinery: the unit-adjoined category `A⁺`, the complex
//! `C^e` (the reduced complex of `A⁺`), the comparison maps `ι(u)`, `p(u)`,
//! their homotopies, and pushforwards along semifunctors.
//!
//! A chain of `C^e` is a reduced chain over `A⁺`. Its terms split as
//! `(a, a')`: words not involving `e`, and words `e[a_1|…|a_n]`.

mod semifunctor;

use std::sync::Arc;

use crate::algebra::{CategoryParts, CdgCategory};
use crate::hochschild::ops::{norm_word, s_word, t_word, Emit};
use crate::hochschild::{BarChain, Normalization, UChain};
use crate::scalar::{rat, SparseVec};

pub use semifunctor::{f_star_u, pushforward_e, semifunctor_from_summand, Semifunctor, Summand};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NonunitalError {
    #[error("term {0} is not of the form e[a_1|...|a_n]")]
    NotInCPlus(String),
    #[error("chain lives over the wrong category")]
    ContextMismatch,
    #[error("semifunctor check failed: {0}")]
    NotASemifunctor(String),
    #[error("not a strict direct summand: {0}")]
    NotASummand(String),
}

/// The category `A⁺`: same objects, a fresh identity `e_x` adjoined to every
/// endomorphism space. Letter indices of `A` are kept; `e_x` is
/// `dim(A) + x`.
#[derive(Debug, Clone)]
pub struct PlusCategory {
    base: Arc<CdgCategory>,
    plus: Arc<CdgCategory>,
}

pub fn adjoin_units(base: &Arc<CdgCategory>) -> PlusCategory {
    let n = base.dim();
    let nobj = base.num_objects();
    let m = n + nobj;
    let mut labels = base.labels().to_vec();
    let mut degrees: Vec<i64> = (0..n as u32).map(|i| base.declared_degree(i)).collect();
    let mut dom: Vec<u32> = (0..n as u32).map(|i| base.dom(i)).collect();
    let mut cod: Vec<u32> = (0..n as u32).map(|i| base.cod(i)).collect();
    for x in 0..nobj as u32 {
        labels.push(if nobj == 1 {
            "e".to_string()
        } else {
            format!("e_{}", base.object_name(x))
        });
        degrees.push(0);
        dom.push(x);
        cod.push(x);
    }
    let mut mult = vec![SparseVec::zero(); m * m];
    for a in 0..m {
        for b in 0..m {
            let slot = &mut mult[a * m + b];
            if a < n && b < n {
                *slot = base.mult_basis(a as u32, b as u32).clone();
            } else if a >= n && b >= n {
                if a == b {
                    *slot = SparseVec::basis(a as u32);
                }
            } else if a >= n {
                if (a - n) as u32 == cod[b] {
                    *slot = SparseVec::basis(b as u32);
                }
            } else if (b - n) as u32 == dom[a] {
                *slot = SparseVec::basis(a as u32);
            }
        }
    }
    let mut diff: Vec<SparseVec> = (0..n as u32).map(|i| base.diff_basis(i).clone()).collect();
    diff.extend(std::iter::repeat_n(SparseVec::zero(), nobj));
    let plus = CdgCategory::from_parts(CategoryParts {
        grading: base.grading(),
        objects: (0..nobj as u32)
            .map(|x| base.object_name(x).to_string())
            .collect(),
        labels,
        degrees,
        dom,
        cod,
        identities: (0..nobj).map(|x| (n + x) as u32).collect(),
        mult,
        diff,
        curvature: (0..nobj as u32)
            .map(|x| base.curvature(x).clone())
            .collect(),
    });
    PlusCategory {
        base: base.clone(),
        plus: Arc::new(plus),
    }
}

impl PlusCategory {
    pub fn base(&self) -> &Arc<CdgCategory> {
        &self.base
    }

    pub fn plus(&self) -> &Arc<CdgCategory> {
        &self.plus
    }

    pub fn e(&self, object: u32) -> u32 {
        (self.base.dim() + object as usize) as u32
    }

    pub fn is_e(&self, letter: u32) -> bool {
        letter as usize >= self.base.dim()
    }

    /// `C(A) → C^e(A)` on the first summand.
    pub fn embed(&self, c: &BarChain) -> BarChain {
        c.transport(self.plus.clone(), Normalization::Reduced)
    }

    /// Splits a `C^e` chain into `(a, a')`.
    pub fn split(&self, ec: &BarChain) -> (BarChain, BarChain) {
        let a = ec
            .filter(|w| !self.is_e(w.letters()[0]))
            .transport(self.base.clone(), Normalization::Unnormalized);
        let a_plus = ec.filter(|w| self.is_e(w.letters()[0]));
        (a, a_plus)
    }

    /// `μ(e[a_1|…|a_n]) = 1[a_1|…|a_n]`.
    pub fn mu(&self, a_plus: &BarChain) -> Result<BarChain, NonunitalError> {
        let mut out = BarChain::new(self.base.clone(), Normalization::Unnormalized);
        for (w, c) in a_plus.terms() {
            let l = w.letters();
            if !self.is_e(l[0]) || l.len() < 2 || l[1..].iter().any(|&x| self.is_e(x)) {
                return Err(NonunitalError::NotInCPlus(a_plus.format_word(l)));
            }
            let mut v = l.to_vec();
            v[0] = self.base.identity(self.plus.cod(l[0]));
            out.add_word(v, c.clone());
        }
        Ok(out)
    }

    /// Prepends `e_{cod(a_0)}` to base words, landing in `C^e`.
    fn s_e(&self, c: &BarChain) -> BarChain {
        let mut out = BarChain::new(self.plus.clone(), Normalization::Reduced);
        for (w, k) in c.terms() {
            let l = w.letters();
            let mut v = Vec::with_capacity(l.len() + 1);
            v.push(self.e(self.base.cod(l[0])));
            v.extend_from_slice(l);
            out.add_word(v, k.clone());
        }
        out
    }
}

/// How to read the composite `s^e s N` in `ι(u)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
pub enum IotaReading {
    /// `s^e ∘ s ∘ N`
    #[default]
    Literal,
    /// `s^e ∘ N`
    Short,
}

fn apply_words(c: &BarChain, f: impl Fn(&CdgCategory, &[u32], &mut Emit)) -> BarChain {
    let mut out = BarChain::new(c.ctx().clone(), Normalization::Unnormalized);
    let mut buf = Emit::new();
    for (w, k) in c.terms() {
        buf.clear();
        f(c.ctx(), w.letters(), &mut buf);
        for (v, s) in buf.drain(..) {
            out.add_word(v, s * k);
        }
    }
    out
}

/// `ι(u)(a) = a + u·s^e s N(a)`.
pub fn iota_u(pc: &PlusCategory, c: &UChain, reading: IotaReading) -> UChain {
    let mut out = UChain::new(pc.plus.clone(), Normalization::Reduced, c.caps());
    out.merge_ledger(c.ledger());
    for (k, ck) in c.coeffs() {
        out.add_at(k, &pc.embed(ck), "iota");
        let n = apply_words(ck, norm_word);
        let inner = match reading {
            IotaReading::Literal => apply_words(&n, |ctx, w, o| o.push((s_word(ctx, w), rat(1)))),
            IotaReading::Short => n,
        };
        out.add_at(k + 1, &pc.s_e(&inner), "iota");
    }
    out
}

/// `1 - τ` on unnormalized base chains, where `τ` is the rotation written
/// `t^{-1}` in the usual formulas for `p(u)` and `H(u)`. Those formulas
/// rotate `a_0` to the back; [`crate::hochschild::cyclic_t`] rotates `a_n` to
/// the front, so `τ` is our `t`. With `B = (1 - t)sN` this is the only
/// choice that makes `p(u)` a chain map.
fn one_minus_tau(c: &BarChain) -> BarChain {
    apply_words(c, |ctx, w, o| {
        o.push((w.to_vec(), rat(1)));
        let (v, s) = t_word(ctx, w);
        o.push((v, -s));
    })
}

/// `p(u)(a, a') = a + (1 - τ) μ(a')`.
pub fn p_u(pc: &PlusCategory, ec: &UChain) -> Result<UChain, NonunitalError> {
    let mut out = UChain::new(pc.base.clone(), Normalization::Unnormalized, ec.caps());
    out.merge_ledger(ec.ledger());
    for (k, ck) in ec.coeffs() {
        let (a, a_plus) = pc.split(ck);
        out.add_at(k, &a, "p");
        out.add_at(k, &one_minus_tau(&pc.mu(&a_plus)?), "p");
    }
    Ok(out)
}

/// `H^e(u)(a, a') = (0, s^e μ(a'))`.
pub fn homotopy_he(pc: &PlusCategory, ec: &UChain) -> Result<UChain, NonunitalError> {
    let mut out = ec.zero_like();
    out.merge_ledger(ec.ledger());
    for (k, ck) in ec.coeffs() {
        let (_, a_plus) = pc.split(ck);
        out.add_at(k, &pc.s_e(&pc.mu(&a_plus)?), "H^e");
    }
    Ok(out)
}

/// `H(u) = u(1 - τ) s s s N`, with the three degeneracies read literally.
pub fn homotopy_h(c: &UChain) -> UChain {
    c.map("H", 1, |ck| {
        let mut x = apply_words(ck, norm_word);
        for _ in 0..3 {
            x = apply_words(&x, |ctx, w, o| o.push((s_word(ctx, w), rat(1))));
        }
        one_minus_tau(&x)
    })
}

/// The Connes operator of `C^e` in its one-term form `e[a_0|…|a_n]`. Kept
/// for comparison with the cyclic-sum form `s^e N` that the total
/// differential uses.
pub fn connes_b_e_one_term(pc: &PlusCategory, ec: &BarChain) -> BarChain {
    let mut out = BarChain::new(pc.plus.clone(), Normalization::Reduced);
    for (w, k) in ec.terms() {
        let l = w.letters();
        let mut v = Vec::with_capacity(l.len() + 1);
        v.push(pc.e(pc.plus.cod(l[0])));
        v.extend_from_slice(l);
        out.add_word(v, k.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::hochschild::TruncationCaps;

    #[test]
    fn plus_category_is_cdg_and_e_is_new() {
        for f in fixtures::all() {
            let pc = adjoin_units(&f.algebra);
            pc.plus().validate().unwrap();
            assert_ne!(pc.plus().unit(), f.algebra.unit());
            assert_eq!(pc.plus().degree(pc.e(0)), 0);
        }
    }

    #[test]
    fn iota_on_length_zero() {
        let a = Arc::new(fixtures::truncated_poly());
        let pc = adjoin_units(&a);
        let x = a.index_of("x").unwrap();
        let c = BarChain::from_words(a.clone(), Normalization::Unnormalized, [(vec![x], rat(1))])
            .unwrap();
        let caps = TruncationCaps::new(3, 8);
        let i = iota_u(&pc, &UChain::constant(c, caps), IotaReading::Literal);
        let expected1 = BarChain::from_words(
            pc.plus().clone(),
            Normalization::Reduced,
            [(vec![pc.e(0), a.unit(), x], rat(1))],
        )
        .unwrap();
        assert_eq!(i.coeff(1), expected1);
    }

    #[test]
    fn mu_and_p_on_simple_terms() {
        let a = Arc::new(fixtures::truncated_poly());
        let pc = adjoin_units(&a);
        let x = a.index_of("x").unwrap();
        let ex = BarChain::from_words(
            pc.plus().clone(),
            Normalization::Reduced,
            [(vec![pc.e(0), x], rat(1))],
        )
        .unwrap();
        let m = pc.mu(&ex).unwrap();
        assert_eq!(m.coeff(&[a.unit(), x]), rat(1));
        let bad = BarChain::from_words(
            pc.plus().clone(),
            Normalization::Reduced,
            [(vec![x, x], rat(1))],
        )
        .unwrap();
        assert!(pc.mu(&bad).is_err());
        // t(1[x]) = -x[1] in degree 0, so p(0, e[x]) = 1[x] + x[1]
        let p = p_u(&pc, &UChain::constant(ex, TruncationCaps::new(2, 4))).unwrap();
        assert_eq!(p.coeff(0).coeff(&[a.unit(), x]), rat(1));
        assert_eq!(p.coeff(0).coeff(&[x, a.unit()]), rat(1));
    }
}
