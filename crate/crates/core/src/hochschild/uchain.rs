use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::chain::{BarChain, Normalization};
use super::ops::{connes_b, d_total, DifferentialKind};
use crate::algebra::CdgCategory;
use crate::scalar::Rational;

/// Finite window on a power series of chains: u-powers up to `u_order`,
/// tail lengths up to `max_length`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncationCaps {
    pub u_order: u32,
    pub max_length: usize,
}

impl TruncationCaps {
    pub fn new(u_order: u32, max_length: usize) -> Self {
        TruncationCaps {
            u_order,
            max_length,
        }
    }

    pub fn min(self, other: TruncationCaps) -> TruncationCaps {
        TruncationCaps {
            u_order: self.u_order.min(other.u_order),
            max_length: self.max_length.min(other.max_length),
        }
    }
}

/// One record of terms discarded because they fell outside the caps.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TruncationEntry {
    pub operator: String,
    pub u_power: u32,
    pub length: usize,
    pub terms_dropped: usize,
}

/// `Σ_k c_k u^k` with chain coefficients, truncated to `caps`.
#[derive(Clone)]
pub struct UChain {
    ctx: Arc<CdgCategory>,
    mode: Normalization,
    caps: TruncationCaps,
    coeffs: BTreeMap<u32, BarChain>,
    ledger: Vec<TruncationEntry>,
}

impl UChain {
    pub fn new(ctx: Arc<CdgCategory>, mode: Normalization, caps: TruncationCaps) -> Self {
        UChain {
            ctx,
            mode,
            caps,
            coeffs: BTreeMap::new(),
            ledger: Vec::new(),
        }
    }

    /// A chain concentrated in `u^0`.
    pub fn constant(c: BarChain, caps: TruncationCaps) -> Self {
        let mut u = UChain::new(c.ctx().clone(), c.mode(), caps);
        u.add_at(0, &c, "input");
        u
    }

    pub fn ctx(&self) -> &Arc<CdgCategory> {
        &self.ctx
    }

    pub fn mode(&self) -> Normalization {
        self.mode
    }

    pub fn caps(&self) -> TruncationCaps {
        self.caps
    }

    pub fn ledger(&self) -> &[TruncationEntry] {
        &self.ledger
    }

    pub fn zero_like(&self) -> UChain {
        UChain::new(self.ctx.clone(), self.mode, self.caps)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(|c| c.is_zero())
    }

    /// Coefficient of `u^k` (zero when absent).
    pub fn coeff(&self, k: u32) -> BarChain {
        self.coeffs
            .get(&k)
            .cloned()
            .unwrap_or_else(|| BarChain::new(self.ctx.clone(), self.mode))
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (u32, &BarChain)> + '_ {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn u_powers(&self) -> Vec<u32> {
        self.coeffs
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, _)| *k)
            .collect()
    }

    pub fn record(&mut self, entry: TruncationEntry) {
        if !self.ledger.contains(&entry) {
            self.ledger.push(entry);
            self.ledger.sort();
        }
    }

    pub fn merge_ledger(&mut self, entries: &[TruncationEntry]) {
        for e in entries {
            self.record(e.clone());
        }
    }

    /// Adds `c u^k`, dropping (and recording) whatever exceeds the caps.
    pub fn add_at(&mut self, k: u32, c: &BarChain, operator: &str) {
        self.add_scaled_at(k, c, &crate::scalar::rat(1), operator);
    }

    pub fn add_scaled_at(&mut self, k: u32, c: &BarChain, scale: &Rational, operator: &str) {
        if c.is_zero() {
            return;
        }
        if k > self.caps.u_order {
            let mut by_len: BTreeMap<usize, usize> = BTreeMap::new();
            for (w, _) in c.terms() {
                *by_len.entry(w.len()).or_default() += 1;
            }
            for (length, terms_dropped) in by_len {
                self.record(TruncationEntry {
                    operator: operator.into(),
                    u_power: k,
                    length,
                    terms_dropped,
                });
            }
            return;
        }
        let max = self.caps.max_length;
        let mut over: BTreeMap<usize, usize> = BTreeMap::new();
        for (w, _) in c.terms() {
            if w.len() > max {
                *over.entry(w.len()).or_default() += 1;
            }
        }
        for (length, terms_dropped) in over.iter() {
            self.record(TruncationEntry {
                operator: operator.into(),
                u_power: k,
                length: *length,
                terms_dropped: *terms_dropped,
            });
        }
        let kept = if over.is_empty() {
            c.clone()
        } else {
            c.filter(|w| w.len() <= max)
        };
        let slot = self
            .coeffs
            .entry(k)
            .or_insert_with(|| BarChain::new(self.ctx.clone(), self.mode));
        slot.add_scaled(&kept, scale);
    }

    /// `self + scale·other`; the caps become the minimum of both.
    pub fn add_scaled(&self, other: &UChain, scale: &Rational) -> UChain {
        let caps = self.caps.min(other.caps);
        let mut out = UChain::new(self.ctx.clone(), self.mode, caps);
        out.merge_ledger(&self.ledger);
        out.merge_ledger(&other.ledger);
        for (k, c) in &self.coeffs {
            out.add_at(*k, c, "add");
        }
        for (k, c) in &other.coeffs {
            out.add_scaled_at(*k, c, scale, "add");
        }
        out
    }

    pub fn add(&self, other: &UChain) -> UChain {
        self.add_scaled(other, &crate::scalar::rat(1))
    }

    pub fn sub(&self, other: &UChain) -> UChain {
        self.add_scaled(other, &crate::scalar::rat(-1))
    }

    pub fn scaled(&self, s: &Rational) -> UChain {
        self.zero_like().add_scaled(self, s)
    }

    /// Applies a chain map coefficientwise, shifting u-powers by `shift`.
    pub fn map(&self, operator: &str, shift: u32, f: impl Fn(&BarChain) -> BarChain) -> UChain {
        let mut out = self.zero_like();
        out.merge_ledger(&self.ledger);
        for (k, c) in &self.coeffs {
            out.add_at(k + shift, &f(c), operator);
        }
        out
    }

    /// Same as [`UChain::map`] but landing in another context or mode.
    pub fn map_into(
        &self,
        ctx: Arc<CdgCategory>,
        mode: Normalization,
        operator: &str,
        shift: u32,
        f: impl Fn(&BarChain) -> BarChain,
    ) -> UChain {
        let mut out = UChain::new(ctx, mode, self.caps);
        out.merge_ledger(&self.ledger);
        for (k, c) in &self.coeffs {
            out.add_at(k + shift, &f(c), operator);
        }
        out
    }

    pub fn project(&self, mode: Normalization) -> UChain {
        self.map_into(self.ctx.clone(), mode, "project", 0, |c| c.project(mode))
    }

    pub fn with_caps(&self, caps: TruncationCaps) -> UChain {
        let mut out = UChain::new(self.ctx.clone(), self.mode, caps);
        out.merge_ledger(&self.ledger);
        for (k, c) in &self.coeffs {
            out.add_at(*k, c, "recap");
        }
        out
    }

    pub fn clear_ledger(&mut self) {
        self.ledger.clear();
    }

    /// `(D + uB)` with the given kind of Hochschild differential.
    pub fn total_differential(&self, kind: DifferentialKind) -> UChain {
        let mut out = self.zero_like();
        out.merge_ledger(&self.ledger);
        for (k, c) in &self.coeffs {
            out.add_at(*k, &d_total(c, kind), "D");
            out.add_at(k + 1, &connes_b(c), "uB");
        }
        out
    }

    /// Number of terms over all u-powers.
    pub fn num_terms(&self) -> usize {
        self.coeffs.values().map(|c| c.len()).sum()
    }
}

/// Term-level equality: same context and mode, equal coefficient of every
/// u-power. Caps and ledgers are bookkeeping and do not take part.
impl PartialEq for UChain {
    fn eq(&self, other: &Self) -> bool {
        if self.mode != other.mode {
            return false;
        }
        let powers: std::collections::BTreeSet<u32> = self
            .coeffs
            .keys()
            .chain(other.coeffs.keys())
            .copied()
            .collect();
        powers.into_iter().all(|k| self.coeff(k) == other.coeff(k))
    }
}

impl std::fmt::Debug for UChain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (k, c) in &self.coeffs {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "u^{k}*({c})")?;
        }
        if first {
            f.write_str("0")?;
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
    fn caps_drop_and_record() {
        let a = Arc::new(fixtures::truncated_poly());
        let x = a.index_of("x").unwrap();
        let caps = TruncationCaps::new(1, 2);
        let mut u = UChain::new(a.clone(), Normalization::Normalized, caps);
        let c = BarChain::from_words(
            a.clone(),
            Normalization::Normalized,
            [(vec![x, x, x, x], rat(1)), (vec![x], rat(1))],
        )
        .unwrap();
        u.add_at(0, &c, "test");
        u.add_at(2, &c, "test");
        assert_eq!(u.num_terms(), 1);
        assert_eq!(u.ledger().len(), 3);
        assert!(u.ledger().iter().any(|e| e.u_power == 0 && e.length == 3));
    }

    #[test]
    fn arithmetic_uses_min_caps() {
        let a = Arc::new(fixtures::truncated_poly());
        let u1 = UChain::new(
            a.clone(),
            Normalization::Normalized,
            TruncationCaps::new(3, 8),
        );
        let u2 = UChain::new(a, Normalization::Normalized, TruncationCaps::new(2, 9));
        assert_eq!(u1.add(&u2).caps(), TruncationCaps::new(2, 8));
    }
}
