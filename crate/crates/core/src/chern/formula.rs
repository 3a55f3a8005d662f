//! The closed formula: for `n ≥ 1`,
//! `c_{n,J} Tr((2π - 1)[α^{j_0}|π|α^{j_1}|π|…|π|α^{j_{2n}}]) u^n`, and at
//! `u^0` the sum `Σ_j (-1)^j Tr(π[α^j])`.

use rayon::prelude::*;

use super::verify::certify;
use super::{series_coefficient, ChernError, ChernInput, ChernResult, Method};
use crate::free_modules::{generalized_trace, MatrixHom};
use crate::hochschild::{BarChain, Normalization, TruncationEntry, UChain};
use crate::scalar::{rat, sign, Rational};

/// `c_{n,J} = (-1)^{n+J} (2n)! / (2 · n!)`.
pub fn coefficient_c(n: u32, j_total: usize) -> Rational {
    series_coefficient(n) * sign(j_total as i64)
}

/// All `parts`-tuples of non-negative integers with sum at most `budget`
/// and every entry at most `bound`, in lexicographic order.
fn tuples(parts: usize, budget: usize, bound: usize) -> Vec<Vec<usize>> {
    fn go(
        parts: usize,
        budget: usize,
        bound: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if cur.len() == parts {
            out.push(cur.clone());
            return;
        }
        for j in 0..=budget.min(bound) {
            cur.push(j);
            go(parts, budget - j, bound, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(
        parts,
        budget,
        bound,
        &mut Vec::with_capacity(parts),
        &mut out,
    );
    out
}

/// Number of `parts`-tuples with entries in `0..=bound` summing to exactly `total`.
fn count_exact(parts: usize, total: usize, bound: usize) -> usize {
    let mut ways = vec![0usize; total + 1];
    ways[0] = 1;
    for _ in 0..parts {
        let mut next = vec![0usize; total + 1];
        for (s, &w) in ways.iter().enumerate() {
            for j in 0..=bound.min(total - s) {
                next[s + j] += w;
            }
        }
        ways = next;
    }
    ways[total]
}

fn evaluate(input: &ChernInput, bound: Option<usize>, operator: &str) -> UChain {
    let algebra = &input.algebra;
    let caps = input.caps;
    let unbounded = usize::MAX;
    let bound = bound.unwrap_or(unbounded);
    let alpha_zero = input.alpha.is_zero();
    let bound = if alpha_zero { 0 } else { bound };
    let identity = MatrixHom::identity(algebra, &input.shifts);
    let lead = input.pi.scaled(&rat(2)).sub(&identity).expect("same shape");

    let mut out = UChain::new(algebra.clone(), Normalization::Normalized, caps);
    for n in 0..=caps.u_order {
        let parts = 2 * n as usize + 1;
        let Some(budget) = caps.max_length.checked_sub(2 * n as usize) else {
            out.record(TruncationEntry {
                operator: operator.into(),
                u_power: n,
                length: 2 * n as usize,
                terms_dropped: 1,
            });
            continue;
        };
        let dropped = if bound == unbounded {
            count_exact(parts, budget + 1, budget + 1)
        } else {
            (budget + 1..=parts * bound)
                .map(|t| count_exact(parts, t, bound))
                .sum()
        };
        if dropped > 0 {
            out.record(TruncationEntry {
                operator: operator.into(),
                u_power: n,
                length: caps.max_length + 1,
                terms_dropped: dropped,
            });
        }
        let partials: Vec<BarChain> = tuples(parts, budget, bound)
            .par_iter()
            .map(|js| {
                let mut factors = Vec::with_capacity(parts + js.iter().sum::<usize>());
                factors.push(if n == 0 {
                    input.pi.clone()
                } else {
                    lead.clone()
                });
                for (k, &j) in js.iter().enumerate() {
                    if k > 0 {
                        factors.push(input.pi.clone());
                    }
                    factors.extend(std::iter::repeat_n(input.alpha.clone(), j));
                }
                let j_total: usize = js.iter().sum();
                let c = if n == 0 {
                    sign(j_total as i64)
                } else {
                    coefficient_c(n, j_total)
                };
                let mut local = BarChain::new(algebra.clone(), Normalization::Normalized);
                let tensors = generalized_trace(algebra, &factors, true).expect("square factors");
                for (w, x) in tensors {
                    local.add_word(w, x * &c);
                }
                local
            })
            .collect();
        for p in partials {
            out.add_at(n, &p, operator);
        }
    }
    out
}

/// The truncated closed-formula cocycle without certification.
pub fn direct_chain(input: &ChernInput) -> UChain {
    evaluate(input, None, "direct")
}

/// The finite formula with every `j_k ≤ l - 1`.
pub fn finite_chain(input: &ChernInput) -> Result<UChain, ChernError> {
    input.finite_precondition()?;
    Ok(evaluate(input, Some(input.size() - 1), "finite"))
}

pub fn chern_direct(input: &ChernInput) -> Result<ChernResult, ChernError> {
    let chain = direct_chain(input);
    let report = certify(&chain, Vec::new());
    Ok(ChernResult {
        chain,
        method: Method::Direct,
        report,
    })
}

pub fn chern_finite(input: &ChernInput) -> Result<ChernResult, ChernError> {
    let chain = finite_chain(input)?;
    let report = certify(&chain, Vec::new());
    Ok(ChernResult {
        chain,
        method: Method::Finite,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::hochschild::TruncationCaps;

    #[test]
    fn coefficient_lock() {
        assert_eq!(coefficient_c(0, 0), crate::scalar::ratio(1, 2));
        assert_eq!(coefficient_c(1, 0), rat(-1));
        assert_eq!(coefficient_c(2, 0), rat(6));
        assert_eq!(coefficient_c(2, 1), rat(-6));
        assert_eq!(coefficient_c(3, 2), rat(-60));
        assert_eq!(coefficient_c(4, 0), rat(840));
    }

    #[test]
    fn tuple_enumeration() {
        assert_eq!(tuples(3, 2, usize::MAX).len(), 10);
        assert_eq!(tuples(3, 2, 1).len(), 7);
        assert_eq!(count_exact(3, 3, 3), 10);
        assert_eq!(count_exact(3, 2, 1), 3);
    }

    #[test]
    fn free_rank_one_is_unit() {
        let f = fixtures::free_rank_one();
        let c = direct_chain(&f);
        assert_eq!(c.u_powers(), vec![0]);
        let unit = f.algebra.unit();
        assert_eq!(
            c.coeff(0),
            BarChain::from_words(
                f.algebra.clone(),
                Normalization::Normalized,
                [(vec![unit], rat(1))]
            )
            .unwrap()
        );
        assert!(c.ledger().is_empty());
    }

    #[test]
    fn curved_scalar_vanishes() {
        assert!(direct_chain(&fixtures::curved_scalar()).is_zero());
    }

    #[test]
    fn finite_needs_its_preconditions() {
        assert!(matches!(
            finite_chain(&fixtures::mf()),
            Err(ChernError::PreconditionFailed(_))
        ));
        let f = fixtures::triangular().with_caps(TruncationCaps::new(2, 9));
        let fin = finite_chain(&f).unwrap();
        assert!(fin.ledger().is_empty());
        let dir = direct_chain(&f);
        for k in 0..=2 {
            assert_eq!(fin.coeff(k), dir.coeff(k), "u^{k}");
        }
    }
}
