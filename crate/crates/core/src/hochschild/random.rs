use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::chain::{word_degree, BarChain, Normalization};
use crate::algebra::CdgCategory;
use crate::scalar::rat;

/// A reproducible pseudo-random chain of tail length `length` with up to
/// `terms` terms, all of total degree `degree` when one is given.
///
/// Words are drawn as random cyclically composable walks; draws of the wrong
/// degree or that vanish in `mode` are rejected, so a degree with no words
/// yields the zero chain.
pub fn random_chain(
    ctx: &Arc<CdgCategory>,
    mode: Normalization,
    length: usize,
    degree: Option<i64>,
    seed: u64,
    terms: usize,
) -> BarChain {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = BarChain::new(ctx.clone(), mode);
    let dim = ctx.dim() as u32;
    let degree = degree.map(|d| ctx.grading().reduce(d));
    // pick the degree from the first successful draw when none is given
    let mut target = degree;
    let attempts = 200 * terms.max(1);
    let mut found = 0;
    for _ in 0..attempts {
        if found >= terms {
            break;
        }
        let Some(w) = draw_word(ctx, &mut rng, dim, length) else {
            continue;
        };
        if !out.admits(&w) {
            continue;
        }
        let d = word_degree(ctx, &w);
        match target {
            Some(t) if t != d => continue,
            None => target = Some(d),
            _ => {}
        }
        let c = rng.gen_range(-3i64..=3);
        if c == 0 {
            continue;
        }
        out.add_word(w, rat(c));
        found += 1;
    }
    out
}

fn draw_word(ctx: &CdgCategory, rng: &mut ChaCha8Rng, dim: u32, length: usize) -> Option<Vec<u32>> {
    let mut w = Vec::with_capacity(length + 1);
    w.push(rng.gen_range(0..dim));
    for _ in 0..length {
        // next letter x must satisfy cod(x) = dom(previous)
        let need = ctx.dom(*w.last().unwrap());
        let cands: Vec<u32> = (0..dim).filter(|&x| ctx.cod(x) == need).collect();
        w.push(cands[rng.gen_range(0..cands.len())]);
    }
    if ctx.dom(*w.last().unwrap()) != ctx.cod(w[0]) {
        return None;
    }
    Some(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn deterministic_and_homogeneous() {
        let a = Arc::new(fixtures::exterior());
        let c1 = random_chain(&a, Normalization::Normalized, 3, Some(1), 7, 5);
        let c2 = random_chain(&a, Normalization::Normalized, 3, Some(1), 7, 5);
        assert_eq!(c1, c2);
        assert!(!c1.is_zero());
        assert!(c1.terms().all(|(w, _)| w.degree() == 1 && w.len() == 3));
    }

    #[test]
    fn impossible_degree_gives_zero() {
        let a = Arc::new(fixtures::exterior());
        // normalized length-2 words over Λ[ξ] are ξ^k[ξ|ξ], degree ≤ 1
        assert!(random_chain(&a, Normalization::Normalized, 2, Some(7), 1, 5).is_zero());
    }
}
