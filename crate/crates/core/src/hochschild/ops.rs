//! The Hochschild and cyclic operators on [`BarChain`]s.
//!
//! Every operator works word by word on raw (unprojected) words and projects
//! only when accumulating into the output, so composites such as `sN` see the
//! degenerate intermediate words they need.

use rayon::prelude::*;

use super::chain::{BarChain, Normalization};
use crate::algebra::CdgCategory;
use crate::scalar::{rat, sign, Rational};

/// Raw output words of an operator applied to one word.
pub(crate) type Emit = Vec<(Vec<u32>, Rational)>;

/// Terms per task before the expansion goes parallel.
const PAR_THRESHOLD: usize = 64;

/// Applies a per-word expansion to every term and accumulates the result in
/// `target_mode`. Addition is exact and commutative, so the parallel merge
/// order does not affect the result.
pub(crate) fn expand<F>(c: &BarChain, target_mode: Normalization, f: F) -> BarChain
where
    F: Fn(&CdgCategory, &[u32], &mut Emit) + Sync,
{
    let ctx = c.ctx().clone();
    let run = |terms: &[(&super::Word, &Rational)]| {
        let mut out = BarChain::new(ctx.clone(), target_mode);
        let mut buf = Emit::new();
        for (w, coeff) in terms {
            buf.clear();
            f(&ctx, w.letters(), &mut buf);
            for (letters, k) in buf.drain(..) {
                out.add_word(letters, k * *coeff);
            }
        }
        out
    };
    let terms: Vec<_> = c.terms().collect();
    if terms.len() < PAR_THRESHOLD {
        return run(&terms);
    }
    terms.par_chunks(PAR_THRESHOLD).map(run).reduce(
        || BarChain::new(ctx.clone(), target_mode),
        |mut a, b| {
            a.add_assign(&b);
            a
        },
    )
}

fn sd(ctx: &CdgCategory, x: u32) -> i64 {
    ctx.degree(x) - 1
}

/// Prefix sums `σ_i`.
fn sigmas(ctx: &CdgCategory, w: &[u32]) -> Vec<i64> {
    let mut acc = 0;
    w.iter()
        .map(|&x| {
            acc += sd(ctx, x);
            acc
        })
        .collect()
}

pub(crate) fn b_mult_word(ctx: &CdgCategory, w: &[u32], out: &mut Emit) {
    let n = w.len() - 1;
    if n == 0 {
        return;
    }
    let sig = sigmas(ctx, w);
    for i in 0..n {
        let p = ctx.mult_basis(w[i], w[i + 1]);
        let s = sign(sig[i] + 1);
        for (k, c) in p.iter() {
            let mut v = Vec::with_capacity(n);
            v.extend_from_slice(&w[..i]);
            v.push(k);
            v.extend_from_slice(&w[i + 2..]);
            out.push((v, c * &s));
        }
    }
    let p = ctx.mult_basis(w[n], w[0]);
    let s = sign(1 + sd(ctx, w[n]) * (sig[n - 1] + 1));
    for (k, c) in p.iter() {
        let mut v = Vec::with_capacity(n);
        v.push(k);
        v.extend_from_slice(&w[1..n]);
        out.push((v, c * &s));
    }
}

pub(crate) fn b_diff_word(ctx: &CdgCategory, w: &[u32], out: &mut Emit) {
    let mut prefix = 0;
    for i in 0..w.len() {
        let s = sign(prefix);
        for (k, c) in ctx.diff_basis(w[i]).iter() {
            let mut v = w.to_vec();
            v[i] = k;
            out.push((v, c * &s));
        }
        prefix += sd(ctx, w[i]);
    }
}

pub(crate) fn b_curv_word(ctx: &CdgCategory, w: &[u32], out: &mut Emit) {
    let sig = sigmas(ctx, w);
    for i in 0..w.len() {
        let h = ctx.curvature(ctx.dom(w[i]));
        let s = sign(sig[i] + 1);
        for (k, c) in h.iter() {
            let mut v = Vec::with_capacity(w.len() + 1);
            v.extend_from_slice(&w[..=i]);
            v.push(k);
            v.extend_from_slice(&w[i + 1..]);
            out.push((v, c * &s));
        }
    }
}

/// Rotation `a_n` to the front, with its sign.
pub(crate) fn t_word(ctx: &CdgCategory, w: &[u32]) -> (Vec<u32>, Rational) {
    let n = w.len() - 1;
    if n == 0 {
        return (w.to_vec(), rat(1));
    }
    let rest: i64 = w[..n].iter().map(|&x| sd(ctx, x)).sum();
    let mut v = Vec::with_capacity(w.len());
    v.push(w[n]);
    v.extend_from_slice(&w[..n]);
    (v, sign(sd(ctx, w[n]) * rest))
}

/// Inverse rotation: `a_0` to the back.
pub(crate) fn t_inv_word(ctx: &CdgCategory, w: &[u32]) -> (Vec<u32>, Rational) {
    let n = w.len() - 1;
    if n == 0 {
        return (w.to_vec(), rat(1));
    }
    let rest: i64 = w[1..].iter().map(|&x| sd(ctx, x)).sum();
    let mut v = Vec::with_capacity(w.len());
    v.extend_from_slice(&w[1..]);
    v.push(w[0]);
    (v, sign(sd(ctx, w[0]) * rest))
}

/// `N = Σ_{k=0}^{n} t^k`.
pub(crate) fn norm_word(ctx: &CdgCategory, w: &[u32], out: &mut Emit) {
    let mut cur = (w.to_vec(), rat(1));
    for _ in 0..w.len() {
        out.push(cur.clone());
        let (v, s) = t_word(ctx, &cur.0);
        cur = (v, s * cur.1);
    }
}

/// Prepends the identity of `cod(a_0)`.
pub(crate) fn s_word(ctx: &CdgCategory, w: &[u32]) -> Vec<u32> {
    let mut v = Vec::with_capacity(w.len() + 1);
    v.push(ctx.identity(ctx.cod(w[0])));
    v.extend_from_slice(w);
    v
}

/// `sN`, or `(1 - t)sN` when `unnormalized`.
pub(crate) fn connes_word(ctx: &CdgCategory, w: &[u32], unnormalized: bool, out: &mut Emit) {
    let mut rots = Emit::new();
    norm_word(ctx, w, &mut rots);
    for (v, c) in rots {
        let sv = s_word(ctx, &v);
        if unnormalized {
            let (tv, ts) = t_word(ctx, &sv);
            out.push((tv, -(ts * &c)));
        }
        out.push((sv, c));
    }
}

/// Merges of adjacent entries, including the wrap-around merge.
pub fn b_mult(c: &BarChain) -> BarChain {
    expand(c, c.mode(), b_mult_word)
}

/// The internal differential applied slot by slot.
pub fn b_diff(c: &BarChain) -> BarChain {
    expand(c, c.mode(), b_diff_word)
}

/// Curvature insertion in every slot after `a_0, …, a_n`.
pub fn b_curv(c: &BarChain) -> BarChain {
    expand(c, c.mode(), b_curv_word)
}

/// First kind (`b_mult + b_diff`) or second kind (plus `b_curv`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum DifferentialKind {
    First,
    Second,
}

pub fn d_total(c: &BarChain, kind: DifferentialKind) -> BarChain {
    expand(c, c.mode(), |ctx, w, out| {
        b_mult_word(ctx, w, out);
        b_diff_word(ctx, w, out);
        if kind == DifferentialKind::Second {
            b_curv_word(ctx, w, out);
        }
    })
}

/// Connes' operator: `(1 - t)sN` on unnormalized chains, `sN` on normalized
/// or reduced ones.
pub fn connes_b(c: &BarChain) -> BarChain {
    let unnormalized = c.mode() == Normalization::Unnormalized;
    expand(c, c.mode(), |ctx, w, out| {
        connes_word(ctx, w, unnormalized, out)
    })
}

pub fn cyclic_t(c: &BarChain) -> BarChain {
    expand(c, c.mode(), |ctx, w, out| out.push(t_word(ctx, w)))
}

pub fn cyclic_t_inv(c: &BarChain) -> BarChain {
    expand(c, c.mode(), |ctx, w, out| out.push(t_inv_word(ctx, w)))
}

pub fn norm_n(c: &BarChain) -> BarChain {
    expand(c, c.mode(), norm_word)
}

pub fn degeneracy_s(c: &BarChain) -> BarChain {
    expand(c, c.mode(), |ctx, w, out| {
        out.push((s_word(ctx, w), rat(1)))
    })
}

/// Projection to the normalized complex.
pub fn normalize(c: &BarChain) -> BarChain {
    match c.mode() {
        Normalization::Unnormalized => c.project(Normalization::Normalized),
        _ => c.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::hochschild::random_chain;
    use std::sync::Arc;

    fn chain(ctx: &Arc<CdgCategory>, mode: Normalization, words: &[(&[&str], i64)]) -> BarChain {
        let ws = words.iter().map(|(w, c)| {
            (
                w.iter().map(|l| ctx.index_of(l).unwrap()).collect(),
                rat(*c),
            )
        });
        BarChain::from_words(ctx.clone(), mode, ws).unwrap()
    }

    #[test]
    fn classical_small_cases() {
        let a = Arc::new(fixtures::truncated_poly());
        let u = Normalization::Unnormalized;
        assert!(b_mult(&chain(&a, u, &[(&["x"], 1)])).is_zero());
        assert!(b_mult(&chain(&a, u, &[(&["1", "x"], 1)])).is_zero());
        // x[x] -> -x^2 + x^2 with all-even letters
        assert!(b_mult(&chain(&a, u, &[(&["x", "x"], 1)])).is_zero());
        // one insertion slot: b(1) = 1[x^2]
        assert_eq!(
            b_curv(&chain(&a, u, &[(&["1"], 1)])),
            chain(&a, u, &[(&["1", "x2"], 1)])
        );
        // B(a0) = 1[a0] on normalized chains
        let n = Normalization::Normalized;
        assert_eq!(
            connes_b(&chain(&a, n, &[(&["x"], 1)])),
            chain(&a, n, &[(&["1", "x"], 1)])
        );
    }

    #[test]
    fn rotation_laws() {
        for f in fixtures::all() {
            let ctx = f.algebra.clone();
            for seed in 0..10 {
                let c = random_chain(&ctx, Normalization::Unnormalized, 3, None, seed, 4);
                assert_eq!(cyclic_t(&cyclic_t_inv(&c)), c);
                let mut t4 = c.clone();
                for _ in 0..4 {
                    t4 = cyclic_t(&t4);
                }
                // the full rotation has trivial Koszul sign
                assert_eq!(t4, c);
                let n = norm_n(&c);
                assert!(n.sub(&cyclic_t(&n)).is_zero(), "(1-t)N != 0");
            }
        }
    }
}
