//! Hochschild chains `a_0[a_1|…|a_n]` over a finite cdg category, the
//! operators b, B, t, N, s, and u-series of chains with truncation caps.
//!
//! Sign conventions. Write `s(a) = |a| - 1` for the suspended degree of a
//! letter and `σ_i = s(a_0) + … + s(a_i)` (so `σ_{-1} = 0`). A term has degree
//! `|a_0| + Σ_{i≥1} (|a_i| - 1)`. Every operator sign is a Koszul sign in the
//! suspended degrees:
//!
//! * `b_diff`: `(-1)^{σ_{i-1}}` in front of `…|d a_i|…`
//! * `b_mult`: `(-1)^{σ_i + 1}` for merging `a_i a_{i+1}`; the wrap-around
//!   merge `a_n a_0` carries `(-1)^{1 + s(a_n)(σ_{n-1} + 1)}`
//! * `b_curv`: `(-1)^{σ_i + 1}` for inserting the curvature after `a_i`
//! * `t`: `(-1)^{s(a_n) σ_{n-1}}`, rotating `a_n` to the front
//!
//! For ungraded algebras these are the classical signs.

mod chain;
pub mod ops;
mod random;
mod uchain;

pub(crate) use chain::{admits, word_degree};
pub use chain::{BarChain, ChainError, Normalization, Word};
pub use ops::{
    b_curv, b_diff, b_mult, connes_b, cyclic_t, cyclic_t_inv, d_total, degeneracy_s, norm_n,
    normalize, DifferentialKind,
};
pub use random::random_chain;
pub use uchain::{TruncationCaps, TruncationEntry, UChain};
