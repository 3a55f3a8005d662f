use std::sync::Arc;

use rayon::prelude::*;

use super::{iota_u, p_u, IotaReading, NonunitalError, PlusCategory};
use crate::algebra::{CdgCategory, HomSpec, SubcategoryBuilder};
use crate::free_modules::{MatrixAlgebra, MatrixHom};
use crate::hochschild::{BarChain, Normalization, UChain};
use crate::scalar::SparseVec;

/// A degree-0 linear map between finite cdg categories that respects
/// composition, differentials and curvature but not necessarily identities.
#[derive(Debug, Clone)]
pub struct Semifunctor {
    source: Arc<CdgCategory>,
    target: Arc<CdgCategory>,
    object_map: Vec<u32>,
    letter_map: Vec<SparseVec>,
}

impl Semifunctor {
    /// Checks hom membership, composition, the differential and curvature on
    /// all basis data.
    pub fn new(
        source: Arc<CdgCategory>,
        target: Arc<CdgCategory>,
        object_map: Vec<u32>,
        letter_map: Vec<SparseVec>,
    ) -> Result<Self, NonunitalError> {
        let f = Semifunctor {
            source,
            target,
            object_map,
            letter_map,
        };
        f.check()?;
        Ok(f)
    }

    pub fn identity(ctx: &Arc<CdgCategory>) -> Self {
        Semifunctor {
            source: ctx.clone(),
            target: ctx.clone(),
            object_map: (0..ctx.num_objects() as u32).collect(),
            letter_map: (0..ctx.dim() as u32).map(SparseVec::basis).collect(),
        }
    }

    pub fn source(&self) -> &Arc<CdgCategory> {
        &self.source
    }

    pub fn target(&self) -> &Arc<CdgCategory> {
        &self.target
    }

    pub fn image(&self, letter: u32) -> &SparseVec {
        &self.letter_map[letter as usize]
    }

    pub fn map_vec(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::zero();
        for (k, c) in v.iter() {
            out.add_scaled(&self.letter_map[k as usize], c);
        }
        out
    }

    fn check(&self) -> Result<(), NonunitalError> {
        let (s, t) = (&self.source, &self.target);
        let fail = |what: String| Err(NonunitalError::NotASemifunctor(what));
        if self.letter_map.len() != s.dim() || self.object_map.len() != s.num_objects() {
            return fail("table sizes".into());
        }
        for a in 0..s.dim() as u32 {
            let fa = self.image(a);
            let (x, y) = (
                self.object_map[s.dom(a) as usize],
                self.object_map[s.cod(a) as usize],
            );
            if fa.indices().any(|k| {
                t.dom(k) != x || t.cod(k) != y || !t.grading().same(t.degree(k), s.degree(a))
            }) {
                return fail(format!(
                    "image of {} leaves its hom-space or degree",
                    s.label(a)
                ));
            }
            if self.map_vec(s.diff_basis(a)) != t.diff_vec(fa) {
                return fail(format!("differential at {}", s.label(a)));
            }
            for b in 0..s.dim() as u32 {
                if !s.composable(a, b) {
                    continue;
                }
                if self.map_vec(s.mult_basis(a, b)) != t.mult_vec(fa, self.image(b)) {
                    return fail(format!("composition at ({}, {})", s.label(a), s.label(b)));
                }
            }
        }
        for x in 0..s.num_objects() as u32 {
            if self.map_vec(s.curvature(x)) != *t.curvature(self.object_map[x as usize]) {
                return fail(format!("curvature at {}", s.object_name(x)));
            }
        }
        Ok(())
    }

    /// `G ∘ F` for `self = F`.
    pub fn then(&self, g: &Semifunctor) -> Result<Semifunctor, NonunitalError> {
        if !Arc::ptr_eq(&self.target, &g.source) && *self.target != *g.source {
            return Err(NonunitalError::ContextMismatch);
        }
        Ok(Semifunctor {
            source: self.source.clone(),
            target: g.target.clone(),
            object_map: self
                .object_map
                .iter()
                .map(|&x| g.object_map[x as usize])
                .collect(),
            letter_map: self.letter_map.iter().map(|v| g.map_vec(v)).collect(),
        })
    }

    /// The extension `F⁺: A⁺ → B⁺` with `e_x ↦ e_{F(x)}`.
    pub fn plus(&self, src: &PlusCategory, tgt: &PlusCategory) -> Semifunctor {
        let mut letter_map = self.letter_map.clone();
        for x in 0..self.source.num_objects() as u32 {
            letter_map.push(SparseVec::basis(tgt.e(self.object_map[x as usize])));
        }
        Semifunctor {
            source: src.plus().clone(),
            target: tgt.plus().clone(),
            object_map: self.object_map.clone(),
            letter_map,
        }
    }

    /// Entrywise multilinear image of a chain, accumulated in `mode`.
    pub fn apply(&self, c: &BarChain, mode: Normalization) -> BarChain {
        let terms: Vec<_> = c.terms().collect();
        terms
            .par_chunks(32)
            .map(|chunk| {
                let mut out = BarChain::new(self.target.clone(), mode);
                for (w, k) in chunk {
                    let factors: Vec<SparseVec> =
                        w.letters().iter().map(|&x| self.image(x).clone()).collect();
                    out.add_tensor(&factors, k);
                }
                out
            })
            .reduce(
                || BarChain::new(self.target.clone(), mode),
                |mut a, b| {
                    a.add_assign(&b);
                    a
                },
            )
    }
}

/// `F^e` on u-series of `C^e` chains.
pub fn pushforward_e(
    f: &Semifunctor,
    src: &PlusCategory,
    tgt: &PlusCategory,
    ec: &UChain,
) -> Result<UChain, NonunitalError> {
    if !Arc::ptr_eq(ec.ctx(), src.plus()) && **ec.ctx() != **src.plus() {
        return Err(NonunitalError::ContextMismatch);
    }
    let fp = f.plus(src, tgt);
    Ok(
        ec.map_into(tgt.plus().clone(), Normalization::Reduced, "F^e", 0, |c| {
            fp.apply(c, Normalization::Reduced)
        }),
    )
}

/// `F_*(u) = p(u) ∘ F^e ∘ ι(u)`.
pub fn f_star_u(
    f: &Semifunctor,
    src: &PlusCategory,
    tgt: &PlusCategory,
    c: &UChain,
    reading: IotaReading,
) -> Result<UChain, NonunitalError> {
    let i = iota_u(src, c, reading);
    let pushed = pushforward_e(f, src, tgt, &i)?;
    p_u(tgt, &pushed)
}

/// The concrete two-object category `{P, N}` of a strict summand
/// `P ⊂ N_α`, with its semifunctor to `{N_α}`.
#[derive(Debug, Clone)]
pub struct Summand {
    pub category: Arc<CdgCategory>,
    /// embedding of `{P, N}` letters into `End(N_α)` coordinates
    pub embedding: Vec<SparseVec>,
    pub functor: Semifunctor,
    pub p: u32,
    pub n: u32,
    pub pi: SparseVec,
}

impl Summand {
    /// Letter of `End(N) ⊂ {P, N}` corresponding to a basis letter of
    /// `End(N_α)`.
    pub fn include_n(&self, m_letter: u32) -> u32 {
        let target = SparseVec::basis(m_letter);
        (0..self.category.dim() as u32)
            .find(|&k| {
                self.category.dom(k) == self.n
                    && self.category.cod(k) == self.n
                    && self.embedding[k as usize] == target
            })
            .expect("End(N) letters are ambient basis vectors")
    }

    /// The letters `i: P -> N` and `j: N -> P` (both with image `π`), as
    /// closure seeds for the homology solver.
    pub fn cross_seeds(&self) -> Vec<(u32, u32, SparseVec)> {
        let c = &self.category;
        let find = |src: u32, tgt: u32| {
            (0..c.dim() as u32).find(|&k| {
                c.dom(k) == src && c.cod(k) == tgt && self.embedding[k as usize] == self.pi
            })
        };
        [(self.p, self.n), (self.n, self.p)]
            .into_iter()
            .filter_map(|(s, t)| find(s, t).map(|k| (s, t, SparseVec::basis(k))))
            .collect()
    }

    /// The inclusion `{N} ⊂ {P, N}` on chains.
    pub fn include_chain(&self, c: &BarChain) -> BarChain {
        let mut out = BarChain::new(self.category.clone(), c.mode());
        for (w, k) in c.terms() {
            out.add_word(
                w.letters().iter().map(|&x| self.include_n(x)).collect(),
                k.clone(),
            );
        }
        out
    }
}

/// Builds `{P, N}` with `End(P) = π End(N) π`, `Hom(N, P) = π End(N)`,
/// `Hom(P, N) = End(N) π` and the semifunctor `f ↦ i f j`, `f' ↦ i f'`,
/// `f'' ↦ f'' j`, `g ↦ g`.
pub fn semifunctor_from_summand(
    mat: &MatrixAlgebra,
    m_alpha: &Arc<CdgCategory>,
    i: &MatrixHom,
    j: &MatrixHom,
) -> Result<Summand, NonunitalError> {
    let to_vec = |m: &MatrixHom| {
        mat.hom_to_vec(m)
            .map_err(|e| NonunitalError::NotASummand(e.to_string()))
    };
    let (iv, jv) = (to_vec(i)?, to_vec(j)?);
    let pi = m_alpha.mult_vec(&iv, &jv);
    if m_alpha.mult_vec(&jv, &iv) != pi {
        return Err(NonunitalError::NotASummand(
            "j∘i differs from 1_P = i∘j".into(),
        ));
    }
    if m_alpha.mult_vec(&pi, &pi) != pi {
        return Err(NonunitalError::NotASummand("i∘j is not idempotent".into()));
    }
    if !m_alpha.diff_vec(&iv).is_zero() || !m_alpha.diff_vec(&jv).is_zero() {
        return Err(NonunitalError::NotASummand("i or j is not closed".into()));
    }
    if !m_alpha.grading().same(i.degree(), 0) || !m_alpha.grading().same(j.degree(), 0) {
        return Err(NonunitalError::NotASummand(
            "i and j must have degree 0".into(),
        ));
    }

    let basis: Vec<SparseVec> = (0..m_alpha.dim() as u32).map(SparseVec::basis).collect();
    let mut b = SubcategoryBuilder::new(m_alpha);
    let p = b.object("P", 0, pi.clone());
    let n = b.object("N", 0, SparseVec::basis(m_alpha.identity(0)));
    let left = |v: &SparseVec| m_alpha.mult_vec(&pi, v);
    let right = |v: &SparseVec| m_alpha.mult_vec(v, &pi);
    b.hom(HomSpec {
        src: p,
        tgt: p,
        spanning: basis.iter().map(|v| left(&right(v))).collect(),
    });
    b.hom(HomSpec {
        src: n,
        tgt: p,
        spanning: basis.iter().map(left).collect(),
    });
    b.hom(HomSpec {
        src: p,
        tgt: n,
        spanning: basis.iter().map(right).collect(),
    });
    b.hom(HomSpec {
        src: n,
        tgt: n,
        spanning: basis.clone(),
    });
    let sub = b
        .build()
        .map_err(|e| NonunitalError::NotASummand(e.to_string()))?;
    let category = Arc::new(sub.category);

    let letter_map = (0..category.dim() as u32)
        .map(|k| {
            let v = &sub.embedding[k as usize];
            let (src, tgt) = (category.dom(k), category.cod(k));
            let v = if src == p {
                m_alpha.mult_vec(v, &jv)
            } else {
                v.clone()
            };
            if tgt == p {
                m_alpha.mult_vec(&iv, &v)
            } else {
                v
            }
        })
        .collect();
    let functor = Semifunctor::new(category.clone(), m_alpha.clone(), vec![0, 0], letter_map)?;
    Ok(Summand {
        category,
        embedding: sub.embedding,
        functor,
        p,
        n,
        pi,
    })
}
