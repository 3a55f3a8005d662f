use std::collections::BTreeMap;

use super::{CategoryParts, CdgCategory};
use crate::linalg::SpanBasis;
use crate::scalar::SparseVec;

/// A hom-space of the new category, given by vectors of the ambient
/// hom-space between the images of its endpoints.
#[derive(Debug, Clone)]
pub struct HomSpec {
    pub src: u32,
    pub tgt: u32,
    pub spanning: Vec<SparseVec>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SubcategoryError {
    #[error("{what} of {witness} leaves the hom-space {src}->{tgt}")]
    NotClosed {
        what: &'static str,
        witness: String,
        src: String,
        tgt: String,
    },
    #[error("identity of object {0} is zero")]
    ZeroIdentity(String),
    #[error("spanning vector for {0} is not homogeneous")]
    Inhomogeneous(String),
}

/// Builds a cdg category whose hom-spaces are subspaces of an ambient
/// category's hom-spaces, with composition, differential and curvature
/// inherited from the ambient one.
pub struct SubcategoryBuilder<'a> {
    ambient: &'a CdgCategory,
    objects: Vec<(String, u32)>,
    identities: Vec<SparseVec>,
    homs: BTreeMap<(u32, u32), Vec<SparseVec>>,
}

/// The built category together with the embedding of its basis into ambient
/// coordinates.
pub struct Subcategory {
    pub category: CdgCategory,
    pub embedding: Vec<SparseVec>,
}

impl<'a> SubcategoryBuilder<'a> {
    pub fn new(ambient: &'a CdgCategory) -> Self {
        SubcategoryBuilder {
            ambient,
            objects: Vec::new(),
            identities: Vec::new(),
            homs: BTreeMap::new(),
        }
    }

    /// Adds an object sitting over `ambient_object`, with the given ambient
    /// vector as its identity. Returns the new object's index.
    pub fn object(&mut self, name: &str, ambient_object: u32, identity: SparseVec) -> u32 {
        self.objects.push((name.to_string(), ambient_object));
        self.identities.push(identity);
        (self.objects.len() - 1) as u32
    }

    pub fn hom(&mut self, spec: HomSpec) -> &mut Self {
        self.homs
            .entry((spec.src, spec.tgt))
            .or_default()
            .extend(spec.spanning);
        self
    }

    fn label_for(&self, src: u32, tgt: u32, v: &SparseVec, is_identity: bool) -> String {
        let (s, t) = (&self.objects[src as usize].0, &self.objects[tgt as usize].0);
        if is_identity {
            return format!("1_{s}");
        }
        if v.len() == 1 {
            let (i, c) = v.leading().unwrap();
            if c == &super::one() {
                let l = self.ambient.label(i);
                return if src == tgt && self.objects.len() == 1 {
                    l.to_string()
                } else {
                    format!("{l}@{s}{t}")
                };
            }
        }
        format!("({})@{s}{t}", self.ambient.format_vec(v))
    }

    pub fn build(self) -> Result<Subcategory, SubcategoryError> {
        let amb = self.ambient;
        let nobj = self.objects.len() as u32;
        let mut spans: BTreeMap<(u32, u32), SpanBasis> = BTreeMap::new();
        let mut global: BTreeMap<(u32, u32), Vec<u32>> = BTreeMap::new();
        let mut labels = Vec::new();
        let mut degrees = Vec::new();
        let mut dom = Vec::new();
        let mut cod = Vec::new();
        let mut embedding = Vec::new();
        let mut identities = vec![0u32; nobj as usize];

        for x in 0..nobj {
            if self.identities[x as usize].is_zero() {
                return Err(SubcategoryError::ZeroIdentity(
                    self.objects[x as usize].0.clone(),
                ));
            }
        }
        let mut keys: Vec<(u32, u32)> = self.homs.keys().copied().collect();
        for x in 0..nobj {
            if !keys.contains(&(x, x)) {
                keys.push((x, x));
            }
        }
        keys.sort();
        for (src, tgt) in keys {
            let span = spans.entry((src, tgt)).or_default();
            let mut candidates = Vec::new();
            if src == tgt {
                candidates.push((self.identities[src as usize].clone(), true));
            }
            for v in self.homs.get(&(src, tgt)).into_iter().flatten() {
                candidates.push((v.clone(), false));
            }
            for (v, is_id) in candidates {
                if span.insert(&v).is_none() {
                    continue;
                }
                let deg = amb
                    .vec_degree(&v)
                    .ok_or_else(|| SubcategoryError::Inhomogeneous(amb.format_vec(&v)))?;
                let idx = labels.len() as u32;
                if is_id {
                    identities[src as usize] = idx;
                }
                labels.push(self.label_for(src, tgt, &v, is_id));
                degrees.push(deg);
                dom.push(src);
                cod.push(tgt);
                embedding.push(v);
                global.entry((src, tgt)).or_default().push(idx);
            }
        }

        let n = labels.len();
        let coords = |src: u32, tgt: u32, v: &SparseVec, what: &'static str, witness: &str| {
            let fail = || SubcategoryError::NotClosed {
                what,
                witness: witness.to_string(),
                src: self.objects[src as usize].0.clone(),
                tgt: self.objects[tgt as usize].0.clone(),
            };
            if v.is_zero() {
                return Ok(SparseVec::zero());
            }
            let span = spans.get(&(src, tgt)).ok_or_else(fail)?;
            let local = span.coordinates(v).ok_or_else(fail)?;
            let ids = &global[&(src, tgt)];
            Ok(local
                .iter()
                .map(|(k, c)| (ids[k as usize], c.clone()))
                .collect::<SparseVec>())
        };

        let mut mult = vec![SparseVec::zero(); n * n];
        for a in 0..n {
            for b in 0..n {
                if dom[a] != cod[b] {
                    continue;
                }
                let p = amb.mult_vec(&embedding[a], &embedding[b]);
                let witness = format!("{}*{}", labels[a], labels[b]);
                mult[a * n + b] = coords(dom[b], cod[a], &p, "product", &witness)?;
            }
        }
        let mut diff = Vec::with_capacity(n);
        for a in 0..n {
            let d = amb.diff_vec(&embedding[a]);
            diff.push(coords(dom[a], cod[a], &d, "differential", &labels[a])?);
        }
        let mut curvature = Vec::with_capacity(nobj as usize);
        for x in 0..nobj {
            let id = &self.identities[x as usize];
            let h = amb.curvature(self.objects[x as usize].1);
            let h = amb.mult_vec(&amb.mult_vec(id, h), id);
            curvature.push(coords(x, x, &h, "curvature", &self.objects[x as usize].0)?);
        }

        let category = CdgCategory::from_parts(CategoryParts {
            grading: amb.grading(),
            objects: self.objects.iter().map(|(s, _)| s.clone()).collect(),
            labels,
            degrees,
            dom,
            cod,
            identities,
            mult,
            diff,
            curvature,
        });
        Ok(Subcategory {
            category,
            embedding,
        })
    }
}

impl CdgCategory {
    /// Smallest sub-cdg-category (same objects) whose hom-spaces contain the
    /// given seed vectors and are closed under composition, the differential,
    /// identities and curvature.
    pub fn closure(
        &self,
        seeds: &[(u32, u32, SparseVec)],
    ) -> Result<Subcategory, SubcategoryError> {
        let nobj = self.num_objects() as u32;
        let mut spans: BTreeMap<(u32, u32), SpanBasis> = BTreeMap::new();
        let mut queue: Vec<(u32, u32, SparseVec)> = Vec::new();
        for x in 0..nobj {
            queue.push((x, x, SparseVec::basis(self.identity(x))));
            queue.push((x, x, self.curvature(x).clone()));
        }
        queue.extend(seeds.iter().cloned());
        // homogeneous pieces only, so that bases stay homogeneous
        let split = |v: &SparseVec| -> Vec<SparseVec> {
            let mut by_deg: BTreeMap<i64, SparseVec> = BTreeMap::new();
            for (i, c) in v.iter() {
                by_deg
                    .entry(self.degree(i))
                    .or_default()
                    .add_term(i, c.clone());
            }
            by_deg.into_values().collect()
        };
        while let Some((src, tgt, v)) = queue.pop() {
            for piece in split(&v) {
                let span = spans.entry((src, tgt)).or_default();
                if span.insert(&piece).is_none() {
                    continue;
                }
                queue.push((src, tgt, self.diff_vec(&piece)));
                let existing: Vec<((u32, u32), Vec<SparseVec>)> = spans
                    .iter()
                    .map(|(k, s)| (*k, s.basis().to_vec()))
                    .collect();
                for ((s2, t2), basis) in existing {
                    for w in basis {
                        // w after piece
                        if s2 == tgt {
                            queue.push((src, t2, self.mult_vec(&w, &piece)));
                        }
                        // piece after w
                        if t2 == src {
                            queue.push((s2, tgt, self.mult_vec(&piece, &w)));
                        }
                    }
                }
            }
        }
        let mut builder = SubcategoryBuilder::new(self);
        for x in 0..nobj {
            builder.object(self.object_name(x), x, SparseVec::basis(self.identity(x)));
        }
        for ((src, tgt), span) in spans {
            builder.hom(HomSpec {
                src,
                tgt,
                spanning: span.basis().to_vec(),
            });
        }
        builder.build()
    }
}
