//! Certification: stratum-wise cocycle checks, term-level comparisons and
//! the boundary-membership solver.

use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::ChernError;
use crate::algebra::CdgCategory;
use crate::hochschild::{
    admits, BarChain, DifferentialKind, Normalization, TruncationCaps, TruncationEntry, UChain,
    Word,
};
use crate::linalg::solve_columns;
use crate::scalar::{format_rational, SparseVec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StratumStatus {
    Zero,
    Nonzero,
    Inconclusive,
}

/// One stratum `(u-power, length, degree)` of a residual.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StratumCheck {
    pub u_power: u32,
    pub length: usize,
    pub degree: Option<i64>,
    pub status: StratumStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CocycleReport {
    pub strata: Vec<StratumCheck>,
}

impl CocycleReport {
    pub fn passed(&self) -> bool {
        self.strata
            .iter()
            .all(|s| s.status != StratumStatus::Nonzero)
    }

    pub fn conclusive(&self) -> usize {
        self.strata
            .iter()
            .filter(|s| s.status != StratumStatus::Inconclusive)
            .count()
    }

    pub fn inconclusive(&self) -> usize {
        self.strata.len() - self.conclusive()
    }

    pub fn first_failure(&self) -> Option<&StratumCheck> {
        self.strata
            .iter()
            .find(|s| s.status == StratumStatus::Nonzero)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub outcome: Outcome,
    pub strata_checked: usize,
    pub strata_inconclusive: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificationReport {
    pub checks: Vec<IdentityCheck>,
    pub cocycle: CocycleReport,
}

impl CertificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.outcome != Outcome::Fail)
    }
}

/// Whether chain terms at `(u_power, length)` may be missing.
fn dropped(ledger: &[TruncationEntry], u_power: u32, length: usize) -> bool {
    ledger
        .iter()
        .any(|e| e.u_power == u_power && e.length <= length)
}

fn total_degrees(c: &UChain) -> BTreeSet<i64> {
    let g = c.ctx().grading();
    c.coeffs()
        .flat_map(|(k, ck)| {
            ck.terms()
                .map(move |(w, _)| g.reduce(w.degree() + 2 * k as i64))
        })
        .collect()
}

fn format_terms(c: &BarChain, limit: usize) -> String {
    let mut s: Vec<String> = c
        .terms()
        .take(limit)
        .map(|(w, x)| format!("({}){}", format_rational(x), c.format_word(w.letters())))
        .collect();
    if c.len() > limit {
        s.push(format!("... {} more", c.len() - limit));
    }
    s.join(" + ")
}

/// `(D + uB)(chain)` stratum by stratum. A stratum `(k, L)` reads chain
/// terms at `(k, L+1)`, `(k, L)`, `(k, L-1)` and `(k-1, L-1)`; it is
/// inconclusive when the ledger says any of those may have been dropped.
pub fn verify_cocycle(chain: &UChain) -> CocycleReport {
    let caps = chain.caps();
    let g = chain.ctx().grading();
    let wide = TruncationCaps::new(caps.u_order, caps.max_length + 2);
    let residual = chain
        .with_caps(wide)
        .total_differential(DifferentialKind::Second);
    let ledger = chain.ledger();
    let degrees = total_degrees(chain);
    let expected = |k: u32| -> Option<i64> {
        (degrees.len() == 1).then(|| g.reduce(degrees.iter().next().unwrap() - 2 * k as i64 + 1))
    };
    let mut strata = Vec::new();
    for k in 0..=caps.u_order {
        let rk = residual.coeff(k);
        for len in 0..=caps.max_length + 1 {
            let inconclusive = dropped(ledger, k, len + 1)
                || (k > 0 && len > 0 && dropped(ledger, k - 1, len - 1));
            let slice = rk.of_length(len);
            let mut by_degree: BTreeMap<i64, BarChain> = BTreeMap::new();
            for (w, x) in slice.terms() {
                by_degree
                    .entry(w.degree())
                    .or_insert_with(|| BarChain::new(rk.ctx().clone(), rk.mode()))
                    .add_word(w.letters().to_vec(), x.clone());
            }
            if by_degree.is_empty() {
                let status = if inconclusive {
                    StratumStatus::Inconclusive
                } else {
                    StratumStatus::Zero
                };
                strata.push(StratumCheck {
                    u_power: k,
                    length: len,
                    degree: expected(k),
                    status,
                    residual: None,
                });
            }
            for (d, part) in by_degree {
                let (status, residual) = if inconclusive {
                    (StratumStatus::Inconclusive, None)
                } else {
                    (StratumStatus::Nonzero, Some(format_terms(&part, 8)))
                };
                strata.push(StratumCheck {
                    u_power: k,
                    length: len,
                    degree: Some(d),
                    status,
                    residual,
                });
            }
        }
    }
    CocycleReport { strata }
}

/// Attaches the cocycle check to a list of other checks.
pub(crate) fn certify(chain: &UChain, mut checks: Vec<IdentityCheck>) -> CertificationReport {
    let cocycle = verify_cocycle(chain);
    let outcome = if !cocycle.passed() {
        Outcome::Fail
    } else if cocycle.conclusive() == 0 {
        Outcome::Inconclusive
    } else {
        Outcome::Pass
    };
    let detail = cocycle.first_failure().map(|s| {
        format!(
            "nonzero residual at u^{} length {}: {}",
            s.u_power,
            s.length,
            s.residual.as_deref().unwrap_or("")
        )
    });
    checks.push(IdentityCheck {
        name: "(D + uB)(ch) = 0".into(),
        outcome,
        strata_checked: cocycle.conclusive(),
        strata_inconclusive: cocycle.inconclusive(),
        detail,
    });
    CertificationReport { checks, cocycle }
}

/// Term-level comparison on the strata both sides cover exactly.
pub(crate) fn compare_checks(name: &str, a: &UChain, b: &UChain) -> IdentityCheck {
    let diff = compare(a, b);
    let detail = diff
        .first
        .map(|(k, len, text)| format!("first difference at u^{k} length {len}: {text}"));
    IdentityCheck {
        name: name.into(),
        outcome: if detail.is_some() {
            Outcome::Fail
        } else if diff.checked == 0 {
            Outcome::Inconclusive
        } else {
            Outcome::Pass
        },
        strata_checked: diff.checked,
        strata_inconclusive: diff.skipped,
        detail,
    }
}

/// Outcome of [`compare`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparison {
    pub checked: usize,
    pub skipped: usize,
    /// `(u-power, length, difference)` of the first differing stratum
    pub first: Option<(u32, usize, String)>,
}

/// Compares two u-series stratum by stratum, skipping strata either ledger
/// marks as possibly incomplete.
pub fn compare(a: &UChain, b: &UChain) -> Comparison {
    let caps = a.caps().min(b.caps());
    let mut out = Comparison {
        checked: 0,
        skipped: 0,
        first: None,
    };
    for k in 0..=caps.u_order {
        let d = a.coeff(k).sub(
            &b.coeff(k)
                .with_context(a.ctx().clone())
                .expect("same basis"),
        );
        for len in 0..=caps.max_length {
            if dropped(a.ledger(), k, len) || dropped(b.ledger(), k, len) {
                out.skipped += 1;
                continue;
            }
            out.checked += 1;
            let slice = d.of_length(len);
            if out.first.is_none() && !slice.is_zero() {
                out.first = Some((k, len, format_terms(&slice, 8)));
            }
        }
    }
    out
}

/// Result of [`homologous`].
#[derive(Debug, Clone)]
pub enum HomologousOutcome {
    /// `(D + uB)(w) = z - z2` on every stratum of length `< max_length`.
    Witness(UChain),
    /// Inconclusive: no witness among the candidate words within the caps.
    NotFoundWithinCaps { candidates: usize },
    /// `z - z2` is not closed, so no witness exists.
    NotClosed { u_power: u32, length: usize },
}

/// Candidate words are capped so that a hopeless search stays bounded.
const MAX_CANDIDATES: usize = 60_000;

/// Searches for `w` with `(D + uB)(w) = z - z2`.
///
/// Unknowns are normalized words over the sub-cdg-category generated by the
/// letters of `z - z2` and `extra_seeds`, of every u-power and length within
/// `caps`. Equations are imposed on the strata of length `< max_length`,
/// which are exactly the strata a length-capped `w` determines. All strata
/// are solved jointly.
pub fn homologous(
    z: &UChain,
    z2: &UChain,
    caps: TruncationCaps,
    extra_seeds: &[(u32, u32, SparseVec)],
) -> Result<HomologousOutcome, ChernError> {
    let ctx = z.ctx().clone();
    let mode = Normalization::Normalized;
    let r = z.project(mode).sub(&z2.project(mode)).with_caps(caps);
    let in_scope = |k: u32, len: usize| k <= caps.u_order && len < caps.max_length;

    let closedness = r.total_differential(DifferentialKind::Second);
    for (k, c) in closedness.coeffs() {
        if let Some((w, _)) = c.terms().find(|(w, _)| in_scope(k, w.len())) {
            return Ok(HomologousOutcome::NotClosed {
                u_power: k,
                length: w.len(),
            });
        }
    }
    if r.coeffs()
        .all(|(k, c)| c.terms().all(|(w, _)| !in_scope(k, w.len())))
    {
        return Ok(HomologousOutcome::Witness(UChain::new(ctx, mode, caps)));
    }

    let mut seeds: Vec<(u32, u32, SparseVec)> = extra_seeds.to_vec();
    for (_, c) in r.coeffs() {
        for (w, _) in c.terms() {
            for &x in w.letters() {
                seeds.push((ctx.dom(x), ctx.cod(x), SparseVec::basis(x)));
            }
        }
    }
    let sub = ctx
        .closure(&seeds)
        .map_err(|e| ChernError::PreconditionFailed(e.to_string()))?;
    let g = ctx.grading();
    let total: BTreeSet<i64> = total_degrees(&r);

    let mut candidates: Vec<(u32, Vec<u32>)> = Vec::new();
    'outer: for k in 0..=caps.u_order {
        let targets: BTreeSet<i64> = total
            .iter()
            .map(|d| g.reduce(d - 2 * k as i64 - 1))
            .collect();
        for len in 0..=caps.max_length {
            for w in sub_words(&sub.category, len) {
                if targets.contains(&g.reduce(crate::hochschild::word_degree(&sub.category, &w))) {
                    candidates.push((k, w));
                    if candidates.len() > MAX_CANDIDATES {
                        break 'outer;
                    }
                }
            }
        }
    }
    if candidates.len() > MAX_CANDIDATES {
        return Ok(HomologousOutcome::NotFoundWithinCaps {
            candidates: candidates.len(),
        });
    }

    let wide = TruncationCaps::new(caps.u_order, caps.max_length + 1);
    let images: Vec<BarChain> = {
        use rayon::prelude::*;
        candidates
            .par_iter()
            .map(|(_, w)| {
                let factors: Vec<SparseVec> = w
                    .iter()
                    .map(|&x| sub.embedding[x as usize].clone())
                    .collect();
                let mut c = BarChain::new(ctx.clone(), mode);
                c.add_tensor(&factors, &crate::scalar::rat(1));
                c
            })
            .collect()
    };
    let mut index: HashMap<(u32, Word), u32> = HashMap::new();
    let mut encode = |u: &UChain| -> SparseVec {
        let mut v = SparseVec::zero();
        for (k, c) in u.coeffs() {
            for (w, x) in c.terms() {
                if in_scope(k, w.len()) {
                    let next = index.len() as u32;
                    let id = *index.entry((k, w.clone())).or_insert(next);
                    v.add_term(id, x.clone());
                }
            }
        }
        v
    };
    let boundaries: Vec<UChain> = {
        use rayon::prelude::*;
        candidates
            .par_iter()
            .zip(images.par_iter())
            .map(|((k, _), img)| {
                let mut u = UChain::new(ctx.clone(), mode, wide);
                u.add_at(*k, img, "candidate");
                u.total_differential(DifferentialKind::Second)
            })
            .collect()
    };
    let columns: Vec<SparseVec> = boundaries.iter().map(&mut encode).collect();
    let target = encode(&r);
    let Some(solution) = solve_columns(&columns, &target) else {
        return Ok(HomologousOutcome::NotFoundWithinCaps {
            candidates: candidates.len(),
        });
    };
    let mut w = UChain::new(ctx.clone(), mode, caps);
    for (j, x) in solution.iter() {
        w.add_scaled_at(candidates[j as usize].0, &images[j as usize], x, "witness");
    }
    Ok(HomologousOutcome::Witness(w))
}

/// Cyclically composable words of the given tail length whose tail avoids
/// identities.
fn sub_words(cat: &CdgCategory, len: usize) -> Vec<Vec<u32>> {
    let dim = cat.dim() as u32;
    let mut out = Vec::new();
    let mut stack = Vec::with_capacity(len + 1);
    fn go(cat: &CdgCategory, dim: u32, len: usize, stack: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if stack.len() == len + 1 {
            if cat.dom(*stack.last().unwrap()) == cat.cod(stack[0])
                && admits(cat, Normalization::Normalized, stack)
            {
                out.push(stack.clone());
            }
            return;
        }
        let need = cat.dom(*stack.last().unwrap());
        for x in 0..dim {
            if cat.cod(x) == need && !cat.is_identity(x) {
                stack.push(x);
                go(cat, dim, len, stack, out);
                stack.pop();
            }
        }
    }
    for a0 in 0..dim {
        stack.clear();
        stack.push(a0);
        go(cat, dim, len, &mut stack, &mut out);
    }
    out
}

/// Shorthand used by tests and the CLI: the residual `(D + uB)(w) - (z - z2)`
/// restricted to the strata the solver constrains.
pub fn witness_residual(w: &UChain, z: &UChain, z2: &UChain) -> UChain {
    let caps = w.caps();
    let mode = Normalization::Normalized;
    let wide = TruncationCaps::new(caps.u_order, caps.max_length + 1);
    let lhs = w
        .with_caps(wide)
        .total_differential(DifferentialKind::Second);
    let r = z.project(mode).sub(&z2.project(mode));
    let diff = lhs.with_caps(caps).sub(&r.with_caps(caps));
    let mut out = UChain::new(diff.ctx().clone(), mode, caps);
    for (k, c) in diff.coeffs() {
        out.add_at(
            k,
            &c.filter(|word| word.len() < caps.max_length),
            "residual",
        );
    }
    out
}
