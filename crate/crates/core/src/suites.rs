//! Identity suites over a manifest input: algebra axioms, operator
//! relations, the η lemma, the non-unital homotopies, trace laws and
//! cocycle certification.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::CdgCategory;
use crate::chern::{
    chern_direct, chern_finite, compare, oracle_chain, twist_pushforward, verify_cocycle,
    ChernInput, IdentityCheck, Outcome,
};
use crate::free_modules::{generalized_trace, trace_chain, MatrixHom, ShiftTuple};
use crate::hochschild::{
    connes_b, cyclic_t, d_total, random_chain, BarChain, DifferentialKind, Normalization,
    TruncationCaps, UChain,
};
use crate::nonunital::{adjoin_units, homotopy_h, homotopy_he, iota_u, p_u, IotaReading};
use crate::scalar::{rat, SparseVec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Algebra,
    Operators,
    Lemma,
    Homotopy,
    Trace,
    Cocycle,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Algebra,
        Suite::Operators,
        Suite::Lemma,
        Suite::Homotopy,
        Suite::Trace,
        Suite::Cocycle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Operators => "operators",
            Suite::Lemma => "lemma",
            Suite::Homotopy => "homotopy",
            Suite::Trace => "trace",
            Suite::Cocycle => "cocycle",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SuiteConfig {
    /// random samples per identity
    pub samples: usize,
    pub seed: u64,
    pub reading: IotaReading,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            samples: 100,
            seed: 0,
            reading: IotaReading::default(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<IdentityCheck>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.outcome != Outcome::Fail)
    }
}

pub fn run_suite(input: &ChernInput, suite: Suite, cfg: &SuiteConfig) -> SuiteReport {
    let checks = match suite {
        Suite::Algebra => algebra_suite(input),
        Suite::Operators => operator_suite(input, cfg),
        Suite::Lemma => lemma_suite(input, cfg),
        Suite::Homotopy => homotopy_suite(input, cfg),
        Suite::Trace => trace_suite(input, cfg),
        Suite::Cocycle => cocycle_suite(input),
    };
    SuiteReport { suite, checks }
}

/// Runs `f` on every sample; the first error message fails the check.
fn sampled(
    name: impl Into<String>,
    samples: usize,
    f: impl Fn(usize) -> Result<(), String>,
) -> IdentityCheck {
    let mut detail = None;
    let mut checked = 0;
    for i in 0..samples {
        checked += 1;
        if let Err(e) = f(i) {
            detail = Some(format!("sample {i}: {e}"));
            break;
        }
    }
    IdentityCheck {
        name: name.into(),
        outcome: if detail.is_some() {
            Outcome::Fail
        } else {
            Outcome::Pass
        },
        strata_checked: checked,
        strata_inconclusive: 0,
        detail,
    }
}

fn single(name: impl Into<String>, result: Result<(), String>) -> IdentityCheck {
    sampled(name, 1, |_| result.clone())
}

fn zero(c: &BarChain, what: &str) -> Result<(), String> {
    if c.is_zero() {
        Ok(())
    } else {
        Err(format!("{what} = {c}"))
    }
}

fn algebra_suite(input: &ChernInput) -> Vec<IdentityCheck> {
    let v = |c: &CdgCategory| c.validate().map_err(|e| e.to_string());
    vec![
        single("A is a cdg algebra", v(&input.algebra)),
        single("End(N) is a cdg algebra", v(input.mat.untwisted())),
        single("End(N_alpha) is a cdg algebra", v(&input.m_alpha)),
        single(
            "A+ is a cdg category",
            v(adjoin_units(&input.algebra).plus()),
        ),
    ]
}

/// Lengths cycle through `0..=max` so that every sample set covers short and
/// long words.
fn length_for(i: usize, max: usize) -> usize {
    i % (max + 1)
}

fn operator_checks(
    ctx: &Arc<CdgCategory>,
    label: &str,
    mode: Normalization,
    cfg: &SuiteConfig,
    max_len: usize,
) -> Vec<IdentityCheck> {
    let kind = DifferentialKind::Second;
    let draw = |i: usize| {
        random_chain(
            ctx,
            mode,
            length_for(i, max_len),
            None,
            cfg.seed.wrapping_add(i as u64),
            4,
        )
    };
    let m = format!("{mode:?}").to_lowercase();
    let mut out = vec![
        sampled(
            format!("D^2 = 0 on {m} chains over {label}"),
            cfg.samples,
            |i| zero(&d_total(&d_total(&draw(i), kind), kind), "D^2 c"),
        ),
        sampled(
            format!("B^2 = 0 on {m} chains over {label}"),
            cfg.samples,
            |i| zero(&connes_b(&connes_b(&draw(i))), "B^2 c"),
        ),
    ];
    // with curvature, DB + BD vanishes only modulo degenerate words
    if mode != Normalization::Unnormalized || !ctx.has_curvature() {
        out.push(sampled(
            format!("DB + BD = 0 on {m} chains over {label}"),
            cfg.samples,
            |i| {
                let c = draw(i);
                zero(
                    &d_total(&connes_b(&c), kind).add(&connes_b(&d_total(&c, kind))),
                    "(DB + BD) c",
                )
            },
        ));
    }
    out
}

fn operator_suite(input: &ChernInput, cfg: &SuiteConfig) -> Vec<IdentityCheck> {
    let max_len = input.caps.max_length.saturating_sub(1);
    let mut out = Vec::new();
    for mode in [Normalization::Normalized, Normalization::Unnormalized] {
        out.extend(operator_checks(&input.algebra, "A", mode, cfg, max_len));
    }
    // matrix chains are larger; shorter words keep the suite fast
    let small = SuiteConfig {
        samples: cfg.samples.min(30),
        ..*cfg
    };
    out.extend(operator_checks(
        &input.m_alpha,
        "End(N_alpha)",
        Normalization::Normalized,
        &small,
        max_len.min(4),
    ));
    out
}

fn lemma_suite(input: &ChernInput, cfg: &SuiteConfig) -> Vec<IdentityCheck> {
    match oracle_chain(input, cfg.reading) {
        Ok((_, trace)) => {
            let d = compare(&trace.pushed, &trace.eta);
            vec![IdentityCheck {
                name: "quot(F_*(u)(gamma_P)) = eta_pi".into(),
                outcome: if d.first.is_some() {
                    Outcome::Fail
                } else {
                    Outcome::Pass
                },
                strata_checked: d.checked,
                strata_inconclusive: d.skipped,
                detail: d.first.map(|(k, l, t)| format!("u^{k} length {l}: {t}")),
            }]
        }
        Err(e) => vec![single("quot(F_*(u)(gamma_P)) = eta_pi", Err(e.to_string()))],
    }
}

/// Random u-series with terms at `u^0` and `u^1`.
fn random_series(
    ctx: &Arc<CdgCategory>,
    mode: Normalization,
    caps: TruncationCaps,
    max_len: usize,
    seed: u64,
) -> UChain {
    let mut u = UChain::new(ctx.clone(), mode, caps);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..2 {
        let len = rng.gen_range(0..=max_len);
        u.add_at(
            k,
            &random_chain(ctx, mode, len, None, rng.gen(), 3),
            "sample",
        );
    }
    u
}

/// `a - b` on the strata below `max_len`, where neither side has been cut.
fn agree_below(a: &UChain, b: &UChain, what: &str) -> Result<(), String> {
    let d = compare(a, b);
    match d.first {
        None => Ok(()),
        Some((k, l, t)) => Err(format!("{what} differ at u^{k} length {l}: {t}")),
    }
}

/// The homotopy identities relating `C(A)[[u]]` and `C^e(A)[[u]]`. Lengths
/// stay well inside the caps so every compared stratum is exact.
fn homotopy_checks(input: &ChernInput, cfg: &SuiteConfig) -> Vec<IdentityCheck> {
    let kind = DifferentialKind::Second;
    // the comparison maps live on dg categories; End(N_α) is one even when A is curved
    let (a, label) = if input.algebra.has_curvature() {
        (&input.m_alpha, "End(N_alpha)")
    } else {
        (&input.algebra, "A")
    };
    let pc = adjoin_units(a);
    let caps = TruncationCaps::new(3, 12);
    let max_len = if a.dim() > 4 { 2 } else { 4 };
    let samples = cfg.samples;
    let e_chain = |i: usize| {
        random_series(
            pc.plus(),
            Normalization::Reduced,
            caps,
            max_len,
            cfg.seed ^ (i as u64 * 7919),
        )
    };
    let c_chain = |i: usize| {
        random_series(
            a,
            Normalization::Unnormalized,
            caps,
            max_len,
            cfg.seed ^ (i as u64 * 104729),
        )
    };
    let iota_check = |reading: IotaReading, i: usize| {
        let y = c_chain(i);
        let lhs = iota_u(&pc, &y, reading).total_differential(kind);
        let rhs = iota_u(&pc, &y.total_differential(kind), reading);
        agree_below(&lhs, &rhs, "D iota and iota D")
    };
    let mut out = vec![
        sampled(
            format!(
                "iota(u) is a chain map over {label} ({:?} reading)",
                cfg.reading
            ),
            samples,
            |i| iota_check(cfg.reading, i),
        ),
        sampled(format!("p(u) is a chain map over {label}"), samples, |i| {
            let x = e_chain(i);
            let lhs = p_u(&pc, &x)
                .map_err(|e| e.to_string())?
                .total_differential(kind);
            let rhs = p_u(&pc, &x.total_differential(kind)).map_err(|e| e.to_string())?;
            agree_below(&lhs, &rhs, "D p and p D")
        }),
        sampled(
            format!("iota(u) p(u) - id = D H^e + H^e D over {label}"),
            samples,
            |i| {
                let x = e_chain(i);
                let ip = iota_u(&pc, &p_u(&pc, &x).map_err(|e| e.to_string())?, cfg.reading);
                let lhs = ip.sub(&x);
                let he = homotopy_he(&pc, &x)
                    .map_err(|e| e.to_string())?
                    .total_differential(kind);
                let eh =
                    homotopy_he(&pc, &x.total_differential(kind)).map_err(|e| e.to_string())?;
                agree_below(&lhs, &he.add(&eh), "iota p - id and [D, H^e]")
            },
        ),
    ];
    let other = match cfg.reading {
        IotaReading::Literal => IotaReading::Short,
        IotaReading::Short => IotaReading::Literal,
    };
    let mut alt = sampled(
        format!("iota(u) is a chain map over {label} ({other:?} reading, recorded)"),
        samples,
        |i| iota_check(other, i),
    );
    advisory(&mut alt);
    out.push(alt);
    let mut h = sampled(
        format!("p(u) iota(u) - id = D H + H D over {label} (H literal, recorded)"),
        samples,
        |i| {
            let y = c_chain(i);
            let pi = p_u(&pc, &iota_u(&pc, &y, cfg.reading)).map_err(|e| e.to_string())?;
            let lhs = pi.sub(&y);
            let dh = homotopy_h(&y).total_differential(kind);
            let hd = homotopy_h(&y.total_differential(kind));
            agree_below(&lhs, &dh.add(&hd), "p iota - id and [D, H]")
        },
    );
    advisory(&mut h);
    out.push(h);
    out
}

/// Recorded outcomes that do not gate the suite.
fn advisory(check: &mut IdentityCheck) {
    if check.outcome == Outcome::Fail {
        check.outcome = Outcome::Inconclusive;
    }
}

fn homotopy_suite(input: &ChernInput, cfg: &SuiteConfig) -> Vec<IdentityCheck> {
    homotopy_checks(input, cfg)
}

/// A random homogeneous endomorphism of degree 0 of the free module with
/// the given shifts, optionally strictly upper triangular.
pub fn random_matrix(
    algebra: &CdgCategory,
    shifts: &ShiftTuple,
    rng: &mut ChaCha8Rng,
    upper: bool,
) -> MatrixHom {
    let l = shifts.len();
    let mut m = MatrixHom::zero(shifts.clone(), shifts.clone(), 0);
    for i in 0..l {
        for j in 0..l {
            if upper && i >= j {
                continue;
            }
            let d = m.entry_degree(i, j);
            let mut v = SparseVec::zero();
            for k in
                (0..algebra.dim() as u32).filter(|&k| algebra.grading().same(algebra.degree(k), d))
            {
                let c = rng.gen_range(-2i64..=2);
                if c != 0 {
                    v.add_term(k, rat(c));
                }
            }
            m.set(i, j, v);
        }
    }
    m
}

fn tr0_checks(input: &ChernInput, cfg: &SuiteConfig) -> Vec<IdentityCheck> {
    let a = &input.algebra;
    let mut out = Vec::new();
    for size in [2usize, 3] {
        let shifts = ShiftTuple::new(vec![0; size]).expect("nonempty");
        out.push(sampled(
            format!("(tr 0) vanishing for strictly upper triangular {size}x{size}"),
            cfg.samples.min(20),
            |i| {
                let mut rng =
                    ChaCha8Rng::seed_from_u64(cfg.seed ^ (i as u64) ^ ((size as u64) << 32));
                let phi = random_matrix(a, &shifts, &mut rng, true);
                let others: Vec<MatrixHom> = (0..2)
                    .map(|_| random_matrix(a, &shifts, &mut rng, false))
                    .collect();
                for m in [size, size + 1] {
                    for pos in 0..=others.len() {
                        let mut factors = others.clone();
                        for _ in 0..m {
                            factors.insert(pos, phi.clone());
                        }
                        let t = generalized_trace(a, &factors, false).map_err(|e| e.to_string())?;
                        if !t.is_empty() {
                            return Err(format!(
                                "m = {m}, position {pos}: {} nonzero tensors",
                                t.len()
                            ));
                        }
                    }
                }
                Ok(())
            },
        ));
    }
    out
}

fn trace_suite(input: &ChernInput, cfg: &SuiteConfig) -> Vec<IdentityCheck> {
    let kind = DifferentialKind::Second;
    let m0 = input.mat.untwisted();
    let mat = &input.mat;
    let draw = |i: usize, mode| {
        random_chain(
            m0,
            mode,
            length_for(i, 3),
            None,
            cfg.seed.wrapping_add(1000 + i as u64),
            3,
        )
    };
    let samples = cfg.samples.min(50);
    let mut out = tr0_checks(input, cfg);
    out.push(sampled(
        "graded cyclic symmetry: Tr t = t Tr",
        samples,
        |i| {
            let c = draw(i, Normalization::Unnormalized);
            let lhs = trace_chain(mat, &cyclic_t(&c), Normalization::Unnormalized);
            let rhs = cyclic_t(&trace_chain(mat, &c, Normalization::Unnormalized));
            zero(&lhs.sub(&rhs), "Tr t - t Tr")
        },
    ));
    out.push(sampled("Tr commutes with D", samples, |i| {
        let c = draw(i, Normalization::Normalized);
        let lhs = trace_chain(mat, &d_total(&c, kind), Normalization::Normalized);
        let rhs = d_total(&trace_chain(mat, &c, Normalization::Normalized), kind);
        zero(&lhs.sub(&rhs), "Tr D - D Tr")
    }));
    out.push(sampled("Tr commutes with B", samples, |i| {
        let c = draw(i, Normalization::Normalized);
        let lhs = trace_chain(mat, &connes_b(&c), Normalization::Normalized);
        let rhs = connes_b(&trace_chain(mat, &c, Normalization::Normalized));
        zero(&lhs.sub(&rhs), "Tr B - B Tr")
    }));
    out
}

/// Chain-map property of `(id, α)_*` on strata below the length cap.
pub fn twist_chain_map_check(input: &ChernInput, samples: usize, seed: u64) -> IdentityCheck {
    let kind = DifferentialKind::Second;
    let caps = TruncationCaps::new(input.caps.u_order, input.caps.max_length.min(6));
    let alpha = input.alpha_vec();
    let m0 = input.mat.untwisted();
    sampled("(id, alpha)_* is a chain map", samples, |i| {
        let x = random_series(
            &input.m_alpha,
            Normalization::Normalized,
            caps,
            2,
            seed ^ (i as u64 * 31337),
        );
        let lhs = twist_pushforward(m0, &alpha, &x).total_differential(kind);
        let rhs = twist_pushforward(m0, &alpha, &x.total_differential(kind));
        let below = TruncationCaps::new(caps.u_order, caps.max_length - 1);
        agree_below(
            &lhs.with_caps(below),
            &rhs.with_caps(below),
            "D twist and twist D",
        )
    })
}

fn cocycle_suite(input: &ChernInput) -> Vec<IdentityCheck> {
    let mut out = Vec::new();
    match chern_direct(input) {
        Ok(r) => {
            out.extend(r.report.checks.iter().cloned().map(|mut c| {
                c.name = format!("direct: {}", c.name);
                c
            }));
            out.push(single(
                "fault injection is detected",
                match inject_fault(&r.chain) {
                    Some(bad) => {
                        if verify_cocycle(&bad).passed() {
                            Err("perturbed chain passed".into())
                        } else {
                            Ok(())
                        }
                    }
                    None => Ok(()),
                },
            ));
        }
        Err(e) => out.push(single("direct", Err(e.to_string()))),
    }
    if input.finite_precondition().is_ok() {
        let caps = finite_caps(input);
        if let Ok(r) = chern_finite(&input.with_caps(caps)) {
            let full = r.report.cocycle.inconclusive() == 0 && r.report.cocycle.passed();
            out.push(single(
                format!(
                    "finite: cocycle with full coverage at caps ({}, {})",
                    caps.u_order, caps.max_length
                ),
                if full {
                    Ok(())
                } else {
                    Err("residual or inconclusive strata".into())
                },
            ));
        }
    }
    out.push(twist_chain_map_check(input, 10, 0));
    out
}

/// Caps that dominate the finite support: every `j_k ≤ l - 1`, so
/// `2n + J ≤ 2n + (2n + 1)(l - 1)`.
pub fn finite_caps(input: &ChernInput) -> TruncationCaps {
    let l = input.size();
    let u = input.caps.u_order.min(2);
    let n = u as usize;
    TruncationCaps::new(u, 2 * n + (2 * n + 1) * (l - 1))
}

/// Perturbs a single coefficient so that the cocycle check must notice:
/// the first term (in document order) whose own boundary is visible on a
/// conclusive stratum gets `+1`.
pub fn inject_fault(chain: &UChain) -> Option<UChain> {
    let caps = chain.caps();
    for (k, ck) in chain.coeffs() {
        for (w, _) in ck.terms() {
            if w.len() + 1 > caps.max_length && !chain.ledger().is_empty() {
                continue;
            }
            let single = BarChain::from_words(
                chain.ctx().clone(),
                chain.mode(),
                [(w.letters().to_vec(), rat(1))],
            )
            .ok()?;
            let mut probe = UChain::new(chain.ctx().clone(), chain.mode(), caps);
            probe.add_at(k, &single, "fault");
            if !verify_cocycle(&probe).passed() {
                let mut bad = chain.clone();
                bad.add_at(k, &single, "fault");
                return Some(bad);
            }
        }
    }
    None
}
