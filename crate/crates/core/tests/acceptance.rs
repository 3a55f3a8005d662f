//! Acceptance gate: one PASS/FAIL line per criterion.

use std::process::Command;
use std::time::{Duration, Instant};

use curvchern::algebra::DescriptorError;
use curvchern::chern::{
    chern_direct, chern_finite, chern_oracle, compare, eta_pi, gamma_p, homologous, specialize_u0,
    u0_reference, witness_residual, HomologousOutcome, IdentityCheck, Outcome,
};
use curvchern::fixtures::{self, MUTANTS};
use curvchern::free_modules::MatrixHom;
use curvchern::hochschild::{BarChain, Normalization, TruncationCaps, UChain};
use curvchern::manifest::ManifestError;
use curvchern::nonunital::{semifunctor_from_summand, IotaReading};
use curvchern::scalar::{rat, SparseVec};
use curvchern::suites::{finite_caps, run_suite, Suite, SuiteConfig};

type Verdict = Result<String, String>;

/// `(id, title, check, time budget)`
type Criterion = (&'static str, &'static str, fn() -> Verdict, Duration);

fn ensure(ok: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(why())
    }
}

/// Runs `suite` on the named fixtures; every check must pass and the listed
/// ones must be conclusive.
fn suite_gate(
    suite: Suite,
    samples: usize,
    names: &[&str],
    must_pass: impl Fn(&IdentityCheck) -> bool,
) -> Verdict {
    let cfg = SuiteConfig {
        samples,
        ..SuiteConfig::default()
    };
    let mut count = 0;
    for (name, input) in fixtures::named() {
        if !names.is_empty() && !names.contains(&name) {
            continue;
        }
        let report = run_suite(&input, suite, &cfg);
        for c in &report.checks {
            count += 1;
            ensure(c.outcome != Outcome::Fail, || {
                format!("{name}: {} failed: {:?}", c.name, c.detail)
            })?;
            ensure(!must_pass(c) || c.outcome == Outcome::Pass, || {
                format!("{name}: {} is {:?}: {:?}", c.name, c.outcome, c.detail)
            })?;
        }
    }
    Ok(format!("{count} checks"))
}

fn ac1() -> Verdict {
    for name in ["exterior_summand", "mf", "triangular"] {
        fixtures::manifest(name)
            .algebra()
            .map_err(|e| format!("{name}: {e}"))?;
    }
    for m in MUTANTS {
        match m.manifest().algebra() {
            Err(ManifestError::Descriptor(DescriptorError::Invalid(e))) => {
                ensure(e.violations.iter().any(|v| m.matches(v)), || {
                    format!("{}: wrong witness: {e}", m.name)
                })?
            }
            Ok(_) => return Err(format!("mutant {} validated", m.name)),
            Err(e) => return Err(format!("mutant {}: {e}", m.name)),
        }
    }
    Ok(format!(
        "3 algebras valid, {} mutants rejected with witnesses",
        MUTANTS.len()
    ))
}

fn ac2() -> Verdict {
    suite_gate(Suite::Operators, 100, &[], |_| true)
}

fn ac3() -> Verdict {
    suite_gate(Suite::Trace, 100, &[], |_| true)
}

fn ac4() -> Verdict {
    let f = fixtures::triangular();
    let ctx = &f.m_alpha;
    let pi = f.pi_vec();
    let eta = eta_pi(ctx, &pi, TruncationCaps::new(3, 8));
    let mut lead = pi.scaled(&rat(2));
    lead.add_term(ctx.identity(0), rat(-1));
    let expect = |coeff: i64, tail: usize| {
        let mut c = BarChain::new(ctx.clone(), Normalization::Normalized);
        let mut factors = vec![if tail == 0 { pi.clone() } else { lead.clone() }];
        factors.extend(std::iter::repeat_n(pi.clone(), tail));
        c.add_tensor(&factors, &rat(coeff));
        c
    };
    for (k, coeff, tail) in [(0, 1, 0), (1, -1, 2), (2, 6, 4), (3, -60, 6)] {
        ensure(eta.coeff(k) == expect(coeff, tail), || {
            format!("eta_pi differs at u^{k}")
        })?;
    }
    let s = fixtures::exterior_summand();
    let summand =
        semifunctor_from_summand(&s.mat, &s.m_alpha, &s.pi, &s.pi).map_err(|e| e.to_string())?;
    let g = gamma_p(&summand.category, summand.p, TruncationCaps::new(2, 8));
    let one = summand.category.identity(summand.p);
    for (k, c) in [(0u32, 1i64), (1, -2), (2, 12)] {
        let word = vec![one; 2 * k as usize + 1];
        ensure(g.coeff(k).coeff(&word) == rat(c), || {
            format!("gamma_P coefficient at u^{k}")
        })?;
    }
    Ok("eta_pi: 1, -1, 6, -60; gamma_P: 1, -2, 12".into())
}

fn ac5() -> Verdict {
    suite_gate(Suite::Lemma, 1, &["exterior_summand", "mf"], |_| true)
}

fn ac6() -> Verdict {
    suite_gate(Suite::Homotopy, 100, &[], |c| !c.name.contains("recorded"))
}

fn ac7() -> Verdict {
    let mut strata = 0;
    for (name, f) in fixtures::named() {
        let d = chern_direct(&f).map_err(|e| format!("{name}: {e}"))?;
        let o = chern_oracle(&f, IotaReading::Literal).map_err(|e| format!("{name}: {e}"))?;
        let cmp = compare(&d.chain, &o.chain);
        ensure(cmp.first.is_none(), || format!("{name}: {:?}", cmp.first))?;
        ensure(d.chain == o.chain, || format!("{name}: chains differ"))?;
        strata += cmp.checked;
    }
    let t = fixtures::triangular();
    for f in [t.clone(), t.with_caps(finite_caps(&t))] {
        let fin = chern_finite(&f).map_err(|e| e.to_string())?;
        let dir = chern_direct(&f).map_err(|e| e.to_string())?;
        let cmp = compare(&fin.chain, &dir.chain);
        ensure(cmp.first.is_none(), || {
            format!("finite vs direct at {:?}: {:?}", f.caps, cmp.first)
        })?;
    }
    Ok(format!(
        "oracle = direct on {strata} strata; finite = direct"
    ))
}

fn ac8() -> Verdict {
    let summary = suite_gate(Suite::Cocycle, 20, &[], |c| !c.name.starts_with("direct"))?;
    let report = run_suite(
        &fixtures::triangular(),
        Suite::Cocycle,
        &SuiteConfig::default(),
    );
    let finite = report.checks.iter().find(|c| c.name.starts_with("finite"));
    ensure(finite.is_some_and(|c| c.outcome == Outcome::Pass), || {
        "finite method lacks full coverage".into()
    })?;
    Ok(summary)
}

fn ac9() -> Verdict {
    let one = fixtures::free_rank_one();
    let unit = BarChain::from_words(
        one.algebra.clone(),
        Normalization::Normalized,
        [(vec![one.algebra.unit()], rat(1))],
    )
    .map_err(|e| e.to_string())?;
    for u in 0..=4 {
        let r =
            chern_direct(&one.with_caps(TruncationCaps::new(u, 8))).map_err(|e| e.to_string())?;
        ensure(
            r.chain == UChain::constant(unit.clone(), r.chain.caps()),
            || format!("Ch(free) at u-order {u}"),
        )?;
    }
    let cs = chern_direct(&fixtures::curved_scalar()).map_err(|e| e.to_string())?;
    ensure(cs.chain.is_zero(), || "curved scalar is nonzero".into())?;
    for (name, f) in fixtures::named() {
        let r = chern_direct(&f).map_err(|e| e.to_string())?;
        ensure(specialize_u0(&r) == u0_reference(&f), || {
            format!("{name}: u^0 slice")
        })?;
    }
    Ok("Ch(free) = 1, curved scalar = 0, u^0 slices match".into())
}

fn ac10() -> Verdict {
    let caps = TruncationCaps::new(2, 6);
    let f = fixtures::exterior_summand().with_caps(caps);
    let s =
        semifunctor_from_summand(&f.mat, &f.m_alpha, &f.pi, &f.pi).map_err(|e| e.to_string())?;
    let one_p = BarChain::from_words(
        s.category.clone(),
        Normalization::Normalized,
        [(vec![s.category.identity(s.p)], rat(1))],
    )
    .map_err(|e| e.to_string())?;
    let z = UChain::constant(one_p, caps);
    let eta = eta_pi(&f.m_alpha, &f.pi_vec(), caps);
    let mut z2 = UChain::new(s.category.clone(), Normalization::Normalized, caps);
    for (k, c) in eta.coeffs() {
        z2.add_at(k, &s.include_chain(c), "include");
    }
    let witness = |z: &UChain, z2: &UChain, seeds: &[(u32, u32, SparseVec)]| match homologous(
        z, z2, caps, seeds,
    )
    .map_err(|e| e.to_string())?
    {
        HomologousOutcome::Witness(w) => {
            ensure(witness_residual(&w, z, z2).is_zero(), || {
                "witness does not bound".into()
            })?;
            Ok(w.num_terms())
        }
        other => Err(format!("{other:?}")),
    };
    let seeds = s.cross_seeds();
    let a = witness(&z, &z2, &seeds).map_err(|e| format!("(a) {e}"))?;

    let t = fixtures::triangular().with_caps(caps);
    let id = MatrixHom::identity(&t.algebra, &t.shifts);
    let comp = id.sub(&t.pi).map_err(|e| e.to_string())?;
    let ch = |pi: MatrixHom| -> Result<UChain, String> {
        let input = t.with_pi(pi).map_err(|e| e.to_string())?;
        Ok(chern_direct(&input).map_err(|e| e.to_string())?.chain)
    };
    let lhs = ch(t.pi.clone())?.add(&ch(comp)?);
    let b = witness(&lhs, &ch(id)?, &[]).map_err(|e| format!("(b) {e}"))?;
    Ok(format!("witnesses with {a} and {b} terms"))
}

fn ac11() -> Verdict {
    let bin = env!("CARGO_BIN_EXE_curvchern");
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");
    let mut runs = 0;
    for (name, _) in fixtures::MANIFESTS {
        let path = format!("{dir}/{name}.json");
        for method in ["direct", "oracle"] {
            let mut outputs = Vec::new();
            for threads in ["1", "2", "8"] {
                let out = Command::new(bin)
                    .args(["chern", &path, "--method", method, "--format", "json"])
                    .env("CURVCHERN_THREADS", threads)
                    .output()
                    .map_err(|e| e.to_string())?;
                ensure(out.status.success(), || {
                    format!("{name} {method}: exit {:?}", out.status.code())
                })?;
                outputs.push(out.stdout);
                runs += 1;
            }
            ensure(outputs.windows(2).all(|w| w[0] == w[1]), || {
                format!("{name} {method}: outputs differ")
            })?;
        }
    }
    Ok(format!("{runs} runs byte-identical"))
}

fn main() {
    let criteria: [Criterion; 11] = [
        (
            "AC1",
            "axiom suite and mutants",
            ac1,
            Duration::from_secs(1),
        ),
        ("AC2", "operator identities", ac2, Duration::from_secs(30)),
        ("AC3", "trace laws", ac3, Duration::from_secs(30)),
        ("AC4", "expansion locks", ac4, Duration::from_secs(1)),
        ("AC5", "strict-summand lemma", ac5, Duration::from_secs(60)),
        ("AC6", "homotopy identities", ac6, Duration::from_secs(60)),
        ("AC7", "oracle equality", ac7, Duration::from_secs(300)),
        ("AC8", "cocycle certification", ac8, Duration::from_secs(60)),
        ("AC9", "degenerate values", ac9, Duration::from_secs(1)),
        (
            "AC10",
            "homology-level checks",
            ac10,
            Duration::from_secs(120),
        ),
        (
            "AC11",
            "determinism across threads",
            ac11,
            Duration::from_secs(60),
        ),
    ];
    let mut failed = 0;
    for (id, title, run, budget) in criteria {
        let start = Instant::now();
        let verdict = run();
        let elapsed = start.elapsed();
        let (status, detail) = match verdict {
            Ok(d) if elapsed <= budget => ("PASS", d),
            Ok(d) => (
                "FAIL",
                format!("{d}; took {elapsed:.2?}, budget {budget:?}"),
            ),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("{id} {status}: {title} ({detail}) [{elapsed:.2?}]");
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
