use curvchern::chern::{
    chern_direct, chern_finite, chern_oracle, compare, eta_pi, gamma_p, homologous, specialize_u0,
    witness_residual, ChernError, HomologousOutcome,
};
use curvchern::fixtures;
use curvchern::hochschild::{BarChain, Normalization, TruncationCaps, UChain};
use curvchern::nonunital::{semifunctor_from_summand, IotaReading};
use curvchern::scalar::rat;

#[test]
fn eta_pi_expansion_is_locked() {
    let f = fixtures::triangular();
    let ctx = &f.m_alpha;
    let pi = f.pi_vec();
    let caps = TruncationCaps::new(3, 8);
    let eta = eta_pi(ctx, &pi, caps);
    let mut lead = pi.scaled(&rat(2));
    lead.add_term(ctx.identity(0), rat(-1));
    let expect = |coeff: i64, tail: usize| {
        let mut c = BarChain::new(ctx.clone(), Normalization::Normalized);
        let mut factors = vec![lead.clone()];
        factors.extend(std::iter::repeat_n(pi.clone(), tail));
        c.add_tensor(&factors, &rat(coeff));
        c
    };
    let mut u0 = BarChain::new(ctx.clone(), Normalization::Normalized);
    u0.add_tensor(std::slice::from_ref(&pi), &rat(1));
    assert_eq!(eta.coeff(0), u0);
    assert_eq!(eta.coeff(1), expect(-1, 2));
    assert_eq!(eta.coeff(2), expect(6, 4));
    assert_eq!(eta.coeff(3), expect(-60, 6));
}

#[test]
fn gamma_p_coefficients() {
    let f = fixtures::exterior_summand();
    let s = semifunctor_from_summand(&f.mat, &f.m_alpha, &f.pi, &f.pi).unwrap();
    let g = gamma_p(&s.category, s.p, TruncationCaps::new(2, 8));
    let one = s.category.identity(s.p);
    assert_eq!(g.coeff(0).coeff(&[one]), rat(1));
    assert_eq!(g.coeff(1).coeff(&[one; 3]), rat(-2));
    assert_eq!(g.coeff(2).coeff(&[one; 5]), rat(12));
    // every higher term is degenerate
    let n = g.project(Normalization::Normalized);
    assert_eq!(n.u_powers(), vec![0]);
}

#[test]
fn oracle_matches_direct_on_every_fixture() {
    for (name, f) in fixtures::named() {
        let d = chern_direct(&f).unwrap();
        let o = chern_oracle(&f, IotaReading::Literal).unwrap();
        let cmp = compare(&d.chain, &o.chain);
        assert!(cmp.first.is_none(), "{name}: {:?}", cmp.first);
        assert_eq!(d.chain, o.chain, "{name}");
        assert!(d.passed() && o.passed(), "{name}: {:?}", o.report.checks);
    }
}

#[test]
fn finite_matches_direct_and_is_exact() {
    let f = fixtures::triangular().with_caps(TruncationCaps::new(2, 9));
    let fin = chern_finite(&f).unwrap();
    let dir = chern_direct(&f).unwrap();
    assert_eq!(fin.chain, dir.chain);
    assert!(fin.truncation().is_empty());
    assert_eq!(fin.report.cocycle.inconclusive(), 0);
    assert!(fin.report.cocycle.passed());
    assert!(matches!(
        chern_finite(&fixtures::mf()),
        Err(ChernError::PreconditionFailed(_))
    ));
}

#[test]
fn degenerate_values() {
    let one = fixtures::free_rank_one();
    for u in 0..4 {
        let r = chern_direct(&one.with_caps(TruncationCaps::new(u, 8))).unwrap();
        let unit = BarChain::from_words(
            one.algebra.clone(),
            Normalization::Normalized,
            [(vec![one.algebra.unit()], rat(1))],
        )
        .unwrap();
        assert_eq!(r.chain, UChain::constant(unit, r.chain.caps()));
    }
    assert!(chern_direct(&fixtures::curved_scalar())
        .unwrap()
        .chain
        .is_zero());
}

#[test]
fn u0_slice_is_the_twisted_trace() {
    for (name, f) in fixtures::named() {
        let r = chern_oracle(&f, IotaReading::Literal).unwrap();
        let u0 = specialize_u0(&r);
        assert_eq!(u0, r.chain.coeff(0), "{name}");
        assert!(
            r.report.checks.iter().any(|c| c.name.starts_with("u^0")),
            "{name}"
        );
    }
}

#[test]
fn homologous_one_p_and_eta() {
    let f = fixtures::exterior_summand().with_caps(TruncationCaps::new(2, 6));
    let caps = f.caps;
    let s = semifunctor_from_summand(&f.mat, &f.m_alpha, &f.pi, &f.pi).unwrap();
    let one_p = BarChain::from_words(
        s.category.clone(),
        Normalization::Normalized,
        [(vec![s.category.identity(s.p)], rat(1))],
    )
    .unwrap();
    let z = UChain::constant(one_p, caps);
    let eta = eta_pi(&f.m_alpha, &f.pi_vec(), caps);
    let mut z2 = UChain::new(s.category.clone(), Normalization::Normalized, caps);
    for (k, c) in eta.coeffs() {
        z2.add_at(k, &s.include_chain(c), "include");
    }
    let seeds = s.cross_seeds();
    match homologous(&z, &z2, caps, &seeds).unwrap() {
        HomologousOutcome::Witness(w) => assert!(witness_residual(&w, &z, &z2).is_zero()),
        other => panic!("{other:?}"),
    }
}

#[test]
fn homologous_k_additivity() {
    let f = fixtures::triangular().with_caps(TruncationCaps::new(2, 6));
    let id = curvchern::free_modules::MatrixHom::identity(&f.algebra, &f.shifts);
    let comp = id.sub(&f.pi).unwrap();
    let ch = |pi| chern_direct(&f.with_pi(pi).unwrap()).unwrap().chain;
    let z = ch(f.pi.clone()).add(&ch(comp));
    let z2 = ch(id);
    match homologous(&z, &z2, f.caps, &[]).unwrap() {
        HomologousOutcome::Witness(w) => assert!(witness_residual(&w, &z, &z2).is_zero()),
        other => panic!("{other:?}"),
    }
}

#[test]
fn homologous_trivial_and_not_closed() {
    let f = fixtures::triangular().with_caps(TruncationCaps::new(1, 4));
    let z = chern_direct(&f).unwrap().chain;
    assert!(
        matches!(homologous(&z, &z, f.caps, &[]).unwrap(), HomologousOutcome::Witness(w) if w.is_zero())
    );
    // p[p] is not closed: b(p[p]) = p p - p p = 0 but d contributes w[p] + p[w]
    let p = f.algebra.index_of("p").unwrap();
    let bad = BarChain::from_words(
        f.algebra.clone(),
        Normalization::Normalized,
        [(vec![p, p], rat(1))],
    )
    .unwrap();
    let zero = UChain::new(f.algebra.clone(), Normalization::Normalized, f.caps);
    assert!(matches!(
        homologous(&UChain::constant(bad, f.caps), &zero, f.caps, &[]).unwrap(),
        HomologousOutcome::NotClosed { .. }
    ));
}
