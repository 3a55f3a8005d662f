//! The categorical route `Tr ∘ (id, α)_* ∘ quot ∘ F_*(u)` applied to `γ_P`.

use super::verify::{certify, compare_checks, IdentityCheck};
use super::{eta_pi, gamma_p, twist_and_trace, ChernError, ChernInput, ChernResult, Method};
use crate::free_modules::generalized_trace;
use crate::hochschild::{BarChain, Normalization, UChain};
use crate::nonunital::{adjoin_units, f_star_u, semifunctor_from_summand, IotaReading, Summand};
use crate::scalar::sign;

/// Intermediate stages of the oracle, kept for inspection and tests.
#[derive(Debug, Clone)]
pub struct OracleTrace {
    pub summand: Summand,
    pub gamma: UChain,
    /// `quot(F_*(u)(γ_P))` over `End(N_α)`
    pub pushed: UChain,
    pub eta: UChain,
}

pub fn oracle_chain(
    input: &ChernInput,
    reading: IotaReading,
) -> Result<(UChain, OracleTrace), ChernError> {
    let caps = input.caps;
    if 2 * caps.u_order as usize > caps.max_length {
        return Err(ChernError::CapsExceeded(format!(
            "gamma_P up to u^{} needs max_length {} but the cap is {}",
            caps.u_order,
            2 * caps.u_order,
            caps.max_length
        )));
    }
    let summand = semifunctor_from_summand(&input.mat, &input.m_alpha, &input.pi, &input.pi)?;
    let gamma = gamma_p(&summand.category, summand.p, caps);
    let src = adjoin_units(&summand.category);
    let tgt = adjoin_units(&input.m_alpha);
    let pushed =
        f_star_u(&summand.functor, &src, &tgt, &gamma, reading)?.project(Normalization::Normalized);
    let eta = eta_pi(&input.m_alpha, &input.pi_vec(), caps);
    let chain = twist_and_trace(&input.mat, &input.alpha_vec(), &pushed);
    Ok((
        chain,
        OracleTrace {
            summand,
            gamma,
            pushed,
            eta,
        },
    ))
}

/// `Σ_j (-1)^j Tr(π[α^j])` up to `max_length`, evaluated factor by factor.
pub fn u0_reference(input: &ChernInput) -> BarChain {
    let mut out = BarChain::new(input.algebra.clone(), Normalization::Normalized);
    let js = if input.alpha.is_zero() {
        0
    } else {
        input.caps.max_length
    };
    for j in 0..=js {
        let mut factors = vec![input.pi.clone()];
        factors.extend(std::iter::repeat_n(input.alpha.clone(), j));
        for (w, x) in generalized_trace(&input.algebra, &factors, true).expect("square factors") {
            out.add_word(w, x * sign(j as i64));
        }
    }
    out
}

pub fn chern_oracle(input: &ChernInput, reading: IotaReading) -> Result<ChernResult, ChernError> {
    let (chain, trace) = oracle_chain(input, reading)?;
    let mut checks: Vec<IdentityCheck> = Vec::new();
    checks.push(compare_checks(
        "quot(F_*(u)(gamma_P)) = eta_pi",
        &trace.pushed,
        &trace.eta,
    ));
    let u0 = UChain::constant(u0_reference(input), input.caps);
    let slice = UChain::constant(chain.coeff(0), input.caps);
    checks.push(compare_checks(
        "u^0 slice = sum_j (-1)^j Tr(pi[alpha^j])",
        &slice,
        &u0,
    ));
    let report = certify(&chain, checks);
    Ok(ChernResult {
        chain,
        method: Method::Oracle,
        report,
    })
}
