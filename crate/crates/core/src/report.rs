//! The report document printed by `curvchern chern`.
//!
//! Output is byte-stable: chain terms follow the canonical record order,
//! ledger entries are sorted and every map is ordered.

use std::fmt::Write as _;

use serde::Serialize;

use crate::chern::{
    CertificationReport, ChernResult, HomologousOutcome, Method, Outcome, StratumStatus,
};
use crate::hochschild::{TruncationCaps, TruncationEntry};
use crate::manifest::{chain_records, ChainRecord};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessSection {
    /// what the result was compared against
    pub against: String,
    /// `witness`, `not_found_within_caps` or `not_closed`
    pub outcome: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    /// `w` with `(D + uB)(w) = result - other`
    pub terms: Vec<ChainRecord>,
}

impl WitnessSection {
    pub fn new(against: impl Into<String>, outcome: &HomologousOutcome) -> Self {
        let against = against.into();
        match outcome {
            HomologousOutcome::Witness(w) => WitnessSection {
                against,
                outcome: "witness".into(),
                detail: None,
                terms: chain_records(w),
            },
            HomologousOutcome::NotFoundWithinCaps { candidates } => WitnessSection {
                against,
                outcome: "not_found_within_caps".into(),
                detail: Some(format!("{candidates} candidate words searched")),
                terms: Vec::new(),
            },
            HomologousOutcome::NotClosed { u_power, length } => WitnessSection {
                against,
                outcome: "not_closed".into(),
                detail: Some(format!(
                    "difference is not closed at u^{u_power}, length {length}"
                )),
                terms: Vec::new(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportDocument {
    pub method: Method,
    pub caps: TruncationCaps,
    pub terms: Vec<ChainRecord>,
    /// absent only under `--no-verify`
    pub report: Option<CertificationReport>,
    pub truncation: Vec<TruncationEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<WitnessSection>,
}

impl ReportDocument {
    pub fn new(result: &ChernResult, verified: bool) -> Self {
        let mut truncation = result.truncation().to_vec();
        truncation.sort();
        ReportDocument {
            method: result.method,
            caps: result.chain.caps(),
            terms: chain_records(&result.chain),
            report: verified.then(|| result.report.clone()),
            truncation,
            witnesses: None,
        }
    }

    pub fn with_witnesses(mut self, section: WitnessSection) -> Self {
        self.witnesses = Some(section);
        self
    }

    /// Exit status contribution: no conclusive check failed.
    pub fn passed(&self) -> bool {
        self.report.as_ref().is_none_or(|r| r.passed())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let caps = self.caps;
        let _ = writeln!(out, "method: {}", self.method);
        let _ = writeln!(
            out,
            "caps: u_order {}, max_length {}",
            caps.u_order, caps.max_length
        );
        let _ = writeln!(out, "terms: {}", self.terms.len());
        let mut current = None;
        for t in &self.terms {
            if current != Some(t.u) {
                let _ = writeln!(out, "  u^{}:", t.u);
                current = Some(t.u);
            }
            let _ = writeln!(out, "    {} {}[{}]", t.coeff, t.a0, t.bar.join("|"));
        }
        match &self.report {
            None => {
                let _ = writeln!(out, "certification: skipped (--no-verify)");
            }
            Some(r) => {
                let _ = writeln!(
                    out,
                    "certification: {}",
                    if r.passed() { "pass" } else { "FAIL" }
                );
                for c in &r.checks {
                    let _ = write!(
                        out,
                        "  {:<13} {} ({} strata checked, {} inconclusive)",
                        outcome_label(c.outcome),
                        c.name,
                        c.strata_checked,
                        c.strata_inconclusive
                    );
                    if let Some(d) = &c.detail {
                        let _ = write!(out, ": {d}");
                    }
                    out.push('\n');
                }
                if let Some(s) = r.cocycle.first_failure() {
                    let _ = writeln!(
                        out,
                        "  first nonzero stratum: u^{}, length {}: {}",
                        s.u_power,
                        s.length,
                        s.residual.as_deref().unwrap_or("")
                    );
                }
                let inconclusive = r
                    .cocycle
                    .strata
                    .iter()
                    .filter(|s| s.status == StratumStatus::Inconclusive)
                    .count();
                let _ = writeln!(
                    out,
                    "  cocycle strata: {} conclusive, {} inconclusive",
                    r.cocycle.conclusive(),
                    inconclusive
                );
            }
        }
        let _ = writeln!(out, "truncation ledger: {} entries", self.truncation.len());
        for e in &self.truncation {
            let _ = writeln!(
                out,
                "  {} dropped {} term(s) at u^{} from length {}",
                e.operator, e.terms_dropped, e.u_power, e.length
            );
        }
        if let Some(w) = &self.witnesses {
            let _ = writeln!(out, "homology against {}: {}", w.against, w.outcome);
            if let Some(d) = &w.detail {
                let _ = writeln!(out, "  {d}");
            }
            for t in &w.terms {
                let _ = writeln!(out, "  u^{} {} {}[{}]", t.u, t.coeff, t.a0, t.bar.join("|"));
            }
        }
        out
    }
}

pub fn outcome_label(o: Outcome) -> &'static str {
    match o {
        Outcome::Pass => "pass",
        Outcome::Fail => "FAIL",
        Outcome::Inconclusive => "inconclusive",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chern::chern_direct;
    use crate::fixtures;

    #[test]
    fn json_is_stable_and_lists_the_u0_slice() {
        let f = fixtures::triangular();
        let a = ReportDocument::new(&chern_direct(&f).unwrap(), true).to_json();
        let b = ReportDocument::new(&chern_direct(&f).unwrap(), true).to_json();
        assert_eq!(a, b);
        let v: serde_json::Value = serde_json::from_str(&a).unwrap();
        assert!(v["terms"].as_array().unwrap().iter().any(|t| t["u"] == 0));
        assert_eq!(v["method"], "direct");
    }

    #[test]
    fn no_verify_drops_the_report() {
        let r = chern_direct(&fixtures::triangular()).unwrap();
        let doc = ReportDocument::new(&r, false);
        assert!(doc.report.is_none() && doc.passed());
        assert!(doc.to_text().contains("skipped"));
    }
}
