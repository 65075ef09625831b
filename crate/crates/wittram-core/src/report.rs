//! Machine-checkable verdicts for the structural-identity verifiers.
//!
//! Every verifier resolves a named claim at concrete parameters to one of
//! three outcomes. `falsified` always carries a witness (a printable
//! element exhibiting the failure); `inconclusive-precision` means the
//! finite window could not separate the two sides and is never silently
//! coerced to a definite answer.

use serde::Serialize;
use std::collections::BTreeMap;
use std::time::Instant;

#[derive(Serialize, Clone, Copy, PartialEq, Eq, Debug)]
pub enum VerifierStatus {
    #[serde(rename = "verified")]
    Verified,
    #[serde(rename = "falsified")]
    Falsified,
    #[serde(rename = "inconclusive-precision")]
    InconclusivePrecision,
}

#[derive(Serialize, Clone, Copy, PartialEq, Eq, Debug)]
pub struct ReportParams {
    pub p: u64,
    pub e: u8,
    pub m: u8,
    pub q: u8,
    pub n: i64,
    pub prec: i64,
}

#[derive(Serialize, Clone, Debug)]
pub struct VerifierReport {
    pub claim: String,
    pub params: ReportParams,
    pub status: VerifierStatus,
    /// `log_p`-sizes of the groups entering the claim, keyed by role.
    pub dims: BTreeMap<String, u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub ms: u64,
}

impl VerifierReport {
    pub fn is_verified(&self) -> bool {
        self.status == VerifierStatus::Verified
    }
}

/// Accumulates a report while a verifier runs.
pub struct ReportBuilder {
    claim: String,
    params: ReportParams,
    dims: BTreeMap<String, u64>,
    witness: Option<String>,
    started: Instant,
}

impl ReportBuilder {
    pub fn new(claim: impl Into<String>, params: ReportParams) -> Self {
        ReportBuilder {
            claim: claim.into(),
            params,
            dims: BTreeMap::new(),
            witness: None,
            started: Instant::now(),
        }
    }

    pub fn dim(&mut self, key: impl Into<String>, log_size: u64) -> &mut Self {
        self.dims.insert(key.into(), log_size);
        self
    }

    pub fn witness(&mut self, w: impl Into<String>) -> &mut Self {
        self.witness = Some(w.into());
        self
    }

    pub fn finish(self, status: VerifierStatus) -> VerifierReport {
        VerifierReport {
            claim: self.claim,
            params: self.params,
            status,
            dims: self.dims,
            witness: if status == VerifierStatus::Falsified {
                self.witness
            } else {
                None
            },
            ms: self.started.elapsed().as_millis() as u64,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_serialization_shape() {
        let params = ReportParams {
            p: 2,
            e: 1,
            m: 2,
            q: 1,
            n: 3,
            prec: 12,
        };
        let mut b = ReportBuilder::new("v-r-sequence", params);
        b.dim("ker_r", 4).dim("sum", 4);
        let rep = b.finish(VerifierStatus::Verified);
        let json = serde_json::to_value(&rep).unwrap();
        assert_eq!(json["claim"], "v-r-sequence");
        assert_eq!(json["status"], "verified");
        assert_eq!(json["params"]["p"], 2);
        assert_eq!(json["dims"]["ker_r"], 4);
        assert!(json.get("witness").is_none());

        let mut b = ReportBuilder::new("x", params);
        b.witness("n=-3: V^1[ [1] ]");
        let rep = b.finish(VerifierStatus::Falsified);
        let json = serde_json::to_value(&rep).unwrap();
        assert_eq!(json["status"], "falsified");
        assert_eq!(json["witness"], "n=-3: V^1[ [1] ]");

        let rep = ReportBuilder::new("y", params).finish(VerifierStatus::InconclusivePrecision);
        assert_eq!(
            serde_json::to_value(&rep).unwrap()["status"],
            "inconclusive-precision"
        );
    }
}
