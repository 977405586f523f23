//! Pass/fail records for checked claims.

use std::fmt;

use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClaimResult {
    pub id: String,
    pub passed: bool,
    /// Threshold minus worst measured deviation; negative on failure.
    pub slack: f64,
    pub detail: String,
    /// Input that broke the claim; always present when `passed` is false.
    pub witness: Option<String>,
}

impl ClaimResult {
    /// Claim that `measured ≤ threshold`.
    pub fn bound(id: impl Into<String>, measured: f64, threshold: f64, witness: Option<String>) -> Self {
        let passed = measured <= threshold;
        ClaimResult {
            id: id.into(),
            passed,
            slack: threshold - measured,
            detail: String::new(),
            witness: if passed { None } else { Some(witness.unwrap_or_else(|| "unrecorded".into())) },
        }
    }

    pub fn flag(id: impl Into<String>, passed: bool, witness: Option<String>) -> Self {
        ClaimResult {
            id: id.into(),
            passed,
            slack: if passed { 0.0 } else { -1.0 },
            detail: String::new(),
            witness: if passed { None } else { Some(witness.unwrap_or_else(|| "unrecorded".into())) },
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct VerificationReport {
    pub config: String,
    pub claims: Vec<ClaimResult>,
}

impl VerificationReport {
    pub fn new(config: impl Into<String>) -> Self {
        VerificationReport { config: config.into(), claims: Vec::new() }
    }

    pub fn push(&mut self, claim: ClaimResult) {
        self.claims.push(claim);
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.claims.extend(other.claims);
    }

    /// Same report with every claim id behind `prefix.`.
    pub fn prefixed(mut self, prefix: &str) -> Self {
        for c in &mut self.claims {
            c.id = format!("{prefix}.{}", c.id);
        }
        self
    }

    pub fn passed(&self) -> bool {
        self.claims.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ClaimResult> {
        self.claims.iter().filter(|c| !c.passed)
    }

    pub fn get(&self, id: &str) -> Option<&ClaimResult> {
        self.claims.iter().find(|c| c.id == id)
    }

    /// First 12 hex digits of SHA-256 over the configuration snapshot.
    pub fn config_hash(&self) -> String {
        config_hash(&self.config)
    }
}

pub fn config_hash(config: &str) -> String {
    let digest = Sha256::digest(config.as_bytes());
    digest.iter().take(6).map(|b| format!("{b:02x}")).collect()
}

/// One claim per line: `id, PASS|FAIL, slack=…, cfg=…[, detail][, witness=…]`.
impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let hash = self.config_hash();
        for c in &self.claims {
            write!(f, "{}, {}, slack={:.6e}, cfg={}", c.id, if c.passed { "PASS" } else { "FAIL" }, c.slack, hash)?;
            if !c.detail.is_empty() {
                write!(f, ", {}", c.detail)?;
            }
            if let Some(w) = &c.witness {
                write!(f, ", witness={w}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failed_claims_carry_witness() {
        let c = ClaimResult::bound("x", 2.0, 1.0, None);
        assert!(!c.passed);
        assert_eq!(c.slack, -1.0);
        assert!(c.witness.is_some());
        let c = ClaimResult::bound("x", 0.5, 1.0, Some("ignored".into()));
        assert!(c.passed && c.witness.is_none());
    }

    #[test]
    fn line_format() {
        let mut r = VerificationReport::new("cfg");
        r.push(ClaimResult::bound("a.b", 0.0, 1e-9, None).with_detail("n=3"));
        r.push(ClaimResult::flag("c", false, Some("f=1".into())));
        let text = r.to_string();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[0].starts_with("a.b, PASS, slack=1.000000e-9, cfg="));
        assert!(lines[0].ends_with(", n=3"));
        assert!(lines[1].contains("FAIL") && lines[1].ends_with("witness=f=1"));
        assert!(!r.passed());
        assert_eq!(r.config_hash().len(), 12);
    }
}
