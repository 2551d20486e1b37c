//! Verification reports shared by the sweeps and the CLI.

use serde::Serialize;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub case: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CtxInfo {
    pub k: usize,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub schema: u32,
    pub theorem: String,
    pub ctx: CtxInfo,
    pub mode: String,
    pub cases: usize,
    pub resampled: usize,
    pub failures: Vec<Failure>,
}

impl VerifyReport {
    pub fn new(theorem: &str, k: usize, n: usize, mode: &str) -> Self {
        VerifyReport {
            schema: 1,
            theorem: theorem.into(),
            ctx: CtxInfo { k, n },
            mode: mode.into(),
            cases: 0,
            resampled: 0,
            failures: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.cases > 0
    }

    pub fn fail(&mut self, case: impl Into<String>, detail: impl Into<String>) {
        self.failures.push(Failure { case: case.into(), detail: detail.into() });
    }

    /// Folds per-case outcomes in case order.
    pub fn absorb(&mut self, outcomes: Vec<CaseOutcome>) {
        for o in outcomes {
            self.cases += 1;
            self.resampled += o.resampled;
            if let Some(f) = o.failure {
                self.failures.push(f);
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} at (k,n)=({},{}) [{}]: {} cases, {} failures",
            self.theorem,
            self.ctx.k,
            self.ctx.n,
            self.mode,
            self.cases,
            self.failures.len()
        )
    }
}

#[derive(Debug, Clone, Default)]
pub struct CaseOutcome {
    pub resampled: usize,
    pub failure: Option<Failure>,
}

impl CaseOutcome {
    pub fn ok(resampled: usize) -> Self {
        CaseOutcome { resampled, failure: None }
    }

    pub fn failed(case: impl Into<String>, detail: impl Into<String>, resampled: usize) -> Self {
        CaseOutcome { resampled, failure: Some(Failure { case: case.into(), detail: detail.into() }) }
    }
}
