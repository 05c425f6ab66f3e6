//! Report assembly and rendering.
//!
//! The machine report is a single structured document whose bytes are a
//! pure function of the resolved configuration: field order is fixed,
//! floating-point values use shortest round-trip formatting, and nothing
//! time- or path-dependent is recorded.

use serde::Serialize;

use crate::config::RunConfig;
use crate::suites::{Bound, CheckRecord, Status};

/// Pass/fail/skip tallies.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skip: usize,
}

/// A complete run report: the resolved configuration followed by every
/// check record in canonical order.
#[derive(Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: RunConfig,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
}

impl Report {
    pub fn new(config: RunConfig, checks: Vec<CheckRecord>) -> Self {
        let summary = Summary {
            pass: checks.iter().filter(|c| c.status == Status::Pass).count(),
            fail: checks.iter().filter(|c| c.status == Status::Fail).count(),
            skip: checks.iter().filter(|c| c.status == Status::Skip).count(),
        };
        Report {
            tool: "cotlift",
            version: env!("CARGO_PKG_VERSION"),
            config,
            checks,
            summary,
        }
    }

    pub fn any_failed(&self) -> bool {
        self.summary.fail > 0
    }

    /// Deterministic machine rendering.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Aligned human rendering; failed checks also print their claim.
    pub fn to_human(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{:<6} {:<13} {:<24} {:>13} {:^5} {:>9} {:>6}\n",
            "status", "suite", "check", "observed", "bound", "tol", "points"
        ));
        for c in &self.checks {
            let status = match c.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Skip => "skip",
            };
            let bound = match c.bound {
                Bound::Upper => "<",
                Bound::Lower => ">",
            };
            if c.status == Status::Skip {
                out.push_str(&format!(
                    "{:<6} {:<13} {:<24} {:>13} {:^5} {:>9} {:>6}\n",
                    status, c.suite, c.name, "-", bound, format_tol(c.tol), "-"
                ));
                if let Some(reason) = &c.reason {
                    out.push_str(&format!("       ({reason})\n"));
                }
            } else {
                out.push_str(&format!(
                    "{:<6} {:<13} {:<24} {:>13} {:^5} {:>9} {:>6}\n",
                    status,
                    c.suite,
                    c.name,
                    format!("{:.3e}", c.observed),
                    bound,
                    format_tol(c.tol),
                    c.points
                ));
                if c.status == Status::Fail {
                    out.push_str(&format!("       claim: {}\n", c.claim));
                }
            }
        }
        out.push_str(&format!(
            "summary: {} pass, {} fail, {} skip\n",
            self.summary.pass, self.summary.fail, self.summary.skip
        ));
        out
    }
}

fn format_tol(t: f64) -> String {
    format!("{t:.0e}")
}
