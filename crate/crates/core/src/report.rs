//! Check results and suite reports.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// The statement holds trivially on this instance and says nothing.
    Vacuous,
    /// The parameters make the hypothesis unsatisfiable at this scale.
    Infeasible,
    /// A search budget ran out before the check could be decided.
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Vacuous => "vacuous",
            Status::Infeasible => "infeasible",
            Status::Skipped => "skipped",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub status: Status,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub margin: Option<f64>,
}

impl Check {
    pub fn new(id: impl Into<String>, status: Status, detail: impl Into<String>) -> Self {
        Check { id: id.into(), status, detail: detail.into(), margin: None }
    }

    pub fn from_bool(id: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        Self::new(id, if ok { Status::Pass } else { Status::Fail }, detail)
    }

    /// Maps a computation error to `Skipped` for budget overruns and `Fail`
    /// otherwise.
    pub fn from_error(id: impl Into<String>, err: &crate::Error) -> Self {
        let status = if err.is_budget() { Status::Skipped } else { Status::Fail };
        Self::new(id, status, err.to_string())
    }

    pub fn with_margin(mut self, margin: f64) -> Self {
        self.margin = Some(margin);
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(suite: impl Into<String>) -> Self {
        Report { suite: suite.into(), checks: Vec::new() }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    /// Sorts checks by id so that assembly order never shows in the output.
    pub fn sort(&mut self) {
        self.checks.sort_by(|a, b| a.id.cmp(&b.id));
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    pub fn has_failures(&self) -> bool {
        self.count(Status::Fail) > 0
    }

    pub fn has_skips(&self) -> bool {
        self.count(Status::Skipped) > 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn summary_table(&self) -> String {
        let width = self.checks.iter().map(|c| c.id.len()).max().unwrap_or(2).max(5);
        let mut out = format!("{:width$}  {:10}  detail\n", "check", "status");
        for c in &self.checks {
            let margin = c.margin.map(|m| format!(" [margin {m:.4}]")).unwrap_or_default();
            out.push_str(&format!("{:width$}  {:10}  {}{}\n", c.id, c.status.to_string(), c.detail, margin));
        }
        out.push_str(&format!(
            "{}: {} pass, {} fail, {} vacuous, {} infeasible, {} skipped\n",
            self.suite,
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Vacuous),
            self.count(Status::Infeasible),
            self.count(Status::Skipped)
        ));
        out
    }
}
