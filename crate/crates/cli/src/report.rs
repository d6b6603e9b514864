use std::time::Duration;

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

/// How `measured` is compared with `tolerance`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Bound {
    /// pass iff `measured <= tolerance`
    AtMost,
    /// pass iff `measured > tolerance`
    Exceeds,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub measured: Option<f64>,
    pub tolerance: f64,
    pub bound: Bound,
    pub anchor: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl Check {
    pub fn at_most(name: &str, measured: f64, tolerance: f64, anchor: &str) -> Check {
        let ok = measured <= tolerance;
        Check {
            name: name.to_string(),
            status: if ok { Status::Pass } else { Status::Fail },
            measured: Some(measured),
            tolerance,
            bound: Bound::AtMost,
            anchor: anchor.to_string(),
            note: None,
        }
    }

    pub fn exceeds(name: &str, measured: f64, tolerance: f64, anchor: &str) -> Check {
        let ok = measured > tolerance;
        Check {
            name: name.to_string(),
            status: if ok { Status::Pass } else { Status::Fail },
            measured: Some(measured),
            tolerance,
            bound: Bound::Exceeds,
            anchor: anchor.to_string(),
            note: None,
        }
    }

    /// Exact check: measured is 0 on success.
    pub fn exact(name: &str, ok: bool, anchor: &str) -> Check {
        Check::at_most(name, if ok { 0.0 } else { 1.0 }, 0.0, anchor)
    }

    pub fn skip(name: &str, anchor: &str, why: impl Into<String>) -> Check {
        Check {
            name: name.to_string(),
            status: Status::Skip,
            measured: None,
            tolerance: 0.0,
            bound: Bound::AtMost,
            anchor: anchor.to_string(),
            note: Some(why.into()),
        }
    }

    pub fn errored(name: &str, anchor: &str, err: impl std::fmt::Display) -> Check {
        Check {
            name: name.to_string(),
            status: Status::Fail,
            measured: None,
            tolerance: 0.0,
            bound: Bound::AtMost,
            anchor: anchor.to_string(),
            note: Some(format!("error: {err}")),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Check {
        self.note = Some(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skip: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub suite: String,
    pub seed: u64,
    pub registry: String,
    pub grid_points: usize,
    pub window: [f64; 2],
    pub tol_scale: f64,
    pub checks: Vec<Check>,
    pub summary: Summary,
    /// Wall-clock time; kept out of the JSON so reports stay byte-identical.
    #[serde(skip)]
    pub duration: Duration,
}

impl SuiteReport {
    pub fn finish(&mut self) {
        let mut s = Summary::default();
        for c in &self.checks {
            match c.status {
                Status::Pass => s.pass += 1,
                Status::Fail => s.fail += 1,
                Status::Skip => s.skip += 1,
            }
        }
        self.summary = s;
    }

    pub fn all_passed(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
