//! Verification reports shared by every suite.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    AtCap,
    Inconclusive,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::AtCap => "at-cap",
            Status::Inconclusive => "inconclusive",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub suite: String,
    pub instance: String,
    pub status: Status,
    pub f_order: Option<i64>,
    pub expected: Option<i64>,
    pub witness: Option<String>,
}

impl Record {
    pub fn new(suite: &str, instance: impl Into<String>, status: Status) -> Self {
        Record { suite: suite.to_string(), instance: instance.into(), status, f_order: None, expected: None, witness: None }
    }

    pub fn pass(suite: &str, instance: impl Into<String>) -> Self {
        Self::new(suite, instance, Status::Pass)
    }

    pub fn fail(suite: &str, instance: impl Into<String>, witness: impl Into<String>) -> Self {
        Self::new(suite, instance, Status::Fail).with_witness(witness)
    }

    pub fn check(suite: &str, instance: impl Into<String>, ok: bool, witness: impl FnOnce() -> String) -> Self {
        if ok {
            Self::pass(suite, instance)
        } else {
            Self::fail(suite, instance, witness())
        }
    }

    pub fn with_witness(mut self, w: impl Into<String>) -> Self {
        self.witness = Some(w.into());
        self
    }

    pub fn with_orders(mut self, found: Option<i64>, expected: i64) -> Self {
        self.f_order = found;
        self.expected = Some(expected);
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub records: Vec<Record>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Tally {
    pub pass: usize,
    pub fail: usize,
    pub at_cap: usize,
    pub inconclusive: usize,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, r: Record) {
        self.records.push(r);
    }

    pub fn extend(&mut self, other: Report) {
        self.records.extend(other.records);
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn tally(&self) -> Tally {
        let mut t = Tally::default();
        for r in &self.records {
            match r.status {
                Status::Pass => t.pass += 1,
                Status::Fail => t.fail += 1,
                Status::AtCap => t.at_cap += 1,
                Status::Inconclusive => t.inconclusive += 1,
            }
        }
        t
    }

    /// True when nothing failed and, unless relaxed, nothing hit a cap.
    pub fn all_pass(&self, allow_at_cap: bool) -> bool {
        let t = self.tally();
        t.fail == 0 && (allow_at_cap || (t.at_cap == 0 && t.inconclusive == 0))
    }

    pub fn failures(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| r.status != Status::Pass)
    }

    /// Deterministic order: by suite, then instance.
    pub fn sorted(mut self) -> Self {
        self.records.sort_by(|a, b| (&a.suite, &a.instance).cmp(&(&b.suite, &b.instance)));
        self
    }
}

impl fmt::Display for Tally {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} pass, {} fail, {} at-cap, {} inconclusive", self.pass, self.fail, self.at_cap, self.inconclusive)
    }
}
