//! Check results and their machine-readable form.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::series::WeightedSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// The check could not be carried out (budget, degenerate input).
    Skipped,
}

/// First coefficient at which two sides disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub coefficient_index: String,
    pub lhs: String,
    pub rhs: String,
}

/// One verified statement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub check_id: String,
    /// Short human description of the statement under test.
    pub paper_ref: String,
    pub params: BTreeMap<String, String>,
    pub n: Option<i64>,
    pub order: Option<u32>,
    pub status: Status,
    pub order_verified: Option<u32>,
    pub first_mismatch: Option<Mismatch>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub runtime_ms: Option<u64>,
}

impl Report {
    pub fn new(check_id: impl Into<String>, what: impl Into<String>) -> Self {
        Report {
            check_id: check_id.into(),
            paper_ref: what.into(),
            params: BTreeMap::new(),
            n: None,
            order: None,
            status: Status::Pass,
            order_verified: None,
            first_mismatch: None,
            note: None,
            runtime_ms: None,
        }
    }

    pub fn param(mut self, k: &str, v: impl ToString) -> Self {
        self.params.insert(k.to_string(), v.to_string());
        self
    }

    pub fn with_n(mut self, n: i64) -> Self {
        self.n = Some(n);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        let note = note.into();
        self.note = Some(match self.note.take() {
            Some(old) => format!("{old}; {note}"),
            None => note,
        });
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn fail(mut self, m: Option<Mismatch>) -> Self {
        self.status = Status::Fail;
        if self.first_mismatch.is_none() {
            self.first_mismatch = m;
        }
        self
    }

    pub fn skipped(mut self, why: impl Into<String>) -> Self {
        self.status = Status::Skipped;
        self.with_note(why)
    }

    /// Pass iff `lhs == rhs` as truncated series and the common order reaches
    /// `need`.
    pub fn compare(mut self, lhs: &WeightedSeries, rhs: &WeightedSeries, need: u32) -> Self {
        let order = lhs.order().min(rhs.order());
        self.order.get_or_insert(need);
        self.order_verified = Some(order);
        if let Some((m, a, b)) = lhs.first_difference(rhs) {
            let idx = lhs.format_monomial(&m);
            return self.fail(Some(Mismatch {
                coefficient_index: idx,
                lhs: a.to_string(),
                rhs: b.to_string(),
            }));
        }
        if order < need {
            return self.fail(None).with_note(format!("only order {order} available, {need} required"));
        }
        self
    }

    /// Pass iff `res` vanishes through weight `need`.
    pub fn zero(self, res: &WeightedSeries, need: u32) -> Self {
        let z = WeightedSeries::zero(res.table(), res.order()).with_pi_power(res.pi_power());
        self.compare(res, &z, need)
    }

    /// Pass iff the scalars agree.
    pub fn equal<T: PartialEq + ToString>(self, what: &str, lhs: &T, rhs: &T) -> Self {
        if lhs == rhs {
            self
        } else {
            self.fail(Some(Mismatch {
                coefficient_index: what.to_string(),
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
            }))
        }
    }

    /// Fold another report's outcome into this one.
    pub fn absorb(mut self, other: &Report) -> Self {
        match other.status {
            Status::Pass => self,
            Status::Skipped => {
                if self.status == Status::Pass {
                    self.status = Status::Skipped;
                }
                self.with_note(format!("{} skipped", other.check_id))
            }
            Status::Fail => {
                let m = other.first_mismatch.clone().map(|mut m| {
                    m.coefficient_index = format!("{}: {}", other.check_id, m.coefficient_index);
                    m
                });
                self.fail(m)
            }
        }
    }
}

/// The output of a suite run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportBundle {
    pub version: String,
    pub suite: String,
    pub config: BTreeMap<String, String>,
    pub cases: Vec<Report>,
}

impl ReportBundle {
    pub fn new(suite: &str, config: BTreeMap<String, String>, mut cases: Vec<Report>) -> Self {
        cases.sort_by(|a, b| a.check_id.cmp(&b.check_id));
        ReportBundle {
            version: env!("CARGO_PKG_VERSION").to_string(),
            suite: suite.to_string(),
            config,
            cases,
        }
    }

    pub fn passed(&self) -> usize {
        self.cases.iter().filter(|c| c.passed()).count()
    }

    pub fn failed(&self) -> usize {
        self.cases.len() - self.passed()
    }

    pub fn all_passed(&self) -> bool {
        self.failed() == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    pub const CSV_HEADER: [&'static str; 9] = [
        "check_id",
        "paper_ref",
        "params",
        "status",
        "order_verified",
        "mismatch_index",
        "mismatch_lhs",
        "mismatch_rhs",
        "runtime_ms",
    ];

    /// One row per case, in `CSV_HEADER` order.
    pub fn csv_rows(&self) -> Vec<[String; 9]> {
        self.cases
            .iter()
            .map(|c| {
                let params = c
                    .params
                    .iter()
                    .map(|(k, v)| format!("{k}={v}"))
                    .collect::<Vec<_>>()
                    .join(";");
                let (i, l, r) = match &c.first_mismatch {
                    Some(m) => (m.coefficient_index.clone(), m.lhs.clone(), m.rhs.clone()),
                    None => Default::default(),
                };
                [
                    c.check_id.clone(),
                    c.paper_ref.clone(),
                    params,
                    format!("{:?}", c.status).to_lowercase(),
                    c.order_verified.map(|o| o.to_string()).unwrap_or_default(),
                    i,
                    l,
                    r,
                    c.runtime_ms.map(|o| o.to_string()).unwrap_or_default(),
                ]
            })
            .collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.cases {
            let tag = match c.status {
                Status::Pass => "ok  ",
                Status::Fail => "FAIL",
                Status::Skipped => "skip",
            };
            out.push_str(&format!("{tag} {}", c.check_id));
            if let Some(o) = c.order_verified {
                out.push_str(&format!(" (order {o})"));
            }
            if let Some(m) = &c.first_mismatch {
                out.push_str(&format!(" at {}: {} != {}", m.coefficient_index, m.lhs, m.rhs));
            }
            if let Some(n) = &c.note {
                out.push_str(&format!(" [{n}]"));
            }
            out.push('\n');
        }
        out.push_str(&format!("{} passed / {} failed\n", self.passed(), self.failed()));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::VariableTable;

    #[test]
    fn compare_reports_first_difference() {
        let tab = VariableTable::unit_weights(&["x"]);
        let a = WeightedSeries::named(&tab, "x", 4);
        let b = &a + &a.pow(2);
        let r = Report::new("c", "demo").compare(&a, &b, 4);
        assert_eq!(r.status, Status::Fail);
        let m = r.first_mismatch.unwrap();
        assert_eq!((m.lhs.as_str(), m.rhs.as_str()), ("0", "1"));
        assert!(Report::new("c", "demo").compare(&a, &a, 4).passed());
        assert!(!Report::new("c", "demo").compare(&a, &a, 5).passed());
    }

    #[test]
    fn bundle_round_trip() {
        let cases = vec![Report::new("b", "x").param("n", 2), Report::new("a", "y").fail(None)];
        let b = ReportBundle::new("demo", BTreeMap::new(), cases);
        assert_eq!(b.cases[0].check_id, "a");
        let j = b.to_json();
        assert_eq!(ReportBundle::from_json(&j).unwrap().to_json(), j);
        assert!(b.to_text().ends_with("1 passed / 1 failed\n"));
        assert_eq!(b.csv_rows().len(), 2);
    }
}
