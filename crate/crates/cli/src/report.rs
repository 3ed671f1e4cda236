//! Verification records and the versioned JSON report.

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA: &str = "ulamlab-report-v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// A printed closed form that disagrees with its independent reference.
    /// Reported, never counted as a failure.
    Discrepancy,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationRecord {
    pub check_id: String,
    pub status: Status,
    pub lhs: Value,
    pub rhs: Value,
    pub abs_err: Option<f64>,
    pub rel_err: Option<f64>,
    pub tolerance: f64,
    pub normalization: String,
    pub notes: String,
}

fn rel(lhs: f64, rhs: f64) -> Option<f64> {
    let d = (lhs - rhs).abs();
    if rhs == 0.0 {
        (d == 0.0).then_some(0.0)
    } else {
        Some(d / rhs.abs())
    }
}

impl VerificationRecord {
    /// Numeric comparison: pass iff `|lhs - rhs| <= tolerance`.
    pub fn numeric(check_id: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let abs_err = (lhs - rhs).abs();
        let status = if abs_err <= tolerance { Status::Pass } else { Status::Fail };
        VerificationRecord {
            check_id: check_id.into(),
            status,
            lhs: Value::from(lhs),
            rhs: Value::from(rhs),
            abs_err: Some(abs_err).filter(|e| e.is_finite()),
            rel_err: rel(lhs, rhs).filter(|e| e.is_finite()),
            tolerance,
            normalization: String::new(),
            notes: String::new(),
        }
    }

    /// Numeric comparison on relative error.
    pub fn relative(check_id: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let mut r = Self::numeric(check_id, lhs, rhs, tolerance);
        r.status = match r.rel_err {
            Some(e) if e <= tolerance => Status::Pass,
            _ => Status::Fail,
        };
        r.notes = "tolerance is relative".into();
        r
    }

    /// Exact equality of two printed values (rationals as `num/den`).
    pub fn exact(check_id: impl Into<String>, lhs: impl ToString, rhs: impl ToString) -> Self {
        let (lhs, rhs) = (lhs.to_string(), rhs.to_string());
        let equal = lhs == rhs;
        VerificationRecord {
            check_id: check_id.into(),
            status: if equal { Status::Pass } else { Status::Fail },
            lhs: Value::from(lhs),
            rhs: Value::from(rhs),
            abs_err: None,
            rel_err: None,
            tolerance: 0.0,
            normalization: String::new(),
            notes: "exact equality".into(),
        }
    }

    /// A boolean property over a whole table; `lhs`/`rhs` carry counts.
    pub fn property(check_id: impl Into<String>, holds: bool, checked: usize, notes: impl Into<String>) -> Self {
        VerificationRecord {
            check_id: check_id.into(),
            status: if holds { Status::Pass } else { Status::Fail },
            lhs: Value::from(holds),
            rhs: Value::from(true),
            abs_err: None,
            rel_err: None,
            tolerance: 0.0,
            normalization: String::new(),
            notes: format!("{} ({checked} cases)", notes.into()),
        }
    }

    /// A printed closed form against its reference; always a discrepancy
    /// record when they differ beyond `tolerance`, otherwise pass.
    pub fn audit(check_id: impl Into<String>, printed: f64, reference: f64, tolerance: f64) -> Self {
        let mut r = Self::numeric(check_id, printed, reference, tolerance);
        if r.status == Status::Fail {
            r.status = Status::Discrepancy;
        }
        r
    }

    pub fn normalized(mut self, normalization: impl Into<String>) -> Self {
        self.normalization = normalization.into();
        self
    }

    pub fn note(mut self, notes: impl Into<String>) -> Self {
        let notes = notes.into();
        if self.notes.is_empty() {
            self.notes = notes;
        } else {
            self.notes = format!("{}; {notes}", self.notes);
        }
        self
    }

    /// Record for a computation that returned an error.
    pub fn errored(check_id: impl Into<String>, err: impl std::fmt::Display) -> Self {
        VerificationRecord {
            check_id: check_id.into(),
            status: Status::Fail,
            lhs: Value::Null,
            rhs: Value::Null,
            abs_err: None,
            rel_err: None,
            tolerance: 0.0,
            normalization: String::new(),
            notes: format!("error: {err}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub suite: String,
    pub records: Vec<VerificationRecord>,
}

impl Report {
    pub fn new(suite: impl Into<String>, records: Vec<VerificationRecord>) -> Self {
        Report {
            schema: SCHEMA,
            suite: suite.into(),
            records,
        }
    }

    pub fn failures(&self) -> usize {
        self.records.iter().filter(|r| r.status == Status::Fail).count()
    }

    pub fn count(&self, status: Status) -> usize {
        self.records.iter().filter(|r| r.status == status).count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn statuses() {
        assert_eq!(VerificationRecord::numeric("a", 1.0, 1.0 + 1e-13, 1e-12).status, Status::Pass);
        assert_eq!(VerificationRecord::numeric("a", 1.0, 1.1, 1e-12).status, Status::Fail);
        assert_eq!(VerificationRecord::audit("a", 1.0, 1.1, 1e-8).status, Status::Discrepancy);
        assert_eq!(VerificationRecord::audit("a", 1.0, 1.0, 1e-8).status, Status::Pass);
        assert_eq!(VerificationRecord::exact("a", "19/6", "19/6").status, Status::Pass);
        assert_eq!(VerificationRecord::relative("a", 101.0, 100.0, 0.02).status, Status::Pass);
    }

    #[test]
    fn json_shape() {
        let r = Report::new("x", vec![VerificationRecord::numeric("c", 2.0, 2.0, 0.0).normalized("per sqrt(n)")]);
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["schema"], SCHEMA);
        let rec = &v["records"][0];
        for key in ["check_id", "status", "lhs", "rhs", "abs_err", "rel_err", "tolerance", "normalization", "notes"] {
            assert!(rec.get(key).is_some(), "{key}");
        }
        assert_eq!(rec["status"], "pass");
    }
}
