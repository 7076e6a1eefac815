//! Report rows and the fixed CSV schema.
//!
//! Column order is `name,p,t,k,q_size,hypothesis_ok,lhs,rhs,ratio,verdict`
//! with LF line endings, `.` as the decimal separator and 17 significant
//! digits for real values. Rows are sorted by instance key before writing so
//! output is byte-stable under any evaluation order.

use std::fmt;

/// PASS/FAIL applies only to explicit-constant statements whose hypotheses
/// hold; everything asymptotic is reported as a ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    ReportOnly,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Pass => write!(f, "PASS"),
            Verdict::Fail => write!(f, "FAIL"),
            Verdict::ReportOnly => write!(f, "REPORT_ONLY"),
        }
    }
}

/// Exact integer or double-precision real.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Value {
    Int(u128),
    Real(f64),
}

impl Value {
    pub fn as_f64(&self) -> f64 {
        match self {
            Value::Int(v) => *v as f64,
            Value::Real(v) => *v,
        }
    }
}

/// 17 significant digits, `.` separator, exponent notation.
pub fn fmt_real(x: f64) -> String {
    format!("{:.16e}", x)
}

pub fn fmt_value(v: &Value) -> String {
    match v {
        Value::Int(i) => i.to_string(),
        Value::Real(r) => fmt_real(*r),
    }
}

/// One evaluated comparison instance.
#[derive(Debug, Clone)]
pub struct InequalityReport {
    pub name: String,
    pub p: u64,
    pub t: u64,
    pub k: usize,
    pub q_size: u64,
    pub mu: Vec<u64>,
    pub hypotheses: Vec<(String, bool)>,
    pub lhs: Value,
    pub rhs: Value,
    pub ratio: f64,
    pub verdict: Verdict,
}

impl InequalityReport {
    pub fn hypothesis_ok(&self) -> bool {
        self.hypotheses.iter().all(|(_, ok)| *ok)
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.name,
            self.p,
            self.t,
            self.k,
            self.q_size,
            self.hypothesis_ok(),
            fmt_value(&self.lhs),
            fmt_value(&self.rhs),
            fmt_real(self.ratio),
            self.verdict
        )
    }
}

pub const CSV_HEADER: &str = "name,p,t,k,q_size,hypothesis_ok,lhs,rhs,ratio,verdict";

/// Renders reports as CSV, sorted by instance key.
pub fn write_csv(reports: &[InequalityReport]) -> String {
    let mut rows: Vec<(String, String)> = reports
        .iter()
        .map(|r| {
            let key = format!(
                "{}|{:020}|{:020}|{:05}|{:020}",
                r.name, r.p, r.t, r.k, r.q_size
            );
            (key, r.csv_row())
        })
        .collect();
    rows.sort();
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for (_, row) in rows {
        out.push_str(&row);
        out.push('\n');
    }
    out
}
