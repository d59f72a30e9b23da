//! Structured evidence records and their CSV / JSON encodings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

/// Formats a number with 17 significant digits so that regression diffs
/// are meaningful.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Verdict {
    Exact,
    BoundedRatio,
    Unbounded,
    Violated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum GridKind {
    T,
    Delta,
}

/// One grid point of a comparison `lhs` vs `rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointRecord {
    pub t: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

impl PointRecord {
    pub fn new(t: f64, lhs: f64, rhs: f64) -> Self {
        let ratio = if rhs == 0.0 && lhs == 0.0 { 1.0 } else { lhs / rhs };
        PointRecord { t, lhs, rhs, ratio }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c2: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DiagnosticsReport {
    pub subject: String,
    pub grid_kind: GridKind,
    pub values: Vec<PointRecord>,
    /// Secondary δ-grid comparison, used by the associate-space check.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub delta_values: Vec<PointRecord>,
    pub verdict: Verdict,
    pub constants: Option<Constants>,
    pub notes: Vec<String>,
}

impl DiagnosticsReport {
    pub fn grid(&self) -> Vec<f64> {
        self.values.iter().map(|r| r.t).collect()
    }

    pub fn ratio_range(&self) -> (f64, f64) {
        self.values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
            (lo.min(r.ratio), hi.max(r.ratio))
        })
    }

    /// `t,lhs,rhs,ratio` rows (`delta,...` for δ-grids), followed by the δ
    /// block when present.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let head = match self.grid_kind {
            GridKind::T => "t",
            GridKind::Delta => "delta",
        };
        write_block(&mut out, head, &self.values);
        if !self.delta_values.is_empty() {
            out.push('\n');
            write_block(&mut out, "delta", &self.delta_values);
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

fn write_block(out: &mut String, head: &str, rows: &[PointRecord]) {
    let _ = writeln!(out, "{head},lhs,rhs,ratio");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            fmt_num(r.t),
            fmt_num(r.lhs),
            fmt_num(r.rhs),
            fmt_num(r.ratio)
        );
    }
}
