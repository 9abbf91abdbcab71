// SPDX-License-Identifier: Apache-2.0

//! Campaign reports: JSON for machines, CSV per campaign, aligned text for
//! people.

use std::fmt::{self, Display};
use std::time::Duration;

use serde::{Serialize, Serializer};
use serde_json::{Map, Value};

use crate::quadfield::QuadField;

pub(crate) fn ser_display<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// Field identification stamped into reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FieldId {
    #[serde(rename = "D")]
    pub d: i64,
    pub disc: i64,
}

impl From<&QuadField> for FieldId {
    fn from(k: &QuadField) -> Self {
        FieldId { d: k.d(), disc: k.disc() }
    }
}

/// A failed check inside a campaign.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub check: String,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
}

/// Output of one campaign.
#[derive(Debug, Clone, Serialize)]
pub struct ScanReport {
    pub campaign: String,
    pub field: Option<FieldId>,
    pub params: Map<String, Value>,
    pub rows: Vec<Value>,
    pub violations: Vec<Violation>,
    pub runtime_s: f64,
    pub version: String,
    pub status: Status,
}

impl ScanReport {
    pub fn new(campaign: impl Into<String>, field: Option<&QuadField>) -> Self {
        ScanReport {
            campaign: campaign.into(),
            field: field.map(FieldId::from),
            params: Map::new(),
            rows: Vec::new(),
            violations: Vec::new(),
            runtime_s: 0.0,
            version: crate::VERSION.to_string(),
            status: Status::Pass,
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn violation(&mut self, check: impl Into<String>, detail: impl Into<String>) {
        self.violations.push(Violation { check: check.into(), detail: detail.into() });
        self.status = Status::Fail;
    }

    /// Stamps runtime and recomputes the status from the violation list.
    pub fn finish(mut self, elapsed: Duration) -> Self {
        self.runtime_s = elapsed.as_secs_f64();
        self.status = if self.violations.is_empty() { Status::Pass } else { Status::Fail };
        self
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    fn columns(&self) -> Vec<String> {
        let mut cols: Vec<String> = Vec::new();
        for row in &self.rows {
            if let Value::Object(map) = row {
                for key in map.keys() {
                    if !cols.contains(key) {
                        cols.push(key.clone());
                    }
                }
            }
        }
        cols
    }

    fn cell(row: &Value, col: &str) -> String {
        match row.get(col) {
            None | Some(Value::Null) => String::new(),
            Some(Value::String(s)) => s.clone(),
            Some(Value::Array(items)) => items.iter().map(plain).collect::<Vec<_>>().join(";"),
            Some(v) => plain(v),
        }
    }

    /// Rows as CSV, one column per row key (union, first-seen order).
    pub fn to_csv(&self) -> String {
        let cols = self.columns();
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(&cols).expect("in-memory write");
        for row in &self.rows {
            let record: Vec<String> = cols.iter().map(|c| Self::cell(row, c)).collect();
            writer.write_record(&record).expect("in-memory write");
        }
        String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("csv is utf-8")
    }

    /// Human-readable aligned table.
    pub fn to_table(&self) -> String {
        self.to_string()
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

impl fmt::Display for ScanReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "campaign: {}", self.campaign)?;
        if let Some(id) = self.field {
            write!(f, "  field: D={} disc={}", id.d, id.disc)?;
        }
        writeln!(f)?;
        if !self.params.is_empty() {
            let params: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={}", plain(v))).collect();
            writeln!(f, "params: {}", params.join(" "))?;
        }
        let cols = self.columns();
        if !cols.is_empty() {
            let cells: Vec<Vec<String>> =
                self.rows.iter().map(|row| cols.iter().map(|c| Self::cell(row, c)).collect()).collect();
            let widths: Vec<usize> = cols
                .iter()
                .enumerate()
                .map(|(i, c)| cells.iter().map(|r| r[i].chars().count()).chain([c.chars().count()]).max().unwrap_or(0))
                .collect();
            let line = |items: &[String]| -> String {
                items
                    .iter()
                    .zip(&widths)
                    .map(|(s, w)| format!("{s:<w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
                    .trim_end()
                    .to_string()
            };
            writeln!(f, "{}", line(&cols))?;
            for row in &cells {
                writeln!(f, "{}", line(row))?;
            }
        }
        for v in &self.violations {
            writeln!(f, "VIOLATION [{}] {}", v.check, v.detail)?;
        }
        let status = match self.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
        };
        write!(
            f,
            "status: {status}  rows: {}  violations: {}  runtime: {:.3}s  version: {}",
            self.rows.len(),
            self.violations.len(),
            self.runtime_s,
            self.version
        )
    }
}
