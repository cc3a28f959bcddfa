use serde::Serialize;
use serde_json::Value;

use crate::config::SuiteConfig;

/// Outcome of one check on one instance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub check: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<Value>,
}

impl CheckRecord {
    pub fn new(check: &str) -> Self {
        CheckRecord {
            check: check.into(),
            label: None,
            instance: None,
            seed: None,
            params: None,
            residual: None,
            pass: false,
            error: None,
            detail: None,
        }
    }

    pub fn failed_with(check: &str, error: impl ToString) -> Self {
        CheckRecord { error: Some(error.to_string()), ..CheckRecord::new(check) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub generated_at: u64,
    pub config: SuiteConfig,
    pub records: Vec<CheckRecord>,
    pub summary: Summary,
}

impl Report {
    pub fn new(config: SuiteConfig, records: Vec<CheckRecord>, generated_at: u64) -> Self {
        let passed = records.iter().filter(|r| r.pass).count();
        let errors = records.iter().filter(|r| r.error.is_some()).count();
        let summary = Summary { total: records.len(), passed, failed: records.len() - passed, errors };
        Report { tool: "tlkp", version: env!("CARGO_PKG_VERSION"), generated_at, config, records, summary }
    }

    /// True when every executed check passed (vacuously for an empty suite).
    pub fn success(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_text(&self) -> String {
        let rows: Vec<[String; 5]> = self
            .records
            .iter()
            .map(|r| {
                [
                    if r.pass { "pass" } else { "FAIL" }.to_string(),
                    r.check.clone(),
                    r.label.clone().unwrap_or_default(),
                    r.instance.map(|i| i.to_string()).unwrap_or_else(|| "-".into()),
                    match (&r.error, &r.residual) {
                        (Some(e), _) => format!("error: {e}"),
                        (None, Some(res)) => format!("residual {res}"),
                        _ => String::new(),
                    },
                ]
            })
            .collect();
        let mut out = table(&["", "check", "label", "inst", "result"], &rows);
        let s = &self.summary;
        out.push_str(&format!("{} of {} passed ({} errors)\n", s.passed, s.total, s.errors));
        out
    }
}

/// Left-aligned text table; the last column is left ragged.
pub fn table<const K: usize>(header: &[&str; K], rows: &[[String; K]]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let mut s = String::new();
        for (k, cell) in cells.iter().enumerate() {
            if k + 1 == K {
                s.push_str(cell);
            } else {
                s.push_str(&format!("{cell:<width$}  ", width = widths[k]));
            }
        }
        s.trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    for row in rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
    }
    out
}
