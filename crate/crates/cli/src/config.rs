//! Suite configuration: parsing, validation against the published schema and
//! command-line overrides.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

/// JSON Schema for configuration files.
pub const CONFIG_SCHEMA: &str = include_str!("../schema/config.schema.json");
/// JSON Schema for reports.
pub const REPORT_SCHEMA: &str = include_str!("../schema/report.schema.json");

/// Checks a suite can run, in canonical order.
pub const CHECK_NAMES: [&str; 8] = [
    "theorem-quotient",
    "pluecker",
    "integral-rep",
    "hirota",
    "schur-expansion",
    "diagram-counts",
    "andreev",
    "bethe",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldChoice {
    Rational,
    Quadratic,
    Float,
}

impl FieldChoice {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "rational" => Some(FieldChoice::Rational),
            "quadratic" => Some(FieldChoice::Quadratic),
            "float" => Some(FieldChoice::Float),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Large,
    Small,
}

/// Everything a suite run depends on. Serialized back verbatim into the report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub field_mode: FieldChoice,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub spin_twice: u32,
    #[serde(rename = "Q")]
    pub big_q: String,
    pub q_branch: Branch,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v: Option<Vec<String>>,
    pub instances: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub series_order: Option<i32>,
    pub miwa_cutoff: u32,
    pub schur_cutoff: u32,
    pub lambda1_max: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub guesses: Option<Vec<Vec<String>>>,
    pub checks: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            field_mode: FieldChoice::Rational,
            n: 3,
            m: 2,
            spin_twice: 1,
            big_q: "2".into(),
            q_branch: Branch::Large,
            u: None,
            v: None,
            instances: 5,
            seed: 0,
            series_order: None,
            miwa_cutoff: 6,
            schur_cutoff: 6,
            lambda1_max: 11,
            guesses: None,
            checks: CHECK_NAMES.iter().map(|s| s.to_string()).collect(),
            output: None,
        }
    }
}

/// A configuration that failed validation, with one entry per offending key.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemaError {
    pub problems: Vec<String>,
}

impl fmt::Display for SchemaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "invalid configuration:")?;
        for p in &self.problems {
            writeln!(f, "  {p}")?;
        }
        Ok(())
    }
}

impl std::error::Error for SchemaError {}

#[derive(Clone, Copy)]
enum Kind {
    Count,
    Int,
    Str,
    StrList,
    GuessList,
    Field,
    Branch,
    Checks,
}

const KEYS: [(&str, Kind); 17] = [
    ("field_mode", Kind::Field),
    ("N", Kind::Count),
    ("M", Kind::Count),
    ("spin_twice", Kind::Count),
    ("Q", Kind::Str),
    ("q_branch", Kind::Branch),
    ("u", Kind::StrList),
    ("v", Kind::StrList),
    ("instances", Kind::Count),
    ("seed", Kind::Count),
    ("series_order", Kind::Int),
    ("miwa_cutoff", Kind::Count),
    ("schur_cutoff", Kind::Count),
    ("lambda1_max", Kind::Count),
    ("guesses", Kind::GuessList),
    ("checks", Kind::Checks),
    ("output", Kind::Str),
];

/// Names of every key the schema accepts.
pub fn known_keys() -> impl Iterator<Item = &'static str> {
    KEYS.iter().map(|(k, _)| *k)
}

fn describe(kind: Kind, key: &str, v: &Value) -> Option<String> {
    let bad = |what: &str| Some(format!("{key}: expected {what}, got {v}"));
    match kind {
        Kind::Count if !v.is_u64() => bad("a non-negative integer"),
        Kind::Int if !v.is_i64() => bad("an integer"),
        Kind::Str if !v.is_string() => bad("a string"),
        Kind::StrList => match v.as_array() {
            Some(a) if a.iter().all(Value::is_string) => None,
            _ => bad("a list of strings"),
        },
        Kind::GuessList => match v.as_array() {
            Some(a) if a.iter().all(|g| g.as_array().is_some_and(|g| g.iter().all(Value::is_string))) => None,
            _ => bad("a list of lists of strings"),
        },
        Kind::Field => match v.as_str().and_then(FieldChoice::parse) {
            Some(_) => None,
            None => bad("one of \"rational\", \"quadratic\", \"float\""),
        },
        Kind::Branch => match v.as_str() {
            Some("large" | "small") => None,
            _ => bad("\"large\" or \"small\""),
        },
        Kind::Checks => match v.as_array() {
            Some(a) => {
                let unknown: Vec<String> = a
                    .iter()
                    .filter(|c| !c.as_str().is_some_and(|c| CHECK_NAMES.contains(&c)))
                    .map(Value::to_string)
                    .collect();
                if unknown.is_empty() {
                    None
                } else {
                    Some(format!("checks: unknown check {}", unknown.join(", ")))
                }
            }
            None => bad("a list of check names"),
        },
        _ => None,
    }
}

impl SuiteConfig {
    /// Validates a JSON value and fills in defaults. All problems are
    /// collected before reporting.
    pub fn from_value(value: &Value) -> Result<Self, SchemaError> {
        let Some(obj) = value.as_object() else {
            return Err(SchemaError { problems: vec!["<root>: expected an object".into()] });
        };
        let mut problems = Vec::new();
        for key in obj.keys() {
            if !KEYS.iter().any(|(k, _)| k == key) {
                problems.push(format!("{key}: unknown key"));
            }
        }
        for (key, kind) in KEYS {
            if let Some(v) = obj.get(key) {
                problems.extend(describe(kind, key, v));
            }
        }
        for required in ["N", "M", "Q"] {
            if !obj.contains_key(required) {
                problems.push(format!("{required}: required key missing"));
            }
        }
        if obj.contains_key("u") != obj.contains_key("v") {
            problems.push("u, v: explicit parameters need both lists".into());
        }
        if !problems.is_empty() {
            return Err(SchemaError { problems });
        }
        let mut merged = match serde_json::to_value(SuiteConfig::default()) {
            Ok(Value::Object(m)) => m,
            _ => Map::new(),
        };
        for (k, v) in obj {
            merged.insert(k.clone(), v.clone());
        }
        serde_json::from_value(Value::Object(merged)).map_err(|e| SchemaError { problems: vec![e.to_string()] })
    }

    pub fn from_json_str(s: &str) -> Result<Self, SchemaError> {
        let value: Value =
            serde_json::from_str(s).map_err(|e| SchemaError { problems: vec![format!("<root>: {e}")] })?;
        Self::from_value(&value)
    }

    pub fn load(path: &Path) -> Result<Self, SchemaError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| SchemaError { problems: vec![format!("{}: {e}", path.display())] })?;
        Self::from_json_str(&text)
    }

    /// True when `u` and `v` are given explicitly rather than drawn at random.
    pub fn is_explicit(&self) -> bool {
        self.u.is_some() && self.v.is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn defaults_fill_in() {
        let c = SuiteConfig::from_value(&json!({"N": 4, "M": 1, "Q": "3/2"})).unwrap();
        assert_eq!(c.n, 4);
        assert_eq!(c.schur_cutoff, 6);
        assert_eq!(c.checks.len(), CHECK_NAMES.len());
    }

    #[test]
    fn every_problem_is_listed() {
        let err = SuiteConfig::from_value(&json!({
            "N": -1, "Q": 2, "colour": "red", "checks": ["pluecker", "nonsense"], "u": ["1"]
        }))
        .unwrap_err();
        let text = err.problems.join("\n");
        for needle in ["colour", "N:", "Q:", "nonsense", "M: required", "u, v"] {
            assert!(text.contains(needle), "{needle} missing from {text}");
        }
    }

    #[test]
    fn schema_lists_the_same_keys() {
        let schema: Value = serde_json::from_str(CONFIG_SCHEMA).unwrap();
        let props = schema["properties"].as_object().unwrap();
        let mut a: Vec<&str> = props.keys().map(String::as_str).collect();
        let mut b: Vec<&str> = known_keys().collect();
        a.sort();
        b.sort();
        assert_eq!(a, b);
        let checks: Vec<&str> =
            schema["properties"]["checks"]["items"]["enum"].as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect();
        assert_eq!(checks, CHECK_NAMES);
        let _: Value = serde_json::from_str(REPORT_SCHEMA).unwrap();
    }

    #[test]
    fn round_trips_through_json() {
        let c = SuiteConfig { u: Some(vec!["1/2".into()]), v: Some(vec!["3".into()]), ..Default::default() };
        let back = SuiteConfig::from_value(&serde_json::to_value(&c).unwrap()).unwrap();
        assert_eq!(back, c);
    }
}
