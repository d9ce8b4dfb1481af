use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;

/// One value in a result table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Int(v) => write!(f, "{v}"),
            Cell::Float(v) => write!(f, "{v}"),
            Cell::Text(s) => f.write_str(s),
        }
    }
}

macro_rules! cell_from_int {
    ($($t:ty),*) => {$(
        impl From<$t> for Cell {
            fn from(v: $t) -> Self {
                Cell::Int(v as i64)
            }
        }
    )*};
}
cell_from_int!(i64, u64, usize, u32, i32);

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Int(v as i64)
    }
}

/// A summary statistic with an optional standard error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub name: String,
    pub value: f64,
    pub se: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "relation", rename_all = "snake_case")]
pub enum CheckKind {
    /// `|observed - target| <= tolerance`.
    Within { target: f64, tolerance: f64 },
    /// `observed <= bound`.
    AtMost { bound: f64 },
    /// `observed >= bound`.
    AtLeast { bound: f64 },
}

/// A pass/fail comparison of an observed statistic against a reference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub observed: f64,
    #[serde(flatten)]
    pub kind: CheckKind,
    pub passed: bool,
}

impl Check {
    fn new(name: impl Into<String>, observed: f64, kind: CheckKind) -> Self {
        let passed = match kind {
            CheckKind::Within { target, tolerance } => (observed - target).abs() <= tolerance,
            CheckKind::AtMost { bound } => observed <= bound,
            CheckKind::AtLeast { bound } => observed >= bound,
        };
        Check {
            name: name.into(),
            observed,
            kind,
            passed,
        }
    }

    pub fn within(name: impl Into<String>, observed: f64, target: f64, tolerance: f64) -> Self {
        Self::new(name, observed, CheckKind::Within { target, tolerance })
    }

    pub fn at_most(name: impl Into<String>, observed: f64, bound: f64) -> Self {
        Self::new(name, observed, CheckKind::AtMost { bound })
    }

    pub fn at_least(name: impl Into<String>, observed: f64, bound: f64) -> Self {
        Self::new(name, observed, CheckKind::AtLeast { bound })
    }

    fn reference(&self) -> (f64, Option<f64>, &'static str) {
        match self.kind {
            CheckKind::Within { target, tolerance } => (target, Some(tolerance), "within"),
            CheckKind::AtMost { bound } => (bound, None, "at_most"),
            CheckKind::AtLeast { bound } => (bound, None, "at_least"),
        }
    }
}

struct Num(f64);

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.0;
        if v == 0.0 || !v.is_finite() || (1e-3..1e6).contains(&v.abs()) {
            write!(f, "{v:.6}")
        } else {
            write!(f, "{v:.4e}")
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        let obs = Num(self.observed);
        match self.kind {
            CheckKind::Within { target, tolerance } => write!(
                f,
                "{verdict} {}: observed {obs}, target {} +/- {}",
                self.name,
                Num(target),
                Num(tolerance)
            ),
            CheckKind::AtMost { bound } => write!(
                f,
                "{verdict} {}: observed {obs} <= {}",
                self.name,
                Num(bound)
            ),
            CheckKind::AtLeast { bound } => write!(
                f,
                "{verdict} {}: observed {obs} >= {}",
                self.name,
                Num(bound)
            ),
        }
    }
}

/// Output of one experiment: parameters, one row per replicate, summary
/// statistics and checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub name: String,
    #[serde(with = "ordered_map")]
    pub params: Vec<(String, Cell)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub summary: Vec<Summary>,
    pub checks: Vec<Check>,
}

impl ExperimentResult {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        ExperimentResult {
            name: name.to_string(),
            params: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            summary: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn param(&mut self, name: &str, value: impl Into<Cell>) -> &mut Self {
        self.params.push((name.to_string(), value.into()));
        self
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    pub fn stat(&mut self, name: impl Into<String>, value: f64, se: Option<f64>) {
        self.summary.push(Summary {
            name: name.into(),
            value,
            se,
        });
    }

    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn summary_value(&self, name: &str) -> Option<f64> {
        self.summary
            .iter()
            .find(|s| s.name == name)
            .map(|s| s.value)
    }

    /// Appends another result's rows, summaries and checks (same columns).
    pub fn absorb(&mut self, other: ExperimentResult) {
        debug_assert_eq!(self.columns, other.columns);
        self.rows.extend(other.rows);
        self.summary.extend(other.summary);
        self.checks.extend(other.checks);
    }

    /// Parameter comment lines, the replicate table, a blank line, then a
    /// summary block with columns `section, name, value, reference,
    /// tolerance, passed`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "# experiment: {}", self.name)?;
        for (k, v) in &self.params {
            writeln!(out, "# {k} = {v}")?;
        }
        {
            let mut w = csv::WriterBuilder::new()
                .flexible(true)
                .from_writer(&mut out);
            w.write_record(&self.columns)?;
            for r in &self.rows {
                w.write_record(r.iter().map(|c| c.to_string()))?;
            }
            w.write_record([""; 0])?;
            w.write_record([
                "section",
                "name",
                "value",
                "reference",
                "tolerance",
                "passed",
            ])?;
            for s in &self.summary {
                let se = s.se.map(|v| v.to_string()).unwrap_or_default();
                w.write_record(["summary", &s.name, &s.value.to_string(), &se, "", ""])?;
            }
            for c in &self.checks {
                let (reference, tol, relation) = c.reference();
                let tol = tol
                    .map(|t| t.to_string())
                    .unwrap_or_else(|| relation.to_string());
                w.write_record([
                    "check",
                    &c.name,
                    &c.observed.to_string(),
                    &reference.to_string(),
                    &tol,
                    if c.passed { "true" } else { "false" },
                ])?;
            }
            w.flush()?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Serializes `(key, value)` pairs as a JSON object, keeping their order.
mod ordered_map {
    use std::fmt;

    use serde::de::{MapAccess, Visitor};
    use serde::ser::SerializeMap;
    use serde::{Deserializer, Serializer};

    use super::Cell;

    pub fn serialize<S: Serializer>(pairs: &[(String, Cell)], s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(pairs.len()))?;
        for (k, v) in pairs {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }

    struct PairsVisitor;

    impl<'de> Visitor<'de> for PairsVisitor {
        type Value = Vec<(String, Cell)>;

        fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            f.write_str("a map of parameters")
        }

        fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<Self::Value, A::Error> {
            let mut out = Vec::new();
            while let Some(entry) = access.next_entry()? {
                out.push(entry);
            }
            Ok(out)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<(String, Cell)>, D::Error> {
        d.deserialize_map(PairsVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checks_and_csv() {
        let mut r = ExperimentResult::new("demo", &["n", "seed", "rep", "x"]);
        r.param("n", 10usize).param("seed", 3u64);
        r.row(vec![10usize.into(), 3u64.into(), 0usize.into(), 0.5.into()]);
        r.stat("mean_x", 0.5, Some(0.1));
        r.check(Check::within("x", 0.5, 0.45, 0.1));
        r.check(Check::at_most("y", 2.0, 1.0));
        assert!(!r.passed());
        assert!(r.checks[0].passed);
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text
            .starts_with("# experiment: demo\n# n = 10\n# seed = 3\nn,seed,rep,x\n10,3,0,0.5\n"));
        assert!(text.contains("summary,mean_x,0.5,0.1,,\n"));
        assert!(text.contains("check,y,2,1,at_most,false\n"));
        let json: serde_json::Value = serde_json::from_str(&r.to_json().unwrap()).unwrap();
        assert_eq!(json["checks"][1]["relation"], "at_most");
        assert_eq!(json["rows"][0][3], 0.5);
        assert_eq!(json["params"]["seed"], 3);
        let back: ExperimentResult = serde_json::from_str(&r.to_json().unwrap()).unwrap();
        assert_eq!(back, r);
        assert!(r.checks[1].to_string().starts_with("FAIL y"));
    }
}
