//! Machine-readable and plain renderings. Warnings never go through here.
//!
//! Every command produces a list of records: JSON objects with stable key
//! order. JSON output is one object per line; CSV uses the keys as the header
//! and joins list fields with spaces.

use std::io::{self, Write};

use bvis_core::DensityReport;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

/// One `DensityReport`, flattened. Exact integers are decimal strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub b: Vec<String>,
    pub case: String,
    #[serde(rename = "box")]
    pub box_edges: Vec<String>,
    pub visible: String,
    pub total: String,
    pub empirical: f64,
    pub exponent_sum: u64,
    pub theoretical: Option<f64>,
    pub abs_error: Option<f64>,
}

impl From<&DensityReport> for ReportRow {
    fn from(r: &DensityReport) -> Self {
        ReportRow {
            b: r.b.clone(),
            case: r.case.as_str().to_string(),
            box_edges: r.box_spec.edges().iter().map(ToString::to_string).collect(),
            visible: r.visible.to_string(),
            total: r.total.to_string(),
            empirical: r.empirical,
            exponent_sum: r.exponent_sum,
            theoretical: r.theoretical,
            abs_error: r.abs_error,
        }
    }
}

impl ReportRow {
    pub fn plain(&self) -> String {
        let mut s = format!(
            "b            ({})\ncase         {}\nbox          {}\nvisible      {} / {}\nempirical    {:.12}\n",
            self.b.join(","),
            self.case,
            self.box_edges.join("x"),
            self.visible,
            self.total,
            self.empirical
        );
        match (self.theoretical, self.abs_error) {
            (Some(t), Some(e)) => s.push_str(&format!(
                "theoretical  {t:.12}  (1/zeta({}))\nabs_error    {e:.3e}",
                self.exponent_sum
            )),
            _ => s.push_str(&format!(
                "theoretical  none (exponent sum {})",
                self.exponent_sum
            )),
        }
        s
    }
}

pub fn to_record<S: Serialize>(row: &S) -> Map<String, Value> {
    match serde_json::to_value(row).expect("serializable record") {
        Value::Object(m) => m,
        other => panic!("record must serialize to an object, got {other}"),
    }
}

fn csv_field(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(csv_field).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}

/// Renders `records`; `plain` gives the human form of each.
pub fn emit(
    out: &mut impl Write,
    records: &[Map<String, Value>],
    format: Format,
    plain: impl Fn(&Map<String, Value>) -> String,
) -> io::Result<()> {
    match format {
        Format::Json => {
            for r in records {
                serde_json::to_writer(&mut *out, r)?;
                writeln!(out)?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            if let Some(first) = records.first() {
                w.write_record(first.keys())?;
            }
            for r in records {
                w.write_record(r.values().map(csv_field))?;
            }
            w.flush()?;
        }
        Format::Plain => {
            for r in records {
                writeln!(out, "{}", plain(r))?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn record(v: Value) -> Map<String, Value> {
        v.as_object().unwrap().clone()
    }

    #[test]
    fn csv_flattens_lists_and_nulls() {
        let r = record(json!({"b": ["1", "2"], "x": 0.5, "t": null, "ok": true}));
        let mut buf = Vec::new();
        emit(&mut buf, &[r], Format::Csv, |_| String::new()).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "b,x,t,ok\n1 2,0.5,,true\n");
    }

    #[test]
    fn json_keeps_key_order() {
        let r = record(json!({"z": 1, "a": 2}));
        let mut buf = Vec::new();
        emit(&mut buf, &[r], Format::Json, |_| String::new()).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "{\"z\":1,\"a\":2}\n");
    }
}
