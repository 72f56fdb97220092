//! Record types and their human, CSV, and JSON renderings.

use std::fmt::Write as _;

use pickup_sticks::ExactRatio;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::args::Format;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Theorem,
    Engine,
    Oracle,
    Grid,
    Montecarlo,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Theorem => "theorem",
            Method::Engine => "engine",
            Method::Oracle => "oracle",
            Method::Grid => "grid",
            Method::Montecarlo => "montecarlo",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputRecord {
    pub n: usize,
    pub k: usize,
    pub method: Method,
    pub p_exact: Option<String>,
    pub p_decimal: String,
    pub extra: Map<String, Value>,
}

impl OutputRecord {
    pub fn exact(n: usize, k: usize, method: Method, p: &ExactRatio, precision: usize) -> Self {
        Self {
            n,
            k,
            method,
            p_exact: Some(p.to_string()),
            p_decimal: p.to_decimal_string(precision),
            extra: Map::new(),
        }
    }
}

pub const RECORD_CSV_HEADER: [&str; 6] = ["n", "k", "method", "p_exact", "p_decimal", "extra"];
pub const TABLE_CSV_HEADER: [&str; 6] = ["n", "k", "p_num", "p_den", "p_decimal", "coeffs"];

pub(crate) fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

pub(crate) fn finish_csv(writer: csv::Writer<Vec<u8>>) -> String {
    let bytes = writer.into_inner().expect("in-memory writer cannot fail");
    String::from_utf8(bytes).expect("csv output is UTF-8")
}

pub fn render_records(records: &[OutputRecord], format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(records).expect("records serialize");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut w = csv_writer();
            w.write_record(RECORD_CSV_HEADER).expect("in-memory write");
            for r in records {
                let extra = serde_json::to_string(&r.extra).expect("extra serializes");
                let (n, k) = (r.n.to_string(), r.k.to_string());
                let exact = r.p_exact.as_deref().unwrap_or("");
                w.write_record([&n, &k, r.method.as_str(), exact, &r.p_decimal, &extra])
                    .expect("in-memory write");
            }
            finish_csv(w)
        }
        Format::Human => {
            let mut s = String::new();
            for r in records {
                let value = match &r.p_exact {
                    Some(exact) => format!("{exact} = {}", r.p_decimal),
                    None => r.p_decimal.clone(),
                };
                let _ = write!(s, "n={} k={} {:<10} p = {value}", r.n, r.k, r.method.as_str());
                for (key, v) in &r.extra {
                    let v = match v {
                        Value::String(text) => text.clone(),
                        other => other.to_string(),
                    };
                    let _ = write!(s, "  {key}={v}");
                }
                s.push('\n');
            }
            s
        }
    }
}
