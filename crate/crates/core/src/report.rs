//! Command reports and their json, csv and text renderings.

use std::fmt::Write as _;
use std::time::Duration;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::image::DigitalImage;
use crate::io::image_canonical;
use crate::spectrum::EnumerationStats;

pub const VERSION: &str = concat!("digifix ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
    Text,
}

impl std::str::FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            "text" => Ok(ReportFormat::Text),
            other => Err(format!("unknown format {other:?}; expected json, csv or text")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    /// `sha256:` followed by the hex digest of the canonical input image.
    pub input_digest: String,
    pub result: Value,
    pub stats: Option<EnumerationStats>,
    pub version: String,
}

/// Digest of the canonical json form of an image, independent of file layout.
pub fn image_digest(image: &DigitalImage) -> String {
    let hash = Sha256::digest(image_canonical(image).as_bytes());
    let mut s = String::from("sha256:");
    for b in hash {
        write!(s, "{b:02x}").expect("writing to a string");
    }
    s
}

impl Report {
    pub fn new(command: &str, image: Option<&DigitalImage>, result: Value) -> Self {
        Report {
            command: command.to_string(),
            input_digest: image.map(image_digest).unwrap_or_default(),
            result,
            stats: None,
            version: VERSION.to_string(),
        }
    }

    pub fn with_stats(mut self, stats: EnumerationStats) -> Self {
        self.stats = Some(stats);
        self
    }

    /// Everything but wall-clock time, so equal inputs give equal bytes.
    pub fn to_value(&self) -> Value {
        let mut m = Map::new();
        m.insert("command".into(), json!(self.command));
        m.insert("input_digest".into(), json!(self.input_digest));
        m.insert("result".into(), self.result.clone());
        m.insert(
            "stats".into(),
            match &self.stats {
                Some(s) => json!({
                    "maps_enumerated": s.maps_enumerated,
                    "nodes_visited": s.nodes_visited,
                    "truncated": s.truncated,
                }),
                None => Value::Null,
            },
        );
        m.insert("version".into(), json!(self.version));
        Value::Object(m)
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Leaves of `v` as `(dotted key, value)` rows; an array of scalars gives one row per element.
fn flatten(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    let join = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(&join(k), x, rows);
            }
        }
        Value::Array(xs) if xs.iter().all(|x| !x.is_object() && !x.is_array()) => {
            for x in xs {
                rows.push((prefix.to_string(), scalar(x)));
            }
        }
        Value::Array(xs) => {
            for (i, x) in xs.iter().enumerate() {
                flatten(&join(&i.to_string()), x, rows);
            }
        }
        other => rows.push((prefix.to_string(), scalar(other))),
    }
}

fn text_value(v: &Value) -> String {
    match v {
        Value::Array(xs) if xs.iter().all(|x| x.is_u64()) => {
            let inner: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
            format!("{{{}}}", inner.join(","))
        }
        other => scalar(other),
    }
}

/// Renders a report. Json is compact with sorted keys; csv has one row per
/// scalar, spectra one value per row; text is for people.
pub fn write_report(r: &Report, format: ReportFormat) -> Vec<u8> {
    let mut out = String::new();
    match format {
        ReportFormat::Json => {
            out = serde_json::to_string(&r.to_value()).expect("serializable");
            out.push('\n');
        }
        ReportFormat::Csv => {
            let mut rows = Vec::new();
            flatten("", &r.result, &mut rows);
            out.push_str("key,value\n");
            for (k, v) in rows {
                writeln!(out, "{},{}", csv_field(&k), csv_field(&v)).expect("writing to a string");
            }
        }
        ReportFormat::Text => {
            writeln!(out, "{} ({})", r.command, r.version).expect("writing to a string");
            if !r.input_digest.is_empty() {
                writeln!(out, "input: {}", r.input_digest).expect("writing to a string");
            }
            let mut rows = Vec::new();
            match &r.result {
                Value::Object(m) => {
                    for (k, v) in m {
                        match v {
                            Value::Array(xs) if xs.iter().all(|x| x.is_u64()) => rows.push((k.clone(), text_value(v))),
                            Value::Object(_) | Value::Array(_) => flatten(k, v, &mut rows),
                            _ => rows.push((k.clone(), text_value(v))),
                        }
                    }
                }
                other => rows.push(("result".into(), text_value(other))),
            }
            let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            for (k, v) in rows {
                writeln!(out, "  {k:<width$}  {v}").expect("writing to a string");
            }
            if let Some(s) = &r.stats {
                writeln!(
                    out,
                    "stats: {} maps, {} nodes{}, {}",
                    s.maps_enumerated,
                    s.nodes_visited,
                    if s.truncated { ", truncated" } else { "" },
                    fmt_duration(s.elapsed)
                )
                .expect("writing to a string");
            }
        }
    }
    out.into_bytes()
}

fn fmt_duration(d: Duration) -> String {
    if d.as_secs() >= 1 {
        format!("{:.2}s", d.as_secs_f64())
    } else {
        format!("{:.1}ms", d.as_secs_f64() * 1e3)
    }
}
