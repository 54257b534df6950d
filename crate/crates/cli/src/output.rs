//! Ordered key/value records rendered as CSV or JSON with identical values.

use liftproj::symmat::fmt_real;
use serde_json::{Map, Number, Value};

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Int(i64),
    Real(f64),
    Text(String),
    Bool(bool),
    Null,
}

impl Field {
    fn csv(&self) -> String {
        match self {
            Field::Int(v) => v.to_string(),
            Field::Real(v) => fmt_real(*v),
            Field::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Field::Text(s) => s.clone(),
            Field::Bool(b) => b.to_string(),
            Field::Null => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Field::Int(v) => Value::from(*v),
            Field::Real(v) => Number::from_f64(*v).map(Value::Number).unwrap_or(Value::Null),
            Field::Text(s) => Value::String(s.clone()),
            Field::Bool(b) => Value::Bool(*b),
            Field::Null => Value::Null,
        }
    }
}

impl From<usize> for Field {
    fn from(v: usize) -> Self {
        Field::Int(v as i64)
    }
}

impl From<u32> for Field {
    fn from(v: u32) -> Self {
        Field::Int(v as i64)
    }
}

impl From<f64> for Field {
    fn from(v: f64) -> Self {
        Field::Real(v)
    }
}

impl From<Option<f64>> for Field {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Field::Null, Field::Real)
    }
}

impl From<&str> for Field {
    fn from(v: &str) -> Self {
        Field::Text(v.to_string())
    }
}

impl From<String> for Field {
    fn from(v: String) -> Self {
        Field::Text(v)
    }
}

impl From<bool> for Field {
    fn from(v: bool) -> Self {
        Field::Bool(v)
    }
}

pub type Record = Vec<(&'static str, Field)>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Header from the first record; every record must share its keys.
pub fn render(records: &[Record], format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = String::new();
            if let Some(first) = records.first() {
                out.push_str(&first.iter().map(|(k, _)| *k).collect::<Vec<_>>().join(","));
                out.push('\n');
            }
            for r in records {
                out.push_str(&r.iter().map(|(_, v)| v.csv()).collect::<Vec<_>>().join(","));
                out.push('\n');
            }
            out
        }
        Format::Json => {
            let objs: Vec<Value> = records
                .iter()
                .map(|r| Value::Object(r.iter().map(|(k, v)| (k.to_string(), v.json())).collect::<Map<_, _>>()))
                .collect();
            let v = if objs.len() == 1 { objs.into_iter().next().expect("one record") } else { Value::Array(objs) };
            let mut s = serde_json::to_string_pretty(&v).expect("serializable");
            s.push('\n');
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_and_json_carry_same_values() {
        let recs = vec![vec![("n", Field::from(3usize)), ("x", Field::from(0.1)), ("ok", Field::from(true))]];
        let csv = render(&recs, Format::Csv);
        assert_eq!(csv, "n,x,ok\n3,1.0000000000000001e-1,true\n");
        let json: Value = serde_json::from_str(&render(&recs, Format::Json)).unwrap();
        assert_eq!(json["x"].as_f64().unwrap(), "1.0000000000000001e-1".parse::<f64>().unwrap());
        assert_eq!(json["n"], 3);
    }
}
