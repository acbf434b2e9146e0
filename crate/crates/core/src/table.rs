//! Tabulated scan output with CSV and JSON encodings.
//!
//! CSV layout: a `# key=value` preamble (scan kind, the parameters needed to
//! regenerate the table, column units), one header line, then one line per
//! grid point in grid order. Floats are written in shortest round-trip
//! scientific notation so a parsed table re-emits byte-identically.

use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{IcdError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Column {
    pub name: String,
    pub unit: String,
}

impl Column {
    pub fn new(name: &str, unit: &str) -> Self {
        Column {
            name: name.to_string(),
            unit: unit.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    #[serde(with = "nan_as_null")]
    pub values: Vec<f64>,
    pub perturbative_ok: bool,
    /// Grid point too close to an atom; values are NaN.
    pub skipped: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub kind: String,
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<Column>,
    pub rows: Vec<ScanRow>,
}

mod nan_as_null {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
        let mapped: Vec<Option<f64>> = v.iter().map(|x| x.is_finite().then_some(*x)).collect();
        mapped.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        let raw: Vec<Option<f64>> = Vec::deserialize(d)?;
        Ok(raw.into_iter().map(|x| x.unwrap_or(f64::NAN)).collect())
    }
}

fn format_value(v: f64) -> String {
    format!("{v:e}")
}

impl ScanResult {
    pub fn new(kind: &str, metadata: Vec<(String, String)>, columns: Vec<Column>) -> Self {
        ScanResult {
            kind: kind.to_string(),
            metadata,
            columns,
            rows: Vec::new(),
        }
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    /// All values of one column, in row order.
    pub fn column(&self, name: &str) -> Result<Vec<f64>> {
        let i = self
            .column_index(name)
            .ok_or_else(|| IcdError::Format(format!("no column `{name}`")))?;
        Ok(self.rows.iter().map(|r| r.values[i]).collect())
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "# kind={}", self.kind)?;
        for (k, v) in &self.metadata {
            writeln!(out, "# {k}={v}")?;
        }
        let units: Vec<&str> = self.columns.iter().map(|c| c.unit.as_str()).collect();
        writeln!(out, "# units={}", units.join(","))?;
        let mut w = csv::Writer::from_writer(out);
        let mut header: Vec<&str> = self.columns.iter().map(|c| c.name.as_str()).collect();
        header.extend(["perturbative_ok", "skipped"]);
        w.write_record(&header)?;
        for row in &self.rows {
            let mut rec: Vec<String> = row.values.iter().map(|v| format_value(*v)).collect();
            rec.push(row.perturbative_ok.to_string());
            rec.push(row.skipped.to_string());
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory cannot fail");
        String::from_utf8(buf).expect("csv output is utf-8")
    }

    pub fn read_csv<R: Read>(mut input: R) -> Result<Self> {
        let mut text = String::new();
        input.read_to_string(&mut text)?;
        let mut kind = None;
        let mut units = None;
        let mut metadata = Vec::new();
        let mut body_start = 0;
        for line in text.split_inclusive('\n') {
            let Some(entry) = line.strip_prefix("# ") else { break };
            body_start += line.len();
            let entry = entry.trim_end_matches(['\n', '\r']);
            let (k, v) = entry
                .split_once('=')
                .ok_or_else(|| IcdError::Format(format!("preamble line without `=`: {entry}")))?;
            match k {
                "kind" => kind = Some(v.to_string()),
                "units" => units = Some(v.split(',').map(str::to_string).collect::<Vec<_>>()),
                _ => metadata.push((k.to_string(), v.to_string())),
            }
        }
        let kind = kind.ok_or_else(|| IcdError::Format("missing `# kind=` line".into()))?;
        let units = units.ok_or_else(|| IcdError::Format("missing `# units=` line".into()))?;

        let mut reader = csv::Reader::from_reader(&text.as_bytes()[body_start..]);
        let header = reader.headers()?.clone();
        let n = header.len();
        if n < 2 || &header[n - 2] != "perturbative_ok" || &header[n - 1] != "skipped" {
            return Err(IcdError::Format("header must end with perturbative_ok,skipped".into()));
        }
        if units.len() != n - 2 {
            return Err(IcdError::Format("units line does not match header".into()));
        }
        let columns = header
            .iter()
            .take(n - 2)
            .zip(&units)
            .map(|(name, unit)| Column::new(name, unit))
            .collect();
        let parse_bool = |s: &str| {
            s.parse::<bool>()
                .map_err(|_| IcdError::Format(format!("`{s}` is not a boolean")))
        };
        let mut rows = Vec::new();
        for rec in reader.records() {
            let rec = rec?;
            let values = rec
                .iter()
                .take(n - 2)
                .map(|s| s.parse::<f64>().map_err(|_| IcdError::Format(format!("`{s}` is not a number"))))
                .collect::<Result<Vec<_>>>()?;
            rows.push(ScanRow {
                values,
                perturbative_ok: parse_bool(&rec[n - 2])?,
                skipped: parse_bool(&rec[n - 1])?,
            });
        }
        Ok(ScanResult { kind, metadata, columns, rows })
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Writes `bytes` to `path` through a temporary file in the same directory
/// followed by a rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| IcdError::Io(e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample(values: Vec<Vec<f64>>) -> ScanResult {
        let mut t = ScanResult::new(
            "test",
            vec![("param.a".into(), "1e0".into()), ("note".into(), "x=y".into())],
            vec![Column::new("a", "A"), Column::new("b", "eV")],
        );
        for v in values {
            t.rows.push(ScanRow { values: v, perturbative_ok: true, skipped: false });
        }
        t
    }

    #[test]
    fn nan_rows_survive_both_encodings() {
        let mut t = sample(vec![vec![1.0, 2.5e-7]]);
        t.rows.push(ScanRow { values: vec![f64::NAN, f64::NAN], perturbative_ok: false, skipped: true });
        let csv = t.to_csv_string();
        let back = ScanResult::read_csv(csv.as_bytes()).unwrap();
        assert_eq!(back.to_csv_string(), csv);
        assert!(back.rows[1].values[0].is_nan());
        let json = t.to_json_string().unwrap();
        let back = ScanResult::from_json_str(&json).unwrap();
        assert!(back.rows[1].skipped && back.rows[1].values[1].is_nan());
        assert_eq!(back.meta("note"), Some("x=y"));
    }

    #[test]
    fn malformed_input_is_reported() {
        assert!(ScanResult::read_csv("a,b\n1,2\n".as_bytes()).is_err());
        let bad = "# kind=t\n# units=A\na,perturbative_ok,skipped\nfoo,true,false\n";
        assert!(matches!(ScanResult::read_csv(bad.as_bytes()), Err(IcdError::Format(_))));
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("out.csv");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "two");
    }

    proptest! {
        #[test]
        fn csv_reemits_byte_identical(rows in prop::collection::vec(prop::collection::vec(-1e30f64..1e30, 2), 0..20)) {
            let csv = sample(rows).to_csv_string();
            let again = ScanResult::read_csv(csv.as_bytes()).unwrap().to_csv_string();
            prop_assert_eq!(again, csv);
        }
    }
}
