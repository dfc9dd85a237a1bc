//! Streaming CSV/JSON record writer.
//!
//! CSV: header row, comma separated, LF line endings. JSON: an array of flat
//! objects with the header's keys. Floats carry 15 significant digits.

use std::io::Write;

use serde_json::{Map, Number, Value};

use crate::{CliError, Format};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i128),
    Float(f64),
    Bool(bool),
    Text(String),
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v.into())
    }
}

impl From<i128> for Cell {
    fn from(v: i128) -> Self {
        Cell::Int(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

/// Round to 15 significant digits.
pub fn round15(v: f64) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return v;
    }
    format!("{v:.14e}").parse().expect("formatted float parses")
}

/// Shortest text that reads back as `round15(v)`.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        return "NaN".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf" } else { "-inf" }.into();
    }
    let r = round15(v);
    let s = format!("{r:?}");
    s.strip_suffix(".0").map(str::to_owned).unwrap_or(s)
}

impl Cell {
    fn to_text(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format_float(*v),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(v) => v.clone(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Int(v) => match i64::try_from(*v) {
                Ok(i) => Value::from(i),
                Err(_) => Value::String(v.to_string()),
            },
            Cell::Float(v) => Number::from_f64(round15(*v)).map_or(Value::Null, Value::Number),
            Cell::Bool(v) => Value::Bool(*v),
            Cell::Text(v) => Value::String(v.clone()),
        }
    }
}

/// Write `rows` under `header` to `sink`. Every row must have one cell per
/// header column.
pub fn emit<W, I>(header: &[&str], rows: I, format: Format, sink: W) -> Result<(), CliError>
where
    W: Write,
    I: IntoIterator<Item = Result<Vec<Cell>, CliError>>,
{
    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(sink);
            w.write_record(header)?;
            for row in rows {
                let row = row?;
                debug_assert_eq!(row.len(), header.len());
                w.write_record(row.iter().map(Cell::to_text))?;
            }
            w.flush()?;
        }
        Format::Json => {
            let mut sink = sink;
            sink.write_all(b"[")?;
            for (i, row) in rows.into_iter().enumerate() {
                let row = row?;
                debug_assert_eq!(row.len(), header.len());
                let object: Map<String, Value> = header
                    .iter()
                    .zip(&row)
                    .map(|(k, c)| ((*k).to_owned(), c.to_json()))
                    .collect();
                sink.write_all(if i == 0 { b"\n" } else { b",\n" })?;
                serde_json::to_writer(&mut sink, &object)?;
            }
            sink.write_all(b"\n]\n")?;
            sink.flush()?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn render(header: &[&str], rows: Vec<Vec<Cell>>, format: Format) -> String {
        let mut out = Vec::new();
        emit(header, rows.into_iter().map(Ok), format, &mut out).unwrap();
        String::from_utf8(out).unwrap()
    }

    #[test]
    fn float_formatting() {
        assert_eq!(format_float(0.5), "0.5");
        assert_eq!(format_float(2.0), "2");
        assert_eq!(format_float(2.742857142857143), "2.74285714285714");
        assert_eq!(format_float(-0.3968463337474699), "-0.39684633374747");
        assert_eq!(format_float(1.234e-20), "1.234e-20");
        assert_eq!(format_float(f64::NAN), "NaN");
    }

    #[test]
    fn empty_stream_is_header_only() {
        assert_eq!(render(&["a", "b"], vec![], Format::Csv), "a,b\n");
        assert_eq!(render(&["a", "b"], vec![], Format::Json), "[\n]\n");
    }

    #[test]
    fn csv_and_json_agree() {
        let rows = vec![vec![Cell::from(1u64), Cell::from(0.1 + 0.2), Cell::from("x")]];
        assert_eq!(render(&["k", "v", "s"], rows.clone(), Format::Csv), "k,v,s\n1,0.3,x\n");
        let json: Value = serde_json::from_str(&render(&["k", "v", "s"], rows, Format::Json)).unwrap();
        assert_eq!(json, serde_json::json!([{"k": 1, "v": 0.3, "s": "x"}]));
    }

    #[test]
    fn big_integers_survive_json() {
        let rows = vec![vec![Cell::Int(614_889_782_588_491_410_i128 * 100)]];
        let json: Value = serde_json::from_str(&render(&["n"], rows, Format::Json)).unwrap();
        assert_eq!(json[0]["n"], "61488978258849141000");
    }
}
