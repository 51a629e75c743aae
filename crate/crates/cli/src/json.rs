//! JSON output with 17-significant-digit floats and the matrix schema
//! `{"rows", "cols", "re", "im"}`.

use std::io;

use cvcluster::ComplexMatrix64;
use num_complex::Complex64;
use serde_json::ser::Formatter;
use serde_json::{json, Map, Value};

use crate::error::CliError;

/// Objects are indented, arrays are written on one line, floats in `{:.16e}`.
#[derive(Default)]
struct ReportFormatter {
    indent: usize,
    array_depth: usize,
    object_empty: Vec<bool>,
}

impl ReportFormatter {
    fn newline<W: ?Sized + io::Write>(&self, w: &mut W) -> io::Result<()> {
        w.write_all(b"\n")?;
        for _ in 0..self.indent {
            w.write_all(b"  ")?;
        }
        Ok(())
    }
}

impl Formatter for ReportFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, value as f64)
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.array_depth += 1;
        w.write_all(b"[")
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.array_depth -= 1;
        w.write_all(b"]")
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        if first {
            Ok(())
        } else {
            w.write_all(b", ")
        }
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, _w: &mut W) -> io::Result<()> {
        Ok(())
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.object_empty.push(true);
        if self.array_depth == 0 {
            self.indent += 1;
        }
        w.write_all(b"{")
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        let empty = self.object_empty.pop().unwrap_or(true);
        if self.array_depth == 0 {
            self.indent -= 1;
            if !empty {
                self.newline(w)?;
            }
        }
        w.write_all(b"}")
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        if let Some(e) = self.object_empty.last_mut() {
            *e = false;
        }
        if !first {
            w.write_all(b",")?;
        }
        if self.array_depth == 0 {
            self.newline(w)
        } else if first {
            Ok(())
        } else {
            w.write_all(b" ")
        }
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        w.write_all(b": ")
    }
}

/// Serializes a report; keys come out sorted, so output is reproducible.
pub fn to_string(value: &Value) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, ReportFormatter::default());
    serde::Serialize::serialize(value, &mut ser).expect("in-memory JSON serialization cannot fail");
    let mut s = String::from_utf8(buf).expect("serde_json emits UTF-8");
    s.push('\n');
    s
}

pub fn matrix(m: &ComplexMatrix64) -> Value {
    let rows = |f: fn(&Complex64) -> f64| -> Value {
        Value::Array(
            (0..m.rows())
                .map(|i| Value::Array((0..m.cols()).map(|j| json!(f(&m[(i, j)]))).collect()))
                .collect(),
        )
    };
    let mut obj = Map::new();
    obj.insert("rows".into(), json!(m.rows()));
    obj.insert("cols".into(), json!(m.cols()));
    obj.insert("re".into(), rows(|c| c.re));
    if m.as_slice().iter().any(|c| c.im != 0.0) {
        obj.insert("im".into(), rows(|c| c.im));
    }
    Value::Object(obj)
}

pub fn real_vector(v: &[f64]) -> Value {
    Value::Array(v.iter().map(|&x| json!(x)).collect())
}

fn number_grid(value: &Value, rows: usize, cols: usize, what: &str) -> Result<Vec<f64>, CliError> {
    let outer = value.as_array().ok_or_else(|| CliError::parse(format!("\"{what}\" must be an array of rows")))?;
    if outer.len() != rows {
        return Err(CliError::parse(format!("\"{what}\" has {} rows, expected {rows}", outer.len())));
    }
    let mut out = Vec::with_capacity(rows * cols);
    for (i, row) in outer.iter().enumerate() {
        let row = row.as_array().ok_or_else(|| CliError::parse(format!("\"{what}\" row {i} is not an array")))?;
        if row.len() != cols {
            return Err(CliError::parse(format!("\"{what}\" row {i} has {} entries, expected {cols}", row.len())));
        }
        for x in row {
            out.push(x.as_f64().ok_or_else(|| CliError::parse(format!("\"{what}\" row {i} holds a non-number")))?);
        }
    }
    Ok(out)
}

/// Reads the matrix schema; `im` defaults to zero.
pub fn parse_matrix(value: &Value) -> Result<ComplexMatrix64, CliError> {
    let obj = value.as_object().ok_or_else(|| CliError::parse("matrix must be a JSON object"))?;
    let dim = |key: &str| -> Result<usize, CliError> {
        obj.get(key)
            .and_then(Value::as_u64)
            .map(|v| v as usize)
            .ok_or_else(|| CliError::parse(format!("matrix needs a nonnegative integer \"{key}\"")))
    };
    let (rows, cols) = (dim("rows")?, dim("cols")?);
    let re = number_grid(obj.get("re").ok_or_else(|| CliError::parse("matrix needs \"re\""))?, rows, cols, "re")?;
    let im = match obj.get("im") {
        Some(v) => number_grid(v, rows, cols, "im")?,
        None => vec![0.0; rows * cols],
    };
    Ok(ComplexMatrix64::from_parts(rows, cols, &re, &im)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_matrix_omits_imaginary_part() {
        let m = ComplexMatrix64::from_real(1, 2, &[0.1, -2.0]).unwrap();
        let s = to_string(&matrix(&m));
        assert!(!s.contains("\"im\""));
        assert!(s.contains("1.0000000000000001e-1"));
        assert!(s.contains("-2.0000000000000000e0"));
    }

    #[test]
    fn matrices_round_trip_bit_for_bit() {
        let m = ComplexMatrix64::from_parts(2, 2, &[0.1, 1.0 / 3.0, -7e-300, 2.5e10], &[0.0, std::f64::consts::PI, 1e-17, -0.0]).unwrap();
        let text = to_string(&matrix(&m));
        let back = parse_matrix(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back.as_slice(), m.as_slice());
    }

    #[test]
    fn malformed_matrices_are_parse_errors() {
        for bad in [r#"{"rows":2,"cols":1,"re":[[1]]}"#, r#"{"rows":1,"cols":1,"re":[["x"]]}"#, r#"[1,2]"#, r#"{"cols":1,"re":[[1]]}"#] {
            let err = parse_matrix(&serde_json::from_str(bad).unwrap()).unwrap_err();
            assert_eq!(err.code, 2, "{bad}");
        }
    }
}
