//! Table rows and their CSV / JSON-lines rendering.

use std::io::Write;

use ancomb::BigRat;
use num_bigint::{BigInt, Sign};
use num_traits::{Signed, ToPrimitive, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(BigInt),
    Rat(BigRat),
    Float(f64),
    Text(String),
    Bool(bool),
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v.into())
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v.into())
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v.into())
    }
}

impl From<i32> for Cell {
    fn from(v: i32) -> Self {
        Cell::Int(v.into())
    }
}

impl From<BigInt> for Cell {
    fn from(v: BigInt) -> Self {
        Cell::Int(v)
    }
}

impl From<BigRat> for Cell {
    fn from(v: BigRat) -> Self {
        Cell::Rat(v)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

/// Ordered `(column, value)` pairs.
pub type Row = Vec<(String, Cell)>;

#[macro_export]
macro_rules! row {
    ($($k:expr => $v:expr),* $(,)?) => {
        vec![$(($k.to_string(), $crate::format::Cell::from($v))),*]
    };
}

/// `r` rounded half away from zero to `digits` decimals.
pub fn decimal(r: &BigRat, digits: u32) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits as usize);
    let scaled = r.abs() * BigRat::from_integer(scale);
    let rounded = (scaled + BigRat::new(1.into(), 2.into())).floor().to_integer();
    let mut s = rounded.to_string();
    if digits > 0 {
        let d = digits as usize;
        if s.len() <= d {
            s = format!("{}{}", "0".repeat(d + 1 - s.len()), s);
        }
        s.insert(s.len() - d, '.');
    }
    if r.is_negative() && rounded.sign() != Sign::NoSign {
        s.insert(0, '-');
    }
    s
}

fn float_text(v: f64) -> String {
    if v.is_finite() {
        serde_json::to_string(&v).expect("finite floats serialize")
    } else {
        v.to_string()
    }
}

fn rat_text(r: &BigRat, decimals: Option<u32>) -> String {
    match decimals {
        Some(d) => decimal(r, d),
        None => format!("{}/{}", r.numer(), r.denom()),
    }
}

fn plain(cell: &Cell, decimals: Option<u32>) -> String {
    match cell {
        Cell::Int(v) => v.to_string(),
        Cell::Rat(r) => rat_text(r, decimals),
        Cell::Float(v) => float_text(*v),
        Cell::Text(s) => s.clone(),
        Cell::Bool(b) => b.to_string(),
    }
}

fn json_value(cell: &Cell, decimals: Option<u32>) -> String {
    let quote = |s: &str| serde_json::to_string(s).expect("strings serialize");
    match cell {
        // integers beyond i64 stay exact as strings
        Cell::Int(v) if v.to_i64().is_some() || v.is_zero() => v.to_string(),
        Cell::Int(v) => quote(&v.to_string()),
        Cell::Rat(r) => quote(&rat_text(r, decimals)),
        Cell::Float(v) if v.is_finite() => float_text(*v),
        Cell::Float(_) => "null".into(),
        Cell::Text(s) => quote(s),
        Cell::Bool(b) => b.to_string(),
    }
}

/// Writes `rows` as one JSON object per line, or as CSV with a header taken
/// from the first row.
pub fn write_rows(out: &mut dyn Write, rows: &[Row], format: Format, decimals: Option<u32>) -> std::io::Result<()> {
    match format {
        Format::Json => {
            for row in rows {
                let fields: Vec<String> = row
                    .iter()
                    .map(|(k, v)| Ok(format!("{}:{}", serde_json::to_string(k)?, json_value(v, decimals))))
                    .collect::<Result<_, serde_json::Error>>()?;
                writeln!(out, "{{{}}}", fields.join(","))?;
            }
            Ok(())
        }
        Format::Csv => {
            let Some(first) = rows.first() else {
                return Ok(());
            };
            let mut w = csv::Writer::from_writer(out);
            w.write_record(first.iter().map(|(k, _)| k.as_str()))?;
            for row in rows {
                w.write_record(row.iter().map(|(_, v)| plain(v, decimals)))?;
            }
            w.flush()?;
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRat {
        BigRat::new(n.into(), d.into())
    }

    #[test]
    fn decimals_round_half_away() {
        assert_eq!(decimal(&r(1, 2), 0), "1");
        assert_eq!(decimal(&r(-1, 2), 0), "-1");
        assert_eq!(decimal(&r(1, 3), 4), "0.3333");
        assert_eq!(decimal(&r(2, 3), 4), "0.6667");
        assert_eq!(decimal(&r(-1, 1000), 2), "0.00");
        assert_eq!(decimal(&r(7, 2), 1), "3.5");
    }

    #[test]
    fn json_lines() {
        let rows = vec![row!("p" => 1u32, "x" => r(3, 4), "f" => 0.5, "ok" => true)];
        let mut buf = Vec::new();
        write_rows(&mut buf, &rows, Format::Json, None).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "{\"p\":1,\"x\":\"3/4\",\"f\":0.5,\"ok\":true}\n");
    }

    #[test]
    fn csv_quotes() {
        let rows = vec![row!("name" => "a,b", "v" => 2i64)];
        let mut buf = Vec::new();
        write_rows(&mut buf, &rows, Format::Csv, None).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "name,v\n\"a,b\",2\n");
    }
}
