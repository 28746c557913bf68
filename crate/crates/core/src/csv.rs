//! Deterministic CSV output: `,` delimiter, `\n` line endings, header first,
//! floats with 17 significant digits.

use std::fmt::Write as _;
use std::io::{self, Write};

use crate::C64;

/// `{:.16e}`, with `inf`, `-inf` and `nan` spelled out.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Field {
    Float(f64),
    Int(i64),
    Text(String),
}

impl From<f64> for Field {
    fn from(x: f64) -> Self {
        Field::Float(x)
    }
}

impl From<bool> for Field {
    fn from(b: bool) -> Self {
        Field::Int(b as i64)
    }
}

impl From<usize> for Field {
    fn from(n: usize) -> Self {
        Field::Int(n as i64)
    }
}

impl From<&str> for Field {
    fn from(s: &str) -> Self {
        Field::Text(s.to_string())
    }
}

impl From<String> for Field {
    fn from(s: String) -> Self {
        Field::Text(s)
    }
}

impl std::fmt::Display for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Field::Float(x) => f.write_str(&fmt_f64(*x)),
            Field::Int(n) => write!(f, "{n}"),
            Field::Text(s) => f.write_str(s),
        }
    }
}

/// Pushes `re, im` of each complex value.
pub fn push_complex(row: &mut Vec<Field>, z: C64) {
    row.push(Field::Float(z.re));
    row.push(Field::Float(z.im));
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Field>>,
}

impl Table {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        Self { header: header.iter().map(|s| s.as_ref().to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Field>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            for (i, field) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                let _ = write!(out, "{field}");
            }
            out.push('\n');
        }
        out
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> io::Result<()> {
        w.write_all(self.render().as_bytes())
    }
}

/// Parses a rendered table back; fields that parse as `f64` become floats.
pub fn parse(text: &str) -> Option<Table> {
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next()?.split(',').collect();
    let mut table = Table::new(&header);
    for line in lines {
        let row: Vec<Field> = line
            .split(',')
            .map(|s| match s.parse::<f64>() {
                Ok(x) => Field::Float(x),
                Err(_) => Field::Text(s.to_string()),
            })
            .collect();
        if row.len() != header.len() {
            return None;
        }
        table.rows.push(row);
    }
    Some(table)
}

impl Field {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Field::Float(x) => Some(*x),
            Field::Int(n) => Some(*n as f64),
            Field::Text(_) => None,
        }
    }
}
