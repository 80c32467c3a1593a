//! CSV tables and the key=value run manifest.

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

/// One CSV field.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(u64),
    Text(String),
    Empty,
}

impl Cell {
    /// Floats carry 17 significant digits.
    pub fn render(&self) -> String {
        match self {
            Cell::Float(x) if x.is_nan() => "nan".into(),
            Cell::Float(x) if x.is_infinite() => if *x > 0.0 { "inf" } else { "-inf" }.into(),
            Cell::Float(x) => format!("{x:.16e}"),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Float)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n as u64)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(headers: impl IntoIterator<Item = S>) -> Self {
        Table {
            headers: headers.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.headers.iter().position(|h| h == name)
    }

    /// Float values of a column, `NaN` for non-float cells.
    pub fn floats(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.column(name)?;
        Some(
            self.rows
                .iter()
                .map(|r| match r[k] {
                    Cell::Float(x) => x,
                    Cell::Int(n) => n as f64,
                    _ => f64::NAN,
                })
                .collect(),
        )
    }

    pub fn write_to<W: Write>(&self, w: W) -> crate::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.headers)?;
        for row in &self.rows {
            out.write_record(row.iter().map(Cell::render))?;
        }
        out.flush()?;
        Ok(())
    }

    /// Writes to `path`, or to stdout when `None`.
    pub fn write(&self, path: Option<&Path>) -> crate::Result<()> {
        match path {
            Some(p) => self.write_to(File::create(p)?),
            None => self.write_to(io::stdout().lock()),
        }
    }
}

/// Ordered key=value pairs written next to the CSV.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Manifest(pub Vec<(String, String)>);

impl Manifest {
    /// Inserts or replaces `key`, keeping first-insertion order.
    pub fn set(&mut self, key: impl Into<String>, value: impl ToString) {
        let (key, value) = (key.into(), value.to_string());
        match self.0.iter_mut().find(|(k, _)| *k == key) {
            Some(slot) => slot.1 = value,
            None => self.0.push((key, value)),
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> io::Result<()> {
        for (k, v) in &self.0 {
            writeln!(w, "{k}={v}")?;
        }
        Ok(())
    }

    /// `<csv path>.manifest`.
    pub fn path_for(csv: &Path) -> PathBuf {
        let mut s = csv.as_os_str().to_owned();
        s.push(".manifest");
        PathBuf::from(s)
    }
}
