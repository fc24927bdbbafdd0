//! Observation containers and CSV ingestion.
//!
//! CSV input is UTF-8, comma separated, with one header row. Cells are parsed
//! with Rust's locale-independent float grammar (dot decimal separator).
//! Row numbers in errors count data rows from 1.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Paired observations `(x_i, y_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset<T> {
    x: Vec<T>,
    y: Vec<T>,
}

impl<T: Scalar> Dataset<T> {
    pub fn new(x: Vec<T>, y: Vec<T>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::LengthMismatch(format!("x has {}, y has {}", x.len(), y.len())));
        }
        if x.is_empty() {
            return Err(Error::EmptyDataset);
        }
        if let Some(row) = x.iter().zip(&y).position(|(a, b)| !a.is_finite() || !b.is_finite()) {
            return Err(Error::NonFinite { row: row + 1 });
        }
        Ok(Dataset { x, y })
    }

    pub fn from_points(points: &[(T, T)]) -> Result<Self> {
        Self::new(
            points.iter().map(|p| p.0).collect(),
            points.iter().map(|p| p.1).collect(),
        )
    }

    pub fn x(&self) -> &[T] {
        &self.x
    }

    pub fn y(&self) -> &[T] {
        &self.y
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn points(&self) -> impl Iterator<Item = (T, T)> + '_ {
        self.x.iter().copied().zip(self.y.iter().copied())
    }

    /// Applies `f` to every point.
    pub fn map_points(&self, mut f: impl FnMut(T, T) -> (T, T)) -> Result<Self> {
        let (x, y) = self.points().map(|(a, b)| f(a, b)).unzip();
        Self::new(x, y)
    }

    /// Number of distinct points.
    pub fn distinct_points(&self) -> usize {
        let mut pts: Vec<(T, T)> = self.points().collect();
        pts.sort_by(|a, b| {
            a.0.partial_cmp(&b.0)
                .unwrap()
                .then(a.1.partial_cmp(&b.1).unwrap())
        });
        pts.dedup();
        pts.len()
    }

    /// Writes `x,y` CSV with round-trip-exact decimal values.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "x,y")?;
        for (a, b) in self.points() {
            writeln!(w, "{},{}", a.as_f64(), b.as_f64())?;
        }
        Ok(())
    }
}

/// A response column plus `p` named explanatory columns.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiDataset<T> {
    response: Vec<T>,
    explanatory: Vec<Vec<T>>,
    column_names: Vec<String>,
}

impl<T: Scalar> MultiDataset<T> {
    /// `explanatory` is column-major: one `Vec` per explanatory variable.
    pub fn new(response: Vec<T>, explanatory: Vec<Vec<T>>, column_names: Vec<String>) -> Result<Self> {
        if response.is_empty() {
            return Err(Error::EmptyDataset);
        }
        if explanatory.len() != column_names.len() {
            return Err(Error::LengthMismatch(format!(
                "{} columns but {} names",
                explanatory.len(),
                column_names.len()
            )));
        }
        let n = response.len();
        for (name, col) in column_names.iter().zip(&explanatory) {
            if col.len() != n {
                return Err(Error::LengthMismatch(format!(
                    "column `{name}` has {} rows, response has {n}",
                    col.len()
                )));
            }
        }
        for row in 0..n {
            if !response[row].is_finite() || explanatory.iter().any(|c| !c[row].is_finite()) {
                return Err(Error::NonFinite { row: row + 1 });
            }
        }
        Ok(MultiDataset { response, explanatory, column_names })
    }

    pub fn response(&self) -> &[T] {
        &self.response
    }

    pub fn explanatory(&self) -> &[Vec<T>] {
        &self.explanatory
    }

    pub fn column_names(&self) -> &[String] {
        &self.column_names
    }

    pub fn n(&self) -> usize {
        self.response.len()
    }

    pub fn p(&self) -> usize {
        self.explanatory.len()
    }
}

/// Column-major numeric table read from CSV. `select` maps the header to the
/// column names to extract.
fn read_table<T: Scalar, R: Read>(
    reader: R,
    select: impl FnOnce(&[String]) -> Vec<String>,
) -> Result<(Vec<String>, Vec<Vec<T>>)> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers: Vec<String> = rdr
        .headers()
        .map_err(|e| Error::Io(e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    let wanted = select(&headers);
    let idx: Vec<usize> = wanted
        .iter()
        .map(|name| {
            headers
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| Error::NamedColumnMissing(name.clone()))
        })
        .collect::<Result<_>>()?;
    let mut columns: Vec<Vec<T>> = vec![Vec::new(); wanted.len()];
    for (i, record) in rdr.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| Error::Io(e.to_string()))?;
        for (k, &col) in idx.iter().enumerate() {
            let cell = record.get(col).unwrap_or("");
            let v = cell
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .map(T::lit)
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::Parse {
                    row,
                    column: wanted[k].clone(),
                    value: cell.to_string(),
                })?;
            columns[k].push(v);
        }
    }
    if columns.first().map_or(true, Vec::is_empty) {
        return Err(Error::EmptyDataset);
    }
    Ok((wanted, columns))
}

/// Reads two named columns as `(x, y)` observations.
pub fn read_csv<T: Scalar, R: Read>(reader: R, x_col: &str, y_col: &str) -> Result<Dataset<T>> {
    let (_, mut cols) = read_table::<T, _>(reader, |_| vec![x_col.to_string(), y_col.to_string()])?;
    let y = cols.pop().unwrap();
    let x = cols.pop().unwrap();
    Dataset::new(x, y)
}

pub fn load_csv<T: Scalar>(path: impl AsRef<Path>, x_col: &str, y_col: &str) -> Result<Dataset<T>> {
    read_csv(std::fs::File::open(path)?, x_col, y_col)
}

/// Reads one named column, e.g. for univariate analysis.
pub fn read_csv_column<T: Scalar, R: Read>(reader: R, col: &str) -> Result<Vec<T>> {
    Ok(read_table::<T, _>(reader, |_| vec![col.to_string()])?.1.pop().unwrap())
}

/// Reads a response column and explanatory columns. With `explanatory = None`
/// every other header column is used, in file order.
pub fn read_csv_multi<T: Scalar, R: Read>(
    reader: R,
    response: &str,
    explanatory: Option<&[String]>,
) -> Result<MultiDataset<T>> {
    let (mut names, mut cols) = read_table::<T, _>(reader, |headers| {
        let mut wanted = vec![response.to_string()];
        match explanatory {
            Some(e) => wanted.extend(e.iter().cloned()),
            None => wanted.extend(headers.iter().filter(|h| *h != response).cloned()),
        }
        wanted
    })?;
    names.remove(0);
    let response = cols.remove(0);
    MultiDataset::new(response, cols, names)
}

pub fn load_csv_multi<T: Scalar>(
    path: impl AsRef<Path>,
    response: &str,
    explanatory: Option<&[String]>,
) -> Result<MultiDataset<T>> {
    read_csv_multi(std::fs::File::open(path)?, response, explanatory)
}
