//! File formats: symbol grids and generic numeric tables as CSV or JSON,
//! and state specifications.
//!
//! CSV files start with optional `# key=value` metadata lines, then a header
//! row. Floats are written with 17 significant digits so identical runs give
//! byte-identical files. JSON files carry the same columns and metadata.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{coherent_state, fock_state, FockOperator, QuantumState};
use crate::scheme::{LabelPoint, Measure, SymbolGrid};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    /// Guess from a file extension; anything but `.json` is CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => Format::Json,
            _ => Format::Csv,
        }
    }
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::InvalidConfig(format!("unknown format '{other}'"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

/// Fixed float formatting used in every CSV file.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// A numeric table with named columns and string metadata.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub metadata: BTreeMap<String, String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { metadata: BTreeMap::new(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn with_meta(mut self, key: &str, value: impl ToString) -> Self {
        self.metadata.insert(key.to_string(), value.to_string());
        self
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn write(&self, mut out: impl Write, format: Format) -> Result<()> {
        match format {
            Format::Csv => {
                for (k, v) in &self.metadata {
                    writeln!(out, "# {k}={v}")?;
                }
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.columns)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(|&x| fmt_f64(x)))?;
                }
                w.flush()?;
            }
            Format::Json => {
                serde_json::to_writer_pretty(&mut out, self)?;
                writeln!(out)?;
            }
        }
        Ok(())
    }

    pub fn read(mut input: impl Read, format: Format) -> Result<Self> {
        let mut text = String::new();
        input.read_to_string(&mut text)?;
        match format {
            Format::Json => Ok(serde_json::from_str(&text)?),
            Format::Csv => {
                let mut metadata = BTreeMap::new();
                let mut body = String::new();
                for line in text.lines() {
                    if let Some(meta) = line.strip_prefix('#') {
                        if let Some((k, v)) = meta.trim().split_once('=') {
                            metadata.insert(k.trim().to_string(), v.trim().to_string());
                        }
                    } else {
                        body.push_str(line);
                        body.push('\n');
                    }
                }
                let mut r = csv::Reader::from_reader(body.as_bytes());
                let columns: Vec<String> = r.headers()?.iter().map(|h| h.trim().to_string()).collect();
                let mut rows = Vec::new();
                for rec in r.records() {
                    let rec = rec?;
                    let row: std::result::Result<Vec<f64>, _> = rec.iter().map(|f| f.trim().parse::<f64>()).collect();
                    rows.push(row.map_err(|e| Error::InvalidConfig(format!("bad number in table: {e}")))?);
                }
                Ok(Self { metadata, columns, rows })
            }
        }
    }

    pub fn write_path(&self, path: &Path, format: Format) -> Result<()> {
        self.write(fs::File::create(path)?, format)
    }

    pub fn read_path(path: &Path) -> Result<Self> {
        Self::read(fs::File::open(path)?, Format::from_path(path))
    }
}

/// Label column names for a label kind.
pub fn label_columns(kind: &str) -> &'static [&'static str] {
    match kind {
        "phase" => &["q", "p"],
        "symplectic" => &["X", "mu", "nu"],
        _ => &["n", "alpha_re", "alpha_im"],
    }
}

fn label_values(x: &LabelPoint) -> Vec<f64> {
    match *x {
        LabelPoint::Phase { q, p } => vec![q, p],
        LabelPoint::Symplectic { x, mu, nu } => vec![x, mu, nu],
        LabelPoint::Photon { n, alpha } => vec![n as f64, alpha.re, alpha.im],
    }
}

/// Symbol grid as a table with columns `labels…, re, im, weight`.
pub fn symbol_table(grid: &SymbolGrid) -> Table {
    let kind = grid.labels().first().map(|l| l.kind()).unwrap_or("phase");
    let mut cols: Vec<&str> = label_columns(kind).to_vec();
    cols.extend(["re", "im", "weight"]);
    let mut t = Table::new(&cols).with_meta("measure", grid.measure().description());
    for ((x, w), v) in grid.labels().iter().zip(grid.weights()).zip(grid.values()) {
        let mut row = label_values(x);
        row.extend([v.re, v.im, *w]);
        t.push(row);
    }
    t
}

/// Inverse of [`symbol_table`]. The label kind is inferred from the header.
pub fn symbol_grid_from_table(t: &Table) -> Result<SymbolGrid> {
    let kind = ["phase", "symplectic", "photon"]
        .into_iter()
        .find(|k| label_columns(k).iter().all(|c| t.column(c).is_some()))
        .ok_or_else(|| Error::InvalidConfig(format!("unrecognized label columns {:?}", t.columns)))?;
    let idx: Vec<usize> = label_columns(kind).iter().map(|c| t.column(c).expect("checked")).collect();
    let find = |name: &str| t.column(name).ok_or_else(|| Error::InvalidConfig(format!("missing column '{name}'")));
    let (re, im, wt) = (find("re")?, find("im")?, find("weight")?);
    let mut labels = Vec::with_capacity(t.rows.len());
    let mut weights = Vec::with_capacity(t.rows.len());
    let mut values = Vec::with_capacity(t.rows.len());
    for row in &t.rows {
        let l = match kind {
            "phase" => LabelPoint::phase(row[idx[0]], row[idx[1]]),
            "symplectic" => LabelPoint::symplectic(row[idx[0]], row[idx[1]], row[idx[2]]),
            _ => {
                let n = row[idx[0]];
                if n < 0.0 || n.fract() != 0.0 {
                    return Err(Error::InvalidConfig(format!("photon number {n} is not a nonnegative integer")));
                }
                LabelPoint::photon(n as usize, C64::new(row[idx[1]], row[idx[2]]))
            }
        };
        labels.push(l);
        weights.push(row[wt]);
        values.push(C64::new(row[re], row[im]));
    }
    let desc = t.metadata.get("measure").cloned().unwrap_or_else(|| "from file".into());
    SymbolGrid::new(Arc::new(Measure::new(labels, weights, desc)?), values)
}

pub fn write_symbol_grid(grid: &SymbolGrid, out: impl Write, format: Format, metadata: &[(&str, String)]) -> Result<()> {
    let mut t = symbol_table(grid);
    for (k, v) in metadata {
        t.metadata.insert(k.to_string(), v.clone());
    }
    t.write(out, format)
}

pub fn read_symbol_grid(path: &Path) -> Result<SymbolGrid> {
    symbol_grid_from_table(&Table::read_path(path)?)
}

/// Operator matrix as a table with columns `row, col, re, im`.
pub fn operator_table(a: &FockOperator) -> Table {
    let mut t = Table::new(&["row", "col", "re", "im"]).with_meta("dim", a.dim());
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            let v = a.get(i, j);
            t.push(vec![i as f64, j as f64, v.re, v.im]);
        }
    }
    t
}

/// `"re,im"` or `"re"`.
pub fn parse_complex(s: &str) -> Result<C64> {
    let bad = || Error::InvalidConfig(format!("cannot parse complex number '{s}'"));
    let mut parts = s.split(',');
    let re = parts.next().ok_or_else(bad)?.trim().parse::<f64>().map_err(|_| bad())?;
    let im = match parts.next() {
        Some(p) => p.trim().parse::<f64>().map_err(|_| bad())?,
        None => 0.0,
    };
    if parts.next().is_some() || !re.is_finite() || !im.is_finite() {
        return Err(bad());
    }
    Ok(C64::new(re, im))
}

/// `fock:m`, `coherent:re,im`, or a path to a JSON state file.
#[derive(Clone, Debug, PartialEq)]
pub enum StateSpec {
    Fock(usize),
    Coherent(C64),
    File(PathBuf),
}

impl FromStr for StateSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Some(m) = s.strip_prefix("fock:") {
            let m = m.trim().parse().map_err(|_| Error::InvalidConfig(format!("bad Fock index in '{s}'")))?;
            Ok(StateSpec::Fock(m))
        } else if let Some(a) = s.strip_prefix("coherent:") {
            Ok(StateSpec::Coherent(parse_complex(a)?))
        } else if s.is_empty() {
            Err(Error::InvalidConfig("empty state specification".into()))
        } else {
            Ok(StateSpec::File(PathBuf::from(s)))
        }
    }
}

/// JSON state file: a mixture of simple states, or an explicit density matrix.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateFile {
    Mixture { components: Vec<MixtureComponent> },
    Matrix { re: Vec<Vec<f64>>, im: Option<Vec<Vec<f64>>> },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MixtureComponent {
    pub weight: f64,
    pub state: String,
}

impl StateSpec {
    pub fn build(&self, dim: usize) -> Result<QuantumState> {
        match self {
            StateSpec::Fock(m) => fock_state(*m, dim),
            StateSpec::Coherent(a) => coherent_state(*a, dim),
            StateSpec::File(path) => {
                let file: StateFile = serde_json::from_reader(fs::File::open(path)?)?;
                match file {
                    StateFile::Mixture { components } => {
                        let parts: Result<Vec<(f64, QuantumState)>> = components
                            .iter()
                            .map(|c| {
                                let spec: StateSpec = c.state.parse()?;
                                if matches!(spec, StateSpec::File(_)) {
                                    return Err(Error::InvalidConfig("nested state files are not supported".into()));
                                }
                                Ok((c.weight, spec.build(dim)?))
                            })
                            .collect();
                        QuantumState::mixture(&parts?)
                    }
                    StateFile::Matrix { re, im } => {
                        let n = re.len();
                        if n > dim {
                            return Err(Error::DimensionMismatch { expected: dim, got: n });
                        }
                        let m = DMatrix::from_fn(dim, dim, |i, j| {
                            let r = re.get(i).and_then(|row| row.get(j)).copied().unwrap_or(0.0);
                            let c = im.as_ref().and_then(|m| m.get(i)).and_then(|row| row.get(j)).copied().unwrap_or(0.0);
                            C64::new(r, c)
                        });
                        QuantumState::new(FockOperator::from_matrix(m)?)
                    }
                }
            }
        }
    }
}
