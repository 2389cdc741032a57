//! CSV and JSON output. Floats are written as `{:.16e}`, which is locale independent and
//! carries the 17 significant digits needed to read back the same binary64.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use qnls_core::evolve::Diagnostics;
use qnls_core::{Complex64, ComplexField, Grid};
use serde::Serialize;

use crate::error::{CliError, CliResult};

pub const FIELD_HEADER: [&str; 3] = ["x", "re_phi", "im_phi"];
pub const DIAGNOSTICS_HEADER: [&str; 6] = [
    "t",
    "energy",
    "energy_rel_drift",
    "linf",
    "fourier_tail",
    "mass",
];

pub fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

/// A field snapshot exactly as stored on disk.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub xs: Vec<f64>,
    pub values: Vec<Complex64>,
}

impl Snapshot {
    pub fn from_field(field: &ComplexField) -> Self {
        Self {
            xs: field.grid().xs().to_vec(),
            values: field.values().to_vec(),
        }
    }

    /// Rebuilds the periodic grid from the sample count and the first node `x₀ = -πL`.
    pub fn grid(&self) -> CliResult<Grid> {
        let first = *self
            .xs
            .first()
            .ok_or_else(|| CliError::Validation("empty snapshot".into()))?;
        Ok(Grid::new(self.xs.len(), -first / std::f64::consts::PI)?)
    }

    pub fn to_field(&self) -> CliResult<ComplexField> {
        Ok(ComplexField::new(&self.grid()?, self.values.clone())?)
    }
}

fn csv_writer(path: &Path) -> CliResult<csv::Writer<BufWriter<File>>> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    Ok(csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(BufWriter::new(file)))
}

fn csv_err(path: &Path, e: csv::Error) -> CliError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => CliError::io(path, io),
        other => CliError::Validation(format!("{}: {other:?}", path.display())),
    }
}

/// Writes one header row and then `rows`, each formatted with [`fmt`].
pub fn write_table<'a, I>(path: &Path, header: &[&str], rows: I) -> CliResult<()>
where
    I: IntoIterator<Item = &'a [f64]>,
{
    let mut w = csv_writer(path)?;
    w.write_record(header).map_err(|e| csv_err(path, e))?;
    for row in rows {
        w.write_record(row.iter().map(|&v| fmt(v)))
            .map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

pub fn write_snapshot(path: &Path, snap: &Snapshot) -> CliResult<()> {
    let rows: Vec<[f64; 3]> = snap
        .xs
        .iter()
        .zip(&snap.values)
        .map(|(&x, v)| [x, v.re, v.im])
        .collect();
    write_table(path, &FIELD_HEADER, rows.iter().map(|r| &r[..]))
}

pub fn write_field(path: &Path, field: &ComplexField) -> CliResult<()> {
    write_snapshot(path, &Snapshot::from_field(field))
}

pub fn read_snapshot(path: &Path) -> CliResult<Snapshot> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    let mut r = csv::Reader::from_reader(std::io::BufReader::new(file));
    let header = r.headers().map_err(|e| csv_err(path, e))?;
    if header.iter().ne(FIELD_HEADER) {
        return Err(CliError::Validation(format!(
            "{}: expected header {}, got {}",
            path.display(),
            FIELD_HEADER.join(","),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut snap = Snapshot {
        xs: Vec::new(),
        values: Vec::new(),
    };
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| csv_err(path, e))?;
        let num = |i: usize| -> CliResult<f64> {
            let s = rec.get(i).unwrap_or("");
            s.trim().parse().map_err(|_| {
                CliError::Validation(format!(
                    "{}: row {}: bad number {s:?} in {}",
                    path.display(),
                    line + 2,
                    FIELD_HEADER[i]
                ))
            })
        };
        snap.xs.push(num(0)?);
        snap.values.push(Complex64::new(num(1)?, num(2)?));
    }
    Ok(snap)
}

pub fn write_diagnostics(path: &Path, d: &Diagnostics) -> CliResult<()> {
    let rows: Vec<[f64; 6]> = (0..d.len())
        .map(|i| {
            [
                d.times[i],
                d.energy[i],
                d.energy_rel_drift[i],
                d.linf[i],
                d.fourier_tail[i],
                d.mass[i],
            ]
        })
        .collect();
    write_table(path, &DIAGNOSTICS_HEADER, rows.iter().map(|r| &r[..]))
}

pub fn write_json(path: &Path, value: &impl Serialize) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).expect("output types serialize to JSON");
    text.push('\n');
    write_text(path, &text)
}

pub fn write_text(path: &Path, text: &str) -> CliResult<()> {
    let mut f = File::create(path).map_err(|e| CliError::io(path, e))?;
    f.write_all(text.as_bytes())
        .map_err(|e| CliError::io(path, e))
}

pub fn ensure_dir(path: &Path) -> CliResult<()> {
    std::fs::create_dir_all(path).map_err(|e| CliError::io(path, e))
}
