//! CSV files: `t,re,im` (signals), `omega,re,im` (spectra), `k,re,im`
//! (sequences). Values are written with 17 significant digits so a write
//! followed by a read reproduces them bit for bit.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64 as C64;

use crate::error::{Result, SaftError};
use crate::signal::{Axis, SampleSeq, Sampled, UniformGrid};

/// Largest tolerated deviation of a coordinate from the uniform grid,
/// relative to the step.
pub const GRID_TOLERANCE: f64 = 1e-9;

#[inline]
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn rows<R: Read>(reader: R, label: &str) -> Result<Vec<[f64; 3]>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let header = rdr
        .headers()
        .map_err(|e| SaftError::MalformedCsv(e.to_string()))?
        .clone();
    let expected = [label, "re", "im"];
    if header.len() != 3 || header.iter().zip(expected).any(|(h, e)| h != e) {
        return Err(SaftError::MalformedCsv(format!(
            "expected header `{label},re,im`, found `{}`",
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| SaftError::MalformedCsv(e.to_string()))?;
        if rec.len() != 3 {
            return Err(SaftError::MalformedCsv(format!("row {}: expected 3 fields", i + 1)));
        }
        let mut r = [0.0; 3];
        for (j, field) in rec.iter().enumerate() {
            r[j] = field
                .parse()
                .map_err(|_| SaftError::MalformedCsv(format!("row {}: bad number `{field}`", i + 1)))?;
        }
        out.push(r);
    }
    Ok(out)
}

pub fn read_sampled<A: Axis, R: Read>(reader: R) -> Result<Sampled<A>> {
    let rows = rows(reader, A::LABEL)?;
    if rows.is_empty() {
        return Err(SaftError::EmptyGrid);
    }
    let n = rows.len();
    let t0 = rows[0][0];
    let dt = if n > 1 { (rows[n - 1][0] - t0) / (n - 1) as f64 } else { 1.0 };
    if n > 1 {
        if !(dt > 0.0) {
            return Err(SaftError::NonUniformGrid { row: 1 });
        }
        for (i, r) in rows.iter().enumerate() {
            if (r[0] - (t0 + i as f64 * dt)).abs() > GRID_TOLERANCE * dt {
                return Err(SaftError::NonUniformGrid { row: i + 1 });
            }
        }
    }
    let grid = UniformGrid::new(t0, dt, n)?;
    Sampled::new(grid, rows.iter().map(|r| C64::new(r[1], r[2])).collect())
}

pub fn write_sampled<A: Axis, W: Write>(writer: W, s: &Sampled<A>) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let io = |e: csv::Error| SaftError::Io(e.into());
    w.write_record([A::LABEL, "re", "im"]).map_err(io)?;
    for (t, v) in s.grid().points().zip(s.values()) {
        w.write_record([num(t), num(v.re), num(v.im)]).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_seq<R: Read>(reader: R) -> Result<SampleSeq> {
    let rows = rows(reader, "k")?;
    let Some(first) = rows.first() else {
        return Ok(SampleSeq::new(0, Vec::new()));
    };
    let offset = first[0] as i64;
    for (i, r) in rows.iter().enumerate() {
        if r[0] != (offset + i as i64) as f64 {
            return Err(SaftError::NonUniformGrid { row: i + 1 });
        }
    }
    Ok(SampleSeq::new(offset, rows.iter().map(|r| C64::new(r[1], r[2])).collect()))
}

pub fn write_seq<W: Write>(writer: W, s: &SampleSeq) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let io = |e: csv::Error| SaftError::Io(e.into());
    w.write_record(["k", "re", "im"]).map_err(io)?;
    for (k, v) in s.iter() {
        w.write_record([k.to_string(), num(v.re), num(v.im)]).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_signal_file<A: Axis>(path: impl AsRef<Path>) -> Result<Sampled<A>> {
    read_sampled(BufReader::new(File::open(path)?))
}

pub fn write_signal_file<A: Axis>(path: impl AsRef<Path>, s: &Sampled<A>) -> Result<()> {
    write_sampled(BufWriter::new(File::create(path)?), s)
}

pub fn read_seq_file(path: impl AsRef<Path>) -> Result<SampleSeq> {
    read_seq(BufReader::new(File::open(path)?))
}

pub fn write_seq_file(path: impl AsRef<Path>, s: &SampleSeq) -> Result<()> {
    write_seq(BufWriter::new(File::create(path)?), s)
}
