//! CSV formats: point lists, square matrices, sample batches, grid masks and
//! violation reports.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::cd_sets::GridMark;
use crate::error::{Error, Result};
use crate::gaussian_field::SampleBatch;
use crate::geometry::{Point, Tolerance};
use crate::metrics::DistanceMatrix;
use crate::tree_checks::ViolationReport;

fn parse_float(field: &str, line: usize) -> Result<f64> {
    field.trim().parse::<f64>().map_err(|e| Error::Parse(format!("line {line}: `{field}`: {e}")))
}

/// Points with a header row `x1,...,xn`; every row must have `n` fields.
pub fn read_points<R: Read>(reader: R) -> Result<Vec<Point>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).flexible(false).from_reader(reader);
    let width = rdr.headers()?.len();
    if width == 0 {
        return Err(Error::Parse("missing header row".into()));
    }
    let mut points = Vec::new();
    for (k, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = k + 2;
        let coords = rec.iter().map(|f| parse_float(f, line)).collect::<Result<Vec<_>>>()?;
        points.push(Point::new(coords).map_err(|e| Error::Parse(format!("line {line}: {e}")))?);
    }
    if points.is_empty() {
        return Err(Error::Parse("no points in input".into()));
    }
    Ok(points)
}

pub fn write_points<W: Write>(writer: W, points: &[Point]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let dim = points.first().map_or(1, Point::dim);
    w.write_record((1..=dim).map(|i| format!("x{i}")))?;
    for p in points {
        w.write_record(p.coords().iter().map(f64::to_string))?;
    }
    w.flush()?;
    Ok(())
}

/// Header-less square matrix; checked for symmetry and zero diagonal.
pub fn read_matrix<R: Read>(reader: R, tol: Tolerance) -> Result<DistanceMatrix> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).flexible(false).from_reader(reader);
    let mut rows = Vec::new();
    for (k, rec) in rdr.records().enumerate() {
        let rec = rec?;
        rows.push(rec.iter().map(|f| parse_float(f, k + 1)).collect::<Result<Vec<_>>>()?);
    }
    if rows.is_empty() {
        return Err(Error::Parse("empty matrix".into()));
    }
    DistanceMatrix::from_rows(rows, tol)
}

/// Header-less `n × n` matrix given entrywise.
pub fn write_square<W: Write>(writer: W, n: usize, entry: impl Fn(usize, usize) -> f64) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(writer);
    for i in 0..n {
        w.write_record((0..n).map(|j| entry(i, j).to_string()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_matrix<W: Write>(writer: W, dm: &DistanceMatrix) -> Result<()> {
    write_square(writer, dm.n(), |i, j| dm.get(i, j))
}

/// Long format `rep,point_index,value`.
pub fn write_samples<W: Write>(writer: W, batch: &SampleBatch) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["rep", "point_index", "value"])?;
    for rep in 0..batch.reps {
        for (i, v) in batch.row(rep).iter().enumerate() {
            w.write_record([rep.to_string(), i.to_string(), v.to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// `x,y,member` with member `1`, `0` or `S`.
pub fn write_grid<W: Write>(writer: W, cells: &[(Point, GridMark)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["x", "y", "member"])?;
    for (p, m) in cells {
        w.write_record([p.x().to_string(), p.y().to_string(), m.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// `kind,indices,slack`; indices are `;`-separated.
pub fn write_violations<W: Write>(writer: W, reports: &[ViolationReport]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["kind", "indices", "slack"])?;
    for r in reports {
        let idx = r.witness.iter().map(usize::to_string).collect::<Vec<_>>().join(";");
        w.write_record([r.kind.to_string(), idx, r.slack.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn open_input(path: &Path) -> Result<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn create_output(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

pub fn read_points_file(path: &Path) -> Result<Vec<Point>> {
    read_points(open_input(path)?)
}

pub fn read_matrix_file(path: &Path, tol: Tolerance) -> Result<DistanceMatrix> {
    read_matrix(open_input(path)?, tol)
}
