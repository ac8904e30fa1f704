//! File formats: trajectory CSV, regeneration report, LIL curves and JSON.
//!
//! ```text
//! trajectory:    step,x1,...,xd,proj
//! regenerations: k,tau_k,delta_tau,dx1,...,dxd,block_sup
//! lil curve:     replica,n,statistic,term_main,term2,term3
//! lil envelope:  n,stat_max,stat_min,q99_abs_t2,q99_abs_t3
//! ```
//!
//! Floats are written in Rust's shortest round-trip form, so identical values
//! always produce identical bytes.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use rwre_core::lil::{ErrorTermReport, LilCurve};
use rwre_core::{RegenSample, Trajectory};
use serde::Serialize;

use crate::error::{LabError, Result};

pub(crate) fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| LabError::io(path, e))
}

fn flush(mut w: impl Write, path: &Path) -> Result<()> {
    w.flush().map_err(|e| LabError::io(path, e))
}

/// Pretty JSON with a trailing newline.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n").map_err(|e| LabError::io(path, e))?;
    flush(w, path)
}

fn dot_i64(x: &[i64], u: &[f64]) -> f64 {
    // `+ 0.0` turns a negative zero into "0" rather than "-0".
    x.iter().zip(u).map(|(&a, &b)| a as f64 * b).sum::<f64>() + 0.0
}

pub fn write_trajectory<W: Write>(out: W, t: &Trajectory, ell: &[f64]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let d = t.dimension();
    let mut header = vec!["step".to_string()];
    header.extend((1..=d).map(|i| format!("x{i}")));
    header.push("proj".into());
    w.write_record(&header)?;
    let mut row: Vec<String> = Vec::with_capacity(d + 2);
    for (k, x) in t.positions().enumerate() {
        row.clear();
        row.push(k.to_string());
        row.extend(x.iter().map(|c| c.to_string()));
        row.push(dot_i64(x, ell).to_string());
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| LabError::io("<trajectory>", e))?;
    Ok(())
}

pub fn write_trajectory_file(path: &Path, t: &Trajectory, ell: &[f64]) -> Result<()> {
    let w = create(path)?;
    write_trajectory(w, t, ell).map_err(|e| relabel(e, path))
}

fn relabel(e: LabError, path: &Path) -> LabError {
    match e {
        LabError::Io { source, .. } => LabError::io(path, source),
        other => other,
    }
}

fn parse_err(line: u64, column: Option<usize>, message: impl Into<String>) -> LabError {
    LabError::Parse { line, column, message: message.into() }
}

/// Reads a trajectory CSV. The `proj` column is checked for syntax only;
/// projections are always recomputed from the coordinates.
///
/// Errors report 1-based file lines (the header is line 1) and columns.
pub fn read_trajectory<R: Read>(input: R) -> Result<Trajectory> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_reader(input);
    let mut records = rdr.records();
    let header = match records.next() {
        None => return Err(parse_err(1, None, "empty file: expected header step,x1,...,xd,proj")),
        Some(r) => r.map_err(|e| csv_parse_err(&e))?,
    };
    let fields: Vec<&str> = header.iter().map(str::trim).collect();
    let d = fields.len().saturating_sub(2);
    let valid = d >= 1
        && fields[0] == "step"
        && fields[d + 1] == "proj"
        && (1..=d).all(|i| fields[i] == format!("x{i}"));
    if !valid {
        return Err(parse_err(1, None, format!("bad header {:?}: expected step,x1,...,xd,proj", fields.join(","))));
    }
    let mut positions = Vec::new();
    let mut rows = 0usize;
    for rec in records {
        let rec = rec.map_err(|e| csv_parse_err(&e))?;
        let line = rec.position().map_or(rows as u64 + 2, |p| p.line());
        if rec.len() != d + 2 {
            return Err(parse_err(line, None, format!("expected {} fields, found {}", d + 2, rec.len())));
        }
        let step: usize = rec[0].trim().parse().map_err(|_| parse_err(line, Some(1), format!("bad step index {:?}", &rec[0])))?;
        if step != rows {
            return Err(parse_err(line, Some(1), format!("step index {step}, expected {rows}")));
        }
        for i in 1..=d {
            let x: i64 = rec[i].trim().parse().map_err(|_| parse_err(line, Some(i + 1), format!("bad coordinate {:?}", &rec[i])))?;
            positions.push(x);
        }
        rec[d + 1]
            .trim()
            .parse::<f64>()
            .map_err(|_| parse_err(line, Some(d + 2), format!("bad projection {:?}", &rec[d + 1])))?;
        rows += 1;
    }
    if rows == 0 {
        return Err(parse_err(2, None, "no data rows after the header"));
    }
    Trajectory::from_positions(d, positions).map_err(|(row, _)| {
        parse_err(row as u64 + 2, None, format!("row {row}: step from row {} is not a unit lattice step", row - 1))
    })
}

fn csv_parse_err(e: &csv::Error) -> LabError {
    let line = e.position().map_or(0, |p| p.line());
    parse_err(line, None, e.to_string())
}

pub fn read_trajectory_file(path: &Path) -> Result<Trajectory> {
    let f = File::open(path).map_err(|e| LabError::io(path, e))?;
    read_trajectory(std::io::BufReader::new(f))
}

/// Regeneration report; `tau_k` is recovered by summing block lengths.
pub fn write_regeneration_report<W: Write>(out: W, dim: usize, blocks: &[RegenSample]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["k".to_string(), "tau_k".into(), "delta_tau".into()];
    header.extend((1..=dim).map(|i| format!("dx{i}")));
    header.push("block_sup".into());
    w.write_record(&header)?;
    let mut tau = 0usize;
    for b in blocks {
        tau += b.delta_tau;
        let mut row = vec![b.k.to_string(), tau.to_string(), b.delta_tau.to_string()];
        row.extend(b.delta_x.iter().map(|x| x.to_string()));
        row.push(b.block_sup.to_string());
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| LabError::io("<regenerations>", e))?;
    Ok(())
}

pub fn write_regeneration_report_file(path: &Path, dim: usize, blocks: &[RegenSample]) -> Result<()> {
    write_regeneration_report(create(path)?, dim, blocks).map_err(|e| relabel(e, path))
}

/// One row of a regeneration report.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub k: usize,
    pub tau_k: usize,
    pub delta_tau: usize,
    pub dx: Vec<i64>,
    pub block_sup: f64,
}

pub fn read_regeneration_report<R: Read>(input: R) -> Result<Vec<ReportRow>> {
    let mut rdr = csv::ReaderBuilder::new().from_reader(input);
    let d = rdr.headers()?.len().saturating_sub(4);
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        let int = |i: usize| -> Result<i64> { rec[i].parse().map_err(|_| parse_err(line, Some(i + 1), "expected an integer")) };
        out.push(ReportRow {
            k: int(0)? as usize,
            tau_k: int(1)? as usize,
            delta_tau: int(2)? as usize,
            dx: (0..d).map(|i| int(3 + i)).collect::<Result<_>>()?,
            block_sup: rec[3 + d].parse().map_err(|_| parse_err(line, Some(4 + d), "expected a number"))?,
        });
    }
    Ok(out)
}

/// Curves of all replicas in replica order, one row per checkpoint.
pub fn write_lil_curves<W: Write>(out: W, curves: &[(usize, LilCurve)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["replica", "n", "statistic", "term_main", "term2", "term3"])?;
    for (replica, c) in curves {
        for i in 0..c.checkpoints.len() {
            w.write_record([
                replica.to_string(),
                c.checkpoints[i].to_string(),
                c.statistic[i].to_string(),
                c.term_main[i].to_string(),
                c.term2[i].to_string(),
                c.term3[i].to_string(),
            ])?;
        }
    }
    w.flush().map_err(|e| LabError::io("<lil curve>", e))?;
    Ok(())
}

pub fn write_lil_envelope<W: Write>(out: W, report: &ErrorTermReport) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "stat_max", "stat_min", "q99_abs_t2", "q99_abs_t3"])?;
    for r in &report.rows {
        w.write_record([
            r.n.to_string(),
            r.stat_max.to_string(),
            r.stat_min.to_string(),
            r.q99_abs_t2.to_string(),
            r.q99_abs_t3.to_string(),
        ])?;
    }
    w.flush().map_err(|e| LabError::io("<lil envelope>", e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(xs: &[i64]) -> Trajectory {
        Trajectory::from_positions(2, xs.iter().flat_map(|&x| [x, 0]).collect()).unwrap()
    }

    #[test]
    fn trajectory_round_trip() {
        let t = path(&[0, 1, 0, 1, 2, 3]);
        let mut buf = Vec::new();
        write_trajectory(&mut buf, &t, &[0.8, 0.6]).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("step,x1,x2,proj\n0,0,0,0\n1,1,0,0.8\n"));
        assert_eq!(read_trajectory(&buf[..]).unwrap(), t);
    }

    #[test]
    fn empty_file_is_a_parse_error() {
        assert!(matches!(read_trajectory(&b""[..]), Err(LabError::Parse { line: 1, .. })));
        assert!(matches!(read_trajectory(&b"step,x1,proj\n"[..]), Err(LabError::Parse { .. })));
    }

    #[test]
    fn non_unit_step_reports_row() {
        let text = "step,x1,x2,proj\n0,0,0,0\n1,1,0,1\n2,3,0,3\n";
        match read_trajectory(text.as_bytes()) {
            Err(LabError::Parse { line, message, .. }) => {
                assert_eq!(line, 4);
                assert!(message.contains("row 2"), "{message}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn malformed_cells_report_column() {
        let text = "step,x1,x2,proj\n0,0,0,0\n1,1,zz,1\n";
        assert!(matches!(read_trajectory(text.as_bytes()), Err(LabError::Parse { line: 3, column: Some(3), .. })));
        let text = "step,x1,x2,proj\n0,0,0,0\n2,1,0,1\n";
        assert!(matches!(read_trajectory(text.as_bytes()), Err(LabError::Parse { line: 3, column: Some(1), .. })));
        let text = "step,x1,x2,proj\n0,0,0\n";
        assert!(matches!(read_trajectory(text.as_bytes()), Err(LabError::Parse { line: 2, column: None, .. })));
        let text = "step,y1,x2,proj\n0,0,0,0\n";
        assert!(matches!(read_trajectory(text.as_bytes()), Err(LabError::Parse { line: 1, .. })));
    }

    #[test]
    fn report_round_trip() {
        let blocks = vec![
            RegenSample { k: 1, delta_tau: 4, delta_x: vec![2, 0], block_sup: 2.0, first_block: true },
            RegenSample { k: 2, delta_tau: 3, delta_x: vec![1, 0], block_sup: 1.5, first_block: false },
        ];
        let mut buf = Vec::new();
        write_regeneration_report(&mut buf, 2, &blocks).unwrap();
        assert!(String::from_utf8(buf.clone()).unwrap().starts_with("k,tau_k,delta_tau,dx1,dx2,block_sup\n1,4,4,2,0,2\n"));
        let rows = read_regeneration_report(&buf[..]).unwrap();
        assert_eq!(rows[1], ReportRow { k: 2, tau_k: 7, delta_tau: 3, dx: vec![1, 0], block_sup: 1.5 });
    }
}
