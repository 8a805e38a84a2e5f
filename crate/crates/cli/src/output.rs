//! File emission and the numeric CSV reader used by `plot`.

use std::fs;
use std::io::Write;
use std::path::Path;

use femlearn_core::{exact_solution, Error, Partition, PiecewiseLinear, Result};

pub const SOLUTION_HEADER: &str = "x,u_exact,u_approx";
pub const TRACE_HEADER: &str = "iter,cost,l2_error";
pub const REPORT_HEADER: &str = "method,n,l2_ref,h1_ref,l2_nn,h1_nn";

/// Samples strictly inside each mesh cell, in addition to the nodes.
pub const SAMPLES_PER_CELL: usize = 10;

/// Writes `contents` to a temporary file next to `path`, then renames it
/// into place, so readers never observe a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// Nodes of `p` plus `SAMPLES_PER_CELL` equispaced interior points per cell.
pub fn sample_points(p: &Partition<f64>) -> Vec<f64> {
    let nodes = p.nodes();
    let mut xs = Vec::with_capacity(nodes.len() + SAMPLES_PER_CELL * (nodes.len() - 1));
    for w in nodes.windows(2) {
        xs.push(w[0]);
        let h = w[1] - w[0];
        for j in 1..=SAMPLES_PER_CELL {
            xs.push(w[0] + h * j as f64 / (SAMPLES_PER_CELL + 1) as f64);
        }
    }
    xs.push(nodes[nodes.len() - 1]);
    xs
}

pub fn solution_csv(p: &Partition<f64>, eps: f64, approx: &PiecewiseLinear<f64>) -> String {
    let mut out = String::from(SOLUTION_HEADER);
    out.push('\n');
    for x in sample_points(p) {
        out += &format!(
            "{x:.16e},{:.16e},{:.16e}\n",
            exact_solution(eps, x),
            approx.eval(x)
        );
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub method: &'static str,
    pub n: usize,
    pub l2_ref: f64,
    pub h1_ref: f64,
    pub l2_nn: f64,
    pub h1_nn: f64,
}

pub fn report_csv(rows: &[ReportRow]) -> String {
    let mut out = String::from(REPORT_HEADER);
    out.push('\n');
    for r in rows {
        out += &format!(
            "{},{},{:.16e},{:.16e},{:.16e},{:.16e}\n",
            r.method, r.n, r.l2_ref, r.h1_ref, r.l2_nn, r.h1_nn
        );
    }
    out
}

/// A header plus numeric rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let c = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[c]).collect())
    }
}

/// Parses a comma-separated file whose first line is a header and whose
/// remaining lines are all numeric. Errors carry 1-based line numbers.
pub fn parse_numeric_csv(text: &str) -> Result<Table> {
    let parse_err = |line: usize, message: String| Error::Parse { line, message };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let header: Vec<String> = match lines.next() {
        Some((_, l)) if !l.is_empty() => l.split(',').map(|s| s.trim().to_string()).collect(),
        _ => return Err(parse_err(1, "missing header".into())),
    };
    let mut rows = Vec::new();
    let mut last = 1;
    for (line, l) in lines {
        last = line;
        if l.is_empty() {
            continue;
        }
        let fields: Vec<&str> = l.split(',').collect();
        if fields.len() != header.len() {
            return Err(parse_err(
                line,
                format!("expected {} fields, found {}", header.len(), fields.len()),
            ));
        }
        let row = fields
            .iter()
            .map(|f| {
                f.trim()
                    .parse::<f64>()
                    .map_err(|_| parse_err(line, format!("`{}` is not a number", f.trim())))
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(parse_err(last + 1, "no data rows".into()));
    }
    Ok(Table { header, rows })
}
