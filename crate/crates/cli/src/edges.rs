//! `t,i,j` edge-list CSV: one row per undirected edge occurrence, 0-based ids.

use std::io::{Read, Write};

use graphon_cpd_core::{AdjacencySequence, AdjacencySnapshot};
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Deserialize)]
struct EdgeRow {
    t: usize,
    i: usize,
    j: usize,
}

/// One normalized edge occurrence: `i <= j`, all ids 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct EdgeRecord {
    pub t: usize,
    pub i: usize,
    pub j: usize,
}

/// Reads the edge list into dense snapshots.
///
/// `n` and `len` default to the largest node id plus one and the largest time plus
/// one. When given they must cover every row. Rows with `i > j` are swapped and repeated
/// rows are harmless. Self-loops (`i == j`) are kept.
pub fn parse_edge_csv<R: Read>(reader: R, n: Option<usize>, len: Option<usize>) -> Result<AdjacencySequence, CliError> {
    let edges = read_edges(reader, n, len)?;
    let n = n.or_else(|| edges.iter().map(|e| e.j + 1).max()).unwrap_or(0);
    let len = len.or_else(|| edges.iter().map(|e| e.t + 1).max()).unwrap_or(0);
    if n == 0 || len == 0 {
        return Err(CliError::Data("edge list is empty; pass --n and --T to describe an empty network".into()));
    }
    let mut snaps = vec![AdjacencySnapshot::zeros(n); len];
    for e in edges {
        snaps[e.t].set_edge(e.i, e.j, true);
    }
    Ok(AdjacencySequence::new(snaps)?)
}

/// Reads and validates the rows without building snapshots.
pub fn read_edges<R: Read>(reader: R, n: Option<usize>, len: Option<usize>) -> Result<Vec<EdgeRecord>, CliError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["t", "i", "j"] {
        return Err(CliError::Data(format!("line 1: expected header `t,i,j`, found `{}`", headers.iter().collect::<Vec<_>>().join(","))));
    }
    let mut out = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            CliError::Data(format!("line {line}: unreadable row ({e})"))
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let row: EdgeRow = record
            .deserialize(Some(&headers))
            .map_err(|e| CliError::Data(format!("line {line}: malformed row `{}` ({e})", record.iter().collect::<Vec<_>>().join(","))))?;
        let (i, j) = if row.i <= row.j { (row.i, row.j) } else { (row.j, row.i) };
        if let Some(n) = n {
            if j >= n {
                return Err(CliError::Data(format!("line {line}: node id {j} is outside 0..{n}")));
            }
        }
        if let Some(len) = len {
            if row.t >= len {
                return Err(CliError::Data(format!("line {line}: time {} is outside 0..{len}", row.t)));
            }
        }
        out.push(EdgeRecord { t: row.t, i, j });
    }
    Ok(out)
}

/// Writes the canonical edge list: header, then every present edge sorted by `(t, i, j)`.
pub fn write_edge_csv<W: Write>(seq: &AdjacencySequence, mut out: W) -> std::io::Result<()> {
    writeln!(out, "t,i,j")?;
    for (t, snap) in seq.snapshots().iter().enumerate() {
        for i in 0..snap.n() {
            for j in i..snap.n() {
                if snap.has_edge(i, j) {
                    writeln!(out, "{t},{i},{j}")?;
                }
            }
        }
    }
    out.flush()
}
