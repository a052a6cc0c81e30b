//! Dense symmetric containers for adjacency snapshots and link-probability matrices,
//! the two normalized matrix distances, and window averaging.
//!
//! All matrices are stored row-major as full `n × n` arrays. Constructors treat the upper
//! triangle (diagonal included) as authoritative and mirror it down, so every value of
//! these types is exactly symmetric.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// One observed network: a symmetric `n × n` 0/1 matrix. Self-edges are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjacencySnapshot {
    n: usize,
    entries: Vec<u8>,
}

impl AdjacencySnapshot {
    pub fn zeros(n: usize) -> Self {
        Self { n, entries: vec![0; n * n] }
    }

    /// Builds a snapshot from a predicate evaluated on the upper triangle `i <= j`.
    pub fn from_upper<F>(n: usize, mut edge: F) -> Self
    where
        F: FnMut(usize, usize) -> bool,
    {
        let mut snap = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                if edge(i, j) {
                    snap.set_edge(i, j, true);
                }
            }
        }
        snap
    }

    /// Validates a full row-major 0/1 matrix.
    pub fn from_row_major(n: usize, entries: Vec<u8>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch { left: n * n, right: entries.len() });
        }
        for i in 0..n {
            for j in i..n {
                let a = entries[i * n + j];
                if a > 1 || a != entries[j * n + i] {
                    return Err(Error::InvalidAdjacency { i, j });
                }
            }
        }
        Ok(Self { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.entries[i * self.n + j]
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.get(i, j) == 1
    }

    pub fn set_edge(&mut self, i: usize, j: usize, present: bool) {
        let v = u8::from(present);
        self.entries[i * self.n + j] = v;
        self.entries[j * self.n + i] = v;
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.entries
    }

    /// Number of present entries `i <= j` (each undirected edge once, self-edges once).
    pub fn edge_count(&self) -> usize {
        (0..self.n)
            .map(|i| self.row(i)[i..].iter().filter(|&&a| a == 1).count())
            .sum()
    }

    /// Relabels nodes: node `i` of `self` becomes node `perm[i]` of the result.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut out = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.entries[perm[i] * self.n + perm[j]] = self.get(i, j);
            }
        }
        out
    }
}

/// A dynamic network: `T >= 1` snapshots sharing one node set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjacencySequence {
    n: usize,
    snapshots: Vec<AdjacencySnapshot>,
}

impl AdjacencySequence {
    pub fn new(snapshots: Vec<AdjacencySnapshot>) -> Result<Self> {
        let n = snapshots.first().ok_or(Error::EmptySequence)?.n();
        if let Some((k, s)) = snapshots.iter().enumerate().find(|(_, s)| s.n() != n) {
            return Err(Error::NodeCountMismatch { t: k + 1, expected: n, found: s.n() });
        }
        Ok(Self { n, snapshots })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Sequence length `T`.
    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }

    /// Snapshot at 1-based time `t`.
    pub fn snapshot(&self, t: usize) -> Option<&AdjacencySnapshot> {
        t.checked_sub(1).and_then(|k| self.snapshots.get(k))
    }

    pub fn snapshots(&self) -> &[AdjacencySnapshot] {
        &self.snapshots
    }

    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self {
            n: self.n,
            snapshots: self.snapshots.iter().map(|s| s.permuted(perm)).collect(),
        }
    }

    pub(crate) fn check_window(&self, from: usize, to: usize) -> Result<()> {
        if from == 0 || from > to || to > self.len() {
            return Err(Error::WindowOutOfRange { from, to, len: self.len() });
        }
        Ok(())
    }
}

/// A dense symmetric real matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseSymMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    /// Evaluates `f` on the upper triangle and mirrors it.
    pub fn from_upper<F>(n: usize, mut f: F) -> Self
    where
        F: FnMut(usize, usize) -> f64,
    {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                data[i * n + j] = v;
                data[j * n + i] = v;
            }
        }
        Self { n, data }
    }

    /// Takes a row-major array; the upper triangle wins, the lower triangle is overwritten.
    pub fn from_row_major(n: usize, mut data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch { left: n * n, right: data.len() });
        }
        for i in 0..n {
            for j in (i + 1)..n {
                data[j * n + i] = data[i * n + j];
            }
        }
        Ok(Self { n, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self { n: self.n, data: self.data.iter().map(|v| v * c).collect() }
    }

    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut out = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.data[perm[i] * self.n + perm[j]] = self.get(i, j);
            }
        }
        out
    }
}

impl AsRef<DenseSymMatrix> for DenseSymMatrix {
    fn as_ref(&self) -> &DenseSymMatrix {
        self
    }
}

/// A symmetric matrix with every entry in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkProbMatrix(DenseSymMatrix);

impl LinkProbMatrix {
    pub fn new(m: DenseSymMatrix) -> Result<Self> {
        for i in 0..m.n() {
            for j in i..m.n() {
                let value = m.get(i, j);
                if !(0.0..=1.0).contains(&value) {
                    return Err(Error::ProbabilityOutOfRange { i, j, value });
                }
            }
        }
        Ok(Self(m))
    }

    pub fn constant(n: usize, p: f64) -> Result<Self> {
        Self::new(DenseSymMatrix::from_upper(n, |_, _| p))
    }

    pub fn n(&self) -> usize {
        self.0.n()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0.get(i, j)
    }

    pub fn as_dense(&self) -> &DenseSymMatrix {
        &self.0
    }

    pub fn into_dense(self) -> DenseSymMatrix {
        self.0
    }
}

impl AsRef<DenseSymMatrix> for LinkProbMatrix {
    fn as_ref(&self) -> &DenseSymMatrix {
        &self.0
    }
}

/// Entrywise mean of the snapshots at times `from..=to` (1-based, inclusive).
///
/// Sums run over `t` in ascending order. Since the summands are 0/1 the sums are exact
/// integers, so any window algorithm that adds the same snapshots agrees bitwise.
pub fn average_adjacency(seq: &AdjacencySequence, from: usize, to: usize) -> Result<DenseSymMatrix> {
    seq.check_window(from, to)?;
    let n = seq.n();
    let mut counts = vec![0u32; n * n];
    for snap in &seq.snapshots[from - 1..to] {
        for (c, &a) in counts.iter_mut().zip(snap.as_slice()) {
            *c += u32::from(a);
        }
    }
    let w = (to - from + 1) as f64;
    Ok(DenseSymMatrix { n, data: counts.into_iter().map(|c| f64::from(c) / w).collect() })
}

fn check_dims(p: &DenseSymMatrix, q: &DenseSymMatrix) -> Result<usize> {
    if p.n() != q.n() {
        return Err(Error::DimensionMismatch { left: p.n(), right: q.n() });
    }
    Ok(p.n())
}

fn row_sq_dist(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum()
}

/// Squared normalized 2,∞ distance: `max_i ‖P_i· − Q_i·‖² / n`.
///
/// The scan statistic is this value; computing it directly avoids a sqrt/square round trip.
pub fn dist_2inf_sq<P, Q>(p: &P, q: &Q) -> Result<f64>
where
    P: AsRef<DenseSymMatrix> + ?Sized,
    Q: AsRef<DenseSymMatrix> + ?Sized,
{
    let (p, q) = (p.as_ref(), q.as_ref());
    let n = check_dims(p, q)?;
    if n == 0 {
        return Ok(0.0);
    }
    let worst = (0..n).map(|i| row_sq_dist(p.row(i), q.row(i))).fold(0.0, f64::max);
    Ok(worst / n as f64)
}

/// Normalized 2,∞ distance `max_i n^{-1/2} ‖P_i· − Q_i·‖₂`.
pub fn dist_2inf<P, Q>(p: &P, q: &Q) -> Result<f64>
where
    P: AsRef<DenseSymMatrix> + ?Sized,
    Q: AsRef<DenseSymMatrix> + ?Sized,
{
    dist_2inf_sq(p, q).map(libm::sqrt)
}

/// Squared normalized Frobenius distance `‖P − Q‖_F² / n²`.
pub fn dist_frob_sq<P, Q>(p: &P, q: &Q) -> Result<f64>
where
    P: AsRef<DenseSymMatrix> + ?Sized,
    Q: AsRef<DenseSymMatrix> + ?Sized,
{
    let (p, q) = (p.as_ref(), q.as_ref());
    let n = check_dims(p, q)?;
    if n == 0 {
        return Ok(0.0);
    }
    Ok(row_sq_dist(p.as_slice(), q.as_slice()) / (n * n) as f64)
}

/// Normalized Frobenius distance `n^{-1} ‖P − Q‖_F`.
pub fn dist_frob<P, Q>(p: &P, q: &Q) -> Result<f64>
where
    P: AsRef<DenseSymMatrix> + ?Sized,
    Q: AsRef<DenseSymMatrix> + ?Sized,
{
    dist_frob_sq(p, q).map(libm::sqrt)
}
