//! Link-probability estimation from a window of snapshots.
//!
//! [`mnbs_estimate`] is modified neighborhood smoothing: nodes are compared through the
//! rows of `Ā²/n`, each node keeps the lowest `q` fraction of its distances as its
//! neighborhood, and row `i` of the estimate is the mean of the neighbors' rows of `Ā`.
//! The neighborhood fraction `q` shrinks as the window grows, trading smoothing bias for
//! the variance reduction that averaging over time already provides.
//!
//! [`musvt_estimate`] is the spectral alternative: hard-threshold the eigenvalues of `Ā`
//! at `(2 + η)·√(n/T)` and clip to `[0, 1]`.

use alloc::vec;
use alloc::vec::Vec;

use libm::{ceil, log, sqrt};
use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::matrix::{average_adjacency, AdjacencySequence, DenseSymMatrix, LinkProbMatrix};
use crate::par;

/// Tuning constants for the estimators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorConfig {
    /// Neighborhood constant `B₀` in `q = B₀ log n / (√n ω)`.
    pub b0: f64,
    /// Eigenvalue-threshold margin `η ∈ (0, 1)` for MUSVT.
    pub eta: f64,
}

impl EstimatorConfig {
    pub fn new(b0: f64, eta: f64) -> Result<Self> {
        if !(b0 > 0.0 && b0.is_finite()) {
            return Err(Error::InvalidParameter { name: "B0", value: b0 });
        }
        if !(eta > 0.0 && eta < 1.0) {
            return Err(Error::InvalidParameter { name: "eta", value: eta });
        }
        Ok(Self { b0, eta })
    }
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        Self { b0: 3.0, eta: 0.01 }
    }
}

/// Per-node neighborhoods, 0-based node ids in ascending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborSets {
    sets: Vec<Vec<usize>>,
}

impl NeighborSets {
    /// Validates that every set is sorted, excludes its own node and stays in range.
    /// Empty sets are allowed here; smoothing rejects them.
    pub fn new(sets: Vec<Vec<usize>>) -> Result<Self> {
        let n = sets.len();
        for (i, s) in sets.iter().enumerate() {
            let sorted = s.windows(2).all(|w| w[0] < w[1]);
            if !sorted || s.iter().any(|&k| k == i || k >= n) {
                return Err(Error::InvalidParameter { name: "neighborhood", value: i as f64 });
            }
        }
        Ok(Self { sets })
    }

    pub fn n(&self) -> usize {
        self.sets.len()
    }

    pub fn get(&self, i: usize) -> &[usize] {
        &self.sets[i]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.sets.iter().map(Vec::len).collect()
    }
}

/// `D̃_{ii'} = max_{k ≠ i,i'} |(Ā²/n)_{ik} − (Ā²/n)_{i'k}|`, with zero diagonal.
pub fn pairwise_distance(abar: &DenseSymMatrix) -> Result<DenseSymMatrix> {
    let n = abar.n();
    if n < 3 {
        return Err(Error::TooFewNodes { n, min: 3 });
    }
    let nf = n as f64;
    // Ā is symmetric, so (Ā²)_{ij} is the dot product of rows i and j.
    let upper: Vec<Vec<f64>> = par::map_range(0..n, |i| {
        let ri = abar.row(i);
        (i..n)
            .map(|j| ri.iter().zip(abar.row(j)).map(|(a, b)| a * b).sum::<f64>() / nf)
            .collect()
    });
    let sq = DenseSymMatrix::from_upper(n, |i, j| upper[i][j - i]);

    let dist: Vec<Vec<f64>> = par::map_range(0..n, |i| {
        let ri = sq.row(i);
        ((i + 1)..n)
            .map(|j| {
                let rj = sq.row(j);
                let mut worst = 0.0f64;
                for k in 0..n {
                    if k != i && k != j {
                        worst = worst.max((ri[k] - rj[k]).abs());
                    }
                }
                worst
            })
            .collect()
    });
    Ok(DenseSymMatrix::from_upper(n, |i, j| if i == j { 0.0 } else { dist[i][j - i - 1] }))
}

/// Neighborhoods from the lower empirical `q`-quantile of each node's distances.
///
/// Node `i` keeps every `i' ≠ i` whose distance is at most the `m`-th smallest of
/// `{dist(i, i') : i' ≠ i}`, `m = max(1, ⌈q(n−1)⌉)`. Ties at the cutoff are all kept.
pub fn neighborhoods(dist: &DenseSymMatrix, q: f64) -> Result<NeighborSets> {
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::InvalidParameter { name: "q", value: q });
    }
    let n = dist.n();
    if n < 2 {
        return Err(Error::TooFewNodes { n, min: 2 });
    }
    let m = (ceil(q * (n - 1) as f64) as usize).clamp(1, n - 1);
    let sets = par::map_range(0..n, |i| {
        let row = dist.row(i);
        let mut others: Vec<f64> = (0..n).filter(|&k| k != i).map(|k| row[k]).collect();
        others.sort_unstable_by(f64::total_cmp);
        let cutoff = others[m - 1];
        (0..n).filter(|&k| k != i && row[k] <= cutoff).collect()
    });
    Ok(NeighborSets { sets })
}

/// `ω = min(√n, √(w log n))` for a window of `w` snapshots.
pub fn mnbs_omega(n: usize, window: usize) -> f64 {
    let n = n as f64;
    sqrt(n).min(sqrt(window as f64 * log(n)))
}

/// Neighborhood fraction `q = min(1, B₀ log n / (√n ω))`.
pub fn mnbs_q(n: usize, omega: f64, b0: f64) -> Result<f64> {
    if n < 3 {
        return Err(Error::TooFewNodes { n, min: 3 });
    }
    if omega.is_nan() || omega <= 0.0 {
        return Err(Error::InvalidParameter { name: "omega", value: omega });
    }
    if b0.is_nan() || b0 <= 0.0 {
        return Err(Error::InvalidParameter { name: "B0", value: b0 });
    }
    let nf = n as f64;
    Ok((b0 * log(nf) / (sqrt(nf) * omega)).min(1.0))
}

/// Averages rows of `Ā` over each neighborhood, then symmetrizes with `(P̃ + P̃ᵀ)/2`.
pub fn mnbs_smooth(abar: &DenseSymMatrix, nbhd: &NeighborSets) -> Result<LinkProbMatrix> {
    let n = abar.n();
    if nbhd.n() != n {
        return Err(Error::DimensionMismatch { left: n, right: nbhd.n() });
    }
    if let Some(node) = (0..n).find(|&i| nbhd.get(i).is_empty()) {
        return Err(Error::EmptyNeighborhood { node });
    }
    let raw: Vec<Vec<f64>> = par::map_range(0..n, |i| {
        let members = nbhd.get(i);
        let mut acc = vec![0.0; n];
        for &k in members {
            for (a, &v) in acc.iter_mut().zip(abar.row(k)) {
                *a += v;
            }
        }
        let size = members.len() as f64;
        acc.iter_mut().for_each(|a| *a /= size);
        acc
    });
    LinkProbMatrix::new(DenseSymMatrix::from_upper(n, |i, j| (raw[i][j] + raw[j][i]) / 2.0))
}

/// Result of one MNBS fit, with the neighborhood diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct MnbsFit {
    pub estimate: LinkProbMatrix,
    pub q: f64,
    pub neighbor_sizes: Vec<usize>,
}

/// MNBS on a precomputed window average of `window` snapshots.
pub fn mnbs_fit(abar: &DenseSymMatrix, window: usize, cfg: &EstimatorConfig) -> Result<MnbsFit> {
    let n = abar.n();
    if n < 3 {
        return Err(Error::TooFewNodes { n, min: 3 });
    }
    let q = mnbs_q(n, mnbs_omega(n, window), cfg.b0)?;
    let dist = pairwise_distance(abar)?;
    let nbhd = neighborhoods(&dist, q)?;
    let estimate = mnbs_smooth(abar, &nbhd)?;
    Ok(MnbsFit { estimate, q, neighbor_sizes: nbhd.sizes() })
}

/// MNBS estimate of the link-probability matrix behind snapshots `from..=to` (1-based).
pub fn mnbs_estimate(
    seq: &AdjacencySequence,
    from: usize,
    to: usize,
    cfg: &EstimatorConfig,
) -> Result<LinkProbMatrix> {
    let abar = average_adjacency(seq, from, to)?;
    Ok(mnbs_fit(&abar, to - from + 1, cfg)?.estimate)
}

/// Eigenvalue cutoff `(2 + η)·√(n/T)` used by MUSVT.
pub fn musvt_threshold(n: usize, window: usize, eta: f64) -> f64 {
    (2.0 + eta) * sqrt(n as f64 / window as f64)
}

/// Modified universal singular value thresholding on the window average `Ā`.
///
/// Keeps eigencomponents with `|λ| ≥ (2 + η)√(n/T)`, rebuilds, and clips to `[0, 1]`.
pub fn musvt_estimate(abar: &DenseSymMatrix, window: usize, eta: f64) -> Result<LinkProbMatrix> {
    let n = abar.n();
    if n == 0 {
        return Err(Error::TooFewNodes { n, min: 1 });
    }
    if window == 0 {
        return Err(Error::InvalidParameter { name: "T", value: 0.0 });
    }
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::InvalidParameter { name: "eta", value: eta });
    }
    let m = DMatrix::from_row_slice(n, n, abar.as_slice());
    let eig = SymmetricEigen::try_new(m, 1e-14, 10_000)
        .ok_or(Error::Numeric("symmetric eigendecomposition did not converge"))?;
    if eig.eigenvalues.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numeric("non-finite eigenvalue"));
    }
    let cutoff = musvt_threshold(n, window, eta);
    let kept: Vec<usize> = (0..n).filter(|&k| eig.eigenvalues[k].abs() >= cutoff).collect();
    let v = &eig.eigenvectors;
    let rebuilt = DenseSymMatrix::from_upper(n, |i, j| {
        let s: f64 = kept.iter().map(|&k| eig.eigenvalues[k] * v[(i, k)] * v[(j, k)]).sum();
        s.clamp(0.0, 1.0)
    });
    LinkProbMatrix::new(rebuilt)
}
