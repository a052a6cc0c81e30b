//! Accuracy metrics, analytic signal levels, and the Monte Carlo benchmark harness.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use libm::pow;

use crate::cpd::{detect, DetectorParams};
use crate::error::{Error, Result};
use crate::genmodels::{scenario_sequence, ScenarioId, ScenarioSpec};
use crate::par;

/// Under- and over-segmentation distances between estimated and true change-points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoysenResult {
    /// `ξ(Ĵ‖J) = max_{b ∈ J} min_{a ∈ Ĵ} |a − b|`.
    pub xi1: usize,
    /// `ξ(J‖Ĵ) = max_{b ∈ Ĵ} min_{a ∈ J} |a − b|`; `None` when changes exist but none
    /// were found.
    pub xi2: Option<usize>,
}

fn directed(from: &[usize], to: &[usize]) -> usize {
    from.iter()
        .map(|&b| to.iter().map(|&a| a.abs_diff(b)).min().unwrap_or(0))
        .max()
        .unwrap_or(0)
}

/// Boysen distances with the empty-set conventions:
///
/// * truth nonempty, estimate empty: `ξ₁ = max(truth)`, `ξ₂` undefined;
/// * both empty: `(0, 0)`;
/// * truth empty, estimate nonempty: `ξ₁ = 0`, `ξ₂` measured against the boundary
///   points `{0, T}`.
pub fn boysen(est: &[usize], truth: &[usize], len: usize) -> Result<BoysenResult> {
    if let Some(&point) = est.iter().chain(truth).find(|&&p| p == 0 || p > len) {
        return Err(Error::PointOutOfRange { point, len });
    }
    Ok(match (est.is_empty(), truth.is_empty()) {
        (true, false) => BoysenResult { xi1: truth.iter().copied().max().unwrap_or(0), xi2: None },
        (true, true) => BoysenResult { xi1: 0, xi2: Some(0) },
        (false, true) => BoysenResult { xi1: 0, xi2: Some(directed(est, &[0, len])) },
        (false, false) => BoysenResult { xi1: directed(truth, est), xi2: Some(directed(est, truth)) },
    })
}

/// Squared signal separation between consecutive segment matrices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignalLevel {
    pub d2inf_sq: f64,
    pub frob_sq: f64,
}

/// Closed-form signal levels of a scenario, one per change-point.
///
/// These are leading-order expressions that ignore the integer parts in the block
/// memberships.
pub fn signal_level(scenario: ScenarioId, n: usize, len: usize) -> Result<Vec<SignalLevel>> {
    let (nf, tf) = (n as f64, len as f64);
    let t4 = pow(tf, 0.25);
    let n3 = pow(nf, 1.0 / 3.0);
    let merge = SignalLevel { d2inf_sq: 1.0 / (3.0 * t4 * n3), frob_sq: 2.0 / (9.0 * t4 * n3) };
    let switch_blocks = SignalLevel { d2inf_sq: 0.09, frob_sq: 8.0 * 0.09 / (3.0 * t4 * n3) };
    Ok(match scenario {
        ScenarioId::Dsbm(1) | ScenarioId::Dsbm(2) => vec![merge],
        ScenarioId::Dsbm(3) => vec![SignalLevel {
            d2inf_sq: 1.0 / (n3 * t4),
            frob_sq: 2.0 / (pow(nf, 4.0 / 3.0) * t4),
        }],
        ScenarioId::Dsbm(4) => vec![switch_blocks],
        ScenarioId::Dsbm(5) => vec![SignalLevel {
            d2inf_sq: 1.0 / (t4 * pow(nf, 0.25)),
            frob_sq: 1.0 / (t4 * pow(nf, 0.5)),
        }],
        ScenarioId::Dsbm(6) => {
            let v = 1.0 / (2.0 * t4 * n3);
            vec![SignalLevel { d2inf_sq: v, frob_sq: v }]
        }
        ScenarioId::Mdsbm(1) => vec![switch_blocks, merge, merge],
        ScenarioId::Mdsbm(2) => vec![switch_blocks, merge, merge, merge],
        other => return Err(Error::UnknownScenario(format!("{other} has no change-points"))),
    })
}

/// One line of a benchmark table.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub scenario: ScenarioId,
    pub len: usize,
    pub n: usize,
    pub mean_jhat: f64,
    pub mean_xi1: f64,
    /// `None` when every replication had an undefined `ξ₂`.
    pub mean_xi2: Option<f64>,
    pub reps: usize,
    /// Replications with undefined `ξ₂`, left out of `mean_xi2`.
    pub excluded: usize,
    pub seed: u64,
}

impl BenchRow {
    pub const CSV_HEADER: &'static str = "scenario,T,n,Jhat,xi1,xi2,reps,excluded";

    /// The row as one CSV record (no newline); an undefined mean prints as `NA`.
    pub fn to_csv_record(&self) -> String {
        let xi2 = match self.mean_xi2 {
            Some(v) => format!("{v}"),
            None => String::from("NA"),
        };
        format!(
            "{},{},{},{},{},{},{},{}",
            self.scenario, self.len, self.n, self.mean_jhat, self.mean_xi1, xi2, self.reps, self.excluded
        )
    }
}

/// Outcome of one replication.
#[derive(Debug, Clone, PartialEq)]
pub struct Replication {
    pub seed: u64,
    pub estimated: Vec<usize>,
    pub truth: Vec<usize>,
    pub boysen: BoysenResult,
}

/// Simulates, detects and scores one replication.
pub fn replicate(spec: &ScenarioSpec, params: &DetectorParams) -> Result<Replication> {
    let (seq, truth) = scenario_sequence(spec)?;
    let report = detect(&seq, params)?;
    let estimated = report.locations();
    let boysen = boysen(&estimated, &truth.changepoints, spec.len)?;
    Ok(Replication { seed: spec.seed, estimated, truth: truth.changepoints, boysen })
}

/// Averages `reps` replications; replication `r` uses seed `scenario.seed + r`.
pub fn monte_carlo(scenario: &ScenarioSpec, reps: usize, params: &DetectorParams) -> Result<BenchRow> {
    if reps == 0 {
        return Err(Error::InvalidParameter { name: "reps", value: 0.0 });
    }
    let runs = par::try_map_range(0..reps, |r| {
        let spec = ScenarioSpec { seed: scenario.seed.wrapping_add(r as u64), ..*scenario };
        replicate(&spec, params)
    })?;
    Ok(summarize(scenario, &runs))
}

/// Aggregates replications in index order.
pub fn summarize(scenario: &ScenarioSpec, runs: &[Replication]) -> BenchRow {
    let reps = runs.len();
    let mut jhat = 0.0;
    let mut xi1 = 0.0;
    let mut xi2 = 0.0;
    let mut defined = 0usize;
    for run in runs {
        jhat += run.estimated.len() as f64;
        xi1 += run.boysen.xi1 as f64;
        if let Some(v) = run.boysen.xi2 {
            xi2 += v as f64;
            defined += 1;
        }
    }
    BenchRow {
        scenario: scenario.id,
        len: scenario.len,
        n: scenario.n,
        mean_jhat: jhat / reps as f64,
        mean_xi1: xi1 / reps as f64,
        mean_xi2: (defined > 0).then(|| xi2 / defined as f64),
        reps,
        excluded: reps - defined,
        seed: scenario.seed,
    }
}
