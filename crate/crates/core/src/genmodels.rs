//! Synthetic dynamic networks: stochastic block models, graphons, and the change-point
//! scenarios built from them, with ground truth.
//!
//! Node `i` in the membership formulas below is 1-based, as in the model definitions;
//! the resulting matrices are indexed from 0 like everything else.
//!
//! | model    | blocks | membership                        | Λ                                 |
//! |----------|--------|-----------------------------------|-----------------------------------|
//! | SBM-I    | 2      | `i ≤ 2⌊n/3⌋`                      | `[[.6,.3],[.3,.6]]`               |
//! | SBM-II   | 2      | `i ≤ 2⌊n(1−Δ)/3⌋`                 | `[[.6,.3],[.3,.6]]`               |
//! | SBM-III  | 3      | thirds of `⌊n/3⌋`                 | `[[.6,.6−Δ,.3],[·,.6,.3],[·,·,.6]]` |
//! | SBM-IV   | 3      | thirds                            | `[[.6+Δ,.6,.3],[·,.6+Δ,.3],[·,·,.6]]` |
//! | SBM-V    | 3      | thirds                            | `[[.6+Δ,.6−Δ,.3],[·,.6+Δ,.3],[·,·,.6]]` |
//! | SBM-VI   | 2      | `i ≤ 2⌊n/3⌋`                      | `[[.6,.6−Δ],[·,.6]]`              |
//! | SBM-VII  | 2      | `i ≤ 2⌊n/3⌋ − 1`                  | `[[.6,.6−Δ],[·,.6]]`              |
//! | SBM-VIII | 2      | `i ≤ ⌊n^{3/4}⌋`                   | `[[.6,.3],[.3,.6]]`               |
//! | SBM-IX   | 2      | `i ≤ ⌊n^{3/4}⌋`                   | `[[.6−Δ,.3],[.3,.6]]`             |
//! | SBM-X    | 2      | `i ≤ ⌊n/2⌋`                       | `[[.6,.6−Δ],[·,.6]]`              |
//! | SBM-XI   | 2      | `i` odd                           | `[[.6,.6−Δ],[·,.6]]`              |

use alloc::borrow::ToOwned;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use libm::{cos, floor, log, pow, sin};

use crate::error::{Error, Result};
use crate::matrix::{AdjacencySequence, DenseSymMatrix, LinkProbMatrix};
use crate::par;
use crate::rng::{next_uniform, sample_snapshot, substream, LATENT_STREAM};

const ROMAN: [&str; 11] = ["I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX", "X", "XI"];

fn parse_roman(s: &str, max: usize) -> Option<usize> {
    ROMAN[..max].iter().position(|r| r.eq_ignore_ascii_case(s)).map(|k| k + 1)
}

/// One of the eleven block models, by 1-based index (`SbmId(3)` is SBM-III).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SbmId(u8);

impl SbmId {
    pub fn new(index: u8) -> Option<Self> {
        (1..=11).contains(&index).then_some(Self(index))
    }

    pub fn index(self) -> u8 {
        self.0
    }
}

impl fmt::Display for SbmId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SBM-{}", ROMAN[usize::from(self.0) - 1])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GraphonId {
    /// Block-diagonal steps `k/(K_B+1)` with `K_B = ⌊log n⌋`.
    I,
    /// `sin(5π(u+v−1)+1)/2 + 0.5`.
    II,
    /// `(u²+v²)/3 · cos(1/(u²+v²)) + 0.15`.
    III,
}

impl fmt::Display for GraphonId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = match self {
            GraphonId::I => "I",
            GraphonId::II => "II",
            GraphonId::III => "III",
        };
        write!(f, "Graphon-{r}")
    }
}

/// A single-snapshot network model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    Sbm(SbmId),
    Graphon(GraphonId),
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Model::Sbm(id) => id.fmt(f),
            Model::Graphon(id) => id.fmt(f),
        }
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownScenario(s.to_owned());
        let (family, roman) = s.split_once('-').ok_or_else(unknown)?;
        if family.eq_ignore_ascii_case("SBM") {
            let k = parse_roman(roman, 11).ok_or_else(unknown)?;
            Ok(Model::Sbm(SbmId(k as u8)))
        } else if family.eq_ignore_ascii_case("Graphon") {
            match parse_roman(roman, 3).ok_or_else(unknown)? {
                1 => Ok(Model::Graphon(GraphonId::I)),
                2 => Ok(Model::Graphon(GraphonId::II)),
                _ => Ok(Model::Graphon(GraphonId::III)),
            }
        } else {
            Err(unknown())
        }
    }
}

/// How a scenario segment's `Δ_nT` scales with `(n, T)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaRate {
    /// `1 / (n^{1/6} T^{1/8})`
    Slow,
    /// `2 / (n^{1/3} T^{1/4})`
    Fast,
    /// `1 / T^{1/8}`
    TimeOnly,
}

impl DeltaRate {
    pub fn value(self, n: usize, len: usize) -> f64 {
        let (n, t) = (n as f64, len as f64);
        match self {
            DeltaRate::Slow => 1.0 / (pow(n, 1.0 / 6.0) * pow(t, 1.0 / 8.0)),
            DeltaRate::Fast => 2.0 / (pow(n, 1.0 / 3.0) * pow(t, 0.25)),
            DeltaRate::TimeOnly => 1.0 / pow(t, 1.0 / 8.0),
        }
    }
}

/// A named synthetic scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScenarioId {
    /// DSBM-I .. DSBM-VI, single change-point at `T/2`.
    Dsbm(u8),
    /// MDSBM-I (three change-points) and MDSBM-II (four).
    Mdsbm(u8),
    /// A change-free sequence drawn from one model.
    NoChange(Model),
}

/// One constant piece of a scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Segment {
    pub model: Model,
    /// The `Δ_nT` plugged into the model (ignored by models without `Δ`).
    pub rate: DeltaRate,
}

impl ScenarioId {
    pub fn segments(self) -> Vec<Segment> {
        use DeltaRate::*;
        let sbm = |k: u8, rate| Segment { model: Model::Sbm(SbmId(k)), rate };
        match self {
            ScenarioId::Dsbm(1) => vec![sbm(3, Slow), sbm(1, Slow)],
            ScenarioId::Dsbm(2) => vec![sbm(3, Slow), sbm(5, Slow)],
            ScenarioId::Dsbm(3) => vec![sbm(6, Slow), sbm(7, Slow)],
            ScenarioId::Dsbm(4) => vec![sbm(1, Fast), sbm(2, Fast)],
            ScenarioId::Dsbm(5) => vec![sbm(8, TimeOnly), sbm(9, TimeOnly)],
            ScenarioId::Dsbm(6) => vec![sbm(10, Slow), sbm(11, Slow)],
            ScenarioId::Mdsbm(1) => vec![sbm(2, Fast), sbm(1, Slow), sbm(3, Slow), sbm(5, Slow)],
            ScenarioId::Mdsbm(2) => {
                vec![sbm(2, Fast), sbm(1, Slow), sbm(3, Slow), sbm(1, Slow), sbm(4, Slow)]
            }
            ScenarioId::NoChange(model) => vec![Segment { model, rate: Slow }],
            ScenarioId::Dsbm(_) | ScenarioId::Mdsbm(_) => unreachable!("validated at parse"),
        }
    }

    /// Number of equal-length segments; `T` must be a multiple of it.
    pub fn segment_count(self) -> usize {
        self.segments().len()
    }
}

impl fmt::Display for ScenarioId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScenarioId::Dsbm(k) => write!(f, "DSBM-{}", ROMAN[usize::from(*k) - 1]),
            ScenarioId::Mdsbm(k) => write!(f, "MDSBM-{}", ROMAN[usize::from(*k) - 1]),
            ScenarioId::NoChange(m) => write!(f, "NOCHANGE-{m}"),
        }
    }
}

impl FromStr for ScenarioId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownScenario(s.to_owned());
        let (family, rest) = s.split_once('-').ok_or_else(unknown)?;
        if family.eq_ignore_ascii_case("NOCHANGE") {
            return rest.parse().map(ScenarioId::NoChange).map_err(|_| unknown());
        }
        if family.eq_ignore_ascii_case("DSBM") {
            parse_roman(rest, 6).map(|k| ScenarioId::Dsbm(k as u8)).ok_or_else(unknown)
        } else if family.eq_ignore_ascii_case("MDSBM") {
            parse_roman(rest, 2).map(|k| ScenarioId::Mdsbm(k as u8)).ok_or_else(unknown)
        } else {
            Err(unknown())
        }
    }
}

/// `Δ_nT` of segment `segment` (0-based) of a scenario.
pub fn delta_nt(scenario: ScenarioId, segment: usize, n: usize, len: usize) -> Result<f64> {
    let seg = scenario
        .segments()
        .get(segment)
        .copied()
        .ok_or(Error::InvalidParameter { name: "segment", value: segment as f64 })?;
    Ok(seg.rate.value(n, len))
}

/// Largest `m` with `m⁴ ≤ n³`, i.e. `⌊n^{3/4}⌋` without rounding trouble.
fn floor_three_quarter_power(n: usize) -> usize {
    let cube = (n as u128).pow(3);
    let mut m = floor(pow(n as f64, 0.75)) as u128;
    while m.pow(4) > cube {
        m -= 1;
    }
    while (m + 1).pow(4) <= cube {
        m += 1;
    }
    m as usize
}

/// A block model instantiated for `n` nodes and a given `Δ`.
#[derive(Debug, Clone, PartialEq)]
pub struct SbmSpec {
    pub id: SbmId,
    pub blocks: usize,
    /// 0-based block of each 0-based node.
    pub membership: Vec<usize>,
    /// Row-major `blocks × blocks` connectivity.
    pub lambda: Vec<f64>,
}

impl SbmSpec {
    pub fn new(id: SbmId, n: usize, delta: f64) -> Result<Self> {
        let third = n / 3;
        // `first_block(c)` puts 1-based nodes 1..=c in block 0 and the rest in block 1.
        let first_block = |c: usize| (1..=n).map(|i| usize::from(i > c)).collect::<Vec<_>>();
        let thirds = || {
            (1..=n)
                .map(|i| {
                    if i <= third {
                        0
                    } else if i <= 2 * third {
                        1
                    } else {
                        2
                    }
                })
                .collect::<Vec<_>>()
        };
        let d = delta;
        let l3 = vec![0.6, 0.3, 0.3, 0.6];
        let l5 = vec![0.6, 0.6 - d, 0.6 - d, 0.6];
        let three = |a: f64, b: f64, c: f64| vec![a, b, 0.3, b, c, 0.3, 0.3, 0.3, 0.6];
        let (blocks, membership, lambda) = match id.0 {
            1 => (2, first_block(2 * third), l3),
            2 => {
                let c = floor(n as f64 * (1.0 - d) / 3.0).max(0.0) as usize;
                (2, first_block(2 * c), l3)
            }
            3 => (3, thirds(), three(0.6, 0.6 - d, 0.6)),
            4 => (3, thirds(), three(0.6 + d, 0.6, 0.6 + d)),
            5 => (3, thirds(), three(0.6 + d, 0.6 - d, 0.6 + d)),
            6 => (2, first_block(2 * third), l5),
            7 => (2, first_block((2 * third).saturating_sub(1)), l5),
            8 => (2, first_block(floor_three_quarter_power(n)), l3),
            9 => (2, first_block(floor_three_quarter_power(n)), vec![0.6 - d, 0.3, 0.3, 0.6]),
            10 => (2, first_block(n / 2), l5),
            11 => (2, (1..=n).map(|i| usize::from(i % 2 == 0)).collect(), l5),
            _ => unreachable!("SbmId is validated"),
        };
        for a in 0..blocks {
            for b in 0..blocks {
                let value = lambda[a * blocks + b];
                if !(0.0..=1.0).contains(&value) {
                    return Err(Error::ProbabilityOutOfRange { i: a, j: b, value });
                }
            }
        }
        Ok(Self { id, blocks, membership, lambda })
    }

    pub fn matrix(&self) -> LinkProbMatrix {
        let n = self.membership.len();
        let m = DenseSymMatrix::from_upper(n, |i, j| {
            self.lambda[self.membership[i] * self.blocks + self.membership[j]]
        });
        LinkProbMatrix::new(m).expect("Λ validated at construction")
    }
}

/// `P_ij = Λ_{M(i), M(j)}` for the given model, size and `Δ`.
pub fn sbm_matrix(id: SbmId, n: usize, delta: f64) -> Result<LinkProbMatrix> {
    Ok(SbmSpec::new(id, n, delta)?.matrix())
}

/// A graphon bound to a network size (Graphon-I's block count depends on `n`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphonSpec {
    pub id: GraphonId,
    pub blocks: usize,
}

impl GraphonSpec {
    pub fn new(id: GraphonId, n: usize) -> Self {
        let blocks = (floor(log(n.max(1) as f64)) as usize).max(1);
        Self { id, blocks }
    }

    fn step_block(&self, u: f64) -> usize {
        // [(k−1)/K, k/K) with the last block closed at 1.
        (floor(u * self.blocks as f64) as usize).min(self.blocks - 1)
    }

    pub fn eval(&self, u: f64, v: f64) -> f64 {
        match self.id {
            GraphonId::I => {
                let k = self.step_block(u);
                let scale = (self.blocks + 1) as f64;
                if k == self.step_block(v) {
                    (k + 1) as f64 / scale
                } else {
                    0.3 / scale
                }
            }
            GraphonId::II => sin(5.0 * core::f64::consts::PI * (u + v - 1.0) + 1.0) / 2.0 + 0.5,
            GraphonId::III => {
                let r = u * u + v * v;
                // The oscillating term vanishes at the origin.
                if r == 0.0 {
                    0.15
                } else {
                    r / 3.0 * cos(1.0 / r) + 0.15
                }
            }
        }
    }
}

/// `P_ij = f(ξ_i, ξ_j)`.
pub fn graphon_matrix(spec: &GraphonSpec, xi: &[f64]) -> Result<LinkProbMatrix> {
    if let Some(&bad) = xi.iter().find(|x| !(0.0..=1.0).contains(*x)) {
        return Err(Error::InvalidParameter { name: "xi", value: bad });
    }
    LinkProbMatrix::new(DenseSymMatrix::from_upper(xi.len(), |i, j| spec.eval(xi[i], xi[j])))
}

/// Latent positions `ξ_i ~ U[0, 1)` drawn from the reserved latent stream.
pub fn latent_positions(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = substream(seed, LATENT_STREAM);
    (0..n).map(|_| next_uniform(&mut rng)).collect()
}

/// A scenario instance: id, sizes and master seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScenarioSpec {
    pub id: ScenarioId,
    pub n: usize,
    pub len: usize,
    pub seed: u64,
}

impl ScenarioSpec {
    pub fn new(id: ScenarioId, n: usize, len: usize, seed: u64) -> Self {
        Self { id, n, len, seed }
    }
}

/// True change-points and the matrix of every segment.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth {
    /// `τ_1 < … < τ_J`; segment `j` covers `τ_{j−1}+1 ..= τ_j`.
    pub changepoints: Vec<usize>,
    pub segments: Vec<LinkProbMatrix>,
}

impl GroundTruth {
    /// Matrix generating snapshot `t` (1-based).
    pub fn matrix_at(&self, t: usize) -> &LinkProbMatrix {
        let seg = self.changepoints.iter().take_while(|&&tau| tau < t).count();
        &self.segments[seg]
    }
}

fn scenario_name(spec: &ScenarioSpec) -> String {
    spec.id.to_string()
}

/// Segment matrices and change-points of a scenario, without sampling.
pub fn scenario_truth(spec: &ScenarioSpec) -> Result<GroundTruth> {
    if spec.n < 6 {
        return Err(Error::TooFewNodes { n: spec.n, min: 6 });
    }
    let segments = spec.id.segments();
    let count = segments.len();
    if spec.len == 0 || spec.len % count != 0 {
        return Err(Error::SegmentDivisibility {
            scenario: scenario_name(spec),
            len: spec.len,
            divisor: count,
        });
    }
    let xi = segments
        .iter()
        .any(|s| matches!(s.model, Model::Graphon(_)))
        .then(|| latent_positions(spec.n, spec.seed));
    let matrices = segments
        .iter()
        .map(|seg| match seg.model {
            Model::Sbm(id) => sbm_matrix(id, spec.n, seg.rate.value(spec.n, spec.len)),
            Model::Graphon(id) => {
                graphon_matrix(&GraphonSpec::new(id, spec.n), xi.as_deref().unwrap_or(&[]))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    if let Some(k) = matrices.windows(2).position(|w| w[0] == w[1]) {
        return Err(Error::DegenerateScenario { scenario: scenario_name(spec), segment: k + 1 });
    }
    let step = spec.len / count;
    Ok(GroundTruth { changepoints: (1..count).map(|k| k * step).collect(), segments: matrices })
}

/// Samples a scenario: snapshot `t` comes from stream `(seed, t)`.
pub fn scenario_sequence(spec: &ScenarioSpec) -> Result<(AdjacencySequence, GroundTruth)> {
    let truth = scenario_truth(spec)?;
    let snapshots = par::map_range(1..spec.len + 1, |t| {
        sample_snapshot(truth.matrix_at(t), &mut substream(spec.seed, t as u64))
    });
    Ok((AdjacencySequence::new(snapshots)?, truth))
}
