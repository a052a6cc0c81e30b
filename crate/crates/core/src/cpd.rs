//! Screening-and-thresholding multiple change-point detection.
//!
//! For every `t` in `[h, T−h]` the scan compares the MNBS estimates of the left window
//! `t−h+1..=t` and the right window `t+1..=t+h` by the squared 2,∞ distance. Points that
//! dominate their `h−1` neighbors on each side are candidates; candidates whose statistic
//! strictly exceeds `Δ_D = D₀ (log n)^{1/2+δ₀} / (√n √h)` are reported.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use libm::{log, pow, sqrt};

use crate::error::{Error, Result};
use crate::estim::{mnbs_fit, EstimatorConfig};
use crate::matrix::{average_adjacency, dist_2inf_sq, AdjacencySequence, LinkProbMatrix};
use crate::par;

/// Window half-width and the three tuning constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorParams {
    pub h: usize,
    pub b0: f64,
    pub d0: f64,
    pub delta0: f64,
}

impl DetectorParams {
    pub const DEFAULT_B0: f64 = 3.0;
    pub const DEFAULT_D0: f64 = 0.25;
    pub const DEFAULT_DELTA0: f64 = 0.1;

    pub fn new(h: usize, b0: f64, d0: f64, delta0: f64) -> Result<Self> {
        let params = Self { h, b0, d0, delta0 };
        params.validate()?;
        Ok(params)
    }

    /// `h = ⌊√T⌋`, `B₀ = 3`, `D₀ = 0.25`, `δ₀ = 0.1`.
    pub fn recommended(len: usize) -> Self {
        Self {
            h: len.isqrt().max(1),
            b0: Self::DEFAULT_B0,
            d0: Self::DEFAULT_D0,
            delta0: Self::DEFAULT_DELTA0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.h == 0 {
            return Err(Error::InvalidParameter { name: "h", value: 0.0 });
        }
        for (name, value) in [("B0", self.b0), ("D0", self.d0), ("delta0", self.delta0)] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::InvalidParameter { name, value });
            }
        }
        Ok(())
    }

    /// Whether `h < D*/2` for a known minimum segment length `D*`; detection guarantees
    /// assume no window straddles two change-points.
    pub fn fits_min_gap(&self, min_gap: usize) -> bool {
        2 * self.h < min_gap
    }

    fn estimator(&self) -> EstimatorConfig {
        EstimatorConfig { b0: self.b0, ..EstimatorConfig::default() }
    }
}

/// `D(t, h)` over the domain `t = h ..= T−h`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanProfile {
    len: usize,
    h: usize,
    values: Vec<f64>,
}

impl ScanProfile {
    /// Wraps precomputed statistics; `values[k]` is `D(h + k, h)`.
    pub fn from_values(len: usize, h: usize, values: Vec<f64>) -> Result<Self> {
        if h == 0 || 2 * h > len {
            return Err(Error::WindowTooWide { h, len });
        }
        if values.len() != len - 2 * h + 1 {
            return Err(Error::DimensionMismatch { left: len - 2 * h + 1, right: values.len() });
        }
        if let Some(&bad) = values.iter().find(|v| v.is_nan() || **v < 0.0) {
            return Err(Error::InvalidParameter { name: "D", value: bad });
        }
        Ok(Self { len, h, values })
    }

    /// Length `T` of the scanned sequence, not the number of scan values.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn first(&self) -> usize {
        self.h
    }

    pub fn last(&self) -> usize {
        self.len - self.h
    }

    pub fn get(&self, t: usize) -> Option<f64> {
        t.checked_sub(self.h).and_then(|k| self.values.get(k)).copied()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `(t, D(t, h))` pairs in increasing `t`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.values.iter().enumerate().map(move |(k, &d)| (self.h + k, d))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChangePoint {
    pub t: usize,
    pub statistic: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChangePointReport {
    pub n: usize,
    pub params: DetectorParams,
    pub threshold: f64,
    /// h-local maximizers after plateau reduction, increasing.
    pub local_max: Vec<usize>,
    pub changepoints: Vec<ChangePoint>,
    pub scan: ScanProfile,
}

impl ChangePointReport {
    pub fn locations(&self) -> Vec<usize> {
        self.changepoints.iter().map(|c| c.t).collect()
    }
}

fn check_scan_preconditions(seq: &AdjacencySequence, params: &DetectorParams) -> Result<()> {
    params.validate()?;
    if 2 * params.h > seq.len() {
        return Err(Error::WindowTooWide { h: params.h, len: seq.len() });
    }
    if seq.n() < 3 {
        return Err(Error::TooFewNodes { n: seq.n(), min: 3 });
    }
    Ok(())
}

fn window_estimate(seq: &AdjacencySequence, start: usize, h: usize, cfg: &EstimatorConfig) -> Result<LinkProbMatrix> {
    let abar = average_adjacency(seq, start, start + h - 1)?;
    Ok(mnbs_fit(&abar, h, cfg)?.estimate)
}

/// Window estimates kept alive at once beyond the `h + 1` the scan needs.
const BATCH: usize = 16;

/// Computes `D(t, h) = d_{2,∞}(P̃_left, P̃_right)²` for every `t` in `[h, T−h]`.
///
/// Window `s..=s+h−1` is the right window of `t = s−1` and the left window of
/// `t = s+h−1`, so each of the `T−h+1` windows is estimated once. Windows are estimated
/// in parallel batches and dropped once both their uses are done.
pub fn scan_profile(seq: &AdjacencySequence, params: &DetectorParams) -> Result<ScanProfile> {
    check_scan_preconditions(seq, params)?;
    let (len, h) = (seq.len(), params.h);
    let cfg = params.estimator();
    let last_start = len - h + 1;

    let mut live: VecDeque<LinkProbMatrix> = VecDeque::new();
    let mut live_first = 1; // window start of live[0]
    let mut values = Vec::with_capacity(len - 2 * h + 1);
    let mut next_start = 1;
    while next_start <= last_start {
        let batch_end = (next_start + BATCH).min(last_start + 1);
        let fresh = par::try_map_range(next_start..batch_end, |s| window_estimate(seq, s, h, &cfg))?;
        live.extend(fresh);
        next_start = batch_end;
        // t = h + k needs window starts k + 1 and h + k + 1.
        loop {
            let t = h + values.len();
            if t > len - h || t + 1 >= next_start {
                break;
            }
            let left = &live[t - h + 1 - live_first];
            let right = &live[t + 1 - live_first];
            values.push(dist_2inf_sq(left, right)?);
            if t - h + 2 > live_first {
                live.pop_front();
                live_first += 1;
            }
        }
    }
    ScanProfile::from_values(len, h, values)
}

/// h-local maximizers of the profile.
///
/// `x` qualifies when `D(x) ≥ D(t)` for every `t ∈ [x−h+1, x+h−1] ∩ [h, T−h]`. Two
/// qualifying points closer than `h` necessarily tie; scanning left to right, a point is
/// dropped when it ties a kept point less than `h` before it, so a flat peak reports its
/// leftmost point and kept points are at least `h` apart.
pub fn local_maximizers(profile: &ScanProfile) -> Vec<usize> {
    let h = profile.h();
    let (lo, hi) = (profile.first(), profile.last());
    let d = |t: usize| profile.values[t - lo];
    let mut kept: Vec<usize> = Vec::new();
    for x in lo..=hi {
        let from = x.saturating_sub(h - 1).max(lo);
        let to = (x + h - 1).min(hi);
        if (from..=to).any(|t| d(t) > d(x)) {
            continue;
        }
        match kept.last() {
            Some(&k) if x - k < h && d(k) == d(x) => {}
            _ => kept.push(x),
        }
    }
    kept
}

/// `Δ_D = D₀ (log n)^{1/2+δ₀} / (n^{1/2} h^{1/2})`.
pub fn threshold_value(n: usize, params: &DetectorParams) -> f64 {
    let nf = n as f64;
    params.d0 * pow(log(nf), 0.5 + params.delta0) / (sqrt(nf) * sqrt(params.h as f64))
}

/// Keeps the maximizers whose statistic strictly exceeds `threshold`.
pub fn threshold_changepoints(profile: &ScanProfile, local_max: &[usize], threshold: f64) -> Vec<ChangePoint> {
    local_max
        .iter()
        .filter_map(|&t| {
            let statistic = profile.get(t)?;
            (statistic > threshold).then_some(ChangePoint { t, statistic })
        })
        .collect()
}

/// Builds the report for an existing scan.
pub fn report_from_scan(scan: ScanProfile, n: usize, params: &DetectorParams, threshold: f64) -> ChangePointReport {
    let local_max = local_maximizers(&scan);
    let changepoints = threshold_changepoints(&scan, &local_max, threshold);
    ChangePointReport { n, params: *params, threshold, local_max, changepoints, scan }
}

/// Full pipeline: scan, h-local maximizers, thresholding at `Δ_D`.
pub fn detect(seq: &AdjacencySequence, params: &DetectorParams) -> Result<ChangePointReport> {
    let scan = scan_profile(seq, params)?;
    let threshold = threshold_value(seq.n(), params);
    Ok(report_from_scan(scan, seq.n(), params, threshold))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estim::mnbs_estimate;
    use crate::genmodels::{scenario_sequence, ScenarioSpec};
    use crate::matrix::AdjacencySnapshot;
    use alloc::vec;
    use proptest::prelude::*;

    fn profile(h: usize, values: &[f64]) -> ScanProfile {
        ScanProfile::from_values(values.len() + 2 * h - 1, h, values.to_vec()).unwrap()
    }

    // Brute force straight from the definition, with greedy tie reduction.
    fn oracle_maximizers(p: &ScanProfile) -> Vec<usize> {
        let h = p.h() as isize;
        let mut qualifying = vec![];
        for x in p.first()..=p.last() {
            let mut ok = true;
            for off in -(h - 1)..=(h - 1) {
                let t = x as isize + off;
                if let Some(v) = (t >= 0).then(|| p.get(t as usize)).flatten() {
                    if v > p.get(x).unwrap() {
                        ok = false;
                    }
                }
            }
            if ok {
                qualifying.push(x);
            }
        }
        let mut out: Vec<usize> = vec![];
        for x in qualifying {
            if out.iter().all(|&k| x >= k + p.h() || p.get(k) != p.get(x)) {
                out.push(x);
            }
        }
        out
    }

    #[test]
    fn recommended_params() {
        assert_eq!(DetectorParams::recommended(100).h, 10);
        assert_eq!(DetectorParams::recommended(348).h, 18);
        assert_eq!(DetectorParams::recommended(4).h, 2);
        let p = DetectorParams::recommended(100);
        assert_eq!((p.b0, p.d0, p.delta0), (3.0, 0.25, 0.1));
        assert!(p.fits_min_gap(50));
        assert!(!p.fits_min_gap(20));
    }

    #[test]
    fn param_validation() {
        assert!(DetectorParams::new(0, 3.0, 0.25, 0.1).is_err());
        assert!(DetectorParams::new(2, -3.0, 0.25, 0.1).is_err());
        assert!(DetectorParams::new(2, 3.0, 0.0, 0.1).is_err());
        assert!(DetectorParams::new(2, 3.0, 0.25, f64::NAN).is_err());
    }

    #[test]
    fn threshold_formula() {
        let p = DetectorParams::recommended(100);
        // 0.25 (ln 100)^{0.6} / (10 √10), evaluated independently.
        assert!((threshold_value(100, &p) - 0.01976457223285426).abs() < 1e-15);
        let doubled = DetectorParams { h: 20, ..p };
        let ratio = threshold_value(100, &p) / threshold_value(100, &doubled);
        assert!((ratio - core::f64::consts::SQRT_2).abs() < 1e-12);
        let tiny = DetectorParams { d0: 1e-300, ..p };
        assert!(threshold_value(100, &tiny) < 1e-290);
    }

    #[test]
    fn unimodal_profile_has_single_maximizer() {
        let p = profile(3, &[0.1, 0.2, 0.5, 0.9, 0.4, 0.3, 0.2, 0.1]);
        assert_eq!(local_maximizers(&p), vec![6]);
    }

    #[test]
    fn constant_profile_is_spaced_by_h() {
        // T = 20, h = 3: domain 3..=17.
        let p = ScanProfile::from_values(20, 3, vec![0.5; 15]).unwrap();
        assert_eq!(local_maximizers(&p), vec![3, 6, 9, 12, 15]);
        assert_eq!(oracle_maximizers(&p), vec![3, 6, 9, 12, 15]);
    }

    #[test]
    fn increasing_profile_peaks_at_right_edge() {
        let values: Vec<f64> = (0..15).map(f64::from).collect();
        let p = ScanProfile::from_values(20, 3, values).unwrap();
        assert_eq!(local_maximizers(&p), vec![17]);
    }

    #[test]
    fn thresholding_is_strict() {
        let p = profile(2, &[0.1, 0.5, 0.1, 0.1, 0.3, 0.1]);
        let lm = local_maximizers(&p);
        assert_eq!(lm, vec![3, 6]);
        let cps = threshold_changepoints(&p, &lm, 0.3);
        assert_eq!(cps, vec![ChangePoint { t: 3, statistic: 0.5 }]);
        assert!(threshold_changepoints(&p, &lm, f64::INFINITY).is_empty());
    }

    #[test]
    fn profile_validation() {
        assert!(matches!(ScanProfile::from_values(5, 3, vec![]), Err(Error::WindowTooWide { .. })));
        assert!(ScanProfile::from_values(6, 3, vec![0.0]).is_ok());
        assert!(ScanProfile::from_values(6, 3, vec![0.0, 1.0]).is_err());
        assert!(ScanProfile::from_values(6, 3, vec![-1.0]).is_err());
    }

    #[test]
    fn identical_snapshots_give_flat_zero_scan() {
        let block = |i: usize| i % 3;
        let snap = AdjacencySnapshot::from_upper(9, |i, j| block(i) == block(j) || (i + j) % 4 == 0);
        let seq = AdjacencySequence::new(vec![snap; 12]).unwrap();
        let report = detect(&seq, &DetectorParams::recommended(12)).unwrap();
        assert!(report.scan.values().iter().all(|&d| d == 0.0));
        assert!(report.changepoints.is_empty());
    }

    #[test]
    fn shortest_sequence_has_single_scan_point() {
        let seq = AdjacencySequence::new(vec![AdjacencySnapshot::zeros(4); 6]).unwrap();
        let params = DetectorParams { h: 3, ..DetectorParams::recommended(6) };
        let scan = scan_profile(&seq, &params).unwrap();
        assert_eq!((scan.first(), scan.last()), (3, 3));
        let too_wide = DetectorParams { h: 4, ..params };
        assert_eq!(scan_profile(&seq, &too_wide), Err(Error::WindowTooWide { h: 4, len: 6 }));
    }

    #[test]
    fn scan_matches_direct_window_estimates() {
        let spec = ScenarioSpec::new("DSBM-I".parse().unwrap(), 30, 40, 11);
        let (seq, _) = scenario_sequence(&spec).unwrap();
        let params = DetectorParams::recommended(40);
        let scan = scan_profile(&seq, &params).unwrap();
        let cfg = EstimatorConfig { b0: params.b0, ..EstimatorConfig::default() };
        for (t, d) in scan.iter() {
            let left = mnbs_estimate(&seq, t - params.h + 1, t, &cfg).unwrap();
            let right = mnbs_estimate(&seq, t + 1, t + params.h, &cfg).unwrap();
            assert_eq!(d, dist_2inf_sq(&left, &right).unwrap(), "t = {t}");
        }
        assert_eq!(scan.values().len(), 40 - 2 * params.h + 1);
    }

    #[test]
    fn detects_strong_single_change() {
        let spec = ScenarioSpec::new("DSBM-IV".parse().unwrap(), 80, 36, 5);
        let (seq, _) = scenario_sequence(&spec).unwrap();
        let report = detect(&seq, &DetectorParams::recommended(36)).unwrap();
        assert_eq!(report.locations(), vec![18]);
    }

    #[test]
    fn report_invariants_hold() {
        let spec = ScenarioSpec::new("MDSBM-I".parse().unwrap(), 40, 64, 2);
        let (seq, _) = scenario_sequence(&spec).unwrap();
        let params = DetectorParams::recommended(64);
        let r = detect(&seq, &params).unwrap();
        for c in &r.changepoints {
            assert!(r.local_max.contains(&c.t));
            assert!(c.statistic > r.threshold);
        }
        for w in r.changepoints.windows(2) {
            assert!(w[1].t - w[0].t >= params.h);
        }
    }

    fn arb_profile() -> impl Strategy<Value = ScanProfile> {
        (1usize..5, 1usize..12).prop_flat_map(|(h, k)| {
            proptest::collection::vec(0u8..4, k).prop_map(move |v| {
                profile(h, &v.into_iter().map(f64::from).collect::<Vec<_>>())
            })
        })
    }

    proptest! {
        #[test]
        fn maximizers_match_oracle(p in arb_profile()) {
            prop_assert_eq!(local_maximizers(&p), oracle_maximizers(&p));
        }

        #[test]
        fn maximizers_are_spaced(p in arb_profile()) {
            let lm = local_maximizers(&p);
            prop_assert!(!lm.is_empty());
            for w in lm.windows(2) {
                prop_assert!(w[1] - w[0] >= p.h());
            }
        }

        #[test]
        fn larger_d0_reports_subset(p in arb_profile(), a in 0.0f64..4.0, b in 0.0f64..4.0) {
            let lm = local_maximizers(&p);
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            let strict = threshold_changepoints(&p, &lm, hi);
            let loose = threshold_changepoints(&p, &lm, lo);
            prop_assert!(strict.iter().all(|c| loose.contains(c)));
        }
    }
}
