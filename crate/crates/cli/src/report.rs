//! JSON and CSV writers for reports, truth, matrices and Boysen distances.

use std::io::{self, Write};
use std::path::Path;

use graphon_cpd_core::cpd::{ChangePoint, ChangePointReport, DetectorParams, ScanProfile};
use graphon_cpd_core::eval::BoysenResult;
use graphon_cpd_core::genmodels::{GroundTruth, ScenarioSpec};
use graphon_cpd_core::DenseSymMatrix;
use serde::{Deserialize, Serialize};
use serde_json::ser::Formatter;

use crate::error::CliError;

/// Writes every float with 17 significant digits.
#[derive(Debug, Default, Clone, Copy)]
pub struct SeventeenDigits;

impl Formatter for SeventeenDigits {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

/// Serializes with [`SeventeenDigits`], followed by a newline.
pub fn to_json_line<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SeventeenDigits);
    value.serialize(&mut ser).expect("in-memory JSON serialization cannot fail");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

/// On-disk layout of a [`ChangePointReport`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportJson {
    pub n: usize,
    #[serde(rename = "T")]
    pub len: usize,
    pub h: usize,
    #[serde(rename = "B0")]
    pub b0: f64,
    #[serde(rename = "D0")]
    pub d0: f64,
    pub delta0: f64,
    pub threshold: f64,
    /// `[t, D(t, h)]` pairs, `t` 1-based.
    pub scan: Vec<(usize, f64)>,
    pub local_max: Vec<usize>,
    pub changepoints: Vec<usize>,
}

impl From<&ChangePointReport> for ReportJson {
    fn from(r: &ChangePointReport) -> Self {
        Self {
            n: r.n,
            len: r.scan.len(),
            h: r.params.h,
            b0: r.params.b0,
            d0: r.params.d0,
            delta0: r.params.delta0,
            threshold: r.threshold,
            scan: r.scan.iter().collect(),
            local_max: r.local_max.clone(),
            changepoints: r.locations(),
        }
    }
}

impl ReportJson {
    /// Rebuilds the report; change-point statistics are read back from the scan.
    pub fn into_report(self) -> Result<ChangePointReport, CliError> {
        let bad = |m: String| CliError::Data(format!("report JSON: {m}"));
        let params = DetectorParams::new(self.h, self.b0, self.d0, self.delta0)?;
        for (k, &(t, _)) in self.scan.iter().enumerate() {
            if t != self.h + k {
                return Err(bad(format!("scan entry {k} has t = {t}, expected {}", self.h + k)));
            }
        }
        let scan = ScanProfile::from_values(self.len, self.h, self.scan.into_iter().map(|(_, d)| d).collect())?;
        let changepoints = self
            .changepoints
            .iter()
            .map(|&t| {
                scan.get(t)
                    .map(|statistic| ChangePoint { t, statistic })
                    .ok_or_else(|| bad(format!("change-point {t} is outside the scan")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ChangePointReport { n: self.n, params, threshold: self.threshold, local_max: self.local_max, changepoints, scan })
    }
}

/// The report as one JSON line.
pub fn report_json(report: &ChangePointReport) -> String {
    to_json_line(&ReportJson::from(report))
}

pub fn write_report_json(report: &ChangePointReport, path: &Path) -> Result<(), CliError> {
    std::fs::write(path, report_json(report)).map_err(|e| CliError::io(&path.display().to_string(), e))
}

pub fn parse_report_json(text: &str) -> Result<ChangePointReport, CliError> {
    let raw: ReportJson = serde_json::from_str(text).map_err(|e| CliError::Data(format!("report JSON: {e}")))?;
    raw.into_report()
}

/// `t,D` rows of the scan profile.
pub fn scan_csv(scan: &ScanProfile) -> String {
    let mut s = String::from("t,D\n");
    for (t, d) in scan.iter() {
        s.push_str(&format!("{t},{d:.16e}\n"));
    }
    s
}

/// `n` lines of `n` comma-separated values.
pub fn matrix_csv(m: &DenseSymMatrix) -> String {
    let mut s = String::new();
    for i in 0..m.n() {
        let row: Vec<String> = m.row(i).iter().map(|v| format!("{v:.16e}")).collect();
        s.push_str(&row.join(","));
        s.push('\n');
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruthJson {
    pub scenario: String,
    pub n: usize,
    #[serde(rename = "T")]
    pub len: usize,
    pub seed: u64,
    /// 1-based, like the detector output.
    pub changepoints: Vec<usize>,
}

pub fn truth_json(spec: &ScenarioSpec, truth: &GroundTruth) -> String {
    to_json_line(&TruthJson {
        scenario: spec.id.to_string(),
        n: spec.n,
        len: spec.len,
        seed: spec.seed,
        changepoints: truth.changepoints.clone(),
    })
}

#[derive(Serialize)]
struct BoysenJson {
    xi1: usize,
    xi2: Option<usize>,
}

/// `{"xi1":…,"xi2":…}`; an undefined `ξ₂` is `null`.
pub fn boysen_json(b: &BoysenResult) -> String {
    to_json_line(&BoysenJson { xi1: b.xi1, xi2: b.xi2 })
}
