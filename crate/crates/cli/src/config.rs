use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use graphon_cpd_core::cpd::DetectorParams;
use graphon_cpd_core::AdjacencySequence;

use crate::edges::parse_edge_csv;
use crate::error::CliError;

/// Everything a `detect` run needs. Unset detector parameters take their defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunConfig {
    pub input: PathBuf,
    /// Node count; inferred from the largest id when absent.
    pub n: Option<usize>,
    /// Number of snapshots; inferred from the largest time when absent.
    pub len: Option<usize>,
    pub h: Option<usize>,
    pub b0: Option<f64>,
    pub d0: Option<f64>,
    pub delta0: Option<f64>,
    pub output: Option<PathBuf>,
    pub scan_output: Option<PathBuf>,
    pub seed: u64,
}

impl RunConfig {
    pub fn load_sequence(&self) -> Result<AdjacencySequence, CliError> {
        let file = File::open(&self.input).map_err(|e| CliError::io(&self.input.display().to_string(), e))?;
        parse_edge_csv(BufReader::new(file), self.n, self.len)
    }

    /// Detector parameters for a sequence of `len` snapshots.
    pub fn params(&self, len: usize) -> Result<DetectorParams, CliError> {
        let base = DetectorParams::recommended(len);
        Ok(DetectorParams::new(
            self.h.unwrap_or(base.h),
            self.b0.unwrap_or(base.b0),
            self.d0.unwrap_or(base.d0),
            self.delta0.unwrap_or(base.delta0),
        )?)
    }
}
