//! File formats and the `graphon-cpd` command line for change-point detection in
//! dynamic networks.
//!
//! Edge lists come in as `t,i,j` CSV with 0-based time and node ids. Everything the
//! detector reports (scan positions, change-points, windows) uses 1-based time.

pub mod app;
pub mod config;
pub mod edges;
pub mod error;
pub mod report;

pub use config::RunConfig;
pub use edges::{parse_edge_csv, write_edge_csv};
pub use error::CliError;
pub use report::{parse_report_json, report_json, write_report_json};

/// Environment variable capping worker threads; `0` or unset means one per core.
pub const THREADS_ENV: &str = "GRAPHON_CPD_THREADS";

/// Sizes the global rayon pool from [`THREADS_ENV`].
pub fn configure_threads_from_env() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("{THREADS_ENV} must be a non-negative integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot configure thread pool: {e}")))
}
