//! Sweep harness and analysis for clean/dirty noise studies: gradient-norm
//! sweeps of the Ising HVA, collapse and decay-fit reports, ladder tables and
//! randomized bound checks.

pub mod collapse;
pub mod config;
pub mod error;
pub mod fit;
pub mod ladder_report;
pub mod sweep;
pub mod verify;

pub use error::{ExperimentError, Result};

/// Environment variable overriding the output directory.
pub const OUT_DIR_ENV: &str = "CLEANDIRTY_OUT_DIR";
/// Environment variable overriding the worker count.
pub const WORKERS_ENV: &str = "CLEANDIRTY_WORKERS";

/// Writes `rows` as CSV with a header row.
pub fn write_csv<T: serde::Serialize, W: std::io::Write>(rows: &[T], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
