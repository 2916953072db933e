//! Command-line front end: config files, drivers, manifests and data export.
//!
//! Exit codes: 0 success, 2 configuration, 3 numerical failure, 4 threshold
//! bracket failure, 5 unstable resonator.

mod commands;
mod config;
mod manifest;
mod output;

pub use commands::{
    cmd_modes, cmd_propagate, cmd_render2d, cmd_sweep, lasing_mode, Render2dOptions, NORM_DRIFT_LIMIT,
};
pub use config::{parse_length, FieldSpec, RunConfig, SolverSettings, SEED_ENV};
pub use manifest::{JobRecord, RunManifest, MANIFEST_NAME};
pub use output::{read_numeric_csv, write_field_csv, write_pgm, Provenance};

use crate::error::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_BRACKET: i32 = 4;
pub const EXIT_STABILITY: i32 = 5;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::Parse { .. } | Error::Io(_) | Error::Unsupported(_) => EXIT_CONFIG,
        Error::Numeric(_) | Error::NoConvergence { .. } => EXIT_NUMERIC,
        Error::Bracket { .. } => EXIT_BRACKET,
        Error::Stability(_) => EXIT_STABILITY,
    }
}
