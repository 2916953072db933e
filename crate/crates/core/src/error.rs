use std::path::PathBuf;

use thiserror::Error;

/// Everything that can go wrong inside the simulator.
#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("no convergence after {iterations} iterations (last residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("invalid bracket: |sigma|-1 is {lo:+.3e} at g0={g_lo} and {hi:+.3e} at g0={g_hi}")]
    Bracket {
        g_lo: f64,
        g_hi: f64,
        lo: f64,
        hi: f64,
    },

    #[error("unstable resonator: {0}")]
    Stability(String),

    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
