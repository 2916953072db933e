//! Lasing-mode extraction: Fox-Li power iteration on the round-trip
//! operator, threshold bisection on the pump gain, identification against
//! the analytic dual-Airy family, and direct diagonalisation of the
//! Fourier-plane eigenproblem.

mod dense;
mod diagonalize;
mod foxli;
mod identify;
mod threshold;
mod tridiagonal;

pub use dense::{dense_eigenvalues, dominant_dense_eigenvalue};
pub use diagonalize::{diagonalize_momentum, SpectrumResult};
pub use foxli::{fox_li, fox_li_with, FoxLiOptions, ModeResult, Parity, Seed, DEFAULT_SEED};
pub use identify::{identify_mode, label_mode, ModeId, IDENTIFY_THRESHOLD};
pub use threshold::{threshold_search, ThresholdOptions};
pub use tridiagonal::SymTridiagonal;
