//! Transverse light dynamics in 4f optical cavities as a realisation of the
//! space-fractional Schrödinger equation.
//!
//! The crate is organised bottom-up:
//!
//! * [`grid`]: sampling grids, unitary FFT and the complex [`Field`].
//! * [`fractional_ops`]: the spectral fractional Laplacian `(-∂²)^{α/2}`.
//! * [`propagator`]: Strang split-step evolution and the 4f lens transform.
//! * [`cavity`]: the exact round-trip operator of the resonator.
//! * [`oracle`]: Airy functions, the analytic dual-Airy modes of the `α = 1`
//!   oscillator and Hermite-Gauss modes of the transverse `y` direction.
//! * [`modesolver`]: Fox-Li iteration, threshold bisection, mode
//!   identification and direct diagonalisation of the Fourier-plane problem.
//! * [`cli`]: configuration files, experiment drivers and data export used by
//!   the `fracavity` binary.

pub mod cavity;
pub mod cli;
pub mod error;
pub mod fractional_ops;
pub mod grid;
pub mod modesolver;
pub mod oracle;
pub mod propagator;

pub use cavity::{gain_profile, round_trip, CavityConfig, Mirror, PumpProfile, RoundTrip};
pub use error::{Error, Result};
pub use fractional_ops::{kinetic_multiplier, riesz_derivative, LevyIndex, ScaleConstant};
pub use grid::{norm_l2, Field, Grid1D, UnitaryFft};
pub use propagator::{from_fourier_plane, split_step, to_fourier_plane, Potential, SplitStepper};
