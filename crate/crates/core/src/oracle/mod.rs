//! Closed-form reference solutions: Airy functions and their zeros, the
//! dual-Airy modes of the `α = 1` fractional oscillator, Hermite-Gauss modes
//! of the unconfined `y` direction, and separable 2D intensity maps.

mod airy;
mod hermite;
mod modes;

pub use airy::{airy_ai, airy_ai_prime, airy_pair, airy_zero, AiryZeroKind};
pub use hermite::{hermite_gauss, hermite_polynomial, HermiteGaussMode};
pub use modes::{airy_mode, airy_modes, assemble_2d, AiryMode, IntensityMap, ModeParity};
