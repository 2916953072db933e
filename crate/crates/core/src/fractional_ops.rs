//! Spectral fractional Laplacian (quantum Riesz derivative) and the kinetic
//! propagation multiplier built from its symbol `|p|^α`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{Field, Grid1D, UnitaryFft};

/// Levy index `α` of the kinetic operator.
///
/// Any `0 < α ≤ 2` is accepted. Only `1 < α ≤ 2` is inside the range where
/// fractional quantum mechanics is usually formulated; `α = 1` (the massless
/// relativistic oscillator) sits on its edge and is used by the laser preset.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LevyIndex(f64);

impl LevyIndex {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 2.0) {
            return Err(Error::Config(format!(
                "Levy index must lie in (0, 2], got {alpha}"
            )));
        }
        Ok(Self(alpha))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `false` for `α ≤ 1`; such indices are permitted but flagged.
    pub fn in_standard_range(self) -> bool {
        self.0 > 1.0
    }
}

/// Scale constant `D_α` multiplying the fractional Laplacian (phase per round trip · μm^α).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScaleConstant(f64);

impl ScaleConstant {
    pub fn new(d_alpha: f64) -> Result<Self> {
        if !(d_alpha.is_finite() && d_alpha >= 0.0) {
            return Err(Error::Config(format!(
                "scale constant must be finite and non-negative, got {d_alpha}"
            )));
        }
        Ok(Self(d_alpha))
    }

    /// `D_α = β (λ f / 2π)^α` for a mask of strength `β` in a 4f cavity.
    pub fn from_cavity(beta: f64, lambda: f64, focal: f64, alpha: LevyIndex) -> Result<Self> {
        Self::new(beta * (lambda * focal / std::f64::consts::TAU).powf(alpha.value()))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// `|p_k|^α` in FFT bin order. Exactly zero at `p = 0`.
pub fn riesz_symbol(grid: &Grid1D, alpha: LevyIndex) -> Vec<f64> {
    grid.freqs()
        .into_iter()
        .map(|p| if p == 0.0 { 0.0 } else { p.abs().powf(alpha.value()) })
        .collect()
}

/// `(-∂²/∂x²)^{α/2} ψ`, evaluated as `IFFT(|p|^α FFT ψ)`.
pub fn riesz_derivative(field: &Field, alpha: LevyIndex) -> Field {
    let grid = *field.grid();
    let fft = UnitaryFft::new(grid.len());
    let symbol = riesz_symbol(&grid, alpha);
    let mut buf = field.samples().to_vec();
    fft.forward(&mut buf);
    buf.iter_mut().zip(&symbol).for_each(|(z, s)| *z *= s);
    fft.inverse(&mut buf);
    Field::new(grid, buf).expect("length preserved")
}

/// `exp(-i D_α |p_k|^α dt)` per momentum bin. Every entry has unit modulus.
pub fn kinetic_multiplier(
    grid: &Grid1D,
    alpha: LevyIndex,
    d_alpha: ScaleConstant,
    dt: f64,
) -> Vec<Complex64> {
    riesz_symbol(grid, alpha)
        .into_iter()
        .map(|s| Complex64::from_polar(1.0, -d_alpha.value() * s * dt))
        .collect()
}
