//! Gauss-Hermite modes of the `y` direction, which sees no lenses and forms a
//! plano-spherical resonator of length `4f`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{Field, Grid1D};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HermiteGaussMode {
    pub m: usize,
    /// Spot size at the Fourier plane, μm.
    pub w_y: f64,
    /// Wavefront radius at the Fourier plane, μm.
    pub r_y: f64,
}

impl HermiteGaussMode {
    pub fn new(m: usize, lambda: f64, focal: f64, radius: f64) -> Result<Self> {
        if !(lambda > 0.0 && focal > 0.0) {
            return Err(Error::Config("wavelength and focal length must be positive".into()));
        }
        if !(radius > 4.0 * focal) {
            return Err(Error::Stability(format!(
                "y-cavity unstable: mirror radius {radius} um must exceed 4f = {} um",
                4.0 * focal
            )));
        }
        let w_y = (lambda * focal / PI).sqrt()
            * (radius / (4.0 * focal) - 1.0).powf(0.25)
            * ((4.0 * radius - 12.0 * focal) / (radius - 4.0 * focal)).sqrt();
        Ok(Self {
            m,
            w_y,
            r_y: 2.0 * radius - 6.0 * focal,
        })
    }

    /// Unnormalised `H_m(√2 y/w) exp(−y²/w² − iπy²/(λR_y))`.
    pub fn profile(&self, lambda: f64, y: f64) -> Complex64 {
        let u = std::f64::consts::SQRT_2 * y / self.w_y;
        let amp = hermite_polynomial(self.m, u) * (-(y * y) / (self.w_y * self.w_y)).exp();
        Complex64::from_polar(amp, -PI * y * y / (lambda * self.r_y))
    }
}

/// Physicists' Hermite polynomial `H_m(u)`.
pub fn hermite_polynomial(m: usize, u: f64) -> f64 {
    let (mut h0, mut h1) = (1.0, 2.0 * u);
    if m == 0 {
        return h0;
    }
    for k in 1..m {
        let h2 = 2.0 * u * h1 - 2.0 * k as f64 * h0;
        h0 = h1;
        h1 = h2;
    }
    h1
}

/// Mode `m` sampled on `grid` and L2-normalised.
pub fn hermite_gauss(m: usize, lambda: f64, focal: f64, radius: f64, grid: &Grid1D) -> Result<(HermiteGaussMode, Field)> {
    let mode = HermiteGaussMode::new(m, lambda, focal, radius)?;
    let mut field = Field::from_fn(*grid, |y| mode.profile(lambda, y));
    if field.normalize() == 0.0 {
        return Err(Error::Numeric(format!("Hermite-Gauss mode {m} vanishes on the grid")));
    }
    Ok((mode, field))
}
