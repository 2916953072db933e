//! One round trip of the 4f resonator as an FFT-factorised Huygens kernel:
//! Fourier-plane mask, near-field mirror phase, gain sheet and output coupler.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fractional_ops::{kinetic_multiplier, LevyIndex, ScaleConstant};
use crate::grid::{Field, Grid1D, UnitaryFft};
use crate::propagator::{check_grid, mul_assign, Potential};

/// Two off-axis Gaussian pump spots at `±rho`, each with peak round-trip gain `g0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PumpProfile {
    pub g0: f64,
    pub rho: f64,
    pub w_p: f64,
}

impl PumpProfile {
    pub fn new(g0: f64, rho: f64, w_p: f64) -> Result<Self> {
        let p = Self { g0, rho, w_p };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.g0 >= 0.0 && self.g0.is_finite()) {
            return Err(Error::Config(format!("pump gain g0 = {} must be >= 0", self.g0)));
        }
        if !(self.rho >= 0.0 && self.rho.is_finite()) {
            return Err(Error::Config(format!("pump offset rho = {} must be >= 0", self.rho)));
        }
        if !(self.w_p > 0.0 && self.w_p.is_finite()) {
            return Err(Error::Config(format!("pump spot size w_p = {} must be > 0", self.w_p)));
        }
        Ok(())
    }

    pub fn with_gain(self, g0: f64) -> Self {
        Self { g0, ..self }
    }

    /// `g(x) = g0 exp[-2(x-ρ)²/w_p²] + g0 exp[-2(x+ρ)²/w_p²]`
    pub fn gain_at(&self, x: f64) -> f64 {
        let w2 = self.w_p * self.w_p;
        let spot = |c: f64| (-2.0 * (x - c).powi(2) / w2).exp();
        self.g0 * (spot(self.rho) + spot(-self.rho))
    }
}

/// Round-trip gain sampled on `grid`.
pub fn gain_profile(pump: &PumpProfile, grid: &Grid1D) -> Vec<f64> {
    grid.coords().into_iter().map(|x| pump.gain_at(x)).collect()
}

/// End reflector at the near-field plane γ.
#[derive(Clone, Debug, PartialEq)]
pub enum Mirror {
    /// Flat mirror behind a thin phase mask imprinting `V(x)` per round trip.
    FlatWithMask(Potential),
    /// Spherical mirror of radius of curvature `radius` (μm).
    Spherical { radius: f64 },
}

/// Physical description of the resonator plus the γ-plane sampling used to model it.
#[derive(Clone, Debug, PartialEq)]
pub struct CavityConfig {
    /// Wavelength (μm).
    pub lambda: f64,
    /// Focal length of each lens (μm).
    pub focal: f64,
    pub alpha: LevyIndex,
    /// Fourier-plane mask strength, phase `β|ξ|^α` per round trip.
    pub beta: f64,
    pub mirror: Mirror,
    /// Output-coupler power transmittance.
    pub transmittance: f64,
    pub pump: Option<PumpProfile>,
    pub grid: Grid1D,
}

impl CavityConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.focal > 0.0) {
            return Err(Error::Config("wavelength and focal length must be positive".into()));
        }
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return Err(Error::Config(format!("mask strength beta = {} must be >= 0", self.beta)));
        }
        if !(self.transmittance > 0.0 && self.transmittance <= 1.0) {
            return Err(Error::Config(format!(
                "output-coupler transmittance {} outside (0, 1]",
                self.transmittance
            )));
        }
        if let Mirror::Spherical { radius } = self.mirror {
            if radius == 0.0 || !radius.is_finite() {
                return Err(Error::Config("mirror radius must be finite and non-zero".into()));
            }
        }
        if let Some(p) = &self.pump {
            p.validate()?;
        }
        Ok(())
    }

    /// `D_α = β (λf/2π)^α`
    pub fn d_alpha(&self) -> ScaleConstant {
        ScaleConstant::from_cavity(self.beta, self.lambda, self.focal, self.alpha)
            .expect("beta validated non-negative")
    }

    /// Near-field mirror phase as a potential.
    pub fn mirror_potential(&self) -> Potential {
        match &self.mirror {
            Mirror::FlatWithMask(v) => v.clone(),
            Mirror::Spherical { radius } => Potential::Parabolic {
                lambda: self.lambda,
                radius: *radius,
            },
        }
    }

    /// `λ f² / (2π R)`, the effective kinetic coefficient at the Fourier plane.
    pub fn fourier_plane_mass_term(&self) -> Option<f64> {
        match self.mirror {
            Mirror::Spherical { radius } => Some(self.lambda * self.focal * self.focal / (2.0 * PI * radius)),
            Mirror::FlatWithMask(_) => None,
        }
    }

    pub fn fourier_grid(&self) -> Grid1D {
        self.grid.fourier_plane(self.lambda, self.focal)
    }

    pub fn with_pump(&self, pump: Option<PumpProfile>) -> Self {
        Self { pump, ..self.clone() }
    }

    /// Same cavity with the pump peak gain replaced (no-op without a pump).
    pub fn with_peak_gain(&self, g0: f64) -> Self {
        self.with_pump(self.pump.map(|p| p.with_gain(g0)))
    }

    /// True when every element of the round trip is even in x on a centred grid.
    pub fn is_parity_symmetric(&self) -> bool {
        self.grid.is_centered() && self.mirror_potential().is_even()
    }
}

/// Precomputed round-trip operator `ψ ↦ √T e^{g} e^{-iV} F⁻¹[e^{-iβ|ξ|^α} F ψ]`.
///
/// The Fourier-plane coordinate is `ξ = λf p / 2π`, so the mask factor is
/// `exp(-i D_α |p|^α)`.
#[derive(Clone, Debug)]
pub struct RoundTrip {
    grid: Grid1D,
    fft: UnitaryFft,
    mask: Vec<Complex64>,
    mirror_phase: Vec<f64>,
    gain_shape: Vec<f64>,
    amplitude: f64,
    near: Vec<Complex64>,
    peak_gain: f64,
}

impl RoundTrip {
    pub fn new(config: &CavityConfig) -> Result<Self> {
        config.validate()?;
        let grid = config.grid;
        let mirror_phase = config.mirror_potential().evaluate(&grid)?;
        let (gain_shape, peak_gain) = match &config.pump {
            Some(p) => (gain_profile(&p.with_gain(1.0), &grid), p.g0),
            None => (vec![0.0; grid.len()], 0.0),
        };
        let mut op = Self {
            grid,
            fft: UnitaryFft::new(grid.len()),
            mask: kinetic_multiplier(&grid, config.alpha, config.d_alpha(), 1.0),
            mirror_phase,
            gain_shape,
            amplitude: config.transmittance.sqrt(),
            near: Vec::new(),
            peak_gain,
        };
        op.rebuild_near();
        Ok(op)
    }

    fn rebuild_near(&mut self) {
        self.near = self
            .mirror_phase
            .iter()
            .zip(&self.gain_shape)
            .map(|(v, s)| Complex64::from_polar(self.amplitude * (self.peak_gain * s).exp(), -v))
            .collect();
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn peak_gain(&self) -> f64 {
        self.peak_gain
    }

    /// Changes the pump peak gain in place (the spot geometry is kept).
    pub fn set_peak_gain(&mut self, g0: f64) {
        self.peak_gain = g0;
        self.rebuild_near();
    }

    /// Applies one round trip to `buf` in place.
    pub fn apply(&self, buf: &mut [Complex64]) {
        self.fft.forward(buf);
        mul_assign(buf, &self.mask);
        self.fft.inverse(buf);
        mul_assign(buf, &self.near);
    }

    pub fn apply_field(&self, field: &Field) -> Result<Field> {
        check_grid(field, &self.grid)?;
        let mut buf = field.samples().to_vec();
        self.apply(&mut buf);
        Field::new(self.grid, buf)
    }

    /// Explicit `n × n` matrix of the operator (column `j` is the image of `e_j`).
    pub fn to_dense(&self) -> nalgebra::DMatrix<Complex64> {
        let n = self.grid.len();
        let mut m = nalgebra::DMatrix::zeros(n, n);
        let mut col = vec![Complex64::new(0.0, 0.0); n];
        for j in 0..n {
            col.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
            col[j] = Complex64::new(1.0, 0.0);
            self.apply(&mut col);
            for (i, z) in col.iter().enumerate() {
                m[(i, j)] = *z;
            }
        }
        m
    }
}

/// One round trip of `field` through `config`.
pub fn round_trip(field: &Field, config: &CavityConfig) -> Result<Field> {
    RoundTrip::new(config)?.apply_field(field)
}
