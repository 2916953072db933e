//! Analytic eigenmodes of the `α = 1` fractional oscillator on the Fourier plane.
//!
//! With the axicon `β|x|` and the effective kinetic coefficient
//! `m = λf²/(2πR)` of the spherical mirror, the stationary problem
//! `E φ = β|x| φ − m φ''` is solved on each half-line by `Ai(κ|x| + r_n)`
//! with `κ = (β/m)^{1/3}`. Matching at the origin forces `r_n` onto a zero of
//! `Ai'` (even modes) or of `Ai` (odd modes), and `E_n = −m κ² r_n`.

use num_complex::Complex64;

use super::airy::{airy_ai, airy_zero, AiryZeroKind};
use crate::cavity::CavityConfig;
use crate::error::{Error, Result};
use crate::grid::{Field, Grid1D};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeParity {
    Even,
    Odd,
}

impl ModeParity {
    pub fn of(n: usize) -> Self {
        if n % 2 == 0 {
            Self::Even
        } else {
            Self::Odd
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AiryMode {
    pub n: usize,
    pub r_n: f64,
    /// (μm)⁻¹
    pub kappa: f64,
    /// Round-trip phase, rad.
    pub energy: f64,
    pub parity: ModeParity,
}

impl AiryMode {
    /// Mode metadata for index `n` given the axicon strength and kinetic coefficient.
    pub fn new(n: usize, beta: f64, mass_term: f64) -> Self {
        let r_n = if n % 2 == 0 {
            airy_zero(n / 2 + 1, AiryZeroKind::AiPrime)
        } else {
            airy_zero((n + 1) / 2, AiryZeroKind::Ai)
        };
        let kappa = (beta / mass_term).cbrt();
        Self {
            n,
            r_n,
            kappa,
            energy: -mass_term * kappa * kappa * r_n,
            parity: ModeParity::of(n),
        }
    }

    /// Unnormalised profile `(x/|x|)^n Ai(κ|x| + r_n)`.
    pub fn profile(&self, x: f64) -> f64 {
        let a = airy_ai(self.kappa * x.abs() + self.r_n);
        match self.parity {
            ModeParity::Even => a,
            ModeParity::Odd if x > 0.0 => a,
            ModeParity::Odd if x < 0.0 => -a,
            ModeParity::Odd => 0.0,
        }
    }
}

fn closed_form_terms(cavity: &CavityConfig) -> Result<(f64, f64)> {
    if (cavity.alpha.value() - 1.0).abs() > 1e-12 {
        return Err(Error::Unsupported(format!(
            "no closed-form modes for alpha = {}; use diagonalize_momentum",
            cavity.alpha.value()
        )));
    }
    let mass = cavity
        .fourier_plane_mass_term()
        .ok_or_else(|| Error::Unsupported("closed-form modes need a spherical mirror".into()))?;
    if cavity.beta <= 0.0 {
        return Err(Error::Unsupported("closed-form modes need a non-zero axicon strength".into()));
    }
    Ok((cavity.beta, mass))
}

/// Mode `n` sampled on `grid` (normally the Fourier-plane grid) and L2-normalised.
pub fn airy_mode(n: usize, cavity: &CavityConfig, grid: &Grid1D) -> Result<(AiryMode, Field)> {
    let (beta, mass) = closed_form_terms(cavity)?;
    let mode = AiryMode::new(n, beta, mass);
    let mut field = Field::from_fn(*grid, |x| Complex64::new(mode.profile(x), 0.0));
    if field.normalize() == 0.0 {
        return Err(Error::Numeric(format!("mode {n} vanishes on the grid")));
    }
    Ok((mode, field))
}

/// Modes `0..count` on the cavity's Fourier-plane grid.
pub fn airy_modes(count: usize, cavity: &CavityConfig) -> Result<Vec<(AiryMode, Field)>> {
    let grid = cavity.fourier_grid();
    (0..count).map(|n| airy_mode(n, cavity, &grid)).collect()
}

/// Intensity on an `x × y` tensor grid, stored row by row (one row per `y` sample).
#[derive(Clone, Debug, PartialEq)]
pub struct IntensityMap {
    pub x: Grid1D,
    pub y: Grid1D,
    pub data: Vec<f64>,
}

impl IntensityMap {
    pub fn get(&self, ix: usize, iy: usize) -> f64 {
        self.data[iy * self.x.len() + ix]
    }

    pub fn row(&self, iy: usize) -> &[f64] {
        let nx = self.x.len();
        &self.data[iy * nx..(iy + 1) * nx]
    }

    pub fn max(&self) -> f64 {
        self.data.iter().copied().fold(0.0, f64::max)
    }

    /// `∫ I(x, y) dy` sampled on the `x` grid.
    pub fn marginal_x(&self) -> Vec<f64> {
        let dy = self.y.dx();
        let mut out = vec![0.0; self.x.len()];
        for iy in 0..self.y.len() {
            for (o, v) in out.iter_mut().zip(self.row(iy)) {
                *o += v * dy;
            }
        }
        out
    }
}

/// `|φ(x)|² |Y(y)|²` on the tensor product of the two field grids.
pub fn assemble_2d(mode_x: &Field, mode_y: &Field) -> IntensityMap {
    let ix = mode_x.intensity();
    let iy = mode_y.intensity();
    let mut data = Vec::with_capacity(ix.len() * iy.len());
    for wy in &iy {
        data.extend(ix.iter().map(|wx| wx * wy));
    }
    IntensityMap {
        x: *mode_x.grid(),
        y: *mode_y.grid(),
        data,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cavity::Mirror;
    use crate::fractional_ops::LevyIndex;
    use std::f64::consts::PI;

    fn paper_cavity() -> CavityConfig {
        CavityConfig {
            lambda: 1.064,
            focal: 1.0e4,
            alpha: LevyIndex::new(1.0).unwrap(),
            beta: 5.0e-3,
            mirror: Mirror::Spherical { radius: 5.0e5 },
            transmittance: 0.97,
            pump: None,
            grid: Grid1D::new(-600.0, 600.0, 4096).unwrap(),
        }
    }

    #[test]
    fn paper_kappa_and_ground_energy() {
        let c = paper_cavity();
        let (m, _) = airy_mode(0, &c, &c.fourier_grid()).unwrap();
        let mass: f64 = 1.064 * 1.0e8 / (2.0 * PI * 5.0e5);
        let kappa = (5.0e-3 / mass).cbrt();
        assert!((m.kappa - kappa).abs() < 1e-15);
        assert!((m.kappa - 5.28e-2).abs() < 1e-4);
        assert!((m.energy - 0.096).abs() < 1e-3);
        assert!((m.energy + mass * kappa * kappa * m.r_n).abs() < 1e-15);
    }

    #[test]
    fn zero_family_follows_parity() {
        for n in 0..12 {
            let m = AiryMode::new(n, 5e-3, 33.868);
            let (ai, aip) = crate::oracle::airy_pair(m.r_n);
            if n % 2 == 0 {
                assert!(aip.abs() < 1e-12);
            } else {
                assert!(ai.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn energies_increase_with_index() {
        let mut prev = 0.0;
        for n in 0..25 {
            let m = AiryMode::new(n, 5e-3, 33.868);
            assert!(m.r_n < 0.0 && m.energy > prev);
            prev = m.energy;
        }
    }

    #[test]
    fn origin_values() {
        let m0 = AiryMode::new(4, 5e-3, 33.868);
        assert_eq!(m0.profile(0.0), airy_ai(m0.r_n));
        let m1 = AiryMode::new(5, 5e-3, 33.868);
        assert_eq!(m1.profile(0.0), 0.0);
        // flat at the origin for even modes
        let h = 1e-6;
        assert!(((m0.profile(h) - m0.profile(0.0)) / h).abs() < 1e-5);
    }

    #[test]
    fn rejects_other_alpha() {
        let mut c = paper_cavity();
        c.alpha = LevyIndex::new(1.5).unwrap();
        assert!(matches!(airy_mode(0, &c, &c.fourier_grid()), Err(Error::Unsupported(_))));
    }

    #[test]
    fn zero_factor_gives_zero_map() {
        let g = Grid1D::centered(10.0, 16).unwrap();
        let a = Field::from_real_fn(g, |x| (-x * x).exp());
        let z = Field::zeros(g);
        assert!(assemble_2d(&a, &z).data.iter().all(|&v| v == 0.0));
        assert!(assemble_2d(&z, &a).data.iter().all(|&v| v == 0.0));
    }
}
