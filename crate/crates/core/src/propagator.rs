//! Split-step evolution of the fractional Schrödinger equation and the
//! lens transform between the near-field and Fourier planes of a 4f system.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fractional_ops::{kinetic_multiplier, LevyIndex, ScaleConstant};
use crate::grid::{Field, Grid1D, UnitaryFft};

/// Real potential `V(x)`, in radians of phase per round trip.
#[derive(Clone, Debug, PartialEq)]
pub enum Potential {
    /// `β |x|^α`
    PowerLaw { beta: f64, alpha: f64 },
    /// Spherical mirror of radius `radius`: `2π x² / (λ R)`.
    Parabolic { lambda: f64, radius: f64 },
    /// One value per grid sample.
    Tabulated(Vec<f64>),
}

impl Potential {
    pub fn zero() -> Self {
        Potential::PowerLaw {
            beta: 0.0,
            alpha: 2.0,
        }
    }

    pub fn is_even(&self) -> bool {
        !matches!(self, Potential::Tabulated(_))
    }

    pub fn evaluate(&self, grid: &Grid1D) -> Result<Vec<f64>> {
        match self {
            Potential::PowerLaw { beta, alpha } => {
                if *beta < 0.0 || !beta.is_finite() {
                    return Err(Error::Config(format!("power-law strength {beta} < 0")));
                }
                Ok(grid
                    .coords()
                    .into_iter()
                    .map(|x| if x == 0.0 { 0.0 } else { beta * x.abs().powf(*alpha) })
                    .collect())
            }
            Potential::Parabolic { lambda, radius } => {
                if *radius == 0.0 || !radius.is_finite() {
                    return Err(Error::Config("mirror radius must be finite and non-zero".into()));
                }
                let c = 2.0 * PI / (lambda * radius);
                Ok(grid.coords().into_iter().map(|x| c * x * x).collect())
            }
            Potential::Tabulated(v) => {
                if v.len() != grid.len() {
                    return Err(Error::Config(format!(
                        "tabulated potential has {} samples, grid has {}",
                        v.len(),
                        grid.len()
                    )));
                }
                Ok(v.clone())
            }
        }
    }
}

/// Strang splitting `e^{-iV dt/2} e^{-iD|p|^α dt} e^{-iV dt/2}`, precomputed for one grid.
#[derive(Debug, Clone)]
pub struct SplitStepper {
    grid: Grid1D,
    fft: UnitaryFft,
    half_potential: Vec<Complex64>,
    full_potential: Vec<Complex64>,
    kinetic: Vec<Complex64>,
}

impl SplitStepper {
    pub fn new(
        grid: Grid1D,
        potential: &Potential,
        alpha: LevyIndex,
        d_alpha: ScaleConstant,
        dt: f64,
    ) -> Result<Self> {
        let v = potential.evaluate(&grid)?;
        Ok(Self {
            grid,
            fft: UnitaryFft::new(grid.len()),
            half_potential: v.iter().map(|v| Complex64::from_polar(1.0, -0.5 * v * dt)).collect(),
            full_potential: v.iter().map(|v| Complex64::from_polar(1.0, -v * dt)).collect(),
            kinetic: kinetic_multiplier(&grid, alpha, d_alpha, dt),
        })
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    /// Advances `buf` by `steps` steps. Adjacent half-potential kicks are fused.
    pub fn advance(&self, buf: &mut [Complex64], steps: usize) {
        if steps == 0 {
            return;
        }
        mul_assign(buf, &self.half_potential);
        for step in 0..steps {
            self.fft.forward(buf);
            mul_assign(buf, &self.kinetic);
            self.fft.inverse(buf);
            if step + 1 < steps {
                mul_assign(buf, &self.full_potential);
            }
        }
        mul_assign(buf, &self.half_potential);
    }

    pub fn evolve(&self, field: &Field, steps: usize) -> Result<Field> {
        check_grid(field, &self.grid)?;
        let mut buf = field.samples().to_vec();
        self.advance(&mut buf, steps);
        Field::new(self.grid, buf)
    }
}

/// Evolves `field` through `steps` Strang steps of size `dt` under
/// `i∂ψ/∂t = [D_α(-∂²)^{α/2} + V]ψ`.
pub fn split_step(
    field: &Field,
    potential: &Potential,
    alpha: LevyIndex,
    d_alpha: ScaleConstant,
    dt: f64,
    steps: usize,
) -> Result<Field> {
    SplitStepper::new(*field.grid(), potential, alpha, d_alpha, dt)?.evolve(field, steps)
}

/// Field at the Fourier plane `q` of a 4f lens pair:
/// `φ(x) = sqrt(i/λf) ∫ ψ(ξ) exp(2πi x ξ / λf) dξ`.
///
/// The output lives on [`Grid1D::fourier_plane`]. The transform is unitary.
pub fn to_fourier_plane(field: &Field, lambda: f64, focal: f64) -> Field {
    let grid = *field.grid();
    let n = grid.len();
    let q = grid.fourier_plane(lambda, focal);
    let fft = UnitaryFft::new(n);

    // ξ_j = x_min + j dξ and x_m = (m - n/2) dq with dq dξ = λf/n, so the
    // kernel splits into e^{2πi mj/n} (-1)^j e^{2πi x_m x_min/λf}.
    let mut buf: Vec<Complex64> = field
        .samples()
        .iter()
        .enumerate()
        .map(|(j, z)| if j % 2 == 0 { *z } else { -*z })
        .collect();
    fft.inverse(&mut buf);
    let amp = (grid.dx() / q.dx()).sqrt();
    let k = 2.0 * PI * grid.x_min() / (lambda * focal);
    for (m, z) in buf.iter_mut().enumerate() {
        *z *= Complex64::from_polar(amp, FRAC_PI_4 + k * q.x(m));
    }
    Field::new(q, buf).expect("length preserved")
}

/// Exact discrete inverse of [`to_fourier_plane`] back onto `gamma`.
pub fn from_fourier_plane(field_q: &Field, gamma: &Grid1D, lambda: f64, focal: f64) -> Result<Field> {
    let q = gamma.fourier_plane(lambda, focal);
    check_grid(field_q, &q)?;
    let n = gamma.len();
    let fft = UnitaryFft::new(n);
    let amp = (q.dx() / gamma.dx()).sqrt();
    let k = 2.0 * PI * gamma.x_min() / (lambda * focal);
    let mut buf: Vec<Complex64> = field_q
        .samples()
        .iter()
        .enumerate()
        .map(|(m, z)| z * Complex64::from_polar(amp, -FRAC_PI_4 - k * q.x(m)))
        .collect();
    fft.forward(&mut buf);
    for (j, z) in buf.iter_mut().enumerate() {
        if j % 2 == 1 {
            *z = -*z;
        }
    }
    Field::new(*gamma, buf)
}

pub(crate) fn mul_assign(buf: &mut [Complex64], factors: &[Complex64]) {
    buf.iter_mut().zip(factors).for_each(|(z, f)| *z *= f);
}

pub(crate) fn check_grid(field: &Field, grid: &Grid1D) -> Result<()> {
    let g = field.grid();
    let tol = 1e-9 * grid.width();
    if g.len() != grid.len()
        || (g.x_min() - grid.x_min()).abs() > tol
        || (g.x_max() - grid.x_max()).abs() > tol
    {
        return Err(Error::Config(format!("field grid {g} does not match {grid}")));
    }
    Ok(())
}
