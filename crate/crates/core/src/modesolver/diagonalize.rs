use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fractional_ops::LevyIndex;
use crate::grid::{Field, Grid1D};

use super::tridiagonal::SymTridiagonal;

/// Lowest eigenpairs of the Fourier-plane oscillator `E φ = β|x|^α φ - (λf²/2πR) φ''`.
#[derive(Clone, Debug)]
pub struct SpectrumResult {
    /// Ascending energies (rad per round trip).
    pub energies: Vec<f64>,
    /// Real, unit-norm eigenfunctions on the requested grid.
    pub modes: Vec<Field>,
    /// `true` where the mode's amplitude at the grid edge exceeds `1e-6` of its peak.
    pub edge_warning: Vec<bool>,
}

/// Second-order finite-difference diagonalisation of the Fourier-plane eigenproblem,
/// with `φ = 0` just outside the grid.
///
/// Works for any `α`, including those with no closed-form modes.
pub fn diagonalize_momentum(
    alpha: LevyIndex,
    beta: f64,
    lambda: f64,
    focal: f64,
    radius: f64,
    grid: &Grid1D,
    k_modes: usize,
) -> Result<SpectrumResult> {
    if k_modes == 0 {
        return Err(Error::Config("k_modes must be at least 1".into()));
    }
    if !(beta >= 0.0 && lambda > 0.0 && focal > 0.0 && radius > 0.0) {
        return Err(Error::Config(
            "diagonalisation needs beta >= 0 and positive lambda, f and R".into(),
        ));
    }
    let mass = lambda * focal * focal / (2.0 * std::f64::consts::PI * radius);
    let dx = grid.dx();
    let hop = mass / (dx * dx);
    let diag = grid
        .coords()
        .into_iter()
        .map(|x| {
            let v = if x == 0.0 { 0.0 } else { beta * x.abs().powf(alpha.value()) };
            v + 2.0 * hop
        })
        .collect();
    let t = SymTridiagonal::new(diag, vec![-hop; grid.len() - 1])?;

    let n = grid.len();
    let mut energies = Vec::with_capacity(k_modes);
    let mut modes = Vec::with_capacity(k_modes);
    let mut edge_warning = Vec::with_capacity(k_modes);
    for (energy, mut v) in t.lowest(k_modes) {
        // sign: largest lobe on the x >= 0 side positive
        let anchor = (n / 2..n)
            .max_by(|&a, &b| v[a].abs().total_cmp(&v[b].abs()))
            .unwrap_or(0);
        if v[anchor] < 0.0 {
            v.iter_mut().for_each(|a| *a = -*a);
        }
        let peak = v.iter().fold(0.0f64, |m, a| m.max(a.abs()));
        let edge = v[0].abs().max(v[n - 1].abs());
        edge_warning.push(edge > 1e-6 * peak);
        let field = Field::new(*grid, v.into_iter().map(|a| Complex64::new(a, 0.0)).collect())?.normalized();
        energies.push(energy);
        modes.push(field);
    }
    Ok(SpectrumResult {
        energies,
        modes,
        edge_warning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn harmonic_limit_is_equally_spaced() {
        // α = 2: E = β x² - m φ'' has E_n = 2 sqrt(β m) (n + 1/2)
        let (beta, lambda, f, r) = (5e-3, 1.064, 1.0e4, 5.0e5);
        let m = lambda * f * f / (2.0 * PI * r);
        let grid = Grid1D::centered(100.0, 4096).unwrap();
        let s = diagonalize_momentum(LevyIndex::new(2.0).unwrap(), beta, lambda, f, r, &grid, 21).unwrap();
        let omega = 2.0 * (beta * m).sqrt();
        for (n, e) in s.energies.iter().enumerate() {
            let exact = omega * (n as f64 + 0.5);
            assert!((e - exact).abs() / exact < 1e-4, "n={n}: {e} vs {exact}");
        }
        assert!(s.edge_warning.iter().all(|w| !w));
    }

    #[test]
    fn free_limit_is_particle_in_a_box() {
        let grid = Grid1D::centered(10.0, 64).unwrap();
        let (lambda, f, r) = (1.0, 10.0, 20.0);
        let m = lambda * f * f / (2.0 * PI * r);
        let s = diagonalize_momentum(LevyIndex::new(1.0).unwrap(), 0.0, lambda, f, r, &grid, 6).unwrap();
        let dx = grid.dx();
        for (k, e) in s.energies.iter().enumerate() {
            let exact = 4.0 * m / (dx * dx) * ((k + 1) as f64 * PI / (2.0 * 65.0)).sin().powi(2);
            assert!((e - exact).abs() < 1e-10 * exact.max(1.0), "k={k}");
        }
        // box modes fill the whole grid
        assert!(s.edge_warning.iter().all(|&w| w));
    }

    #[test]
    fn rejects_bad_input() {
        let grid = Grid1D::centered(10.0, 64).unwrap();
        let a = LevyIndex::new(1.0).unwrap();
        assert!(diagonalize_momentum(a, 1.0, 1.0, 1.0, 1.0, &grid, 0).is_err());
        assert!(diagonalize_momentum(a, 1.0, 1.0, 1.0, -1.0, &grid, 1).is_err());
    }

    #[test]
    fn modes_have_alternating_parity() {
        let grid = Grid1D::centered(300.0, 2048).unwrap();
        let s = diagonalize_momentum(LevyIndex::new(1.0).unwrap(), 5e-3, 1.064, 1.0e4, 5.0e5, &grid, 6).unwrap();
        for (n, mode) in s.modes.iter().enumerate() {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let mut r = mode.reflected();
            r.scale(Complex64::new(sign, 0.0));
            assert!(r.relative_distance(mode) < 1e-6, "n={n}");
        }
    }
}
