//! Uniform 1D sampling grids, their Fourier-conjugate frequencies and the
//! complex field container that every other module operates on.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Uniform periodic sampling of `[x_min, x_max)` with `n` points, `n` a power of two.
///
/// Sample `j` sits at `x_min + j * dx`. Lengths are in micrometres.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid1D {
    x_min: f64,
    x_max: f64,
    n: usize,
}

impl Grid1D {
    pub fn new(x_min: f64, x_max: f64, n: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite()) || x_max <= x_min {
            return Err(Error::Config(format!(
                "degenerate grid interval [{x_min}, {x_max}]"
            )));
        }
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::Config(format!(
                "grid size {n} is not a power of two >= 2"
            )));
        }
        Ok(Self { x_min, x_max, n })
    }

    /// Grid symmetric about the origin, so that sample `n/2` is exactly `x = 0`.
    pub fn centered(half_width: f64, n: usize) -> Result<Self> {
        Self::new(-half_width, half_width, n)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.n as f64
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x_min + j as f64 * self.dx()
    }

    pub fn coords(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.x(j)).collect()
    }

    /// Angular frequency of FFT bin `k` in standard ordering (rad/μm).
    ///
    /// Bins `k >= n/2` carry negative frequencies; bin `n/2` is `-π/dx`.
    pub fn freq(&self, k: usize) -> f64 {
        let n = self.n as isize;
        let k = k as isize;
        let signed = if k < n / 2 { k } else { k - n };
        2.0 * PI * signed as f64 / self.width()
    }

    pub fn freqs(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.freq(k)).collect()
    }

    pub fn nyquist(&self) -> f64 {
        PI / self.dx()
    }

    /// True when `x_min = -x_max`. Then `x_{n-j} = -x_j` with indices taken
    /// mod n, and sample 0 at `-L` is its own (periodic) mirror image.
    pub fn is_centered(&self) -> bool {
        (self.x_min + self.x_max).abs() <= 1e-12 * self.width()
    }

    /// The Fourier-plane grid of a 4f system: spacing `λf/(n·dx)`, centred on the axis.
    pub fn fourier_plane(&self, lambda: f64, focal: f64) -> Grid1D {
        let dq = lambda * focal / (self.n as f64 * self.dx());
        let half = dq * (self.n / 2) as f64;
        Grid1D {
            x_min: -half,
            x_max: half,
            n: self.n,
        }
    }
}

impl fmt::Display for Grid1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}) um x {}", self.x_min, self.x_max, self.n)
    }
}

/// Unitary discrete Fourier transform (1/√n on both directions).
#[derive(Clone)]
pub struct UnitaryFft {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scale: f64,
}

impl UnitaryFft {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
            scale: 1.0 / (n as f64).sqrt(),
        }
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `X_k = n^{-1/2} Σ_j x_j e^{-2πijk/n}`
    pub fn forward(&self, buf: &mut [Complex64]) {
        self.forward.process(buf);
        buf.iter_mut().for_each(|z| *z *= self.scale);
    }

    /// `x_j = n^{-1/2} Σ_k X_k e^{+2πijk/n}`
    pub fn inverse(&self, buf: &mut [Complex64]) {
        self.inverse.process(buf);
        buf.iter_mut().for_each(|z| *z *= self.scale);
    }
}

impl fmt::Debug for UnitaryFft {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("UnitaryFft").field("n", &self.len()).finish()
    }
}

/// Complex transverse envelope sampled on a [`Grid1D`].
#[derive(Clone, Debug, PartialEq)]
pub struct Field {
    grid: Grid1D,
    samples: Vec<Complex64>,
}

impl Field {
    pub fn new(grid: Grid1D, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::Config(format!(
                "field has {} samples but grid has {}",
                samples.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, samples })
    }

    pub fn zeros(grid: Grid1D) -> Self {
        Self {
            grid,
            samples: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> Complex64) -> Self {
        let samples = (0..grid.len()).map(|j| f(grid.x(j))).collect();
        Self { grid, samples }
    }

    pub fn from_real_fn(grid: Grid1D, f: impl Fn(f64) -> f64) -> Self {
        Self::from_fn(grid, |x| Complex64::new(f(x), 0.0))
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [Complex64] {
        &mut self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    /// `sqrt(Σ|ψ_j|² dx)`
    pub fn norm_l2(&self) -> f64 {
        norm_l2(self)
    }

    /// `Σ conj(ψ_j) χ_j dx`
    pub fn inner(&self, other: &Field) -> Complex64 {
        inner(&self.samples, &other.samples) * self.grid.dx()
    }

    /// Rescales to unit L2 norm; returns the norm it had before. Zero fields are left alone.
    pub fn normalize(&mut self) -> f64 {
        let norm = self.norm_l2();
        if norm > 0.0 {
            let inv = 1.0 / norm;
            self.samples.iter_mut().for_each(|z| *z *= inv);
        }
        norm
    }

    pub fn normalized(mut self) -> Self {
        self.normalize();
        self
    }

    pub fn scale(&mut self, factor: Complex64) {
        self.samples.iter_mut().for_each(|z| *z *= factor);
    }

    pub fn intensity(&self) -> Vec<f64> {
        self.samples.iter().map(|z| z.norm_sqr()).collect()
    }

    /// Relative L2 distance `‖self - other‖ / ‖other‖`.
    pub fn relative_distance(&self, other: &Field) -> f64 {
        let diff: f64 = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        let base: f64 = other.samples.iter().map(|b| b.norm_sqr()).sum();
        (diff / base).sqrt()
    }

    /// The mirror image `ψ(-x)`; requires a centered grid.
    pub fn reflected(&self) -> Field {
        let n = self.grid.len();
        let samples = (0..n).map(|j| self.samples[(n - j) % n]).collect();
        Field {
            grid: self.grid,
            samples,
        }
    }
}

/// `sqrt(Σ|ψ_j|² dx)`
pub fn norm_l2(field: &Field) -> f64 {
    let sum: f64 = field.samples.iter().map(|z| z.norm_sqr()).sum();
    (sum * field.grid.dx()).sqrt()
}

/// Plain `Σ conj(a_j) b_j` with no grid weight.
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paper_default_grid_spacing() {
        let g = Grid1D::new(-600.0, 600.0, 4096).unwrap();
        assert!((g.dx() - 0.29296875).abs() < 1e-15);
        assert!((g.nyquist() - 10.723_302_924_253_16).abs() < 1e-9);
        let pmax = g.freqs().iter().fold(0.0f64, |m, p| m.max(p.abs()));
        assert!((pmax - g.nyquist()).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(matches!(Grid1D::new(0.0, 1.0, 3), Err(Error::Config(_))));
        assert!(matches!(Grid1D::new(0.0, 1.0, 1), Err(Error::Config(_))));
        assert!(matches!(Grid1D::new(1.0, 1.0, 8), Err(Error::Config(_))));
        assert!(matches!(Grid1D::new(2.0, 1.0, 8), Err(Error::Config(_))));
    }

    #[test]
    fn frequencies_are_fft_dual() {
        let g = Grid1D::new(-3.0, 5.0, 64).unwrap();
        for k in 0..64 {
            let phase = g.freq(k) * g.dx();
            let expected = 2.0 * PI * k as f64 / 64.0;
            let diff = (phase - expected).rem_euclid(2.0 * PI);
            assert!(diff < 1e-12 || (2.0 * PI - diff) < 1e-12, "k={k}");
        }
    }

    #[test]
    fn norms() {
        let g = Grid1D::new(-10.0, 10.0, 256).unwrap();
        assert_eq!(Field::zeros(g).norm_l2(), 0.0);
        let ones = Field::from_real_fn(g, |_| 1.0);
        assert!((ones.norm_l2() - 20f64.sqrt()).abs() < 1e-12);

        let w = 1.3;
        let gauss = Field::from_real_fn(g, |x| (2.0 / (PI * w * w)).powf(0.25) * (-x * x / (w * w)).exp());
        assert!((gauss.norm_l2() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fourier_plane_spacing() {
        let g = Grid1D::centered(600.0, 4096).unwrap();
        let q = g.fourier_plane(1.064, 1.0e4);
        assert!((q.dx() - 1.064e4 / 1200.0).abs() < 1e-9);
        assert!(q.is_centered());
        assert_eq!(q.x(2048), 0.0);
    }

    #[test]
    fn reflection_on_centered_grid() {
        let g = Grid1D::centered(4.0, 16).unwrap();
        let f = Field::from_real_fn(g, |x| x * x * x + 0.5 * x);
        let r = f.reflected();
        for j in 1..16 {
            assert!((r.samples()[j].re + f.samples()[j].re).abs() < 1e-12);
        }
    }
}
