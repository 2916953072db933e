//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;

use fracavity::cavity::{CavityConfig, Mirror};

/// Direct quadrature of the Huygens round-trip kernel
/// `K(x, θ) = (1/λf) ∫ dξ exp[-i β|ξ|^α - i V(x) + 2πi ξ (x - θ)/(λf)]`
/// with the gain sheet and output coupler applied after it.
pub fn kernel_by_quadrature(c: &CavityConfig, psi: &[Complex64]) -> Vec<Complex64> {
    let g = c.grid;
    let n = g.len();
    let lf = c.lambda * c.focal;
    let dxi = lf / (n as f64 * g.dx());
    let radius = match c.mirror {
        Mirror::Spherical { radius } => radius,
        _ => unreachable!(),
    };
    let xi: Vec<f64> = (0..n).map(|m| (m as f64 - (n / 2) as f64) * dxi).collect();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (j, o) in out.iter_mut().enumerate() {
        let x = g.x(j);
        let v = 2.0 * PI * x * x / (c.lambda * radius);
        let gain = c.pump.map(|p| p.gain_at(x)).unwrap_or(0.0);
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, p) in psi.iter().enumerate() {
            let theta = g.x(k);
            let mut kern = Complex64::new(0.0, 0.0);
            for &s in &xi {
                let phase = -c.beta * s.abs().powf(c.alpha.value()) + 2.0 * PI * s * (x - theta) / lf;
                kern += Complex64::from_polar(dxi, phase);
            }
            acc += kern * p * g.dx();
        }
        *o = c.transmittance.sqrt() * gain.exp() * Complex64::from_polar(1.0, -v) * acc / lf;
    }
    out
}

/// Self-consistent Gaussian beam of the y-resonator, found from the round-trip
/// ray matrix starting at the Fourier plane: 2f to the flat mirror and back,
/// then 2f to the spherical mirror and back.
pub fn abcd_beam(lambda: f64, f: f64, r: f64) -> (f64, f64) {
    type M = [[f64; 2]; 2];
    let mul = |a: M, b: M| -> M {
        [
            [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
            [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
        ]
    };
    let space = |d: f64| -> M { [[1.0, d], [0.0, 1.0]] };
    let mirror = |rad: f64| -> M { [[1.0, 0.0], [-2.0 / rad, 1.0]] };
    let m = [space(2.0 * f), mirror(r), space(2.0 * f), space(2.0 * f), space(2.0 * f)]
        .into_iter()
        .reduce(mul)
        .unwrap();
    let (a, b, d) = (m[0][0], m[0][1], m[1][1]);
    let half_trace = 0.5 * (a + d);
    assert!(half_trace.abs() < 1.0, "unstable");
    // 1/q = (D − A)/2B − i sqrt(1 − ((A+D)/2)²)/|B|
    let inv_re = (d - a) / (2.0 * b);
    let inv_im = -(1.0 - half_trace * half_trace).sqrt() / b.abs();
    let radius = 1.0 / inv_re;
    let w = (-lambda / (PI * inv_im)).sqrt();
    (radius.abs(), w)
}

