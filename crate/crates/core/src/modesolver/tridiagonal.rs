//! Real symmetric tridiagonal eigenproblem: Sturm-sequence bisection for
//! selected eigenvalues and inverse iteration for their eigenvectors.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct SymTridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return Err(Error::Config(format!(
                "tridiagonal needs n diagonal and n-1 off-diagonal entries, got {} and {}",
                diag.len(),
                off.len()
            )));
        }
        Ok(Self { diag, off })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 }
                + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// Number of eigenvalues strictly below `x` (Sturm count of `T - xI`).
    pub fn count_below(&self, x: f64) -> usize {
        let tiny = f64::MIN_POSITIVE.sqrt();
        let mut count = 0;
        let mut q = self.diag[0] - x;
        for i in 0..self.len() {
            if i > 0 {
                q = self.diag[i] - x - self.off[i - 1] * self.off[i - 1] / q;
            }
            if q == 0.0 {
                q = -tiny;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `k`-th smallest eigenvalue (0-based), bisected to machine resolution.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        let (mut lo, mut hi) = self.gershgorin();
        let span = hi - lo;
        lo -= 1e-12 * span.max(1.0);
        hi += 1e-12 * span.max(1.0);
        loop {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi || hi - lo <= 2.0 * f64::EPSILON * (lo.abs() + hi.abs()) {
                return mid;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
    }

    /// Solves `(T - shift I) x = b` by Gaussian elimination with partial pivoting.
    fn shifted_solve(&self, shift: f64, b: &mut [f64]) {
        let n = self.len();
        if n == 1 {
            let d = self.diag[0] - shift;
            b[0] /= if d == 0.0 { f64::EPSILON } else { d };
            return;
        }
        // row i of U holds (u0, u1, u2) on columns i, i+1, i+2
        let mut u0 = vec![0.0; n];
        let mut u1 = vec![0.0; n];
        let mut u2 = vec![0.0; n];
        let mut d = self.diag[0] - shift;
        let mut e = self.off[0];
        for i in 0..n - 1 {
            let sub = self.off[i];
            let next_d = self.diag[i + 1] - shift;
            let next_e = if i + 2 < n { self.off[i + 1] } else { 0.0 };
            if d.abs() >= sub.abs() {
                let pivot = if d == 0.0 { f64::EPSILON } else { d };
                let m = sub / pivot;
                u0[i] = pivot;
                u1[i] = e;
                u2[i] = 0.0;
                b[i + 1] -= m * b[i];
                d = next_d - m * e;
                e = next_e;
            } else {
                // swap rows i and i+1
                let m = d / sub;
                u0[i] = sub;
                u1[i] = next_d;
                u2[i] = next_e;
                b.swap(i, i + 1);
                b[i + 1] -= m * b[i];
                d = e - m * next_d;
                e = -m * next_e;
            }
        }
        u0[n - 1] = if d == 0.0 { f64::EPSILON } else { d };
        for i in (0..n).rev() {
            let mut s = b[i];
            if i + 1 < n {
                s -= u1[i] * b[i + 1];
            }
            if i + 2 < n {
                s -= u2[i] * b[i + 2];
            }
            b[i] = s / u0[i];
        }
    }

    /// Unit eigenvector for eigenvalue `lambda` by inverse iteration,
    /// orthogonalised against `previous` (eigenvectors of nearby eigenvalues).
    pub fn eigenvector(&self, lambda: f64, previous: &[&[f64]]) -> Vec<f64> {
        let n = self.len();
        let scale = self.gershgorin().1.abs().max(self.gershgorin().0.abs()).max(1.0);
        let shift = lambda + 4.0 * f64::EPSILON * scale;
        let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 0.5 * ((i as f64) * 0.618_033_988_7).fract()).collect();
        for _ in 0..4 {
            for p in previous {
                let dot: f64 = v.iter().zip(p.iter()).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(p.iter()).for_each(|(a, b)| *a -= dot * b);
            }
            let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            v.iter_mut().for_each(|a| *a /= norm);
            self.shifted_solve(shift, &mut v);
        }
        for p in previous {
            let dot: f64 = v.iter().zip(p.iter()).map(|(a, b)| a * b).sum();
            v.iter_mut().zip(p.iter()).for_each(|(a, b)| *a -= dot * b);
        }
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        v.iter_mut().for_each(|a| *a /= norm);
        v
    }

    /// `T v`
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * v[i];
                if i > 0 {
                    s += self.off[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    s += self.off[i] * v[i + 1];
                }
                s
            })
            .collect()
    }

    /// The `k` smallest eigenpairs, ascending.
    pub fn lowest(&self, k: usize) -> Vec<(f64, Vec<f64>)> {
        let k = k.min(self.len());
        let values: Vec<f64> = (0..k).map(|i| self.eigenvalue(i)).collect();
        let mut pairs: Vec<(f64, Vec<f64>)> = Vec::with_capacity(k);
        for (i, &lambda) in values.iter().enumerate() {
            let close: Vec<&[f64]> = pairs
                .iter()
                .take(i)
                .filter(|(mu, _)| (mu - lambda).abs() <= 1e-6 * lambda.abs().max(1e-300))
                .map(|(_, v)| v.as_slice())
                .collect();
            let v = self.eigenvector(lambda, &close);
            pairs.push((lambda, v));
        }
        pairs
    }
}
