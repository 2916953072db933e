//! Airy function `Ai` and its derivative on the real line, and the negative
//! zeros of both.
//!
//! Three regimes:
//!
//! * `|x| ≤ 3`: Maclaurin series around the origin.
//! * `3 < |x| < 9`: Taylor expansion about the nearest node of a table with
//!   spacing 1/4, using the Airy recursion for the coefficients. The table is
//!   built once, stepping inward from the asymptotic values at `±9`.
//! * `|x| ≥ 9`: the standard asymptotic expansions, truncated at the
//!   smallest term.
//!
//! Absolute accuracy is about 1e-14 up to `|x| = 1e3`.

use std::f64::consts::{FRAC_PI_4, PI};
use std::sync::OnceLock;

/// `Ai(0) = 3^{-2/3} / Γ(2/3)`
const AI0: f64 = 0.355_028_053_887_817_24;
/// `-Ai'(0) = 3^{-1/3} / Γ(1/3)`
const AIP0: f64 = 0.258_819_403_792_806_8;

const SERIES_LIMIT: f64 = 3.0;
const ASYMPTOTIC_LIMIT: f64 = 9.0;
const NODE_STEP: f64 = 0.25;

/// Which family of zeros to locate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AiryZeroKind {
    /// Zeros of `Ai(x)`.
    Ai,
    /// Zeros of `Ai'(x)`.
    AiPrime,
}

pub fn airy_ai(x: f64) -> f64 {
    airy_pair(x).0
}

pub fn airy_ai_prime(x: f64) -> f64 {
    airy_pair(x).1
}

/// `(Ai(x), Ai'(x))`
pub fn airy_pair(x: f64) -> (f64, f64) {
    if x.is_nan() {
        return (f64::NAN, f64::NAN);
    }
    let ax = x.abs();
    if ax <= SERIES_LIMIT {
        maclaurin(x)
    } else if ax >= ASYMPTOTIC_LIMIT {
        if x > 0.0 {
            asymptotic_positive(x)
        } else {
            asymptotic_negative(-x)
        }
    } else {
        let table = node_table();
        let k = (x / NODE_STEP).round();
        let (y, yp) = table.at(k as i64);
        taylor(k * NODE_STEP, y, yp, x - k * NODE_STEP)
    }
}

fn maclaurin(x: f64) -> (f64, f64) {
    let x3 = x * x * x;
    // f = Σ a_k x^{3k}, g = Σ b_k x^{3k+1}
    let (mut f, mut fp) = (1.0, 0.0);
    let (mut g, mut gp) = (x, 1.0);
    let mut a = 1.0;
    let mut b = 1.0;
    let mut pow = 1.0; // x^{3k}
    for k in 1..200 {
        let kf = k as f64;
        let prev_pow = pow;
        pow *= x3;
        a /= (3.0 * kf - 1.0) * (3.0 * kf);
        b /= (3.0 * kf) * (3.0 * kf + 1.0);
        let tf = a * pow;
        let tfp = 3.0 * kf * a * prev_pow * x * x;
        let tg = b * pow * x;
        let tgp = (3.0 * kf + 1.0) * b * pow;
        f += tf;
        fp += tfp;
        g += tg;
        gp += tgp;
        let scale = f.abs() + g.abs() + fp.abs() + gp.abs();
        if tf.abs() + tfp.abs() + tg.abs() + tgp.abs() <= 1e-17 * scale {
            break;
        }
    }
    (AI0 * f - AIP0 * g, AI0 * fp - AIP0 * gp)
}

fn u_coefficients() -> &'static [f64] {
    static U: OnceLock<Vec<f64>> = OnceLock::new();
    U.get_or_init(|| {
        let mut u = vec![1.0];
        for k in 1..60 {
            let kf = k as f64;
            let prev = u[k - 1];
            u.push(prev * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf));
        }
        u
    })
}

fn v_coefficient(k: usize) -> f64 {
    let kf = k as f64;
    -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u_coefficients()[k]
}

/// Sums `Σ sign_k c_k ζ^{-k}` over `k ≡ start (mod step)`, stopping at the smallest term.
fn truncated_sum(coeff: impl Fn(usize) -> f64, zeta: f64, start: usize, step: usize, alternate: bool) -> f64 {
    let mut sum = 0.0;
    let mut last = f64::INFINITY;
    let mut j = 0;
    let mut k = start;
    while k < u_coefficients().len() {
        let sign = if alternate && j % 2 == 1 { -1.0 } else { 1.0 };
        let term = sign * coeff(k) / zeta.powi(k as i32);
        if term.abs() > last {
            break;
        }
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
        last = term.abs();
        j += 1;
        k += step;
    }
    sum
}

fn asymptotic_positive(x: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let u = u_coefficients();
    let su = truncated_sum(|k| u[k], zeta, 0, 1, true);
    let sv = truncated_sum(v_coefficient, zeta, 0, 1, true);
    let e = (-zeta).exp() / (2.0 * PI.sqrt());
    let q = x.powf(0.25);
    (e / q * su, -e * q * sv)
}

fn asymptotic_negative(z: f64) -> (f64, f64) {
    let zeta = 2.0 / 3.0 * z.powf(1.5);
    let u = u_coefficients();
    let u_even = truncated_sum(|k| u[k], zeta, 0, 2, true);
    let u_odd = truncated_sum(|k| u[k], zeta, 1, 2, true);
    let v_even = truncated_sum(v_coefficient, zeta, 0, 2, true);
    let v_odd = truncated_sum(v_coefficient, zeta, 1, 2, true);
    let (s, c) = (zeta - FRAC_PI_4).sin_cos();
    let q = z.powf(0.25);
    let rp = 1.0 / PI.sqrt();
    let ai = rp / q * (c * u_even + s * u_odd);
    let aip = rp * q * (s * v_even - c * v_odd);
    (ai, aip)
}

/// Taylor expansion of the Airy solution through `(x0, y, y')` evaluated at `x0 + t`.
///
/// Coefficients follow from `y'' = x y`: `(k+2)(k+1) c_{k+2} = x0 c_k + c_{k-1}`.
fn taylor(x0: f64, y: f64, yp: f64, t: f64) -> (f64, f64) {
    let mut c = [0.0f64; 3];
    c[0] = y;
    c[1] = yp;
    c[2] = 0.5 * x0 * y;
    let mut value = c[0] + t * (c[1] + t * c[2]);
    let mut deriv = c[1] + 2.0 * t * c[2];
    let mut tk = t * t; // t^{k-1} for the derivative of the next term
    let mut tpow = t * t * t; // t^k
    let mut prev2 = c[1];
    let mut prev1 = c[2];
    let mut prev0 = c[0];
    // rolling window over c_{k-3}, c_{k-2}, c_{k-1}
    for k in 3..120 {
        let kf = k as f64;
        let ck = (x0 * prev2 + prev0) / (kf * (kf - 1.0));
        let term = ck * tpow;
        let dterm = kf * ck * tk;
        value += term;
        deriv += dterm;
        if term.abs() <= 1e-18 * value.abs().max(1e-300) && dterm.abs() <= 1e-18 * deriv.abs().max(1e-300) {
            break;
        }
        prev0 = prev2;
        prev2 = prev1;
        prev1 = ck;
        tk *= t;
        tpow *= t;
    }
    (value, deriv)
}

struct NodeTable {
    /// node `k` (x = k/4) for `-36 ≤ k ≤ 36`
    values: Vec<(f64, f64)>,
}

impl NodeTable {
    const HALF: i64 = 36;

    fn at(&self, k: i64) -> (f64, f64) {
        self.values[(k + Self::HALF) as usize]
    }
}

fn node_table() -> &'static NodeTable {
    static TABLE: OnceLock<NodeTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let half = NodeTable::HALF;
        let mut values = vec![(0.0, 0.0); (2 * half + 1) as usize];
        let inner = (SERIES_LIMIT / NODE_STEP) as i64;
        for k in -inner..=inner {
            values[(k + half) as usize] = maclaurin(k as f64 * NODE_STEP);
        }
        // outward sides: start from the asymptotic values at ±9 and step inwards
        values[(2 * half) as usize] = asymptotic_positive(ASYMPTOTIC_LIMIT);
        values[0] = asymptotic_negative(ASYMPTOTIC_LIMIT);
        for k in (inner + 1..half).rev() {
            let (y, yp) = values[(k + 1 + half) as usize];
            values[(k + half) as usize] = taylor((k + 1) as f64 * NODE_STEP, y, yp, -NODE_STEP);
        }
        for k in (-half + 1)..-inner {
            let (y, yp) = values[(k - 1 + half) as usize];
            values[(k + half) as usize] = taylor((k - 1) as f64 * NODE_STEP, y, yp, NODE_STEP);
        }
        NodeTable { values }
    })
}

/// Asymptotic estimate of the `n`-th (1-based) negative zero.
fn zero_guess(n: usize, kind: AiryZeroKind) -> f64 {
    let nf = n as f64;
    match kind {
        AiryZeroKind::Ai => {
            let t = 3.0 * PI * (4.0 * nf - 1.0) / 8.0;
            -t.powf(2.0 / 3.0) * (1.0 + 5.0 / 48.0 / t.powi(2) - 5.0 / 36.0 / t.powi(4))
        }
        AiryZeroKind::AiPrime => {
            let t = 3.0 * PI * (4.0 * nf - 3.0) / 8.0;
            -t.powf(2.0 / 3.0) * (1.0 - 7.0 / 48.0 / t.powi(2) + 35.0 / 288.0 / t.powi(4))
        }
    }
}

/// The `n`-th negative zero (n ≥ 1, ordered by decreasing value) of `Ai` or `Ai'`.
///
/// Newton's method safeguarded by bisection inside a bracket around the
/// asymptotic estimate. Panics if `n == 0`.
pub fn airy_zero(n: usize, kind: AiryZeroKind) -> f64 {
    assert!(n >= 1, "Airy zeros are numbered from 1");
    let guess = zero_guess(n, kind);
    let eval = |x: f64| {
        let (ai, aip) = airy_pair(x);
        match kind {
            AiryZeroKind::Ai => (ai, aip),
            AiryZeroKind::AiPrime => (aip, x * ai),
        }
    };
    // local zero spacing is about π/sqrt|x|; a quarter of it isolates one root
    let half = 0.25 * PI / guess.abs().max(1.0).sqrt();
    let (mut lo, mut hi) = (guess - half, guess + half);
    let (mut flo, _) = eval(lo);
    let (fhi, _) = eval(hi);
    debug_assert!(flo * fhi <= 0.0, "zero not bracketed near {guess}");
    let mut x = guess;
    for _ in 0..200 {
        let (f, fp) = eval(x);
        if f == 0.0 {
            return x;
        }
        if (f < 0.0) == (flo < 0.0) {
            lo = x;
            flo = f;
        } else {
            hi = x;
        }
        let newton = x - f / fp;
        let next = if newton > lo.min(hi) && newton < lo.max(hi) { newton } else { 0.5 * (lo + hi) };
        if (next - x).abs() <= 4.0 * f64::EPSILON * x.abs() {
            return next;
        }
        x = next;
    }
    x
}
