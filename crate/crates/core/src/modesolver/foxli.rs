use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cavity::{CavityConfig, RoundTrip};
use crate::error::{Error, Result};
use crate::grid::{inner, Field};
use crate::propagator::{check_grid, to_fourier_plane};

/// Seed used when neither the caller nor `FRACAVITY_SEED` picks one.
pub const DEFAULT_SEED: u64 = 1961;

/// Starting field of the iteration.
#[derive(Clone, Debug, PartialEq)]
pub enum Seed {
    /// Complex Gaussian noise from a ChaCha8 stream with this seed.
    Random(u64),
    /// Explicit start field on the cavity grid.
    Field(Field),
}

/// Parity sector the iteration is confined to.
///
/// With even masks, mirror and gain the round trip commutes with `x → -x`,
/// so its eigenvectors split into even and odd families. `Any` leaves the
/// iterate unconstrained.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Parity {
    #[default]
    Any,
    Even,
    Odd,
}

impl Parity {
    pub fn name(self) -> &'static str {
        match self {
            Parity::Any => "any",
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }

    pub(crate) fn project(self, buf: &mut [Complex64]) {
        let sign = match self {
            Parity::Any => return,
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        };
        let n = buf.len();
        // x_{n-j} = -x_j on a centred grid; j = 0 and j = n/2 are fixed points
        for j in 1..n / 2 {
            let a = buf[j];
            let b = buf[n - j];
            buf[j] = 0.5 * (a + sign * b);
            buf[n - j] = sign * buf[j];
        }
        if sign < 0.0 {
            buf[0] = Complex64::new(0.0, 0.0);
            buf[n / 2] = Complex64::new(0.0, 0.0);
        }
    }
}

impl std::str::FromStr for Parity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "any" => Ok(Parity::Any),
            "even" => Ok(Parity::Even),
            "odd" => Ok(Parity::Odd),
            other => Err(Error::Config(format!("unknown parity sector '{other}'"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct FoxLiOptions {
    /// Convergence: relative Rayleigh-quotient change below `tol` and residual below `10·tol`.
    pub tol: f64,
    pub max_iter: usize,
    pub seed: Seed,
    pub parity: Parity,
}

impl Default for FoxLiOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iter: 20_000,
            seed: Seed::Random(DEFAULT_SEED),
            parity: Parity::Any,
        }
    }
}

/// A converged (or best-effort, when `degenerate`) lasing eigenmode.
#[derive(Clone, Debug)]
pub struct ModeResult {
    /// Round-trip eigenvalue (Rayleigh quotient).
    pub sigma: Complex64,
    /// Pump peak gain at which the mode was computed; the threshold after [`threshold_search`](super::threshold_search).
    pub g0_threshold: f64,
    /// Index of the best-matching analytic mode, `None` if unidentified or not yet matched.
    pub mode_index: Option<usize>,
    pub overlap_with_oracle: f64,
    /// Unit-norm field at the near-field plane γ.
    pub field_gamma: Field,
    /// `to_fourier_plane(field_gamma)`.
    pub field_q: Field,
    pub iterations: usize,
    /// `‖Aψ - σψ‖` for unit `ψ`.
    pub residual: f64,
    pub parity: Parity,
    /// Set when the iteration stalled between two sectors of nearly equal gain.
    pub degenerate: bool,
    /// Weight of the even part of `field_gamma` (1 for an even mode, 0 for an odd one).
    pub even_weight: f64,
}

impl ModeResult {
    pub fn gain_margin(&self) -> f64 {
        self.sigma.norm() - 1.0
    }
}

pub(crate) struct PowerOutcome {
    pub sigma: Complex64,
    pub vector: Vec<Complex64>,
    pub iterations: usize,
    pub residual: f64,
    pub converged: bool,
}

pub(crate) fn seed_vector(seed: &Seed, config: &CavityConfig) -> Result<Vec<Complex64>> {
    match seed {
        Seed::Random(s) => {
            let mut rng = ChaCha8Rng::seed_from_u64(*s);
            Ok((0..config.grid.len())
                .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
                .collect())
        }
        Seed::Field(f) => {
            check_grid(f, &config.grid)?;
            Ok(f.samples().to_vec())
        }
    }
}

fn unit(buf: &mut [Complex64]) -> f64 {
    let norm = buf.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        let inv = 1.0 / norm;
        buf.iter_mut().for_each(|z| *z *= inv);
    }
    norm
}

/// Plain power iteration of `op` from `start` (unit-normalised internally).
pub(crate) fn power_iterate(
    op: &RoundTrip,
    mut psi: Vec<Complex64>,
    tol: f64,
    max_iter: usize,
    parity: Parity,
) -> Result<PowerOutcome> {
    parity.project(&mut psi);
    if unit(&mut psi) == 0.0 {
        return Err(Error::Numeric(format!(
            "start field has no component in the {} sector",
            parity.name()
        )));
    }
    let mut next = psi.clone();
    let mut last_sigma: Option<Complex64> = None;
    let mut residual = f64::INFINITY;
    let mut sigma = Complex64::new(0.0, 0.0);
    for iteration in 1..=max_iter {
        next.copy_from_slice(&psi);
        op.apply(&mut next);
        parity.project(&mut next);
        sigma = inner(&psi, &next);
        residual = next
            .iter()
            .zip(&psi)
            .map(|(y, p)| (y - sigma * p).norm_sqr())
            .sum::<f64>()
            .sqrt();
        let norm = unit(&mut next);
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::Numeric(format!("iterate norm became {norm}")));
        }
        std::mem::swap(&mut psi, &mut next);
        let settled = last_sigma
            .map(|s| (sigma - s).norm() <= tol * sigma.norm())
            .unwrap_or(false);
        if (settled && residual < 10.0 * tol) || residual <= f64::EPSILON * 16.0 {
            return Ok(PowerOutcome {
                sigma,
                vector: psi,
                iterations: iteration,
                residual,
                converged: true,
            });
        }
        last_sigma = Some(sigma);
    }
    Ok(PowerOutcome {
        sigma,
        vector: psi,
        iterations: max_iter,
        residual,
        converged: false,
    })
}

pub(crate) fn even_weight(buf: &[Complex64]) -> f64 {
    let mut even = buf.to_vec();
    Parity::Even.project(&mut even);
    let total: f64 = buf.iter().map(|z| z.norm_sqr()).sum();
    if total == 0.0 {
        return 0.0;
    }
    even.iter().map(|z| z.norm_sqr()).sum::<f64>() / total
}

pub(crate) fn finish(
    config: &CavityConfig,
    outcome: PowerOutcome,
    parity: Parity,
    degenerate: bool,
) -> Result<ModeResult> {
    let grid = config.grid;
    let even_weight = if grid.is_centered() { even_weight(&outcome.vector) } else { f64::NAN };
    let field_gamma = Field::new(grid, outcome.vector)?.normalized();
    let field_q = to_fourier_plane(&field_gamma, config.lambda, config.focal);
    Ok(ModeResult {
        sigma: outcome.sigma,
        g0_threshold: config.pump.map(|p| p.g0).unwrap_or(0.0),
        mode_index: None,
        overlap_with_oracle: 0.0,
        field_gamma,
        field_q,
        iterations: outcome.iterations,
        residual: outcome.residual,
        parity,
        degenerate,
        even_weight,
    })
}

/// Fox-Li iteration: the dominant eigenpair of the round trip by power iteration.
pub fn fox_li(config: &CavityConfig, opts: &FoxLiOptions) -> Result<ModeResult> {
    let op = RoundTrip::new(config)?;
    fox_li_with(&op, config, seed_vector(&opts.seed, config)?, opts)
}

/// [`fox_li`] on a prebuilt operator and start vector (used for warm starts).
pub fn fox_li_with(
    op: &RoundTrip,
    config: &CavityConfig,
    start: Vec<Complex64>,
    opts: &FoxLiOptions,
) -> Result<ModeResult> {
    if !(opts.tol > 0.0) {
        return Err(Error::Config(format!("tolerance {} must be positive", opts.tol)));
    }
    if opts.parity != Parity::Any && !config.is_parity_symmetric() {
        return Err(Error::Config(
            "parity-restricted iteration needs a centred grid and an even mirror".into(),
        ));
    }
    let outcome = power_iterate(op, start, opts.tol, opts.max_iter, opts.parity)?;
    if outcome.converged {
        return finish(config, outcome, opts.parity, false);
    }
    // An unconverged iterate that straddles both parity sectors means two
    // modes of opposite parity with nearly equal gain are beating.
    if opts.parity == Parity::Any && config.is_parity_symmetric() {
        let w = even_weight(&outcome.vector);
        if (0.05..=0.95).contains(&w) {
            let mut result = finish(config, outcome, Parity::Any, true)?;
            let (proj, parity) = if w >= 0.5 { (Parity::Even, Parity::Even) } else { (Parity::Odd, Parity::Odd) };
            let mut v = result.field_gamma.samples().to_vec();
            proj.project(&mut v);
            let gamma = Field::new(config.grid, v)?.normalized();
            result.field_q = to_fourier_plane(&gamma, config.lambda, config.focal);
            result.field_gamma = gamma;
            result.parity = parity;
            return Ok(result);
        }
    }
    Err(Error::NoConvergence {
        iterations: outcome.iterations,
        residual: outcome.residual,
    })
}
