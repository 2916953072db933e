use crate::cavity::{CavityConfig, RoundTrip};
use crate::error::{Error, Result};

use super::foxli::{fox_li_with, seed_vector, FoxLiOptions, ModeResult};

#[derive(Clone, Debug)]
pub struct ThresholdOptions {
    /// Initial `(g_lo, g_hi)` bracket on the pump peak gain.
    pub bracket: (f64, f64),
    /// Stop once `| |σ_max| - 1 | ≤ tol`.
    pub tol: f64,
    pub fox_li: FoxLiOptions,
}

impl Default for ThresholdOptions {
    fn default() -> Self {
        Self {
            bracket: (0.0, 0.3),
            tol: 1e-4,
            fox_li: FoxLiOptions::default(),
        }
    }
}

/// Bisects the pump peak gain until the dominant round-trip eigenvalue has unit modulus.
///
/// Each Fox-Li solve is warm-started from the previous eigenvector. The
/// returned mode carries the threshold gain in `g0_threshold`.
pub fn threshold_search(config: &CavityConfig, opts: &ThresholdOptions) -> Result<ModeResult> {
    let pump = config
        .pump
        .ok_or_else(|| Error::Config("threshold search needs a pump profile".into()))?;
    let (mut lo, mut hi) = opts.bracket;
    if !(lo >= 0.0 && hi > lo && opts.tol > 0.0) {
        return Err(Error::Config(format!(
            "bad threshold bracket ({lo}, {hi}) or tolerance {}",
            opts.tol
        )));
    }
    let mut op = RoundTrip::new(&config.with_pump(Some(pump.with_gain(lo))))?;
    let mut start = seed_vector(&opts.fox_li.seed, config)?;

    let mut solve = |g0: f64, start: &mut Vec<_>| -> Result<ModeResult> {
        op.set_peak_gain(g0);
        let cfg = config.with_peak_gain(g0);
        let mode = fox_li_with(&op, &cfg, start.clone(), &opts.fox_li)?;
        start.copy_from_slice(mode.field_gamma.samples());
        Ok(mode)
    };

    // Without gain the round trip is √T times a unitary map, so every
    // eigenvalue has modulus √T and power iteration has nothing to select.
    let passive_margin = config.transmittance.sqrt() - 1.0;
    let lo_margin = if lo == 0.0 && passive_margin.abs() > opts.tol {
        passive_margin
    } else {
        let at_lo = solve(lo, &mut start)?;
        if at_lo.gain_margin().abs() <= opts.tol {
            return Ok(at_lo);
        }
        at_lo.gain_margin()
    };
    let at_hi = solve(hi, &mut start)?;
    if at_hi.gain_margin().abs() <= opts.tol {
        return Ok(at_hi);
    }
    if !(lo_margin < 0.0 && at_hi.gain_margin() > 0.0) {
        return Err(Error::Bracket {
            g_lo: lo,
            g_hi: hi,
            lo: lo_margin,
            hi: at_hi.gain_margin(),
        });
    }
    // warm start from the mode that lases in the upper bracket
    start.copy_from_slice(at_hi.field_gamma.samples());
    let mut best = at_hi;
    while hi - lo > 1e-12 * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        let mode = solve(mid, &mut start)?;
        let margin = mode.gain_margin();
        if margin.abs() <= opts.tol {
            return Ok(mode);
        }
        if margin < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        best = mode;
    }
    Ok(best)
}
