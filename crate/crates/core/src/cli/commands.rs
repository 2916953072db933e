//! Experiment drivers behind the `fracavity` subcommands.

use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rayon::prelude::*;

use super::config::{FieldSpec, RunConfig};
use super::manifest::{JobRecord, RunManifest};
use super::output::{read_numeric_csv, write_columns_csv, write_field_csv, write_matrix_csv, write_pgm, Provenance};
use crate::error::{Error, Result};
use crate::grid::{Field, Grid1D};
use crate::modesolver::{label_mode, threshold_search, ModeResult, Parity};
use crate::oracle::{airy_mode, airy_modes, assemble_2d, hermite_gauss};
use crate::propagator::{from_fourier_plane, SplitStepper};

/// Relative norm drift that aborts a propagation run.
pub const NORM_DRIFT_LIMIT: f64 = 1e-3;

fn ensure_dir(out: &Path) -> Result<()> {
    fs::create_dir_all(out)?;
    Ok(())
}

fn initial_field(config: &RunConfig) -> Result<Field> {
    let cav = &config.cavity;
    let grid = cav.grid;
    let spec = config
        .field
        .as_ref()
        .ok_or_else(|| Error::Config("propagate needs a [field] section".into()))?;
    match spec {
        FieldSpec::Gaussian { waist, center } => {
            if !(*waist > 0.0) {
                return Err(Error::Config(format!("gaussian waist {waist} must be positive")));
            }
            Ok(Field::from_real_fn(grid, |x| (-((x - center) / waist).powi(2)).exp()))
        }
        FieldSpec::AiryMode { n } => {
            let (_, q) = airy_mode(*n, cav, &cav.fourier_grid())?;
            from_fourier_plane(&q, &grid, cav.lambda, cav.focal)
        }
        FieldSpec::Tabulated { path } => {
            let rows = read_numeric_csv(path)?;
            if rows.len() != grid.len() || rows.iter().any(|r| r.len() < 3) {
                return Err(Error::Config(format!(
                    "{} must hold {} rows of x_um,re,im",
                    path.display(),
                    grid.len()
                )));
            }
            Field::new(grid, rows.iter().map(|r| Complex64::new(r[1], r[2])).collect())
        }
    }
}

/// Split-step evolution of the initial field under the mirror potential and
/// the fractional kinetic term, writing `|ψ|²` snapshots every `every` steps.
pub fn cmd_propagate(config: &RunConfig, steps: usize, dt: f64, every: Option<usize>, out: &Path) -> Result<RunManifest> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::Config(format!("time step {dt} must be positive")));
    }
    let every = every.unwrap_or(steps).max(1);
    ensure_dir(out)?;
    let cav = &config.cavity;
    cav.validate()?;
    let mut manifest = RunManifest::new("propagate", config, config.solver.effective_seed()?);
    let stepper = SplitStepper::new(cav.grid, &cav.mirror_potential(), cav.alpha, cav.d_alpha(), dt)?;
    let mut field = initial_field(config)?;
    let norm0 = field.norm_l2();
    if norm0 == 0.0 {
        return Err(Error::Config("initial field is identically zero".into()));
    }
    let prov = Provenance::new("propagate", &manifest.config_hash).with("dt", dt);
    let mut job = JobRecord::new("propagate");
    let mut done = 0;
    loop {
        let drift = (field.norm_l2() / norm0 - 1.0).abs();
        if !(drift <= NORM_DRIFT_LIMIT) {
            return Err(Error::Numeric(format!("norm drifted by {drift:.3e} after {done} steps")));
        }
        let name = format!("snapshot_{done:06}.csv");
        write_field_csv(&out.join(&name), &field, &prov.clone().with("step", done).with("t", done as f64 * dt))?;
        job.files.push(name);
        if done >= steps {
            break;
        }
        let k = every.min(steps - done);
        stepper.advance(field.samples_mut(), k);
        done += k;
    }
    job.iterations = Some(steps);
    manifest.jobs.push(job);
    manifest.write(out)?;
    Ok(manifest)
}

/// Threshold search at pump offset `rho` followed by identification against
/// the closed-form family when one exists.
pub fn lasing_mode(config: &RunConfig, rho: f64) -> Result<ModeResult> {
    let pump = config
        .cavity
        .pump
        .ok_or_else(|| Error::Config("mode search needs a [pump] section".into()))?;
    let cavity = config.cavity.with_pump(Some(crate::cavity::PumpProfile { rho, ..pump }));
    let mut result = threshold_search(&cavity, &config.solver.threshold_options()?)?;
    if let Ok(family) = airy_modes(config.solver.oracle_modes, &cavity) {
        let fields: Vec<Field> = family.into_iter().map(|(_, f)| f).collect();
        label_mode(&mut result, &fields);
    }
    Ok(result)
}

fn record(label: String, rho: f64, r: &ModeResult) -> JobRecord {
    let mut job = JobRecord::new(label);
    job.rho_um = Some(rho);
    job.mode_index = r.mode_index;
    job.g0_threshold = Some(r.g0_threshold);
    job.sigma = Some((r.sigma.re, r.sigma.im));
    job.overlap = Some(r.overlap_with_oracle);
    job.iterations = Some(r.iterations);
    job
}

/// Lowest-threshold lasing mode: mirror-plane and Fourier-plane profiles plus
/// the matched closed-form mode.
pub fn cmd_modes(config: &RunConfig, rho: Option<f64>, parity: Option<Parity>, out: &Path) -> Result<RunManifest> {
    ensure_dir(out)?;
    let mut config = config.clone();
    if let Some(p) = parity {
        config.solver.parity = p;
    }
    let rho = match rho {
        Some(r) => r,
        None => config.cavity.pump.map(|p| p.rho).unwrap_or(0.0),
    };
    let mut manifest = RunManifest::new("modes", &config, config.solver.effective_seed()?);
    let result = lasing_mode(&config, rho)?;
    let prov = Provenance::new("modes", &manifest.config_hash)
        .with("rho_um", rho)
        .with("g0_threshold", result.g0_threshold);
    let mut job = record(format!("rho={rho}"), rho, &result);
    write_field_csv(&out.join("gamma.csv"), &result.field_gamma, &prov.clone().with("plane", "gamma"))?;
    write_field_csv(&out.join("q.csv"), &result.field_q, &prov.clone().with("plane", "q"))?;
    job.files = vec!["gamma.csv".into(), "q.csv".into()];
    let cav = &config.cavity;
    if let Ok((_, oracle)) = airy_mode(result.mode_index.unwrap_or(0), cav, &cav.fourier_grid()) {
        let idx = result.mode_index.map(|n| n.to_string()).unwrap_or_else(|| "unidentified".into());
        write_field_csv(&out.join("oracle.csv"), &oracle, &prov.with("oracle_mode", idx))?;
        job.files.push("oracle.csv".into());
    }
    manifest.jobs.push(job);
    manifest.write(out)?;
    Ok(manifest)
}

fn status_of(e: &Error) -> &'static str {
    match e {
        Error::Config(_) | Error::Parse { .. } | Error::Io(_) | Error::Unsupported(_) => "config",
        Error::Numeric(_) => "numeric",
        Error::NoConvergence { .. } => "no_convergence",
        Error::Bracket { .. } => "bracket",
        Error::Stability(_) => "stability",
    }
}

/// Threshold search over `steps` evenly spaced pump offsets, `jobs` at a time.
pub fn cmd_sweep(config: &RunConfig, rho_range: (f64, f64), steps: usize, jobs: usize, out: &Path) -> Result<RunManifest> {
    if steps == 0 || jobs == 0 {
        return Err(Error::Config("rho-steps and jobs must be at least 1".into()));
    }
    let (lo, hi) = rho_range;
    if !(lo.is_finite() && hi.is_finite() && hi >= lo) {
        return Err(Error::Config(format!("bad rho range [{lo}, {hi}]")));
    }
    ensure_dir(out)?;
    let rhos: Vec<f64> = (0..steps)
        .map(|i| if steps == 1 { lo } else { lo + (hi - lo) * i as f64 / (steps - 1) as f64 })
        .collect();
    let mut manifest = RunManifest::new("sweep", config, config.solver.effective_seed()?);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Config(format!("cannot start {jobs} workers: {e}")))?;
    let results: Vec<Result<ModeResult>> = pool.install(|| rhos.par_iter().map(|&r| lasing_mode(config, r)).collect());

    let mut cols: Vec<Vec<String>> = vec![Vec::new(); 7];
    let mut first_error = None;
    for (rho, res) in rhos.iter().zip(results) {
        let row: [String; 7] = match &res {
            Ok(r) => [
                format!("{rho:e}"),
                "ok".into(),
                r.mode_index.map(|n| n.to_string()).unwrap_or_else(|| "unidentified".into()),
                format!("{:e}", r.g0_threshold),
                format!("{:e}", r.overlap_with_oracle),
                format!("{:e}", r.sigma.norm()),
                r.iterations.to_string(),
            ],
            Err(e) => [
                format!("{rho:e}"),
                status_of(e).into(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
            ],
        };
        for (c, v) in cols.iter_mut().zip(row) {
            c.push(v);
        }
        match res {
            Ok(r) => manifest.jobs.push(record(format!("rho={rho}"), *rho, &r)),
            Err(e) => {
                let mut job = JobRecord::new(format!("rho={rho}"));
                job.rho_um = Some(*rho);
                job.status = status_of(&e).into();
                manifest.jobs.push(job);
                first_error.get_or_insert(e);
            }
        }
    }
    if manifest.jobs.iter().all(|j| j.status != "ok") {
        return Err(first_error.expect("at least one job ran"));
    }
    let prov = Provenance::new("sweep", &manifest.config_hash);
    write_columns_csv(
        &out.join("sweep.csv"),
        &["rho_um", "status", "mode_index", "g0_threshold", "overlap", "sigma_abs", "iterations"],
        &cols,
        &prov,
    )?;
    if let Some(j) = manifest.jobs.first_mut() {
        j.files.push("sweep.csv".into());
    }
    manifest.write(out)?;
    Ok(manifest)
}

#[derive(Clone, Debug)]
pub struct Render2dOptions {
    /// Fourier-plane half-width kept along `x`, μm (rounded up to a power-of-two sample count).
    pub x_half: f64,
    /// Half-width along `y`, μm; three spot sizes when `None`.
    pub y_half: Option<f64>,
    /// Samples along `y` (power of two).
    pub ny: usize,
    /// Fourier-plane field (`q.csv` from `modes`) used instead of the closed-form `x` mode.
    pub field: Option<PathBuf>,
}

impl Default for Render2dOptions {
    fn default() -> Self {
        Self {
            x_half: 400.0,
            y_half: None,
            ny: 256,
            field: None,
        }
    }
}

fn tabulated_q_field(path: &Path, grid: Grid1D) -> Result<Field> {
    let rows = read_numeric_csv(path)?;
    if rows.len() != grid.len() || rows.iter().any(|r| r.len() < 3) {
        return Err(Error::Config(format!(
            "{} must hold {} rows of x_um,intensity,phase",
            path.display(),
            grid.len()
        )));
    }
    Field::new(
        grid,
        rows.iter().map(|r| Complex64::from_polar(r[1].max(0.0).sqrt(), r[2])).collect(),
    )
}

/// Fourier-plane intensity of `TEM_{n,m}` as a CSV matrix and an 8-bit PGM.
pub fn cmd_render2d(config: &RunConfig, n: usize, m: usize, opts: &Render2dOptions, out: &Path) -> Result<RunManifest> {
    let cav = &config.cavity;
    cav.validate()?;
    let radius = match cav.mirror {
        crate::cavity::Mirror::Spherical { radius } => radius,
        _ => return Err(Error::Unsupported("the y-direction modes need a spherical mirror".into())),
    };
    if !(opts.x_half > 0.0) {
        return Err(Error::Config("x half-width must be positive".into()));
    }
    let q = cav.fourier_grid();
    let x_field = match &opts.field {
        Some(path) => tabulated_q_field(path, q)?.normalized(),
        None => airy_mode(n, cav, &q)?.1,
    };
    let (hg, _) = hermite_gauss(m, cav.lambda, cav.focal, radius, &Grid1D::centered(1.0, 2)?)?;
    let y_half = opts.y_half.unwrap_or(3.0 * hg.w_y);
    let ygrid = Grid1D::centered(y_half, opts.ny)?;
    let (_, y_field) = hermite_gauss(m, cav.lambda, cav.focal, radius, &ygrid)?;

    // centred power-of-two window of the Fourier-plane axis covering ±x_half
    let wanted = (2.0 * opts.x_half / q.dx()).ceil() as usize;
    let nx = wanted.next_power_of_two().clamp(2, q.len());
    let first = q.len() / 2 - nx / 2;
    let xgrid = Grid1D::new(q.x(first), q.x(first) + nx as f64 * q.dx(), nx)?;
    let x_window = Field::new(xgrid, x_field.samples()[first..first + nx].to_vec())?;
    let map = assemble_2d(&x_window, &y_field);
    let data = &map.data;
    let x_coords = xgrid.coords();

    ensure_dir(out)?;
    let mut manifest = RunManifest::new("render2d", config, config.solver.effective_seed()?);
    let prov = Provenance::new("render2d", &manifest.config_hash)
        .with("n", n)
        .with("m", m)
        .with("w_y_um", hg.w_y)
        .with("r_y_um", hg.r_y)
        .with("x_source", opts.field.as_ref().map(|p| p.display().to_string()).unwrap_or_else(|| "closed-form".into()));
    write_matrix_csv(&out.join("map.csv"), data, nx, &prov.clone().with("layout", "rows=y,cols=x"))?;
    write_pgm(&out.join("map.pgm"), data, nx, ygrid.len())?;
    let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:e}")).collect::<Vec<_>>();
    write_columns_csv(&out.join("x_axis.csv"), &["x_um"], &[fmt(&x_coords)], &prov)?;
    write_columns_csv(&out.join("y_axis.csv"), &["y_um"], &[fmt(&ygrid.coords())], &prov)?;
    let profile = x_window.intensity();
    write_columns_csv(&out.join("x_profile.csv"), &["x_um", "intensity"], &[fmt(&x_coords), fmt(&profile)], &prov)?;
    let mut job = JobRecord::new(format!("n={n},m={m}"));
    job.mode_index = Some(n);
    job.files = ["map.csv", "map.pgm", "x_axis.csv", "y_axis.csv", "x_profile.csv"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    manifest.jobs.push(job);
    manifest.write(out)?;
    Ok(manifest)
}
