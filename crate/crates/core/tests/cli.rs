use std::fs;
use std::path::Path;
use std::process::Command;

use proptest::prelude::*;

use fracavity::cavity::{Mirror, PumpProfile};
use fracavity::cli::{
    cmd_modes, cmd_propagate, cmd_render2d, cmd_sweep, read_numeric_csv, FieldSpec, Render2dOptions, RunConfig,
    RunManifest,
};
use fracavity::fractional_ops::LevyIndex;
use fracavity::grid::Grid1D;
use fracavity::modesolver::Parity;
use fracavity::propagator::Potential;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fracavity"))
}

/// Coarse variant of the preset that solves in well under a second.
fn quick_config() -> RunConfig {
    let mut c = RunConfig::fig2();
    c.cavity.grid = Grid1D::new(-600.0, 600.0, 256).unwrap();
    c.cavity.pump = Some(PumpProfile::new(0.05, 0.0, 60.0).unwrap());
    c.solver.parity = Parity::Any;
    c.solver.max_iter = 20_000;
    c.solver.seed = Some(11);
    c
}

fn second_moment(rows: &[Vec<f64>]) -> f64 {
    let total: f64 = rows.iter().map(|r| r[1]).sum();
    rows.iter().map(|r| r[0] * r[0] * r[1]).sum::<f64>() / total
}

fn assert_files_exist(dir: &Path, m: &RunManifest) {
    for job in &m.jobs {
        for f in &job.files {
            assert!(dir.join(f).is_file(), "{f} missing");
        }
    }
    assert_eq!(&RunManifest::read(dir).unwrap(), m);
}

#[test]
fn zero_steps_reproduce_the_initial_field() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = quick_config();
    c.field = Some(FieldSpec::Gaussian { waist: 40.0, center: 10.0 });
    let m = cmd_propagate(&c, 0, 1.0, None, dir.path()).unwrap();
    assert_eq!(m.jobs[0].files, vec!["snapshot_000000.csv".to_string()]);
    let rows = read_numeric_csv(&dir.path().join("snapshot_000000.csv")).unwrap();
    for (j, r) in rows.iter().enumerate() {
        let x = c.cavity.grid.x(j);
        let expected = (-2.0 * ((x - 10.0) / 40.0).powi(2)).exp();
        assert_eq!(r[0], x);
        assert!((r[1] - expected).abs() < 1e-15);
    }
    assert_files_exist(dir.path(), &m);
}

#[test]
fn free_gaussian_spreads_at_the_analytic_rate() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = quick_config();
    c.cavity.alpha = LevyIndex::new(2.0).unwrap();
    c.cavity.mirror = Mirror::FlatWithMask(Potential::zero());
    c.cavity.grid = Grid1D::new(-600.0, 600.0, 2048).unwrap();
    c.cavity.beta = 1.5e-6;
    let w0 = 30.0;
    c.field = Some(FieldSpec::Gaussian { waist: w0, center: 0.0 });
    let (steps, dt) = (200, 0.5);
    cmd_propagate(&c, steps, dt, None, dir.path()).unwrap();
    let rows = read_numeric_csv(&dir.path().join(format!("snapshot_{steps:06}.csv"))).unwrap();
    let d = c.cavity.d_alpha().value();
    let t = steps as f64 * dt;
    // |ψ|² ∝ exp(-2x²/w²) has ⟨x²⟩ = w²/4
    let w2 = w0 * w0 * (1.0 + (4.0 * d * t / (w0 * w0)).powi(2));
    let measured = 4.0 * second_moment(&rows);
    assert!((measured / w2 - 1.0).abs() < 1e-6, "{measured} vs {w2}");
    assert!(w2 > 2.0 * w0 * w0);
}

#[test]
fn closed_form_mode_is_stationary_under_propagation() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = RunConfig::fig2();
    // the Fourier-plane image of the mirror window must sample the mode's
    // kink at the origin finely, so the window is 32x wider than the preset
    c.cavity.grid = Grid1D::new(-19_200.0, 19_200.0, 1 << 17).unwrap();
    c.field = Some(FieldSpec::AiryMode { n: 0 });
    // one oscillation period of the ground mode
    let period = 2.0 * std::f64::consts::PI / 0.096_382_1;
    let steps = 1024;
    cmd_propagate(&c, steps, period / steps as f64, Some(256), dir.path()).unwrap();
    let first = read_numeric_csv(&dir.path().join("snapshot_000000.csv")).unwrap();
    let peak = first.iter().map(|r| r[1]).fold(0.0, f64::max);
    for k in [256, 512, 768, 1024] {
        let rows = read_numeric_csv(&dir.path().join(format!("snapshot_{k:06}.csv"))).unwrap();
        let worst = rows
            .iter()
            .zip(&first)
            .map(|(a, b)| (a[1] - b[1]).abs())
            .fold(0.0, f64::max);
        assert!(worst / peak < 1e-4, "step {k}: {}", worst / peak);
    }
}

#[test]
fn sweep_is_independent_of_worker_count() {
    let c = quick_config();
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let ma = cmd_sweep(&c, (0.0, 120.0), 4, 1, a.path()).unwrap();
    let mb = cmd_sweep(&c, (0.0, 120.0), 4, 4, b.path()).unwrap();
    let ta = fs::read(a.path().join("sweep.csv")).unwrap();
    let tb = fs::read(b.path().join("sweep.csv")).unwrap();
    assert_eq!(ta, tb);
    assert_eq!(ma.jobs.len(), 4);
    assert_files_exist(a.path(), &ma);
    assert_files_exist(b.path(), &mb);
}

#[test]
fn single_point_sweep_matches_modes() {
    let c = quick_config();
    let s = tempfile::tempdir().unwrap();
    let m = tempfile::tempdir().unwrap();
    let sweep = cmd_sweep(&c, (0.0, 0.0), 1, 1, s.path()).unwrap();
    let modes = cmd_modes(&c, Some(0.0), None, m.path()).unwrap();
    let (a, b) = (&sweep.jobs[0], &modes.jobs[0]);
    assert_eq!(a.mode_index, b.mode_index);
    assert_eq!(a.g0_threshold, b.g0_threshold);
    assert_eq!(a.sigma, b.sigma);
    assert_files_exist(m.path(), &modes);
}

#[test]
fn render2d_marginal_and_pgm_normalisation() {
    let dir = tempfile::tempdir().unwrap();
    let c = RunConfig::fig2();
    let m = cmd_render2d(&c, 6, 0, &Render2dOptions::default(), dir.path()).unwrap();
    assert_files_exist(dir.path(), &m);
    let map = read_numeric_csv(&dir.path().join("map.csv")).unwrap();
    let y = read_numeric_csv(&dir.path().join("y_axis.csv")).unwrap();
    let profile = read_numeric_csv(&dir.path().join("x_profile.csv")).unwrap();
    let dy = y[1][0] - y[0][0];
    let peak = profile.iter().map(|r| r[1]).fold(0.0, f64::max);
    for (ix, p) in profile.iter().enumerate() {
        let marginal: f64 = map.iter().map(|row| row[ix] * dy).sum();
        assert!((marginal - p[1]).abs() <= 1e-6 * peak);
    }
    let pgm = fs::read(dir.path().join("map.pgm")).unwrap();
    let header = format!("P5\n{} {}\n255\n", profile.len(), y.len());
    assert!(pgm.starts_with(header.as_bytes()));
    assert_eq!(pgm[header.len()..].iter().copied().max(), Some(255));
}

#[test]
fn exit_codes_follow_the_error_table() {
    let dir = tempfile::tempdir().unwrap();
    let p = |name: &str| dir.path().join(name);

    fs::write(p("bad.cfg"), "[cavity]\nlambda = 1064\n").unwrap();
    let s = bin().args(["modes"]).arg(p("bad.cfg")).arg("--out").arg(p("o1")).status().unwrap();
    assert_eq!(s.code(), Some(2));

    let mut c = quick_config();
    c.cavity.mirror = Mirror::Spherical { radius: 3.0e4 };
    fs::write(p("unstable.cfg"), c.to_text()).unwrap();
    let s = bin().args(["render2d"]).arg(p("unstable.cfg")).args(["--n", "0", "--out"]).arg(p("o2")).status().unwrap();
    assert_eq!(s.code(), Some(5));

    let mut c = quick_config();
    c.solver.bracket = (0.3, 0.5);
    fs::write(p("bracket.cfg"), c.to_text()).unwrap();
    let s = bin().args(["modes"]).arg(p("bracket.cfg")).arg("--out").arg(p("o3")).status().unwrap();
    assert_eq!(s.code(), Some(4));

    let mut c = quick_config();
    let mut rows = String::from("x_um,re,im\n");
    for j in 0..c.cavity.grid.len() {
        rows.push_str(&format!("{},{},0\n", c.cavity.grid.x(j), if j == 7 { "NaN" } else { "1" }));
    }
    fs::write(p("nan.csv"), rows).unwrap();
    c.field = Some(FieldSpec::Tabulated { path: p("nan.csv") });
    fs::write(p("nan.cfg"), c.to_text()).unwrap();
    let s = bin().args(["propagate"]).arg(p("nan.cfg")).args(["--steps", "3", "--dt", "1", "--out"]).arg(p("o4")).status().unwrap();
    assert_eq!(s.code(), Some(3));

    let s = bin().args(["modes"]).arg(p("missing.cfg")).arg("--out").arg(p("o5")).status().unwrap();
    assert_eq!(s.code(), Some(2));
}

#[test]
fn binary_writes_modes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("q.cfg");
    fs::write(&cfg, quick_config().to_text()).unwrap();
    let out = bin().arg("modes").arg(&cfg).args(["--rho", "0um", "--out"]).arg(dir.path().join("run")).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let m = RunManifest::read(&dir.path().join("run")).unwrap();
    assert_files_exist(&dir.path().join("run"), &m);
    assert_eq!(m.jobs[0].mode_index, Some(0));
}

#[test]
fn seed_comes_from_environment_when_config_has_none() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = quick_config();
    c.solver.seed = None;
    let cfg = dir.path().join("s.cfg");
    fs::write(&cfg, c.to_text()).unwrap();
    let status = bin()
        .env("FRACAVITY_SEED", "424242")
        .arg("modes")
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path().join("run"))
        .status()
        .unwrap();
    assert!(status.success());
    assert_eq!(RunManifest::read(&dir.path().join("run")).unwrap().seed, 424242);
    let status = bin().env("FRACAVITY_SEED", "x").arg("modes").arg(&cfg).arg("--out").arg(dir.path().join("r2")).status().unwrap();
    assert_eq!(status.code(), Some(2));
}

fn length() -> impl Strategy<Value = f64> {
    prop_oneof![(1e-3f64..1e6), (1u32..100000).prop_map(|v| v as f64)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn config_text_round_trips(
        lambda in length(),
        focal in length(),
        alpha in 0.05f64..=2.0,
        beta in 0.0f64..1.0,
        mirror_kind in 0u8..3,
        radius in 1.0f64..1e7,
        transmittance in 0.01f64..=1.0,
        pump in proptest::option::of((0.0f64..1.0, 0.0f64..1e3, 1e-2f64..1e3)),
        half in 1.0f64..1e4,
        log_n in 1u32..14,
        tol in 1e-14f64..1e-2,
        max_iter in 1usize..1_000_000,
        parity in prop_oneof![Just(Parity::Any), Just(Parity::Even), Just(Parity::Odd)],
        seed in proptest::option::of(any::<u64>()),
        field_kind in 0u8..4,
        waist in length(),
    ) {
        let mut c = RunConfig::fig2();
        c.cavity.lambda = lambda;
        c.cavity.focal = focal;
        c.cavity.alpha = LevyIndex::new(alpha).unwrap();
        c.cavity.beta = beta;
        c.cavity.mirror = match mirror_kind {
            0 => Mirror::Spherical { radius },
            1 => Mirror::FlatWithMask(Potential::zero()),
            _ => Mirror::FlatWithMask(Potential::PowerLaw { beta: beta + 1e-3, alpha }),
        };
        c.cavity.transmittance = transmittance;
        c.cavity.pump = pump.map(|(g0, rho, w_p)| PumpProfile { g0, rho, w_p });
        c.cavity.grid = Grid1D::new(-half, half * 0.5, 1 << log_n).unwrap();
        c.solver.tol = tol;
        c.solver.max_iter = max_iter;
        c.solver.parity = parity;
        c.solver.seed = seed;
        c.field = match field_kind {
            0 => None,
            1 => Some(FieldSpec::Gaussian { waist, center: -waist / 3.0 }),
            2 => Some(FieldSpec::AiryMode { n: max_iter % 30 }),
            _ => Some(FieldSpec::Tabulated { path: "fields/start.csv".into() }),
        };
        let back = RunConfig::parse(&c.to_text(), Path::new("prop.cfg")).unwrap();
        prop_assert_eq!(back, c);
    }
}
