//! Run configuration files.
//!
//! Flat `key = value` text grouped into `[cavity]`, `[pump]`, `[grid]`,
//! `[solver]` and an optional `[field]` section (initial field for
//! `propagate`). Lengths carry an explicit `nm`/`um`/`mm`/`cm` suffix and are
//! converted to μm on parse; the axicon strength is written per length unit
//! raised to `alpha` (`5e-3 /um`). `#` and `;` start comments.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::cavity::{CavityConfig, Mirror, PumpProfile};
use crate::error::{Error, Result};
use crate::fractional_ops::LevyIndex;
use crate::grid::Grid1D;
use crate::modesolver::{FoxLiOptions, Parity, Seed, ThresholdOptions, DEFAULT_SEED};
use crate::propagator::Potential;

/// Environment variable that replaces the default random seed.
pub const SEED_ENV: &str = "FRACAVITY_SEED";

const FIG2: &str = include_str!("../../presets/fig2.cfg");

/// Initial field for `propagate`.
#[derive(Clone, Debug, PartialEq)]
pub enum FieldSpec {
    /// `exp(-(x - center)²/waist²)` on the mirror plane.
    Gaussian { waist: f64, center: f64 },
    /// Closed-form Fourier-plane mode `n`, carried back to the mirror plane.
    AiryMode { n: usize },
    /// CSV with columns `x_um, re, im`, one row per grid sample.
    Tabulated { path: PathBuf },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverSettings {
    pub tol: f64,
    pub max_iter: usize,
    pub parity: Parity,
    pub bracket: (f64, f64),
    pub threshold_tol: f64,
    /// Size of the closed-form family used for identification.
    pub oracle_modes: usize,
    /// Explicit seed; falls back to `FRACAVITY_SEED`, then the built-in default.
    pub seed: Option<u64>,
}

impl Default for SolverSettings {
    fn default() -> Self {
        let t = ThresholdOptions::default();
        Self {
            tol: t.fox_li.tol,
            max_iter: t.fox_li.max_iter,
            parity: Parity::Any,
            bracket: t.bracket,
            threshold_tol: t.tol,
            oracle_modes: 24,
            seed: None,
        }
    }
}

impl SolverSettings {
    pub fn effective_seed(&self) -> Result<u64> {
        if let Some(s) = self.seed {
            return Ok(s);
        }
        match std::env::var(SEED_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("{SEED_ENV}='{v}' is not an unsigned integer"))),
            Err(_) => Ok(DEFAULT_SEED),
        }
    }

    pub fn threshold_options(&self) -> Result<ThresholdOptions> {
        Ok(ThresholdOptions {
            bracket: self.bracket,
            tol: self.threshold_tol,
            fox_li: FoxLiOptions {
                tol: self.tol,
                max_iter: self.max_iter,
                seed: Seed::Random(self.effective_seed()?),
                parity: self.parity,
            },
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub cavity: CavityConfig,
    pub solver: SolverSettings,
    pub field: Option<FieldSpec>,
}

impl RunConfig {
    /// The shipped Fig. 2 cavity preset.
    pub fn fig2() -> Self {
        Self::parse(FIG2, Path::new("presets/fig2.cfg")).expect("bundled preset parses")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text, path)
    }

    /// Parses config text; `origin` is only used in diagnostics.
    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let sections = split_sections(text, origin)?;
        let err = |line: usize, msg: String| Error::Parse {
            path: origin.to_path_buf(),
            line,
            msg,
        };
        let mut known: BTreeMap<&str, &[&str]> = BTreeMap::new();
        known.insert("cavity", &["lambda", "focal", "alpha", "beta", "mirror", "radius", "mirror_beta", "mirror_alpha", "transmittance"]);
        known.insert("pump", &["g0", "rho", "w_p"]);
        known.insert("grid", &["x_min", "x_max", "n"]);
        known.insert("solver", &["tol", "max_iter", "parity", "bracket_lo", "bracket_hi", "threshold_tol", "oracle_modes", "seed"]);
        known.insert("field", &["kind", "waist", "center", "mode", "path"]);
        for (name, sec) in &sections {
            let keys = known
                .get(name.as_str())
                .ok_or_else(|| err(sec.line, format!("unknown section [{name}]")))?;
            for (k, (line, _)) in &sec.entries {
                if !keys.contains(&k.as_str()) {
                    return Err(err(*line, format!("unknown key '{k}' in [{name}]")));
                }
            }
        }
        let empty = Section::default();
        let get = |name: &str| sections.get(name).unwrap_or(&empty);

        let cav = get("cavity");
        let alpha_v: f64 = cav.number("alpha", origin)?;
        let alpha = LevyIndex::new(alpha_v).map_err(|e| err(cav.line_of("alpha"), e.to_string()))?;
        let lambda = cav.length("lambda", origin)?;
        let focal = cav.length("focal", origin)?;
        let beta = cav.inverse_length_power("beta", alpha_v, origin)?;
        let mirror = match cav.text("mirror", origin)?.as_str() {
            "spherical" => Mirror::Spherical {
                radius: cav.length("radius", origin)?,
            },
            "flat" => Mirror::FlatWithMask(Potential::zero()),
            "power_law" => {
                let a: f64 = cav.number("mirror_alpha", origin)?;
                Mirror::FlatWithMask(Potential::PowerLaw {
                    beta: cav.inverse_length_power("mirror_beta", a, origin)?,
                    alpha: a,
                })
            }
            other => {
                return Err(err(
                    cav.line_of("mirror"),
                    format!("mirror must be spherical, flat or power_law, not '{other}'"),
                ))
            }
        };
        let transmittance = cav.number("transmittance", origin)?;

        let pump = match sections.get("pump") {
            None => None,
            Some(p) => Some(PumpProfile {
                g0: p.optional_number("g0", origin)?.unwrap_or(0.0),
                rho: p.length("rho", origin)?,
                w_p: p.length("w_p", origin)?,
            }),
        };

        let g = get("grid");
        let n: usize = g.number("n", origin)?;
        let grid = Grid1D::new(g.length("x_min", origin)?, g.length("x_max", origin)?, n)
            .map_err(|e| err(g.line_of("n"), e.to_string()))?;

        let cavity = CavityConfig {
            lambda,
            focal,
            alpha,
            beta,
            mirror,
            transmittance,
            pump,
            grid,
        };
        cavity
            .validate()
            .map_err(|e| err(cav.line, e.to_string()))?;

        let s = get("solver");
        let d = SolverSettings::default();
        let solver = SolverSettings {
            tol: s.optional_number("tol", origin)?.unwrap_or(d.tol),
            max_iter: s.optional_number("max_iter", origin)?.unwrap_or(d.max_iter),
            parity: match s.entries.get("parity") {
                Some((line, v)) => v.parse().map_err(|e: Error| err(*line, e.to_string()))?,
                None => d.parity,
            },
            bracket: (
                s.optional_number("bracket_lo", origin)?.unwrap_or(d.bracket.0),
                s.optional_number("bracket_hi", origin)?.unwrap_or(d.bracket.1),
            ),
            threshold_tol: s.optional_number("threshold_tol", origin)?.unwrap_or(d.threshold_tol),
            oracle_modes: s.optional_number("oracle_modes", origin)?.unwrap_or(d.oracle_modes),
            seed: s.optional_number("seed", origin)?,
        };
        if !(solver.tol > 0.0 && solver.threshold_tol > 0.0 && solver.max_iter > 0) {
            return Err(err(s.line, "solver tolerances and max_iter must be positive".into()));
        }

        let field = match sections.get("field") {
            None => None,
            Some(f) => Some(match f.text("kind", origin)?.as_str() {
                "gaussian" => FieldSpec::Gaussian {
                    waist: f.length("waist", origin)?,
                    center: f.optional_length("center", origin)?.unwrap_or(0.0),
                },
                "airy" => FieldSpec::AiryMode {
                    n: f.number("mode", origin)?,
                },
                "tabulated" => FieldSpec::Tabulated {
                    path: PathBuf::from(f.text("path", origin)?),
                },
                other => {
                    return Err(err(
                        f.line_of("kind"),
                        format!("field kind must be gaussian, airy or tabulated, not '{other}'"),
                    ))
                }
            }),
        };

        Ok(Self { cavity, solver, field })
    }

    /// Canonical text form; `parse` of the result gives back `self`.
    pub fn to_text(&self) -> String {
        let c = &self.cavity;
        let mut s = String::new();
        let _ = writeln!(s, "[cavity]");
        let _ = writeln!(s, "lambda = {:?} um", c.lambda);
        let _ = writeln!(s, "focal = {:?} um", c.focal);
        let _ = writeln!(s, "alpha = {:?}", c.alpha.value());
        let _ = writeln!(s, "beta = {:?} /um", c.beta);
        match &c.mirror {
            Mirror::Spherical { radius } => {
                let _ = writeln!(s, "mirror = spherical");
                let _ = writeln!(s, "radius = {radius:?} um");
            }
            Mirror::FlatWithMask(Potential::PowerLaw { beta, alpha }) if *beta != 0.0 => {
                let _ = writeln!(s, "mirror = power_law");
                let _ = writeln!(s, "mirror_beta = {beta:?} /um");
                let _ = writeln!(s, "mirror_alpha = {alpha:?}");
            }
            Mirror::FlatWithMask(_) => {
                let _ = writeln!(s, "mirror = flat");
            }
        }
        let _ = writeln!(s, "transmittance = {:?}", c.transmittance);
        if let Some(p) = &c.pump {
            let _ = writeln!(s, "\n[pump]");
            let _ = writeln!(s, "g0 = {:?}", p.g0);
            let _ = writeln!(s, "rho = {:?} um", p.rho);
            let _ = writeln!(s, "w_p = {:?} um", p.w_p);
        }
        let _ = writeln!(s, "\n[grid]");
        let _ = writeln!(s, "x_min = {:?} um", c.grid.x_min());
        let _ = writeln!(s, "x_max = {:?} um", c.grid.x_max());
        let _ = writeln!(s, "n = {}", c.grid.len());
        let v = &self.solver;
        let _ = writeln!(s, "\n[solver]");
        let _ = writeln!(s, "tol = {:?}", v.tol);
        let _ = writeln!(s, "max_iter = {}", v.max_iter);
        let _ = writeln!(s, "parity = {}", v.parity.name());
        let _ = writeln!(s, "bracket_lo = {:?}", v.bracket.0);
        let _ = writeln!(s, "bracket_hi = {:?}", v.bracket.1);
        let _ = writeln!(s, "threshold_tol = {:?}", v.threshold_tol);
        let _ = writeln!(s, "oracle_modes = {}", v.oracle_modes);
        if let Some(seed) = v.seed {
            let _ = writeln!(s, "seed = {seed}");
        }
        if let Some(f) = &self.field {
            let _ = writeln!(s, "\n[field]");
            match f {
                FieldSpec::Gaussian { waist, center } => {
                    let _ = writeln!(s, "kind = gaussian");
                    let _ = writeln!(s, "waist = {waist:?} um");
                    let _ = writeln!(s, "center = {center:?} um");
                }
                FieldSpec::AiryMode { n } => {
                    let _ = writeln!(s, "kind = airy");
                    let _ = writeln!(s, "mode = {n}");
                }
                FieldSpec::Tabulated { path } => {
                    let _ = writeln!(s, "kind = tabulated");
                    let _ = writeln!(s, "path = {}", path.display());
                }
            }
        }
        s
    }

    /// First 16 hex digits of the SHA-256 of the canonical text.
    pub fn hash(&self) -> String {
        use sha2::{Digest, Sha256};
        let digest = Sha256::digest(self.to_text().as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Debug, Default)]
struct Section {
    line: usize,
    entries: BTreeMap<String, (usize, String)>,
}

fn split_sections(text: &str, origin: &Path) -> Result<BTreeMap<String, Section>> {
    let mut out: BTreeMap<String, Section> = BTreeMap::new();
    let mut current: Option<String> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split(['#', ';']).next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse {
            path: origin.to_path_buf(),
            line,
            msg,
        };
        if let Some(name) = content.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| err(format!("malformed section header '{content}'")))?
                .trim()
                .to_string();
            if out.contains_key(&name) {
                return Err(err(format!("duplicate section [{name}]")));
            }
            out.insert(name.clone(), Section { line, ..Default::default() });
            current = Some(name);
            continue;
        }
        let (k, v) = content
            .split_once('=')
            .ok_or_else(|| err(format!("expected 'key = value', got '{content}'")))?;
        let sec = current
            .as_ref()
            .ok_or_else(|| err("key outside of any section".into()))?;
        let key = k.trim().to_string();
        let entries = &mut out.get_mut(sec).expect("section inserted").entries;
        if entries.contains_key(&key) {
            return Err(err(format!("duplicate key '{key}'")));
        }
        entries.insert(key, (line, v.trim().to_string()));
    }
    Ok(out)
}

/// μm per unit.
fn unit_scale(unit: &str) -> Option<f64> {
    match unit {
        "nm" => Some(1e-3),
        "um" => Some(1.0),
        "mm" => Some(1e3),
        "cm" => Some(1e4),
        _ => None,
    }
}

fn split_number(v: &str) -> (&str, &str) {
    let end = v
        .char_indices()
        .find(|&(_, c)| !(c.is_ascii_digit() || matches!(c, '.' | '-' | '+' | 'e' | 'E')))
        .map(|(i, _)| i)
        .unwrap_or(v.len());
    (v[..end].trim(), v[end..].trim())
}

/// `"1064 nm"` → 1.064 (μm).
pub fn parse_length(v: &str) -> std::result::Result<f64, String> {
    let (num, unit) = split_number(v);
    let x: f64 = num.parse().map_err(|_| format!("'{v}' is not a number with a unit"))?;
    if unit.is_empty() {
        return Err(format!("length '{v}' needs a unit suffix (nm, um, mm, cm)"));
    }
    let scale = unit_scale(unit).ok_or_else(|| format!("unknown length unit '{unit}'"))?;
    if !x.is_finite() {
        return Err(format!("'{v}' is not finite"));
    }
    Ok(x * scale)
}

/// `"5e-3 /mm"` with exponent `power` → value per μm^power.
fn parse_inverse_length(v: &str, power: f64) -> std::result::Result<f64, String> {
    let (num, unit) = split_number(v);
    let x: f64 = num.parse().map_err(|_| format!("'{v}' is not a number with a unit"))?;
    let unit = unit
        .strip_prefix('/')
        .ok_or_else(|| format!("'{v}' needs an inverse-length suffix such as /um"))?
        .trim();
    let scale = unit_scale(unit).ok_or_else(|| format!("unknown length unit '{unit}'"))?;
    if scale == 1.0 {
        Ok(x)
    } else {
        Ok(x / scale.powf(power))
    }
}

impl Section {
    fn line_of(&self, key: &str) -> usize {
        self.entries.get(key).map(|e| e.0).unwrap_or(self.line)
    }

    fn raw(&self, key: &str, origin: &Path) -> Result<(usize, &str)> {
        self.entries
            .get(key)
            .map(|(l, v)| (*l, v.as_str()))
            .ok_or_else(|| Error::Parse {
                path: origin.to_path_buf(),
                line: self.line,
                msg: format!("missing key '{key}'"),
            })
    }

    fn with<T>(&self, key: &str, origin: &Path, f: impl FnOnce(&str) -> std::result::Result<T, String>) -> Result<T> {
        let (line, v) = self.raw(key, origin)?;
        f(v).map_err(|msg| Error::Parse {
            path: origin.to_path_buf(),
            line,
            msg: format!("{key}: {msg}"),
        })
    }

    fn text(&self, key: &str, origin: &Path) -> Result<String> {
        self.with(key, origin, |v| Ok(v.to_string()))
    }

    fn number<T: std::str::FromStr>(&self, key: &str, origin: &Path) -> Result<T> {
        self.with(key, origin, |v| v.parse().map_err(|_| format!("'{v}' is not a valid number")))
    }

    fn optional_number<T: std::str::FromStr>(&self, key: &str, origin: &Path) -> Result<Option<T>> {
        if self.entries.contains_key(key) {
            self.number(key, origin).map(Some)
        } else {
            Ok(None)
        }
    }

    fn length(&self, key: &str, origin: &Path) -> Result<f64> {
        self.with(key, origin, parse_length)
    }

    fn optional_length(&self, key: &str, origin: &Path) -> Result<Option<f64>> {
        if self.entries.contains_key(key) {
            self.length(key, origin).map(Some)
        } else {
            Ok(None)
        }
    }

    fn inverse_length_power(&self, key: &str, power: f64, origin: &Path) -> Result<f64> {
        self.with(key, origin, |v| parse_inverse_length(v, power))
    }
}
