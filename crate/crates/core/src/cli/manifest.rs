//! Run manifests: what was run, with which seed, and what it produced.
//!
//! Text layout: `key = value` header lines, one `[job]` block per job, and a
//! trailing `[config]` block holding the canonical config text verbatim.

use std::fmt::Write as _;
use std::path::Path;

use super::config::RunConfig;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct JobRecord {
    pub label: String,
    pub status: String,
    pub rho_um: Option<f64>,
    pub mode_index: Option<usize>,
    pub g0_threshold: Option<f64>,
    pub sigma: Option<(f64, f64)>,
    pub overlap: Option<f64>,
    pub iterations: Option<usize>,
    /// Paths relative to the manifest directory.
    pub files: Vec<String>,
}

impl JobRecord {
    pub fn new(label: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            status: "ok".into(),
            rho_um: None,
            mode_index: None,
            g0_threshold: None,
            sigma: None,
            overlap: None,
            iterations: None,
            files: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunManifest {
    pub version: String,
    pub command: String,
    pub seed: u64,
    pub started_unix: u64,
    pub finished_unix: u64,
    pub config_hash: String,
    pub jobs: Vec<JobRecord>,
    pub config: RunConfig,
}

pub const MANIFEST_NAME: &str = "manifest.txt";

pub fn unix_now() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

impl RunManifest {
    pub fn new(command: &str, config: &RunConfig, seed: u64) -> Self {
        Self {
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            seed,
            started_unix: unix_now(),
            finished_unix: 0,
            config_hash: config.hash(),
            jobs: Vec::new(),
            config: config.clone(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::from("# fracavity run manifest\n");
        let _ = writeln!(s, "version = {}", self.version);
        let _ = writeln!(s, "command = {}", self.command);
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(s, "started_unix = {}", self.started_unix);
        let _ = writeln!(s, "finished_unix = {}", self.finished_unix);
        let _ = writeln!(s, "config_hash = {}", self.config_hash);
        for j in &self.jobs {
            let _ = writeln!(s, "\n[job]");
            let _ = writeln!(s, "label = {}", j.label);
            let _ = writeln!(s, "status = {}", j.status);
            if let Some(v) = j.rho_um {
                let _ = writeln!(s, "rho_um = {v:?}");
            }
            if let Some(v) = j.mode_index {
                let _ = writeln!(s, "mode_index = {v}");
            }
            if let Some(v) = j.g0_threshold {
                let _ = writeln!(s, "g0_threshold = {v:?}");
            }
            if let Some((re, im)) = j.sigma {
                let _ = writeln!(s, "sigma = {re:?} {im:?}");
            }
            if let Some(v) = j.overlap {
                let _ = writeln!(s, "overlap = {v:?}");
            }
            if let Some(v) = j.iterations {
                let _ = writeln!(s, "iterations = {v}");
            }
            for f in &j.files {
                let _ = writeln!(s, "file = {f}");
            }
        }
        s.push_str("\n[config]\n");
        s.push_str(&self.config.to_text());
        s
    }

    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let err = |line: usize, msg: String| Error::Parse {
            path: origin.to_path_buf(),
            line,
            msg,
        };
        let (head, config_text) = text
            .split_once("\n[config]\n")
            .ok_or_else(|| err(0, "missing [config] block".into()))?;
        let config = RunConfig::parse(config_text, origin)?;

        let mut top = std::collections::BTreeMap::new();
        let mut jobs: Vec<JobRecord> = Vec::new();
        for (i, raw) in head.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if line == "[job]" {
                jobs.push(JobRecord::new(""));
                continue;
            }
            let (k, v) = line
                .split_once(" = ")
                .ok_or_else(|| err(i + 1, format!("expected 'key = value', got '{line}'")))?;
            let num = |v: &str| v.parse::<f64>().map_err(|_| err(i + 1, format!("bad number '{v}'")));
            let int = |v: &str| v.parse::<usize>().map_err(|_| err(i + 1, format!("bad integer '{v}'")));
            match jobs.last_mut() {
                None => {
                    top.insert(k.to_string(), v.to_string());
                }
                Some(j) => match k {
                    "label" => j.label = v.into(),
                    "status" => j.status = v.into(),
                    "rho_um" => j.rho_um = Some(num(v)?),
                    "mode_index" => j.mode_index = Some(int(v)?),
                    "g0_threshold" => j.g0_threshold = Some(num(v)?),
                    "sigma" => {
                        let (a, b) = v.split_once(' ').ok_or_else(|| err(i + 1, "sigma needs two numbers".into()))?;
                        j.sigma = Some((num(a)?, num(b)?));
                    }
                    "overlap" => j.overlap = Some(num(v)?),
                    "iterations" => j.iterations = Some(int(v)?),
                    "file" => j.files.push(v.into()),
                    other => return Err(err(i + 1, format!("unknown job key '{other}'"))),
                },
            }
        }
        let field = |k: &str| {
            top.get(k)
                .cloned()
                .ok_or_else(|| err(0, format!("manifest lacks '{k}'")))
        };
        let int = |k: &str| -> Result<u64> {
            field(k)?
                .parse()
                .map_err(|_| err(0, format!("manifest '{k}' is not an integer")))
        };
        Ok(Self {
            version: field("version")?,
            command: field("command")?,
            seed: int("seed")?,
            started_unix: int("started_unix")?,
            finished_unix: int("finished_unix")?,
            config_hash: field("config_hash")?,
            jobs,
            config,
        })
    }

    pub fn write(&mut self, dir: &Path) -> Result<()> {
        self.finished_unix = unix_now();
        std::fs::write(dir.join(MANIFEST_NAME), self.to_text())?;
        Ok(())
    }

    pub fn read(dir: &Path) -> Result<Self> {
        let path = dir.join(MANIFEST_NAME);
        let text = std::fs::read_to_string(&path)?;
        Self::parse(&text, &path)
    }
}
