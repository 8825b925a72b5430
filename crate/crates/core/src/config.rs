//! Flat `key = value` configuration files.
//!
//! ```text
//! # 60-point alpha sweep
//! epsilon1 = 5
//! alpha_min = 1e-3
//! alpha_max = 50
//! alpha_points = 60
//! out = sweep.csv
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::bath::PhononBath;
use crate::error::{PtreError, Result};
use crate::sweep::{default_beta_v_grid, linear_grid, log_grid, SweepConfig};
use crate::system::SystemParams;
use crate::three_level::PhotonBath;

const KEYS: [&str; 29] = [
    "epsilon1",
    "epsilon2",
    "J",
    "alpha",
    "omega_c",
    "beta_v",
    "beta_p",
    "beta_t",
    "gamma_p",
    "gamma_t",
    "n_p_override",
    "n_t_override",
    "alpha_grid",
    "alpha_min",
    "alpha_max",
    "alpha_points",
    "alpha_spacing",
    "beta_v_grid",
    "beta_v_min",
    "beta_v_max",
    "beta_v_points",
    "rel_tol",
    "abs_tol",
    "tail_threshold",
    "max_time_factor",
    "max_subdivisions",
    "columns",
    "out",
    "threads",
];

/// Raw key/value pairs in file order of first appearance.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    entries: BTreeMap<String, String>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = match line.find('#') {
                Some(p) => &line[..p],
                None => line,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                PtreError::Config(format!("line {}: expected `key = value`", i + 1))
            })?;
            let (k, v) = (k.trim(), v.trim());
            if !KEYS.contains(&k) {
                return Err(PtreError::Config(format!(
                    "line {}: unknown key `{k}`",
                    i + 1
                )));
            }
            if v.is_empty() {
                return Err(PtreError::Config(format!(
                    "line {}: `{k}` has no value",
                    i + 1
                )));
            }
            if entries.insert(k.to_string(), v.to_string()).is_some() {
                return Err(PtreError::Config(format!(
                    "line {}: duplicate key `{k}`",
                    i + 1
                )));
            }
        }
        Ok(Self { entries })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    fn f64(&self, key: &str) -> Result<Option<f64>> {
        self.get(key).map(|v| parse_f64(key, v)).transpose()
    }

    fn usize(&self, key: &str) -> Result<Option<usize>> {
        self.get(key)
            .map(|v| {
                v.parse::<usize>()
                    .map_err(|_| PtreError::Config(format!("`{key}`: not an integer: `{v}`")))
            })
            .transpose()
    }

    fn list(&self, key: &str) -> Result<Option<Vec<f64>>> {
        self.get(key)
            .map(|v| {
                v.split(',')
                    .map(|s| parse_f64(key, s.trim()))
                    .collect::<Result<Vec<f64>>>()
            })
            .transpose()
    }
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    v.parse::<f64>()
        .map_err(|_| PtreError::Config(format!("`{key}`: not a number: `{v}`")))
}

fn cfg_err(e: PtreError) -> PtreError {
    match e {
        PtreError::Config(_) => e,
        other => PtreError::Config(other.to_string()),
    }
}

/// Builds a validated sweep configuration on top of the defaults.
pub fn parse_config(text: &str) -> Result<SweepConfig> {
    let raw = RawConfig::parse(text)?;
    from_raw(&raw).map_err(cfg_err)
}

pub fn load_config(path: &Path) -> Result<SweepConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| PtreError::Config(format!("{}: {e}", path.display())))?;
    parse_config(&text)
}

/// Thread count requested by the file, if any.
pub fn threads_from_text(text: &str) -> Result<Option<usize>> {
    RawConfig::parse(text)?.usize("threads")
}

fn from_raw(raw: &RawConfig) -> Result<SweepConfig> {
    let mut cfg = SweepConfig::default();
    let d = cfg.system;
    let system = SystemParams::new(
        raw.f64("epsilon1")?.unwrap_or(d.epsilon1),
        raw.f64("epsilon2")?.unwrap_or(d.epsilon2),
        raw.f64("J")?.unwrap_or(d.coupling),
    )?;
    cfg.phonon = PhononBath::new(
        raw.f64("alpha")?.unwrap_or(cfg.phonon.alpha()),
        raw.f64("omega_c")?.unwrap_or(cfg.phonon.omega_c()),
        raw.f64("beta_v")?.unwrap_or(cfg.phonon.beta_v()),
    )?;

    let photon = |gamma_key: &str,
                  beta_key: &str,
                  n_key: &str,
                  default: &PhotonBath,
                  energy: f64|
     -> Result<PhotonBath> {
        let gamma = raw.f64(gamma_key)?.unwrap_or(default.gamma);
        match raw.f64(n_key)? {
            Some(n) => PhotonBath::with_occupation(gamma, n, energy),
            None => {
                let beta = raw.f64(beta_key)?.unwrap_or(default.beta.unwrap_or(1.0));
                PhotonBath::thermal(gamma, beta, energy)
            }
        }
    };
    cfg.pump = photon(
        "gamma_p",
        "beta_p",
        "n_p_override",
        &cfg.pump,
        system.epsilon1,
    )?;
    cfg.trap = photon(
        "gamma_t",
        "beta_t",
        "n_t_override",
        &cfg.trap,
        system.epsilon2,
    )?;
    cfg.system = system;

    if let Some(g) = raw.list("alpha_grid")? {
        cfg.alpha_grid = g;
    } else if ["alpha_min", "alpha_max", "alpha_points", "alpha_spacing"]
        .iter()
        .any(|k| raw.get(k).is_some())
    {
        let lo = raw.f64("alpha_min")?.unwrap_or(1e-3);
        let hi = raw.f64("alpha_max")?.unwrap_or(50.0);
        let n = raw.usize("alpha_points")?.unwrap_or(60);
        if n == 0 {
            return Err(PtreError::Config("alpha_points must be > 0".into()));
        }
        cfg.alpha_grid = match raw.get("alpha_spacing").unwrap_or("log") {
            "log" => {
                if !(lo > 0.0) {
                    return Err(PtreError::Config(
                        "log alpha grid needs alpha_min > 0".into(),
                    ));
                }
                log_grid(lo, hi, n)
            }
            "linear" => linear_grid(lo, hi, n),
            other => {
                return Err(PtreError::Config(format!(
                    "alpha_spacing must be `log` or `linear`, got `{other}`"
                )))
            }
        };
    }

    if let Some(g) = raw.list("beta_v_grid")? {
        cfg.beta_v_grid = g;
    } else if ["beta_v_min", "beta_v_max", "beta_v_points"]
        .iter()
        .any(|k| raw.get(k).is_some())
    {
        let d = default_beta_v_grid();
        let lo = raw.f64("beta_v_min")?.unwrap_or(d[0]);
        let hi = raw.f64("beta_v_max")?.unwrap_or(d[d.len() - 1]);
        let n = raw.usize("beta_v_points")?.unwrap_or(d.len());
        if n == 0 {
            return Err(PtreError::Config("beta_v_points must be > 0".into()));
        }
        cfg.beta_v_grid = linear_grid(lo, hi, n);
    }

    let q = &mut cfg.quadrature;
    q.rel_tol = raw.f64("rel_tol")?.unwrap_or(q.rel_tol);
    q.abs_tol = raw.f64("abs_tol")?.unwrap_or(q.abs_tol);
    q.tail_threshold = raw.f64("tail_threshold")?.unwrap_or(q.tail_threshold);
    q.max_time_factor = raw.f64("max_time_factor")?.unwrap_or(q.max_time_factor);
    q.max_subdivisions = raw.usize("max_subdivisions")?.unwrap_or(q.max_subdivisions);

    if let Some(c) = raw.get("columns") {
        cfg.columns = c.split(',').map(|s| s.trim().to_string()).collect();
    }
    cfg.out = raw.get("out").map(PathBuf::from);
    raw.usize("threads")?;

    cfg.validate()?;
    Ok(cfg)
}

fn join(v: &[f64]) -> String {
    v.iter()
        .map(|x| format!("{x:?}"))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Full configuration as parseable text; values use shortest round-trip form.
pub fn to_config_text(cfg: &SweepConfig) -> String {
    let mut lines = vec![
        format!("epsilon1 = {:?}", cfg.system.epsilon1),
        format!("epsilon2 = {:?}", cfg.system.epsilon2),
        format!("J = {:?}", cfg.system.coupling),
        format!("alpha = {:?}", cfg.phonon.alpha()),
        format!("omega_c = {:?}", cfg.phonon.omega_c()),
        format!("beta_v = {:?}", cfg.phonon.beta_v()),
    ];
    for (tag, bath) in [("p", &cfg.pump), ("t", &cfg.trap)] {
        lines.push(format!("gamma_{tag} = {:?}", bath.gamma));
        match bath.beta {
            Some(b) => lines.push(format!("beta_{tag} = {b:?}")),
            None => lines.push(format!("n_{tag}_override = {:?}", bath.n)),
        }
    }
    lines.push(format!("alpha_grid = {}", join(&cfg.alpha_grid)));
    if !cfg.beta_v_grid.is_empty() {
        lines.push(format!("beta_v_grid = {}", join(&cfg.beta_v_grid)));
    }
    let q = &cfg.quadrature;
    lines.push(format!("rel_tol = {:?}", q.rel_tol));
    lines.push(format!("abs_tol = {:?}", q.abs_tol));
    lines.push(format!("tail_threshold = {:?}", q.tail_threshold));
    lines.push(format!("max_time_factor = {:?}", q.max_time_factor));
    lines.push(format!("max_subdivisions = {}", q.max_subdivisions));
    if !cfg.columns.is_empty() {
        lines.push(format!("columns = {}", cfg.columns.join(", ")));
    }
    if let Some(out) = &cfg.out {
        lines.push(format!("out = {}", out.display()));
    }
    let mut s = lines.join("\n");
    s.push('\n');
    s
}
