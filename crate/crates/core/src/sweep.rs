//! Single-point pipeline, parameter sweeps and CSV emission.

use std::io::Write;
use std::path::PathBuf;

use rayon::prelude::*;

use crate::bath::PhononBath;
use crate::error::{PtreError, Result};
use crate::observables::{
    classify_regime, diagnostics, efficiency, fluxes, phonon_flux, regime_consistent, Diagnostics,
    FluxReport,
};
use crate::quadrature::QuadratureConfig;
use crate::rates::{
    assemble_tls_generator, build_polaron_frame, compute_rates, PolaronFrame, RateSet,
};
use crate::system::SystemParams;
use crate::three_level::{
    assemble_three_level_generator, solve_steady_state, PhotonBath, SteadyState,
    ThreeLevelGenerator,
};
use crate::tls::{tls_steady_state, BlochVector};

/// Column names of the result table, in canonical order.
pub const COLUMNS: [&str; 22] = [
    "alpha",
    "beta_v",
    "kappa",
    "theta",
    "delta",
    "tau_z",
    "tau_x",
    "tau_y",
    "rho00",
    "rho11",
    "rho22",
    "re_rho12",
    "im_rho12",
    "j_pump",
    "j_phonon",
    "j_trap",
    "eta",
    "eta0",
    "gamma_z",
    "residence_proxy",
    "condition_number",
    "flags",
];

pub const CONSERVATION_TOLERANCE: f64 = 1e-8;
pub const TRACE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub system: SystemParams,
    /// Bath at the configured α and β_v; sweeps override either.
    pub phonon: PhononBath,
    pub pump: PhotonBath,
    pub trap: PhotonBath,
    pub alpha_grid: Vec<f64>,
    /// Empty means a 1D sweep at the bath's β_v.
    pub beta_v_grid: Vec<f64>,
    pub quadrature: QuadratureConfig,
    /// Output column subset; empty selects all columns.
    pub columns: Vec<String>,
    pub out: Option<PathBuf>,
}

/// α log-spaced over [1e-3, 50] with 60 points.
pub fn default_alpha_grid() -> Vec<f64> {
    log_grid(1e-3, 50.0, 60)
}

/// β_v J linear over [0.1, 2] with 20 points.
pub fn default_beta_v_grid() -> Vec<f64> {
    linear_grid(0.1, 2.0, 20)
}

pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

pub fn linear_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

impl Default for SweepConfig {
    /// Reference set: ε₁ = 5, ε₂ = 4.5, ω_c = 5,
    /// β_v = 1, β_p = 0.02, β_t = 1, γ_p = γ_t = 0.01 (units of J).
    fn default() -> Self {
        let system = SystemParams::default();
        Self {
            system,
            phonon: PhononBath::new(1.0, 5.0, 1.0).expect("valid defaults"),
            pump: PhotonBath::thermal(0.01, 0.02, system.epsilon1).expect("valid defaults"),
            trap: PhotonBath::thermal(0.01, 1.0, system.epsilon2).expect("valid defaults"),
            alpha_grid: default_alpha_grid(),
            beta_v_grid: Vec::new(),
            quadrature: QuadratureConfig::default(),
            columns: Vec::new(),
            out: None,
        }
    }
}

fn check_grid(name: &str, grid: &[f64], allow_empty: bool, allow_zero: bool) -> Result<()> {
    if grid.is_empty() {
        return if allow_empty {
            Ok(())
        } else {
            Err(PtreError::Config(format!("{name} grid is empty")))
        };
    }
    for w in grid.windows(2) {
        if !(w[1] > w[0]) {
            return Err(PtreError::Config(format!(
                "{name} grid must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
    }
    for &v in grid {
        let ok = v.is_finite() && (v > 0.0 || (allow_zero && v == 0.0));
        if !ok {
            return Err(PtreError::Config(format!(
                "{name} grid value {v} out of range"
            )));
        }
    }
    Ok(())
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        check_grid("alpha", &self.alpha_grid, false, true)?;
        check_grid("beta_v", &self.beta_v_grid, true, false)?;
        self.quadrature.validate()?;
        for c in &self.columns {
            if !COLUMNS.contains(&c.as_str()) {
                return Err(PtreError::Config(format!("unknown output column `{c}`")));
            }
        }
        Ok(())
    }

    /// (β_v, α) pairs in lexicographic order.
    pub fn grid_points(&self) -> Vec<(f64, f64)> {
        let betas = if self.beta_v_grid.is_empty() {
            vec![self.phonon.beta_v()]
        } else {
            self.beta_v_grid.clone()
        };
        betas
            .iter()
            .flat_map(|&b| self.alpha_grid.iter().map(move |&a| (b, a)))
            .collect()
    }

    pub fn selected_columns(&self) -> Vec<&str> {
        if self.columns.is_empty() {
            COLUMNS.to_vec()
        } else {
            self.columns.iter().map(String::as_str).collect()
        }
    }
}

/// Every intermediate of one parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSolution {
    pub bath: PhononBath,
    pub frame: PolaronFrame,
    pub rates: RateSet,
    pub tau: BlochVector,
    pub generator: ThreeLevelGenerator,
    pub steady: SteadyState,
    pub flux: FluxReport,
    pub diagnostics: Diagnostics,
    pub condition_number: f64,
    pub flags: Vec<String>,
}

/// bath → rates → TLS → three-level → observables at one (α, β_v).
pub fn solve_point(cfg: &SweepConfig, alpha: f64, beta_v: f64) -> Result<PointSolution> {
    let bath = PhononBath::new(alpha, cfg.phonon.omega_c(), beta_v)?;
    let frame = build_polaron_frame(&cfg.system, bath.kappa())?;
    let rates = compute_rates(&frame, &bath, &cfg.system, &cfg.quadrature)?;
    let mut flags = Vec::new();
    // singular when every phonon rate vanishes (α = 0)
    let tau = tls_steady_state(&assemble_tls_generator(&rates, &frame)).unwrap_or_else(|_| {
        flags.push("tls_singular".to_string());
        BlochVector::new(f64::NAN, f64::NAN, f64::NAN)
    });
    let generator = assemble_three_level_generator(&rates, &frame, &cfg.pump, &cfg.trap)?;
    let steady = solve_steady_state(&generator, &cfg.pump, &cfg.trap).map_err(|e| match e {
        PtreError::Singular { what, .. } => PtreError::Singular {
            what,
            point: format!("alpha = {alpha}, beta_v = {beta_v}"),
        },
        other => other,
    })?;
    let condition_number = generator.condition_number();

    let state = steady.state;
    let (j_pump, j_trap) = fluxes(&steady, &cfg.system, &cfg.pump, &cfg.trap);
    let j_phonon = phonon_flux(&state, &generator, &cfg.system);
    let eta0 = cfg.system.eta0();
    let eta = match efficiency(j_pump, j_trap) {
        Ok(e) => e,
        Err(_) => {
            flags.push("eta_undefined".to_string());
            f64::NAN
        }
    };
    let flux = FluxReport {
        j_pump,
        j_phonon,
        j_trap,
        eta,
        eta0,
    };
    let diagnostics = diagnostics(&steady, &flux, &rates, &cfg.pump);

    if (state.trace() - 1.0).abs() > TRACE_TOLERANCE {
        flags.push("trace".to_string());
    }
    if flux.conservation_residual() > CONSERVATION_TOLERANCE {
        flags.push("conservation".to_string());
    }
    if eta.is_finite() && !regime_consistent(classify_regime(&state, -j_trap > 0.0), eta, eta0) {
        flags.push("regime".to_string());
    }
    if !state.is_positive() {
        flags.push("positivity".to_string());
    }
    if rates.gamma_z < 0.0 || rates.gamma_x < 0.0 || rates.gamma_y < 0.0 {
        flags.push("negative_rate".to_string());
    }
    if diagnostics.residence_proxy.is_none() && !flags.iter().any(|f| f == "eta_undefined") {
        flags.push("proxy_undefined".to_string());
    }

    Ok(PointSolution {
        bath,
        frame,
        rates,
        tau,
        generator,
        steady,
        flux,
        diagnostics,
        condition_number,
        flags,
    })
}

/// One row of the result table.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub alpha: f64,
    pub beta_v: f64,
    pub kappa: f64,
    pub theta: f64,
    pub delta: f64,
    pub tau_z: f64,
    pub tau_x: f64,
    pub tau_y: f64,
    pub rho00: f64,
    pub rho11: f64,
    pub rho22: f64,
    pub re_rho12: f64,
    pub im_rho12: f64,
    pub j_pump: f64,
    pub j_phonon: f64,
    pub j_trap: f64,
    pub eta: f64,
    pub eta0: f64,
    pub gamma_z: f64,
    pub residence_proxy: f64,
    pub condition_number: f64,
    pub flags: Vec<String>,
}

impl ResultRow {
    fn failed(alpha: f64, beta_v: f64, eta0: f64, err: &PtreError) -> Self {
        let nan = f64::NAN;
        Self {
            alpha,
            beta_v,
            kappa: nan,
            theta: nan,
            delta: nan,
            tau_z: nan,
            tau_x: nan,
            tau_y: nan,
            rho00: nan,
            rho11: nan,
            rho22: nan,
            re_rho12: nan,
            im_rho12: nan,
            j_pump: nan,
            j_phonon: nan,
            j_trap: nan,
            eta: nan,
            eta0,
            gamma_z: nan,
            residence_proxy: nan,
            condition_number: nan,
            flags: vec![format!("error: {err}")],
        }
    }

    fn from_solution(alpha: f64, beta_v: f64, s: &PointSolution) -> Self {
        Self {
            alpha,
            beta_v,
            kappa: s.frame.kappa,
            theta: s.frame.theta,
            delta: s.frame.delta,
            tau_z: s.tau.tau_z,
            tau_x: s.tau.tau_x,
            tau_y: s.tau.tau_y,
            rho00: s.steady.state.rho00,
            rho11: s.steady.state.rho11,
            rho22: s.steady.state.rho22,
            re_rho12: s.steady.state.re12,
            im_rho12: s.steady.state.im12,
            j_pump: s.flux.j_pump,
            j_phonon: s.flux.j_phonon,
            j_trap: s.flux.j_trap,
            eta: s.flux.eta,
            eta0: s.flux.eta0,
            gamma_z: s.rates.gamma_z,
            residence_proxy: s.diagnostics.residence_proxy.unwrap_or(f64::NAN),
            condition_number: s.condition_number,
            flags: s.flags.clone(),
        }
    }

    pub fn is_clean(&self) -> bool {
        self.flags.is_empty()
    }

    pub fn flags_field(&self) -> String {
        self.flags.join(";")
    }

    /// Numeric value of a column; `None` for `flags` or unknown names.
    pub fn get(&self, column: &str) -> Option<f64> {
        Some(match column {
            "alpha" => self.alpha,
            "beta_v" => self.beta_v,
            "kappa" => self.kappa,
            "theta" => self.theta,
            "delta" => self.delta,
            "tau_z" => self.tau_z,
            "tau_x" => self.tau_x,
            "tau_y" => self.tau_y,
            "rho00" => self.rho00,
            "rho11" => self.rho11,
            "rho22" => self.rho22,
            "re_rho12" => self.re_rho12,
            "im_rho12" => self.im_rho12,
            "j_pump" => self.j_pump,
            "j_phonon" => self.j_phonon,
            "j_trap" => self.j_trap,
            "eta" => self.eta,
            "eta0" => self.eta0,
            "gamma_z" => self.gamma_z,
            "residence_proxy" => self.residence_proxy,
            "condition_number" => self.condition_number,
            _ => return None,
        })
    }

    /// `key=value` lines in canonical column order.
    pub fn to_key_values(&self) -> String {
        let mut out = String::new();
        for c in COLUMNS {
            match self.get(c) {
                Some(v) => out.push_str(&format!("{c}={}\n", format_value(v))),
                None => out.push_str(&format!("{c}={}\n", self.flags_field())),
            }
        }
        out
    }
}

/// Runs the full pipeline at one point; stage failures become a flagged row.
pub fn run_point(cfg: &SweepConfig, alpha: f64, beta_v: f64) -> ResultRow {
    match solve_point(cfg, alpha, beta_v) {
        Ok(s) => ResultRow::from_solution(alpha, beta_v, &s),
        Err(e) => {
            log::warn!("point alpha = {alpha}, beta_v = {beta_v} failed: {e}");
            ResultRow::failed(alpha, beta_v, cfg.system.eta0(), &e)
        }
    }
}

/// Evaluates every grid point; rows are ordered by grid index whatever the
/// thread count.
pub fn run_sweep(cfg: &SweepConfig, threads: usize) -> Result<Vec<ResultRow>> {
    cfg.validate()?;
    let points = cfg.grid_points();
    if threads <= 1 {
        return Ok(points.iter().map(|&(b, a)| run_point(cfg, a, b)).collect());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| PtreError::Config(format!("thread pool: {e}")))?;
    Ok(pool.install(|| {
        points
            .par_iter()
            .map(|&(b, a)| run_point(cfg, a, b))
            .collect()
    }))
}

/// 17 significant digits.
pub fn format_value(v: f64) -> String {
    if v.is_nan() {
        "NaN".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{v:.16e}")
    }
}

/// Writes the config comment block, header row and rows.
pub fn write_csv<W: Write>(cfg: &SweepConfig, rows: &[ResultRow], mut out: W) -> Result<()> {
    writeln!(out, "# ptre-core {}", env!("CARGO_PKG_VERSION"))?;
    for line in crate::config::to_config_text(cfg).lines() {
        if line.starts_with("out =") {
            continue;
        }
        writeln!(out, "# {line}")?;
    }
    let columns = cfg.selected_columns();
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_writer(out);
    w.write_record(&columns)?;
    for row in rows {
        let record: Vec<String> = columns
            .iter()
            .map(|c| match row.get(c) {
                Some(v) => format_value(v),
                None => row.flags_field(),
            })
            .collect();
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

/// Extremes over unflagged rows only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSummary {
    pub clean_rows: usize,
    pub flagged_rows: usize,
    pub eta_min: Option<(f64, f64)>,
    pub output_max: Option<(f64, f64)>,
}

pub fn summarize(rows: &[ResultRow]) -> SweepSummary {
    let clean: Vec<&ResultRow> = rows.iter().filter(|r| r.is_clean()).collect();
    let eta_min = clean
        .iter()
        .filter(|r| r.eta.is_finite())
        .min_by(|a, b| a.eta.total_cmp(&b.eta))
        .map(|r| (r.alpha, r.eta));
    let output_max = clean
        .iter()
        .filter(|r| r.j_trap.is_finite())
        .max_by(|a, b| (-a.j_trap).total_cmp(&(-b.j_trap)))
        .map(|r| (r.alpha, -r.j_trap));
    SweepSummary {
        clean_rows: clean.len(),
        flagged_rows: rows.len() - clean.len(),
        eta_min,
        output_max,
    }
}
