//! Steady-state energy fluxes, efficiency and kinetic diagnostics.
//!
//! Fluxes are positive when energy flows into the three-level system.

use crate::error::{PtreError, Result};
use crate::rates::RateSet;
use crate::system::SystemParams;
use crate::three_level::{PhotonBath, SteadyState, ThreeLevelGenerator, ThreeLevelState};

/// Sign tolerance on Re ρ₁₂ for the regime classification.
pub const SIGN_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxReport {
    pub j_pump: f64,
    pub j_phonon: f64,
    pub j_trap: f64,
    pub eta: f64,
    pub eta0: f64,
}

impl FluxReport {
    /// |J_p + J_v + J_t| relative to max(|J_p|, |J_t|).
    pub fn conservation_residual(&self) -> f64 {
        let scale = self.j_pump.abs().max(self.j_trap.abs());
        let sum = self.j_pump + self.j_phonon + self.j_trap;
        if scale == 0.0 {
            sum.abs()
        } else {
            sum.abs() / scale
        }
    }
}

/// Pump and trap fluxes (J_p, J_t).
pub fn fluxes(
    ss: &SteadyState,
    sys: &SystemParams,
    pump: &PhotonBath,
    trap: &PhotonBath,
) -> (f64, f64) {
    let j = sys.coupling;
    let re12 = ss.state.re12;
    let j_pump =
        sys.epsilon1 * pump.gamma * ss.pump_balance - 0.5 * j * pump.gamma * (pump.n + 1.0) * re12;
    let j_trap =
        sys.epsilon2 * trap.gamma * ss.trap_balance - 0.5 * j * trap.gamma * (trap.n + 1.0) * re12;
    (j_pump, j_trap)
}

/// Net absorption balances n·ρ₀₀ − (n+1)·ρᵢᵢ straight from the populations.
pub fn with_balances(state: ThreeLevelState, pump: &PhotonBath, trap: &PhotonBath) -> SteadyState {
    SteadyState {
        state,
        pump_balance: pump.n * state.rho00 - (pump.n + 1.0) * state.rho11,
        trap_balance: trap.n * state.rho00 - (trap.n + 1.0) * state.rho22,
    }
}

/// Phonon flux Tr[(L_v ρ) H_s] from the phonon part of the generator alone.
pub fn phonon_flux(state: &ThreeLevelState, gen: &ThreeLevelGenerator, sys: &SystemParams) -> f64 {
    let dx = -(gen.phonon * state.generator_vector());
    // E = (ε₁+ε₂)/2 · P + ε/2 · ⟨σ_z⟩ + J/2 · ⟨σ_x⟩
    0.5 * (sys.epsilon1 + sys.epsilon2) * dx[1]
        + 0.5 * sys.detuning() * dx[0]
        + 0.5 * sys.coupling * dx[2]
}

/// η = |J_t / J_p|; defined only while the pump feeds the system.
pub fn efficiency(j_pump: f64, j_trap: f64) -> Result<f64> {
    if !(j_pump > 0.0) || !j_trap.is_finite() {
        return Err(PtreError::UndefinedEfficiency(j_pump));
    }
    Ok((j_trap / j_pump).abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    EtaAbove,
    EtaBelow,
    Boundary,
    /// The trap does not extract energy; the sign law does not apply.
    NoOutput,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::EtaAbove => "eta_above",
            Regime::EtaBelow => "eta_below",
            Regime::Boundary => "boundary",
            Regime::NoOutput => "no_output",
        }
    }
}

/// Predicts the side of η₀ from the sign of Re ρ₁₂.
pub fn classify_regime(state: &ThreeLevelState, output_positive: bool) -> Regime {
    if !output_positive {
        Regime::NoOutput
    } else if state.re12 > SIGN_TOLERANCE {
        Regime::EtaAbove
    } else if state.re12 < -SIGN_TOLERANCE {
        Regime::EtaBelow
    } else {
        Regime::Boundary
    }
}

/// Whether the computed η agrees with the regime predicted from Re ρ₁₂.
pub fn regime_consistent(regime: Regime, eta: f64, eta0: f64) -> bool {
    match regime {
        Regime::EtaAbove => eta > eta0,
        Regime::EtaBelow => eta < eta0,
        Regime::Boundary | Regime::NoOutput => true,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    pub pop_inversion: f64,
    pub coherence_re: f64,
    pub regime: Regime,
    pub residence_proxy: Option<f64>,
    pub gamma_z_rate: f64,
}

pub fn diagnostics(
    ss: &SteadyState,
    flux: &FluxReport,
    rates: &RateSet,
    pump: &PhotonBath,
) -> Diagnostics {
    let state = &ss.state;
    Diagnostics {
        pop_inversion: state.rho11 - state.rho22,
        coherence_re: state.re12,
        regime: classify_regime(state, -flux.j_trap > 0.0),
        residence_proxy: residence_time_proxy(ss, pump).ok(),
        gamma_z_rate: rates.gamma_z,
    }
}

/// Excited-manifold occupancy over net pumping throughput.
pub fn residence_time_proxy(ss: &SteadyState, pump: &PhotonBath) -> Result<f64> {
    let throughput = pump.gamma * ss.pump_balance;
    if !(throughput > 0.0) {
        return Err(PtreError::UndefinedProxy(throughput));
    }
    Ok((ss.state.rho11 + ss.state.rho22) / throughput)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossover {
    pub gamma_z: f64,
    pub gamma_t: f64,
    /// γ_z < γ_t: excitations are trapped before relaxing.
    pub trap_dominates: bool,
}

pub fn kinetic_crossover(rates: &RateSet, trap: &PhotonBath) -> Crossover {
    Crossover {
        gamma_z: rates.gamma_z,
        gamma_t: trap.gamma,
        trap_dominates: rates.gamma_z < trap.gamma,
    }
}
