//! Excited-manifold (two-level) dynamics in the polaron frame.

use nalgebra::Vector3;

use crate::bath::PhononBath;
use crate::error::{PtreError, Result};
use crate::linalg;
use crate::rates::{PolaronFrame, TlsGenerator};
use crate::system::SystemParams;

/// Polaron-frame expectations (⟨τ_z⟩, ⟨τ_x⟩, ⟨τ_y⟩).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BlochVector {
    pub tau_z: f64,
    pub tau_x: f64,
    pub tau_y: f64,
}

impl BlochVector {
    pub fn new(tau_z: f64, tau_x: f64, tau_y: f64) -> Self {
        Self {
            tau_z,
            tau_x,
            tau_y,
        }
    }

    pub fn as_vector(&self) -> Vector3<f64> {
        Vector3::new(self.tau_z, self.tau_x, self.tau_y)
    }

    pub fn from_vector(v: &Vector3<f64>) -> Self {
        Self::new(v[0], v[1], v[2])
    }

    /// Component bounds and |τ| ≤ 1, with 1e-9 slack.
    pub fn is_physical(&self) -> bool {
        let tol = 1e-9;
        let v = self.as_vector();
        v.iter().all(|c| c.abs() <= 1.0 + tol) && v.norm_squared() <= 1.0 + tol
    }
}

/// Local-basis expectations (⟨σ_z⟩, ⟨σ_x⟩, ⟨σ_y⟩).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LocalBloch {
    pub sigma_z: f64,
    pub sigma_x: f64,
    pub sigma_y: f64,
}

/// Which closed-form ⟨τ_z⟩ to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitKind {
    /// Canonical in the bare eigenbasis, α → 0.
    Weak,
    /// Boltzmann in the polaron eigenbasis at the bath's κ.
    Polaron,
    /// Boltzmann over the site energies, α → ∞.
    Strong,
}

pub fn tls_steady_state(gen: &TlsGenerator) -> Result<BlochVector> {
    let cond = linalg::condition_number(&gen.m);
    log::debug!("TLS generator condition number {cond:e}");
    linalg::solve(&gen.m, &gen.c)
        .map(|v| BlochVector::from_vector(&v))
        .ok_or_else(|| PtreError::Singular {
            what: "TLS",
            point: format!("delta = {}", gen.delta),
        })
}

/// ⟨τ(t)⟩ = e^(−Mt)(τ₀ − M⁻¹C) + M⁻¹C.
pub fn tls_propagate(gen: &TlsGenerator, tau0: &BlochVector, t: f64) -> Result<BlochVector> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(PtreError::Domain(format!(
            "propagation time must be >= 0, got {t}"
        )));
    }
    if t == 0.0 {
        return Ok(*tau0);
    }
    let ss = tls_steady_state(gen)?.as_vector();
    let prop = (-gen.m * t).exp();
    Ok(BlochVector::from_vector(
        &(prop * (tau0.as_vector() - ss) + ss),
    ))
}

fn boltzmann_tau_z(beta: f64, gap: f64) -> f64 {
    // (1 − e^{βΔ}) / (1 + e^{βΔ})
    -(0.5 * beta * gap).tanh()
}

pub fn analytic_limit_tau_z(sys: &SystemParams, bath: &PhononBath, which: LimitKind) -> f64 {
    let eps = sys.detuning();
    let j = sys.coupling;
    let gap = match which {
        LimitKind::Weak => eps.hypot(j),
        LimitKind::Polaron => eps.hypot(bath.kappa() * j),
        LimitKind::Strong => eps,
    };
    boltzmann_tau_z(bath.beta_v(), gap)
}

/// Maps polaron-frame expectations to the local basis; the off-diagonal
/// components carry the factor κ from the factorized bath state.
pub fn to_local_frame(tau: &BlochVector, frame: &PolaronFrame) -> LocalBloch {
    let (s, c) = frame.theta.sin_cos();
    let k = frame.kappa;
    LocalBloch {
        sigma_z: c * tau.tau_z + s * tau.tau_x,
        sigma_x: k * (s * tau.tau_z - c * tau.tau_x),
        sigma_y: -k * tau.tau_y,
    }
}
