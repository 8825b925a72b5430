//! Polaron frame and the eleven dissipative constants of the excited-state
//! Bloch equation, assembled into the TLS generator (M, C).

use nalgebra::{Matrix3, Vector3};

use crate::bath::PhononBath;
use crate::error::{PtreError, Result};
use crate::quadrature::{integrate_semi_infinite_many, Quadrature, QuadratureConfig};
use crate::system::SystemParams;

/// Eigenbasis of the polaron-frame Hamiltonian (ε/2)σ_z + (κJ/2)σ_x.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolaronFrame {
    pub kappa: f64,
    pub epsilon: f64,
    /// Mixing angle, tan θ = κJ/ε.
    pub theta: f64,
    /// Level spacing ε₊ − ε₋.
    pub delta: f64,
    pub eps_plus: f64,
    pub eps_minus: f64,
}

impl PolaronFrame {
    pub fn sin_2theta(&self) -> f64 {
        (2.0 * self.theta).sin()
    }
}

pub fn build_polaron_frame(sys: &SystemParams, kappa: f64) -> Result<PolaronFrame> {
    if !(kappa.is_finite() && (0.0..=1.0 + 1e-12).contains(&kappa)) {
        return Err(PtreError::InvalidParameter {
            name: "kappa",
            value: kappa,
            reason: "must lie in [0, 1]",
        });
    }
    let epsilon = sys.detuning();
    let tunneling = kappa * sys.coupling;
    if epsilon == 0.0 && tunneling == 0.0 {
        return Err(PtreError::DegenerateFrame);
    }
    let delta = epsilon.hypot(tunneling);
    Ok(PolaronFrame {
        kappa,
        epsilon,
        theta: tunneling.atan2(epsilon),
        delta,
        eps_plus: 0.5 * delta,
        eps_minus: -0.5 * delta,
    })
}

/// The eleven real constants entering M and C.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RateSet {
    pub gamma_z: f64,
    pub gamma_x: f64,
    pub gamma_y: f64,
    pub gamma_zx: f64,
    pub gamma_xz: f64,
    pub gamma_xy: f64,
    pub gamma_yx: f64,
    pub gamma_yz: f64,
    pub c_z: f64,
    pub c_x: f64,
    pub c_y: f64,
}

impl RateSet {
    pub const NAMES: [&'static str; 11] = [
        "gamma_z", "gamma_x", "gamma_y", "gamma_zx", "gamma_xz", "gamma_xy", "gamma_yx",
        "gamma_yz", "c_z", "c_x", "c_y",
    ];

    pub fn values(&self) -> [f64; 11] {
        [
            self.gamma_z,
            self.gamma_x,
            self.gamma_y,
            self.gamma_zx,
            self.gamma_xz,
            self.gamma_xy,
            self.gamma_yx,
            self.gamma_yz,
            self.c_z,
            self.c_x,
            self.c_y,
        ]
    }

    pub fn from_values(v: [f64; 11]) -> Self {
        Self {
            gamma_z: v[0],
            gamma_x: v[1],
            gamma_y: v[2],
            gamma_zx: v[3],
            gamma_xz: v[4],
            gamma_xy: v[5],
            gamma_yx: v[6],
            gamma_yz: v[7],
            c_z: v[8],
            c_x: v[9],
            c_y: v[10],
        }
    }
}

/// Half-line integrals shared by the eleven constants, in component order.
const BASIS_LABELS: [&str; 8] = [
    "∫f dt (gamma_x, gamma_y, gamma_zx)",
    "∫f cos(Δt) dt (gamma_z, gamma_y, gamma_xz)",
    "∫g cos(Δt) dt (gamma_z, gamma_x)",
    "∫g sin(Δt) dt (gamma_xy)",
    "∫f sin(Δt) dt (gamma_yx, gamma_yz)",
    "∫sin(Δt) Im cosh Q dt (c_z, c_x)",
    "∫sin(Δt) Im sinh Q dt (c_z)",
    "∫(1 − cos Δt) Im cosh Q dt (c_y)",
];

/// Evaluates the eleven constants and returns the underlying quadrature
/// record (horizon, error estimates) alongside.
pub fn compute_rates_with_report(
    frame: &PolaronFrame,
    bath: &PhononBath,
    sys: &SystemParams,
    cfg: &QuadratureConfig,
) -> Result<(RateSet, Quadrature<8>)> {
    let delta = frame.delta;
    let quad = integrate_semi_infinite_many(
        |t| {
            let k = bath.kernel_sample(t);
            let (s, c) = (delta * t).sin_cos();
            [
                k.f,
                k.f * c,
                k.g * c,
                k.g * s,
                k.f * s,
                s * k.im_cosh,
                s * k.im_sinh,
                (1.0 - c) * k.im_cosh,
            ]
        },
        delta,
        bath.time_scale(),
        cfg,
    )
    .map_err(|e| match e {
        PtreError::NonConvergence {
            component,
            estimate,
            error,
            subdivisions,
            ..
        } => PtreError::NonConvergence {
            label: BASIS_LABELS.get(component).map(|s| s.to_string()),
            component,
            estimate,
            error,
            subdivisions,
        },
        other => other,
    })?;

    let rates = rates_from_integrals(frame, sys.coupling, &quad.value);
    for (name, v) in [
        ("gamma_z", rates.gamma_z),
        ("gamma_x", rates.gamma_x),
        ("gamma_y", rates.gamma_y),
    ] {
        if v < 0.0 {
            log::warn!(
                "{name} = {v:e} is negative at alpha = {}, beta_v = {}",
                bath.alpha(),
                bath.beta_v()
            );
        }
    }
    Ok((rates, quad))
}

pub fn compute_rates(
    frame: &PolaronFrame,
    bath: &PhononBath,
    sys: &SystemParams,
    cfg: &QuadratureConfig,
) -> Result<RateSet> {
    compute_rates_with_report(frame, bath, sys, cfg).map(|(r, _)| r)
}

fn rates_from_integrals(frame: &PolaronFrame, coupling: f64, i: &[f64; 8]) -> RateSet {
    let pre = (frame.kappa * coupling).powi(2);
    let (s, c) = frame.theta.sin_cos();
    let (s2, c2) = (s * s, c * c);
    let sin2t = frame.sin_2theta();
    let [f, f_cos, g_cos, g_sin, f_sin, sin_imcosh, sin_imsinh, one_m_cos_imcosh] = *i;
    RateSet {
        gamma_z: 0.5 * pre * (c2 * f_cos + g_cos),
        gamma_x: 0.5 * pre * (s2 * f + g_cos),
        gamma_y: 0.5 * pre * (c2 * f_cos + s2 * f),
        gamma_zx: 0.25 * pre * sin2t * f,
        gamma_xz: 0.25 * pre * sin2t * f_cos,
        gamma_xy: 0.5 * pre * g_sin,
        gamma_yx: -0.5 * pre * c2 * f_sin,
        gamma_yz: 0.25 * pre * sin2t * f_sin,
        // full-line integrals folded onto t ≥ 0 with Q(−t) = conj Q(t)
        c_z: pre * (c2 * sin_imcosh + sin_imsinh),
        c_x: 0.5 * pre * sin2t * sin_imcosh,
        c_y: 0.5 * pre * sin2t * one_m_cos_imcosh,
    }
}

/// Bloch-equation generator d⟨τ⟩/dt = −M⟨τ⟩ + C, components ordered (z, x, y).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TlsGenerator {
    pub m: Matrix3<f64>,
    pub c: Vector3<f64>,
    pub delta: f64,
}

pub fn assemble_tls_generator(rates: &RateSet, frame: &PolaronFrame) -> TlsGenerator {
    let d = frame.delta;
    #[rustfmt::skip]
    let m = Matrix3::new(
        rates.gamma_z,  rates.gamma_zx,      0.0,
        rates.gamma_xz, rates.gamma_x,       d + rates.gamma_xy,
        rates.gamma_yz, -d + rates.gamma_yx, rates.gamma_y,
    );
    TlsGenerator {
        m,
        c: Vector3::new(rates.c_z, rates.c_x, rates.c_y),
        delta: d,
    }
}
