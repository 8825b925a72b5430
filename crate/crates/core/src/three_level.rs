//! Full three-level steady state: phonon-induced excited-state dynamics
//! plus Lindblad pump (|0⟩↔|1⟩) and trap (|0⟩↔|2⟩) channels.
//!
//! The generator acts on the vector
//! x = (ρ₁₁ − ρ₂₂, ρ₁₁ + ρ₂₂, ⟨σ_x⟩, ⟨σ_y⟩) with ⟨σ_x⟩ = 2 Re ρ₁₂ and
//! ⟨σ_y⟩ = −2 Im ρ₁₂; the coherence is reported as Re ρ₁₂, Im ρ₁₂.

use nalgebra::{Matrix4, Vector4};

use crate::error::{check_non_negative, PtreError, Result};
use crate::linalg;
use crate::rates::{PolaronFrame, RateSet};

/// Weakly coupled photon bath driving one ground-to-excited transition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonBath {
    pub gamma: f64,
    /// Inverse temperature, when the occupation was derived from it.
    pub beta: Option<f64>,
    pub transition_energy: f64,
    pub n: f64,
}

impl PhotonBath {
    /// Occupation from the Bose–Einstein factor at the transition energy.
    pub fn thermal(gamma: f64, beta: f64, transition_energy: f64) -> Result<Self> {
        check_non_negative("gamma", gamma)?;
        let n = photon_occupation(beta, transition_energy)?;
        Ok(Self {
            gamma,
            beta: Some(beta),
            transition_energy,
            n,
        })
    }

    pub fn with_occupation(gamma: f64, n: f64, transition_energy: f64) -> Result<Self> {
        check_non_negative("gamma", gamma)?;
        check_non_negative("n", n)?;
        Ok(Self {
            gamma,
            beta: None,
            transition_energy,
            n,
        })
    }
}

/// n = 1/(e^(βE) − 1).
pub fn photon_occupation(beta: f64, transition_energy: f64) -> Result<f64> {
    let x = beta * transition_energy;
    if !(x > 0.0) || x.is_nan() {
        return Err(PtreError::Domain(format!(
            "photon occupation needs beta * energy > 0, got {x}"
        )));
    }
    Ok(1.0 / x.exp_m1())
}

/// Split generator M̄ = phonon + photon with drive vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeLevelGenerator {
    pub phonon: Matrix4<f64>,
    pub photon: Matrix4<f64>,
    pub drive: Vector4<f64>,
}

impl ThreeLevelGenerator {
    pub fn mbar(&self) -> Matrix4<f64> {
        self.phonon + self.photon
    }

    pub fn condition_number(&self) -> f64 {
        linalg::condition_number(&self.mbar())
    }
}

pub fn assemble_three_level_generator(
    rates: &RateSet,
    frame: &PolaronFrame,
    pump: &PhotonBath,
    trap: &PhotonBath,
) -> Result<ThreeLevelGenerator> {
    let k = frame.kappa;
    if !(k > 0.0) {
        return Err(PtreError::SingularFrame(k));
    }
    let r = rates;
    let d = frame.delta;
    let (s, c) = frame.theta.sin_cos();
    let (s2, c2) = (s * s, c * c);
    let sin2t = frame.sin_2theta();

    let mut ph = Matrix4::zeros();
    ph[(0, 0)] = r.gamma_z * c2 + r.gamma_x * s2 + 0.5 * (r.gamma_xz + r.gamma_zx) * sin2t;
    ph[(0, 1)] = -r.c_z * c - r.c_x * s;
    ph[(0, 2)] = (r.gamma_xz * s2 - r.gamma_zx * c2 + 0.5 * (r.gamma_z - r.gamma_x) * sin2t) / k;
    ph[(0, 3)] = -(d + r.gamma_xy) * s / k;
    ph[(2, 0)] = k * (r.gamma_zx * s2 - r.gamma_xz * c2 + 0.5 * (r.gamma_z - r.gamma_x) * sin2t);
    ph[(2, 1)] = k * (r.c_x * c - r.c_z * s);
    ph[(2, 2)] = r.gamma_x * c2 + r.gamma_z * s2 - 0.5 * (r.gamma_xz + r.gamma_zx) * sin2t;
    ph[(2, 3)] = (d + r.gamma_xy) * c;
    ph[(3, 0)] = k * ((d - r.gamma_yx) * s - r.gamma_yz * c);
    ph[(3, 1)] = k * r.c_y;
    ph[(3, 2)] = -(d - r.gamma_yx) * c - r.gamma_yz * s;
    ph[(3, 3)] = r.gamma_y;

    let (gp, np) = (pump.gamma, pump.n);
    let (gt, nt) = (trap.gamma, trap.n);
    let decay = 0.5 * (gp * (np + 1.0) + gt * (nt + 1.0));
    let mut pt = Matrix4::zeros();
    pt[(0, 0)] = decay;
    pt[(0, 1)] = 0.5 * (gp * (3.0 * np + 1.0) - gt * (3.0 * nt + 1.0));
    pt[(1, 0)] = 0.5 * (gp * (np + 1.0) - gt * (nt + 1.0));
    pt[(1, 1)] = 0.5 * (gp * (3.0 * np + 1.0) + gt * (3.0 * nt + 1.0));
    pt[(2, 2)] = decay;
    pt[(3, 3)] = decay;

    Ok(ThreeLevelGenerator {
        phonon: ph,
        photon: pt,
        drive: Vector4::new(gp * np - gt * nt, gp * np + gt * nt, 0.0, 0.0),
    })
}

/// Steady-state reduced density matrix elements relevant to the fluxes.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ThreeLevelState {
    pub rho00: f64,
    pub rho11: f64,
    pub rho22: f64,
    pub re12: f64,
    pub im12: f64,
}

impl ThreeLevelState {
    /// Inverse of the generator-vector reconstruction.
    pub fn from_generator_vector(x: &Vector4<f64>) -> Self {
        let rho11 = 0.5 * (x[1] + x[0]);
        let rho22 = 0.5 * (x[1] - x[0]);
        Self {
            rho00: 1.0 - rho11 - rho22,
            rho11,
            rho22,
            re12: 0.5 * x[2],
            im12: -0.5 * x[3],
        }
    }

    pub fn generator_vector(&self) -> Vector4<f64> {
        Vector4::new(
            self.rho11 - self.rho22,
            self.rho11 + self.rho22,
            2.0 * self.re12,
            -2.0 * self.im12,
        )
    }

    pub fn trace(&self) -> f64 {
        self.rho00 + self.rho11 + self.rho22
    }

    /// Populations in [0, 1] and |ρ₁₂|² ≤ ρ₁₁ρ₂₂, with small slack.
    pub fn is_positive(&self) -> bool {
        let pops_ok = [self.rho00, self.rho11, self.rho22]
            .iter()
            .all(|&p| (-1e-10..=1.0 + 1e-10).contains(&p));
        pops_ok && self.re12.powi(2) + self.im12.powi(2) <= self.rho11 * self.rho22 + 1e-8
    }
}

pub fn three_level_steady_state(gen: &ThreeLevelGenerator) -> Result<ThreeLevelState> {
    let mbar = gen.mbar();
    let x = linalg::solve(&mbar, &gen.drive).ok_or_else(|| PtreError::Singular {
        what: "three-level",
        point: format!("drive = {:?}", gen.drive.as_slice()),
    })?;
    check_solution(&mbar, &x, &gen.drive)?;
    let state = ThreeLevelState::from_generator_vector(&x);
    check_state(&state)?;
    Ok(state)
}

/// Steady state with the net absorption balances n·ρ₀₀ − (n+1)·ρᵢᵢ of the
/// pump (i = 1) and trap (i = 2) channels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyState {
    pub state: ThreeLevelState,
    pub pump_balance: f64,
    pub trap_balance: f64,
}

/// Photon-only detailed balance: ρᵢᵢ/ρ₀₀ = n/(n+1), no coherence.
pub fn photon_equilibrium(pump: &PhotonBath, trap: &PhotonBath) -> ThreeLevelState {
    let rp = pump.n / (pump.n + 1.0);
    let rt = trap.n / (trap.n + 1.0);
    let rho00 = 1.0 / (1.0 + rp + rt);
    ThreeLevelState {
        rho00,
        rho11: rp * rho00,
        rho22: rt * rho00,
        re12: 0.0,
        im12: 0.0,
    }
}

/// Solves for x = x_eq + δ with M̄δ = −M_phonon·x_eq, where x_eq is the
/// photon-only equilibrium. The balances vanish at x_eq and are taken from
/// δ alone, so they keep full relative accuracy when the phonon-side
/// coupling is tiny. With a dark channel the plain solve is used.
pub fn solve_steady_state(
    gen: &ThreeLevelGenerator,
    pump: &PhotonBath,
    trap: &PhotonBath,
) -> Result<SteadyState> {
    if !(pump.gamma > 0.0 && trap.gamma > 0.0) {
        let state = three_level_steady_state(gen)?;
        return Ok(SteadyState {
            state,
            pump_balance: pump.n * state.rho00 - (pump.n + 1.0) * state.rho11,
            trap_balance: trap.n * state.rho00 - (trap.n + 1.0) * state.rho22,
        });
    }
    let eq = photon_equilibrium(pump, trap);
    let x_eq = eq.generator_vector();
    let mbar = gen.mbar();
    let rhs = -(gen.phonon * x_eq);
    let dx = linalg::solve(&mbar, &rhs).ok_or_else(|| PtreError::Singular {
        what: "three-level",
        point: format!("drive = {:?}", gen.drive.as_slice()),
    })?;
    let x = x_eq + dx;
    check_solution(&mbar, &x, &gen.drive)?;
    let state = ThreeLevelState::from_generator_vector(&x);
    check_state(&state)?;
    // δρ₀₀ = −δP, δρ₁₁ = (δP + δσ_z)/2, δρ₂₂ = (δP − δσ_z)/2
    let d00 = -dx[1];
    let d11 = 0.5 * (dx[1] + dx[0]);
    let d22 = 0.5 * (dx[1] - dx[0]);
    Ok(SteadyState {
        state,
        pump_balance: pump.n * d00 - (pump.n + 1.0) * d11,
        trap_balance: trap.n * d00 - (trap.n + 1.0) * d22,
    })
}

fn check_solution(mbar: &Matrix4<f64>, x: &Vector4<f64>, drive: &Vector4<f64>) -> Result<()> {
    let residual = (mbar * x - drive).norm();
    let scale = mbar.norm() * x.norm() + drive.norm();
    if residual > 1e-9 * scale {
        return Err(PtreError::Consistency(format!(
            "steady-state residual {residual:e} exceeds 1e-9 of scale {scale:e}"
        )));
    }
    Ok(())
}

fn check_state(state: &ThreeLevelState) -> Result<()> {
    let trace_err = (state.trace() - 1.0).abs();
    if trace_err > 1e-9 {
        return Err(PtreError::Consistency(format!(
            "trace deviates from 1 by {trace_err:e}"
        )));
    }
    if !state.is_positive() {
        log::warn!("steady state fails the positivity diagnostic: {state:?}");
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rates::build_polaron_frame;
    use crate::system::SystemParams;

    fn baths() -> (PhotonBath, PhotonBath) {
        (
            PhotonBath::thermal(0.01, 0.02, 5.0).unwrap(),
            PhotonBath::thermal(0.01, 1.0, 4.5).unwrap(),
        )
    }

    #[test]
    fn occupations() {
        assert!((photon_occupation(0.02, 5.0).unwrap() - 9.508).abs() < 1e-3);
        assert!((photon_occupation(1.0, 4.5).unwrap() - 0.01123).abs() < 1e-5);
        assert!(photon_occupation(800.0, 1.0).unwrap() < 1e-300);
        assert!(photon_occupation(0.0, 1.0).is_err());
        assert!(photon_occupation(1.0, -2.0).is_err());
    }

    #[test]
    fn photon_terms_vanish_when_uncoupled() {
        let frame = build_polaron_frame(&SystemParams::default(), 0.8).unwrap();
        let dark = PhotonBath::with_occupation(0.0, 3.0, 5.0).unwrap();
        let g = assemble_three_level_generator(&RateSet::default(), &frame, &dark, &dark).unwrap();
        assert_eq!(g.drive, Vector4::zeros());
        assert_eq!(g.photon, Matrix4::zeros());
    }

    #[test]
    fn coherent_entries_only_when_rates_vanish() {
        let frame = build_polaron_frame(&SystemParams::default(), 1.0).unwrap();
        let (p, t) = baths();
        let g = assemble_three_level_generator(&RateSet::default(), &frame, &p, &t).unwrap();
        let (s, c) = frame.theta.sin_cos();
        let d = frame.delta;
        let m = g.phonon;
        assert_eq!(m[(2, 3)], d * c);
        assert_eq!(m[(3, 2)], -d * c);
        assert_eq!(m[(0, 3)], -d * s);
        assert_eq!(m[(3, 0)], d * s);
        assert_eq!(g.mbar()[(1, 2)], 0.0);
        assert_eq!(g.mbar()[(1, 3)], 0.0);
    }

    #[test]
    fn zero_kappa_is_rejected() {
        let frame = build_polaron_frame(&SystemParams::default(), 0.0).unwrap();
        let (p, t) = baths();
        assert_eq!(
            assemble_three_level_generator(&RateSet::default(), &frame, &p, &t).unwrap_err(),
            PtreError::SingularFrame(0.0)
        );
    }

    #[test]
    fn decoupled_detailed_balance() {
        let sys = SystemParams::new(5.0, 4.5, 1e-8).unwrap();
        let frame = build_polaron_frame(&sys, 1.0).unwrap();
        let (p, t) = baths();
        let g = assemble_three_level_generator(&RateSet::default(), &frame, &p, &t).unwrap();
        let st = three_level_steady_state(&g).unwrap();
        assert!((st.rho11 / st.rho00 - p.n / (p.n + 1.0)).abs() < 1e-6);
        assert!((st.rho22 / st.rho00 - t.n / (t.n + 1.0)).abs() < 1e-6);
        assert!(st.re12.abs() < 1e-6);
    }

    #[test]
    fn single_transition_balance() {
        let sys = SystemParams::new(5.0, 4.5, 0.0).unwrap();
        let frame = build_polaron_frame(&sys, 1.0).unwrap();
        let (p, _) = baths();
        let off = PhotonBath::with_occupation(0.01, 0.0, 4.5).unwrap();
        let g = assemble_three_level_generator(&RateSet::default(), &frame, &p, &off).unwrap();
        let st = three_level_steady_state(&g).unwrap();
        assert!(st.rho22.abs() < 1e-9);
        assert!((st.rho11 - p.n / (2.0 * p.n + 1.0)).abs() < 1e-9);
    }

    #[test]
    fn split_solve_matches_direct_solve() {
        let sys = SystemParams::default();
        let frame = build_polaron_frame(&sys, 0.6).unwrap();
        let rates = RateSet {
            gamma_z: 0.04,
            gamma_x: 0.04,
            gamma_y: 0.003,
            gamma_zx: 0.0014,
            gamma_xz: 0.0015,
            gamma_xy: 0.003,
            gamma_yx: 0.0005,
            gamma_yz: -0.0005,
            c_z: -0.014,
            c_x: -0.0005,
            c_y: -0.00002,
        };
        let (p, t) = baths();
        let g = assemble_three_level_generator(&rates, &frame, &p, &t).unwrap();
        let direct = three_level_steady_state(&g).unwrap();
        let split = solve_steady_state(&g, &p, &t).unwrap();
        assert!((split.state.generator_vector() - direct.generator_vector()).norm() < 1e-13);
        let bal = p.n * direct.rho00 - (p.n + 1.0) * direct.rho11;
        assert!((split.pump_balance - bal).abs() < 1e-12);
    }

    #[test]
    fn equilibrium_has_zero_balance() {
        let (p, t) = baths();
        let frame = build_polaron_frame(&SystemParams::default(), 1.0).unwrap();
        let g = assemble_three_level_generator(&RateSet::default(), &frame, &p, &t).unwrap();
        let eq = photon_equilibrium(&p, &t);
        assert!((eq.trace() - 1.0).abs() < 1e-15);
        let r = g.photon * eq.generator_vector() - g.drive;
        assert!(r.norm() < 1e-15);
        let ss = solve_steady_state(&g, &p, &t).unwrap();
        assert!(ss.state.trace() > 0.0);
    }

    #[test]
    fn state_vector_round_trip() {
        let s = ThreeLevelState {
            rho00: 0.5,
            rho11: 0.3,
            rho22: 0.2,
            re12: -0.04,
            im12: 0.01,
        };
        let back = ThreeLevelState::from_generator_vector(&s.generator_vector());
        assert!((back.rho00 - s.rho00).abs() < 1e-15);
        assert_eq!((back.re12, back.im12), (s.re12, s.im12));
    }
}
