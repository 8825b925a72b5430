//! Super-Ohmic phonon bath: spectral density, renormalization factor κ,
//! the complex bath exponent Q(t) and the rate kernels f(t), g(t).
//!
//! Energies are in units of the inter-site coupling J, times in 1/J.

use num_complex::Complex64;

use crate::error::{check_non_negative, check_positive, PtreError, Result};
use crate::special::{trigamma, trigamma_real};

/// Phonon bath with spectral density J(ω) = απ ω³ ω_c⁻² e^(−ω/ω_c).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhononBath {
    alpha: f64,
    omega_c: f64,
    beta_v: f64,
}

/// Q(t) sampled at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathExponent {
    pub t: f64,
    pub value: Complex64,
}

/// Everything the rate integrands need at one time t ≥ 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSample {
    pub q: Complex64,
    /// f(t) = cosh Q(t) + cosh Q(−t) − 2
    pub f: f64,
    /// g(t) = sinh Q(t) + sinh Q(−t)
    pub g: f64,
    pub im_cosh: f64,
    pub im_sinh: f64,
}

impl PhononBath {
    pub fn new(alpha: f64, omega_c: f64, beta_v: f64) -> Result<Self> {
        check_non_negative("alpha", alpha)?;
        check_positive("omega_c", omega_c)?;
        check_positive("beta_v", beta_v)?;
        Ok(Self {
            alpha,
            omega_c,
            beta_v,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn omega_c(&self) -> f64 {
        self.omega_c
    }

    pub fn beta_v(&self) -> f64 {
        self.beta_v
    }

    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        Self::new(alpha, self.omega_c, self.beta_v)
    }

    pub fn with_beta_v(&self, beta_v: f64) -> Result<Self> {
        Self::new(self.alpha, self.omega_c, beta_v)
    }

    /// Decay time scale of the bath correlations, max(β_v, 1/ω_c).
    pub fn time_scale(&self) -> f64 {
        self.beta_v.max(1.0 / self.omega_c)
    }

    /// J(ω) for ω ≥ 0.
    pub fn spectral_density(&self, omega: f64) -> Result<f64> {
        if !(omega >= 0.0) || !omega.is_finite() {
            return Err(PtreError::Domain(format!(
                "spectral density needs omega >= 0, got {omega}"
            )));
        }
        let x = omega / self.omega_c;
        Ok(self.alpha * std::f64::consts::PI * omega * x * x * (-x).exp())
    }

    /// Renormalization factor κ = ⟨cos B⟩ in closed form.
    pub fn kappa(&self) -> f64 {
        let bw = self.beta_v * self.omega_c;
        let bracket = 1.0 - 2.0 * trigamma_real(1.0 / bw) / (bw * bw);
        (0.5 * self.alpha * bracket).exp()
    }

    /// Q(t) in closed form; valid for any real t.
    pub fn exponent(&self, t: f64) -> BathExponent {
        BathExponent {
            t,
            value: self.exponent_value(t),
        }
    }

    fn exponent_value(&self, t: f64) -> Complex64 {
        if self.alpha == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let wt = self.omega_c * t;
        let denom = 1.0 + wt * wt;
        let zero_temp = Complex64::new(-1.0 + wt * wt, -2.0 * wt) / (denom * denom);
        let bw = self.beta_v * self.omega_c;
        let psi = trigamma(Complex64::new(1.0 / bw, t / self.beta_v));
        let thermal = 2.0 * psi.re / (bw * bw);
        self.alpha * (zero_temp + thermal)
    }

    /// (f(t), g(t)) for t ≥ 0, using Q(−t) = conj Q(t).
    pub fn kernels_f_g(&self, t: f64) -> Result<(f64, f64)> {
        if !(t >= 0.0) {
            return Err(PtreError::Domain(format!("kernels need t >= 0, got {t}")));
        }
        let k = self.kernel_sample(t);
        Ok((k.f, k.g))
    }

    pub(crate) fn kernel_sample(&self, t: f64) -> KernelSample {
        let q = self.exponent_value(t);
        // cosh Q − 1 = 2 sinh²(Q/2)
        let half = (q * 0.5).sinh();
        let cosh_m1 = 2.0 * half * half;
        let sinh = q.sinh();
        KernelSample {
            q,
            f: 2.0 * cosh_m1.re,
            g: 2.0 * sinh.re,
            im_cosh: cosh_m1.im,
            im_sinh: sinh.im,
        }
    }
}
