//! Independent numerical oracles for the closed forms and the adaptive
//! quadrature, plus the suite run by `ptre validate`.
//!
//! Nothing here calls into the adaptive engine: κ and Q(t) are integrated
//! over ω with composite Gauss–Legendre, the rate constants with a
//! fixed-grid composite Simpson rule evaluated straight from the
//! complex cosh/sinh Q integrands.

use num_complex::Complex64;

use crate::bath::PhononBath;
use crate::error::Result;
use crate::rates::{build_polaron_frame, compute_rates_with_report, PolaronFrame, RateSet};
use crate::sweep::{solve_point, SweepConfig, CONSERVATION_TOLERANCE};
use crate::system::SystemParams;

/// Nodes and weights of the n-point Gauss–Legendre rule on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Composite Gauss–Legendre over [a, b] split into equal panels.
pub fn composite_gauss<T, F>(f: F, a: f64, b: f64, panels: usize, order: usize) -> T
where
    T: Copy + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T> + Default,
    F: Fn(f64) -> T,
{
    let (x, w) = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut total = T::default();
    for p in 0..panels {
        let lo = a + h * p as f64;
        let mid = lo + 0.5 * h;
        let mut s = T::default();
        for (xi, wi) in x.iter().zip(&w) {
            s = s + f(mid + 0.5 * h * xi) * *wi;
        }
        total = total + s * (0.5 * h);
    }
    total
}

/// Composite Simpson over [a, b] with `n` (even) intervals.
pub fn simpson<T, F>(f: F, a: f64, b: f64, n: usize) -> T
where
    T: Copy + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T> + Default,
    F: Fn(f64) -> T,
{
    assert!(
        n >= 2 && n.is_multiple_of(2),
        "Simpson needs an even interval count"
    );
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let wgt = if i % 2 == 1 { 4.0 } else { 2.0 };
        s = s + f(a + h * i as f64) * wgt;
    }
    s * (h / 3.0)
}

fn omega_cutoff(bath: &PhononBath) -> f64 {
    80.0 * bath.omega_c()
}

/// κ from exp(−∫ J(ω)/(πω²) (n_v + ½) dω).
pub fn kappa_by_integration(bath: &PhononBath) -> f64 {
    let (a, wc, b) = (bath.alpha(), bath.omega_c(), bath.beta_v());
    let upper = omega_cutoff(bath);
    let width = wc.min(1.0 / b) / 8.0;
    let panels = ((upper / width).ceil() as usize).clamp(64, 2_000_000);
    let integral: f64 = composite_gauss(
        |w| {
            let density = a * w / (wc * wc) * (-w / wc).exp();
            density * 0.5 / (0.5 * b * w).tanh()
        },
        0.0,
        upper,
        panels,
        20,
    );
    (-integral).exp()
}

/// Q(t) from its ω-integral definition.
pub fn exponent_by_integration(bath: &PhononBath, t: f64) -> Complex64 {
    let (a, wc, b) = (bath.alpha(), bath.omega_c(), bath.beta_v());
    let upper = omega_cutoff(bath);
    let mut width = wc.min(1.0 / b) / 8.0;
    if t != 0.0 {
        width = width.min(std::f64::consts::PI / (4.0 * t.abs()));
    }
    let panels = ((upper / width).ceil() as usize).max(64);
    composite_gauss(
        |w| {
            let density = a * w / (wc * wc) * (-w / wc).exp();
            let (s, c) = (w * t).sin_cos();
            Complex64::new(density * c / (0.5 * b * w).tanh(), -density * s)
        },
        0.0,
        upper,
        panels,
        20,
    )
}

/// The eleven constants integrated on a fixed grid, with the imaginary
/// residue left over by the complex integrands.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimpsonRates {
    pub rates: RateSet,
    pub imag_residue: [f64; 11],
}

/// Simpson with `n` intervals on each segment between consecutive breaks.
pub fn segmented_simpson<T, F>(f: F, breaks: &[f64], n: usize) -> T
where
    T: Copy + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T> + Default,
    F: Fn(f64) -> T,
{
    breaks
        .windows(2)
        .fold(T::default(), |acc, w| acc + simpson(&f, w[0], w[1], n))
}

/// Near-field segment length, in units of the bath time scale.
pub const NEAR_FIELD: f64 = 50.0;

/// Fixed-grid oracle over [0, horizon] (full-line constants over
/// [−horizon, horizon]), with Q(−t) evaluated directly. The near field
/// |t| < 50·time_scale and the tail each get `intervals` Simpson intervals.
pub fn rates_by_simpson(
    frame: &PolaronFrame,
    bath: &PhononBath,
    sys: &SystemParams,
    horizon: f64,
    intervals: usize,
) -> SimpsonRates {
    let pre = (frame.kappa * sys.coupling).powi(2);
    let (s, c) = frame.theta.sin_cos();
    let (s2, c2) = (s * s, c * c);
    let sin2t = frame.sin_2theta();
    let d = frame.delta;
    let one = Complex64::new(1.0, 0.0);
    let split = (NEAR_FIELD * bath.time_scale()).min(horizon);
    let half_breaks: Vec<f64> = if split < horizon {
        vec![0.0, split, horizon]
    } else {
        vec![0.0, horizon]
    };
    let full_breaks: Vec<f64> = half_breaks
        .iter()
        .rev()
        .map(|t| -t)
        .chain(half_breaks[1..].iter().copied())
        .collect();

    let half_line = segmented_simpson(
        |t| {
            let qp = bath.exponent(t).value;
            let qm = bath.exponent(-t).value;
            let f = qp.cosh() + qm.cosh() - 2.0 * one;
            let g = qp.sinh() + qm.sinh();
            let (sn, cs) = (d * t).sin_cos();
            Vector9([
                cs * (f * c2 + g),
                f * s2 + g * cs,
                f * (c2 * cs + s2),
                f,
                f * cs,
                g * sn,
                f * sn,
                (qp.cosh() - qm.cosh()) * (1.0 - cs),
                Complex64::default(),
            ])
        },
        &half_breaks,
        intervals,
    )
    .0;
    let full_line = segmented_simpson(
        |t| {
            let q = bath.exponent(t).value;
            let sn = (d * t).sin();
            // cosh Q − 1
            let cosh_m1 = q.cosh() - one;
            Vector9([
                (cosh_m1 * c2 + q.sinh()) * sn,
                cosh_m1 * sn,
                Complex64::default(),
                Complex64::default(),
                Complex64::default(),
                Complex64::default(),
                Complex64::default(),
                Complex64::default(),
                Complex64::default(),
            ])
        },
        &full_breaks,
        intervals,
    )
    .0;

    let i = Complex64::i();
    let vals: [Complex64; 11] = [
        half_line[0] * (0.5 * pre),
        half_line[1] * (0.5 * pre),
        half_line[2] * (0.5 * pre),
        half_line[3] * (0.25 * pre * sin2t),
        half_line[4] * (0.25 * pre * sin2t),
        half_line[5] * (0.5 * pre),
        half_line[6] * (-0.5 * pre * c2),
        half_line[6] * (0.25 * pre * sin2t),
        -i * full_line[0] * (0.5 * pre),
        -i * full_line[1] * (0.25 * pre * sin2t),
        -i * half_line[7] * (0.25 * pre * sin2t),
    ];
    SimpsonRates {
        rates: RateSet::from_values(vals.map(|v| v.re)),
        imag_residue: vals.map(|v| v.im),
    }
}

#[derive(Clone, Copy, Default)]
struct Vector9([Complex64; 9]);

impl std::ops::Add for Vector9 {
    type Output = Self;
    fn add(mut self, o: Self) -> Self {
        for (a, b) in self.0.iter_mut().zip(o.0) {
            *a += b;
        }
        self
    }
}

impl std::ops::Mul<f64> for Vector9 {
    type Output = Self;
    fn mul(mut self, k: f64) -> Self {
        for a in self.0.iter_mut() {
            *a *= k;
        }
        self
    }
}

/// Relative difference with a floor for values at rounding level.
pub fn rel_diff(value: f64, reference: f64) -> f64 {
    let scale = reference.abs().max(1e-300);
    (value - reference).abs() / scale
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: String) -> Self {
        Self {
            name: name.into(),
            passed,
            detail,
        }
    }
}

pub const KAPPA_TOLERANCE: f64 = 1e-10;
pub const EXPONENT_TOLERANCE: f64 = 1e-8;
pub const RATE_TOLERANCE: f64 = 1e-6;
pub const SIMPSON_INTERVALS: usize = 1 << 20;

/// (α, ω_c, β_v) sets for the κ oracle.
pub const KAPPA_SETS: [(f64, f64, f64); 10] = [
    (1.0, 5.0, 1.0),
    (0.1, 5.0, 1.0),
    (5.0, 5.0, 1.0),
    (1.0, 5.0, 0.2),
    (1.0, 5.0, 2.0),
    (0.5, 2.0, 1.0),
    (2.0, 10.0, 0.5),
    (1.0, 1.0, 5.0),
    (0.01, 5.0, 1.0),
    (3.0, 3.0, 0.1),
];

/// Twenty sample times for the Q(t) oracle.
pub fn exponent_times() -> Vec<f64> {
    let mut t = vec![0.0];
    t.extend((0..19).map(|k| 0.01 * 10f64.powf(k as f64 * 3.5 / 18.0)));
    t
}

pub fn check_kappa() -> Check {
    let mut worst: f64 = 0.0;
    for (a, wc, b) in KAPPA_SETS {
        let bath = PhononBath::new(a, wc, b).expect("oracle parameter set");
        worst = worst.max(rel_diff(bath.kappa(), kappa_by_integration(&bath)));
    }
    let zero = PhononBath::new(0.0, 5.0, 1.0)
        .expect("oracle parameter set")
        .kappa();
    Check::new(
        "kappa closed form vs omega integral",
        worst <= KAPPA_TOLERANCE && zero == 1.0,
        format!(
            "max rel diff {worst:.3e} over {} sets, kappa(0) = {zero}",
            KAPPA_SETS.len()
        ),
    )
}

pub fn check_exponent(bath: &PhononBath) -> Check {
    let mut worst: f64 = 0.0;
    for t in exponent_times() {
        let num = exponent_by_integration(bath, t);
        let cf = bath.exponent(t).value;
        worst = worst.max((cf - num).norm() / num.norm());
    }
    let q0 = bath.exponent(0.0).value;
    let kdiff = rel_diff((-0.5 * q0.re).exp(), bath.kappa());
    let far = 1000.0 / bath.omega_c();
    let q_far = bath.exponent(far).value.norm();
    Check::new(
        "Q(t) closed form vs omega integral",
        worst <= EXPONENT_TOLERANCE && kdiff <= 1e-12 && q0.im == 0.0 && q_far < 1e-4,
        format!(
            "max rel diff {worst:.3e} at 20 times, kappa vs exp(-Q(0)/2) {kdiff:.1e}, |Q({far})| = {q_far:.2e}"
        ),
    )
}

/// Adaptive-engine constants against the Simpson oracle at one α.
pub fn check_rates(cfg: &SweepConfig, alpha: f64) -> Result<Check> {
    let bath = cfg.phonon.with_alpha(alpha)?;
    let frame = build_polaron_frame(&cfg.system, bath.kappa())?;
    let (rates, quad) = compute_rates_with_report(&frame, &bath, &cfg.system, &cfg.quadrature)?;
    let oracle = rates_by_simpson(&frame, &bath, &cfg.system, quad.horizon, SIMPSON_INTERVALS);
    let mut worst = (0.0, "");
    for ((v, o), name) in rates
        .values()
        .iter()
        .zip(oracle.rates.values())
        .zip(RateSet::NAMES)
    {
        let d = rel_diff(*v, o);
        if d > worst.0 {
            worst = (d, name);
        }
    }
    let imag = oracle
        .imag_residue
        .iter()
        .zip(oracle.rates.values())
        .map(|(i, r)| i.abs() / r.abs().max(1e-300))
        .fold(0.0, f64::max);
    Ok(Check::new(
        format!("rate constants vs Simpson oracle, alpha = {alpha}"),
        worst.0 <= RATE_TOLERANCE,
        format!(
            "max rel diff {:.3e} ({}), horizon {}, oracle imaginary residue {imag:.1e}",
            worst.0, worst.1, quad.horizon
        ),
    ))
}

/// Energy conservation over a 5-point α sweep.
pub fn check_conservation(cfg: &SweepConfig) -> Check {
    let alphas = [1e-3, 0.1, 1.0, 5.0, 20.0];
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    for a in alphas {
        match solve_point(cfg, a, cfg.phonon.beta_v()) {
            Ok(s) => worst = worst.max(s.flux.conservation_residual()),
            Err(e) => failures.push(format!("alpha = {a}: {e}")),
        }
    }
    Check::new(
        "energy conservation, 5-point sweep",
        failures.is_empty() && worst <= CONSERVATION_TOLERANCE,
        if failures.is_empty() {
            format!("max residual {worst:.3e}")
        } else {
            failures.join("; ")
        },
    )
}

/// All oracle checks; errors inside a check turn into failed checks.
pub fn run_suite(cfg: &SweepConfig) -> Vec<Check> {
    let mut out = vec![
        check_kappa(),
        check_exponent(&cfg.phonon.with_alpha(1.0).unwrap_or(cfg.phonon)),
    ];
    for a in [0.1, 1.0, 5.0] {
        out.push(check_rates(cfg, a).unwrap_or_else(|e| {
            Check::new(
                format!("rate constants vs Simpson oracle, alpha = {a}"),
                false,
                e.to_string(),
            )
        }));
    }
    out.push(check_conservation(cfg));
    out
}
