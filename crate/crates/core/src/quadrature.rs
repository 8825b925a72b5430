//! Adaptive Gauss–Kronrod quadrature over [0, ∞) for integrands that decay
//! on a known time scale and may oscillate at a known frequency.
//!
//! The half line is first covered by panels marching outward until the
//! integrand envelope stays below `tail_threshold` (or the horizon cap is
//! reached); the panel set is then refined globally by bisection of the
//! worst panel until every component meets its tolerance. Integrands are
//! vector valued: integrals sharing one expensive kernel use common nodes.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::TAU;

use crate::error::{PtreError, Result};

/// Kronrod abscissae of the 21-point rule, descending; odd indices are the
/// 10-point Gauss nodes.
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];

const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208745417540,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

/// Fraction of one oscillation period allowed per panel.
const PANELS_PER_PERIOD: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub tail_threshold: f64,
    /// Horizon cap as a multiple of the caller's decay time scale.
    pub max_time_factor: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            tail_threshold: 1e-12,
            max_time_factor: 2000.0,
            max_subdivisions: 200_000,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("rel_tol", self.rel_tol),
            ("abs_tol", self.abs_tol),
            ("tail_threshold", self.tail_threshold),
        ] {
            crate::error::check_positive(name, v)?;
        }
        if !(self.max_time_factor.is_finite() && self.max_time_factor >= 10.0) {
            return Err(PtreError::InvalidParameter {
                name: "max_time_factor",
                value: self.max_time_factor,
                reason: "must be finite and >= 10",
            });
        }
        if self.max_subdivisions == 0 {
            return Err(PtreError::Config("max_subdivisions must be > 0".into()));
        }
        Ok(())
    }
}

/// Result of a (possibly vector valued) semi-infinite integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature<const N: usize> {
    pub value: [f64; N],
    pub error: [f64; N],
    /// End of the integration range actually covered.
    pub horizon: f64,
    /// True when the horizon cap was hit before the envelope fell below
    /// the tail threshold.
    pub truncated: bool,
    /// Integrand envelope on the last panel.
    pub tail_envelope: f64,
    pub evaluations: usize,
}

impl Quadrature<1> {
    pub fn scalar(&self) -> f64 {
        self.value[0]
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment<const N: usize> {
    a: f64,
    b: f64,
    value: [f64; N],
    error: [f64; N],
    abs: [f64; N],
    envelope: f64,
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut e = err.abs();
    if res_asc != 0.0 && e != 0.0 {
        let scale = (200.0 * e / res_asc).powf(1.5);
        e = if scale < 1.0 {
            res_asc * scale
        } else {
            res_asc
        };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        e = e.max(50.0 * f64::EPSILON * res_abs);
    }
    e
}

fn kronrod21<const N: usize, F>(f: &F, a: f64, b: f64) -> Segment<N>
where
    F: Fn(f64) -> [f64; N],
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let mut fv1 = [[0.0; N]; 10];
    let mut fv2 = [[0.0; N]; 10];
    let fc = f(center);

    let mut gauss = [0.0; N];
    let mut kronrod = [0.0; N];
    let mut res_abs = [0.0; N];
    let mut envelope = 0.0f64;
    for i in 0..N {
        kronrod[i] = WGK[10] * fc[i];
        res_abs[i] = (WGK[10] * fc[i]).abs();
        envelope = envelope.max(fc[i].abs());
    }
    for j in 0..10 {
        let x = half * XGK[j];
        let lo = f(center - x);
        let hi = f(center + x);
        for i in 0..N {
            let sum = lo[i] + hi[i];
            kronrod[i] += WGK[j] * sum;
            res_abs[i] += WGK[j] * (lo[i].abs() + hi[i].abs());
            if j % 2 == 1 {
                gauss[i] += WG[j / 2] * sum;
            }
            envelope = envelope.max(lo[i].abs()).max(hi[i].abs());
        }
        fv1[j] = lo;
        fv2[j] = hi;
    }

    let mut value = [0.0; N];
    let mut error = [0.0; N];
    let mut abs = [0.0; N];
    for i in 0..N {
        let mean = 0.5 * kronrod[i];
        let mut res_asc = WGK[10] * (fc[i] - mean).abs();
        for j in 0..10 {
            res_asc += WGK[j] * ((fv1[j][i] - mean).abs() + (fv2[j][i] - mean).abs());
        }
        let err = (kronrod[i] - gauss[i]) * half;
        value[i] = kronrod[i] * half;
        abs[i] = res_abs[i] * half.abs();
        error[i] = rescale_error(err, abs[i], res_asc * half.abs());
    }
    Segment {
        a,
        b,
        value,
        error,
        abs,
        envelope,
    }
}

struct Ranked<const N: usize> {
    score: f64,
    seg: Segment<N>,
}

impl<const N: usize> PartialEq for Ranked<N> {
    fn eq(&self, other: &Self) -> bool {
        self.score.total_cmp(&other.score) == Ordering::Equal
    }
}
impl<const N: usize> Eq for Ranked<N> {}
impl<const N: usize> PartialOrd for Ranked<N> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<const N: usize> Ord for Ranked<N> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.score.total_cmp(&other.score)
    }
}

struct Totals<const N: usize> {
    value: [f64; N],
    error: [f64; N],
    abs: [f64; N],
}

impl<const N: usize> Totals<N> {
    fn from_segments<'a, I: IntoIterator<Item = &'a Segment<N>>>(segs: I) -> Self {
        let mut t = Totals {
            value: [0.0; N],
            error: [0.0; N],
            abs: [0.0; N],
        };
        for s in segs {
            t.add(s, 1.0);
        }
        t
    }

    fn add(&mut self, s: &Segment<N>, sign: f64) {
        for i in 0..N {
            self.value[i] += sign * s.value[i];
            self.error[i] += sign * s.error[i];
            self.abs[i] += sign * s.abs[i];
        }
    }

    fn tolerances(&self, cfg: &QuadratureConfig) -> [f64; N] {
        std::array::from_fn(|i| {
            cfg.abs_tol
                .max(cfg.rel_tol * self.value[i].abs())
                .max(100.0 * f64::EPSILON * self.abs[i])
        })
    }

    fn converged(&self, tol: &[f64; N]) -> bool {
        (0..N).all(|i| self.error[i] <= tol[i])
    }
}

fn score<const N: usize>(seg: &Segment<N>, tol: &[f64; N]) -> f64 {
    (0..N).map(|i| seg.error[i] / tol[i]).fold(0.0, f64::max)
}

/// Integrates a scalar integrand over [0, ∞).
///
/// `time_scale` is the decay scale of the integrand; the horizon is capped
/// at `max_time_factor * time_scale`. `osc_freq` bounds the panel width to
/// an eighth of the oscillation period when positive.
pub fn integrate_semi_infinite<F>(
    integrand: F,
    osc_freq: f64,
    time_scale: f64,
    cfg: &QuadratureConfig,
) -> Result<Quadrature<1>>
where
    F: Fn(f64) -> f64,
{
    integrate_semi_infinite_many(|t| [integrand(t)], osc_freq, time_scale, cfg)
}

/// Vector-valued form of [`integrate_semi_infinite`]: all components share
/// nodes, panels and horizon, and refinement continues until every
/// component meets `max(abs_tol, rel_tol * |I|)` (or its round-off floor).
pub fn integrate_semi_infinite_many<const N: usize, F>(
    integrand: F,
    osc_freq: f64,
    time_scale: f64,
    cfg: &QuadratureConfig,
) -> Result<Quadrature<N>>
where
    F: Fn(f64) -> [f64; N],
{
    cfg.validate()?;
    crate::error::check_positive("time_scale", time_scale)?;
    if !(osc_freq.is_finite() && osc_freq >= 0.0) {
        return Err(PtreError::InvalidParameter {
            name: "osc_freq",
            value: osc_freq,
            reason: "must be finite and >= 0",
        });
    }

    let cap = cfg.max_time_factor * time_scale;
    let (osc_width, period) = if osc_freq > 0.0 {
        (TAU / osc_freq / PANELS_PER_PERIOD, TAU / osc_freq)
    } else {
        (f64::INFINITY, 0.0)
    };
    let quiet_needed = time_scale.max(period);

    let mut segments: Vec<Segment<N>> = Vec::new();
    let mut a = 0.0;
    let mut width = (0.25 * time_scale).min(osc_width);
    let mut quiet = 0.0;
    let mut truncated = false;
    let mut tail_envelope;
    loop {
        let b = (a + width).min(cap);
        let seg = kronrod21(&integrand, a, b);
        tail_envelope = seg.envelope;
        if seg.envelope < cfg.tail_threshold {
            quiet += b - a;
        } else {
            quiet = 0.0;
        }
        segments.push(seg);
        a = b;
        if quiet >= quiet_needed {
            break;
        }
        if a >= cap {
            truncated = true;
            break;
        }
        width = (2.0 * width).min(osc_width);
    }
    let horizon = a;
    if truncated {
        log::debug!(
            "semi-infinite quadrature truncated at t = {horizon} with envelope {tail_envelope:e}"
        );
    }

    let mut evaluations = 21 * segments.len();
    let mut totals = Totals::from_segments(&segments);
    let tol = totals.tolerances(cfg);
    let mut heap: BinaryHeap<Ranked<N>> = segments
        .into_iter()
        .map(|seg| Ranked {
            score: score(&seg, &tol),
            seg,
        })
        .collect();

    let mut subdivisions = 0usize;
    loop {
        let tol = totals.tolerances(cfg);
        if totals.converged(&tol) {
            // re-sum from scratch to shed incremental drift before accepting
            totals = Totals::from_segments(heap.iter().map(|r| &r.seg));
            let tol = totals.tolerances(cfg);
            if totals.converged(&tol) {
                break;
            }
        }
        if subdivisions >= cfg.max_subdivisions {
            let worst = (0..N)
                .max_by(|&i, &j| (totals.error[i] / tol[i]).total_cmp(&(totals.error[j] / tol[j])))
                .unwrap_or(0);
            return Err(PtreError::NonConvergence {
                label: None,
                component: worst,
                estimate: totals.value.get(worst).copied().unwrap_or(0.0),
                error: totals.error.get(worst).copied().unwrap_or(0.0),
                subdivisions,
            });
        }
        let Some(Ranked { seg, .. }) = heap.pop() else {
            break;
        };
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a || mid >= seg.b {
            // interval exhausted at machine precision; keep it and stop refining it
            heap.push(Ranked { score: 0.0, seg });
            subdivisions += 1;
            continue;
        }
        let left = kronrod21(&integrand, seg.a, mid);
        let right = kronrod21(&integrand, mid, seg.b);
        evaluations += 42;
        subdivisions += 1;
        totals.add(&seg, -1.0);
        totals.add(&left, 1.0);
        totals.add(&right, 1.0);
        for s in [left, right] {
            heap.push(Ranked {
                score: score(&s, &tol),
                seg: s,
            });
        }
    }

    Ok(Quadrature {
        value: totals.value,
        error: totals.error,
        horizon,
        truncated,
        tail_envelope,
        evaluations,
    })
}
