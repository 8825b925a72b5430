//! Trigamma function ψ₁ for real and complex arguments.
//!
//! Upward recurrence ψ₁(z) = ψ₁(z + 1) + 1/z² moves the argument into the
//! region |z| ≥ 8, Re z ≥ 0, where the asymptotic series
//! ψ₁(z) ≈ 1/z + 1/(2z²) + Σ B₂ₖ / z^(2k+1) is accurate to about 1e-15.

use num_complex::Complex64;

/// |z| threshold above which the asymptotic series is used.
const ASYMPTOTIC_RADIUS: f64 = 8.0;

/// Bernoulli numbers B₂, B₄, …, B₁₄.
const BERNOULLI: [f64; 7] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
];

/// Complex trigamma ψ₁(z) = Σₙ (n + z)⁻².
///
/// Returns NaN (in both parts) at the poles z = 0, −1, −2, …
pub fn trigamma(z: Complex64) -> Complex64 {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Complex64::new(f64::NAN, f64::NAN);
    }
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.floor() {
        return Complex64::new(f64::NAN, f64::NAN);
    }

    let mut acc = Complex64::new(0.0, 0.0);
    let mut w = z;
    while w.re < 0.0 || w.norm() < ASYMPTOTIC_RADIUS {
        acc += (w * w).inv();
        w += 1.0;
    }

    let inv = w.inv();
    let inv2 = inv * inv;
    // inv^(2k+1) for k = 1..7
    let mut power = inv2 * inv;
    let mut series = Complex64::new(0.0, 0.0);
    for b in BERNOULLI {
        series += power * b;
        power *= inv2;
    }
    acc + inv + inv2 * 0.5 + series
}

/// Real trigamma ψ₁(x).
pub fn trigamma_real(x: f64) -> f64 {
    trigamma(Complex64::new(x, 0.0)).re
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn close(a: Complex64, re: f64, im: f64, tol: f64) {
        let scale = re.hypot(im);
        let err = (a - Complex64::new(re, im)).norm() / scale;
        assert!(err < tol, "{a} vs {re}+{im}i: rel err {err:e}");
    }

    #[test]
    fn closed_form_real_values() {
        assert!((trigamma_real(1.0) - PI * PI / 6.0).abs() < 1e-14);
        assert!((trigamma_real(0.5) - PI * PI / 2.0).abs() < 1e-14);
    }

    // reference values from mpmath.polygamma(1, z) at 30 digits
    #[test]
    fn high_precision_reference_values() {
        let cases = [
            (0.2, 0.0, 26.267377205423779123, 0.0),
            (3.7, 0.0, 0.3100378576700383191, 0.0),
            (0.2, 1.0, -0.37709881919835588884, -1.0196615412805243668),
            (0.2, -7.5, -0.0053486393262339854371, 0.13331719966181007817),
            (
                2.0,
                30.0,
                0.0016629698110196409656,
                -0.033253249382031545721,
            ),
            (-2.5, 0.5, 1.2458143298605204012, -0.052720600970348519124),
            (0.01, 0.02, -1198.3800359173599911, -1600.0467763903579194),
            (12.0, -3.0, 0.081380174135998137033, 0.021204657613558970732),
        ];
        for (x, y, re, im) in cases {
            close(trigamma(Complex64::new(x, y)), re, im, 1e-13);
        }
    }

    #[test]
    fn poles_are_nan() {
        assert!(trigamma_real(0.0).is_nan());
        assert!(trigamma_real(-3.0).is_nan());
    }

    #[test]
    fn conjugate_symmetry() {
        for &(x, y) in &[(0.2, 0.3), (1.5, 9.0), (0.05, 40.0)] {
            let z = Complex64::new(x, y);
            let d = trigamma(z.conj()) - trigamma(z).conj();
            assert!(d.norm() < 1e-15 * trigamma(z).norm());
        }
    }
}
