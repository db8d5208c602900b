//! Special functions: the Lobachevsky function and its derivatives, plus the
//! gamma-family and distribution helpers used by the statistics module.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::OnceLock;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum SpecialFunctionError {
    #[error("derivative of the Lobachevsky function diverges at {theta}, a multiple of pi")]
    PoleAtMultipleOfPi { theta: f64 },
    #[error("{function}: argument {value} outside its domain")]
    Domain { function: &'static str, value: f64 },
}

/// Number of terms in the small-argument expansion. On |t| <= pi/2 the
/// terms fall off like 4^-k, so 30 terms reach below 1e-18.
const LOBACHEVSKY_TERMS: usize = 30;

/// `zeta(2k) / (k (2k + 1))` for k = 1..=LOBACHEVSKY_TERMS.
fn lobachevsky_coefficients() -> &'static [f64; LOBACHEVSKY_TERMS] {
    static COEFFS: OnceLock<[f64; LOBACHEVSKY_TERMS]> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let mut out = [0.0; LOBACHEVSKY_TERMS];
        for (i, c) in out.iter_mut().enumerate() {
            let k = i + 1;
            let zeta = zeta_even(k);
            *c = zeta / (k as f64 * (2 * k + 1) as f64);
        }
        out
    })
}

/// zeta(2k) for k >= 1.
fn zeta_even(k: usize) -> f64 {
    let pi2 = PI * PI;
    match k {
        1 => pi2 / 6.0,
        2 => pi2 * pi2 / 90.0,
        3 => pi2 * pi2 * pi2 / 945.0,
        4 => pi2 * pi2 * pi2 * pi2 / 9450.0,
        _ => {
            // For 2k >= 10 the tail past j = 64 is below 64^(1-2k) < 1e-16.
            let s = -(2.0 * k as f64);
            (1..=64).rev().map(|j| (j as f64).powf(s)).sum()
        }
    }
}

/// Lobachevsky function `Λ(θ) = -∫₀^θ log|2 sin t| dt`.
///
/// Reduced to `t ∈ [-π/2, π/2]` by π-periodicity and oddness, then evaluated
/// with the logarithmic singularity at zero split off:
///
/// `Λ(t) = t - t log(2t) + t Σ_k ζ(2k) (t/π)^(2k) / (k (2k+1))`
///
/// which comes from integrating the Taylor series of `log(sin t / t)`.
/// `Λ(kπ)` is exactly zero.
pub fn lobachevsky(theta: f64) -> f64 {
    let t = reduce(theta);
    if t == 0.0 {
        return 0.0;
    }
    let (sign, t) = if t < 0.0 { (-1.0, -t) } else { (1.0, t) };
    let x2 = (t / PI) * (t / PI);
    let coeffs = lobachevsky_coefficients();
    let mut series = 0.0;
    // Horner in x2, highest order first.
    for &c in coeffs.iter().rev() {
        series = (series + c) * x2;
    }
    sign * t * (1.0 - (2.0 * t).ln() + series)
}

/// `θ - kπ` with the result in `[-π/2, π/2]`.
fn reduce(theta: f64) -> f64 {
    let k = (theta / PI).round();
    let t = theta - k * PI;
    // Guard against the rounding landing just outside the interval.
    if t > FRAC_PI_2 {
        t - PI
    } else if t < -FRAC_PI_2 {
        t + PI
    } else {
        t
    }
}

/// `Λ'(θ) = -log|2 sin θ|`.
pub fn lobachevsky_deriv(theta: f64) -> Result<f64, SpecialFunctionError> {
    let s = theta.sin();
    if reduce(theta) == 0.0 || s == 0.0 {
        return Err(SpecialFunctionError::PoleAtMultipleOfPi { theta });
    }
    Ok(-(2.0 * s.abs()).ln())
}

/// `Λ''(θ) = -cot θ` on `(0, π)`.
pub fn lobachevsky_second_deriv(theta: f64) -> Result<f64, SpecialFunctionError> {
    if !(theta > 0.0 && theta < PI) {
        return Err(SpecialFunctionError::Domain { function: "lobachevsky_second_deriv", value: theta });
    }
    Ok(-theta.cos() / theta.sin())
}

/// Volume of the regular ideal tetrahedron, `3Λ(π/3)`.
pub fn regular_tetrahedron_volume() -> f64 {
    3.0 * lobachevsky(PI / 3.0)
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(x)` for `x > 0` (Lanczos, g = 7).
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // Reflection keeps the approximation in its accurate range.
        let s = (PI * x).sin();
        return (PI / s).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = LANCZOS_COEFFS[0];
    let t = x + LANCZOS_G + 0.5;
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

fn check_positive(function: &'static str, value: f64) -> Result<(), SpecialFunctionError> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(SpecialFunctionError::Domain { function, value })
    }
}

/// Digamma `ψ(x)`: upward recurrence to `x >= 10`, then the asymptotic series.
pub fn digamma(x: f64) -> Result<f64, SpecialFunctionError> {
    check_positive("digamma", x)?;
    let mut x = x;
    let mut acc = 0.0;
    while x < 10.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    // B2/2, B4/4, ... B12/12 with alternating signs folded in.
    let tail = inv2
        * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0 - inv2 * 691.0 / 32760.0)))));
    Ok(acc + x.ln() - 0.5 / x - tail)
}

/// Trigamma `ψ'(x)`, same strategy as [`digamma`].
pub fn trigamma(x: f64) -> Result<f64, SpecialFunctionError> {
    check_positive("trigamma", x)?;
    let mut x = x;
    let mut acc = 0.0;
    while x < 10.0 {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let tail =
        inv + 0.5 * inv2 + inv * inv2 * (1.0 / 6.0 - inv2 * (1.0 / 30.0 - inv2 * (1.0 / 42.0 - inv2 * (1.0 / 30.0 - inv2 * 5.0 / 66.0))));
    Ok(acc + tail)
}

/// Regularized incomplete beta `I_x(a, b)`.
///
/// Continued fraction (modified Lentz) on whichever of `x` or `1 - x` lies
/// below the mean `(a + 1) / (a + b + 2)`, using `I_x(a,b) = 1 - I_{1-x}(b,a)`
/// for the other side.
pub fn regularized_incomplete_beta(a: f64, b: f64, x: f64) -> Result<f64, SpecialFunctionError> {
    check_positive("regularized_incomplete_beta (a)", a)?;
    check_positive("regularized_incomplete_beta (b)", b)?;
    if !(0.0..=1.0).contains(&x) {
        return Err(SpecialFunctionError::Domain { function: "regularized_incomplete_beta (x)", value: x });
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == 1.0 {
        return Ok(1.0);
    }
    let ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (1.0 - x).ln();
    let front = ln_front.exp();
    if x < (a + 1.0) / (a + b + 2.0) {
        Ok(front * beta_continued_fraction(a, b, x) / a)
    } else {
        Ok(1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b)
    }
}

fn beta_continued_fraction(a: f64, b: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    const EPS: f64 = 1e-16;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=10_000 {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// Kolmogorov distribution tail `Q(λ) = 2 Σ_{k≥1} (-1)^{k-1} exp(-2k²λ²)`.
///
/// For small `λ` the alternating series converges slowly, so there the
/// equivalent theta-function form `1 - √(2π)/λ Σ exp(-(2k-1)²π²/(8λ²))` is
/// summed instead.
pub fn kolmogorov_tail(lambda: f64) -> Result<f64, SpecialFunctionError> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(SpecialFunctionError::Domain { function: "kolmogorov_tail", value: lambda });
    }
    if lambda == 0.0 {
        return Ok(1.0);
    }
    if lambda < 1.0 {
        let mut cdf = 0.0;
        let c = PI * PI / (8.0 * lambda * lambda);
        for k in 1.. {
            let m = (2 * k - 1) as f64;
            let term = (-m * m * c).exp();
            cdf += term;
            if term < 1e-17 {
                break;
            }
        }
        let cdf = (2.0 * PI).sqrt() / lambda * cdf;
        return Ok((1.0 - cdf).clamp(0.0, 1.0));
    }
    let mut sum = 0.0;
    for k in 1.. {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        if term < 1e-12 * 1e-5 {
            break;
        }
        sum += if k % 2 == 1 { term } else { -term };
    }
    Ok((2.0 * sum).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

    #[test]
    fn lobachevsky_special_values() {
        assert_eq!(lobachevsky(0.0), 0.0);
        assert_eq!(lobachevsky(PI), 0.0);
        assert_eq!(lobachevsky(-3.0 * PI), 0.0);
        assert!(lobachevsky(FRAC_PI_2).abs() < 1e-15);
        assert!((lobachevsky(PI / 3.0) - 0.338_313_868_803_217_2).abs() < 1e-13);
        assert!((lobachevsky(PI / 4.0) - 0.457_982_797_088_609_7).abs() < 1e-13);
        assert!((lobachevsky(PI / 6.0) - 0.507_470_803_204_826_7).abs() < 1e-13);
    }

    #[test]
    fn lobachevsky_triplication_and_symmetry() {
        let l3 = lobachevsky(PI / 3.0);
        assert!((lobachevsky(PI / 6.0) - 1.5 * l3).abs() < 1e-12);
        for i in 1..100 {
            let t = i as f64 * 0.0317;
            assert!((lobachevsky(PI - t) + lobachevsky(t)).abs() < 1e-12);
            assert!((lobachevsky(t + PI) - lobachevsky(t)).abs() < 1e-12);
        }
    }

    #[test]
    fn lobachevsky_maximum_is_at_pi_over_6() {
        let peak = lobachevsky(PI / 6.0);
        for i in 1..1000 {
            assert!(lobachevsky(i as f64 * PI / 1000.0) <= peak + 1e-15);
        }
    }

    #[test]
    fn derivative_values() {
        assert!(lobachevsky_deriv(PI / 6.0).unwrap().abs() < 1e-15);
        assert!((lobachevsky_deriv(FRAC_PI_2).unwrap() + 2f64.ln()).abs() < 1e-15);
        assert!((lobachevsky_deriv(PI / 3.0).unwrap() + 0.549_306_144_334_054_8).abs() < 1e-14);
        assert!(matches!(lobachevsky_deriv(0.0), Err(SpecialFunctionError::PoleAtMultipleOfPi { .. })));
        assert!(lobachevsky_deriv(2.0 * PI).is_err());
    }

    #[test]
    fn second_derivative_values() {
        assert!(lobachevsky_second_deriv(FRAC_PI_2).unwrap().abs() < 1e-15);
        assert!((lobachevsky_second_deriv(PI / 4.0).unwrap() + 1.0).abs() < 1e-15);
        assert!((lobachevsky_second_deriv(PI / 3.0).unwrap() + 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!(lobachevsky_second_deriv(0.0).is_err());
        assert!(lobachevsky_second_deriv(PI).is_err());
    }

    #[test]
    fn incomplete_beta_values() {
        assert_eq!(regularized_incomplete_beta(2.0, 3.0, 0.0).unwrap(), 0.0);
        assert_eq!(regularized_incomplete_beta(2.0, 3.0, 1.0).unwrap(), 1.0);
        assert!((regularized_incomplete_beta(1.0, 1.0, 0.5).unwrap() - 0.5).abs() < 1e-14);
        assert!((regularized_incomplete_beta(2.0, 2.0, 0.5).unwrap() - 0.5).abs() < 1e-14);
        // I_x(2, 2) = 3x² - 2x³.
        let x: f64 = 0.3;
        assert!((regularized_incomplete_beta(2.0, 2.0, x).unwrap() - (3.0 * x * x - 2.0 * x.powi(3))).abs() < 1e-14);
        assert!(regularized_incomplete_beta(0.0, 1.0, 0.5).is_err());
        assert!(regularized_incomplete_beta(1.0, 1.0, 1.5).is_err());
    }

    #[test]
    fn digamma_values() {
        assert!((digamma(1.0).unwrap() + EULER_GAMMA).abs() < 1e-13);
        assert!((digamma(2.0).unwrap() - (1.0 - EULER_GAMMA)).abs() < 1e-13);
        assert!((digamma(0.5).unwrap() - (-EULER_GAMMA - 2.0 * 2f64.ln())).abs() < 1e-13);
        assert!(digamma(0.0).is_err());
        assert!(digamma(-1.0).is_err());
    }

    #[test]
    fn trigamma_values() {
        // ψ'(1) = π²/6, ψ'(1/2) = π²/2.
        assert!((trigamma(1.0).unwrap() - PI * PI / 6.0).abs() < 1e-12);
        assert!((trigamma(0.5).unwrap() - PI * PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn ln_gamma_values() {
        assert!(ln_gamma(1.0).abs() < 1e-14);
        assert!(ln_gamma(2.0).abs() < 1e-14);
        assert!((ln_gamma(5.0) - 24f64.ln()).abs() < 1e-13);
        assert!((ln_gamma(0.5) - PI.sqrt().ln()).abs() < 1e-14);
    }

    #[test]
    fn kolmogorov_values() {
        assert_eq!(kolmogorov_tail(0.0).unwrap(), 1.0);
        assert!(kolmogorov_tail(5.0).unwrap() < 1e-10);
        assert!((kolmogorov_tail(1.0).unwrap() - 0.269_999_671_677_2).abs() < 1e-10);
        // Both branches agree where they meet.
        let below = kolmogorov_tail(1.0 - 1e-12).unwrap();
        assert!((below - kolmogorov_tail(1.0).unwrap()).abs() < 1e-10);
        assert!(kolmogorov_tail(-0.1).is_err());
    }
}
