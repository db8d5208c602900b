use std::f64::consts::PI;
use std::fmt;

use serde::Serialize;

pub const DEFAULT_MAX_DENOMINATOR: u64 = 100;
pub const DEFAULT_RATIONAL_TOL: f64 = 1e-10;

/// An angle recognised as `p π / q` with `gcd(p, q) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RationalAngle {
    pub p: u64,
    pub q: u64,
    /// `|θ/π - p/q|`.
    pub error: f64,
}

impl RationalAngle {
    pub fn radians(&self) -> f64 {
        self.p as f64 * PI / self.q as f64
    }
}

impl fmt::Display for RationalAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{} π", self.p, self.q)
    }
}

/// Walks the continued-fraction convergents of `θ/π` and returns the first
/// one with denominator at most `max_denominator` lying within `tol`.
pub fn detect_rational(theta: f64, max_denominator: u64, tol: f64) -> Option<RationalAngle> {
    let x = theta / PI;
    if !(x > 0.0) || !x.is_finite() {
        return None;
    }
    // Convergent recurrences h_k = a_k h_{k-1} + h_{k-2}, same for k.
    let (mut h_prev, mut h) = (1u64, x.floor() as u64);
    let (mut k_prev, mut k) = (0u64, 1u64);
    let mut frac = x - x.floor();
    loop {
        if h > 0 {
            let error = (x - h as f64 / k as f64).abs();
            if error < tol {
                // Convergents are already in lowest terms.
                return Some(RationalAngle { p: h, q: k, error });
            }
        }
        if frac < 1e-300 {
            return None;
        }
        let inv = 1.0 / frac;
        let a = inv.floor();
        frac = inv - a;
        if a > u64::MAX as f64 / 2.0 {
            return None;
        }
        let a = a as u64;
        let next_k = a.checked_mul(k).and_then(|v| v.checked_add(k_prev))?;
        if next_k > max_denominator {
            return None;
        }
        let next_h = a.checked_mul(h).and_then(|v| v.checked_add(h_prev))?;
        (h_prev, h) = (h, next_h);
        (k_prev, k) = (k, next_k);
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Least common multiple of the denominators, `None` if any angle is
/// unmatched or the list is empty.
pub fn common_denominator<'a>(angles: impl IntoIterator<Item = &'a Option<RationalAngle>>) -> Option<u64> {
    let mut l: Option<u64> = None;
    for a in angles {
        let q = (*a)?.q;
        l = Some(match l {
            None => q,
            Some(l) => l / gcd(l, q) * q,
        });
    }
    l
}
