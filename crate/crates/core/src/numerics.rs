//! Scalar numerical kernels shared by the product evaluators: certified
//! Euler-Maclaurin tail sums, digamma/trigamma, and log-domain complex
//! elementary functions.
//!
//! The tail sums return `(value, bound)` pairs where `bound` is a rigorous
//! upper bound on the absolute error of `value` (Euler-Maclaurin remainder,
//! estimated with the standard `2 ζ(2J)/(2π)^{2J} ∫|g^{(2J)}|` envelope and a
//! factor-2 safety margin). Downstream code accumulates these bounds into the
//! certified truncation error of a product evaluation.

use crate::C64;

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

// B_{2j}/(2j)! for j = 1..=4.
const B2_F: f64 = 1.0 / 12.0;
const B4_F: f64 = -1.0 / 720.0;
const B6_F: f64 = 1.0 / 30_240.0;
const B8_F: f64 = -1.0 / 1_209_600.0;

// 4 ζ(8)/(2π)^8, the remainder envelope after J = 4 correction terms
// (includes the factor-2 safety margin).
const EM_REMAINDER_COEF: f64 = 6.62e-7;

/// Rising factorial (s)_j = s (s+1) ... (s+j-1).
pub fn pochhammer(s: f64, j: u32) -> f64 {
    let mut p = 1.0;
    for i in 0..j {
        p *= s + i as f64;
    }
    p
}

/// Tail of the Hurwitz zeta series: Σ_{n≥0} (a+n)^{-s} for s > 1, a ≥ 2.
///
/// Returns `(value, error_bound)`.
pub fn zeta_tail(s: f64, a: f64) -> (f64, f64) {
    debug_assert!(s > 1.0 && a >= 2.0);
    let integral = a.powf(1.0 - s) / (s - 1.0);
    let half = 0.5 * a.powf(-s);
    let mut corr = 0.0;
    let coefs = [B2_F, B4_F, B6_F, B8_F];
    for (j, bf) in coefs.iter().enumerate() {
        let j = (j + 1) as u32;
        corr += bf * pochhammer(s, 2 * j - 1) * a.powf(-s - (2 * j - 1) as f64);
    }
    let bound = EM_REMAINDER_COEF * pochhammer(s, 8) * a.powf(-s - 7.0) / (s + 7.0);
    (integral + half + corr, bound)
}

/// Tail of a difference of shifted power series:
/// Σ_{n≥0} [(a+n)^{-s} - (a+n+c)^{-s}] for s > 0, a ≥ 2, a + c ≥ 1.
///
/// Converges for every s > 0 because the summand is O(n^{-s-1}).
/// Returns `(value, error_bound)`.
pub fn real_diff_tail(s: f64, a: f64, c: f64) -> (f64, f64) {
    debug_assert!(s > 0.0 && a >= 2.0 && a + c >= 1.0);
    if c == 0.0 {
        return (0.0, 0.0);
    }
    let integral = if (s - 1.0).abs() < 1e-12 {
        ((a + c) / a).ln()
    } else {
        (a.powf(1.0 - s) - (a + c).powf(1.0 - s)) / (s - 1.0)
    };
    let g = |x: f64, sig: f64| x.powf(-sig) - (x + c).powf(-sig);
    let half = 0.5 * g(a, s);
    // g^{(2j-1)}(a) = -(s)_{2j-1} [a^{-s-2j+1} - (a+c)^{-s-2j+1}]
    let mut corr = 0.0;
    let coefs = [B2_F, B4_F, B6_F, B8_F];
    for (j, bf) in coefs.iter().enumerate() {
        let j = (j + 1) as u32;
        let p = pochhammer(s, 2 * j - 1);
        corr += bf * p * g(a, s + (2 * j - 1) as f64);
    }
    let base = a.min(a + c);
    let bound = EM_REMAINDER_COEF * pochhammer(s, 8) * c.abs() * base.powf(-s - 8.0);
    (integral + half + corr, bound)
}

/// Digamma function ψ(x) for x > 0.
pub fn digamma(mut x: f64) -> f64 {
    debug_assert!(x > 0.0);
    let mut acc = 0.0;
    while x < 24.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    acc + x.ln() - 0.5 * inv
        - inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 / 240.0)))
}

/// Trigamma function ψ'(x) for x > 0.
pub fn trigamma(mut x: f64) -> f64 {
    debug_assert!(x > 0.0);
    let mut acc = 0.0;
    while x < 24.0 {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    acc + inv * (1.0 + inv * (0.5 + inv * (1.0 / 6.0 - inv2 * (1.0 / 30.0 - inv2 / 42.0))))
}

/// Wrap a phase into (-π, π].
pub fn wrap_phase(t: f64) -> f64 {
    use std::f64::consts::PI;
    if t.is_finite() {
        let mut w = t.rem_euclid(2.0 * PI);
        if w > PI {
            w -= 2.0 * PI;
        }
        if w <= -PI {
            w += 2.0 * PI;
        }
        w
    } else {
        t
    }
}

/// Complex logarithm of sin(w), stable for large |Im w|.
///
/// Returned as a complex number whose real part is log|sin w| and whose
/// imaginary part is a phase of sin w (mod 2π, wrapped into (-π, π]).
pub fn log_sin(w: C64) -> C64 {
    if w.im >= 0.0 {
        // sin w = -e^{-iw} (1 - e^{2iw}) / (2i);  |e^{2iw}| = e^{-2 Im w} ≤ 1.
        let iw = C64::new(-w.im, w.re);
        let rest = (C64::new(1.0, 0.0) - (iw * 2.0).exp()).ln();
        // -log(2i) = -ln2 - iπ/2; -iw contributes (Im w, -i Re w);
        // leading -1 contributes phase π.
        let re = w.im + rest.re - (2.0f64).ln();
        let im = -w.re + rest.im - std::f64::consts::FRAC_PI_2 + std::f64::consts::PI;
        C64::new(re, wrap_phase(im))
    } else {
        let c = log_sin(w.conj());
        C64::new(c.re, wrap_phase(-c.im))
    }
}

/// ln sinh(x) for x > 0, stable for large x.
pub fn log_sinh(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    x - (2.0f64).ln() + (-(-2.0 * x).exp()).ln_1p()
}

/// Upper bound on the number of unit-square lattice points (any fixed
/// translate of Z²) with modulus in [r, r+1).
///
/// Every such point's unit cell fits inside the annulus fattened by √2/2, so
/// the count is at most π[(r+1+s)² - (max(r-s,0))²] with s = √2/2.
pub fn ring_count_bound(r: f64) -> f64 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let outer = r + 1.0 + s;
    let inner = (r - s).max(0.0);
    std::f64::consts::PI * (outer * outer - inner * inner)
}

/// Upper bound on Σ_{|γ| > r} |γ|^{-p} over any unit-square lattice translate,
/// p > 2, via ring counting.
pub fn lattice_power_tail_bound(p: f64, r: f64) -> f64 {
    debug_assert!(p > 2.0 && r >= 1.0);
    // Σ_{k≥⌊r⌋} ring_count_bound(k) k^{-p} ≤ ∫ comparison with margin.
    let r0 = r.floor().max(1.0);
    // ring_count_bound(k) ≤ 2π(k + 2.5); Σ (k+2.5) k^{-p} ≤ ∫_{r0-1}^∞ (x+3.5) x^{-p} dx
    let a = (r0 - 1.0).max(1.0);
    2.0 * std::f64::consts::PI
        * (a.powf(2.0 - p) / (p - 2.0) + 3.5 * a.powf(1.0 - p) / (p - 1.0))
}
