//! The twisted/straight ratio product on the positive integers:
//! φ(z) = ∏_{n≥1} (1 - z/(n e^{iθ_n}))/(1 - z/n) with θ_n = π/n^s.
//!
//! Meromorphic with zeros at n·e^{iθ_n} and poles at the positive integers.
//! In the upper sector it decays like e^{-c·sin(θ)|z|^{1-s}}.

use super::acc::LogAccumulator;
use super::LogValue;
use crate::numerics::zeta_tail;
use crate::{C64, Error, Result};
use std::f64::consts::PI;

/// Log-domain evaluation of φ with certified tail bound ≤ `rel_tol`.
///
/// Requires s ∈ (1/2, 1). Positive integers are poles and are refused.
pub fn phi_optimality(z: C64, s: f64, rel_tol: f64) -> Result<LogValue> {
    if !(s > 0.5 && s < 1.0) {
        return Err(Error::Invalid(format!("phi twist exponent needs s in (1/2,1), got {s}")));
    }
    if !(rel_tol > 0.0) {
        return Err(Error::Invalid("rel_tol must be positive".into()));
    }
    if z.im == 0.0 && z.re >= 0.5 && (z.re - z.re.round()).abs() < 1e-12 * (1.0 + z.re) {
        return Err(Error::PoleAtInteger(z.re));
    }
    let zm = z.norm();
    // Direct factor budget: the p ≥ 2 part of log(1+u_n) is only bounded, so
    // n0 is pushed until that bound alone sits below rel_tol.
    let mut n0 = 64usize.max((4.0 * zm).ceil() as usize);
    loop {
        let p2_scale = 2.0 * (2.0 * zm * PI).powi(2);
        let p2_bound = p2_scale * zeta_tail(2.0 + 2.0 * s, (n0 + 1) as f64).0;
        if p2_bound < 0.25 * rel_tol || n0 >= super::POINT_CAP {
            break;
        }
        n0 *= 2;
    }
    if n0 > super::POINT_CAP {
        return Err(Error::ToleranceUnreachable {
            rel_tol,
            required_r_t: n0 as f64,
            required_points: n0,
            cap: super::POINT_CAP,
        });
    }

    let mut acc = LogAccumulator::new();
    for n in 1..=n0 {
        let nf = n as f64;
        let theta = PI / nf.powf(s);
        let lam = C64::from_polar(nf, theta);
        let num = C64::new(1.0, 0.0) - z / lam;
        let den = C64::new(1.0 - z.re / nf, -z.im / nf);
        acc.push(num);
        acc.push_log(C64::new(-den.norm().ln(), -den.arg()));
    }
    if acc.is_zero {
        return Ok(LogValue::zero_at_point());
    }

    // Tail of Σ log(1 + u_n), u_n = z(1 - e^{-iθ_n})/(n - z):
    // first-order term summed exactly through zeta tails, higher orders bounded.
    let a = (n0 + 1) as f64;
    let mut tail = C64::new(0.0, 0.0);
    let mut bound = 0.0;
    let q = zm / a;
    let mut cq = C64::new(1.0, 0.0);
    let minus_i_pi = C64::new(0.0, -PI);
    for qq in 1..=10u32 {
        cq *= minus_i_pi / qq as f64;
        // Σ_{n>n0} n^{-qs}/(n-z) = Σ_j z^j ζ(qs+1+j, n0+1)
        let mut inner = C64::new(0.0, 0.0);
        let mut zj = C64::new(1.0, 0.0);
        for j in 0..=40u32 {
            let (v, b) = zeta_tail(qq as f64 * s + 1.0 + j as f64, a);
            inner += zj * v;
            bound += cq.norm() * zm.powi(j as i32) * b;
            if zj.norm() * v < 1e-21 && j >= 4 {
                break;
            }
            zj *= z;
        }
        tail += z * (-cq) * inner;
        if cq.norm() * inner.norm() * zm < 1e-21 && qq >= 3 {
            break;
        }
    }
    // Residual of the θ-exponential series (q > 10) and the j-geometric tail.
    bound += zm * PI.powi(11) / 3.99e7 * zeta_tail(11.0 * s + 1.0, a).0 / (1.0 - q);
    bound += 1e-19 * (1.0 + tail.norm());
    // p ≥ 2 of log(1+u): |u_n| ≤ 2π|z| n^{-1-s} for n ≥ 2|z|.
    bound += 2.0 * (2.0 * PI * zm).powi(2) * zeta_tail(2.0 + 2.0 * s, a).0;

    let (lm, ph) = acc.finish();
    Ok(LogValue::new(lm + tail.re, ph + tail.im, bound))
}
