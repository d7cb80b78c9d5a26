//! Evaluators for the axis-family products: the one-branch-perturbed form
//! and the symmetric principal-value (radial-limit) product.

use super::acc::LogAccumulator;
use super::{LogValue, ProductForm};
use crate::numerics::{real_diff_tail, trigamma, zeta_tail};
use crate::sequences::{Axis, FamilySpec, PerturbationSpec, PointIndex};
use crate::{C64, Error, Result};

/// Only positive-real-branch entries (n ≥ 1) are expressible in the
/// one-branch form; anything else needs the radial-limit product.
pub(super) fn tabulated_on_positive_branch_only(pert: &PerturbationSpec) -> bool {
    match pert {
        PerturbationSpec::Tabulated(map) => map
            .keys()
            .all(|k| matches!(k, PointIndex::Axis { axis: Axis::Real, sign: 1, n } if *n >= 1)),
        _ => true,
    }
}

fn tabulated_support_max(pert: &PerturbationSpec) -> u64 {
    match pert {
        PerturbationSpec::Tabulated(map) => map
            .keys()
            .map(|k| match k {
                PointIndex::Axis { n, .. } => *n,
                PointIndex::Lattice { .. } => 0,
            })
            .max()
            .unwrap_or(0),
        _ => 0,
    }
}

fn als_fam() -> FamilySpec {
    FamilySpec::axis_als()
}

/// Ring count for the direct part: R_t = √(2 n0) ≥ max(4|z|, minimum).
fn ring_budget(pert: &PerturbationSpec, zm: f64) -> usize {
    let mut n0 = 32usize.max((8.0 * zm * zm).ceil() as usize);
    n0 = n0.max(tabulated_support_max(pert) as usize);
    if let PerturbationSpec::AlsBetaShift { beta } = pert {
        n0 = n0.max((4.0 * beta.abs()).ceil() as usize + 1);
    }
    n0
}

fn check_cap(n_rings: usize, per_ring: usize, zm: f64, rel_tol: f64) -> Result<()> {
    if n_rings * per_ring > super::POINT_CAP {
        return Err(Error::ToleranceUnreachable {
            rel_tol,
            required_r_t: (2.0 * n_rings as f64).sqrt().max(4.0 * zm),
            required_points: n_rings * per_ring,
            cap: super::POINT_CAP,
        });
    }
    Ok(())
}

pub(super) fn eval_als(form: &ProductForm, z: C64, rel_tol: f64) -> Result<LogValue> {
    let pert = form.sequence().perturbation();
    let fam = als_fam();
    let zm = z.norm();
    let mut n0 = ring_budget(pert, zm);
    loop {
        check_cap(n0, 1, zm, rel_tol)?;
        let mut acc = LogAccumulator::new();
        // Leading factor (z²-1)/2: the 1/2 makes the unperturbed product equal
        // the sine closed form exactly (the grouped factors multiply to
        // 2·sin(πz²/2)/(πz²) without it).
        let z2 = z * z;
        acc.push((z2 - 1.0) * 0.5);
        for n in 1..=n0 as u64 {
            let tn = 2.0 * n as f64;
            let s = tn.sqrt();
            let lam = pert.apply(&fam, &PointIndex::Axis { axis: Axis::Real, sign: 1, n });
            let f = (C64::new(1.0, 0.0) + z2 / tn)
                * (C64::new(1.0 + z.re / s, z.im / s))
                * (C64::new(1.0, 0.0) - z / lam);
            acc.push(f);
        }
        if acc.is_zero {
            return Ok(LogValue::zero_at_point());
        }
        let a = (n0 + 1) as f64;
        let (mut tail, mut bound) = unperturbed_ring_tail(z, a);
        if let PerturbationSpec::AlsBetaShift { beta } = pert {
            let (t, b) = branch_shift_tail(z, a, 2.0 * beta);
            tail += t;
            bound += b;
        }
        if bound <= rel_tol {
            let (lm, ph) = acc.finish();
            return Ok(LogValue::new(lm + tail.re, ph + tail.im, bound));
        }
        let grown = n0.saturating_mul(4);
        if grown * 1 > super::POINT_CAP {
            check_cap(grown, 1, zm, rel_tol)?;
        }
        n0 = grown;
    }
}

/// Σ_{n>n0} log(1 - z⁴/(4n²)) summed through zeta tails.
fn unperturbed_ring_tail(z: C64, a: f64) -> (C64, f64) {
    let w = (z * z) * (z * z) * 0.25;
    let wm = w.norm();
    // Geometric in |w|/a²; a ≥ 8|z|² keeps the ratio ≤ 1/256.
    let q = wm / (a * a);
    debug_assert!(q < 0.5);
    let mut tail = C64::new(0.0, 0.0);
    let mut bound = 0.0;
    let mut wj = C64::new(1.0, 0.0);
    let mut last = f64::INFINITY;
    for j in 1..=24u32 {
        wj *= w;
        let (v, b) = zeta_tail(2.0 * j as f64, a);
        let term = -wj / j as f64 * v;
        tail += term;
        bound += wj.norm() / j as f64 * b;
        last = term.norm();
        if last < 1e-20 * (1.0 + tail.norm()) && j >= 3 {
            break;
        }
    }
    bound += 2.0 * last * q / (1.0 - q);
    (tail, bound)
}

/// Σ_{n>n0} [log(1-z/λ_n) - log(1-z/√(2n))] for λ_n = √(2n+4β):
/// Σ_k z^k/k · 2^{-k/2} · Σ_{n>n0}[n^{-k/2} - (n+2β)^{-k/2}].
fn branch_shift_tail(z: C64, a: f64, c: f64) -> (C64, f64) {
    let zm = z.norm();
    let q = zm / (2.0 * (a + c.min(0.0))).sqrt();
    debug_assert!(q < 0.5, "q={q}");
    let mut tail = C64::new(0.0, 0.0);
    let mut bound = 0.0;
    let mut zk = C64::new(1.0, 0.0);
    let mut last = f64::INFINITY;
    for k in 1..=80u32 {
        zk *= z;
        let s = k as f64 / 2.0;
        let (v, b) = real_diff_tail(s, a, c);
        let scale = 2.0f64.powf(-s);
        let term = zk / k as f64 * (scale * v);
        tail += term;
        bound += zk.norm() / k as f64 * scale * b;
        last = term.norm();
        if last < 1e-20 * (1.0 + tail.norm()) && k >= 8 {
            break;
        }
    }
    bound += 4.0 * last * q / (1.0 - q);
    (tail, bound)
}

pub(super) fn eval_radial(form: &ProductForm, z: C64, rel_tol: f64) -> Result<LogValue> {
    let pert = form.sequence().perturbation();
    let fam = als_fam();
    let zm = z.norm();
    let mut n0 = ring_budget(pert, zm);
    loop {
        check_cap(n0, 4, zm, rel_tol)?;
        let mut acc = LogAccumulator::new();
        for sign in [1i8, -1] {
            let lam = pert.apply(&fam, &PointIndex::Axis { axis: Axis::Real, sign, n: 0 });
            acc.push(C64::new(1.0, 0.0) - z / lam);
        }
        for n in 1..=n0 as u64 {
            for axis in [Axis::Real, Axis::Imag] {
                for sign in [1i8, -1] {
                    let lam = pert.apply(&fam, &PointIndex::Axis { axis, sign, n });
                    acc.push(C64::new(1.0, 0.0) - z / lam);
                }
            }
        }
        if acc.is_zero {
            return Ok(LogValue::zero_at_point());
        }
        let a = (n0 + 1) as f64;
        let (mut tail, mut bound) = radial_symmetric_tail(z, a);
        match pert {
            PerturbationSpec::AlsBetaShift { beta } => {
                let (t, b) = radial_branch_shift_tail(z, a, 2.0 * beta);
                tail += t;
                bound += b;
            }
            PerturbationSpec::AngularPower { s } => {
                let (t, b) = radial_twist_tail(z, a, *s);
                tail += t;
                bound += b;
            }
            _ => {}
        }
        if bound <= rel_tol {
            let (lm, ph) = acc.finish();
            return Ok(LogValue::new(lm + tail.re, ph + tail.im, bound));
        }
        n0 = n0.saturating_mul(4);
    }
}

/// Unperturbed symmetric ring tail: branch sums cancel except k ≡ 0 (mod 4),
/// where Σ_b γ_b^{-k} = 4 (2n)^{-k/2}.
fn radial_symmetric_tail(z: C64, a: f64) -> (C64, f64) {
    let zm = z.norm();
    let q = (zm / (2.0 * a).sqrt()).powi(4);
    debug_assert!(q < 0.5);
    let mut tail = C64::new(0.0, 0.0);
    let mut bound = 0.0;
    let z4 = (z * z) * (z * z);
    let mut zk = C64::new(1.0, 0.0);
    let mut last = f64::INFINITY;
    for i in 1..=20u32 {
        let k = 4 * i;
        zk *= z4;
        let s = k as f64 / 2.0;
        let (v, b) = zeta_tail(s, a);
        let scale = 4.0 * 2.0f64.powf(-s);
        let term = -zk / k as f64 * (scale * v);
        tail += term;
        bound += zk.norm() / k as f64 * scale * b;
        last = term.norm();
        if last < 1e-20 * (1.0 + tail.norm()) && i >= 2 {
            break;
        }
    }
    bound += 2.0 * last * q / (1.0 - q);
    (tail, bound)
}

/// Positive-branch shift correction for the radial-limit product:
/// -Σ_k z^k/k Σ_{n>n0}[λ_n^{-k} - (2n)^{-k/2}], λ_n = √(2n+4β).
fn radial_branch_shift_tail(z: C64, a: f64, c: f64) -> (C64, f64) {
    // Identical series to the genus form's ratio correction: the reference
    // branch terms cancel between the two sums.
    branch_shift_tail(z, a, c)
}

/// Both-real-branch angular twist correction: for even k the ring sum gains
/// 2(2n)^{-k/2}(e^{-ikθ_n} - 1), θ_n = π/n^s.
fn radial_twist_tail(z: C64, a: f64, s: f64) -> (C64, f64) {
    let zm = z.norm();
    let q = (zm / (2.0 * a).sqrt()).powi(2);
    debug_assert!(q < 0.5);
    let mut tail = C64::new(0.0, 0.0);
    let mut bound = 0.0;
    let z2 = z * z;
    let mut zk = C64::new(1.0, 0.0);
    let mut last = f64::INFINITY;
    for i in 1..=40u32 {
        let k = 2 * i;
        zk *= z2;
        let sk = k as f64 / 2.0;
        // Σ_n (2n)^{-k/2}(e^{-ikθ_n} - 1) = Σ_q ((-ikπ)^q/q!)·2^{-k/2}·ζ(k/2+qs)
        let mut inner = C64::new(0.0, 0.0);
        let mut inner_bound = 0.0;
        let mut cq = C64::new(1.0, 0.0);
        let kpi = C64::new(0.0, -(k as f64) * std::f64::consts::PI);
        for qq in 1..=12u32 {
            cq *= kpi / qq as f64;
            let (v, b) = zeta_tail(sk + qq as f64 * s, a);
            inner += cq * v;
            inner_bound += cq.norm() * b;
            if cq.norm() * v < 1e-22 && qq >= 3 {
                break;
            }
        }
        let scale = 2.0 * 2.0f64.powf(-sk);
        let term = -zk / k as f64 * (scale * inner);
        tail += term;
        bound += zk.norm() / k as f64 * scale * inner_bound;
        last = term.norm();
        if last < 1e-20 * (1.0 + tail.norm()) && i >= 3 {
            break;
        }
    }
    bound += 4.0 * last * q / (1.0 - q);
    (tail, bound)
}

/// Integral-comparison bound on the whole dropped log-tail of a bare
/// truncation at radius `r_t` (rings n > r_t²/2 dropped entirely).
pub(super) fn naive_bound(pert: &PerturbationSpec, z: C64, r_t: f64, c_all: f64) -> f64 {
    let zm = z.norm();
    let n_min = (r_t * r_t / 2.0).floor().max(1.0);
    let a = n_min + 1.0;
    // |log(1 - z⁴/4n²)| ≤ 1.2·|z|⁴/(4n²) for n ≥ 2|z|².
    let mut bound = 1.2 * zm.powi(4) / 4.0 * trigamma(a);
    match pert {
        PerturbationSpec::AngularPower { s } => {
            let (v, b) = zeta_tail(s + 0.5, a);
            bound += 16.0 * std::f64::consts::PI * zm * (v + b);
        }
        _ => {
            if c_all > 0.0 {
                let (v, b) = zeta_tail(1.5, a);
                bound += 12.0 * c_all * zm * (v + b);
            }
        }
    }
    bound
}
