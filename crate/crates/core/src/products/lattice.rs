//! Genus-2 evaluators over the lattice family.
//!
//! The backbone (unperturbed) product factors into rows. Row pairs ±n have
//! the closed form
//!
//! ```text
//!   ∏_{m∈ℤ} over rows ±n  =  sin(π(z-in))·sin(π(z+in))/sinh²(πn) · e^{-π²z²/sinh²(πn)}
//! ```
//!
//! which converges to 1 exponentially in n, so only O(|Im z|) rows are
//! evaluated. Row 0 (the ν-shifted row, with convergence exponents taken at
//! the plain integers) is multiplied directly out to m ~ 4|z| and its tail is
//! summed through digamma/trigamma/zeta tails. Perturbations enter as ratio
//! products (1-z/λ)/(1-z/γ) whose tails are Euler-Maclaurin sums of shifted
//! complex powers.

use super::acc::LogAccumulator;
use super::{LogValue, ProductForm};
use crate::numerics::{digamma, lattice_power_tail_bound, log_sin, trigamma, zeta_tail};
use crate::sequences::{PerturbationSpec, PointIndex};
use crate::{C64, Error, Result};
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Mutex;


// B_{2j}/(2j)! for the complex Euler-Maclaurin tails.
const BF: [f64; 4] = [1.0 / 12.0, -1.0 / 720.0, 1.0 / 30_240.0, -1.0 / 1_209_600.0];
const EM_REMAINDER_COEF: f64 = 6.62e-7;

/// Σ_{m≥0} [(a+m+w)^{-k} - (a+m+w+b)^{-k}] with complex offset w, real shift b.
///
/// Returns `(value, certified error bound)`. Requires a - |b| ≥ 2 and
/// |a+w| > |b|.
fn complex_diff_tail(k: u32, a: f64, w: C64, b: f64) -> (C64, f64) {
    if b == 0.0 {
        return (C64::new(0.0, 0.0), 0.0);
    }
    let kf = k as f64;
    let aw = C64::new(a, 0.0) + w;
    let awb = aw + b;
    let integral = if k == 1 {
        (awb / aw).ln()
    } else {
        (aw.powi(1 - k as i32) - awb.powi(1 - k as i32)) / (kf - 1.0)
    };
    let g0 = aw.powi(-(k as i32)) - awb.powi(-(k as i32));
    let mut corr = C64::new(0.0, 0.0);
    for (j, bf) in BF.iter().enumerate() {
        let j = (j + 1) as u32;
        let p = crate::numerics::pochhammer(kf, 2 * j - 1);
        let e = -((k + 2 * j - 1) as i32);
        corr += *bf * p * (aw.powi(e) - awb.powi(e));
    }
    let base = a - b.abs();
    debug_assert!(base >= 2.0);
    let bound = EM_REMAINDER_COEF * crate::numerics::pochhammer(kf, 8) * b.abs() * base.powf(-kf - 8.0);
    (integral + 0.5 * g0 + corr, bound)
}

/// Stable 1/sinh(πn)² and log sinh(πn).
fn sinh_pi_n(n: u32) -> (f64, f64) {
    let x = PI * n as f64;
    let e = (-2.0 * x).exp();
    let log_sinh = x - (2.0f64).ln() + (-e).ln_1p();
    let inv = 2.0 * (-x).exp() / (1.0 - e);
    (inv * inv, log_sinh)
}

/// Unperturbed product over all rows except the leading (0,0) factor.
/// Returns `None` when z sits exactly on a lattice zero.
fn backbone(nu: f64, z: C64, m0: usize, n_rows: u32) -> Option<(C64, f64)> {
    let mut acc = LogAccumulator::new();
    let z2 = z * z;
    // Row 0 direct: (1 - z/(m+ν))(1 + z/m)·e^{z²/m²}; the linear exponents of
    // the ±m pair cancel, the quadratic ones accumulate separately.
    let mut h2 = 0.0;
    for m in 1..=m0 {
        let mf = m as f64;
        h2 += 1.0 / (mf * mf);
        let f = (C64::new(1.0, 0.0) - z / (mf + nu)) * (C64::new(1.0 + z.re / mf, z.im / mf));
        acc.push(f);
    }
    let mut tail = z2 * h2;

    // Row 0 analytic tail.
    let a0 = (m0 + 1) as f64;
    let mut bound = 0.0;
    tail += z * (digamma(a0 + nu) - digamma(a0));
    tail += z2 * 0.5 * (trigamma(a0) - trigamma(a0 + nu));
    let q = z.norm() / a0;
    let mut zk = z * z; // z^k for k = 2, bumped before use
    let mut last = f64::INFINITY;
    for k in 3..=70u32 {
        zk *= z;
        let (za, ba) = zeta_tail(k as f64, a0 + nu);
        let (zb, bb) = zeta_tail(k as f64, a0);
        let sgn = if k % 2 == 0 { 1.0 } else { -1.0 };
        let term = -zk / k as f64 * (za + sgn * zb);
        tail += term;
        bound += zk.norm() / k as f64 * (ba + bb);
        last = term.norm();
        if last < 1e-20 * (1.0 + tail.norm()) && k >= 8 {
            break;
        }
    }
    bound += 4.0 * last * q / (1.0 - q);

    // Row pairs ±n.
    for n in 1..=n_rows {
        let (inv_sq, lsh) = sinh_pi_n(n);
        let w_minus = log_sin(PI * (z - C64::new(0.0, n as f64)));
        let w_plus = log_sin(PI * (z + C64::new(0.0, n as f64)));
        if w_minus.re == f64::NEG_INFINITY || w_plus.re == f64::NEG_INFINITY {
            return None;
        }
        tail += w_minus + w_plus - C64::new(2.0 * lsh, 0.0) - PI * PI * z2 * inv_sq;
    }
    // Dropped rows n > n_rows: |log pair_n| ≤ (2e^{2π|Im z|} + π²|z|²)·4e^{-2πn}.
    let y = z.im.abs();
    let t1 = (2.0f64).ln() + 2.0 * PI * y;
    let t2 = if z.norm() > 0.0 { 2.0 * (PI * z.norm()).ln() } else { f64::NEG_INFINITY };
    let ln_rows = t1.max(t2) + (2.0f64).ln() + (4.04f64).ln() - 2.0 * PI * (n_rows as f64 + 1.0);
    bound += ln_rows.exp() / (1.0 - (-2.0 * PI).exp());

    if acc.is_zero {
        return None;
    }
    let (lm, ph) = acc.finish();
    Some((tail + C64::new(lm, ph), bound))
}

fn budgets(z: C64, pert: &PerturbationSpec) -> (usize, u32) {
    let zm = z.norm();
    let mut m0 = 24usize.max((4.0 * zm).ceil() as usize);
    let mut n_rows = 14u32.max(z.im.abs().ceil() as u32 + 12);
    if let PerturbationSpec::Tabulated(map) = pert {
        for idx in map.keys() {
            if let PointIndex::Lattice { m, n } = idx {
                m0 = m0.max(m.unsigned_abs() as usize + 1);
                n_rows = n_rows.max(n.unsigned_abs() as u32);
            }
        }
    }
    (m0, n_rows)
}

pub(super) fn eval_strip(form: &ProductForm, z: C64, rel_tol: f64) -> Result<LogValue> {
    let fam = form.sequence().family().clone();
    let pert = form.sequence().perturbation().clone();
    let zm = z.norm();
    let (mut m0, mut n_rows) = budgets(z, &pert);
    loop {
        let points = 2 * m0 + n_rows as usize + strip_ratio_points(&pert, m0);
        if points > super::POINT_CAP {
            return Err(Error::ToleranceUnreachable {
                rel_tol,
                required_r_t: m0 as f64,
                required_points: points,
                cap: super::POINT_CAP,
            });
        }
        let mut total = C64::new(0.0, 0.0);
        let mut bound = 0.0;

        // Leading factor (z - λ₀₀); carries no convergence exponent.
        let lam00 = pert.apply(&fam, &PointIndex::Lattice { m: 0, n: 0 });
        let lead = z - lam00;
        if lead.re == 0.0 && lead.im == 0.0 {
            return Ok(LogValue::zero_at_point());
        }
        total += C64::new(lead.norm().ln(), lead.arg());

        let bb = eval_backbone_logged(fam.nu, z, m0, n_rows)?;
        let bb = match bb {
            Some(v) => v,
            None => return Ok(LogValue::zero_at_point()),
        };
        total += bb.0;
        bound += bb.1;

        // Perturbation ratio.
        match &pert {
            PerturbationSpec::None => {}
            PerturbationSpec::Tabulated(map) => {
                let mut acc = LogAccumulator::new();
                for (idx, _) in map.iter() {
                    if matches!(idx, PointIndex::Lattice { m: 0, n: 0 }) {
                        continue; // folded into the leading factor
                    }
                    let gamma = crate::sequences::unperturbed_point(&fam, idx);
                    let lam = pert.apply(&fam, idx);
                    acc.push(C64::new(1.0, 0.0) - z / lam);
                    let denom = C64::new(1.0, 0.0) - z / gamma;
                    acc.push_log(C64::new(-denom.norm().ln(), -denom.arg()));
                }
                if acc.is_zero {
                    return Ok(LogValue::zero_at_point());
                }
                let (lm, ph) = acc.finish();
                total += C64::new(lm, ph);
            }
            PerturbationSpec::StripBetaShift { beta, rows } => {
                let b = beta / *rows as f64;
                for n in 1..=*rows {
                    let (t, bd) = strip_row_ratio(z, n, b, m0);
                    match t {
                        Some(t) => total += t,
                        None => return Ok(LogValue::zero_at_point()),
                    }
                    bound += bd;
                }
            }
            PerturbationSpec::AngularPower { s } => {
                let (t, bd) = angular_row_ratio(z, *s, m0);
                match t {
                    Some(t) => total += t,
                    None => return Ok(LogValue::zero_at_point()),
                }
                bound += bd;
            }
            _ => unreachable!("validated at ProductForm::new"),
        }

        if bound <= rel_tol {
            return Ok(LogValue::new(total.re, total.im, bound));
        }
        m0 *= 2;
        n_rows += 8;
        let _ = zm;
    }
}

fn strip_ratio_points(pert: &PerturbationSpec, m0: usize) -> usize {
    match pert {
        PerturbationSpec::StripBetaShift { rows, .. } => 2 * m0 * *rows as usize,
        PerturbationSpec::AngularPower { .. } => m0,
        PerturbationSpec::Tabulated(map) => 2 * map.len(),
        _ => 0,
    }
}

fn eval_backbone_logged(nu: f64, z: C64, m0: usize, n_rows: u32) -> Result<Option<(C64, f64)>> {
    Ok(backbone(nu, z, m0, n_rows))
}

/// Ratio product of one β-shifted row: direct |m| ≤ m0 plus complex EM tails.
fn strip_row_ratio(z: C64, n: u32, b: f64, m0: usize) -> (Option<C64>, f64) {
    let w = C64::new(0.0, n as f64);
    let mut acc = LogAccumulator::new();
    for m in 1..=m0 as i64 {
        for sgn in [1.0f64, -1.0] {
            let gamma = C64::new(sgn * m as f64, n as f64);
            let lam = C64::new(sgn * m as f64 + sgn * b, n as f64);
            let num = C64::new(1.0, 0.0) - z / lam;
            let den = C64::new(1.0, 0.0) - z / gamma;
            acc.push(num);
            acc.push_log(C64::new(-den.norm().ln(), -den.arg()));
        }
    }
    if acc.is_zero {
        return (None, 0.0);
    }
    // Tails: Σ_{m>m0} Σ_k z^k/k [(m+w)^{-k} - (m+b+w)^{-k}]  (positive side)
    //        Σ_{m>m0} Σ_k z^k/k (-1)^k [(m-w')... ] via conjugate offsets.
    let a = (m0 + 1) as f64;
    let q = z.norm() / a;
    debug_assert!(q < 0.5);
    let mut tail = C64::new(0.0, 0.0);
    let mut bound = 0.0;
    let mut zk = C64::new(1.0, 0.0);
    let mut last = f64::INFINITY;
    for k in 1..=70u32 {
        zk *= z;
        let (tp, bp) = complex_diff_tail(k, a, w, b);
        let (tm, bm) = complex_diff_tail(k, a, -w, b);
        let sgn = if k % 2 == 0 { 1.0 } else { -1.0 };
        let term = zk / k as f64 * (tp + sgn * tm);
        tail += term;
        bound += zk.norm() / k as f64 * (bp + bm);
        last = term.norm();
        if last < 1e-20 * (1.0 + tail.norm()) && k >= 8 {
            break;
        }
    }
    bound += 4.0 * last * q / (1.0 - q);
    let (lm, ph) = acc.finish();
    (Some(tail + C64::new(lm, ph)), bound)
}

/// Ratio product for the twisted row n = 1: λ_m = (m+i)e^{iθ_m}, θ_m = π/m^s,
/// m ≥ 1 only.
fn angular_row_ratio(z: C64, s: f64, m0: usize) -> (Option<C64>, f64) {
    let mut acc = LogAccumulator::new();
    for m in 1..=m0 as i64 {
        let gamma = C64::new(m as f64, 1.0);
        let lam = gamma * C64::from_polar(1.0, PI / (m as f64).powf(s));
        let num = C64::new(1.0, 0.0) - z / lam;
        let den = C64::new(1.0, 0.0) - z / gamma;
        acc.push(num);
        acc.push_log(C64::new(-den.norm().ln(), -den.arg()));
    }
    if acc.is_zero {
        return (None, 0.0);
    }
    // Σ_{m>m0} Σ_k z^k/k (m+i)^{-k}(1 - e^{-ikθ_m}); expand both the binomial
    // (m+i)^{-k} = Σ_l C(k+l-1,l)(-i)^l m^{-k-l} and the exponential in θ_m.
    let a = (m0 + 1) as f64;
    let q = z.norm() / a;
    let mut tail = C64::new(0.0, 0.0);
    let mut bound = 0.0;
    let mut zk = C64::new(1.0, 0.0);
    let mut last = f64::INFINITY;
    for k in 1..=70u32 {
        zk *= z;
        let mut inner = C64::new(0.0, 0.0);
        let mut inner_bound = 0.0;
        // binomial in i/m
        let mut binom = 1.0f64;
        let mut il = C64::new(1.0, 0.0);
        for l in 0..=10u32 {
            if l > 0 {
                binom *= (k + l - 1) as f64 / l as f64;
                il *= C64::new(0.0, -1.0);
            }
            // exponential in θ: 1 - e^{-ikθ} = -Σ_{p≥1} (-ikθ)^p/p!
            let mut cp = C64::new(1.0, 0.0);
            let kpi = C64::new(0.0, -(k as f64) * PI);
            for p in 1..=10u32 {
                cp *= kpi / p as f64;
                let (v, bb) = zeta_tail(k as f64 + l as f64 + p as f64 * s, a);
                let c = binom * il * (-cp);
                inner += -c * v;
                inner_bound += c.norm() * bb;
                if cp.norm() * binom * v < 1e-22 && p >= 3 {
                    break;
                }
            }
            if binom * a.powf(-(l as f64)) < 1e-20 && l >= 3 {
                break;
            }
        }
        // truncation of the l/p loops is inside the stop criteria envelope
        inner_bound += 1e-19;
        let term = zk / k as f64 * inner;
        tail += term;
        bound += zk.norm() / k as f64 * inner_bound;
        last = term.norm();
        if last < 1e-20 * (1.0 + tail.norm()) && k >= 8 {
            break;
        }
    }
    bound += 4.0 * last * q / (1.0 - q);
    let (lm, ph) = acc.finish();
    (Some(tail + C64::new(lm, ph)), bound)
}

/// Cache of the slowly-converging 2-D lattice tail sums
/// S(k, j; R) = Σ_{γ∈ℤ²∖0, |γ|>R} γ^{-k}|γ|^{-2j} (real by conjugation
/// symmetry; zero unless 4 | k).
#[derive(Debug)]
pub(super) struct TailSumCache(Mutex<BTreeMap<u64, [(f64, f64); 12]>>);

const CACHE_KS: [u32; 4] = [4, 8, 12, 16];
const CACHE_JS: [u32; 3] = [1, 2, 3];

impl TailSumCache {
    pub fn new() -> Self {
        TailSumCache(Mutex::new(BTreeMap::new()))
    }

    fn get(&self, r: f64) -> [(f64, f64); 12] {
        let key = r.to_bits();
        if let Some(v) = self.0.lock().unwrap().get(&key) {
            return *v;
        }
        let v = compute_z2_tails(r);
        self.0.lock().unwrap().insert(key, v);
        v
    }
}

fn compute_z2_tails(r: f64) -> [(f64, f64); 12] {
    let r2 = (20.0 * r).max(240.0);
    let mut sums = [(0.0f64, 0.0f64); 12];
    let lim = r2.floor() as i64;
    let rr = r * r;
    let rr2 = r2 * r2;
    for m in -lim..=lim {
        for n in -lim..=lim {
            let q = (m * m + n * n) as f64;
            if q <= rr || q > rr2 || q == 0.0 {
                continue;
            }
            let inv = C64::new(m as f64, -(n as f64)) / q; // 1/γ
            let inv4 = (inv * inv) * (inv * inv);
            let inv_q = 1.0 / q;
            let mut gk = C64::new(1.0, 0.0);
            for (ki, _k) in CACHE_KS.iter().enumerate() {
                gk *= inv4;
                let mut w = 1.0;
                for (ji, _j) in CACHE_JS.iter().enumerate() {
                    w *= inv_q;
                    sums[ki * 3 + ji].0 += gk.re * w;
                }
            }
        }
    }
    for (ki, k) in CACHE_KS.iter().enumerate() {
        for (ji, j) in CACHE_JS.iter().enumerate() {
            sums[ki * 3 + ji].1 = lattice_power_tail_bound((k + 2 * j) as f64, r2);
        }
    }
    sums
}

fn bucketed_radius(zm: f64) -> f64 {
    let need = (4.0 * zm).max(12.0);
    let mut r = 12.0;
    while r < need {
        r *= 2.0;
    }
    r
}

pub(super) fn eval_full(form: &ProductForm, z: C64, rel_tol: f64) -> Result<LogValue> {
    let fam = form.sequence().family().clone();
    let pert = form.sequence().perturbation().clone();
    let beta = match pert {
        PerturbationSpec::FullBetaRadial { beta } => beta,
        PerturbationSpec::None => 0.0,
        PerturbationSpec::Tabulated(_) => {
            // Finite support: reuse the strip path (it handles arbitrary
            // tabulated entries and has no full-plane tail).
            return eval_strip_with_tabulated(form, z, rel_tol);
        }
        _ => unreachable!("validated at ProductForm::new"),
    };
    let zm = z.norm();
    let r_dir = bucketed_radius(zm);
    let points = (PI * r_dir * r_dir) as usize + 2 * (4.0 * zm) as usize + 64;
    if points > super::POINT_CAP {
        return Err(Error::ToleranceUnreachable {
            rel_tol,
            required_r_t: r_dir,
            required_points: points,
            cap: super::POINT_CAP,
        });
    }
    let m0 = 24usize.max((4.0 * zm).ceil() as usize).max(r_dir.ceil() as usize);
    let n_rows = 14u32.max(z.im.abs().ceil() as u32 + 12);

    let mut total = C64::new(0.0, 0.0);
    let mut bound = 0.0;
    let lam00 = pert.apply(&fam, &PointIndex::Lattice { m: 0, n: 0 });
    let lead = z - lam00;
    if lead.re == 0.0 && lead.im == 0.0 {
        return Ok(LogValue::zero_at_point());
    }
    total += C64::new(lead.norm().ln(), lead.arg());
    match eval_backbone_logged(fam.nu, z, m0, n_rows)? {
        Some((t, b)) => {
            total += t;
            bound += b;
        }
        None => return Ok(LogValue::zero_at_point()),
    }
    if beta == 0.0 {
        return Ok(LogValue::new(total.re, total.im, bound));
    }

    // Direct ratio over |γ| ≤ r_dir.
    let mut acc = LogAccumulator::new();
    let lim = r_dir.floor() as i64;
    for n in -lim..=lim {
        if n == 0 {
            let mut m = 1i64;
            while (m as f64 + fam.nu) <= r_dir {
                push_radial_ratio(&mut acc, z, C64::new(m as f64 + fam.nu, 0.0), beta);
                m += 1;
            }
            let mut m = 1i64;
            while (m as f64) <= r_dir {
                push_radial_ratio(&mut acc, z, C64::new(-(m as f64), 0.0), beta);
                m += 1;
            }
        } else {
            let rest = r_dir * r_dir - (n * n) as f64;
            if rest < 0.0 {
                continue;
            }
            let m_lim = rest.sqrt().floor() as i64;
            for m in -m_lim..=m_lim {
                push_radial_ratio(&mut acc, z, C64::new(m as f64, n as f64), beta);
            }
        }
    }
    if acc.is_zero {
        return Ok(LogValue::zero_at_point());
    }
    let (lm, ph) = acc.finish();
    total += C64::new(lm, ph);

    // Analytic tail: Σ_k z^k/k Σ_j c_{k,j} S(k,j;R), c_{k,j} = -(-kβ)^j/j!.
    let z2s = form.lattice_cache.get(r_dir);
    let m_r = r_dir.floor();
    let m_star = (r_dir - fam.nu).floor() + 1.0;
    let mut zk = C64::new(1.0, 0.0);
    for k in 1..=16u32 {
        zk *= z;
        let kf = k as f64;
        let mut ck = 1.0f64; // (kβ)^j/j!
        for j in 1..=3u32 {
            ck *= kf * beta / j as f64;
            // c_{k,j} = -(-kβ)^j/j! = (-1)^{j+1}(kβ)^j/j!
            let coef = if j % 2 == 1 { ck } else { -ck };
            let s_exp = (k + 2 * j) as f64;
            // Z²' part (4|k only) from the cache.
            let (mut s_val, mut s_bnd) = (0.0, 0.0);
            if k % 4 == 0 {
                let ki = (k / 4 - 1) as usize;
                let (v, b) = z2s[ki * 3 + (j - 1) as usize];
                s_val += v;
                s_bnd += b;
            }
            // minus plain row 0, plus ν-shifted row 0.
            let (zp, bp) = zeta_tail(s_exp, m_r + 1.0);
            let (zs, bs) = zeta_tail(s_exp, m_star + fam.nu);
            let parity = if k % 2 == 0 { 1.0 } else { -1.0 };
            // row0(Z²'): (1 + (-1)^k)·ζ ; row0(Γν): ζ(ν-shift) + (-1)^k ζ
            s_val += -(1.0 + parity) * zp + (zs + parity * zp);
            s_bnd += (2.0 + 2.0) * bp.max(bs);
            let term = zk / kf * (coef * s_val);
            total += term;
            bound += zk.norm() / kf * coef.abs() * s_bnd;
        }
        // j > 3 remainder for this k.
        let c4 = (kf * beta.abs()).powi(4) / 24.0;
        let rem_mag = lattice_power_tail_bound(kf + 8.0, r_dir)
            + 2.0 * zeta_tail(kf + 8.0, m_r + 1.0).0;
        bound += 1.1 * zk.norm() / kf * c4 * rem_mag;
    }
    // k > 16 remainder: |γ^{-k}-λ^{-k}| ≤ 2kβ/|γ|^{k+2} summed over the tail.
    let mut rem = 0.0;
    let mut zp = zm.powi(17);
    for k in 17..=24u32 {
        rem += 2.0 * k as f64 * beta.abs() * zp
            * (lattice_power_tail_bound(k as f64 + 2.0, r_dir)
                + 2.0 * zeta_tail(k as f64 + 2.0, m_r + 1.0).0)
            / k as f64;
        zp *= zm;
    }
    bound += 3.0 * rem;

    if bound > rel_tol {
        return Err(Error::ToleranceUnreachable {
            rel_tol,
            required_r_t: 2.0 * r_dir,
            required_points: (PI * 4.0 * r_dir * r_dir) as usize,
            cap: super::POINT_CAP,
        });
    }
    Ok(LogValue::new(total.re, total.im, bound))
}

fn push_radial_ratio(acc: &mut LogAccumulator, z: C64, gamma: C64, beta: f64) {
    let lam = gamma * (beta / gamma.norm_sqr()).exp();
    let num = C64::new(1.0, 0.0) - z / lam;
    let den = C64::new(1.0, 0.0) - z / gamma;
    acc.push(num);
    acc.push_log(C64::new(-den.norm().ln(), -den.arg()));
}

fn eval_strip_with_tabulated(form: &ProductForm, z: C64, rel_tol: f64) -> Result<LogValue> {
    // Tabulated full-plane perturbations have finite support; the strip
    // evaluator's tabulated arm covers them verbatim.
    eval_strip(form, z, rel_tol)
}

/// Integral-comparison bound on the whole dropped log-tail of a bare modulus
/// truncation at `r_t` for the lattice forms.
pub(super) fn naive_bound(form: &ProductForm, z: C64, r_t: f64, c_all: f64) -> f64 {
    let zm = z.norm();
    let nu = form.sequence().family().nu;
    let a = r_t.floor() + 1.0;
    // Genus-2 remainder of the unperturbed factors: |log| ≤ (2/3)|z|³/|γ|³.
    let mut bound = 0.667 * zm.powi(3) * lattice_power_tail_bound(3.0, r_t);
    // Row-0 ν-shift beyond r_t.
    bound += 2.0 * zm * nu * zeta_tail(2.0, a).0 + 4.0 * zm * zm * nu * zeta_tail(3.0, a).0;
    // Perturbation part.
    match form.sequence().perturbation() {
        PerturbationSpec::AngularPower { s } => {
            bound += 4.0 * PI * zm * zeta_tail(1.0 + s, a).0;
        }
        PerturbationSpec::FullBetaRadial { beta } => {
            bound += 16.0 * zm * beta.abs() * lattice_power_tail_bound(3.0, r_t);
        }
        PerturbationSpec::StripBetaShift { rows, .. } => {
            bound += 8.0 * zm * c_all * *rows as f64 * zeta_tail(2.0, a).0;
        }
        PerturbationSpec::Tabulated(_) => {
            bound += 8.0 * zm * c_all * zeta_tail(2.0, a).0;
        }
        PerturbationSpec::None | PerturbationSpec::AlsBetaShift { .. } => {}
    }
    bound
}
