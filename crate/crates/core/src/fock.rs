//! Bargmann transform, reproducing kernels, weighted membership integrals
//! over polar grids, and Gram-matrix diagnostics.
//!
//! The measure throughout is dμ(z) = e^{-π|z|²} dA(z); square-integrability
//! against it is probed at finite radii by [`weighted_membership_integral`]
//! and classified by the curve's flattening behavior.

use crate::numerics::wrap_phase;
use crate::products::{eval_log_product, LogValue, ProductForm};
use crate::sequences::PointSequence;
use crate::{C64, Error, Result};
use rayon::prelude::*;
use std::f64::consts::PI;

/// Discretization parameters for the time-side and plane-side quadratures.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct QuadratureSpec {
    /// Real-line truncation half-width for the Bargmann integral.
    pub time_halfwidth: f64,
    /// Composite midpoint step for the Bargmann integral.
    pub time_step: f64,
    /// Outermost radius of plane-side grids.
    pub radial_max: f64,
    /// Radial resolution cap; ring-aligned cells are subdivided to this step
    /// near the origin where the rings are far apart.
    pub radial_step: f64,
    /// Minimum angular node count (even, ≥ 64). Scaled up automatically with
    /// the radius to resolve the diagonal concentration of the integrands.
    pub angular_count: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            time_halfwidth: 8.0,
            time_step: 1e-3,
            radial_max: 12.0,
            radial_step: 0.05,
            angular_count: 64,
        }
    }
}

impl QuadratureSpec {
    fn validate(&self) -> Result<()> {
        if self.angular_count < 64 || self.angular_count % 2 != 0 {
            return Err(Error::Invalid("angular_count must be even and ≥ 64".into()));
        }
        if !(self.time_halfwidth > 0.0 && self.time_step > 0.0 && self.radial_step > 0.0) {
            return Err(Error::Invalid("quadrature steps must be positive".into()));
        }
        Ok(())
    }
}

/// Gaussian time-frequency shift: ρ_{(x,y)}g(t) = e^{2πiyt}·e^{-π(t-x)²}.
pub fn gabor_atom(x: f64, y: f64, t: f64) -> C64 {
    C64::from_polar((-PI * (t - x) * (t - x)).exp(), 2.0 * PI * y * t)
}

/// Result of a Bargmann-transform quadrature.
#[derive(Debug, Clone, Copy)]
pub struct BargmannValue {
    pub value: C64,
    /// Step-halving estimate of the quadrature error.
    pub quad_error: f64,
    /// Certified bound on the dropped |x| > T tail.
    pub tail_bound: f64,
}

/// Bargmann transform 2^{1/4}·e^{-πz²/2}·∫ f(x) e^{2πxz-πx²} dx by composite
/// midpoint quadrature on [-T, T].
///
/// `f_sup` must bound |f| on ℝ (it certifies the dropped tail). Requires
/// |Re z|, |Im z| ≤ T/2 so the certified tail stays below `tol`.
pub fn bargmann(
    f: &(dyn Fn(f64) -> C64 + Sync),
    f_sup: f64,
    z: C64,
    q: &QuadratureSpec,
    tol: f64,
) -> Result<BargmannValue> {
    q.validate()?;
    let t_half = q.time_halfwidth;
    if z.re.abs() > t_half / 2.0 || z.im.abs() > t_half / 2.0 {
        return Err(Error::Invalid(format!(
            "z = {z} outside the certified quadrature range; increase time_halfwidth above {}",
            2.0 * z.re.abs().max(z.im.abs())
        )));
    }
    let prefactor = C64::from_polar(
        (2.0f64).powf(0.25) * (-PI / 2.0 * (z * z).re).exp(),
        -PI / 2.0 * (z * z).im,
    );
    // Tail: |∫_{|x|>T}| ≤ 2 f_sup e^{π Re(z)²} ∫_{T-|Re z|}^∞ e^{-πu²} du.
    let shift = t_half - z.re.abs();
    let tail_time = 2.0 * f_sup * (PI * z.re * z.re).exp() * (-PI * shift * shift).exp()
        / (2.0 * PI * shift);
    let tail_bound = prefactor.norm() * tail_time;
    if tail_bound > tol {
        return Err(Error::Invalid(format!(
            "certified time-tail {tail_bound:e} above tolerance {tol:e}; increase time_halfwidth"
        )));
    }
    let integral = |h: f64| -> C64 {
        let n = (2.0 * t_half / h).ceil() as usize;
        let mut s = C64::new(0.0, 0.0);
        for i in 0..n {
            let x = -t_half + (i as f64 + 0.5) * h;
            s += f(x) * C64::from_polar((2.0 * PI * x * z.re - PI * x * x).exp(), 2.0 * PI * x * z.im);
        }
        s * h
    };
    let coarse = integral(2.0 * q.time_step);
    let fine = integral(q.time_step);
    Ok(BargmannValue {
        value: prefactor * fine,
        quad_error: (prefactor * (fine - coarse)).norm(),
        tail_bound,
    })
}

/// Reproducing kernel k_z(w) = e^{π z̄ w} in log-domain; `normalized` divides
/// by ‖k_z‖ = e^{π|z|²/2}.
pub fn kernel(z: C64, w: C64, normalized: bool) -> LogValue {
    let e = PI * z.conj() * w;
    let log_mod = if normalized { e.re - PI / 2.0 * z.norm_sqr() } else { e.re };
    LogValue { log_mod, phase: wrap_phase(e.im), tail_bound: 0.0, is_zero: false }
}

/// Fixed probe grid for the shift-identity residual.
const PROBES: [(f64, f64); 12] = [
    (0.0, 0.0),
    (0.5, 0.0),
    (-0.5, 0.0),
    (0.0, 0.5),
    (0.0, -0.5),
    (0.5, 0.5),
    (-0.5, 0.5),
    (1.0, 0.0),
    (0.0, 1.0),
    (-1.0, -0.5),
    (1.2, -0.7),
    (0.3, 1.3),
];

/// Residual of the transform identity
/// 2^{1/4}·B[e^{-iπxy}ρ_{(x,y)}g](w) = e^{πzw - π|z|²/2},  z = x+iy,
/// maximized over the fixed probe grid of w.
pub fn bargmann_shift_identity_residual(z: C64, q: &QuadratureSpec) -> Result<f64> {
    let (x, y) = (z.re, z.im);
    let phase = -PI * x * y;
    let atom = move |t: f64| gabor_atom(x, y, t) * C64::from_polar(1.0, phase);
    let mut worst = 0.0f64;
    for &(wr, wi) in &PROBES {
        let w = C64::new(wr, wi);
        let b = bargmann(&atom, 1.0, w, q, 1e-9)?;
        let lhs = (2.0f64).powf(0.25) * b.value;
        let e = PI * z * w - PI / 2.0 * z.norm_sqr();
        let rhs = C64::from_polar(e.re.exp(), e.im);
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(worst)
}

/// Finite-radius membership data: I(R) = ∫_{|z|≤R} |F|²·weight dμ.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct MembershipCurve {
    pub radii: Vec<f64>,
    pub integral_values: Vec<f64>,
    /// (α, β) of the weight ((1+|z²|)/(1+|Im z²|))^α / (1+|z|^{2β}).
    pub weight_descriptor: (f64, f64),
    pub warning: Option<String>,
}

impl MembershipCurve {
    /// Relative increment (I(2R)-I(R))/I(R) at the largest tested doubling.
    pub fn last_relative_increment(&self) -> Option<f64> {
        let n = self.radii.len();
        if n < 2 {
            return None;
        }
        let (a, b) = (self.integral_values[n - 2], self.integral_values[n - 1]);
        if a <= 0.0 {
            return None;
        }
        Some((b - a) / a)
    }

    /// Ratio of the last two increments; a pure power curve I ~ R^p sampled at
    /// R, 2R, 4R gives 2^p, so 1 marks the log-divergence boundary.
    pub fn increment_ratio(&self) -> Option<f64> {
        let n = self.radii.len();
        if n < 3 {
            return None;
        }
        let d1 = self.integral_values[n - 2] - self.integral_values[n - 3];
        let d2 = self.integral_values[n - 1] - self.integral_values[n - 2];
        if d1 <= 0.0 {
            return None;
        }
        Some(d2 / d1)
    }
}

/// Polar cells with boundaries on the ring radii √(2n) and on every requested
/// curve radius, subdivided to the radial step near the origin. Nodes sit
/// strictly between rings.
fn polar_cells(radial_max: f64, radial_step: f64, radii: &[f64]) -> Vec<(f64, f64)> {
    let mut bounds: Vec<f64> = Vec::new();
    let n_max = (radial_max * radial_max / 2.0).ceil() as u64;
    for j in 0..=n_max {
        let b = (2.0 * j as f64).sqrt();
        if b < radial_max {
            bounds.push(b);
        }
    }
    bounds.extend(radii.iter().copied().filter(|&r| r < radial_max));
    bounds.push(radial_max);
    bounds.sort_by(|a, b| a.partial_cmp(b).unwrap());
    bounds.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    let mut cells = Vec::new();
    for w in bounds.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let k = ((hi - lo) / radial_step).ceil().max(1.0) as usize;
        for i in 0..k {
            let a = lo + (hi - lo) * i as f64 / k as f64;
            let b = lo + (hi - lo) * (i + 1) as f64 / k as f64;
            cells.push((a, b));
        }
    }
    cells
}

fn angular_nodes(base: usize, r: f64) -> usize {
    let need = (2.0 * (7.0 * r).ceil()) as usize;
    base.max(need.max(64)).next_multiple_of(2)
}

/// Generic polar quadrature of exp(log_integrand) over |z| ≤ R for every
/// requested radius. `log_cap` is an optional cheap upper bound used to skip
/// negligible nodes (contributions below e^{-105} of unit scale).
pub fn membership_curve_custom(
    log_integrand: &(dyn Fn(C64) -> f64 + Sync),
    log_cap: Option<&(dyn Fn(C64) -> f64 + Sync)>,
    radii: &[f64],
    q: &QuadratureSpec,
) -> Result<MembershipCurve> {
    q.validate()?;
    if radii.is_empty() || radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Invalid("radii must be nonempty and increasing".into()));
    }
    let r_max = *radii.last().unwrap();
    let cells = polar_cells(r_max, q.radial_step, radii);
    let cell_sums: Vec<(f64, f64)> = cells
        .par_iter()
        .map(|&(lo, hi)| {
            let r = 0.5 * (lo + hi);
            let dr = hi - lo;
            let n_phi = angular_nodes(q.angular_count, r);
            let dphi = 2.0 * PI / n_phi as f64;
            let mut s = 0.0;
            for i in 0..n_phi {
                let phi = (i as f64 + 0.5) * dphi;
                let z = C64::from_polar(r, phi);
                if let Some(cap) = log_cap {
                    if cap(z) < -105.0 {
                        continue;
                    }
                }
                let li = log_integrand(z);
                if li > -700.0 {
                    s += li.min(700.0).exp();
                }
            }
            (hi, s * r * dr * dphi)
        })
        .collect();
    let mut values = Vec::with_capacity(radii.len());
    let mut acc = 0.0;
    let mut ci = 0;
    for &r in radii {
        while ci < cell_sums.len() && cell_sums[ci].0 <= r + 1e-12 {
            acc += cell_sums[ci].1;
            ci += 1;
        }
        values.push(acc);
    }
    let needed = angular_nodes(64, r_max);
    let warning = if q.angular_count < needed {
        Some(format!(
            "angular_count {} below the oscillation-resolving count {needed} at R = {r_max}; \
             automatically rescaled",
            q.angular_count
        ))
    } else {
        None
    };
    Ok(MembershipCurve {
        radii: radii.to_vec(),
        integral_values: values,
        weight_descriptor: (0.0, 0.0),
        warning,
    })
}

fn log_weight(z: C64, alpha: f64, beta: f64) -> f64 {
    let r = z.norm();
    let im_z2 = (z * z).im.abs();
    alpha * ((1.0 + r * r).ln() - (1.0 + im_z2).ln_1p0()) - (1.0 + r.powf(2.0 * beta)).ln()
}

/// ∫_{|z|≤R} |F(z)|²·((1+|z²|)/(1+|Im z²|))^α/(1+|z|^{2β}) dμ(z) per radius.
///
/// `F` is consumed in log-domain; `is_zero` values contribute 0.
pub fn weighted_membership_integral(
    f_log: &(dyn Fn(C64) -> LogValue + Sync),
    alpha: f64,
    beta: f64,
    radii: &[f64],
    q: &QuadratureSpec,
) -> Result<MembershipCurve> {
    let li = move |z: C64| -> f64 {
        let v = f_log(z);
        if v.is_zero {
            return f64::NEG_INFINITY;
        }
        2.0 * v.log_mod - PI * z.norm_sqr() + log_weight(z, alpha, beta)
    };
    let mut curve = membership_curve_custom(&li, None, radii, q)?;
    curve.weight_descriptor = (alpha, beta);
    Ok(curve)
}

/// Upper envelope for axis-family products: |G(z)| ≲ e^{π|Im z²|/2}(2+|z|)^c.
/// Used to skip off-diagonal nodes where the Gaussian-normalized integrand is
/// below e^{-105}.
pub fn axis_product_log_cap(c: f64) -> impl Fn(C64) -> f64 + Sync {
    move |z: C64| {
        let r = z.norm();
        PI * (z * z).im.abs() - PI * r * r + 2.0 * c * (2.0 + r).ln() + 40.0
    }
}

/// Membership curve of |G(z)/(z-λ)|² dμ for a sequence point λ: flattening is
/// the numerically-consistent-with-minimality side (removing λ leaves a zero
/// set whose generating function stays square-integrable).
pub fn minimality_probe(
    form: &ProductForm,
    removed: C64,
    radii: &[f64],
    q: &QuadratureSpec,
) -> Result<MembershipCurve> {
    let seq = form.sequence();
    let on_seq = seq
        .points()
        .iter()
        .any(|p| (p - removed).norm() <= 1e-9 * (1.0 + removed.norm()));
    if !on_seq {
        return Err(Error::NotASequencePoint(removed));
    }
    let li = move |z: C64| -> f64 {
        let v = match eval_log_product(form, z, 1e-6) {
            Ok(v) => v,
            Err(_) => return f64::NEG_INFINITY,
        };
        if v.is_zero {
            return f64::NEG_INFINITY;
        }
        let d = (z - removed).norm();
        if d == 0.0 {
            return f64::NEG_INFINITY;
        }
        2.0 * (v.log_mod - d.ln()) - PI * z.norm_sqr() - (2.0f64).ln()
    };
    let cap = axis_product_log_cap(6.0);
    let mut curve = membership_curve_custom(&li, Some(&cap), radii, q)?;
    curve.weight_descriptor = (0.0, 0.0);
    Ok(curve)
}

/// Finite-section Gram diagnostics of the normalized reproducing kernels
/// {𝕜_λ}: entries ⟨𝕜_{λ_i}, 𝕜_{λ_j}⟩ = e^{πλ̄_iλ_j - π(|λ_i|²+|λ_j|²)/2}.
///
/// This is a heuristic trend indicator: finite sections of a complete and
/// minimal system need not have uniformly bounded inverses, so the numbers
/// are reported, never asserted as a theorem check.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct GramSummary {
    pub n_points: usize,
    pub smallest_eigenvalue: f64,
    pub condition_number: f64,
}

pub fn gram_diagnostics(seq: &PointSequence, r_cut: f64) -> Result<GramSummary> {
    let pts: Vec<C64> = seq.points().iter().copied().filter(|p| p.norm() <= r_cut).collect();
    let n = pts.len();
    if n == 0 {
        return Err(Error::Invalid("no points inside r_cut".into()));
    }
    if n > 2000 {
        return Err(Error::Invalid(format!("{n} points inside r_cut exceeds the 2000 cap")));
    }
    let entry = |i: usize, j: usize| -> C64 {
        let e = PI * pts[i].conj() * pts[j]
            - C64::new(PI / 2.0 * (pts[i].norm_sqr() + pts[j].norm_sqr()), 0.0);
        C64::from_polar(e.re.exp(), e.im)
    };
    // Assemble both triangles independently and verify Hermitian symmetry.
    let mut g = vec![C64::new(0.0, 0.0); n * n];
    let mut asym = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            g[i * n + j] = entry(i, j);
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            asym = asym.max((g[i * n + j] - g[j * n + i].conj()).norm());
        }
    }
    if asym > 1e-12 {
        return Err(Error::NonHermitian(asym));
    }
    // Embed the Hermitian matrix as the real symmetric [[X, -Y], [Y, X]];
    // eigenvalues appear doubled.
    let m = nalgebra::DMatrix::<f64>::from_fn(2 * n, 2 * n, |r, c| {
        let (i, j) = (r % n, c % n);
        match (r < n, c < n) {
            (true, true) | (false, false) => g[i * n + j].re,
            (true, false) => -g[i * n + j].im,
            (false, true) => g[i * n + j].im,
        }
    });
    let eig = nalgebra::SymmetricEigen::new(m);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &e in eig.eigenvalues.iter() {
        lo = lo.min(e);
        hi = hi.max(e);
    }
    Ok(GramSummary {
        n_points: n,
        smallest_eigenvalue: lo,
        condition_number: if lo > 0.0 { hi / lo } else { f64::INFINITY },
    })
}

trait Ln1p0 {
    fn ln_1p0(self) -> f64;
}
impl Ln1p0 for f64 {
    fn ln_1p0(self) -> f64 {
        self.ln_1p()
    }
}
