//! Point-sequence families, multiplicative perturbations, and logarithmic
//! density functionals.
//!
//! Two families are supported:
//!
//! * `LatticeNu` — the square lattice with a shifted zero row: rows `n ≠ 0`
//!   are `m + in`, row 0 is `{m + ν : m ≥ 0} ∪ {-1, -2, ...}` for `ν ∈ (0,1]`.
//!   With `ν = 1` this is exactly `ℤ² \ {0}`.
//! * `AxisALS` — the axis-supported sequence `{±√(2n), ±i√(2n) : n ≥ 1} ∪ {±1}`.
//!
//! A perturbation maps each family point `γ` to `λ_γ = γ·e^{δ_γ}·e^{iθ_γ}`.
//! Parametric kinds carry the closed-form maps; `Tabulated` carries explicit
//! `(δ, θ)` entries per index.

use crate::{C64, Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Sequence family selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    /// Square lattice with ν-shifted zero row.
    LatticeNu,
    /// Axis-supported sequence of ring radii √(2n) plus the two extra points ±1.
    AxisALS,
}

/// Family descriptor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: Family,
    /// Row-0 shift, in (0, 1]. Ignored by `AxisALS`.
    pub nu: f64,
    /// Optional strip height: strip perturbations act on rows 1..=N.
    pub strip_height: Option<u32>,
}

impl FamilySpec {
    pub fn lattice(nu: f64) -> Self {
        FamilySpec { family: Family::LatticeNu, nu, strip_height: None }
    }

    pub fn lattice_strip(nu: f64, n: u32) -> Self {
        FamilySpec { family: Family::LatticeNu, nu, strip_height: Some(n) }
    }

    pub fn axis_als() -> Self {
        FamilySpec { family: Family::AxisALS, nu: 1.0, strip_height: None }
    }

    fn validate(&self) -> Result<()> {
        if self.family == Family::LatticeNu && !(self.nu > 0.0 && self.nu <= 1.0) {
            return Err(Error::NuOutOfRange(self.nu));
        }
        if let Some(n) = self.strip_height {
            if n == 0 {
                return Err(Error::Invalid("strip height must be >= 1".into()));
            }
        }
        Ok(())
    }
}

/// Axis selector for `AxisALS` indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Axis {
    Real,
    Imag,
}

/// Family index of a point.
///
/// For `LatticeNu`, `(m, 0)` with `m ≥ 0` addresses the point `m + ν` and
/// `(m, 0)` with `m < 0` the point `m`; `(m, n)` with `n ≠ 0` addresses `m + in`.
/// For `AxisALS`, `(axis, sign, n)` with `n ≥ 1` addresses `sign·√(2n)` on the
/// chosen axis; `(Real, sign, 0)` addresses the extra points `±1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PointIndex {
    Lattice { m: i64, n: i64 },
    Axis { axis: Axis, sign: i8, n: u64 },
}

/// The maps `γ ↦ (δ_γ, θ_γ)` defining a multiplicative perturbation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum PerturbationSpec {
    /// Identity.
    None,
    /// Explicit per-index (δ, θ) entries; unlisted indices are unmoved.
    Tabulated(BTreeMap<PointIndex, (f64, f64)>),
    /// Rows 1..=rows of the lattice move horizontally:
    /// `λ_{m,n} = m + sign(m)·β/rows + in`, with sign(0) = 0.
    StripBetaShift { beta: f64, rows: u32 },
    /// Radial shift of every point: `λ_γ = γ·e^{β/|γ|²}`.
    FullBetaRadial { beta: f64 },
    /// Positive real branch of `AxisALS`: `√(2n) ↦ √(2n+4β)`; indices with
    /// `2n + 4β ≤ 0` stay unmoved.
    AlsBetaShift { beta: f64 },
    /// Angular twist `θ_n = π/n^s` with δ ≡ 0. On the lattice this targets
    /// row n = 1 (`θ_m = π/m^s` for m ≥ 1, 0 for m ≤ 0); on `AxisALS` it
    /// twists both real branches.
    AngularPower { s: f64 },
}

impl PerturbationSpec {
    pub fn kind_name(&self) -> &'static str {
        match self {
            PerturbationSpec::None => "None",
            PerturbationSpec::Tabulated(_) => "Tabulated",
            PerturbationSpec::StripBetaShift { .. } => "StripBetaShift",
            PerturbationSpec::FullBetaRadial { .. } => "FullBetaRadial",
            PerturbationSpec::AlsBetaShift { .. } => "AlsBetaShift",
            PerturbationSpec::AngularPower { .. } => "AngularPower",
        }
    }

    pub fn compatible_with(&self, family: Family) -> bool {
        match (self, family) {
            (PerturbationSpec::None, _) | (PerturbationSpec::Tabulated(_), _) => true,
            (PerturbationSpec::StripBetaShift { .. }, Family::LatticeNu) => true,
            (PerturbationSpec::FullBetaRadial { .. }, Family::LatticeNu) => true,
            (PerturbationSpec::AlsBetaShift { .. }, Family::AxisALS) => true,
            (PerturbationSpec::AngularPower { .. }, _) => true,
            _ => false,
        }
    }

    fn validate(&self, family: &FamilySpec) -> Result<()> {
        if !self.compatible_with(family.family) {
            return Err(Error::IncompatiblePerturbation {
                kind: self.kind_name().into(),
                family: family.family,
            });
        }
        match self {
            PerturbationSpec::StripBetaShift { rows, .. } => {
                if *rows == 0 {
                    return Err(Error::Invalid("StripBetaShift rows must be >= 1".into()));
                }
                if let Some(n) = family.strip_height {
                    if n != *rows {
                        return Err(Error::Invalid(format!(
                            "strip height mismatch: family declares {n}, perturbation has {rows}"
                        )));
                    }
                }
            }
            PerturbationSpec::AngularPower { s } => {
                if !(*s > 0.0) {
                    return Err(Error::DegeneratePerturbation(format!(
                        "AngularPower needs s > 0, got {s}"
                    )));
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// Perturbed position of the family point with index `idx`.
    pub fn apply(&self, family: &FamilySpec, idx: &PointIndex) -> C64 {
        let gamma = unperturbed_point(family, idx);
        match self {
            PerturbationSpec::None => gamma,
            PerturbationSpec::Tabulated(map) => match map.get(idx) {
                Some(&(d, t)) => gamma * C64::from_polar(d.exp(), t),
                None => gamma,
            },
            PerturbationSpec::StripBetaShift { beta, rows } => match *idx {
                PointIndex::Lattice { m, n } if n >= 1 && n <= *rows as i64 => {
                    C64::new(m as f64 + (m.signum() as f64) * beta / *rows as f64, n as f64)
                }
                _ => gamma,
            },
            PerturbationSpec::FullBetaRadial { beta } => gamma * (beta / gamma.norm_sqr()).exp(),
            PerturbationSpec::AlsBetaShift { beta } => match *idx {
                PointIndex::Axis { axis: Axis::Real, sign: 1, n } if n >= 1 => {
                    let arg = 2.0 * n as f64 + 4.0 * beta;
                    if arg > 0.0 { C64::new(arg.sqrt(), 0.0) } else { gamma }
                }
                _ => gamma,
            },
            PerturbationSpec::AngularPower { s } => match *idx {
                PointIndex::Lattice { m, n: 1 } if m >= 1 => {
                    gamma * C64::from_polar(1.0, std::f64::consts::PI / (m as f64).powf(*s))
                }
                PointIndex::Axis { axis: Axis::Real, sign: _, n } if n >= 1 => {
                    gamma * C64::from_polar(1.0, std::f64::consts::PI / (n as f64).powf(*s))
                }
                _ => gamma,
            },
        }
    }

    /// Multiplicative coordinates (δ_γ, θ_γ) of the point at `idx`.
    pub fn delta_theta(&self, family: &FamilySpec, idx: &PointIndex) -> (f64, f64) {
        match self {
            PerturbationSpec::None => (0.0, 0.0),
            PerturbationSpec::Tabulated(map) => map.get(idx).copied().unwrap_or((0.0, 0.0)),
            PerturbationSpec::AngularPower { s } => match *idx {
                PointIndex::Lattice { m, n: 1 } if m >= 1 => {
                    (0.0, std::f64::consts::PI / (m as f64).powf(*s))
                }
                PointIndex::Axis { axis: Axis::Real, sign: _, n } if n >= 1 => {
                    (0.0, std::f64::consts::PI / (n as f64).powf(*s))
                }
                _ => (0.0, 0.0),
            },
            PerturbationSpec::FullBetaRadial { beta } => {
                let gamma = unperturbed_point(family, idx);
                (beta / gamma.norm_sqr(), 0.0)
            }
            PerturbationSpec::AlsBetaShift { beta } => match *idx {
                PointIndex::Axis { axis: Axis::Real, sign: 1, n } if n >= 1 => {
                    let arg = 1.0 + 2.0 * beta / n as f64;
                    if 2.0 * n as f64 + 4.0 * beta > 0.0 { (0.5 * arg.ln(), 0.0) } else { (0.0, 0.0) }
                }
                _ => (0.0, 0.0),
            },
            PerturbationSpec::StripBetaShift { .. } => {
                let gamma = unperturbed_point(family, idx);
                let lambda = self.apply(family, idx);
                let ratio = lambda / gamma;
                (ratio.norm().ln(), ratio.arg())
            }
        }
    }

    /// sup over the family of |n·δ_n|-type constants used by tail bounds:
    /// returns `(sup |γ|²·|δ_γ|-scale, sup |γ|²·|θ_γ|-scale)` in the family's
    /// natural normalization. `None` when the perturbation has unbounded
    /// constants or no closed form (callers then fall back to table scans).
    pub fn stored_bounds(&self, family: &FamilySpec) -> Option<(f64, f64)> {
        match self {
            PerturbationSpec::None => Some((0.0, 0.0)),
            // n·δ_n for ALS: n·½ln(1+2β/n) ≤ |β| + O(1/n); safe envelope 2|β|.
            PerturbationSpec::AlsBetaShift { beta } => Some((2.0 * beta.abs(), 0.0)),
            // m·δ ≈ β/rows·m²/(m²+n²) ≤ |β|; m·θ ≤ |β| likewise.
            PerturbationSpec::StripBetaShift { beta, .. } => Some((2.0 * beta.abs(), 2.0 * beta.abs())),
            PerturbationSpec::FullBetaRadial { beta } => Some((beta.abs(), 0.0)),
            // n^s·θ_n = π; δ ≡ 0. Report with the power-s scale.
            PerturbationSpec::AngularPower { .. } => Some((0.0, std::f64::consts::PI)),
            PerturbationSpec::Tabulated(map) => {
                let mut ds = 0.0f64;
                let mut ts = 0.0f64;
                for (idx, &(d, t)) in map {
                    let g = unperturbed_point(family, idx).norm();
                    ds = ds.max(g * d.abs());
                    ts = ts.max(g * t.abs());
                }
                Some((ds, ts))
            }
        }
    }
}

/// Unperturbed family point at `idx`.
pub fn unperturbed_point(family: &FamilySpec, idx: &PointIndex) -> C64 {
    match (family.family, idx) {
        (Family::LatticeNu, PointIndex::Lattice { m, n }) => {
            if *n == 0 {
                if *m >= 0 {
                    C64::new(*m as f64 + family.nu, 0.0)
                } else {
                    C64::new(*m as f64, 0.0)
                }
            } else {
                C64::new(*m as f64, *n as f64)
            }
        }
        (Family::AxisALS, PointIndex::Axis { axis, sign, n }) => {
            let r = if *n == 0 { 1.0 } else { (2.0 * *n as f64).sqrt() };
            let s = *sign as f64;
            match axis {
                Axis::Real => C64::new(s * r, 0.0),
                Axis::Imag => C64::new(0.0, s * r),
            }
        }
        _ => panic!("index {idx:?} does not belong to family {:?}", family.family),
    }
}

/// One row of the CSV dump: family index, position, multiplicative coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointRecord {
    pub index: PointIndex,
    pub point: C64,
    pub delta: f64,
    pub theta: f64,
}

/// An ordered, immutable collection of points with family metadata.
///
/// Points are stored sorted by (modulus, argument); the ordering is
/// deterministic so that dumps are reproducible bit for bit.
#[derive(Debug, Clone)]
pub struct PointSequence {
    family: FamilySpec,
    perturbation: PerturbationSpec,
    window: f64,
    coverage: f64,
    points: Vec<C64>,
    indices: Vec<PointIndex>,
    position: BTreeMap<PointIndex, usize>,
}

impl PointSequence {
    pub fn family(&self) -> &FamilySpec {
        &self.family
    }

    pub fn perturbation(&self) -> &PerturbationSpec {
        &self.perturbation
    }

    /// Construction window: every family point with modulus ≤ window is listed.
    pub fn window(&self) -> f64 {
        self.window
    }

    /// Guaranteed coverage radius after perturbation: every family point whose
    /// perturbed modulus is ≤ coverage appears in the list.
    pub fn coverage(&self) -> f64 {
        self.coverage
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Points sorted by (modulus, argument).
    pub fn points(&self) -> &[C64] {
        &self.points
    }

    pub fn indices(&self) -> &[PointIndex] {
        &self.indices
    }

    pub fn position_of(&self, idx: &PointIndex) -> Option<usize> {
        self.position.get(idx).copied()
    }

    pub fn point_at(&self, idx: &PointIndex) -> Option<C64> {
        self.position_of(idx).map(|i| self.points[i])
    }

    /// True if `z` coincides with a listed point up to `tol·(1+|z|)`.
    pub fn contains_point(&self, z: C64, tol: f64) -> bool {
        match dist(z, self, 1.0) {
            Ok(d) => d <= tol * (1.0 + z.norm()),
            Err(_) => self.points.iter().any(|p| (p - z).norm() <= tol * (1.0 + z.norm())),
        }
    }

    pub fn records(&self) -> Vec<PointRecord> {
        self.indices
            .iter()
            .zip(&self.points)
            .map(|(idx, p)| {
                let (delta, theta) = self.perturbation.delta_theta(&self.family, idx);
                PointRecord { index: *idx, point: *p, delta, theta }
            })
            .collect()
    }

    /// Rebuild a sequence from descriptors (CSV re-ingest path). The records
    /// must match the deterministic reconstruction bit for bit.
    pub fn from_parts(
        family: FamilySpec,
        perturbation: PerturbationSpec,
        window: f64,
        records: &[PointRecord],
    ) -> Result<Self> {
        let rebuilt = perturb(&build_sequence(&family, window)?, &perturbation)?;
        if rebuilt.len() != records.len() {
            return Err(Error::Invalid(format!(
                "record count {} does not match reconstruction {}",
                records.len(),
                rebuilt.len()
            )));
        }
        for (rec, (idx, p)) in records.iter().zip(rebuilt.indices.iter().zip(&rebuilt.points)) {
            if rec.index != *idx || rec.point != *p {
                return Err(Error::Invalid(format!(
                    "record for {:?} does not match reconstruction",
                    rec.index
                )));
            }
        }
        Ok(rebuilt)
    }
}

/// Build all family points with modulus ≤ `window`, deterministically ordered.
pub fn build_sequence(spec: &FamilySpec, window: f64) -> Result<PointSequence> {
    spec.validate()?;
    if !(window > 0.0) {
        return Err(Error::BadWindow(window));
    }
    let mut entries: Vec<(PointIndex, C64)> = Vec::new();
    match spec.family {
        Family::LatticeNu => {
            let w2 = window * window;
            let n_max = window.floor() as i64;
            for n in -n_max..=n_max {
                if n == 0 {
                    let mut m = 0i64;
                    while (m as f64 + spec.nu) <= window {
                        entries.push((PointIndex::Lattice { m, n: 0 }, C64::new(m as f64 + spec.nu, 0.0)));
                        m += 1;
                    }
                    let mut m = -1i64;
                    while (-m as f64) <= window {
                        entries.push((PointIndex::Lattice { m, n: 0 }, C64::new(m as f64, 0.0)));
                        m -= 1;
                    }
                } else {
                    let rest = w2 - (n * n) as f64;
                    if rest < 0.0 {
                        continue;
                    }
                    let m_lim = rest.sqrt().floor() as i64;
                    for m in -m_lim..=m_lim {
                        if ((m * m + n * n) as f64) <= w2 {
                            entries.push((PointIndex::Lattice { m, n }, C64::new(m as f64, n as f64)));
                        }
                    }
                }
            }
        }
        Family::AxisALS => {
            if window >= 1.0 {
                for sign in [1i8, -1] {
                    entries.push((
                        PointIndex::Axis { axis: Axis::Real, sign, n: 0 },
                        C64::new(sign as f64, 0.0),
                    ));
                }
            }
            let n_max = (window * window / 2.0).floor() as u64;
            for n in 1..=n_max {
                let r = (2.0 * n as f64).sqrt();
                if r > window {
                    continue;
                }
                for sign in [1i8, -1] {
                    entries.push((PointIndex::Axis { axis: Axis::Real, sign, n }, C64::new(sign as f64 * r, 0.0)));
                    entries.push((PointIndex::Axis { axis: Axis::Imag, sign, n }, C64::new(0.0, sign as f64 * r)));
                }
            }
        }
    }
    finish(spec.clone(), PerturbationSpec::None, window, window, entries, true)
}

/// Apply a perturbation, preserving indices. Coincident points may arise at
/// exact threshold parameters (a genuine multiplicity-two zero downstream).
pub fn perturb(seq: &PointSequence, p: &PerturbationSpec) -> Result<PointSequence> {
    p.validate(&seq.family)?;
    if let PerturbationSpec::Tabulated(map) = p {
        for idx in map.keys() {
            if seq.position_of(idx).is_none() {
                return Err(Error::Invalid(format!(
                    "tabulated entry {idx:?} is outside the built window"
                )));
            }
        }
    }
    let entries: Vec<(PointIndex, C64)> = seq
        .indices
        .iter()
        .map(|idx| (*idx, p.apply(&seq.family, idx)))
        .collect();
    let coverage = perturbed_coverage(&seq.family, p, seq.window);
    finish(seq.family.clone(), p.clone(), seq.window, coverage, entries, false)
}

fn perturbed_coverage(family: &FamilySpec, p: &PerturbationSpec, window: f64) -> f64 {
    match p {
        PerturbationSpec::None | PerturbationSpec::Tabulated(_) | PerturbationSpec::AngularPower { .. } => window,
        PerturbationSpec::StripBetaShift { beta, rows } => window - beta.abs() / *rows as f64,
        PerturbationSpec::AlsBetaShift { beta } => window - 2.0 * beta.abs() / window,
        PerturbationSpec::FullBetaRadial { beta } => {
            let _ = family;
            window * (-(beta.abs()) / (window * window)).exp()
        }
    }
}

fn finish(
    family: FamilySpec,
    perturbation: PerturbationSpec,
    window: f64,
    coverage: f64,
    mut entries: Vec<(PointIndex, C64)>,
    forbid_duplicates: bool,
) -> Result<PointSequence> {
    entries.sort_by(|a, b| {
        let (ma, aa) = (a.1.norm(), a.1.arg());
        let (mb, ab) = (b.1.norm(), b.1.arg());
        ma.partial_cmp(&mb).unwrap().then(aa.partial_cmp(&ab).unwrap())
    });
    if forbid_duplicates {
        for w in entries.windows(2) {
            if w[0].1 == w[1].1 {
                return Err(Error::Invalid(format!(
                    "duplicate point {} at indices {:?}, {:?}",
                    w[0].1, w[0].0, w[1].0
                )));
            }
        }
    }
    let mut position = BTreeMap::new();
    for (i, (idx, _)) in entries.iter().enumerate() {
        position.insert(*idx, i);
    }
    let (indices, points) = entries.into_iter().unzip();
    Ok(PointSequence { family, perturbation, window, coverage, points, indices, position })
}

/// Distance mode for [`separation_margin`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeparationMode {
    /// Minimum pairwise Euclidean distance.
    Absolute,
    /// Minimum of |λ−λ'|·min(|λ|,|λ'|). This normalizes the ring-type gap
    /// ~1/√(2n) by the modulus √(2n); it equals the index-normalized constant
    /// c/min{√m,√n} up to the fixed factor √2.
    AlsScaled,
}

/// Minimum pairwise separation of a sequence; +∞ for fewer than two points.
pub fn separation_margin(seq: &PointSequence, mode: SeparationMode) -> Result<f64> {
    if mode == SeparationMode::AlsScaled && seq.family.family != Family::AxisALS {
        return Err(Error::Invalid("AlsScaled separation applies to AxisALS only".into()));
    }
    if seq.len() < 2 {
        return Ok(f64::INFINITY);
    }
    let pts = &seq.points;
    let mut best = f64::INFINITY;
    for i in 0..pts.len() {
        let mi = pts[i].norm();
        for j in (i + 1)..pts.len() {
            let mj = pts[j].norm();
            // Points are modulus-sorted: once the modulus gap alone exceeds the
            // current best, later j cannot improve it.
            let gap = mj - mi;
            let gap_score = match mode {
                SeparationMode::Absolute => gap,
                SeparationMode::AlsScaled => gap * mi,
            };
            if gap_score >= best {
                break;
            }
            let d = (pts[i] - pts[j]).norm();
            let score = match mode {
                SeparationMode::Absolute => d,
                SeparationMode::AlsScaled => d * mi.min(mj),
            };
            if score < best {
                best = score;
            }
        }
    }
    Ok(best)
}

/// Exact global distance from `z` to the sequence.
///
/// Requires `coverage ≥ |z| + guard` with `guard ≥ 1`: every omitted family
/// point then lies farther than `guard`, while some retained point is closer,
/// so the windowed minimum is the global one. Refuses rather than silently
/// truncating.
pub fn dist(z: C64, seq: &PointSequence, guard: f64) -> Result<f64> {
    let zm = z.norm();
    let guard = guard.max(1.0);
    if seq.coverage < zm + guard {
        return Err(Error::WindowTooSmall {
            window: seq.coverage,
            z_mod: zm,
            guard,
            required: zm + guard,
        });
    }
    let pts = &seq.points;
    // Points are modulus-sorted: expand outward from the insertion point of |z|.
    let mut lo = pts.partition_point(|p| p.norm() < zm);
    let mut hi = lo;
    let mut best = f64::INFINITY;
    loop {
        let lo_gap = if lo > 0 { zm - pts[lo - 1].norm() } else { f64::INFINITY };
        let hi_gap = if hi < pts.len() { pts[hi].norm() - zm } else { f64::INFINITY };
        if lo_gap.min(hi_gap) >= best {
            break;
        }
        if lo_gap <= hi_gap {
            lo -= 1;
            best = best.min((pts[lo] - z).norm());
        } else {
            best = best.min((pts[hi] - z).norm());
            hi += 1;
        }
    }
    // The coverage precondition guarantees omitted points are farther than
    // (coverage - |z|); verify the retained minimum certifies globality.
    if best > seq.coverage - zm {
        return Err(Error::WindowTooSmall {
            window: seq.coverage,
            z_mod: zm,
            guard,
            required: zm + best,
        });
    }
    Ok(best)
}

/// Finite-cutoff estimates of the logarithmic density functionals.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DensityReport {
    /// Running max of the normalized sums over the top half of the cutoffs.
    pub delta_sup: f64,
    /// Running min over the same cutoffs.
    pub delta_inf: f64,
    /// What the cutoff indexes: "index m" (strip), "radius R" (full plane),
    /// "ring index n" (axis family).
    pub cutoff_kind: String,
    /// Raw partial sums (cutoff, Σδ).
    pub partial_sums: Vec<(f64, f64)>,
    /// Normalized sums (cutoff, Σδ / log cutoff).
    pub normalized: Vec<(f64, f64)>,
    /// Ring sums Δ_n for the axis family (capped list).
    pub ring_sums: Vec<f64>,
    /// Windowed supremum sup (n+1)/M·|Σ_{k=n+1}^{n+M} δ_k| on the natural
    /// one-dimensional sequence.
    pub avdonin_sup: f64,
    pub avdonin_window: u32,
    pub notes: Vec<String>,
}

const RING_SUM_CAP: usize = 512;
const AVDONIN_N_CAP: usize = 100_000;
const FULL_PLANE_RADIUS_CAP: f64 = 3000.0;

/// Compute the family-appropriate density functionals at the given cutoffs.
///
/// Sums are taken over family indices per the defining formulas (strip:
/// |k| ≤ m over the perturbed rows; full plane: |γ| ≤ R; axis family: branch
/// index k ≤ n, with the normalized value taken in absolute value), so the
/// cutoffs may exceed the sequence's built window.
pub fn density_functionals(seq: &PointSequence, cutoffs: &[f64]) -> Result<DensityReport> {
    if cutoffs.len() < 2 {
        return Err(Error::BadCutoffs("need at least two cutoffs".into()));
    }
    if cutoffs.windows(2).any(|w| w[1] <= w[0]) || cutoffs[0] <= 1.0 {
        return Err(Error::BadCutoffs("cutoffs must be increasing and > 1".into()));
    }
    let family = &seq.family;
    let pert = &seq.perturbation;
    let mut notes = Vec::new();

    let (cutoff_kind, partial_sums, ring_sums, one_d): (String, Vec<(f64, f64)>, Vec<f64>, Vec<f64>) =
        match family.family {
            Family::AxisALS => {
                let n_top = cutoffs.last().unwrap().floor() as u64;
                let mut sums = Vec::with_capacity(cutoffs.len());
                let mut rings = Vec::new();
                let mut one_d = Vec::new();
                let mut acc = 0.0;
                let mut ci = 0;
                for n in 1..=n_top {
                    let ring: f64 = ring_delta(family, pert, n);
                    acc += ring;
                    if rings.len() < RING_SUM_CAP {
                        rings.push(ring);
                    }
                    if one_d.len() < AVDONIN_N_CAP + 2 {
                        one_d.push(ring);
                    }
                    while ci < cutoffs.len() && n == cutoffs[ci].floor() as u64 {
                        sums.push((cutoffs[ci], acc));
                        ci += 1;
                    }
                }
                while ci < cutoffs.len() {
                    sums.push((cutoffs[ci], acc));
                    ci += 1;
                }
                ("ring index n".into(), sums, rings, one_d)
            }
            Family::LatticeNu => match pert {
                PerturbationSpec::FullBetaRadial { .. } | PerturbationSpec::Tabulated(_)
                    if matches!(pert, PerturbationSpec::FullBetaRadial { .. }) =>
                {
                    let r_top = *cutoffs.last().unwrap();
                    if r_top > FULL_PLANE_RADIUS_CAP {
                        return Err(Error::BadCutoffs(format!(
                            "full-plane cutoffs are capped at R = {FULL_PLANE_RADIUS_CAP}"
                        )));
                    }
                    let (sums, ann) = full_plane_sums(family, pert, cutoffs);
                    notes.push(
                        "full-plane radial sums grow like 2π|β|·log R because Σ_{|γ|≤R}|γ|^{-2} \
                         = 2π log R + O(1); the per-branch normalization |β| is reported by the \
                         axis-family variant"
                            .into(),
                    );
                    ("radius R".into(), sums, Vec::new(), ann)
                }
                _ => {
                    let rows = match pert {
                        PerturbationSpec::StripBetaShift { rows, .. } => *rows as i64,
                        _ => family.strip_height.unwrap_or(1) as i64,
                    };
                    let m_top = cutoffs.last().unwrap().floor() as i64;
                    let mut sums = Vec::with_capacity(cutoffs.len());
                    let mut one_d = Vec::new();
                    let mut acc = 0.0;
                    // k = 0 column first, then symmetric pairs.
                    for n in 1..=rows {
                        acc += pert.delta_theta(family, &PointIndex::Lattice { m: 0, n }).0;
                    }
                    let mut ci = 0;
                    for k in 1..=m_top {
                        let mut pair = 0.0;
                        for n in 1..=rows {
                            pair += pert.delta_theta(family, &PointIndex::Lattice { m: k, n }).0;
                            pair += pert.delta_theta(family, &PointIndex::Lattice { m: -k, n }).0;
                        }
                        acc += pair;
                        if one_d.len() < AVDONIN_N_CAP + 2 {
                            one_d.push(pair);
                        }
                        while ci < cutoffs.len() && k == cutoffs[ci].floor() as i64 {
                            sums.push((cutoffs[ci], acc));
                            ci += 1;
                        }
                    }
                    while ci < cutoffs.len() {
                        sums.push((cutoffs[ci], acc));
                        ci += 1;
                    }
                    ("index m".into(), sums, Vec::new(), one_d)
                }
            },
        };

    // Axis-family functionals are one-sided in absolute value; the lattice
    // pair (δ̂, δ) is signed.
    let absolute = family.family == Family::AxisALS;
    let normalized: Vec<(f64, f64)> = partial_sums
        .iter()
        .map(|&(c, s)| (c, if absolute { s.abs() / c.ln() } else { s / c.ln() }))
        .collect();
    let top_half = &normalized[normalized.len() / 2..];
    let delta_sup = top_half.iter().map(|&(_, v)| v).fold(f64::NEG_INFINITY, f64::max);
    let delta_inf = top_half.iter().map(|&(_, v)| v).fold(f64::INFINITY, f64::min);

    let m_window = 1u32;
    let n_max = one_d.len().saturating_sub(m_window as usize);
    let avdonin_sup = if n_max >= 1 { avdonin_windowed_sup(&one_d, m_window, n_max) } else { 0.0 };

    Ok(DensityReport {
        delta_sup,
        delta_inf,
        cutoff_kind,
        partial_sums,
        normalized,
        ring_sums,
        avdonin_sup,
        avdonin_window: m_window,
        notes,
    })
}

fn ring_delta(family: &FamilySpec, pert: &PerturbationSpec, n: u64) -> f64 {
    let mut s = 0.0;
    for axis in [Axis::Real, Axis::Imag] {
        for sign in [1i8, -1] {
            s += pert.delta_theta(family, &PointIndex::Axis { axis, sign, n }).0;
        }
    }
    s
}

fn full_plane_sums(
    family: &FamilySpec,
    pert: &PerturbationSpec,
    cutoffs: &[f64],
) -> (Vec<(f64, f64)>, Vec<f64>) {
    let r_top = *cutoffs.last().unwrap();
    // Collect (|λ|-annulus, δ) contributions by enumerating the lattice disk.
    let n_max = r_top.floor() as i64;
    let mut annuli = vec![0.0f64; r_top.ceil() as usize + 2];
    let mut sums = vec![0.0f64; cutoffs.len()];
    let mut add = |idx: PointIndex, gamma: C64| {
        let g = gamma.norm();
        if g > r_top {
            return;
        }
        let d = pert.delta_theta(family, &idx).0;
        for (i, &c) in cutoffs.iter().enumerate() {
            if g <= c {
                sums[i] += d;
            }
        }
        annuli[g.floor() as usize] += d;
    };
    for n in -n_max..=n_max {
        if n == 0 {
            let mut m = 0i64;
            while (m as f64 + family.nu) <= r_top {
                add(PointIndex::Lattice { m, n: 0 }, C64::new(m as f64 + family.nu, 0.0));
                m += 1;
            }
            let mut m = -1i64;
            while (-m as f64) <= r_top {
                add(PointIndex::Lattice { m, n: 0 }, C64::new(m as f64, 0.0));
                m -= 1;
            }
        } else {
            let rest = r_top * r_top - (n * n) as f64;
            if rest < 0.0 {
                continue;
            }
            let m_lim = rest.sqrt().floor() as i64;
            for m in -m_lim..=m_lim {
                add(PointIndex::Lattice { m, n }, C64::new(m as f64, n as f64));
            }
        }
    }
    (cutoffs.iter().copied().zip(sums).collect(), annuli)
}

/// sup over 0 ≤ n ≤ n_max of (n+1)/M · |Σ_{k=n+1}^{n+M} δ_k|.
///
/// `delta` is 1-indexed in the usual convention: `delta[k-1]` is δ_k, and the
/// slice must hold at least `n_max + M` entries.
pub fn avdonin_windowed_sup(delta: &[f64], m_window: u32, n_max: usize) -> f64 {
    let m = m_window as usize;
    assert!(m >= 1 && n_max >= 1, "need M >= 1 and n_max >= 1");
    assert!(delta.len() >= n_max + m, "delta must hold n_max + M entries");
    let mut window_sum: f64 = delta[..m].iter().sum();
    let mut sup = window_sum.abs() / m as f64; // n = 0
    for n in 1..=n_max {
        window_sum += delta[n + m - 1] - delta[n - 1];
        sup = sup.max((n as f64 + 1.0) / m as f64 * window_sum.abs());
    }
    sup
}

/// The block-alternating sequence δ_n = (−1)^k/2^k for 2^k ≤ n < 2^{k+1},
/// returned for 1 ≤ n ≤ n_max (so δ_1 = 1).
pub fn counterexample_delta(n_max: usize) -> Vec<f64> {
    assert!(n_max >= 2, "need n_max >= 2");
    (1..=n_max)
        .map(|n| {
            let k = (usize::BITS - 1 - n.leading_zeros()) as i32;
            if k % 2 == 0 { 0.5f64.powi(k) } else { -(0.5f64.powi(k)) }
        })
        .collect()
}
