//! Reduced two-mode (phonon, magnon) Hamiltonian with the cavity eliminated,
//! its eigen-structure, exceptional points and branch-tracked eigenvalue
//! surfaces over the (drive strength, TE detuning) plane.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use num_traits::Zero;

use crate::grid::validate_axis;
use crate::linalg::Mat2;
use crate::model::{couplings, norm_sqr};
use crate::{Error, Result, SystemConfig, C64, DETUNING_UNIT, DRIVE_UNIT};

const I: C64 = C64::new(0.0, 1.0);

/// Maps a point of the (P_in, Δ) plane onto a full configuration: both
/// pumps get effective strength `P_in`, the TE pump gets detuning `Δ`, and
/// the TM detuning either stays at the template value or follows `Δ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParameterPlane {
    pub base: SystemConfig,
    pub tie_detunings: bool,
}

impl ParameterPlane {
    pub fn new(base: SystemConfig) -> Self {
        ParameterPlane {
            base,
            tie_detunings: false,
        }
    }

    pub fn tied(base: SystemConfig) -> Self {
        ParameterPlane {
            base,
            tie_detunings: true,
        }
    }

    pub fn config_at(&self, p_in: f64, delta: f64) -> SystemConfig {
        let c = self.base.with_drive_strength(p_in).with_te_detuning(delta);
        if self.tie_detunings {
            c.with_tm_detuning(delta)
        } else {
            c
        }
    }

    pub fn hamiltonian_at(&self, p_in: f64, delta: f64) -> EffectiveHamiltonian {
        build_hamiltonian(&self.config_at(p_in, delta))
    }
}

/// `H = diag(ω_r − iκ_r/2, ω_m − iκ_m/2) + Σ`, basis order (phonon, magnon),
/// with the self-energy matrix frozen at `eval_freq`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveHamiltonian {
    pub h: Mat2,
    pub eval_freq: f64,
}

/// Assembles the reduced Hamiltonian. Expects a validated config.
pub fn build_hamiltonian(config: &SystemConfig) -> EffectiveHamiltonian {
    let g = couplings(config);
    let w = config.sigma_frequency();
    let chi = config.te_susceptibility(w);
    let spring = chi - config.te_susceptibility(-w).conj();
    let magnon_pair = g.g_a * config.magnon_photon_coefficient(g.g_a);

    let bare_r = C64::new(config.phonon.omega, -0.5 * config.phonon.gamma);
    let bare_m = C64::new(config.magnon.omega, -0.5 * config.magnon.gamma);
    let h = Mat2::new(
        bare_r - I * norm_sqr(g.g_b) * spring,
        -I * g.g_a.conj() * g.g_b * chi,
        -I * g.g_a * g.g_b * chi,
        bare_m - I * magnon_pair * chi,
    );
    EffectiveHamiltonian { h, eval_freq: w }
}

/// Eigenvalues `λ± = (tr H ± √D)/2` (principal square root) with unit right
/// eigenvectors whose first non-negligible component is real and positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenPair {
    pub lambda_plus: C64,
    pub lambda_minus: C64,
    pub v_plus: [C64; 2],
    pub v_minus: [C64; 2],
}

impl EigenPair {
    pub fn gap(&self) -> f64 {
        (self.lambda_plus - self.lambda_minus).norm()
    }

    pub fn mean(&self) -> C64 {
        (self.lambda_plus + self.lambda_minus) * 0.5
    }
}

/// `D = (H00 − H11)² + 4 H01 H10`; the eigenvalues coalesce iff `D = 0`.
pub fn discriminant(h: &Mat2) -> C64 {
    let d = h[(0, 0)] - h[(1, 1)];
    d * d + h[(0, 1)] * h[(1, 0)] * 4.0
}

fn unit_eigenvector(h: &Mat2, lambda: C64, fallback: usize) -> [C64; 2] {
    let a = [h[(0, 1)], lambda - h[(0, 0)]];
    let b = [lambda - h[(1, 1)], h[(1, 0)]];
    let na = norm_sqr(a[0]) + norm_sqr(a[1]);
    let nb = norm_sqr(b[0]) + norm_sqr(b[1]);
    let (v, n) = if na >= nb { (a, na) } else { (b, nb) };
    if !(n > 0.0) {
        let mut e = [C64::zero(); 2];
        e[fallback] = C64::new(1.0, 0.0);
        return e;
    }
    normalize_phase([v[0] / n.sqrt(), v[1] / n.sqrt()])
}

/// Rescales a unit vector so its first component above 1e-14 is real
/// positive.
fn normalize_phase(v: [C64; 2]) -> [C64; 2] {
    let k = if v[0].norm() > 1e-14 { 0 } else { 1 };
    let magnitude = v[k].norm();
    let phase = v[k].conj() / magnitude;
    let mut out = [v[0] * phase, v[1] * phase];
    out[k] = C64::new(magnitude, 0.0);
    out
}

/// Closed-form eigen-decomposition of a 2×2 matrix.
pub fn eigenpairs(h: &Mat2) -> EigenPair {
    let tr = h.trace();
    let det = h.det();
    let root = discriminant(h).sqrt();
    // larger-magnitude root from the sum, the other from the product
    let aligned = (tr.conj() * root).re >= 0.0;
    let big = (tr + if aligned { root } else { -root }) * 0.5;
    let small = if big.is_zero() { C64::zero() } else { det / big };
    let (lambda_plus, lambda_minus) = if aligned { (big, small) } else { (small, big) };
    EigenPair {
        lambda_plus,
        lambda_minus,
        v_plus: unit_eigenvector(h, lambda_plus, 0),
        v_minus: unit_eigenvector(h, lambda_minus, 1),
    }
}

/// The printed EP condition,
/// `16|G_a|² G_b² χ_b² + (2|G_b|²(χ_b* − χ_b) + 2G_a²G_b + κ_m − κ_r + 2i(ω_m − ω_r))²`,
/// evaluated verbatim. Its second bracket mixes a rate² term (`G_a²G_b`)
/// with rates, so it is only a diagnostic; EPs are located with
/// [`discriminant`].
pub fn printed_ep_condition(config: &SystemConfig) -> C64 {
    let g = couplings(config);
    let w = config.sigma_frequency();
    let chi = config.te_susceptibility(w);
    let chi_reflected = config.te_susceptibility(-w).conj();
    let bracket = (chi_reflected - chi) * (2.0 * norm_sqr(g.g_b))
        + g.g_a * g.g_a * g.g_b * 2.0
        + (config.magnon.gamma - config.phonon.gamma)
        + I * 2.0 * (config.magnon.omega - config.phonon.omega);
    g.g_b * g.g_b * chi * chi * (16.0 * norm_sqr(g.g_a)) + bracket * bracket
}

/// The printed condition with `G_a² G_b` replaced by `G_a² χ_b`; equals
/// `−4D` for the paper-literal convention.
pub fn corrected_ep_condition(config: &SystemConfig) -> C64 {
    -discriminant(&build_hamiltonian(config).h) * 4.0
}

/// Rectangle of the (P_in, Δ) plane, in the model's rate units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    pub p_min: f64,
    pub p_max: f64,
    pub delta_min: f64,
    pub delta_max: f64,
}

impl Region {
    pub fn contains(&self, p: f64, delta: f64) -> bool {
        p >= self.p_min && p <= self.p_max && delta >= self.delta_min && delta <= self.delta_max
    }

    fn validate(&self) -> Result<()> {
        let ok = [self.p_min, self.p_max, self.delta_min, self.delta_max]
            .iter()
            .all(|v| v.is_finite())
            && self.p_max > self.p_min
            && self.delta_max > self.delta_min;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter {
                field: "Region",
                reason: "bounds must be finite with max > min on both axes",
                value: self.p_max - self.p_min,
            })
        }
    }
}

/// A located exceptional point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpLocation {
    pub p_in: f64,
    pub delta: f64,
    /// `|D|` at the solution.
    pub residual: f64,
    /// Coalesced eigenvalue (mean of the pair).
    pub lambda: C64,
    /// `|λ+ − λ−|` at the solution.
    pub gap: f64,
}

/// A seed whose Newton refinement failed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeedStall {
    pub p_in: f64,
    pub delta: f64,
    pub reason: StallReason,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StallReason {
    SingularJacobian,
    NoDescent,
    LeftRegion,
    IterationLimit,
    /// Converged in position but the eigenvalue gap stayed above tolerance.
    GapTooLarge,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct EpSearch {
    pub points: Vec<EpLocation>,
    pub stalls: Vec<SeedStall>,
}

/// Relative eigenvalue-gap bound an accepted EP must meet, `|λ+−λ−| ≤ tol·|λ̄|`.
pub const EP_GAP_TOLERANCE: f64 = 1.0e-7;
const DEDUP_DISTANCE: f64 = 1.0e-6;
const FD_STEP: f64 = 1.0e-6;
const MAX_NEWTON_STEPS: usize = 100;

/// Scaled-coordinate view of the plane: drive in [`DRIVE_UNIT`], detuning
/// in [`DETUNING_UNIT`], discriminant divided by the square of the mean bare
/// damping.
struct ScaledDiscriminant<'a> {
    plane: &'a ParameterPlane,
    scale: f64,
}

impl ScaledDiscriminant<'_> {
    fn eval(&self, x: f64, y: f64) -> C64 {
        let h = self.plane.hamiltonian_at(x * DRIVE_UNIT, y * DETUNING_UNIT);
        discriminant(&h.h) / (self.scale * self.scale)
    }

    fn jacobian(&self, x: f64, y: f64) -> [[f64; 2]; 2] {
        let h = FD_STEP;
        let dx = (self.eval(x + h, y) - self.eval(x - h, y)) / (2.0 * h);
        let dy = (self.eval(x, y + h) - self.eval(x, y - h)) / (2.0 * h);
        [[dx.re, dy.re], [dx.im, dy.im]]
    }

    /// Damped Newton on `(Re D, Im D) = 0`.
    fn refine(&self, x0: f64, y0: f64, bounds: &Region) -> core::result::Result<(f64, f64), StallReason> {
        let (mut x, mut y) = (x0, y0);
        let mut f = self.eval(x, y);
        for _ in 0..MAX_NEWTON_STEPS {
            let j = self.jacobian(x, y);
            let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
            let jn = j.iter().flatten().map(|v| v * v).sum::<f64>();
            if !(det.abs() > 1e-14 * jn) {
                return Err(StallReason::SingularJacobian);
            }
            let sx = -(j[1][1] * f.re - j[0][1] * f.im) / det;
            let sy = -(-j[1][0] * f.re + j[0][0] * f.im) / det;
            let mut t = 1.0;
            let mut accepted = None;
            for _ in 0..40 {
                let (nx, ny) = (x + t * sx, y + t * sy);
                let nf = self.eval(nx, ny);
                if nf.norm() < f.norm() || nf.is_zero() {
                    accepted = Some((nx, ny, nf));
                    break;
                }
                t *= 0.5;
            }
            let Some((nx, ny, nf)) = accepted else {
                // no further decrease possible: at the floating-point floor
                return Ok((x, y));
            };
            let step = ((nx - x).powi(2) + (ny - y).powi(2)).sqrt();
            x = nx;
            y = ny;
            f = nf;
            let p = x * DRIVE_UNIT;
            let d = y * DETUNING_UNIT;
            let margin = 0.05;
            let wide = Region {
                p_min: bounds.p_min - margin * (bounds.p_max - bounds.p_min),
                p_max: bounds.p_max + margin * (bounds.p_max - bounds.p_min),
                delta_min: bounds.delta_min - margin * (bounds.delta_max - bounds.delta_min),
                delta_max: bounds.delta_max + margin * (bounds.delta_max - bounds.delta_min),
            };
            if !wide.contains(p, d) || p < 0.0 {
                return Err(StallReason::LeftRegion);
            }
            if step < 1e-13 * (1.0 + x.abs() + y.abs()) || f.is_zero() {
                return Ok((x, y));
            }
        }
        Err(StallReason::IterationLimit)
    }
}

/// Locates exceptional points inside `region`: coarse `|D|` scan on a
/// `seeds_per_axis²` grid, damped Newton from every local minimum, then
/// deduplication. Points are returned sorted by drive, then detuning.
pub fn find_exceptional_points(plane: &ParameterPlane, region: &Region, seeds_per_axis: usize) -> Result<EpSearch> {
    plane.base.validate()?;
    region.validate()?;
    if seeds_per_axis < 8 {
        return Err(Error::InvalidParameter {
            field: "seeds_per_axis",
            reason: "must be at least 8",
            value: seeds_per_axis as f64,
        });
    }
    let solver = ScaledDiscriminant {
        plane,
        scale: 0.5 * (plane.base.phonon.gamma + plane.base.magnon.gamma),
    };
    let n = seeds_per_axis;
    let xs = crate::grid::linspace(region.p_min / DRIVE_UNIT, region.p_max / DRIVE_UNIT, n);
    let ys = crate::grid::linspace(region.delta_min / DETUNING_UNIT, region.delta_max / DETUNING_UNIT, n);
    let mut mag = Vec::with_capacity(n * n);
    for &x in &xs {
        for &y in &ys {
            mag.push(solver.eval(x, y).norm());
        }
    }

    let mut search = EpSearch::default();
    for i in 0..n {
        for j in 0..n {
            let here = mag[i * n + j];
            let is_min = (i.saturating_sub(1)..=(i + 1).min(n - 1))
                .all(|a| (j.saturating_sub(1)..=(j + 1).min(n - 1)).all(|b| mag[a * n + b] >= here));
            if !is_min {
                continue;
            }
            let outcome = solver.refine(xs[i], ys[j], region).and_then(|(x, y)| {
                let p = x * DRIVE_UNIT;
                let d = y * DETUNING_UNIT;
                if !region.contains(p, d) {
                    return Err(StallReason::LeftRegion);
                }
                let h = plane.hamiltonian_at(p, d);
                let e = eigenpairs(&h.h);
                let lambda = e.mean();
                if e.gap() > EP_GAP_TOLERANCE * lambda.norm() {
                    return Err(StallReason::GapTooLarge);
                }
                Ok(EpLocation {
                    p_in: p,
                    delta: d,
                    residual: discriminant(&h.h).norm(),
                    lambda,
                    gap: e.gap(),
                })
            });
            match outcome {
                Ok(ep) => {
                    let duplicate = search.points.iter().any(|q| {
                        let dx = (q.p_in - ep.p_in) / DRIVE_UNIT;
                        let dy = (q.delta - ep.delta) / DETUNING_UNIT;
                        (dx * dx + dy * dy).sqrt() < DEDUP_DISTANCE
                    });
                    if !duplicate {
                        search.points.push(ep);
                    }
                }
                Err(reason) => search.stalls.push(SeedStall {
                    p_in: xs[i] * DRIVE_UNIT,
                    delta: ys[j] * DETUNING_UNIT,
                    reason,
                }),
            }
        }
    }
    search
        .points
        .sort_by(|a, b| a.p_in.total_cmp(&b.p_in).then_with(|| a.delta.total_cmp(&b.delta)));
    Ok(search)
}

/// Re-runs Newton from an already converged point; returns the distance
/// moved in scaled units.
pub fn newton_drift(plane: &ParameterPlane, ep: &EpLocation) -> Option<f64> {
    let solver = ScaledDiscriminant {
        plane,
        scale: 0.5 * (plane.base.phonon.gamma + plane.base.magnon.gamma),
    };
    let x0 = ep.p_in / DRIVE_UNIT;
    let y0 = ep.delta / DETUNING_UNIT;
    let region = Region {
        p_min: ep.p_in - DRIVE_UNIT,
        p_max: ep.p_in + DRIVE_UNIT,
        delta_min: ep.delta - DETUNING_UNIT,
        delta_max: ep.delta + DETUNING_UNIT,
    };
    solver
        .refine(x0, y0, &region)
        .ok()
        .map(|(x, y)| ((x - x0).powi(2) + (y - y0).powi(2)).sqrt())
}

/// Branch-matching distance: `|ΔRe| + |ΔIm|`.
fn displacement(a: C64, b: C64) -> f64 {
    (a.re - b.re).abs() + (a.im - b.im).abs()
}

/// Orders `pair` to best continue `reference` (sum of displacements).
fn match_pair(references: &[[C64; 2]], pair: [C64; 2]) -> [C64; 2] {
    let keep: f64 = references
        .iter()
        .map(|r| displacement(r[0], pair[0]) + displacement(r[1], pair[1]))
        .sum();
    let swap: f64 = references
        .iter()
        .map(|r| displacement(r[0], pair[1]) + displacement(r[1], pair[0]))
        .sum();
    if swap < keep {
        [pair[1], pair[0]]
    } else {
        pair
    }
}

/// Unordered eigenvalues at a point.
pub fn eigenvalues_at(plane: &ParameterPlane, p_in: f64, delta: f64) -> [C64; 2] {
    let e = eigenpairs(&plane.hamiltonian_at(p_in, delta).h);
    [e.lambda_plus, e.lambda_minus]
}

/// Follows the eigenvalue pair along a path by nearest-neighbour matching.
/// The first point is ordered with the larger real part first.
pub fn track_path(plane: &ParameterPlane, path: &[(f64, f64)]) -> Vec<[C64; 2]> {
    let mut out: Vec<[C64; 2]> = Vec::with_capacity(path.len());
    for &(p, d) in path {
        let pair = eigenvalues_at(plane, p, d);
        let next = match out.last() {
            None => order_by_real(pair),
            Some(prev) => match_pair(core::slice::from_ref(prev), pair),
        };
        out.push(next);
    }
    out
}

fn order_by_real(pair: [C64; 2]) -> [C64; 2] {
    if pair[1].re > pair[0].re {
        [pair[1], pair[0]]
    } else {
        pair
    }
}

/// True when tracking around the closed `path` (first point repeated or
/// not) returns with the two branches exchanged.
pub fn monodromy_swaps(plane: &ParameterPlane, path: &[(f64, f64)]) -> bool {
    if path.is_empty() {
        return false;
    }
    let mut closed: Vec<(f64, f64)> = path.to_vec();
    if closed.first() != closed.last() {
        closed.push(path[0]);
    }
    let tracked = track_path(plane, &closed);
    let start = tracked[0];
    let end = tracked[tracked.len() - 1];
    displacement(end[0], start[1]) + displacement(end[1], start[0])
        < displacement(end[0], start[0]) + displacement(end[1], start[1])
}

/// Closed circular path (not repeating the start point) in plotted units:
/// `radius` is given in ([`DRIVE_UNIT`], [`DETUNING_UNIT`]) units.
pub fn circle_path(center: (f64, f64), radius: f64, points: usize) -> Vec<(f64, f64)> {
    (0..points)
        .map(|k| {
            let th = 2.0 * core::f64::consts::PI * k as f64 / points as f64;
            (
                center.0 + radius * th.cos() * DRIVE_UNIT,
                center.1 + radius * th.sin() * DETUNING_UNIT,
            )
        })
        .collect()
}

/// One cell of a tracked eigenvalue surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceCell {
    pub p_in: f64,
    pub delta: f64,
    pub lambda: [C64; 2],
    /// Gap below the tracking tolerance; branch assignment is ambiguous.
    pub near_ep: bool,
}

/// Two branch-tracked eigenvalue sheets, drive-major.
#[derive(Debug, Clone, PartialEq)]
pub struct RiemannSurface {
    pub p_grid: Vec<f64>,
    pub delta_grid: Vec<f64>,
    pub cells: Vec<SurfaceCell>,
}

impl RiemannSurface {
    pub fn cell(&self, i: usize, j: usize) -> &SurfaceCell {
        &self.cells[i * self.delta_grid.len() + j]
    }

    pub fn near_ep_count(&self) -> usize {
        self.cells.iter().filter(|c| c.near_ep).count()
    }
}

/// Tracks precomputed per-cell eigenvalue pairs (drive-major) into two
/// sheets. Cell (0,0) puts the larger real part first; every other cell is
/// ordered to minimise displacement from its left and upper neighbours.
pub fn track_surface(
    p_grid: &[f64],
    delta_grid: &[f64],
    raw: &[[C64; 2]],
    gap_tolerance: f64,
) -> Result<RiemannSurface> {
    validate_axis(p_grid, "p_in")?;
    validate_axis(delta_grid, "delta")?;
    let (rows, cols) = (p_grid.len(), delta_grid.len());
    if raw.len() != rows * cols {
        return Err(Error::MismatchedSampling);
    }
    let mut cells: Vec<SurfaceCell> = Vec::with_capacity(raw.len());
    for i in 0..rows {
        for j in 0..cols {
            let pair = raw[i * cols + j];
            let mut refs: Vec<[C64; 2]> = Vec::with_capacity(2);
            if j > 0 {
                refs.push(cells[i * cols + j - 1].lambda);
            }
            if i > 0 {
                refs.push(cells[(i - 1) * cols + j].lambda);
            }
            let lambda = if refs.is_empty() {
                order_by_real(pair)
            } else {
                match_pair(&refs, pair)
            };
            cells.push(SurfaceCell {
                p_in: p_grid[i],
                delta: delta_grid[j],
                lambda,
                near_ep: (pair[0] - pair[1]).norm() < gap_tolerance,
            });
        }
    }
    Ok(RiemannSurface {
        p_grid: p_grid.to_vec(),
        delta_grid: delta_grid.to_vec(),
        cells,
    })
}

/// Eigenvalue surfaces over `p_grid × delta_grid`.
pub fn riemann_surface(
    plane: &ParameterPlane,
    p_grid: &[f64],
    delta_grid: &[f64],
    gap_tolerance: f64,
) -> Result<RiemannSurface> {
    plane.base.validate()?;
    validate_axis(p_grid, "p_in")?;
    validate_axis(delta_grid, "delta")?;
    let mut raw = Vec::with_capacity(p_grid.len() * delta_grid.len());
    for &p in p_grid {
        for &d in delta_grid {
            raw.push(eigenvalues_at(plane, p, d));
        }
    }
    track_surface(p_grid, delta_grid, &raw, gap_tolerance)
}
