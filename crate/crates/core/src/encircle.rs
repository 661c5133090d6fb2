//! Dynamical transport of a two-mode state around closed loops in the
//! (P_in, Δ) plane, supermode energy fractions and chirality metrics.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::Mat2;
use crate::ode::{Dopri5, Tolerances};
use crate::spectral::{eigenpairs, ParameterPlane};
use crate::{Error, Result, C64, DETUNING_UNIT, DRIVE_UNIT};

const TAU: f64 = 2.0 * core::f64::consts::PI;

/// Common diagonal offset removed before integration (1 GHz in rate units).
pub const ROTATING_OFFSET: f64 = 1.0e9;
/// Slow 10 ms loop period.
pub const LONG_PERIOD: f64 = 1.0e-2;
/// Shorter default period; still far in the adiabatic regime.
pub const DESK_PERIOD: f64 = 1.0e-4;
/// Relative gap below which a start point counts as degenerate.
pub const START_GAP_TOLERANCE: f64 = 1.0e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Clockwise,
    CounterClockwise,
}

impl Direction {
    pub fn sign(self) -> f64 {
        match self {
            Direction::Clockwise => -1.0,
            Direction::CounterClockwise => 1.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Direction::Clockwise => "cw",
            Direction::CounterClockwise => "ccw",
        }
    }

    pub fn reversed(self) -> Self {
        match self {
            Direction::Clockwise => Direction::CounterClockwise,
            Direction::CounterClockwise => Direction::Clockwise,
        }
    }
}

/// Circle in the (P_in, Δ) plane. `radius_units` counts [`DRIVE_UNIT`] on
/// the drive axis and [`DETUNING_UNIT`] on the detuning axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoopSpec {
    pub center_p: f64,
    pub center_delta: f64,
    pub radius_units: f64,
    pub direction: Direction,
    pub period: f64,
    pub start_phase: f64,
    pub samples: usize,
}

impl LoopSpec {
    /// Unit-radius loop with the desk-scale period, 1001 samples and zero
    /// start phase.
    pub fn new(center_p: f64, center_delta: f64, direction: Direction) -> Self {
        LoopSpec {
            center_p,
            center_delta,
            radius_units: 1.0,
            direction,
            period: DESK_PERIOD,
            start_phase: 0.0,
            samples: 1001,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |field, reason, value| Err(Error::InvalidParameter { field, reason, value });
        if !(self.period > 0.0) || !self.period.is_finite() {
            return bad("LoopSpec.period", "must be finite and > 0", self.period);
        }
        if self.samples < 64 {
            return bad("LoopSpec.samples", "must be at least 64", self.samples as f64);
        }
        if !(self.radius_units > 0.0) || !self.radius_units.is_finite() {
            return bad("LoopSpec.radius_units", "must be finite and > 0", self.radius_units);
        }
        for (field, v) in [
            ("LoopSpec.center_p", self.center_p),
            ("LoopSpec.center_delta", self.center_delta),
            ("LoopSpec.start_phase", self.start_phase),
        ] {
            if !v.is_finite() {
                return bad(field, "must be finite", v);
            }
        }
        Ok(())
    }

    /// Loop angle at time `t`; `t = period` maps onto `t = 0` exactly.
    pub fn theta_at(&self, t: f64) -> f64 {
        let progress = t / self.period;
        let cycle = progress - progress.floor();
        self.start_phase + self.direction.sign() * TAU * cycle
    }

    pub fn sample_times(&self) -> Vec<f64> {
        crate::grid::linspace(0.0, self.period, self.samples)
    }
}

/// `(p_in, delta)` on the loop at time `t`.
pub fn parameters_at(spec: &LoopSpec, t: f64) -> (f64, f64) {
    point_at_angle(spec, spec.theta_at(t))
}

fn point_at_angle(spec: &LoopSpec, theta: f64) -> (f64, f64) {
    (
        spec.center_p + spec.radius_units * theta.cos() * DRIVE_UNIT,
        spec.center_delta + spec.radius_units * theta.sin() * DETUNING_UNIT,
    )
}

/// Right eigenvectors at a loop start. `a` is the branch with the larger
/// real eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeBasis {
    pub v_a: [C64; 2],
    pub v_b: [C64; 2],
    pub lambda_a: C64,
    pub lambda_b: C64,
}

impl ModeBasis {
    /// Basis from two columns; rejects nearly dependent pairs.
    pub fn from_vectors(v_a: [C64; 2], v_b: [C64; 2]) -> Result<Self> {
        let basis = ModeBasis {
            v_a,
            v_b,
            lambda_a: C64::new(f64::NAN, f64::NAN),
            lambda_b: C64::new(f64::NAN, f64::NAN),
        };
        basis.check()?;
        Ok(basis)
    }

    pub fn matrix(&self) -> Mat2 {
        Mat2::new(self.v_a[0], self.v_b[0], self.v_a[1], self.v_b[1])
    }

    fn check(&self) -> Result<()> {
        let na = (self.v_a[0].norm_sqr() + self.v_a[1].norm_sqr()).sqrt();
        let nb = (self.v_b[0].norm_sqr() + self.v_b[1].norm_sqr()).sqrt();
        let det = self.matrix().det().norm() / (na * nb);
        if det > 1e-6 {
            Ok(())
        } else {
            Err(Error::DegenerateBasis {
                p_in: f64::NAN,
                delta: f64::NAN,
                gap: det,
            })
        }
    }

    /// `(f_a, f_b)` of `state` expanded in this basis.
    pub fn fractions(&self, state: &[C64; 2]) -> (f64, f64) {
        let c = self.matrix().solve(state).unwrap_or([C64::new(f64::NAN, 0.0); 2]);
        let wa = c[0].norm_sqr();
        let wb = c[1].norm_sqr();
        let fa = wa / (wa + wb);
        (fa, 1.0 - fa)
    }
}

/// Supermode basis at the start of `spec`.
pub fn initial_basis(spec: &LoopSpec, plane: &ParameterPlane) -> Result<ModeBasis> {
    spec.validate()?;
    plane.base.validate()?;
    let (p, d) = parameters_at(spec, 0.0);
    let e = eigenpairs(&plane.hamiltonian_at(p, d).h);
    if e.gap() <= START_GAP_TOLERANCE * e.mean().norm() {
        return Err(Error::DegenerateBasis {
            p_in: p,
            delta: d,
            gap: e.gap(),
        });
    }
    let plus_first = e.lambda_plus.re >= e.lambda_minus.re;
    let (v_a, lambda_a, v_b, lambda_b) = if plus_first {
        (e.v_plus, e.lambda_plus, e.v_minus, e.lambda_minus)
    } else {
        (e.v_minus, e.lambda_minus, e.v_plus, e.lambda_plus)
    };
    let basis = ModeBasis {
        v_a,
        v_b,
        lambda_a,
        lambda_b,
    };
    basis.check().map_err(|err| match err {
        Error::DegenerateBasis { gap, .. } => Error::DegenerateBasis { p_in: p, delta: d, gap },
        other => other,
    })?;
    Ok(basis)
}

/// Per-sample fractions of `states` in `basis`.
pub fn energy_fractions(states: &[[C64; 2]], basis: &ModeBasis) -> Result<Vec<(f64, f64)>> {
    basis.check()?;
    Ok(states.iter().map(|s| basis.fractions(s)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveOptions {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        EvolveOptions {
            rtol: 1e-8,
            atol: 1e-12,
        }
    }
}

/// Sampled evolution around one loop.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub theta: Vec<f64>,
    pub p_in: Vec<f64>,
    pub delta: Vec<f64>,
    /// Unit-norm states.
    pub states: Vec<[C64; 2]>,
    /// Accumulated `ln ‖s‖` removed by renormalisation.
    pub log_norm: Vec<f64>,
    pub fractions: Vec<(f64, f64)>,
    pub basis: ModeBasis,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

impl Trajectory {
    pub fn final_fractions(&self) -> (f64, f64) {
        self.fractions[self.fractions.len() - 1]
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Integrates `i ds/dt = (H(t) − ω̄) s` once around the loop.
pub fn evolve(
    spec: &LoopSpec,
    plane: &ParameterPlane,
    initial_state: [C64; 2],
    options: &EvolveOptions,
) -> Result<Trajectory> {
    let basis = initial_basis(spec, plane)?;
    let n0 = (initial_state[0].norm_sqr() + initial_state[1].norm_sqr()).sqrt();
    if !(n0 > 0.0) || !n0.is_finite() {
        return Err(Error::InvalidParameter {
            field: "initial_state",
            reason: "must be finite and nonzero",
            value: n0,
        });
    }
    if !(options.rtol > 0.0 && options.atol >= 0.0) {
        return Err(Error::InvalidParameter {
            field: "EvolveOptions.rtol",
            reason: "tolerances must be positive",
            value: options.rtol,
        });
    }
    let minus_i = C64::new(0.0, -1.0);
    let shift = Mat2::diagonal(C64::new(ROTATING_OFFSET, 0.0), C64::new(ROTATING_OFFSET, 0.0));
    let rhs = |t: f64, s: &[C64; 2]| {
        let (p, d) = parameters_at(spec, t);
        let h = plane.hamiltonian_at(p, d).h;
        let v = Mat2([
            [h[(0, 0)] - shift[(0, 0)], h[(0, 1)]],
            [h[(1, 0)], h[(1, 1)] - shift[(1, 1)]],
        ])
        .apply(s);
        [v[0] * minus_i, v[1] * minus_i]
    };

    let times = spec.sample_times();
    let mut out = Trajectory {
        times: Vec::with_capacity(times.len()),
        theta: Vec::with_capacity(times.len()),
        p_in: Vec::with_capacity(times.len()),
        delta: Vec::with_capacity(times.len()),
        states: Vec::with_capacity(times.len()),
        log_norm: Vec::with_capacity(times.len()),
        fractions: Vec::with_capacity(times.len()),
        basis,
        accepted_steps: 0,
        rejected_steps: 0,
    };
    let mut state = [initial_state[0] / n0, initial_state[1] / n0];
    let mut log_norm = n0.ln();
    let mut t = 0.0;
    let mut ode = Dopri5::new(
        Tolerances {
            rtol: options.rtol,
            atol: options.atol,
        },
        0.0,
    );
    for &target in &times {
        ode.advance(&rhs, &mut t, &mut state, target, &mut |s: &mut [C64; 2]| {
            let n = (s[0].norm_sqr() + s[1].norm_sqr()).sqrt();
            log_norm += n.ln();
            s[0] /= n;
            s[1] /= n;
        })
        .map_err(|fail| {
            let (p, d) = parameters_at(spec, fail.t);
            Error::StepUnderflow {
                t: fail.t,
                p_in: p,
                delta: d,
            }
        })?;
        let (p, d) = parameters_at(spec, target);
        out.times.push(target);
        out.theta.push(spec.theta_at(target));
        out.p_in.push(p);
        out.delta.push(d);
        out.states.push(state);
        out.log_norm.push(log_norm);
        out.fractions.push(basis.fractions(&state));
    }
    out.accepted_steps = ode.stats.accepted;
    out.rejected_steps = ode.stats.rejected;
    Ok(out)
}

/// Evolves starting from the larger-Re supermode `v_a`.
pub fn evolve_from_a(spec: &LoopSpec, plane: &ParameterPlane, options: &EvolveOptions) -> Result<Trajectory> {
    let basis = initial_basis(spec, plane)?;
    evolve(spec, plane, basis.v_a, options)
}

/// Fraction swing over one circuit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillationMetrics {
    /// `max f_a − min f_a`.
    pub amplitude: f64,
    /// Total loop angle (radians) over which `|df_a/dθ|` exceeds the
    /// threshold.
    pub duration: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiralityReport {
    /// `f_a(CW, end) − f_a(CCW, end)`.
    pub final_fa_difference: f64,
    /// `max_k |f_a(CW, t_k) − f_a(CCW, t_k)|`.
    pub max_aligned_difference: f64,
    pub cw: OscillationMetrics,
    pub ccw: OscillationMetrics,
}

/// Default `|df_a/dθ|` threshold for the oscillation duration (per radian).
pub const SLOPE_THRESHOLD: f64 = 0.05;

pub fn oscillation_metrics(traj: &Trajectory, threshold: f64) -> OscillationMetrics {
    let fa: Vec<f64> = traj.fractions.iter().map(|f| f.0).collect();
    let (lo, hi) = fa.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
        (lo.min(v), hi.max(v))
    });
    let mut duration = 0.0;
    for k in 1..fa.len() {
        // unwrap the angle step across the 2π seam
        let mut dth = (traj.theta[k] - traj.theta[k - 1]).abs();
        if dth > core::f64::consts::PI {
            dth = TAU - dth;
        }
        if dth > 0.0 && (fa[k] - fa[k - 1]).abs() / dth > threshold {
            duration += dth;
        }
    }
    OscillationMetrics {
        amplitude: if fa.is_empty() { 0.0 } else { hi - lo },
        duration,
    }
}

/// Compares the two directions sample by sample in time. Each loop carries
/// its own start phase, so a half-turn offset between the directions is
/// applied through [`LoopSpec::start_phase`].
pub fn chirality_report(cw: &Trajectory, ccw: &Trajectory, threshold: f64) -> Result<ChiralityReport> {
    if cw.len() != ccw.len() || cw.is_empty() || cw.times.iter().zip(&ccw.times).any(|(a, b)| a != b) {
        return Err(Error::MismatchedSampling);
    }
    let max_aligned_difference = cw
        .fractions
        .iter()
        .zip(&ccw.fractions)
        .map(|(a, b)| (a.0 - b.0).abs())
        .fold(0.0, f64::max);
    Ok(ChiralityReport {
        final_fa_difference: cw.final_fractions().0 - ccw.final_fractions().0,
        max_aligned_difference,
        cw: oscillation_metrics(cw, threshold),
        ccw: oscillation_metrics(ccw, threshold),
    })
}
