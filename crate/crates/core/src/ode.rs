//! Adaptive Dormand-Prince 5(4) integrator for small complex systems.

#[allow(unused_imports)]
use num_traits::Float;
use num_traits::Zero;

use crate::C64;

// Butcher tableau
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// fifth minus fourth order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
}

/// Integration gave up at time `t` (step below the floor or non-finite state).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepFailure {
    pub t: f64,
}

/// Statistics of one [`Dopri5::advance`] call sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
}

/// Adaptive stepper state. Keeps the last step size between calls so that
/// consecutive [`advance`](Dopri5::advance) calls continue smoothly.
#[derive(Debug, Clone)]
pub struct Dopri5 {
    tol: Tolerances,
    h: f64,
    pub stats: StepStats,
}

fn axpy<const N: usize>(y: &[C64; N], h: f64, terms: &[(f64, &[C64; N])]) -> [C64; N] {
    let mut out = *y;
    for (w, k) in terms {
        for i in 0..N {
            out[i] += k[i] * (h * w);
        }
    }
    out
}

impl Dopri5 {
    /// `initial_step` of zero picks a step from the first derivative.
    pub fn new(tol: Tolerances, initial_step: f64) -> Self {
        Dopri5 {
            tol,
            h: initial_step,
            stats: StepStats::default(),
        }
    }

    /// Integrates `y' = f(t, y)` from `t` to `t_end`. After every accepted
    /// step `on_step` may rescale the state in place.
    pub fn advance<const N: usize, F, G>(
        &mut self,
        f: &F,
        t: &mut f64,
        y: &mut [C64; N],
        t_end: f64,
        on_step: &mut G,
    ) -> Result<(), StepFailure>
    where
        F: Fn(f64, &[C64; N]) -> [C64; N],
        G: FnMut(&mut [C64; N]),
    {
        let span = t_end - *t;
        if !(span > 0.0) {
            return Ok(());
        }
        if !(self.h > 0.0) {
            let d = f(*t, y);
            let dn = d.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let yn = y.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            self.h = if dn > 0.0 && yn > 0.0 {
                (0.01 * yn / dn).min(span)
            } else {
                span
            };
        }
        let h_floor = 1e-14 * t_end.abs().max(span);
        while *t < t_end {
            let remaining = t_end - *t;
            let last = self.h >= remaining;
            let h = if last { remaining } else { self.h };
            if h < h_floor && !last {
                return Err(StepFailure { t: *t });
            }
            let (next, err) = Self::attempt(f, *t, y, h, &self.tol);
            if !err.is_finite() || next.iter().any(|z| !z.is_finite()) {
                self.h *= 0.1;
                self.stats.rejected += 1;
                if self.h < h_floor {
                    return Err(StepFailure { t: *t });
                }
                continue;
            }
            let factor = if err.is_zero() {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            if err <= 1.0 {
                *t = if last { t_end } else { *t + h };
                *y = next;
                on_step(y);
                self.stats.accepted += 1;
                // a clamped final step says nothing about the natural step
                if !last || factor < 1.0 {
                    self.h = h * factor;
                }
            } else {
                self.stats.rejected += 1;
                self.h = h * factor.min(1.0);
                if self.h < h_floor {
                    return Err(StepFailure { t: *t });
                }
            }
        }
        Ok(())
    }

    /// One embedded step; returns the fifth-order solution and the scaled
    /// RMS error norm.
    fn attempt<const N: usize, F>(f: &F, t: f64, y: &[C64; N], h: f64, tol: &Tolerances) -> ([C64; N], f64)
    where
        F: Fn(f64, &[C64; N]) -> [C64; N],
    {
        let k1 = f(t, y);
        let k2 = f(t + C2 * h, &axpy(y, h, &[(A21, &k1)]));
        let k3 = f(t + C3 * h, &axpy(y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(t + C4 * h, &axpy(y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = f(
            t + C5 * h,
            &axpy(y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let k6 = f(
            t + h,
            &axpy(y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
        );
        let next = axpy(y, h, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
        let k7 = f(t + h, &next);
        let mut sum = 0.0;
        for i in 0..N {
            let e = (k1[i] * E1 + k3[i] * E3 + k4[i] * E4 + k5[i] * E5 + k6[i] * E6 + k7[i] * E7) * h;
            let scale = tol.atol + tol.rtol * y[i].norm().max(next[i].norm());
            sum += (e.norm() / scale).powi(2);
        }
        (next, (sum / N as f64).sqrt())
    }
}
