//! Embedded Dormand-Prince 5(4) stepper with componentwise error control.
//!
//! The right-hand sides in this crate are exponentially small almost
//! everywhere a valid profile lives, so an explicit non-stiff pair is the
//! right tool. The stepper reports exponential overflow from inside the
//! RHS as a recoverable signal (the step is retried smaller) and as a hard
//! error when the current state itself is out of range.

use thiserror::Error;

/// Largest exponent argument treated as representable. `exp` of anything
/// above this is an overflow signal; anything below -745 is exactly zero
/// in f64 and is clamped there.
pub const EXP_OVERFLOW: f64 = 705.0;

/// Guarded exponential: exact zero below the f64 underflow threshold.
#[inline]
pub fn exp_guard(x: f64) -> f64 {
    if x < -745.0 {
        0.0
    } else {
        x.exp()
    }
}

/// Signal raised by a right-hand side when an exponent argument exceeds the
/// representable range at the attempted state.
#[derive(Debug, Clone, Copy)]
pub struct OverflowSignal;

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum OdeError {
    #[error("state overflow at t = {t}")]
    Overflow { t: f64 },
    #[error("step size underflow at t = {t} (h = {h})")]
    StepUnderflow { t: f64, h: f64 },
    #[error("step budget exhausted at t = {t}")]
    StepBudget { t: f64 },
}

/// Integration tolerances and limits shared by every solver in the crate.
#[derive(Debug, Clone, Copy)]
pub struct OdeControls {
    pub rtol: f64,
    pub atol: f64,
    pub max_step: f64,
    pub max_steps: usize,
}

impl Default for OdeControls {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-12,
            max_step: 1.0,
            max_steps: 4_000_000,
        }
    }
}

// Dormand-Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
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
// b - bhat, for the embedded 4th order error estimate.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// One accepted step: endpoint states and slopes, enough for cubic Hermite
/// reconstruction anywhere inside the step.
#[derive(Debug, Clone, Copy)]
pub struct AcceptedStep<const N: usize> {
    pub t0: f64,
    pub t1: f64,
    pub y0: [f64; N],
    pub y1: [f64; N],
    pub f0: [f64; N],
    pub f1: [f64; N],
}

/// Driver state for one integration. `F` maps `(t, y)` to the slope vector
/// or raises an overflow signal.
pub struct Dopri5<const N: usize, F>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N], OverflowSignal>,
{
    pub t: f64,
    pub y: [f64; N],
    f: F,
    k1: [f64; N],
    h: f64,
    controls: OdeControls,
    steps: usize,
    prev_err: f64,
}

impl<const N: usize, F> Dopri5<N, F>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N], OverflowSignal>,
{
    pub fn new(t0: f64, y0: [f64; N], mut f: F, controls: OdeControls) -> Result<Self, OdeError> {
        let k1 = f(t0, &y0).map_err(|_| OdeError::Overflow { t: t0 })?;
        Ok(Self {
            t: t0,
            y: y0,
            f,
            k1,
            h: 1e-6,
            controls,
            steps: 0,
            prev_err: 1.0,
        })
    }

    pub fn controls(&self) -> &OdeControls {
        &self.controls
    }

    /// Current slope at `(t, y)`.
    pub fn slope(&self) -> [f64; N] {
        self.k1
    }

    fn error_norm(&self, y0: &[f64; N], y1: &[f64; N], err: &[f64; N]) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..N {
            let scale = self.controls.atol + self.controls.rtol * y0[i].abs().max(y1[i].abs());
            worst = worst.max((err[i] / scale).abs());
        }
        worst
    }

    /// Advance one accepted step, not crossing `t_end`.
    pub fn step(&mut self, t_end: f64) -> Result<AcceptedStep<N>, OdeError> {
        let min_h = (self.t.abs().max(1.0)) * f64::EPSILON * 16.0;
        loop {
            self.steps += 1;
            if self.steps > self.controls.max_steps {
                return Err(OdeError::StepBudget { t: self.t });
            }
            let mut h = self.h.min(self.controls.max_step);
            // Underflow is judged on the controller's own step, not on the
            // final sliver clamped to t_end, which may legitimately be tiny.
            if h <= min_h {
                return Err(OdeError::StepUnderflow { t: self.t, h });
            }
            let hit_end = self.t + h >= t_end;
            if hit_end {
                h = t_end - self.t;
            }

            match self.try_step(h) {
                Ok((y1, f1, err_norm)) => {
                    if err_norm <= 1.0 {
                        let t1 = if hit_end { t_end } else { self.t + h };
                        let step = AcceptedStep {
                            t0: self.t,
                            t1,
                            y0: self.y,
                            y1,
                            f0: self.k1,
                            f1,
                        };
                        self.t = t1;
                        self.y = y1;
                        self.k1 = f1;
                        // PI controller (0.7/5, 0.4/5 exponents).
                        let e = err_norm.max(1e-10);
                        let fac = 0.9 * e.powf(-0.14) * self.prev_err.powf(0.08);
                        self.prev_err = e;
                        self.h = (h * fac.clamp(0.2, 5.0)).max(self.h.min(self.controls.max_step) * 0.2);
                        return Ok(step);
                    }
                    self.h = h * (0.9 * err_norm.powf(-0.2)).clamp(0.1, 0.9);
                }
                Err(OverflowSignal) => {
                    // A trial stage left the representable range: retry smaller.
                    self.h = h * 0.25;
                }
            }
        }
    }

    #[allow(clippy::type_complexity)]
    fn try_step(&mut self, h: f64) -> Result<([f64; N], [f64; N], f64), OverflowSignal> {
        let t = self.t;
        let y = &self.y;
        let k1 = self.k1;

        let mut ys = [0.0; N];
        for i in 0..N {
            ys[i] = y[i] + h * A21 * k1[i];
        }
        let k2 = (self.f)(t + C[1] * h, &ys)?;
        for i in 0..N {
            ys[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
        }
        let k3 = (self.f)(t + C[2] * h, &ys)?;
        for i in 0..N {
            ys[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        let k4 = (self.f)(t + C[3] * h, &ys)?;
        for i in 0..N {
            ys[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        let k5 = (self.f)(t + C[4] * h, &ys)?;
        for i in 0..N {
            ys[i] =
                y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        let k6 = (self.f)(t + C[5] * h, &ys)?;
        let mut y1 = [0.0; N];
        for i in 0..N {
            y1[i] = y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
        }
        let k7 = (self.f)(t + h, &y1)?;

        let mut err = [0.0; N];
        for i in 0..N {
            err[i] =
                h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
        }
        let err_norm = self.error_norm(y, &y1, &err);
        Ok((y1, k7, err_norm))
    }
}

/// Cubic Hermite evaluation on `[t0, t1]` from endpoint values and slopes.
#[inline]
pub fn hermite(t0: f64, t1: f64, y0: f64, f0: f64, y1: f64, f1: f64, t: f64) -> f64 {
    let h = t1 - t0;
    if h == 0.0 {
        return y0;
    }
    let s = (t - t0) / h;
    let s2 = s * s;
    let s3 = s2 * s;
    let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    let h10 = s3 - 2.0 * s2 + s;
    let h01 = -2.0 * s3 + 3.0 * s2;
    let h11 = s3 - s2;
    h00 * y0 + h10 * h * f0 + h01 * y1 + h11 * h * f1
}

/// Bisect a scalar function of `t` on `[lo, hi]` down to `tol` in `t`,
/// assuming a sign change between the endpoints.
pub fn bisect_root(
    mut lo: f64,
    mut hi: f64,
    mut flo: f64,
    tol: f64,
    mut f: impl FnMut(f64) -> f64,
) -> f64 {
    for _ in 0..200 {
        if (hi - lo).abs() <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
