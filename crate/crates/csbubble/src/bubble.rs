//! Closed-form limit profiles and the diagnostics tying a numerical run to
//! them: blow-down rescaling, interval masses, and sup-norm comparisons.
//!
//! The inner profile (around the slope peak of the second component) is
//! `omega2(r) = ln[ 2 D^2 (D^2-4) r^{D-2} / ((1+a2) (D+2+(D-2) r^D)^2) ]`
//! and the outer one (around the `-2` slope radius of the first component)
//! is `omega1(r) = ln[ 2 E^2 r^{E-2} / ((1+a1) (1+r^E)^2) ]`. All
//! evaluation is done in log space so large powers `r^D` never overflow.

use std::io::{self, Write};

use thiserror::Error;

use crate::ode::exp_guard;
use crate::profile::{fmt_f64, Component, RadialProfile};

#[derive(Debug, Error)]
pub enum BubbleError {
    #[error("inner profile requires D > 2, got {0}")]
    BadInnerParam(f64),
    #[error("outer profile requires E > 0, got {0}")]
    BadOuterParam(f64),
    #[error("radius must be positive, got {0}")]
    BadRadius(f64),
    #[error("window [{lo}, {hi}] exceeds the profile range [{t_lo}, {t_hi}] (log-radius)")]
    WindowOutOfRange {
        lo: f64,
        hi: f64,
        t_lo: f64,
        t_hi: f64,
    },
}

/// `ln(a + b e^x)` without overflow for large `x`, assuming `a, b > 0`.
fn ln_a_plus_b_exp(a: f64, b: f64, x: f64) -> f64 {
    if x > 0.0 {
        x + b.ln() + (a / b * exp_guard(-x)).ln_1p()
    } else {
        a.ln() + (b / a * exp_guard(x)).ln_1p()
    }
}

/// Inner bubble value; requires `D > 2`, `r > 0`.
pub fn omega2(d: f64, a2: f64, r: f64) -> Result<f64, BubbleError> {
    if !(d > 2.0) {
        return Err(BubbleError::BadInnerParam(d));
    }
    if !(r > 0.0) {
        return Err(BubbleError::BadRadius(r));
    }
    let lnr = r.ln();
    Ok((2.0 * d * d * (d * d - 4.0)).ln() + (d - 2.0) * lnr
        - (1.0 + a2).ln()
        - 2.0 * ln_a_plus_b_exp(d + 2.0, d - 2.0, d * lnr))
}

/// `r omega2'(r)`: `D-2` at the origin, 0 at `r = 1`, `-(D+2)` at infinity.
pub fn omega2_rslope(d: f64, r: f64) -> f64 {
    // s/phi with s = r^D, phi = D+2+(D-2) s, computed from whichever side
    // of r = 1 keeps the exponential small.
    let x = d * r.ln();
    let tau = if x > 0.0 {
        1.0 / ((d + 2.0) * exp_guard(-x) + (d - 2.0))
    } else {
        let s = exp_guard(x);
        s / (d + 2.0 + (d - 2.0) * s)
    };
    (d - 2.0) * (1.0 - 2.0 * d * tau)
}

/// Second derivative of the inner profile.
pub fn omega2_second(d: f64, r: f64) -> f64 {
    let x = d * r.ln();
    let tau = if x > 0.0 {
        1.0 / ((d + 2.0) * exp_guard(-x) + (d - 2.0))
    } else {
        let s = exp_guard(x);
        s / (d + 2.0 + (d - 2.0) * s)
    };
    let bracket = (d - 1.0) * tau - d * (d - 2.0) * tau * tau;
    (-(d - 2.0) - 2.0 * d * (d - 2.0) * bracket) / (r * r)
}

/// Outer bubble value; requires `E > 0`, `r > 0`.
pub fn omega1(e: f64, a1: f64, r: f64) -> Result<f64, BubbleError> {
    if !(e > 0.0) {
        return Err(BubbleError::BadOuterParam(e));
    }
    if !(r > 0.0) {
        return Err(BubbleError::BadRadius(r));
    }
    let lnr = r.ln();
    Ok((2.0 * e * e).ln() + (e - 2.0) * lnr
        - (1.0 + a1).ln()
        - 2.0 * ln_a_plus_b_exp(1.0, 1.0, e * lnr))
}

/// `r omega1'(r)`: `E-2` at the origin, exactly `-2` at `r = 1`,
/// `-(E+2)` at infinity.
pub fn omega1_rslope(e: f64, r: f64) -> f64 {
    let x = e * r.ln();
    // logistic r^E / (1 + r^E)
    let sig = 1.0 / (1.0 + exp_guard(-x));
    (e - 2.0) - 2.0 * e * sig
}

/// Second derivative of the outer profile.
pub fn omega1_second(e: f64, r: f64) -> f64 {
    let x = e * r.ln();
    let sig = 1.0 / (1.0 + exp_guard(-x));
    (-(e - 2.0) - 2.0 * e * e * sig * (1.0 - sig) + 2.0 * e * sig) / (r * r)
}

/// Which closed-form profile a comparison refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BubbleKind {
    InnerOmega2,
    OuterOmega1,
}

/// A validated closed-form profile: kind, limit constant, coupling.
#[derive(Debug, Clone, Copy)]
pub struct BubbleProfile {
    pub kind: BubbleKind,
    pub param: f64,
    pub coupling: f64,
}

impl BubbleProfile {
    pub fn inner(d: f64, a2: f64) -> Result<Self, BubbleError> {
        if !(d > 2.0) {
            return Err(BubbleError::BadInnerParam(d));
        }
        Ok(Self {
            kind: BubbleKind::InnerOmega2,
            param: d,
            coupling: a2,
        })
    }

    pub fn outer(e: f64, a1: f64) -> Result<Self, BubbleError> {
        if !(e > 0.0) {
            return Err(BubbleError::BadOuterParam(e));
        }
        Ok(Self {
            kind: BubbleKind::OuterOmega1,
            param: e,
            coupling: a1,
        })
    }

    pub fn value(&self, r: f64) -> f64 {
        match self.kind {
            BubbleKind::InnerOmega2 => omega2(self.param, self.coupling, r).unwrap(),
            BubbleKind::OuterOmega1 => omega1(self.param, self.coupling, r).unwrap(),
        }
    }

    pub fn rslope(&self, r: f64) -> f64 {
        match self.kind {
            BubbleKind::InnerOmega2 => omega2_rslope(self.param, r),
            BubbleKind::OuterOmega1 => omega1_rslope(self.param, r),
        }
    }

    pub fn second(&self, r: f64) -> f64 {
        match self.kind {
            BubbleKind::InnerOmega2 => omega2_second(self.param, r),
            BubbleKind::OuterOmega1 => omega1_second(self.param, r),
        }
    }

    /// Residual of the Liouville equation at `r`, from the closed-form
    /// derivatives: `omega'' + omega'/r + (1+a) e^{omega}`.
    pub fn ode_residual(&self, r: f64) -> f64 {
        let w = self.value(r);
        self.second(r) + self.rslope(r) / (r * r) + (1.0 + self.coupling) * exp_guard(w)
    }

    /// `∫_0^∞ r e^{omega} dr` by adaptive quadrature in log-radius; the
    /// closed forms predict `2D/(1+a2)` and `2E/(1+a1)`.
    pub fn mass_quadrature(&self, tol: f64) -> f64 {
        let f = |t: f64| exp_guard(2.0 * t + self.value(t.exp()));
        // Walk outward until the integrand is negligible relative to its peak.
        let mut peak = f(0.0);
        let mut t_lo = 0.0;
        while f(t_lo) > 1e-18 * peak && t_lo > -400.0 {
            t_lo -= 1.0;
            peak = peak.max(f(t_lo));
        }
        let mut t_hi = 0.0;
        while f(t_hi) > 1e-18 * peak && t_hi < 400.0 {
            t_hi += 1.0;
            peak = peak.max(f(t_hi));
        }
        adaptive_simpson(&f, t_lo, t_hi, tol)
    }
}

/// Adaptive Simpson quadrature with absolute tolerance `tol`.
pub fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &impl Fn(f64) -> f64,
        a: f64,
        m: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            recurse(f, a, lm, m, fa, flm, fm, left, tol / 2.0, depth - 1)
                + recurse(f, m, rm, b, fm, frm, fb, right, tol / 2.0, depth - 1)
        }
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    recurse(f, a, m, b, fa, fm, fb, whole, tol, 48)
}

/// Blow-down of a stored component around `r_center`:
/// `ubar(r) = u(r_center * r) + 2 ln r_center`, sampled on `n` log-spaced
/// points of `[r_lo, r_hi]`.
pub fn blowdown(
    profile: &RadialProfile,
    r_center: f64,
    component: Component,
    r_lo: f64,
    r_hi: f64,
    n: usize,
) -> Result<Vec<(f64, f64)>, BubbleError> {
    let tc = r_center.ln();
    let (lo, hi) = (tc + r_lo.ln(), tc + r_hi.ln());
    if lo < profile.t_min() - 1e-12 || hi > profile.t_max() + 1e-12 {
        return Err(BubbleError::WindowOutOfRange {
            lo: r_lo,
            hi: r_hi,
            t_lo: profile.t_min(),
            t_hi: profile.t_max(),
        });
    }
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let s = i as f64 / (n - 1).max(1) as f64;
        let lr = r_lo.ln() + s * (r_hi.ln() - r_lo.ln());
        let u = profile.u_at(component, tc + lr) + 2.0 * tc;
        out.push((lr.exp(), u));
    }
    Ok(out)
}

/// Sup-norm difference between a blow-down of the run and a closed-form
/// profile over a radius window.
pub fn blowdown_sup_error(
    profile: &RadialProfile,
    r_center: f64,
    component: Component,
    bubble: &BubbleProfile,
    r_lo: f64,
    r_hi: f64,
) -> Result<f64, BubbleError> {
    let pts = blowdown(profile, r_center, component, r_lo, r_hi, 101)?;
    Ok(pts
        .iter()
        .map(|&(r, u)| (u - bubble.value(r)).abs())
        .fold(0.0, f64::max))
}

/// Comparison dump CSV: `r,scaled_u,omega,diff` per window point.
#[allow(clippy::too_many_arguments)]
pub fn write_comparison_csv(
    profile: &RadialProfile,
    r_center: f64,
    component: Component,
    bubble: &BubbleProfile,
    r_lo: f64,
    r_hi: f64,
    n: usize,
    out: &mut impl Write,
) -> Result<(), BubbleError> {
    let pts = blowdown(profile, r_center, component, r_lo, r_hi, n)?;
    writeln!(out, "r,scaled_u,omega,diff").map_err(io_to_window)?;
    for (r, u) in pts {
        let w = bubble.value(r);
        writeln!(
            out,
            "{},{},{},{}",
            fmt_f64(r),
            fmt_f64(u),
            fmt_f64(w),
            fmt_f64(u - w)
        )
        .map_err(io_to_window)?;
    }
    Ok(())
}

fn io_to_window(_: io::Error) -> BubbleError {
    BubbleError::WindowOutOfRange {
        lo: 0.0,
        hi: 0.0,
        t_lo: 0.0,
        t_hi: 0.0,
    }
}
