//! Stored radial trajectories in log-radius coordinates, the Pohozaev
//! conservation ledger, and quadrature over stored profiles.
//!
//! A profile is a strictly increasing sequence of accepted integrator
//! states. Between samples, values are reconstructed by cubic Hermite
//! interpolation on `(u, w)` pairs; the slope of `u` in `t = ln r` is
//! exactly `w`, so the interpolant matches the integrator's own dense
//! accuracy without storing extra stage data.

use std::io::{self, Write};

use crate::model::{quad_j, ModelParams};
use crate::ode::{exp_guard, hermite};

/// One accepted integrator state: log-radius, log field amplitudes, the
/// scale-invariant slopes `w_k = r u_k'`, and the accumulated conservation
/// integral `q`.
#[derive(Debug, Clone, Copy)]
pub struct Sample {
    pub t: f64,
    pub u1: f64,
    pub u2: f64,
    pub w1: f64,
    pub w2: f64,
    pub q: f64,
}

/// Metadata of the singular origin expansion the profile was started from.
#[derive(Debug, Clone, Copy)]
pub struct OriginMeta {
    pub n1: u32,
    pub n2: u32,
    pub v0: f64,
    pub ln_eps: f64,
    pub r_start: f64,
}

#[derive(Debug, Clone)]
pub struct RadialProfile {
    pub samples: Vec<Sample>,
    pub origin: OriginMeta,
}

/// Which component of the pair a query refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    First,
    Second,
}

impl RadialProfile {
    pub fn new(origin: OriginMeta) -> Self {
        Self {
            samples: Vec::new(),
            origin,
        }
    }

    pub fn push(&mut self, s: Sample) {
        if let Some(last) = self.samples.last() {
            debug_assert!(s.t > last.t, "samples must be strictly increasing in t");
        }
        self.samples.push(s);
    }

    pub fn t_min(&self) -> f64 {
        self.samples.first().map_or(f64::NAN, |s| s.t)
    }

    pub fn t_max(&self) -> f64 {
        self.samples.last().map_or(f64::NAN, |s| s.t)
    }

    /// Index of the sample interval containing `t` (clamped to range).
    fn segment(&self, t: f64) -> usize {
        let n = self.samples.len();
        debug_assert!(n >= 2);
        match self
            .samples
            .binary_search_by(|s| s.t.partial_cmp(&t).unwrap())
        {
            Ok(i) => i.min(n - 2),
            Err(0) => 0,
            Err(i) => (i - 1).min(n - 2),
        }
    }

    /// Interpolated log amplitude of a component at log-radius `t`.
    pub fn u_at(&self, c: Component, t: f64) -> f64 {
        let i = self.segment(t);
        let (a, b) = (&self.samples[i], &self.samples[i + 1]);
        match c {
            Component::First => hermite(a.t, b.t, a.u1, a.w1, b.u1, b.w1, t),
            Component::Second => hermite(a.t, b.t, a.u2, a.w2, b.u2, b.w2, t),
        }
    }

    /// Interpolated slope of a component; slopes of `w` come from the
    /// system right-hand side evaluated at the stored endpoint states.
    pub fn w_at(&self, p: &ModelParams, c: Component, t: f64) -> f64 {
        let i = self.segment(t);
        let (a, b) = (&self.samples[i], &self.samples[i + 1]);
        let da = slope_rates(p, a);
        let db = slope_rates(p, b);
        match c {
            Component::First => hermite(a.t, b.t, a.w1, da.0, b.w1, db.0, t),
            Component::Second => hermite(a.t, b.t, a.w2, da.1, b.w2, db.1, t),
        }
    }

    /// Largest value of a component over the stored samples.
    pub fn sup_u(&self, c: Component) -> f64 {
        self.samples
            .iter()
            .map(|s| match c {
                Component::First => s.u1,
                Component::Second => s.u2,
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Scale-invariant force terms without the `e^{2t}` measure factor:
/// `F_k = (1+a_k) e^{2 u_k} - e^{u_k} - a_k e^{u_1+u_2}`.
pub fn force_terms(p: &ModelParams, u1: f64, u2: f64) -> (f64, f64) {
    let e1 = exp_guard(u1);
    let e2 = exp_guard(u2);
    let e11 = exp_guard(2.0 * u1);
    let e22 = exp_guard(2.0 * u2);
    let e12 = exp_guard(u1 + u2);
    (
        (1.0 + p.a1) * e11 - e1 - p.a1 * e12,
        (1.0 + p.a2) * e22 - e2 - p.a2 * e12,
    )
}

/// `dw_k/dt` at a stored state, used for Hermite reconstruction of slopes.
fn slope_rates(p: &ModelParams, s: &Sample) -> (f64, f64) {
    let x1 = exp_guard(2.0 * s.t + s.u1);
    let x2 = exp_guard(2.0 * s.t + s.u2);
    let x11 = exp_guard(2.0 * s.t + 2.0 * s.u1);
    let x22 = exp_guard(2.0 * s.t + 2.0 * s.u2);
    let x12 = exp_guard(2.0 * s.t + s.u1 + s.u2);
    let f1 = (1.0 + p.a1) * x11 - x1 - p.a1 * x12;
    let f2 = (1.0 + p.a2) * x22 - x2 - p.a2 * x12;
    ((1.0 + p.a1) * f1 - p.a1 * f2, (1.0 + p.a2) * f2 - p.a2 * f1)
}

/// Pohozaev density `P(t)`: conserved up to the accumulated source `q`.
pub fn pohozaev_p(p: &ModelParams, s: &Sample) -> f64 {
    let x1 = exp_guard(2.0 * s.t + s.u1);
    let x2 = exp_guard(2.0 * s.t + s.u2);
    let x11 = exp_guard(2.0 * s.t + 2.0 * s.u1);
    let x22 = exp_guard(2.0 * s.t + 2.0 * s.u2);
    let x12 = exp_guard(2.0 * s.t + s.u1 + s.u2);
    let ab = 1.0 + p.a1 + p.a2;
    quad_j(p, s.w1 + 2.0, s.w2 + 2.0)
        + ab * (p.a2 * x1 + p.a1 * x2
            - 0.5 * p.a2 * (1.0 + p.a1) * x11
            - 0.5 * p.a1 * (1.0 + p.a2) * x22
            + p.a1 * p.a2 * x12)
}

/// Rate of the Pohozaev source term, integrated alongside the state.
pub fn pohozaev_rate(p: &ModelParams, t: f64, u1: f64, u2: f64) -> f64 {
    let x11 = exp_guard(2.0 * t + 2.0 * u1);
    let x22 = exp_guard(2.0 * t + 2.0 * u2);
    let x12 = exp_guard(2.0 * t + u1 + u2);
    (1.0 + p.a1 + p.a2)
        * (p.a2 * (1.0 + p.a1) * x11 + p.a1 * (1.0 + p.a2) * x22 - 2.0 * p.a1 * p.a2 * x12)
}

/// Maximum conservation defect over the profile, normalized by
/// `max(1, |P(t0)|)`. This is the crate's integration-accuracy oracle.
pub fn pohozaev_residual(p: &ModelParams, profile: &RadialProfile) -> f64 {
    let first = match profile.samples.first() {
        Some(s) => s,
        None => return 0.0,
    };
    let p0 = pohozaev_p(p, first);
    let q0 = first.q;
    let scale = p0.abs().max(1.0);
    profile
        .samples
        .iter()
        .map(|s| ((pohozaev_p(p, s) - p0) - (s.q - q0)).abs() / scale)
        .fold(0.0, f64::max)
}

/// `∫ r e^{u} dr = ∫ e^{2t+u} dt` over `[t_lo, t_hi]` by composite Simpson
/// on the Hermite dense output, with one Richardson refinement.
pub fn interval_mass(profile: &RadialProfile, t_lo: f64, t_hi: f64, c: Component) -> f64 {
    assert!(t_hi >= t_lo, "empty interval");
    assert!(
        t_lo >= profile.t_min() - 1e-9 && t_hi <= profile.t_max() + 1e-9,
        "interval [{t_lo}, {t_hi}] outside profile range [{}, {}]",
        profile.t_min(),
        profile.t_max()
    );
    let f = |t: f64| exp_guard(2.0 * t + profile.u_at(c, t));
    // Integrate per stored segment so the integrand is smooth on each panel.
    let mut knots: Vec<f64> = vec![t_lo];
    for s in &profile.samples {
        if s.t > t_lo && s.t < t_hi {
            knots.push(s.t);
        }
    }
    knots.push(t_hi);
    let mut coarse = 0.0;
    let mut fine = 0.0;
    for w in knots.windows(2) {
        coarse += simpson(&f, w[0], w[1], 2);
        fine += simpson(&f, w[0], w[1], 4);
    }
    fine + (fine - coarse) / 15.0
}

/// Composite Simpson with `panels` panels (must be even >= 2).
pub fn simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    debug_assert!(panels >= 2 && panels.is_multiple_of(2));
    let h = (b - a) / panels as f64;
    let mut acc = f(a) + f(b);
    for i in 1..panels {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + h * i as f64);
    }
    acc * h / 3.0
}

/// Format a float with full round-trip precision (17 significant digits).
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Dump a profile as CSV: `t,r,u1,u2,w1,w2,P,Q`, one row per accepted step.
pub fn write_profile_csv(
    p: &ModelParams,
    profile: &RadialProfile,
    out: &mut impl Write,
) -> io::Result<()> {
    writeln!(out, "t,r,u1,u2,w1,w2,P,Q")?;
    let mut prev = f64::NEG_INFINITY;
    for s in &profile.samples {
        assert!(s.t > prev, "profile rows must be strictly increasing in t");
        prev = s.t;
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            fmt_f64(s.t),
            fmt_f64(s.t.exp()),
            fmt_f64(s.u1),
            fmt_f64(s.u2),
            fmt_f64(s.w1),
            fmt_f64(s.w2),
            fmt_f64(pohozaev_p(p, s)),
            fmt_f64(s.q)
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ExponentPair;

    fn su3() -> ModelParams {
        ModelParams::new(1.0, 1.0, 0, 0).unwrap()
    }

    #[test]
    fn force_terms_deep_negative_vanish() {
        let p = su3();
        let (f1, f2) = force_terms(&p, -800.0, -750.0);
        assert_eq!((f1, f2), (0.0, 0.0));
    }

    #[test]
    fn force_terms_at_topological_point() {
        // (a1,a2) = (1,1), u1 = u2 = 0: F_k = 2 - 1 - 1 = 0.
        let p = su3();
        let (f1, f2) = force_terms(&p, 0.0, 0.0);
        assert_eq!((f1, f2), (0.0, 0.0));
    }

    #[test]
    fn force_terms_bound() {
        // |F_k| <= (1+a_k) e^{u_k} whenever both u <= 0.
        let p = ModelParams::new(0.7, 2.3, 0, 0).unwrap();
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..2000 {
            let u1 = -30.0 * next();
            let u2 = -30.0 * next();
            let (f1, f2) = force_terms(&p, u1, u2);
            assert!(f1.abs() <= (1.0 + p.a1) * u1.exp() + 1e-300);
            assert!(f2.abs() <= (1.0 + p.a2) * u2.exp() + 1e-300);
        }
    }

    #[test]
    fn monotonicity_trap() {
        // F_k < -e^{u_k}/2 below the threshold, and ordering of forces
        // follows the ordering of components.
        let p = ModelParams::new(1.4, 0.6, 0, 0).unwrap();
        let thresh = -(2.0 * (1.0 + p.a1 + p.a2)).ln();
        let mut state = 0x2545f4914f6cdd1du64;
        let mut next = || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..2000 {
            let u1 = thresh - 1e-6 - 40.0 * next();
            let u2 = thresh - 1e-6 - 40.0 * next();
            let (f1, f2) = force_terms(&p, u1, u2);
            assert!(f1 < -0.5 * u1.exp());
            assert!(f2 < -0.5 * u2.exp());
            if u1 < u2 {
                assert!(f2 < f1 && f1 < 0.0);
            } else if u2 < u1 {
                assert!(f1 < f2 && f2 < 0.0);
            }
        }
    }

    #[test]
    fn constant_tail_has_zero_residual() {
        // Deep-negative fields: P is the constant J(w+2) and q stays 0.
        let p = su3();
        let origin = OriginMeta {
            n1: 0,
            n2: 0,
            v0: -1.0,
            ln_eps: -10.0,
            r_start: 1e-4,
        };
        let mut profile = RadialProfile::new(origin);
        for i in 0..50 {
            let t = i as f64 * 0.1;
            profile.push(Sample {
                t,
                u1: -900.0 - t,
                u2: -800.0 - 2.0 * t,
                w1: -1.0,
                w2: -2.0,
                q: 0.0,
            });
        }
        assert_eq!(pohozaev_residual(&p, &profile), 0.0);
    }

    #[test]
    fn interval_mass_of_known_exponential() {
        // u(t) = -t gives ∫ e^{t} dt over [0, 1] = e - 1.
        let origin = OriginMeta {
            n1: 0,
            n2: 0,
            v0: 0.0,
            ln_eps: 0.0,
            r_start: 1.0,
        };
        let mut profile = RadialProfile::new(origin);
        for i in 0..=100 {
            let t = i as f64 * 0.01;
            profile.push(Sample {
                t,
                u1: -t,
                u2: -700.0,
                w1: -1.0,
                w2: 0.0,
                q: 0.0,
            });
        }
        let m = interval_mass(&profile, 0.0, 1.0, Component::First);
        assert!((m - (1f64.exp() - 1.0)).abs() < 1e-12);
        let m2 = interval_mass(&profile, 0.0, 1.0, Component::Second);
        assert!(m2 < 1e-250);
    }

    #[test]
    fn quad_j_gap_sign_on_sigma() {
        // points on the line with h > 0 have positive gap
        let p = su3();
        for gamma in [2.1, 3.0, 3.9] {
            let e = crate::model::alpha_of_gamma(&p, gamma);
            let rr = crate::model::region_report(&p, e);
            assert!(rr.in_sigma, "gamma={gamma}");
            assert!(rr.j_gap > 0.0);
        }
        let e = ExponentPair::new(1.0, 1.0);
        assert!(crate::model::region_report(&p, e).j_gap < 0.0);
    }
}
