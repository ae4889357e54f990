//! The two-component radial initial value problem in log-radius
//! coordinates, with the Dirac-source origin expansion and divergence
//! tracking.
//!
//! State layout is `[u1, u2, w1, w2, q]` where `w_k = r u_k'` and `q`
//! accumulates the Pohozaev source integral with the same quadrature order
//! as the integrator itself.

use thiserror::Error;

use crate::model::ModelParams;
use crate::ode::{
    bisect_root, exp_guard, hermite, Dopri5, OdeControls, OdeError, OverflowSignal, EXP_OVERFLOW,
};
use crate::profile::{OriginMeta, RadialProfile, Sample};

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum IntegrateError {
    #[error("profile diverged: u{component} crossed zero at t = {t}")]
    Diverged { component: usize, t: f64 },
    #[error(transparent)]
    Ode(#[from] OdeError),
}

#[derive(Debug, Error)]
pub enum OriginError {
    #[error("origin expansion failed validation twice (r_start = {r_start})")]
    ValidationFailed { r_start: f64 },
    #[error("origin state not integrable: {0}")]
    Integrate(IntegrateError),
}

/// Instantaneous state of the radial system at log-radius `t = ln r`.
#[derive(Debug, Clone, Copy)]
pub struct RadialState {
    pub t: f64,
    pub u1: f64,
    pub u2: f64,
    pub w1: f64,
    pub w2: f64,
}

impl RadialState {
    pub fn to_vec5(self) -> [f64; 5] {
        [self.u1, self.u2, self.w1, self.w2, 0.0]
    }
}

/// Slopes `(dw1/dt, dw2/dt)` of the system in log-radius coordinates.
/// Signals overflow when `e^{2t + 2u_k}` leaves the representable range.
pub fn system_rhs(p: &ModelParams, s: &RadialState) -> Result<(f64, f64), OverflowSignal> {
    let d = rhs5(*p)(s.t, &s.to_vec5())?;
    Ok((d[2], d[3]))
}

/// Right-hand side of the 5-state system (fields, slopes, Pohozaev source).
pub fn rhs5(p: ModelParams) -> impl Fn(f64, &[f64; 5]) -> Result<[f64; 5], OverflowSignal> + Copy {
    move |t: f64, y: &[f64; 5]| {
        let (u1, u2, w1, w2) = (y[0], y[1], y[2], y[3]);
        let a11 = 2.0 * t + 2.0 * u1;
        let a22 = 2.0 * t + 2.0 * u2;
        let a12 = 2.0 * t + u1 + u2;
        let a1 = 2.0 * t + u1;
        let a2 = 2.0 * t + u2;
        if a11 > EXP_OVERFLOW || a22 > EXP_OVERFLOW || a12 > EXP_OVERFLOW {
            return Err(OverflowSignal);
        }
        let x1 = exp_guard(a1);
        let x2 = exp_guard(a2);
        let x11 = exp_guard(a11);
        let x22 = exp_guard(a22);
        let x12 = exp_guard(a12);
        let f1 = (1.0 + p.a1) * x11 - x1 - p.a1 * x12;
        let f2 = (1.0 + p.a2) * x22 - x2 - p.a2 * x12;
        let dq = (1.0 + p.a1 + p.a2)
            * (p.a2 * (1.0 + p.a1) * x11 + p.a1 * (1.0 + p.a2) * x22 - 2.0 * p.a1 * p.a2 * x12);
        Ok([
            w1,
            w2,
            (1.0 + p.a1) * f1 - p.a1 * f2,
            (1.0 + p.a2) * f2 - p.a2 * f1,
            dq,
        ])
    }
}

/// Second-order origin expansion of the regular parts `v_k = u_k - 2 N_k ln r`.
///
/// Each force term carries its own power of `r` from the vortex factors
/// `e^{u_k} = r^{2 N_k} e^{v_k}`, so the expansion integrates
/// `v'' + v'/r = sum c_j r^{p_j}` term by term:
/// `v(r) = v(0) + sum c_j r^{p_j+2}/(p_j+2)^2`.
fn origin_series(p: &ModelParams, v10: f64, v20: f64, r: f64) -> RadialState {
    let ev1 = exp_guard(v10);
    let ev2 = exp_guard(v20);
    let n1 = 2.0 * p.n1f();
    let n2 = 2.0 * p.n2f();
    // (coefficient, power) pairs of G_1 = (1+a1)F_1 - a1 F_2 at the origin.
    let g1 = [
        ((1.0 + p.a1) * (1.0 + p.a1) * ev1 * ev1, 2.0 * n1),
        (-(1.0 + p.a1) * ev1, n1),
        (-p.a1 * (1.0 + p.a2) * ev2 * ev2, 2.0 * n2),
        (p.a1 * ev2, n2),
        (p.a1 * (p.a2 - 1.0 - p.a1) * ev1 * ev2, n1 + n2),
    ];
    let g2 = [
        ((1.0 + p.a2) * (1.0 + p.a2) * ev2 * ev2, 2.0 * n2),
        (-(1.0 + p.a2) * ev2, n2),
        (-p.a2 * (1.0 + p.a1) * ev1 * ev1, 2.0 * n1),
        (p.a2 * ev1, n1),
        (p.a2 * (p.a1 - 1.0 - p.a2) * ev1 * ev2, n1 + n2),
    ];
    let eval = |terms: &[(f64, f64); 5]| {
        let mut dv = 0.0;
        let mut rdv = 0.0;
        for &(c, pw) in terms {
            let rp = r.powf(pw + 2.0);
            dv += c * rp / ((pw + 2.0) * (pw + 2.0));
            rdv += c * rp / (pw + 2.0);
        }
        (dv, rdv)
    };
    let (dv1, rdv1) = eval(&g1);
    let (dv2, rdv2) = eval(&g2);
    let t = r.ln();
    RadialState {
        t,
        u1: n1 * t + v10 + dv1,
        u2: n2 * t + v20 + dv2,
        w1: n1 + rdv1,
        w2: n2 + rdv2,
    }
}

/// Build the starting state at `r_start` from the origin data
/// `v1(0) = V0`, `v2(0) = ln eps`, validating the expansion a posteriori by
/// re-deriving the same state from `r_start/4` with the integrator. On a
/// validation failure `r_start` is halved once before giving up.
pub fn origin_start(
    p: &ModelParams,
    v0: f64,
    ln_eps: f64,
    r_start: f64,
) -> Result<RadialState, OriginError> {
    let mut r = r_start;
    for _attempt in 0..2 {
        let direct = origin_series(p, v0, ln_eps, r);
        let inner = origin_series(p, v0, ln_eps, r / 4.0);
        let controls = OdeControls {
            rtol: 1e-12,
            atol: 1e-14,
            ..Default::default()
        };
        let mut drv = Dopri5::new(inner.t, inner.to_vec5(), rhs5(*p), controls)
            .map_err(|e| OriginError::Integrate(IntegrateError::Ode(e)))?;
        let t_target = direct.t;
        let mut ok = true;
        while drv.t < t_target {
            if drv.step(t_target).is_err() {
                ok = false;
                break;
            }
        }
        if ok {
            let y = drv.y;
            let err = (y[0] - direct.u1)
                .abs()
                .max((y[1] - direct.u2).abs())
                .max((y[2] - direct.w1).abs())
                .max((y[3] - direct.w2).abs());
            if err < 1e-9 {
                return Ok(direct);
            }
        }
        r *= 0.5;
    }
    Err(OriginError::ValidationFailed { r_start: r })
}

/// Extend a profile up to `t_end`, appending one sample per accepted step
/// and raising `Diverged` with the crossing time when either field reaches
/// zero. The Pohozaev ledger travels in the fifth state component.
pub fn advance(
    p: &ModelParams,
    profile: &mut RadialProfile,
    t_end: f64,
    controls: &OdeControls,
) -> Result<(), IntegrateError> {
    let last = *profile.samples.last().expect("advance on empty profile");
    let y0 = [last.u1, last.u2, last.w1, last.w2, last.q];
    let mut drv = Dopri5::new(last.t, y0, rhs5(*p), *controls).map_err(IntegrateError::Ode)?;
    while drv.t < t_end {
        let step = drv.step(t_end)?;
        if let Some((component, t)) = zero_crossing(&step) {
            return Err(IntegrateError::Diverged { component, t });
        }
        profile.push(Sample {
            t: step.t1,
            u1: step.y1[0],
            u2: step.y1[1],
            w1: step.y1[2],
            w2: step.y1[3],
            q: step.y1[4],
        });
    }
    Ok(())
}

/// Detect a field crossing zero inside an accepted step and refine the
/// crossing time on the Hermite dense output.
pub fn zero_crossing(step: &crate::ode::AcceptedStep<5>) -> Option<(usize, f64)> {
    for (idx, component) in [(0usize, 1usize), (1, 2)] {
        if step.y1[idx] >= 0.0 {
            let f = |t: f64| {
                hermite(
                    step.t0,
                    step.t1,
                    step.y0[idx],
                    step.f0[idx],
                    step.y1[idx],
                    step.f1[idx],
                    t,
                )
            };
            let t = if step.y0[idx] < 0.0 {
                bisect_root(step.t0, step.t1, f(step.t0), 1e-10, f)
            } else {
                step.t0
            };
            return Some((component, t));
        }
    }
    None
}

/// Starting profile for the initial problem at a given `eps` height.
pub fn start_profile(
    p: &ModelParams,
    v0: f64,
    ln_eps: f64,
    r_start: f64,
) -> Result<RadialProfile, OriginError> {
    let s = origin_start(p, v0, ln_eps, r_start)?;
    let mut profile = RadialProfile::new(OriginMeta {
        n1: p.n1,
        n2: p.n2,
        v0,
        ln_eps,
        r_start: s.t.exp(),
    });
    profile.push(Sample {
        t: s.t,
        u1: s.u1,
        u2: s.u2,
        w1: s.w1,
        w2: s.w2,
        q: 0.0,
    });
    Ok(profile)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::{force_terms, pohozaev_residual, Component};

    fn su3() -> ModelParams {
        ModelParams::new(1.0, 1.0, 0, 0).unwrap()
    }

    #[test]
    fn rhs_free_logarithm_regime() {
        let p = su3();
        let s = RadialState {
            t: 0.0,
            u1: -800.0,
            u2: -900.0,
            w1: 3.0,
            w2: -1.0,
        };
        let (dw1, dw2) = system_rhs(&p, &s).unwrap();
        assert_eq!((dw1, dw2), (0.0, 0.0));
    }

    #[test]
    fn rhs_small_amplitude_value() {
        // At u1 = u2 = -10, t = 0 the leading term is -(e^{-10}) for both.
        let p = su3();
        let s = RadialState {
            t: 0.0,
            u1: -10.0,
            u2: -10.0,
            w1: 0.0,
            w2: 0.0,
        };
        let (dw1, dw2) = system_rhs(&p, &s).unwrap();
        let lead = -(-10.0f64).exp();
        assert!((dw1 / lead - 1.0).abs() < 1e-3);
        assert!((dw2 / lead - 1.0).abs() < 1e-3);
    }

    #[test]
    fn linear_combination_identities() {
        // a2 dw1 + (1+a1) dw2 = e^{2t} (A-B) F2 and the mirrored form.
        let p = ModelParams::new(0.8, 2.5, 1, 0).unwrap();
        let mut state = 0xdeadbeefcafef00du64;
        let mut next = || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..1000 {
            let s = RadialState {
                t: -2.0 + 4.0 * next(),
                u1: -25.0 * next() - 0.1,
                u2: -25.0 * next() - 0.1,
                w1: 4.0 * next() - 2.0,
                w2: 4.0 * next() - 2.0,
            };
            let (dw1, dw2) = system_rhs(&p, &s).unwrap();
            let (f1, f2) = force_terms(&p, s.u1, s.u2);
            let e2t = (2.0 * s.t).exp();
            let ab = p.big_a - p.big_b;
            let lhs1 = p.a2 * dw1 + (1.0 + p.a1) * dw2;
            let lhs2 = (1.0 + p.a2) * dw1 + p.a1 * dw2;
            // normalize by term magnitudes (F_k itself cancels internally)
            let mag = e2t
                * ab
                * ((1.0 + p.a1) * (2.0 * s.u1).exp()
                    + s.u1.exp()
                    + (1.0 + p.a2) * (2.0 * s.u2).exp()
                    + s.u2.exp()
                    + (p.a1 + p.a2) * (s.u1 + s.u2).exp());
            let scale = mag.max(1e-300);
            assert!((lhs1 - e2t * ab * f2).abs() / scale < 1e-12);
            assert!((lhs2 - e2t * ab * f1).abs() / scale < 1e-12);
        }
    }

    #[test]
    fn origin_start_zero_vortex() {
        // N = 0: u_k(r0) = v_k(0) + c_k r0^2, w_k = 2 c_k r0^2.
        let p = su3();
        let (v0, ln_eps, r0) = (-2.0, -9.0, 1e-3);
        let s = origin_start(&p, v0, ln_eps, r0).unwrap();
        let ev1 = v0.exp();
        let ev2 = ln_eps.exp();
        let g1 = 4.0 * ev1 * ev1 - 2.0 * ev1 - 2.0 * ev2 * ev2 + ev2 - ev1 * ev2;
        let c1 = 0.25 * g1;
        assert!((s.u1 - (v0 + c1 * r0 * r0)).abs() < 1e-15);
        assert!((s.w1 - 2.0 * c1 * r0 * r0).abs() < 1e-15);
    }

    #[test]
    fn origin_start_vortex_slope() {
        // N1 = 1 forces w1 -> 2 N1 as r -> 0.
        let p = ModelParams::new(1.0, 1.0, 1, 0).unwrap();
        let s = origin_start(&p, -1.0, -8.0, 1e-5).unwrap();
        assert!((s.w1 - 2.0).abs() < 1e-9);
        assert!((s.u1 - (2.0 * (1e-5f64).ln() - 1.0)).abs() < 1e-9);
    }

    #[test]
    fn origin_start_eps_shift_linearity() {
        let p = su3();
        let a = origin_start(&p, -2.0, -10.0, 1e-4).unwrap();
        let b = origin_start(&p, -2.0, -12.0, 1e-4).unwrap();
        assert!(((a.u2 - b.u2) - 2.0).abs() < 1e-8);
    }

    #[test]
    fn free_logarithm_advance_is_linear() {
        let p = su3();
        let origin = OriginMeta {
            n1: 0,
            n2: 0,
            v0: -750.0,
            ln_eps: -800.0,
            r_start: 1.0,
        };
        let mut profile = RadialProfile::new(origin);
        profile.push(Sample {
            t: 0.0,
            u1: -750.0,
            u2: -800.0,
            w1: -3.0,
            w2: -4.0,
            q: 0.0,
        });
        advance(&p, &mut profile, 8.0, &OdeControls::default()).unwrap();
        let last = profile.samples.last().unwrap();
        assert!((last.u1 - (-750.0 - 3.0 * 8.0)).abs() < 1e-10);
        assert!((last.u2 - (-800.0 - 4.0 * 8.0)).abs() < 1e-10);
        assert_eq!(pohozaev_residual(&p, &profile), 0.0);
    }

    #[test]
    fn symmetric_data_preserves_equality() {
        // a1 = a2, N1 = N2, u1(0) = u2(0): the diagonal is invariant.
        let p = su3();
        let ln_eps = -6.0;
        let mut profile = start_profile(&p, ln_eps, ln_eps, 1e-4).unwrap();
        advance(&p, &mut profile, 3.0, &OdeControls::default()).unwrap();
        let mut worst: f64 = 0.0;
        for s in &profile.samples {
            worst = worst.max((s.u1 - s.u2).abs());
        }
        assert!(worst < 1e-9, "diagonal drift {worst}");
    }

    #[test]
    fn diverged_run_reports_crossing() {
        // Huge eps: the second field is pushed above zero quickly.
        let p = su3();
        let mut profile = start_profile(&p, -0.05, -0.02, 1e-4).unwrap();
        let err = advance(&p, &mut profile, 20.0, &OdeControls::default());
        match err {
            Err(IntegrateError::Diverged { component, .. }) => {
                assert!(component == 1 || component == 2);
            }
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn interval_mass_consistcar_with_ledger_tail() {
        // short symmetric run: mass over full window is positive and finite
        let p = su3();
        let mut profile = start_profile(&p, -4.0, -4.0, 1e-4).unwrap();
        advance(&p, &mut profile, 1.0, &OdeControls::default()).unwrap();
        let m1 = crate::profile::interval_mass(
            &profile,
            profile.t_min(),
            profile.t_max(),
            Component::First,
        );
        assert!(m1 > 0.0 && m1.is_finite());
    }
}
