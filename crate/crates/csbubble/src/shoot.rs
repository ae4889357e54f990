//! The system shooter: run the two-component initial problem at a given
//! interior height `eps`, detect the event radii that organize a bubbling
//! profile, extract far-field exponents, and drive `eps` sweeps.
//!
//! Event order along a clean bubbling run:
//! `R1` - first intersection of the components (the rising second field
//! catches the first), `R2` - slope peak of the second field, `R3` -
//! second intersection, `R4` - radius where the first field's slope
//! crosses `-2` (generic case only), `R5` - third intersection if any.

use std::io::{self, Write};

use thiserror::Error;

use crate::model::{limit_constants, region_report, ExponentPair, ModelParams};
use crate::ode::{bisect_root, exp_guard, hermite, AcceptedStep, Dopri5, OdeControls, OdeError};
use crate::profile::{fmt_f64, interval_mass, pohozaev_residual, Component, RadialProfile, Sample};
use crate::scalar::{ScalarProfile, ScalarSolution};
use crate::system::{rhs5, start_profile, zero_crossing, OriginError};

#[derive(Debug, Error)]
pub enum ShootError {
    #[error("exponent pair ({alpha1}, {alpha2}) is not on the construction line: {reasons}")]
    NotInSigma {
        alpha1: f64,
        alpha2: f64,
        reasons: String,
    },
    #[error("eps must lie in (0, 1), got {0}")]
    BadEps(f64),
    #[error(transparent)]
    Origin(#[from] OriginError),
}

#[derive(Debug, Clone, Copy)]
pub struct ShootControls {
    pub ode: OdeControls,
    pub r_start: f64,
    /// Hard cap on log-radius; `r_max = e^{t_cap}`.
    pub t_cap: f64,
    /// Remaining slope-drift bound below which the far field counts as
    /// stabilized.
    pub tail_tol: f64,
    /// Minimum `u1 - u2` separation before the first intersection is armed.
    pub separation: f64,
    /// Bisection tolerance for event times.
    pub root_tol: f64,
    /// Critical-case slope margin: the first field's slope must stay above
    /// `-2 - theta_critical` when the outer bubble is absent.
    pub theta_critical: f64,
}

impl Default for ShootControls {
    fn default() -> Self {
        Self {
            ode: OdeControls::default(),
            r_start: 1e-4,
            t_cap: 60.0,
            tail_tol: 1e-8,
            separation: 5.0,
            root_tol: 1e-10,
            theta_critical: 0.25,
        }
    }
}

/// Refined event location with the interpolated state there.
#[derive(Debug, Clone, Copy)]
pub struct EventInfo {
    pub t: f64,
    pub r: f64,
    pub u1: f64,
    pub u2: f64,
    pub w1: f64,
    pub w2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Classification {
    EntireNontopological,
    CrossedZero { component: usize, t: f64 },
    NotConverged { reason: String },
}

impl Classification {
    pub fn label(&self) -> &'static str {
        match self {
            Classification::EntireNontopological => "entire-nontopological",
            Classification::CrossedZero { .. } => "crossed-zero",
            Classification::NotConverged { .. } => "not-converged",
        }
    }
}

/// Per-run record: event radii, slopes there, extracted exponents,
/// interval masses, the conservation residual and the classification.
#[derive(Debug, Clone)]
pub struct ShootReport {
    pub eps: f64,
    pub classification: Classification,
    pub r1: Option<EventInfo>,
    pub r2: Option<EventInfo>,
    pub r3: Option<EventInfo>,
    pub r4: Option<EventInfo>,
    pub r5: Option<EventInfo>,
    pub alpha1_eps: f64,
    pub alpha2_eps: f64,
    pub alpha_tail_bound: f64,
    /// `∫ r e^{u1} dr` over `[R1, R3]`.
    pub mass1_r1r3: f64,
    /// `∫ r e^{u2} dr` over `[R1, R3]`.
    pub mass2_r1r3: f64,
    /// `∫ r e^{u1} dr` over `[R3, r_max]`.
    pub mass1_tail: f64,
    /// `∫ r e^{u2} dr` over `[R3, r_max]`.
    pub mass2_tail: f64,
    pub sup_u2: f64,
    pub pohozaev_residual: f64,
    pub alpha_in_omega: Option<bool>,
    pub violations: Vec<String>,
    pub profile: RadialProfile,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Phase {
    Separation,
    AwaitR1,
    ConfirmR1,
    AwaitR2,
    AwaitR3,
    ConfirmR3,
    AfterR3,
    ConfirmR5,
    Frozen,
}

fn udiff_at(s: &AcceptedStep<5>, t: f64) -> f64 {
    hermite(
        s.t0,
        s.t1,
        s.y0[0] - s.y0[1],
        s.f0[0] - s.f0[1],
        s.y1[0] - s.y1[1],
        s.f1[0] - s.f1[1],
        t,
    )
}

fn comp_at(s: &AcceptedStep<5>, idx: usize, t: f64) -> f64 {
    hermite(s.t0, s.t1, s.y0[idx], s.f0[idx], s.y1[idx], s.f1[idx], t)
}

/// Refine a root of `f` inside an accepted step; if the sign change
/// already happened at the left endpoint, return it directly.
fn refine_root(
    step: &AcceptedStep<5>,
    tol: f64,
    f: impl Fn(f64) -> f64 + Copy,
) -> f64 {
    let f0 = f(step.t0);
    let f1 = f(step.t1);
    if f0 == 0.0 || (f0 > 0.0) == (f1 > 0.0) {
        return step.t0;
    }
    bisect_root(step.t0, step.t1, f0, tol, f)
}

fn event_at(s: &AcceptedStep<5>, t: f64) -> EventInfo {
    EventInfo {
        t,
        r: t.exp(),
        u1: comp_at(s, 0, t),
        u2: comp_at(s, 1, t),
        w1: comp_at(s, 2, t),
        w2: comp_at(s, 3, t),
    }
}

/// Conservative first-order bound on the remaining slope drift, used as
/// the stopping criterion. Degenerates near `w = -2`, which only delays
/// the stop; extraction itself uses [`tail_extract`].
fn stop_bound(p: &ModelParams, t: f64, u1: f64, u2: f64, w1: f64, w2: f64) -> f64 {
    let x1 = exp_guard(2.0 * t + u1);
    let x2 = exp_guard(2.0 * t + u2);
    let d1 = (2.0 + w1).abs().max(1e-12);
    let d2 = (2.0 + w2).abs().max(1e-12);
    ((1.0 + p.a1) * x1 / d1 + p.a1 * x2 / d2).max(p.a2 * x1 / d1 + (1.0 + p.a2) * x2 / d2)
}

/// Far-field exponent extraction from a tail state.
///
/// The dominant component's tail obeys the closed flow
/// `dw/dt = -(1+a) X`, `dX/dt = (2+w) X` with `X = e^{2t+u}`, which
/// conserves `(2+w)^2/2 + (1+a) X`; sending `X -> 0` gives the terminal
/// slope exactly, even when `w` sits at `-2` (the critical case). The
/// subdominant component is corrected to first order in its own tail
/// integral. Returns `(alpha1, alpha2, error_bound)`.
fn tail_extract(
    p: &ModelParams,
    t: f64,
    u1: f64,
    u2: f64,
    w1: f64,
    w2: f64,
) -> Option<(f64, f64, f64)> {
    let x1 = exp_guard(2.0 * t + u1);
    let x2 = exp_guard(2.0 * t + u2);
    // mirrored roles: dom = amplitude-dominant component
    let (a_dom, a_sub, u_dom, u_sub, w_dom, w_sub, x_dom, x_sub) = if u1 >= u2 {
        (p.a1, p.a2, u1, u2, w1, w2, x1, x2)
    } else {
        (p.a2, p.a1, u2, u1, w2, w1, x2, x1)
    };
    let disc = (2.0 + w_dom) * (2.0 + w_dom) + 2.0 * (1.0 + a_dom) * x_dom;
    let w_dom_pure = -2.0 - disc.sqrt();
    // ∫ X_dom dt over the remaining tail, from the invariant.
    let int_dom = (w_dom - w_dom_pure) / (1.0 + a_dom);
    let d_sub = (2.0 + w_sub).abs().max(1e-9);
    let int_sub = x_sub / d_sub;
    let w_dom_inf = w_dom_pure + a_dom * int_sub;
    let w_sub_inf = w_sub + a_sub * int_dom - (1.0 + a_sub) * int_sub;
    if !(w_dom_inf < -2.0 && w_sub_inf < -2.0) {
        return None;
    }
    // Neglected pieces: quadratic force terms of the dominant flow, the
    // frozen-rate error of the subdominant integral, cross couplings.
    let sub_drift = (a_sub * int_dom + (1.0 + a_sub) * int_sub).abs();
    let bound = (1.0 + a_dom) * (1.0 + a_dom) * exp_guard(u_dom) * int_dom
        + (a_dom + a_sub) * exp_guard(u_sub) * int_dom
        + int_sub * sub_drift / d_sub
        + a_dom * int_sub * int_sub;
    let (w1_inf, w2_inf) = if u1 >= u2 {
        (w_dom_inf, w_sub_inf)
    } else {
        (w_sub_inf, w_dom_inf)
    };
    Some((-w1_inf / 2.0, -w2_inf / 2.0, bound))
}

/// Integrate one `eps` member of the family and classify it.
///
/// `v0` must come from the scalar solve for `gamma_of(e)`; the pair `e`
/// must lie on the construction line.
pub fn shoot(
    p: &ModelParams,
    e: ExponentPair,
    eps: f64,
    v0: f64,
    controls: &ShootControls,
) -> Result<ShootReport, ShootError> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(ShootError::BadEps(eps));
    }
    let bubble = limit_constants(p, e).map_err(|_| {
        let rr = region_report(p, e);
        ShootError::NotInSigma {
            alpha1: e.alpha1,
            alpha2: e.alpha2,
            reasons: rr.sigma_violations(p, e).join(", "),
        }
    })?;
    let critical = bubble.e == 0.0;

    let mut profile = start_profile(p, v0, eps.ln(), controls.r_start)?;
    let start = profile.samples[0];
    let mut drv = match Dopri5::new(
        start.t,
        [start.u1, start.u2, start.w1, start.w2, 0.0],
        rhs5(*p),
        controls.ode,
    ) {
        Ok(d) => d,
        Err(e) => {
            return Ok(failed_report(p, eps, profile, not_converged(e.to_string())));
        }
    };

    let mut phase = Phase::Separation;
    let mut pending: Option<EventInfo> = None;
    let (mut r1, mut r2, mut r3, mut r4, mut r5) = (None, None, None, None, None);
    let mut violations: Vec<String> = Vec::new();
    let mut w1_dip: Option<f64> = None;
    let mut classification: Option<Classification> = None;

    // Initial separation may already hold at the starting radius.
    if start.u1 - start.u2 >= controls.separation {
        phase = Phase::AwaitR1;
    }

    while drv.t < controls.t_cap {
        let step = match drv.step(controls.t_cap) {
            Ok(s) => s,
            Err(err) => {
                classification = Some(match err {
                    OdeError::Overflow { t } | OdeError::StepUnderflow { t, .. } => {
                        Classification::NotConverged {
                            reason: format!("integrator stop at t = {t:.3}: {err}"),
                        }
                    }
                    OdeError::StepBudget { t } => Classification::NotConverged {
                        reason: format!("step budget at t = {t:.3}"),
                    },
                });
                break;
            }
        };
        if let Some((component, t)) = zero_crossing(&step) {
            classification = Some(Classification::CrossedZero { component, t });
            break;
        }
        profile.push(Sample {
            t: step.t1,
            u1: step.y1[0],
            u2: step.y1[1],
            w1: step.y1[2],
            w2: step.y1[3],
            q: step.y1[4],
        });

        let diff1 = step.y1[0] - step.y1[1];
        match phase {
            Phase::Separation => {
                if diff1 >= controls.separation {
                    phase = Phase::AwaitR1;
                }
            }
            Phase::AwaitR1 => {
                if diff1 < 0.0 {
                    let t = refine_root(&step, controls.root_tol, |t| udiff_at(&step, t));
                    pending = Some(event_at(&step, t));
                    phase = Phase::ConfirmR1;
                }
            }
            Phase::ConfirmR1 => {
                if diff1 < 0.0 {
                    r1 = pending.take();
                    phase = Phase::AwaitR2;
                } else {
                    pending = None;
                    phase = Phase::AwaitR1;
                }
            }
            Phase::AwaitR2 => {
                if diff1 > 0.0 {
                    violations.push(format!(
                        "fields re-crossed before the slope peak at t = {:.4}",
                        step.t1
                    ));
                    phase = Phase::Frozen;
                } else if step.y1[3] < 0.0 {
                    let t = refine_root(&step, controls.root_tol, |t| comp_at(&step, 3, t));
                    r2 = Some(event_at(&step, t));
                    phase = Phase::AwaitR3;
                }
            }
            Phase::AwaitR3 => {
                if step.y1[3] > 0.0 {
                    violations.push(format!(
                        "second slope returned positive between peak and second crossing at t = {:.4}",
                        step.t1
                    ));
                    phase = Phase::Frozen;
                } else if diff1 > 0.0 {
                    let t = refine_root(&step, controls.root_tol, |t| udiff_at(&step, t));
                    pending = Some(event_at(&step, t));
                    phase = Phase::ConfirmR3;
                }
            }
            Phase::ConfirmR3 => {
                if diff1 > 0.0 {
                    r3 = pending.take();
                    phase = Phase::AfterR3;
                } else {
                    pending = None;
                    phase = Phase::AwaitR3;
                }
            }
            Phase::AfterR3 | Phase::ConfirmR5 => {
                if phase == Phase::ConfirmR5 {
                    if diff1 < 0.0 {
                        r5 = pending.take();
                    } else {
                        pending = None;
                    }
                    phase = Phase::AfterR3;
                } else if r5.is_none() && diff1 < 0.0 {
                    let t = refine_root(&step, controls.root_tol, |t| udiff_at(&step, t));
                    pending = Some(event_at(&step, t));
                    phase = Phase::ConfirmR5;
                }
                if !critical && r4.is_none() && step.y1[2] < -2.0 {
                    let t = refine_root(&step, controls.root_tol, |t| comp_at(&step, 2, t) + 2.0);
                    r4 = Some(event_at(&step, t));
                }
                if critical && w1_dip.is_none() && step.y1[2] < -2.0 - controls.theta_critical {
                    w1_dip = Some(step.t1);
                }
            }
            Phase::Frozen => {}
        }

        // Far-field stabilization: both slopes committed below -2 and the
        // remaining drift bound small.
        let (w1, w2) = (step.y1[2], step.y1[3]);
        if w1 < -2.0
            && w2 < -2.0
            && stop_bound(p, step.t1, step.y1[0], step.y1[1], w1, w2) < controls.tail_tol
        {
            break;
        }
    }

    if critical {
        if let Some(t) = w1_dip {
            violations.push(format!(
                "first slope crossed -2 - {} at t = {t:.4} in the critical case",
                controls.theta_critical
            ));
        }
    }

    let last = *profile.samples.last().unwrap();
    let extracted = tail_extract(p, last.t, last.u1, last.u2, last.w1, last.w2);
    let classification = classification.unwrap_or_else(|| match extracted {
        Some((_, _, bound)) if bound < 0.01 => Classification::EntireNontopological,
        _ => Classification::NotConverged {
            reason: format!(
                "slopes not stabilized below -2 by t = {:.2} (w = {:.4}, {:.4})",
                last.t, last.w1, last.w2
            ),
        },
    });

    let (alpha1, alpha2, bound) = match (&classification, extracted) {
        (Classification::EntireNontopological, Some((a1, a2, b))) => (a1, a2, b / 2.0),
        _ => (f64::NAN, f64::NAN, f64::NAN),
    };

    let (m1a, m2a, m1t, m2t) = match (&r1, &r3) {
        (Some(e1), Some(e3)) => (
            interval_mass(&profile, e1.t, e3.t, Component::First),
            interval_mass(&profile, e1.t, e3.t, Component::Second),
            interval_mass(&profile, e3.t, profile.t_max(), Component::First),
            interval_mass(&profile, e3.t, profile.t_max(), Component::Second),
        ),
        _ => (f64::NAN, f64::NAN, f64::NAN, f64::NAN),
    };

    let alpha_in_omega = alpha1
        .is_finite()
        .then(|| region_report(p, ExponentPair::new(alpha1, alpha2)).in_omega);

    Ok(ShootReport {
        eps,
        classification,
        r1,
        r2,
        r3,
        r4,
        r5,
        alpha1_eps: alpha1,
        alpha2_eps: alpha2,
        alpha_tail_bound: bound,
        mass1_r1r3: m1a,
        mass2_r1r3: m2a,
        mass1_tail: m1t,
        mass2_tail: m2t,
        sup_u2: profile.sup_u(Component::Second),
        pohozaev_residual: pohozaev_residual(p, &profile),
        alpha_in_omega,
        violations,
        profile,
    })
}

fn not_converged(reason: String) -> Classification {
    Classification::NotConverged { reason }
}

fn failed_report(
    p: &ModelParams,
    eps: f64,
    profile: RadialProfile,
    classification: Classification,
) -> ShootReport {
    ShootReport {
        eps,
        classification,
        r1: None,
        r2: None,
        r3: None,
        r4: None,
        r5: None,
        alpha1_eps: f64::NAN,
        alpha2_eps: f64::NAN,
        alpha_tail_bound: f64::NAN,
        mass1_r1r3: f64::NAN,
        mass2_r1r3: f64::NAN,
        mass1_tail: f64::NAN,
        mass2_tail: f64::NAN,
        sup_u2: profile.sup_u(Component::Second),
        pohozaev_residual: pohozaev_residual(p, &profile),
        alpha_in_omega: None,
        violations: Vec::new(),
        profile,
    }
}

/// Run a strictly decreasing `eps` schedule; failures are recorded in their
/// report, never fatal to the sweep.
pub fn sweep(
    p: &ModelParams,
    e: ExponentPair,
    schedule: &[f64],
    v0: f64,
    controls: &ShootControls,
) -> Result<Vec<ShootReport>, ShootError> {
    for w in schedule.windows(2) {
        assert!(w[1] < w[0], "eps schedule must be strictly decreasing");
    }
    let mut out = Vec::with_capacity(schedule.len());
    for &eps in schedule {
        out.push(shoot(p, e, eps, v0, controls)?);
    }
    Ok(out)
}

/// Sup-norm distance between the run's first component and the scalar
/// profile over `[r_start, window_r]`, sampled on the coarser of the two
/// grids with Hermite interpolation on the finer.
pub fn burn_in_check(report: &ShootReport, scalar: &ScalarSolution, window_r: f64) -> f64 {
    burn_in_sup_diff(&report.profile, &scalar.profile, window_r)
}

pub fn burn_in_sup_diff(profile: &RadialProfile, scalar: &ScalarProfile, window_r: f64) -> f64 {
    let t_lo = profile.t_min().max(scalar.t_min());
    let t_hi = window_r.ln().min(profile.t_max()).min(scalar.t_max());
    let in_window = |t: f64| t >= t_lo && t <= t_hi;
    let n_sys = profile.samples.iter().filter(|s| in_window(s.t)).count();
    let n_sca = scalar.samples.iter().filter(|s| in_window(s.t)).count();
    let mut sup: f64 = 0.0;
    if n_sys <= n_sca {
        for s in profile.samples.iter().filter(|s| in_window(s.t)) {
            sup = sup.max((s.u1 - scalar.u_at(s.t)).abs());
        }
    } else {
        for s in scalar.samples.iter().filter(|s| in_window(s.t)) {
            sup = sup.max((profile.u_at(Component::First, s.t) - s.u).abs());
        }
    }
    sup
}

fn opt_field(v: &Option<EventInfo>) -> String {
    v.map_or(String::new(), |e| fmt_f64(e.r))
}

fn num_field(x: f64) -> String {
    if x.is_finite() {
        fmt_f64(x)
    } else {
        String::new()
    }
}

/// Sweep table CSV with one row per run; absent events and failed-run
/// numerics are empty fields.
pub fn write_sweep_csv(reports: &[ShootReport], out: &mut impl Write) -> io::Result<()> {
    writeln!(
        out,
        "eps,R1,R2,R3,R4,R5,alpha1,alpha2,mass12_13,mass11_13,mass1_tail,mass2_tail,pohozaev_residual,classification"
    )?;
    for r in reports {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            fmt_f64(r.eps),
            opt_field(&r.r1),
            opt_field(&r.r2),
            opt_field(&r.r3),
            opt_field(&r.r4),
            opt_field(&r.r5),
            num_field(r.alpha1_eps),
            num_field(r.alpha2_eps),
            num_field(r.mass2_r1r3),
            num_field(r.mass1_r1r3),
            num_field(r.mass1_tail),
            num_field(r.mass2_tail),
            fmt_f64(r.pohozaev_residual),
            r.classification.label()
        )?;
    }
    Ok(())
}

/// Geometric `eps` schedule: `count` values from `start` with ratio `ratio`.
pub fn geometric_schedule(start: f64, ratio: f64, count: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(count);
    let mut e = start;
    for _ in 0..count {
        out.push(e);
        e *= ratio;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::alpha_of_gamma;
    use crate::scalar::{solve_scalar, ScalarControls};

    fn su3() -> ModelParams {
        ModelParams::new(1.0, 1.0, 0, 0).unwrap()
    }

    #[test]
    fn bad_eps_rejected() {
        let p = su3();
        let e = alpha_of_gamma(&p, 3.0);
        assert!(matches!(
            shoot(&p, e, 1.5, -3.0, &ShootControls::default()),
            Err(ShootError::BadEps(_))
        ));
        assert!(matches!(
            shoot(&p, e, 0.0, -3.0, &ShootControls::default()),
            Err(ShootError::BadEps(_))
        ));
    }

    #[test]
    fn off_line_pair_rejected() {
        let p = su3();
        let e = ExponentPair::new(1.7, 3.0);
        match shoot(&p, e, 1e-4, -3.0, &ShootControls::default()) {
            Err(ShootError::NotInSigma { reasons, .. }) => {
                assert!(reasons.contains("off the line"), "{reasons}");
            }
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn geometric_schedule_shape() {
        let s = geometric_schedule(1e-2, 0.1, 4);
        assert_eq!(s.len(), 4);
        assert!((s[3] - 1e-5).abs() < 1e-18);
    }

    /// Full reference run at a moderate eps: all events in order, masses
    /// near their limits, exponents near the target pair.
    #[test]
    fn su3_reference_shot_structure() {
        let p = su3();
        let e = alpha_of_gamma(&p, 3.0);
        let scalar = solve_scalar(&p, 3.0, &ScalarControls::default()).unwrap();
        let report = shoot(&p, e, 1e-6, scalar.v0, &ShootControls::default()).unwrap();
        assert_eq!(
            report.classification,
            Classification::EntireNontopological,
            "{:?}",
            report.classification
        );
        assert!(report.violations.is_empty(), "{:?}", report.violations);
        let (r1, r2, r3) = (
            report.r1.expect("R1"),
            report.r2.expect("R2"),
            report.r3.expect("R3"),
        );
        let r4 = report.r4.expect("R4");
        assert!(r1.t < r2.t && r2.t < r3.t && r3.t < r4.t);
        // slope targets: (-2 gamma, D-2) at R1, (E-2, -(D+2)) at R3
        assert!((r1.w1 + 6.0).abs() < 0.2, "w1(R1) = {}", r1.w1);
        assert!((r1.w2 - 3.0).abs() < 0.2, "w2(R1) = {}", r1.w2);
        assert!((r3.w1 + 1.0).abs() < 0.2, "w1(R3) = {}", r3.w1);
        assert!((r3.w2 + 7.0).abs() < 0.2, "w2(R3) = {}", r3.w2);
        // exponent extraction approaches (1.5, 3)
        assert!(
            (report.alpha1_eps - 1.5).abs() < 0.1,
            "alpha1 = {}",
            report.alpha1_eps
        );
        assert!(
            (report.alpha2_eps - 3.0).abs() < 0.1,
            "alpha2 = {}",
            report.alpha2_eps
        );
        assert_eq!(report.alpha_in_omega, Some(true));
        // conservation
        assert!(
            report.pohozaev_residual < 1e-6,
            "residual {}",
            report.pohozaev_residual
        );

        // between-event sign structure and monotonicity
        let samples = &report.profile.samples;
        for s in samples
            .iter()
            .filter(|s| s.t > r1.t + 1e-6 && s.t < r2.t - 1e-6)
        {
            assert!(
                s.w2 > 0.0,
                "w2 must rise on (R1, R2), got {} at t = {}",
                s.w2,
                s.t
            );
            assert!(s.u1 < s.u2, "ordering broken on (R1, R2) at t = {}", s.t);
        }
        for s in samples
            .iter()
            .filter(|s| s.t > r2.t + 1e-6 && s.t < r3.t - 1e-6)
        {
            assert!(s.w2 < 0.0, "w2 must fall on (R2, R3) at t = {}", s.t);
            assert!(s.u1 < s.u2, "ordering broken on (R2, R3) at t = {}", s.t);
        }
        let mut prev_w1 = f64::INFINITY;
        for s in samples.iter().filter(|s| s.t > r3.t + 1e-6) {
            assert!(s.u2 < s.u1, "ordering broken past R3 at t = {}", s.t);
            assert!(
                s.w1 < prev_w1 + 1e-12,
                "w1 not decreasing past R3 at t = {}",
                s.t
            );
            prev_w1 = s.w1;
            // far-field slope stays below -2 - (alpha2 - 1)
            assert!(
                s.w2 < -2.0 - 2.0,
                "w2 = {} above the far-field bound at t = {}",
                s.w2,
                s.t
            );
        }
    }
}
