//! Shooting solver for the scalar Chern-Simons-Higgs profile `U`: the
//! limit of the first component inside the first intersection radius, and
//! the source of the initial height `V(0)` consumed by the system shooter.
//!
//! In log-radius coordinates the profile obeys
//! `dw/dt = e^{2t} [ (1+a1)^2 e^{2u} - (1+a1) e^{u} ]` with `w = r U'`.
//! Below the equilibrium level `-ln(1+a1)` the right side is strictly
//! negative, so `w` decreases monotonically; a run either turns over and
//! decays with some exponent `gamma = -w(inf)/2`, or creeps up to the
//! equilibrium and blows up. Bisection on `V(0)` separates the branches.

use std::io::{self, Write as IoWrite};

use thiserror::Error;

use crate::model::ModelParams;
use crate::ode::{exp_guard, hermite, Dopri5, OdeControls, OverflowSignal, EXP_OVERFLOW};
use crate::profile::{fmt_f64, simpson};
use crate::system::OriginError;

#[derive(Debug, Error)]
pub enum ScalarError {
    #[error("gamma target {0} must exceed N1 + 2 = {1}")]
    GammaTooSmall(f64, f64),
    #[error("no bracket found for gamma = {target} over V0 in [{lo}, {hi}]")]
    BracketNotFound { target: f64, lo: f64, hi: f64 },
    #[error("bisection exhausted without meeting tolerance (best gamma = {best})")]
    ToleranceNotMet { best: f64 },
    #[error(transparent)]
    Origin(#[from] OriginError),
    #[error("integration failed: {0}")]
    Integration(String),
}

#[derive(Debug, Clone, Copy)]
pub struct ScalarControls {
    pub ode: OdeControls,
    pub r_start: f64,
    pub tol_gamma: f64,
    /// Tail truncation: stop once `r^2 e^u` falls below this...
    pub tail_x: f64,
    /// ...and the slope has stabilized to this over one decade of `r`.
    pub stab_tol: f64,
    pub v0_min: f64,
    pub v0_max: f64,
    pub v0_step: f64,
    pub t_cap: f64,
}

impl Default for ScalarControls {
    fn default() -> Self {
        Self {
            ode: OdeControls::default(),
            r_start: 1e-4,
            tol_gamma: 1e-8,
            tail_x: 1e-14,
            stab_tol: 1e-10,
            v0_min: -60.0,
            v0_max: 10.0,
            v0_step: 1.0,
            t_cap: 60.0,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ScalarSample {
    pub t: f64,
    pub u: f64,
    pub w: f64,
}

/// Single-component log-radius trajectory.
#[derive(Debug, Clone)]
pub struct ScalarProfile {
    pub samples: Vec<ScalarSample>,
    pub n1: u32,
    pub v0: f64,
    pub r_start: f64,
}

impl ScalarProfile {
    pub fn t_min(&self) -> f64 {
        self.samples.first().map_or(f64::NAN, |s| s.t)
    }

    pub fn t_max(&self) -> f64 {
        self.samples.last().map_or(f64::NAN, |s| s.t)
    }

    pub fn u_at(&self, t: f64) -> f64 {
        let n = self.samples.len();
        debug_assert!(n >= 2);
        let i = match self
            .samples
            .binary_search_by(|s| s.t.partial_cmp(&t).unwrap())
        {
            Ok(i) => i.min(n - 2),
            Err(0) => 0,
            Err(i) => (i - 1).min(n - 2),
        };
        let (a, b) = (&self.samples[i], &self.samples[i + 1]);
        hermite(a.t, b.t, a.u, a.w, b.u, b.w, t)
    }
}

/// Converged scalar solution: decay exponent, origin height, trajectory and
/// the quadrature mass `∫ r [(1+a1) e^U - (1+a1)^2 e^{2U}] dr`.
#[derive(Debug, Clone)]
pub struct ScalarSolution {
    pub gamma: f64,
    pub v0: f64,
    pub profile: ScalarProfile,
    pub mass: f64,
}

/// Slope rate of the scalar equation in log-radius coordinates.
pub fn scalar_rhs(p: &ModelParams, u: f64, _w: f64, t: f64) -> Result<f64, OverflowSignal> {
    let a2u = 2.0 * t + 2.0 * u;
    if a2u > EXP_OVERFLOW {
        return Err(OverflowSignal);
    }
    let c = 1.0 + p.a1;
    Ok(c * c * exp_guard(a2u) - c * exp_guard(2.0 * t + u))
}

fn rhs2(p: ModelParams) -> impl Fn(f64, &[f64; 2]) -> Result<[f64; 2], OverflowSignal> + Copy {
    move |t, y| Ok([y[1], scalar_rhs(&p, y[0], y[1], t)?])
}

/// Origin expansion of the scalar regular part `v = U - 2 N1 ln r`.
fn scalar_origin(p: &ModelParams, v0: f64, r: f64) -> ScalarSample {
    let c = 1.0 + p.a1;
    let ev = exp_guard(v0);
    let n = 2.0 * p.n1f();
    let terms = [(c * c * ev * ev, 2.0 * n), (-c * ev, n)];
    let mut dv = 0.0;
    let mut rdv = 0.0;
    for (coef, pw) in terms {
        let rp = r.powf(pw + 2.0);
        dv += coef * rp / ((pw + 2.0) * (pw + 2.0));
        rdv += coef * rp / (pw + 2.0);
    }
    ScalarSample {
        t: r.ln(),
        u: n * r.ln() + v0 + dv,
        w: n + rdv,
    }
}

/// Outcome of one shot: either the decaying branch with its extracted
/// exponent, or the branch that flattened toward the equilibrium level.
#[derive(Debug, Clone)]
pub enum ScalarShot {
    Decayed {
        gamma: f64,
        tail_bound: f64,
        profile: ScalarProfile,
    },
    TopologicalSide,
}

/// Integrate one origin height and classify the branch. The decaying branch
/// reports `gamma = -w/2` at truncation plus a tail-correction bound.
pub fn scalar_gamma(
    p: &ModelParams,
    v0: f64,
    controls: &ScalarControls,
) -> Result<ScalarShot, ScalarError> {
    let plateau = -(1.0 + p.a1).ln();
    let start = scalar_origin(p, v0, controls.r_start);
    let mut samples = vec![start];
    let mut drv = Dopri5::new(start.t, [start.u, start.w], rhs2(*p), controls.ode)
        .map_err(|e| ScalarError::Integration(e.to_string()))?;

    loop {
        if drv.t >= controls.t_cap {
            return Err(ScalarError::Integration(format!(
                "no branch decision by t = {} (V0 = {v0})",
                controls.t_cap
            )));
        }
        let step = drv
            .step(controls.t_cap)
            .map_err(|e| ScalarError::Integration(format!("{e} (V0 = {v0})")))?;
        let (t, u, w) = (step.t1, step.y1[0], step.y1[1]);
        samples.push(ScalarSample { t, u, w });

        if u >= plateau {
            return Ok(ScalarShot::TopologicalSide);
        }
        // Near-equilibrium creep: flat and close to the plateau at r > 10.
        if t > std::f64::consts::LN_10 && u > plateau - 0.5 && w.abs() < 1e-3 {
            return Ok(ScalarShot::TopologicalSide);
        }
        if w < -2.0 {
            let x = exp_guard(2.0 * t + u);
            if x < controls.tail_x && slope_stable(&samples, controls.stab_tol) {
                let c = 1.0 + p.a1;
                let x2 = exp_guard(2.0 * t + 2.0 * u);
                // Remaining slope drift, first order in the tail integrals.
                let drift = (-c * x + c * c * x2) / (2.0 + w).abs();
                let gamma = -(w + drift) / 2.0;
                let profile = ScalarProfile {
                    samples,
                    n1: p.n1,
                    v0,
                    r_start: controls.r_start,
                };
                return Ok(ScalarShot::Decayed {
                    gamma,
                    tail_bound: drift.abs(),
                    profile,
                });
            }
        }
    }
}

/// Whether the slope changed by less than `tol` over the last decade of `r`.
fn slope_stable(samples: &[ScalarSample], tol: f64) -> bool {
    let last = samples.last().unwrap();
    let t_back = last.t - std::f64::consts::LN_10;
    if samples[0].t > t_back {
        return false;
    }
    let i = samples.partition_point(|s| s.t < t_back);
    (samples[i].w - last.w).abs() < tol
}

/// Mass of a converged profile by quadrature:
/// `∫ r [(1+a1) e^U - (1+a1)^2 e^{2U}] dr`, including the analytic origin
/// head below `r_start` and the tail estimate beyond truncation.
pub fn scalar_mass(p: &ModelParams, profile: &ScalarProfile) -> f64 {
    let c = 1.0 + p.a1;
    let f = |t: f64| {
        let u = profile.u_at(t);
        c * exp_guard(2.0 * t + u) - c * c * exp_guard(2.0 * t + 2.0 * u)
    };
    let mut coarse = 0.0;
    let mut fine = 0.0;
    for win in profile.samples.windows(2) {
        coarse += simpson(&f, win[0].t, win[1].t, 2);
        fine += simpson(&f, win[0].t, win[1].t, 4);
    }
    let body = fine + (fine - coarse) / 15.0;
    let r0 = profile.r_start;
    let n = 2.0 * p.n1f();
    let ev = exp_guard(profile.v0);
    let head = c * ev * r0.powf(n + 2.0) / (n + 2.0)
        - c * c * ev * ev * r0.powf(2.0 * n + 2.0) / (2.0 * n + 2.0);
    let last = profile.samples.last().unwrap();
    let x = exp_guard(2.0 * last.t + last.u);
    let tail = c * x / (2.0 + last.w).abs();
    body + head + tail
}

/// Find the origin height whose decaying branch hits `gamma_target`:
/// direction-agnostic coarse scan over `V0`, then bisection.
pub fn solve_scalar(
    p: &ModelParams,
    gamma_target: f64,
    controls: &ScalarControls,
) -> Result<ScalarSolution, ScalarError> {
    let floor = p.n1f() + 2.0;
    if gamma_target <= floor {
        return Err(ScalarError::GammaTooSmall(gamma_target, floor));
    }

    // Signed excess of a shot relative to the target; the flattening branch
    // sorts above every decaying branch.
    let excess = |shot: &ScalarShot| -> f64 {
        match shot {
            ScalarShot::Decayed { gamma, .. } => gamma - gamma_target,
            ScalarShot::TopologicalSide => f64::INFINITY,
        }
    };

    let mut prev: Option<(f64, f64)> = None;
    let mut bracket: Option<((f64, f64), (f64, f64))> = None;
    let mut v0 = controls.v0_min;
    while v0 <= controls.v0_max + 1e-12 {
        if let Ok(shot) = scalar_gamma(p, v0, controls) {
            let ex = excess(&shot);
            if let ScalarShot::Decayed {
                gamma,
                tail_bound,
                profile,
            } = shot
            {
                if ex.abs() < controls.tol_gamma {
                    let _ = tail_bound;
                    let mass = scalar_mass(p, &profile);
                    return Ok(ScalarSolution {
                        gamma,
                        v0,
                        profile,
                        mass,
                    });
                }
            }
            if let Some((pv, pex)) = prev {
                if (pex < 0.0) != (ex < 0.0) {
                    bracket = Some(((pv, pex), (v0, ex)));
                    break;
                }
            }
            prev = Some((v0, ex));
        }
        v0 += controls.v0_step;
    }

    let ((mut lo, lo_ex), (mut hi, _)) = bracket.ok_or(ScalarError::BracketNotFound {
        target: gamma_target,
        lo: controls.v0_min,
        hi: controls.v0_max,
    })?;
    // Orient so that `lo` carries negative excess.
    if lo_ex > 0.0 {
        std::mem::swap(&mut lo, &mut hi);
    }

    let mut best: Option<(f64, ScalarShot)> = None;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let shot = scalar_gamma(p, mid, controls)?;
        let ex = excess(&shot);
        if let ScalarShot::Decayed { gamma, .. } = &shot {
            if ex.abs() < controls.tol_gamma {
                if let ScalarShot::Decayed { gamma, profile, .. } = shot {
                    let mass = scalar_mass(p, &profile);
                    return Ok(ScalarSolution {
                        gamma,
                        v0: mid,
                        profile,
                        mass,
                    });
                }
                unreachable!()
            }
            let better = match &best {
                Some((bg, _)) => (gamma - gamma_target).abs() < (bg - gamma_target).abs(),
                None => true,
            };
            if better {
                best = Some((*gamma, shot.clone()));
            }
        }
        if ex < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo).abs() < 1e-14 {
            break;
        }
    }
    match best {
        Some((gamma, ScalarShot::Decayed { profile, .. }))
            if (gamma - gamma_target).abs() < controls.tol_gamma =>
        {
            let mass = scalar_mass(p, &profile);
            Ok(ScalarSolution {
                gamma,
                v0: profile.v0,
                profile,
                mass,
            })
        }
        Some((gamma, _)) => Err(ScalarError::ToleranceNotMet { best: gamma }),
        None => Err(ScalarError::ToleranceNotMet { best: f64::NAN }),
    }
}

/// Scalar profile CSV: `t,r,U,rU',residual_mass` where the residual is the
/// running mass minus the converged `2 (gamma + N1)` estimate.
pub fn write_scalar_csv(
    p: &ModelParams,
    sol: &ScalarSolution,
    out: &mut impl IoWrite,
) -> io::Result<()> {
    writeln!(out, "t,r,U,rU',residual_mass")?;
    let c = 1.0 + p.a1;
    let target = 2.0 * (sol.gamma + p.n1f());
    let r0 = sol.profile.r_start;
    let n = 2.0 * p.n1f();
    let ev = exp_guard(sol.v0);
    let mut running = c * ev * r0.powf(n + 2.0) / (n + 2.0)
        - c * c * ev * ev * r0.powf(2.0 * n + 2.0) / (2.0 * n + 2.0);
    let f = |t: f64| {
        let u = sol.profile.u_at(t);
        c * exp_guard(2.0 * t + u) - c * c * exp_guard(2.0 * t + 2.0 * u)
    };
    let mut prev_t: Option<f64> = None;
    for s in &sol.profile.samples {
        if let Some(t0) = prev_t {
            running += simpson(&f, t0, s.t, 4);
        }
        prev_t = Some(s.t);
        writeln!(
            out,
            "{},{},{},{},{}",
            fmt_f64(s.t),
            fmt_f64(s.t.exp()),
            fmt_f64(s.u),
            fmt_f64(s.w),
            fmt_f64(running - target)
        )?;
    }
    Ok(())
}
