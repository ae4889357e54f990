//! Cross-validation of the log-radius integrator against an independent
//! fixed-step RK4 integration of the same system in plain radius
//! coordinates, plus interpolation and burn-in comparison oracles.

use csbubble::model::ModelParams;
use csbubble::ode::OdeControls;
use csbubble::profile::{force_terms, Component};
use csbubble::scalar::{ScalarProfile, ScalarSample};
use csbubble::shoot::burn_in_sup_diff;
use csbubble::system::{advance, origin_start, start_profile};

/// Fixed-step RK4 on the radius-coordinate form
/// `u_k'' + u_k'/r = (1+a_k) F_k - a_k F_{3-k}`, state `(u1, u2, u1', u2')`.
fn rk4_radius(p: &ModelParams, mut y: [f64; 4], r0: f64, r1: f64, steps: usize) -> [f64; 4] {
    let f = |r: f64, y: &[f64; 4]| -> [f64; 4] {
        let (f1, f2) = force_terms(p, y[0], y[1]);
        [
            y[2],
            y[3],
            -y[2] / r + (1.0 + p.a1) * f1 - p.a1 * f2,
            -y[3] / r + (1.0 + p.a2) * f2 - p.a2 * f1,
        ]
    };
    let h = (r1 - r0) / steps as f64;
    let mut r = r0;
    for _ in 0..steps {
        let k1 = f(r, &y);
        let y2 = std::array::from_fn(|i| y[i] + 0.5 * h * k1[i]);
        let k2 = f(r + 0.5 * h, &y2);
        let y3 = std::array::from_fn(|i| y[i] + 0.5 * h * k2[i]);
        let k3 = f(r + 0.5 * h, &y3);
        let y4 = std::array::from_fn(|i| y[i] + h * k3[i]);
        let k4 = f(r + h, &y4);
        for i in 0..4 {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        r += h;
    }
    y
}

#[test]
fn radius_domain_oracle_matches_log_domain() {
    let p = ModelParams::new(1.0, 1.0, 0, 0).unwrap();
    let (v0, ln_eps, r_start) = (-1.5, -7.0, 1e-4);

    // independent path: radius coordinates, fixed-step RK4
    let s0 = origin_start(&p, v0, ln_eps, r_start).unwrap();
    let y0 = [s0.u1, s0.u2, s0.w1 / r_start, s0.w2 / r_start];
    let mid = rk4_radius(&p, y0, r_start, 0.5, 20_000);
    let fin = rk4_radius(&p, mid, 0.5, 2.0, 30_000);

    // crate path: log coordinates, adaptive embedded pair
    let mut profile = start_profile(&p, v0, ln_eps, r_start).unwrap();
    advance(&p, &mut profile, (2.0f64).ln(), &OdeControls::default()).unwrap();
    let last = profile.samples.last().unwrap();

    let w1_oracle = 2.0 * fin[2];
    let w2_oracle = 2.0 * fin[3];
    assert!(
        (last.u1 - fin[0]).abs() < 1e-8,
        "u1: {} vs oracle {}",
        last.u1,
        fin[0]
    );
    assert!((last.u2 - fin[1]).abs() < 1e-8);
    assert!(
        (last.w1 - w1_oracle).abs() < 1e-8,
        "w1: {} vs {}",
        last.w1,
        w1_oracle
    );
    assert!((last.w2 - w2_oracle).abs() < 1e-8);
}

#[test]
fn step_halving_convergence_of_terminal_slopes() {
    // rtol vs rtol/10 changes the terminal slopes by less than ten times
    // the tighter tolerance
    let p = ModelParams::new(1.0, 1.0, 0, 0).unwrap();
    let (v0, ln_eps, r_start) = (-0.778, -9.0, 1e-4);
    let run = |rtol: f64| {
        let mut profile = start_profile(&p, v0, ln_eps, r_start).unwrap();
        advance(
            &p,
            &mut profile,
            9.0,
            &OdeControls {
                rtol,
                atol: rtol * 1e-2,
                ..Default::default()
            },
        )
        .unwrap();
        let s = profile.samples.last().unwrap();
        (s.w1, s.w2)
    };
    let rtol = 1e-8;
    let (a1, a2) = run(rtol);
    let (b1, b2) = run(rtol / 10.0);
    let change = (a1 - b1).abs().max((a2 - b2).abs());
    assert!(
        change < 10.0 * (rtol / 10.0),
        "terminal slope change {change:.2e} vs bound {:.2e}",
        rtol
    );
}

#[test]
fn burn_in_of_identical_trajectories_is_zero() {
    let p = ModelParams::new(1.0, 1.0, 0, 0).unwrap();
    let mut profile = start_profile(&p, -2.0, -2.0, 1e-4).unwrap();
    advance(&p, &mut profile, 2.0, &OdeControls::default()).unwrap();
    // scalar profile carrying the identical first-component samples
    let scalar = ScalarProfile {
        samples: profile
            .samples
            .iter()
            .map(|s| ScalarSample {
                t: s.t,
                u: s.u1,
                w: s.w1,
            })
            .collect(),
        n1: 0,
        v0: -2.0,
        r_start: 1e-4,
    };
    let sup = burn_in_sup_diff(&profile, &scalar, 5.0);
    assert_eq!(sup, 0.0);
}

#[test]
fn hermite_interpolation_consistent_with_fine_sampling() {
    // interpolated component values between accepted steps agree with a
    // much finer integration of the same run
    let p = ModelParams::new(2.0, 3.0, 0, 0).unwrap();
    let (v0, ln_eps, r_start) = (-3.0, -8.0, 1e-4);
    let mut coarse = start_profile(&p, v0, ln_eps, r_start).unwrap();
    advance(
        &p,
        &mut coarse,
        1.5,
        &OdeControls {
            rtol: 1e-8,
            atol: 1e-10,
            ..Default::default()
        },
    )
    .unwrap();
    let mut fine = start_profile(&p, v0, ln_eps, r_start).unwrap();
    advance(
        &p,
        &mut fine,
        1.5,
        &OdeControls {
            rtol: 1e-12,
            atol: 1e-14,
            ..Default::default()
        },
    )
    .unwrap();
    let mut worst: f64 = 0.0;
    for s in fine
        .samples
        .iter()
        .filter(|s| s.t > coarse.t_min() && s.t < 1.5)
    {
        worst = worst.max((coarse.u_at(Component::First, s.t) - s.u1).abs());
        worst = worst.max((coarse.u_at(Component::Second, s.t) - s.u2).abs());
    }
    assert!(worst < 1e-7, "interpolation drift {worst}");
}
