//! Model algebra: couplings, the quadratic form `J`, exponent-region
//! predicates, and the correspondence between the scalar decay exponent
//! `gamma` and the target pair `(alpha1, alpha2)`.
//!
//! Everything here is exact arithmetic on the model constants; no ODE state
//! is involved. All types are immutable and all functions are pure.

use thiserror::Error;

/// Default absolute tolerance for the line constraint `g = 0`, applied to
/// `g` normalized by `A`. Callers supply floating-point exponents, so the
/// constraint cannot be tested exactly.
pub const DEFAULT_TOL_G: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("coupling matrix is not competitive: {0}")]
    NonCompetitive(String),
    #[error("invalid model parameters: {0}")]
    InvalidParams(String),
    #[error("junction point undefined: A - 2B = {0} is not positive")]
    DegenerateJunction(f64),
    #[error("exponent pair ({0}, {1}) is not on the admissible line segment")]
    NotInSigma(f64, f64),
}

/// Coupling pair `(a1, a2)`, vortex multiplicities `(N1, N2)`, and the
/// derived products `A = (1+a1)(1+a2)`, `B = a1*a2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub a1: f64,
    pub a2: f64,
    pub n1: u32,
    pub n2: u32,
    pub big_a: f64,
    pub big_b: f64,
}

impl ModelParams {
    pub fn new(a1: f64, a2: f64, n1: u32, n2: u32) -> Result<Self, ModelError> {
        if !(a1.is_finite() && a2.is_finite() && a1 > 0.0 && a2 > 0.0) {
            return Err(ModelError::InvalidParams(format!(
                "need a1 > 0 and a2 > 0, got ({a1}, {a2})"
            )));
        }
        let big_a = (1.0 + a1) * (1.0 + a2);
        let big_b = a1 * a2;
        // A - B = 1 + a1 + a2 must hold exactly up to rounding; catches
        // exotic inputs whose products lose the identity.
        let lhs = big_a - big_b;
        let rhs = 1.0 + a1 + a2;
        if (lhs - rhs).abs() > 1e-12 * rhs.max(1.0) {
            return Err(ModelError::InvalidParams(format!(
                "identity A - B = 1 + a1 + a2 violated: {lhs} vs {rhs}"
            )));
        }
        Ok(Self {
            a1,
            a2,
            n1,
            n2,
            big_a,
            big_b,
        })
    }

    /// Reduce a competitive 2x2 coupling matrix to `(a1, a2)`.
    ///
    /// The matrix must have positive diagonal, negative off-diagonal and
    /// positive determinant. For the rank-2 Cartan matrices this gives
    /// `(1,1)`, `(2,3)` and `(5,9)`.
    pub fn from_cartan(k: [[f64; 2]; 2], n1: u32, n2: u32) -> Result<Self, ModelError> {
        let [[k11, k12], [k21, k22]] = k;
        if !(k11 > 0.0 && k22 > 0.0) {
            return Err(ModelError::NonCompetitive(format!(
                "diagonal must be positive, got ({k11}, {k22})"
            )));
        }
        if !(k12 < 0.0 && k21 < 0.0) {
            return Err(ModelError::NonCompetitive(format!(
                "off-diagonal must be negative, got ({k12}, {k21})"
            )));
        }
        let det = k11 * k22 - k12 * k21;
        if det <= 0.0 {
            return Err(ModelError::NonCompetitive(format!(
                "determinant must be positive, got {det}"
            )));
        }
        let a1 = -k12 * (k11 - k21) / det;
        let a2 = -k21 * (k22 - k12) / det;
        Self::new(a1, a2, n1, n2)
    }

    pub fn n1f(&self) -> f64 {
        f64::from(self.n1)
    }

    pub fn n2f(&self) -> f64 {
        f64::from(self.n2)
    }

    /// Upper bound on `gamma` imposed by `alpha1 >= 1`; only binding when
    /// `A > 2B`.
    pub fn gamma_cap(&self) -> Option<f64> {
        let d = self.big_a - 2.0 * self.big_b;
        if d > 0.0 {
            Some(
                1.0 + 2.0 * self.big_b / d * (self.n1f() + 1.0)
                    + 2.0 * self.a1 * (1.0 + self.a1) / d * (self.n2f() + 1.0),
            )
        } else {
            None
        }
    }
}

/// Target decay exponents of a non-topological solution,
/// `u_k ~ -2 alpha_k ln r` at infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentPair {
    pub alpha1: f64,
    pub alpha2: f64,
}

impl ExponentPair {
    pub fn new(alpha1: f64, alpha2: f64) -> Self {
        Self { alpha1, alpha2 }
    }
}

/// Membership report for the three exponent regions, with the raw values of
/// the line constraint `g`, the slack `h`, and the quadratic-form gap.
/// All predicates are evaluated even when one fails so callers can show
/// which inequality is violated.
#[derive(Debug, Clone, Copy)]
pub struct RegionReport {
    pub in_omega: bool,
    pub in_s: bool,
    pub in_sigma: bool,
    pub g_value: f64,
    pub h_value: f64,
    /// `J(alpha1-1, alpha2-1) - J(N1+1, N2+1)`.
    pub j_gap: f64,
    /// Slack of each strict inequality of `S` (positive means satisfied);
    /// the third entry is `g` itself.
    pub s_slack: [f64; 4],
}

impl RegionReport {
    /// Human-readable list of the construction-line predicates a point
    /// violates, for diagnostics when a target pair is rejected.
    pub fn sigma_violations(&self, p: &ModelParams, e: ExponentPair) -> Vec<String> {
        let mut out = Vec::new();
        if e.alpha1 < 1.0 {
            out.push(format!("alpha1 = {} < 1", e.alpha1));
        }
        if e.alpha2 <= 1.0 {
            out.push(format!("alpha2 = {} <= 1", e.alpha2));
        }
        if (self.g_value / p.big_a).abs() > DEFAULT_TOL_G {
            out.push(format!("off the line: g = {:.6e}", self.g_value));
        }
        if self.h_value <= 0.0 {
            out.push(format!("h = {:.6e} <= 0 (gamma <= N1 + 2)", self.h_value));
        }
        out
    }
}

/// The quadratic form
/// `J(x, y) = a2(1+a2)/2 x^2 + a1 a2 x y + a1(1+a1)/2 y^2`,
/// positive definite for competitive couplings.
pub fn quad_j(p: &ModelParams, x: f64, y: f64) -> f64 {
    0.5 * p.a2 * (1.0 + p.a2) * x * x + p.a1 * p.a2 * x * y + 0.5 * p.a1 * (1.0 + p.a1) * y * y
}

/// Line constraint whose zero set carries the construction: the boundary of
/// the fourth strict inequality of the region `S`.
pub fn g_value(p: &ModelParams, e: ExponentPair) -> f64 {
    let q = (1.0 + p.a1) / p.a2;
    (3.0 * p.big_a - 4.0 * p.big_b) * e.alpha1 + q * (p.big_a - 2.0 * p.big_b) * e.alpha2
        - p.big_a * p.n1f()
        - q * p.big_a * p.n2f()
        - (4.0 + 2.0 * q) * (p.big_a - p.big_b)
}

/// Slack of the scalar-exponent inequality; `h > 0` is equivalent to
/// `gamma > N1 + 2`.
pub fn h_value(p: &ModelParams, e: ExponentPair) -> f64 {
    (4.0 * p.big_b - p.big_a) / p.big_a * (e.alpha1 - 1.0)
        + 2.0 * p.a1 / (1.0 + p.a2) * (e.alpha2 - 1.0)
        - (p.n1f() + 1.0)
}

/// Evaluate all region predicates at once. `in_sigma` uses
/// `|g|/A <= tol_g` for the equality constraint; the boundary
/// `alpha1 = 1` is inside, `alpha2 = 1` is outside.
pub fn region_report_with_tol(p: &ModelParams, e: ExponentPair, tol_g: f64) -> RegionReport {
    let g = g_value(p, e);
    let h = h_value(p, e);
    let j_gap = quad_j(p, e.alpha1 - 1.0, e.alpha2 - 1.0) - quad_j(p, p.n1f() + 1.0, p.n2f() + 1.0);

    let in_omega = e.alpha1 > 1.0 && e.alpha2 > 1.0 && j_gap > 0.0;

    let d2 = p.big_a - 2.0 * p.big_b;
    let s1 = p.a2 * (1.0 + p.a2) * p.n1f() + p.big_a * p.n2f() + 2.0 * (p.big_a - p.big_b)
        - (d2 * e.alpha2 - p.a2 * (1.0 + p.a2) * e.alpha1);
    let s2 = p.a1 * (1.0 + p.a1) * p.n2f() + p.big_a * p.n1f() + 2.0 * (p.big_a - p.big_b)
        - (d2 * e.alpha1 - p.a1 * (1.0 + p.a1) * e.alpha2);
    let s3 = g;
    let q2 = (1.0 + p.a2) / p.a1;
    let s4 = (3.0 * p.big_a - 4.0 * p.big_b) * e.alpha2 + q2 * d2 * e.alpha1
        - (p.big_a * p.n2f() + q2 * p.big_a * p.n1f() + (4.0 + 2.0 * q2) * (p.big_a - p.big_b));
    let in_s = e.alpha1 > 0.0 && e.alpha2 > 0.0 && s1 > 0.0 && s2 > 0.0 && s3 > 0.0 && s4 > 0.0;

    let in_sigma = e.alpha1 >= 1.0 && e.alpha2 > 1.0 && (g / p.big_a).abs() <= tol_g && h > 0.0;

    RegionReport {
        in_omega,
        in_s,
        in_sigma,
        g_value: g,
        h_value: h,
        j_gap,
        s_slack: [s1, s2, s3, s4],
    }
}

pub fn region_report(p: &ModelParams, e: ExponentPair) -> RegionReport {
    region_report_with_tol(p, e, DEFAULT_TOL_G)
}

/// Whether the construction locus is non-empty: `3A - 4B > 0` and, when
/// `A - 4B > 0`, additionally `(A-4B)(N1+1) < 2 a1 (1+a1) (N2+1)`.
pub fn sigma_nonempty(p: &ModelParams) -> bool {
    let c = 3.0 * p.big_a - 4.0 * p.big_b;
    if c <= 0.0 {
        return false;
    }
    let d4 = p.big_a - 4.0 * p.big_b;
    if d4 > 0.0 {
        d4 * (p.n1f() + 1.0) < 2.0 * p.a1 * (1.0 + p.a1) * (p.n2f() + 1.0)
    } else {
        true
    }
}

/// Decay exponent of the limiting scalar profile attached to a pair:
/// `gamma = (4B-A)/A (alpha1-1) + 2a1/(1+a2) (alpha2-1) + 1`.
pub fn gamma_of(p: &ModelParams, e: ExponentPair) -> f64 {
    (4.0 * p.big_b - p.big_a) / p.big_a * (e.alpha1 - 1.0)
        + 2.0 * p.a1 / (1.0 + p.a2) * (e.alpha2 - 1.0)
        + 1.0
}

/// Inverse of [`gamma_of`] restricted to the line `g = 0`.
pub fn alpha_of_gamma(p: &ModelParams, gamma: f64) -> ExponentPair {
    let gt = gamma - 1.0;
    let nt1 = p.n1f() + 1.0;
    let nt2 = p.n2f() + 1.0;
    let alpha1 = -(p.big_a - 2.0 * p.big_b) / p.big_a * gt
        + 2.0 * p.big_b / p.big_a * nt1
        + 2.0 * p.a1 / (1.0 + p.a2) * nt2
        + 1.0;
    let r = p.a2 / (1.0 + p.a1);
    let alpha2 = r * (3.0 * p.big_a - 4.0 * p.big_b) / p.big_a * gt
        + r * (p.big_a - 4.0 * p.big_b) / p.big_a * nt1
        + (p.big_a - 4.0 * p.big_b) / p.big_a * nt2
        + 1.0;
    ExponentPair { alpha1, alpha2 }
}

/// Intersection of the type-I boundary line with the construction line;
/// only defined for `A > 2B`. The first coordinate is always 1.
pub fn junction_point(p: &ModelParams) -> Result<ExponentPair, ModelError> {
    let d = p.big_a - 2.0 * p.big_b;
    if d <= 0.0 {
        return Err(ModelError::DegenerateJunction(d));
    }
    let alpha2 = p.a2 * (1.0 + p.a2) / d * (p.n1f() + 1.0) + p.big_a / d * (p.n2f() + 1.0) + 1.0;
    Ok(ExponentPair {
        alpha1: 1.0,
        alpha2,
    })
}

/// Limit constants of the two explicit Liouville profiles attached to a
/// point on the construction line: `gamma` for the scalar profile,
/// `D` for the inner bubble and `E = 2(alpha1 - 1)` for the outer one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BubbleParams {
    pub gamma: f64,
    pub d: f64,
    pub e: f64,
}

pub fn limit_constants(p: &ModelParams, e: ExponentPair) -> Result<BubbleParams, ModelError> {
    let rr = region_report(p, e);
    if !rr.in_sigma {
        return Err(ModelError::NotInSigma(e.alpha1, e.alpha2));
    }
    let gamma = gamma_of(p, e);
    let d = 2.0 * p.a2 / (1.0 + p.a1) * (gamma + p.n1f()) + 2.0 * p.n2f() + 2.0;
    let ee = 2.0 * (e.alpha1 - 1.0);
    Ok(BubbleParams { gamma, d, e: ee })
}

#[cfg(test)]
mod tests {
    use super::*;

    const A2: [[f64; 2]; 2] = [[2.0, -1.0], [-1.0, 2.0]];
    const B2: [[f64; 2]; 2] = [[2.0, -1.0], [-2.0, 2.0]];
    const G2: [[f64; 2]; 2] = [[2.0, -1.0], [-3.0, 2.0]];

    fn su3(n1: u32, n2: u32) -> ModelParams {
        ModelParams::new(1.0, 1.0, n1, n2).unwrap()
    }

    fn b2(n1: u32, n2: u32) -> ModelParams {
        ModelParams::new(2.0, 3.0, n1, n2).unwrap()
    }

    #[test]
    fn cartan_reduction_exact() {
        let p = ModelParams::from_cartan(A2, 0, 0).unwrap();
        assert_eq!((p.a1, p.a2), (1.0, 1.0));
        let p = ModelParams::from_cartan(B2, 0, 0).unwrap();
        assert_eq!((p.a1, p.a2), (2.0, 3.0));
        let p = ModelParams::from_cartan(G2, 0, 0).unwrap();
        assert_eq!((p.a1, p.a2), (5.0, 9.0));
    }

    #[test]
    fn cartan_reduction_generic_quotients() {
        // det = 1*2 - 1 = 1; a1 = -(-1)(1-(-1))/1 = 2; a2 = -(-1)(2-(-1))/1 = 3.
        let p = ModelParams::from_cartan([[1.0, -1.0], [-1.0, 2.0]], 0, 0).unwrap();
        assert_eq!((p.a1, p.a2), (2.0, 3.0));
        assert!(p.a1 > 0.0 && p.a2 > 0.0);
    }

    #[test]
    fn cartan_rejects_non_competitive() {
        assert!(ModelParams::from_cartan([[2.0, 1.0], [-1.0, 2.0]], 0, 0).is_err());
        assert!(ModelParams::from_cartan([[-2.0, -1.0], [-1.0, 2.0]], 0, 0).is_err());
        // det = 4 - 4 = 0
        assert!(ModelParams::from_cartan([[2.0, -2.0], [-2.0, 2.0]], 0, 0).is_err());
    }

    #[test]
    fn quad_j_values() {
        let p = su3(0, 0);
        assert_eq!(quad_j(&p, 0.0, 0.0), 0.0);
        // (a1,a2)=(1,1): J(x,y) = x^2 + xy + y^2
        assert_eq!(quad_j(&p, 1.0, 1.0), 3.0);
        let p = b2(0, 0);
        assert_eq!(quad_j(&p, 1.0, 0.0), 6.0);
    }

    #[test]
    fn region_su3_reference_point() {
        let p = su3(0, 0);
        let r = region_report(&p, ExponentPair::new(1.5, 3.0));
        // g = 8*1.5 + 4*3 - 24 = 0, h = alpha2 - 2 = 1
        assert!(r.g_value.abs() < 1e-12);
        assert!((r.h_value - 1.0).abs() < 1e-12);
        assert!(r.in_sigma && r.in_omega);
        // the construction line is the boundary of the open region S
        assert!(!r.in_s);
        let inside_s = region_report(&p, ExponentPair::new(1.6, 3.0));
        assert!(inside_s.in_s && !inside_s.in_sigma);
    }

    #[test]
    fn region_b2_reference_point() {
        let p = b2(0, 0);
        let r = region_report(&p, ExponentPair::new(3.0, 2.0));
        assert!(r.in_sigma);
        // the line is vertical: alpha1 = N1 + N2 + 3
        let r2 = region_report(&p, ExponentPair::new(3.0, 7.5));
        assert!(r2.in_sigma);
    }

    #[test]
    fn region_boundary_cases() {
        let p = su3(0, 0);
        let r = region_report(&p, ExponentPair::new(1.0, 1.0));
        assert!(!r.in_omega);
        // alpha1 = 1 exactly is inside the construction locus, alpha2 = 1 is not.
        let j = junction_point(&p).unwrap();
        assert!(region_report(&p, j).in_sigma);
        let p_mid = alpha_of_gamma(&p, 2.5);
        let on_line_alpha2_one = ExponentPair::new(p_mid.alpha1, 1.0);
        assert!(!region_report(&p, on_line_alpha2_one).in_sigma);
    }

    #[test]
    fn sigma_nonempty_cases() {
        assert!(sigma_nonempty(&su3(0, 0)));
        // G2: 3A - 4B = 3*60 - 4*45 = 0
        let g2 = ModelParams::new(5.0, 9.0, 0, 0).unwrap();
        assert!(!sigma_nonempty(&g2));
        // small couplings: A - 4B = 1.17 > 0 and 1.17 < 0.22 fails
        let small = ModelParams::new(0.1, 0.1, 0, 0).unwrap();
        assert!(!sigma_nonempty(&small));
    }

    #[test]
    fn gamma_values() {
        let p = su3(0, 0);
        assert!((gamma_of(&p, ExponentPair::new(1.5, 3.0)) - 3.0).abs() < 1e-14);
        assert!((gamma_of(&p, ExponentPair::new(1.0, 1.0)) - 1.0).abs() < 1e-14);
        let p = b2(0, 0);
        // with alpha1 = 3 fixed: gamma = alpha2 + 2
        for alpha2 in [1.5, 2.0, 4.0] {
            let g = gamma_of(&p, ExponentPair::new(3.0, alpha2));
            assert!((g - (alpha2 + 2.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn alpha_of_gamma_values() {
        let p = su3(0, 0);
        let e = alpha_of_gamma(&p, 3.0);
        assert!((e.alpha1 - 1.5).abs() < 1e-14);
        assert!((e.alpha2 - 3.0).abs() < 1e-14);
        let e = alpha_of_gamma(&p, 2.0);
        assert!((e.alpha1 - 2.0).abs() < 1e-14);
        assert!((e.alpha2 - 2.0).abs() < 1e-14);
        assert!(g_value(&p, e).abs() < 1e-12);
        // B2 has A - 2B = 0: alpha1 is gamma-independent
        let p = b2(1, 2);
        for gamma in [5.0, 9.0, 20.0] {
            let e = alpha_of_gamma(&p, gamma);
            assert!((e.alpha1 - (p.n1f() + p.n2f() + 3.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn round_trip_gamma_alpha() {
        let p = su3(1, 2);
        for gamma in [3.2, 4.0, 7.5] {
            let e = alpha_of_gamma(&p, gamma);
            assert!(g_value(&p, e).abs() < 1e-10);
            assert!((gamma_of(&p, e) - gamma).abs() < 1e-12);
        }
    }

    #[test]
    fn junction_points() {
        let p = su3(0, 0);
        let j = junction_point(&p).unwrap();
        assert_eq!(j.alpha1, 1.0);
        assert!((j.alpha2 - 4.0).abs() < 1e-14);
        let p = su3(1, 0);
        let j = junction_point(&p).unwrap();
        assert!((j.alpha2 - 5.0).abs() < 1e-14);
        assert!(g_value(&p, j).abs() < 1e-12);
        assert!(junction_point(&b2(0, 0)).is_err());
    }

    #[test]
    fn limit_constants_values() {
        let p = su3(0, 0);
        let b = limit_constants(&p, ExponentPair::new(1.5, 3.0)).unwrap();
        assert!((b.gamma - 3.0).abs() < 1e-14);
        assert!((b.d - 5.0).abs() < 1e-14);
        assert!((b.e - 1.0).abs() < 1e-14);
        // critical point alpha1 = 1: E = 0
        let b = limit_constants(&p, ExponentPair::new(1.0, 4.0)).unwrap();
        assert!((b.gamma - 4.0).abs() < 1e-14);
        assert!((b.d - 6.0).abs() < 1e-14);
        assert_eq!(b.e, 0.0);
        let p = b2(0, 0);
        let b = limit_constants(&p, ExponentPair::new(3.0, 2.0)).unwrap();
        assert!((b.gamma - 4.0).abs() < 1e-14);
        assert!((b.d - 10.0).abs() < 1e-14);
        assert!((b.e - 4.0).abs() < 1e-14);
        assert!(limit_constants(&p, ExponentPair::new(2.0, 2.0)).is_err());
    }

    #[test]
    fn limit_constants_outer_identity() {
        // E = 2(alpha1-1) must agree with the slope-budget expression in gamma.
        for (p, gamma) in [
            (su3(0, 0), 2.7),
            (su3(1, 1), 5.5),
            (b2(0, 0), 4.0),
            (b2(2, 1), 9.0),
        ] {
            let e = alpha_of_gamma(&p, gamma);
            if !region_report(&p, e).in_sigma {
                continue;
            }
            let b = limit_constants(&p, e).unwrap();
            let via_gamma = 2.0 * (2.0 * p.big_b - p.big_a) / p.big_a * (gamma - 1.0)
                + 4.0 * p.big_b / p.big_a * (p.n1f() + 1.0)
                + 4.0 * p.a1 / (1.0 + p.a2) * (p.n2f() + 1.0);
            assert!(
                (b.e - via_gamma).abs() < 1e-12,
                "E identity failed: {} vs {via_gamma}",
                b.e
            );
        }
    }

    #[test]
    fn sigma_nonempty_agrees_with_line_scan() {
        // when the closed form says non-empty, scanning gamma along the
        // line finds a member; when empty, no scanned point qualifies
        for (a1, a2, n1, n2) in [
            (1.0, 1.0, 0u32, 0u32),
            (2.0, 3.0, 2, 1),
            (0.5, 4.0, 0, 1),
            (5.0, 9.0, 0, 0),
            (0.1, 0.1, 0, 0),
            (0.3, 0.2, 3, 0),
        ] {
            let p = ModelParams::new(a1, a2, n1, n2).unwrap();
            let lo = p.n1f() + 2.0;
            let hi = p.gamma_cap().unwrap_or(lo + 20.0);
            let mut found = false;
            for k in 1..=400 {
                let gamma = lo + (hi - lo) * k as f64 / 400.0;
                if region_report(&p, alpha_of_gamma(&p, gamma)).in_sigma {
                    found = true;
                    break;
                }
            }
            assert_eq!(found, sigma_nonempty(&p), "({a1}, {a2}, {n1}, {n2})");
        }
    }

    #[test]
    fn bubble_param_bounds_on_sigma() {
        let p = su3(0, 0);
        for gamma in [2.2, 3.0, 3.9] {
            let e = alpha_of_gamma(&p, gamma);
            let b = limit_constants(&p, e).unwrap();
            assert!(b.gamma > p.n1f() + 2.0);
            assert!(b.d > 2.0);
            assert!(b.e >= 0.0);
            if let Some(cap) = p.gamma_cap() {
                assert!(b.gamma <= cap + 1e-12);
            }
        }
    }
}
