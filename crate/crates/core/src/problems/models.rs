//! Two obstacle problems with explicit solutions that mimic the American
//! put: a free boundary `x_s(t) = K (1 - c0 t^alpha)` left of which
//! `v = phi = K - x`, and a smooth decreasing profile to its right that
//! reaches zero at `xmax`. A source term `f = min(v_t + A v, v - phi)` makes
//! `v` an exact solution.
//!
//! Model 1 is `C^1` in space with a jump in `v_xx` at `x_s`; model 2 is
//! `C^2` with a jump in `v_xxx`.

use std::sync::{Arc, Mutex};

use super::american::put_payoff;
use crate::error::{Error, Result};
use crate::problem::{constant, scalar, space_time, ProblemSpec};

/// Parameters shared by both models.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub strike: f64,
    pub lambda: f64,
    pub rate: f64,
    pub c0: f64,
    pub alpha: f64,
    pub horizon: f64,
    pub xmin: f64,
    pub xmax: f64,
}

impl ModelParams {
    /// `lambda = 0.3`, `r = 0.1`, `K = 100`, `c0 = 0.2`, `alpha = 1/2` on `(75, 275)`, `T = 1`.
    pub fn model1_default() -> Self {
        Self { strike: 100.0, lambda: 0.3, rate: 0.1, c0: 0.2, alpha: 0.5, horizon: 1.0, xmin: 75.0, xmax: 275.0 }
    }

    /// As [`ModelParams::model1_default`] on `(50, 450)` with `T = 0.5`.
    pub fn model2_default() -> Self {
        Self { xmin: 50.0, xmax: 450.0, horizon: 0.5, ..Self::model1_default() }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if !(self.strike > 0.0 && self.strike < self.xmax) {
            return bad(format!("need 0 < K < xmax, got K = {}, xmax = {}", self.strike, self.xmax));
        }
        if !(self.xmin < self.xmax) {
            return bad(format!("need xmin < xmax, got ({}, {})", self.xmin, self.xmax));
        }
        if !(self.c0 > 0.0) || !(self.lambda > 0.0) || !(self.horizon > 0.0) {
            return bad("c0, lambda and T must be positive".into());
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return bad(format!("alpha must lie in (0, 1], got {}", self.alpha));
        }
        if !(self.strike - self.c0 * self.horizon.powf(self.alpha) > 0.0) {
            return bad("need K - c0 T^alpha > 0".into());
        }
        if !(self.free_boundary(self.horizon) > self.xmin) {
            return bad("free boundary leaves the domain before T".into());
        }
        Ok(())
    }

    /// `x_s(t) = K (1 - c0 t^alpha)`.
    pub fn free_boundary(&self, t: f64) -> f64 {
        self.strike * (1.0 - self.c0 * t.powf(self.alpha))
    }

    /// `d x_s / dt = -K c0 alpha t^(alpha - 1)`, for `t > 0`.
    pub fn free_boundary_speed(&self, t: f64) -> f64 {
        -self.strike * self.c0 * self.alpha * t.powf(self.alpha - 1.0)
    }
}

/// Which explicit profile is used right of the free boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    /// `phi(x_s) - y / (1 + y / C)`, `y = x - x_s`.
    Rational,
    /// `phi(x_s) - C atan(y / C)`.
    Arctan,
}

/// How the fourth-order ghost values `u_{-1}`, `u_{J+2}` are supplied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GhostPolicy {
    /// Payoff `K - x` on the left, zero on the right.
    PayoffExtension,
    /// The explicit solution continued past the domain.
    #[default]
    ExactSolution,
}

/// Value and partial derivatives of the explicit solution at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub v: f64,
    pub v_t: f64,
    pub v_x: f64,
    pub v_xx: f64,
}

/// Solve `b theta = atan(a theta)` for the unique `theta > 0` (needs `0 < b < a`).
///
/// Newton from the right end of the bracket `(0, pi / (2b))`, where the
/// concave residual is negative, with a bisection safeguard.
pub fn model2_theta(a: f64, b: f64, tol: f64) -> Result<f64> {
    if !(b > 0.0 && b < a) || !a.is_finite() {
        return Err(Error::InvalidParameter(format!("need 0 < b < a, got a = {a}, b = {b}")));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    let f = |th: f64| (a * th).atan() - b * th;
    let df = |th: f64| a / (1.0 + (a * th).powi(2)) - b;
    let mut lo = 0.0f64;
    let mut hi = std::f64::consts::FRAC_PI_2 / b;
    let mut th = hi;
    for _ in 0..200 {
        let r = f(th);
        if r.abs() <= tol {
            return Ok(th);
        }
        if r > 0.0 {
            lo = th;
        } else {
            hi = th;
        }
        let d = df(th);
        let newton = th - r / d;
        th = if d < 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if hi - lo <= f64::EPSILON * hi {
            break;
        }
    }
    // Bracket exhausted at machine precision; accept the best point if it is close enough.
    let r = f(th);
    if r.abs() <= tol.max(4.0 * f64::EPSILON * (b * th).abs()) {
        Ok(th)
    } else {
        Err(Error::InvalidParameter(format!("theta iteration stalled with residual {r:e}")))
    }
}

#[derive(Debug, Clone, Copy)]
struct Profile {
    t: f64,
    xs: f64,
    xs_dot: f64,
    c: f64,
    c_dot: f64,
}

/// An explicit model solution with cached `C(t)` (model 2 needs a root solve per time).
#[derive(Debug, Clone)]
pub struct ExplicitModel {
    params: ModelParams,
    kind: ModelKind,
    cache: Arc<Mutex<Option<Profile>>>,
}

impl ExplicitModel {
    pub fn new(params: ModelParams, kind: ModelKind) -> Result<Self> {
        params.validate()?;
        Ok(Self { params, kind, cache: Arc::new(Mutex::new(None)) })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    fn profile(&self, t: f64) -> Profile {
        if let Some(p) = *self.cache.lock().expect("cache poisoned") {
            if p.t.to_bits() == t.to_bits() {
                return p;
            }
        }
        let p = self.compute_profile(t);
        *self.cache.lock().expect("cache poisoned") = Some(p);
        p
    }

    fn compute_profile(&self, t: f64) -> Profile {
        let pr = &self.params;
        let xs = pr.free_boundary(t);
        let xs_dot = pr.free_boundary_speed(t);
        let a = pr.xmax - xs;
        let b = pr.strike - xs;
        // a_dot = b_dot = -xs_dot
        let (c, c_dot) = match self.kind {
            ModelKind::Rational => {
                let c = a * b / (a - b);
                // d(1/C)/dt = -b_dot / b^2 + a_dot / a^2
                let inv_dot = xs_dot / (b * b) - xs_dot / (a * a);
                (c, -c * c * inv_dot)
            }
            ModelKind::Arctan => {
                let theta = model2_theta(a, b, 1e-15).expect("0 < b < a holds for t > 0");
                let c = 1.0 / theta;
                let q = 1.0 + (a / c).powi(2);
                let a_dot = -xs_dot;
                let b_dot = -xs_dot;
                (c, c * (q * b_dot - a_dot) / (q * b - a))
            }
        };
        Profile { t, xs, xs_dot, c, c_dot }
    }

    /// `C(t)`, for `t > 0`.
    pub fn shape_constant(&self, t: f64) -> f64 {
        self.profile(t).c
    }

    pub fn shape_constant_rate(&self, t: f64) -> f64 {
        self.profile(t).c_dot
    }

    /// Value and derivatives at `(t, x)`. At `t = 0` the solution equals the
    /// payoff; the time derivative there is reported as zero.
    pub fn jet(&self, t: f64, x: f64) -> Jet {
        let strike = self.params.strike;
        if t <= 0.0 {
            let v = put_payoff(strike, x);
            let v_x = if x < strike { -1.0 } else { 0.0 };
            return Jet { v, v_t: 0.0, v_x, v_xx: 0.0 };
        }
        let p = self.profile(t);
        if x < p.xs {
            return Jet { v: strike - x, v_t: 0.0, v_x: -1.0, v_xx: 0.0 };
        }
        let b = strike - p.xs;
        let b_dot = -p.xs_dot;
        let y = x - p.xs;
        let y_dot = -p.xs_dot;
        let c = p.c;
        match self.kind {
            ModelKind::Rational => {
                let cy = c + y;
                let w = y * c / cy;
                let w_y = c * c / (cy * cy);
                let w_c = y * y / (cy * cy);
                Jet {
                    v: b - w,
                    v_t: b_dot - w_y * y_dot - w_c * p.c_dot,
                    v_x: -w_y,
                    v_xx: 2.0 * c * c / (cy * cy * cy),
                }
            }
            ModelKind::Arctan => {
                let s = y / c;
                let den = 1.0 + s * s;
                Jet {
                    v: b - c * s.atan(),
                    v_t: b_dot - p.c_dot * s.atan() - (y_dot - s * p.c_dot) / den,
                    v_x: -1.0 / den,
                    v_xx: 2.0 * s / (c * den * den),
                }
            }
        }
    }

    pub fn value(&self, t: f64, x: f64) -> f64 {
        self.jet(t, x).v
    }

    /// `v_t + A v` with `A v = -1/2 lambda^2 x^2 v_xx - r x v_x + r v`.
    pub fn pde_residual(&self, t: f64, x: f64) -> f64 {
        let j = self.jet(t, x);
        let pr = &self.params;
        j.v_t - 0.5 * pr.lambda * pr.lambda * x * x * j.v_xx - pr.rate * x * j.v_x + pr.rate * j.v
    }

    /// Source `f = min(v_t + A v, v - phi)`; zero at `t = 0`.
    pub fn source(&self, t: f64, x: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let slack = self.value(t, x) - put_payoff(self.params.strike, x);
        self.pde_residual(t, x).min(slack)
    }

    /// Obstacle problem whose exact solution is this model.
    pub fn problem(&self, ghosts: GhostPolicy) -> ProblemSpec {
        let pr = self.params;
        let name = match self.kind {
            ModelKind::Rational => "model1",
            ModelKind::Arctan => "model2",
        };
        let exact = {
            let m = self.clone();
            space_time(move |t, x| m.value(t, x))
        };
        let (ghost_left, ghost_right) = match ghosts {
            GhostPolicy::PayoffExtension => (space_time(move |_, x| put_payoff(pr.strike, x)), constant(0.0)),
            GhostPolicy::ExactSolution => (exact.clone(), exact.clone()),
        };
        let src = self.clone();
        let left = self.clone();
        let right = self.clone();
        ProblemSpec {
            name: name.to_string(),
            xmin: pr.xmin,
            xmax: pr.xmax,
            horizon: pr.horizon,
            sigma: space_time(move |_, x| pr.lambda * x),
            drift: space_time(move |_, x| -pr.rate * x),
            rate: constant(pr.rate),
            source: space_time(move |t, x| src.source(t, x)),
            obstacle: space_time(move |_, x| put_payoff(pr.strike, x)),
            initial: scalar(move |x| put_payoff(pr.strike, x)),
            dirichlet_left: scalar(move |t| left.value(t, pr.xmin)),
            dirichlet_right: scalar(move |t| right.value(t, pr.xmax)),
            ghost_left,
            ghost_right,
            exact: Some(exact),
            // Coefficients and boundary values are time independent; only f moves.
            autonomous: true,
        }
    }
}

/// Model 1 problem (rational profile).
pub fn model1(params: ModelParams, ghosts: GhostPolicy) -> Result<ProblemSpec> {
    Ok(ExplicitModel::new(params, ModelKind::Rational)?.problem(ghosts))
}

/// Model 2 problem (arctan profile).
pub fn model2(params: ModelParams, ghosts: GhostPolicy) -> Result<ProblemSpec> {
    Ok(ExplicitModel::new(params, ModelKind::Arctan)?.problem(ghosts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Plain bisection, independent of the Newton path.
    fn theta_by_bisection(a: f64, b: f64) -> f64 {
        let f = |th: f64| (a * th).atan() - b * th;
        let (mut lo, mut hi) = (1e-300, std::f64::consts::FRAC_PI_2 / b);
        for _ in 0..2000 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-15 * hi {
                break;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn theta_matches_bisection() {
        // Frozen from the bisection oracle: a = 2, b = 1.
        let oracle = theta_by_bisection(2.0, 1.0);
        assert_relative_eq!(oracle, 1.165_561_185_207_211, max_relative = 1e-12);
        let th = model2_theta(2.0, 1.0, 1e-14).unwrap();
        assert_relative_eq!(th, oracle, max_relative = 1e-12);
        assert!((th - (2.0 * th).atan()).abs() <= 1e-13);
    }

    #[test]
    fn theta_decreases_as_b_approaches_a() {
        let b = 1.0;
        let near = model2_theta(1.001 * b, b, 1e-14).unwrap();
        let far = model2_theta(2.0 * b, b, 1e-14).unwrap();
        assert!(near < far);
        assert!(near > 0.0);
    }

    #[test]
    fn theta_rejects_bad_bracket() {
        assert!(model2_theta(1.0, 1.0, 1e-12).is_err());
        assert!(model2_theta(1.0, 2.0, 1e-12).is_err());
        assert!(model2_theta(2.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn model2_reference_point() {
        let m = ExplicitModel::new(ModelParams::model2_default(), ModelKind::Arctan).unwrap();
        let t = 0.5;
        let xs = m.params().free_boundary(t);
        assert_relative_eq!(xs, 85.857_864_376_269_05, max_relative = 1e-12);
        let a = 450.0 - xs;
        let b = 100.0 - xs;
        assert_relative_eq!(b, 14.142_135_623_730_95, max_relative = 1e-12);
        assert_relative_eq!(a, 364.142_135_623_730_95, max_relative = 1e-12);
        let oracle = theta_by_bisection(a, b);
        // frozen from the bisection oracle, 12 digits
        assert_relative_eq!(oracle, 0.109_295_760_917_390, max_relative = 1e-11);
        assert_relative_eq!(m.shape_constant(t), 1.0 / oracle, max_relative = 1e-12);
        assert!(m.value(t, 450.0).abs() < 1e-12);
    }

    #[test]
    fn model1_defining_properties() {
        let m = ExplicitModel::new(ModelParams::model1_default(), ModelKind::Rational).unwrap();
        assert_relative_eq!(m.params().free_boundary(1.0), 80.0, epsilon = 1e-12);
        assert_eq!(m.value(1.0, 79.0), 21.0);
        for &t in &[0.01, 0.3, 1.0] {
            assert!(m.value(t, 275.0).abs() < 1e-12);
            // v_x = -1 just right of x_s, by one-sided differences
            let xs = m.params().free_boundary(t);
            let h = 1e-6;
            let slope = (m.value(t, xs + 2.0 * h) - m.value(t, xs + h)) / h;
            assert_relative_eq!(slope, -1.0, epsilon = 1e-5);
            assert_relative_eq!(m.jet(t, xs).v_x, -1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn model2_is_c2_at_free_boundary() {
        let m = ExplicitModel::new(ModelParams::model2_default(), ModelKind::Arctan).unwrap();
        let t = 0.2;
        let xs = m.params().free_boundary(t);
        let j = m.jet(t, xs);
        assert_eq!(j.v_xx, 0.0);
        assert_relative_eq!(j.v_x, -1.0, epsilon = 1e-15);
        assert!(m.jet(t, xs).v_t.abs() < 1e-12);
    }

    #[test]
    fn initial_data_is_payoff() {
        for kind in [ModelKind::Rational, ModelKind::Arctan] {
            let params = match kind {
                ModelKind::Rational => ModelParams::model1_default(),
                ModelKind::Arctan => ModelParams::model2_default(),
            };
            let m = ExplicitModel::new(params, kind).unwrap();
            assert_eq!(params.free_boundary(0.0), 100.0);
            for &x in &[60.0, 99.0, 100.0, 150.0] {
                assert_eq!(m.value(0.0, x), put_payoff(100.0, x));
            }
        }
    }

    #[test]
    fn invalid_params() {
        let mut p = ModelParams::model1_default();
        p.c0 = 2.0; // K - c0 T^alpha < 0
        assert!(p.validate().is_err());
        let mut p = ModelParams::model1_default();
        p.alpha = 1.5;
        assert!(p.validate().is_err());
    }
}
