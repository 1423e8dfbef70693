use crate::problem::{constant, scalar, space_time, ProblemSpec};

/// Smooth solutions of `v_t - v_xx = 0` on `(0, pi)` with a slack obstacle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ManufacturedKind {
    /// `v = e^{-t} sin x`, decreasing in time.
    Decaying,
    /// `v = -e^{-t} sin x`, increasing in time. Also a solution of the
    /// moving-obstacle form `v_t + min(0, A v) = 0`, so it can exercise
    /// the second Crank-Nicolson variant.
    Rising,
}

/// Obstacle sitting far below the solution.
pub const SLACK_OBSTACLE: f64 = -1e6;

/// Manufactured smooth problem: `a = 1`, `b = r = 0`, `f = 0`, `phi = -1e6`,
/// horizon 1, exact solution and ghost values from the closed form.
pub fn manufactured_smooth(kind: ManufacturedKind) -> ProblemSpec {
    let sign = match kind {
        ManufacturedKind::Decaying => 1.0,
        ManufacturedKind::Rising => -1.0,
    };
    let exact = space_time(move |t: f64, x: f64| sign * (-t).exp() * x.sin());
    let pi = std::f64::consts::PI;
    ProblemSpec {
        name: match kind {
            ManufacturedKind::Decaying => "smooth-decaying",
            ManufacturedKind::Rising => "smooth-rising",
        }
        .to_string(),
        xmin: 0.0,
        xmax: pi,
        horizon: 1.0,
        sigma: constant(2f64.sqrt()),
        drift: constant(0.0),
        rate: constant(0.0),
        source: constant(0.0),
        obstacle: constant(SLACK_OBSTACLE),
        initial: scalar(move |x: f64| sign * x.sin()),
        dirichlet_left: scalar(|_| 0.0),
        dirichlet_right: scalar(|_| 0.0),
        ghost_left: exact.clone(),
        ghost_right: exact.clone(),
        exact: Some(exact),
        autonomous: true,
    }
}
