use crate::error::{Error, Result};
use crate::problem::{constant, scalar, space_time, ProblemSpec};

/// Payoff `max(K - x, 0)` of a put with strike `K`.
pub fn put_payoff(strike: f64, x: f64) -> f64 {
    (strike - x).max(0.0)
}

/// American put in the time-to-maturity variable:
/// `min(v_t - 1/2 lambda^2 x^2 v_xx - r x v_x + r v, v - phi) = 0`, `v(0) = phi`.
///
/// Dirichlet data `v(t, xmin) = K - xmin`, `v(t, xmax) = 0`; the ghost
/// nodes of the fourth-order stencil extend the payoff on the left and are
/// zero on the right.
pub fn american_put(lambda: f64, rate: f64, strike: f64, horizon: f64, xmin: f64, xmax: f64) -> Result<ProblemSpec> {
    let positive = [("lambda", lambda), ("r", rate), ("K", strike), ("T", horizon)];
    if let Some((name, v)) = positive.iter().find(|(_, v)| !(*v > 0.0)) {
        return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
    }
    if !(xmin > 0.0 && xmin < strike && strike < xmax) {
        return Err(Error::InvalidParameter(format!(
            "need 0 < xmin < K < xmax, got xmin = {xmin}, K = {strike}, xmax = {xmax}"
        )));
    }
    let payoff = move |x: f64| put_payoff(strike, x);
    Ok(ProblemSpec {
        name: "american-put".to_string(),
        xmin,
        xmax,
        horizon,
        sigma: space_time(move |_, x| lambda * x),
        drift: space_time(move |_, x| -rate * x),
        rate: constant(rate),
        source: constant(0.0),
        obstacle: space_time(move |_, x| payoff(x)),
        initial: scalar(payoff),
        dirichlet_left: scalar(move |_| strike - xmin),
        dirichlet_right: scalar(|_| 0.0),
        ghost_left: space_time(move |_, x| payoff(x)),
        ghost_right: constant(0.0),
        exact: None,
        autonomous: true,
    })
}

/// The benchmark instance: `lambda = 0.2`, `r = 0.1`, `K = 100`, `T = 1` on `(75, 275)`.
pub fn american_put_benchmark() -> ProblemSpec {
    american_put(0.2, 0.1, 100.0, 1.0, 75.0, 275.0).expect("benchmark parameters are valid")
}
