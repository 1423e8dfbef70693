//! Analytic properties of the explicit model solutions, checked against
//! finite differences of the closed-form values.

use obstacle_bdf::problems::{ExplicitModel, ModelKind, ModelParams};

fn models() -> Vec<ExplicitModel> {
    vec![
        ExplicitModel::new(ModelParams::model1_default(), ModelKind::Rational).unwrap(),
        ExplicitModel::new(ModelParams::model2_default(), ModelKind::Arctan).unwrap(),
    ]
}

#[test]
fn smooth_fit_at_free_boundary() {
    for m in models() {
        for t in [0.05, 0.25, 0.5] {
            let xs = m.params().free_boundary(t);
            let right = m.jet(t, xs + 1e-9);
            let left = m.jet(t, xs - 1e-9);
            assert!((right.v_x + 1.0).abs() < 1e-6, "{:?}: v_x(x_s+) = {}", m.kind(), right.v_x);
            assert!((left.v_x + 1.0).abs() < 1e-12);
            assert!((right.v - left.v).abs() < 1e-6);
        }
    }
}

#[test]
fn jet_matches_finite_differences() {
    for m in models() {
        let xs = m.params().free_boundary(0.3);
        for &x in &[xs + 0.7, xs + 5.0, xs + 40.0, m.params().xmax - 10.0] {
            let (t, dt, dx) = (0.3, 1e-5, 1e-3);
            let jet = m.jet(t, x);
            let v_t = (m.value(t + dt, x) - m.value(t - dt, x)) / (2.0 * dt);
            let v_x = (m.value(t, x + dx) - m.value(t, x - dx)) / (2.0 * dx);
            let v_xx = (m.value(t, x + dx) - 2.0 * m.value(t, x) + m.value(t, x - dx)) / (dx * dx);
            assert!((jet.v_t - v_t).abs() <= 1e-5 * (1.0 + v_t.abs()), "{:?} v_t at {x}", m.kind());
            assert!((jet.v_x - v_x).abs() <= 1e-6 * (1.0 + v_x.abs()), "{:?} v_x at {x}", m.kind());
            assert!((jet.v_xx - v_xx).abs() <= 1e-4 * (1.0 + v_xx.abs()), "{:?} v_xx at {x}", m.kind());
        }
    }
}

#[test]
fn source_is_the_obstacle_residual() {
    // Left of the free boundary v = phi, so f = min(v_t + A v, 0); right of
    // it f is the PDE residual.
    for m in models() {
        let t = 0.2;
        let xs = m.params().free_boundary(t);
        let right = xs + 3.0;
        assert!((m.source(t, right) - m.pde_residual(t, right)).abs() < 1e-12);
        let left = xs - 3.0;
        assert!(m.source(t, left) <= 0.0);
        assert_eq!(m.source(t, left), m.pde_residual(t, left).min(0.0));
    }
}
