//! Self-convergence of the reference solutions used for problems without a
//! closed form.

use obstacle_bdf::experiments::{make_reference, EvalWindow};
use obstacle_bdf::problems::american_put_benchmark;
use obstacle_bdf::stepping::{MarchOptions, SchemeKind};
use obstacle_bdf::SpatialOrder;

#[test]
fn references_converge_at_second_order() {
    let p = american_put_benchmark();
    let window = EvalWindow::new(80.0, 120.0, 0.01).unwrap();
    let refs: Vec<_> = [320usize, 640, 1280]
        .iter()
        .map(|&j| {
            make_reference(&p, SchemeKind::Bdf2, SpatialOrder::Fourth, j, j, window, &MarchOptions::default()).unwrap()
        })
        .collect();
    let diff =
        |a: usize, b: usize| refs[a].values.iter().zip(&refs[b].values).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
    let ratio = diff(0, 1) / diff(1, 2);
    assert!((3.0..=5.0).contains(&ratio), "max-difference ratio {ratio}");
    assert_eq!(refs[0].points.len(), 4001);
}
