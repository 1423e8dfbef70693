//! Fine-mesh reference solutions for problems without a closed form.

use super::norms::{interpolate_cubic, ErrorNorms};
use crate::discretization::SpatialOrder;
use crate::error::{Error, Result};
use crate::grid::{SpatialGrid, TimeGrid};
use crate::problem::ProblemSpec;
use crate::stepping::{march, MarchOptions, SchemeKind};

/// Equally spaced evaluation points `lo, lo + s, ..., hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalWindow {
    pub lo: f64,
    pub hi: f64,
    pub spacing: f64,
}

impl EvalWindow {
    pub fn new(lo: f64, hi: f64, spacing: f64) -> Result<Self> {
        if !(lo < hi && spacing > 0.0 && spacing <= hi - lo) {
            return Err(Error::InvalidParameter(format!(
                "window needs lo < hi and 0 < spacing <= hi - lo, got [{lo}, {hi}] step {spacing}"
            )));
        }
        Ok(Self { lo, hi, spacing })
    }

    /// Number of points `M`, the interval length divided by the spacing plus one.
    pub fn len(&self) -> usize {
        ((self.hi - self.lo) / self.spacing).round() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Points computed as `lo + k (hi - lo) / (M - 1)`, hitting `hi` exactly.
    pub fn points(&self) -> Vec<f64> {
        let m = self.len();
        let step = (self.hi - self.lo) / (m - 1) as f64;
        (0..m).map(|k| if k + 1 == m { self.hi } else { self.lo + k as f64 * step }).collect()
    }

    pub fn check_inside(&self, grid: &SpatialGrid) -> Result<()> {
        if self.lo < grid.xmin() || self.hi > grid.xmax() {
            return Err(Error::WindowOutsideGrid { lo: self.lo, hi: self.hi, xmin: grid.xmin(), xmax: grid.xmax() });
        }
        Ok(())
    }
}

/// Reference values on an evaluation window, with the mesh that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceSolution {
    pub window: EvalWindow,
    pub points: Vec<f64>,
    pub values: Vec<f64>,
    pub interior: usize,
    pub steps: usize,
    pub scheme: SchemeKind,
    pub order: SpatialOrder,
    pub newton_rel_tol: f64,
}

/// March `problem` to its horizon on a `jref x nref` mesh and sample the
/// final level on `window` by cubic interpolation.
pub fn make_reference(
    problem: &ProblemSpec,
    scheme: SchemeKind,
    order: SpatialOrder,
    jref: usize,
    nref: usize,
    window: EvalWindow,
    options: &MarchOptions,
) -> Result<ReferenceSolution> {
    let grid = SpatialGrid::new(problem.xmin, problem.xmax, jref)?;
    window.check_inside(&grid)?;
    let tgrid = TimeGrid::new(problem.horizon, nref)?;
    let out = march(problem, &grid, &tgrid, scheme, order, options)?;
    let full = out.with_boundary(problem, problem.horizon);
    let points = window.points();
    let values = points.iter().map(|&x| interpolate_cubic(&grid, &full, x)).collect::<Result<Vec<_>>>()?;
    Ok(ReferenceSolution {
        window,
        points,
        values,
        interior: jref,
        steps: nref,
        scheme,
        order,
        newton_rel_tol: options.newton.rel_tol,
    })
}

/// Window-averaged norms of the difference between the cubic interpolant of
/// `u` and the reference: `l1 = (1/M) sum |d|`, `l2 = ((1/M) sum d^2)^(1/2)`,
/// `linf = max |d|`.
///
/// `u` holds all `J + 2` nodal values of `grid`, boundary nodes included.
pub fn errors_vs_reference(u: &[f64], grid: &SpatialGrid, reference: &ReferenceSolution) -> Result<ErrorNorms> {
    reference.window.check_inside(grid)?;
    let diffs = reference
        .points
        .iter()
        .zip(&reference.values)
        .map(|(&x, &v)| interpolate_cubic(grid, u, x).map(|ui| ui - v))
        .collect::<Result<Vec<_>>>()?;
    let m = diffs.len() as f64;
    Ok(ErrorNorms::weighted(diffs, 1.0 / m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn fake_reference(grid: &SpatialGrid, full: &[f64], window: EvalWindow) -> ReferenceSolution {
        let points = window.points();
        let values = points.iter().map(|&x| interpolate_cubic(grid, full, x).unwrap()).collect();
        ReferenceSolution {
            window,
            points,
            values,
            interior: grid.interior(),
            steps: 1,
            scheme: SchemeKind::Bdf2,
            order: SpatialOrder::Fourth,
            newton_rel_tol: 1e-10,
        }
    }

    #[test]
    fn default_window_has_4001_points() {
        let w = EvalWindow::new(80.0, 120.0, 0.01).unwrap();
        assert_eq!(w.len(), 4001);
        let p = w.points();
        assert_eq!(p[0], 80.0);
        assert_eq!(p[4000], 120.0);
        assert_relative_eq!(p[2000], 100.0, epsilon = 1e-12);
    }

    #[test]
    fn window_validation() {
        assert!(EvalWindow::new(1.0, 0.0, 0.1).is_err());
        assert!(EvalWindow::new(0.0, 1.0, 0.0).is_err());
        let g = SpatialGrid::new(75.0, 275.0, 10).unwrap();
        assert!(EvalWindow::new(70.0, 120.0, 0.5).unwrap().check_inside(&g).is_err());
    }

    #[test]
    fn self_and_shifted_errors() {
        let g = SpatialGrid::new(0.0, 4.0, 15).unwrap();
        let full: Vec<f64> = g.nodes().iter().map(|x| (x * 1.3).sin()).collect();
        let r = fake_reference(&g, &full, EvalWindow::new(1.0, 3.0, 0.01).unwrap());
        let e = errors_vs_reference(&full, &g, &r).unwrap();
        assert_eq!(e.as_array(), [0.0; 3]);

        let shifted: Vec<f64> = full.iter().map(|u| u + 0.25).collect();
        let e = errors_vs_reference(&shifted, &g, &r).unwrap();
        for v in e.as_array() {
            assert_relative_eq!(v, 0.25, epsilon = 1e-12);
        }
    }

    #[test]
    fn reference_on_node_equals_node_value() {
        let p = crate::problems::american_put_benchmark();
        let w = EvalWindow::new(95.0, 105.0, 2.5).unwrap();
        let r =
            make_reference(&p, SchemeKind::Bdf2, SpatialOrder::Fourth, 79, 20, w, &MarchOptions::default()).unwrap();
        // h = 2.5, so every window point is a node
        let grid = SpatialGrid::new(75.0, 275.0, 79).unwrap();
        let out = march(
            &p,
            &grid,
            &TimeGrid::new(1.0, 20).unwrap(),
            SchemeKind::Bdf2,
            SpatialOrder::Fourth,
            &MarchOptions::default(),
        )
        .unwrap();
        for (x, v) in r.points.iter().zip(&r.values) {
            let k = ((x - 75.0) / 2.5).round() as usize;
            assert_eq!(*v, out.solution[k - 1]);
        }
        assert_eq!(r.values.len(), 5);
    }
}
