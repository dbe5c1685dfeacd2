//! One-dimensional maximization: coarse grid plus golden-section refinement.

use crate::error::{Error, Result};
use crate::float::Real;

/// Golden-section search for the maximum of a unimodal `f` on `[a, b]`.
///
/// Returns `(x_max, f_max)` once the bracket is narrower than `tol`.
pub fn golden_section_maximize<R: Real, E>(
    mut f: impl FnMut(R) -> std::result::Result<R, E>,
    mut a: R,
    mut b: R,
    tol: R,
) -> std::result::Result<(R, R), E> {
    let inv_phi = R::of(0.618_033_988_749_894_9);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        if f1 > f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2)?;
        }
    }
    Ok(if f1 > f2 { (x1, f1) } else { (x2, f2) })
}

/// Maximize over a coarse log-spaced grid, then refine around the best grid
/// point with golden sections. Errors if the coarse maximum sits on the
/// boundary (no interior maximum is bracketed).
pub fn grid_then_golden_maximize<R: Real>(
    mut f: impl FnMut(R) -> Result<R>,
    lo: R,
    hi: R,
    coarse_points: usize,
    tol: R,
) -> Result<(R, R)> {
    if !(lo > R::zero() && hi > lo) {
        return Err(Error::OptimizationDomain(format!(
            "bounds must satisfy 0 < lo < hi, got [{}, {}]",
            lo.as_f64(),
            hi.as_f64()
        )));
    }
    let n = coarse_points.max(3);
    let log_lo = lo.ln();
    let step = (hi.ln() - log_lo) / R::of((n - 1) as f64);
    let grid: Vec<R> = (0..n)
        .map(|i| (log_lo + step * R::of(i as f64)).exp())
        .collect();
    let mut best = 0;
    let mut best_val = R::neg_infinity();
    for (i, &x) in grid.iter().enumerate() {
        let v = f(x)?;
        if v > best_val {
            best_val = v;
            best = i;
        }
    }
    if best == 0 || best == n - 1 {
        return Err(Error::OptimizationDomain(format!(
            "no interior maximum within [{}, {}]: best grid value at the boundary",
            lo.as_f64(),
            hi.as_f64()
        )));
    }
    golden_section_maximize(f, grid[best - 1], grid[best + 1], tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn finds_parabola_peak() {
        let f = |x: f64| Ok::<_, Error>(-(x - 2.3) * (x - 2.3) + 5.0);
        let (x, v) = golden_section_maximize(f, 0.0, 10.0, 1e-8).unwrap();
        assert!((x - 2.3).abs() < 1e-6);
        assert!((v - 5.0).abs() < 1e-10);
    }

    #[test]
    fn grid_refinement_converges() {
        let f = |x: f64| Ok(-(x.ln() - 1.0).powi(2));
        let (x, _) = grid_then_golden_maximize(f, 0.1, 50.0, 12, 1e-6).unwrap();
        assert!((x - std::f64::consts::E).abs() < 1e-4, "x = {x}");
    }

    #[test]
    fn boundary_maximum_is_an_error() {
        // monotone increasing: maximum at the upper bound
        let r = grid_then_golden_maximize(|x: f64| Ok(x), 1.0, 10.0, 12, 1e-6);
        assert!(matches!(r, Err(Error::OptimizationDomain(_))));
        // flat function: argmax lands on the first grid point
        let r = grid_then_golden_maximize(|_: f64| Ok(1.0), 1.0, 10.0, 12, 1e-6);
        assert!(matches!(r, Err(Error::OptimizationDomain(_))));
    }

    #[test]
    fn invalid_bounds_rejected() {
        let r = grid_then_golden_maximize(|x: f64| Ok(x), 5.0, 2.0, 12, 1e-6);
        assert!(r.is_err());
    }
}
