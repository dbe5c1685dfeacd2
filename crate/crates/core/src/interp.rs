//! Cubic spline interpolation on a monotone grid.

use crate::float::Real;

/// Boundary condition at the left end of the spline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LeftBoundary<R> {
    /// Zero second derivative (natural spline).
    Natural,
    /// Prescribed first derivative; used to enforce even symmetry about r = 0.
    Clamped(R),
}

/// Cubic spline through `(x_i, y_i)` with a natural right boundary.
#[derive(Debug, Clone)]
pub struct CubicSpline<R> {
    x: Vec<R>,
    y: Vec<R>,
    /// Second derivatives at the knots.
    m: Vec<R>,
}

impl<R: Real> CubicSpline<R> {
    /// Fit a spline; `x` must be strictly increasing with at least two knots.
    pub fn new(x: Vec<R>, y: Vec<R>, left: LeftBoundary<R>) -> Self {
        let n = x.len();
        assert!(n >= 2, "spline needs at least two knots");
        assert_eq!(n, y.len(), "knot/value length mismatch");
        assert!(
            x.windows(2).all(|p| p[1] > p[0]),
            "spline knots must be strictly increasing"
        );

        // Tridiagonal system for the knot second derivatives (moments).
        let mut diag = vec![R::zero(); n];
        let mut upper = vec![R::zero(); n];
        let mut rhs = vec![R::zero(); n];
        let two = R::of(2.0);
        let six = R::of(6.0);

        match left {
            LeftBoundary::Natural => {
                diag[0] = R::one();
            }
            LeftBoundary::Clamped(slope) => {
                let h0 = x[1] - x[0];
                diag[0] = two * h0;
                upper[0] = h0;
                rhs[0] = six * ((y[1] - y[0]) / h0 - slope);
            }
        }
        for i in 1..n - 1 {
            let h_lo = x[i] - x[i - 1];
            let h_hi = x[i + 1] - x[i];
            diag[i] = two * (h_lo + h_hi);
            upper[i] = h_hi;
            rhs[i] = six * ((y[i + 1] - y[i]) / h_hi - (y[i] - y[i - 1]) / h_lo);
        }
        diag[n - 1] = R::one();

        // Thomas algorithm; the sub-diagonal entry of interior row i is
        // h_{i-1}, and the natural last row has none.
        let mut m = vec![R::zero(); n];
        let mut c_star = vec![R::zero(); n];
        let mut d_star = vec![R::zero(); n];
        c_star[0] = upper[0] / diag[0];
        d_star[0] = rhs[0] / diag[0];
        for i in 1..n {
            let lower = if i < n - 1 { x[i] - x[i - 1] } else { R::zero() };
            let denom = diag[i] - lower * c_star[i - 1];
            if i < n - 1 {
                c_star[i] = upper[i] / denom;
            }
            d_star[i] = (rhs[i] - lower * d_star[i - 1]) / denom;
        }
        m[n - 1] = d_star[n - 1];
        for i in (0..n - 1).rev() {
            m[i] = d_star[i] - c_star[i] * m[i + 1];
        }

        CubicSpline { x, y, m }
    }

    /// Evaluate at `t`, clamping to the knot range.
    pub fn eval(&self, t: R) -> R {
        let n = self.x.len();
        let t = t.max(self.x[0]).min(self.x[n - 1]);
        // Binary search for the interval containing t.
        let mut lo = 0;
        let mut hi = n - 1;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.x[mid] <= t {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let h = self.x[hi] - self.x[lo];
        let a = (self.x[hi] - t) / h;
        let b = (t - self.x[lo]) / h;
        let six = R::of(6.0);
        a * self.y[lo]
            + b * self.y[hi]
            + ((a * a * a - a) * self.m[lo] + (b * b * b - b) * self.m[hi]) * h * h / six
    }

    pub fn x_max(&self) -> R {
        *self.x.last().unwrap()
    }
}
