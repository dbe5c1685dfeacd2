//! Adaptive embedded Runge-Kutta integration for three-component states.
//!
//! Dormand-Prince 5(4) with PI-free step control and FSAL reuse; the state is
//! a fixed `[R; 3]` vector, which is all the Bloch propagation needs.

use crate::error::{Error, Result};
use crate::float::Real;

/// Integration controls.
#[derive(Debug, Clone, Copy)]
pub struct Rk45Options<R> {
    pub abs_tol: R,
    pub rel_tol: R,
    /// Upper bound on the step size; caps stepping across narrow pulse edges.
    pub max_step: R,
    pub max_steps: usize,
}

impl<R: Real> Rk45Options<R> {
    pub fn with_tolerance(abs_tol: R, rel_tol: R, span: R) -> Self {
        Rk45Options {
            abs_tol,
            rel_tol,
            max_step: span,
            max_steps: 50_000_000,
        }
    }
}

#[rustfmt::skip]
mod tableau {
    pub const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
    pub const A2: [f64; 1] = [1.0 / 5.0];
    pub const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
    pub const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
    pub const A5: [f64; 4] = [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0];
    pub const A6: [f64; 5] = [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0];
    // fifth-order solution weights (also the last stage row: FSAL)
    pub const B: [f64; 6] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0];
    // difference between the fifth- and embedded fourth-order weights
    pub const E: [f64; 7] = [
        71.0 / 57600.0, 0.0, -71.0 / 16695.0, 71.0 / 1920.0,
        -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0,
    ];
}

#[inline]
fn axpy<R: Real>(y: &[R; 3], h: R, coeffs: &[f64], k: &[[R; 3]]) -> [R; 3] {
    let mut out = *y;
    for (c, ki) in coeffs.iter().zip(k) {
        if *c == 0.0 {
            continue;
        }
        let hc = h * R::of(*c);
        for j in 0..3 {
            out[j] += hc * ki[j];
        }
    }
    out
}

/// Integrate `dy/dt = f(t, y)` from `t0` to `t1` (`t1 > t0`).
///
/// Returns the final state, or an [`Error::IntegrationFailure`] carrying the
/// time reached when the controller drives the step below resolvable size.
pub fn integrate_rk45<R, F>(f: F, t0: R, t1: R, y0: [R; 3], opts: &Rk45Options<R>) -> Result<[R; 3]>
where
    R: Real,
    F: Fn(R, &[R; 3]) -> [R; 3],
{
    use tableau::*;

    let span = t1 - t0;
    if span <= R::zero() {
        return Err(Error::invalid("t1", "integration span must be positive"));
    }
    let max_step = opts.max_step.min(span);
    let min_step = span * R::of(1e-14).max(R::epsilon() * R::of(4.0));

    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y);
    let mut h = (span * R::of(1e-4)).min(max_step);

    let order_inv = R::of(0.2);
    let safety = R::of(0.9);
    let shrink = R::of(0.2);
    let grow = R::of(5.0);

    for _ in 0..opts.max_steps {
        if t >= t1 {
            return Ok(y);
        }
        h = h.min(t1 - t);
        if h < min_step {
            return Err(Error::IntegrationFailure {
                time_reached: t.as_f64(),
                reason: format!("step size underflow (h = {:.3e} s)", h.as_f64()),
            });
        }

        let k2 = f(t + h * R::of(C[1]), &axpy(&y, h, &A2, &[k1]));
        let k3 = f(t + h * R::of(C[2]), &axpy(&y, h, &A3, &[k1, k2]));
        let k4 = f(t + h * R::of(C[3]), &axpy(&y, h, &A4, &[k1, k2, k3]));
        let k5 = f(t + h * R::of(C[4]), &axpy(&y, h, &A5, &[k1, k2, k3, k4]));
        let k6 = f(t + h * R::of(C[5]), &axpy(&y, h, &A6, &[k1, k2, k3, k4, k5]));
        let y_new = axpy(&y, h, &B, &[k1, k2, k3, k4, k5, k6]);
        // FSAL: stage 7 is the derivative at the candidate solution
        let k7 = f(t + h, &y_new);

        let ks = [k1, k2, k3, k4, k5, k6, k7];
        let mut err_sq = R::zero();
        for j in 0..3 {
            let mut e = R::zero();
            for (c, ki) in E.iter().zip(&ks) {
                e += R::of(*c) * ki[j];
            }
            e *= h;
            let scale = opts.abs_tol + opts.rel_tol * y[j].abs().max(y_new[j].abs());
            let r = e / scale;
            err_sq += r * r;
        }
        let err = (err_sq / R::of(3.0)).sqrt();

        if err <= R::one() {
            t += h;
            y = y_new;
            k1 = k7;
        }
        let factor = if err > R::zero() {
            (safety * err.powf(-order_inv)).max(shrink).min(grow)
        } else {
            grow
        };
        h = (h * factor).min(max_step);
    }

    Err(Error::IntegrationFailure {
        time_reached: t.as_f64(),
        reason: format!("step budget of {} exhausted", opts.max_steps),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(span: f64) -> Rk45Options<f64> {
        Rk45Options::with_tolerance(1e-11, 1e-11, span)
    }

    #[test]
    fn exponential_decay() {
        let y = integrate_rk45(
            |_, y| [-y[0], -2.0 * y[1], 0.5 * y[2]],
            0.0,
            1.0,
            [1.0, 1.0, 1.0],
            &opts(1.0),
        )
        .unwrap();
        assert!((y[0] - (-1.0_f64).exp()).abs() < 1e-9);
        assert!((y[1] - (-2.0_f64).exp()).abs() < 1e-9);
        assert!((y[2] - 0.5_f64.exp()).abs() < 1e-9);
    }

    #[test]
    fn circular_rotation_preserves_norm() {
        // 100 full turns of a fast rotation; the global error grows with the
        // integration length, ~3e2 x tolerance here
        let omega = 2.0 * std::f64::consts::PI * 1.0e6;
        let y = integrate_rk45(
            |_, y| [omega * y[1], -omega * y[0], 0.0],
            0.0,
            1.0e-4,
            [0.0, 1.0, 0.0],
            &opts(1e-4),
        )
        .unwrap();
        let norm = (y[0] * y[0] + y[1] * y[1] + y[2] * y[2]).sqrt();
        assert!((norm - 1.0).abs() < 1e-8, "norm drift {}", (norm - 1.0).abs());
        // solution returns to the start
        assert!((y[1] - 1.0).abs() < 1e-6, "y = {y:?}");
    }

    #[test]
    fn time_dependent_rhs() {
        // y' = cos(t) => y = sin(t)
        let y = integrate_rk45(|t, _| [t.cos(), 0.0, 0.0], 0.0, 2.0, [0.0, 0.0, 0.0], &opts(2.0))
            .unwrap();
        assert!((y[0] - 2.0_f64.sin()).abs() < 1e-9);
    }

    #[test]
    fn rejects_empty_span() {
        let r = integrate_rk45(|_, y| *y, 1.0, 1.0, [0.0; 3], &opts(1.0));
        assert!(r.is_err());
    }
}
