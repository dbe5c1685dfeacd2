//! Two-level Bloch-vector propagation in the rotating frame.
//!
//! The equations of motion for `r = (u, v, w)` driven by a pulse with Rabi
//! amplitude `omega(t)` and chirp detuning, for an atom detuned by `delta`:
//!
//! ```text
//! du/dt = -D(t) v - g2 u
//! dv/dt =  D(t) u + omega(t) w - g2 v
//! dw/dt = -omega(t) v - g1 (w + 1)
//! ```
//!
//! with `D(t) = delta - chirp(t)`. The relaxation rates `g1 = 1/T1` and
//! `g2 = 1/T2` default to zero (no decay, no pure dephasing), in which case
//! the propagation is a pure rotation and the vector norm is conserved.

use crate::error::{Error, Result};
use crate::float::Real;
use crate::ode::{integrate_rk45, Rk45Options};
use crate::pulses::PulseWaveform;

/// Bloch vector; `w` is the population inversion component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector<R> {
    pub u: R,
    pub v: R,
    pub w: R,
}

impl<R: Real> BlochVector<R> {
    pub fn new(u: R, v: R, w: R) -> Self {
        BlochVector { u, v, w }
    }

    /// Ground state (0, 0, -1).
    pub fn ground() -> Self {
        BlochVector {
            u: R::zero(),
            v: R::zero(),
            w: -R::one(),
        }
    }

    pub fn norm(&self) -> R {
        (self.u * self.u + self.v * self.v + self.w * self.w).sqrt()
    }
}

/// Optional relaxation rates, rad/s. Zero means T1 = T2 = infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Relaxation<R> {
    pub population_rate: R,
    pub dephasing_rate: R,
}

impl<R: Real> Default for Relaxation<R> {
    fn default() -> Self {
        Relaxation {
            population_rate: R::zero(),
            dephasing_rate: R::zero(),
        }
    }
}

/// Propagation controls.
#[derive(Debug, Clone, Copy)]
pub struct BlochOptions<R> {
    pub abs_tol: R,
    pub rel_tol: R,
    pub relaxation: Relaxation<R>,
}

impl<R: Real> Default for BlochOptions<R> {
    fn default() -> Self {
        // floored at 100 epsilon so f32 instantiations stay integrable
        let tol = R::of(1e-11).max(R::epsilon() * R::of(100.0));
        BlochOptions {
            abs_tol: tol,
            rel_tol: tol,
            relaxation: Relaxation::default(),
        }
    }
}

const UNIT_NORM_TOL: f64 = 1e-9;

/// Propagate `initial` through the full pulse at fixed atom detuning (rad/s).
pub fn propagate<R: Real, P: PulseWaveform<R> + ?Sized>(
    pulse: &P,
    atom_detuning: R,
    initial: BlochVector<R>,
) -> Result<BlochVector<R>> {
    propagate_with(pulse, atom_detuning, initial, &BlochOptions::default())
}

pub fn propagate_with<R: Real, P: PulseWaveform<R> + ?Sized>(
    pulse: &P,
    atom_detuning: R,
    initial: BlochVector<R>,
    opts: &BlochOptions<R>,
) -> Result<BlochVector<R>> {
    let norm = initial.norm();
    if (norm - R::one()).abs() > R::of(UNIT_NORM_TOL) {
        return Err(Error::invalid(
            "initial",
            format!("Bloch vector must have unit norm, got {}", norm.as_f64()),
        ));
    }

    let duration = pulse.duration();
    let g1 = opts.relaxation.population_rate;
    let g2 = opts.relaxation.dephasing_rate;
    let rhs = |t: R, y: &[R; 3]| -> [R; 3] {
        let omega = pulse.amplitude(t);
        let delta = atom_detuning - pulse.chirp_detuning(t);
        [
            -delta * y[1] - g2 * y[0],
            delta * y[0] + omega * y[2] - g2 * y[1],
            -omega * y[1] - g1 * (y[2] + R::one()),
        ]
    };

    // Cap the step so the controller cannot leap across pulse features;
    // 1/8 of the fastest rotation period is ample for an order-5 method.
    let fastest = pulse
        .peak_amplitude()
        .max(atom_detuning.abs() + pulse.chirp_extent());
    let max_step = if fastest > R::zero() {
        (R::TAU() / (R::of(8.0) * fastest)).min(duration / R::of(16.0))
    } else {
        duration / R::of(16.0)
    };
    let ode_opts = Rk45Options {
        abs_tol: opts.abs_tol,
        rel_tol: opts.rel_tol,
        max_step,
        max_steps: 50_000_000,
    };

    let y = integrate_rk45(rhs, R::zero(), duration, [initial.u, initial.v, initial.w], &ode_opts)?;
    Ok(BlochVector::new(y[0], y[1], y[2]))
}

const EFFICIENCY_SLACK: f64 = 1e-8;

/// Population inversion efficiency `(1 + w_final) / 2` starting from the
/// ground state. Values outside `[0, 1]` by more than the integration
/// tolerance are an error; within it they are clamped.
pub fn inversion_efficiency<R: Real, P: PulseWaveform<R> + ?Sized>(
    pulse: &P,
    atom_detuning: R,
) -> Result<R> {
    inversion_efficiency_with(pulse, atom_detuning, &BlochOptions::default())
}

pub fn inversion_efficiency_with<R: Real, P: PulseWaveform<R> + ?Sized>(
    pulse: &P,
    atom_detuning: R,
    opts: &BlochOptions<R>,
) -> Result<R> {
    let final_state = propagate_with(pulse, atom_detuning, BlochVector::ground(), opts)?;
    let eff = (R::one() + final_state.w) * R::of(0.5);
    let slack = R::of(EFFICIENCY_SLACK);
    if eff < -slack || eff > R::one() + slack {
        return Err(Error::IntegrationFailure {
            time_reached: pulse.duration().as_f64(),
            reason: format!("efficiency {} outside [0, 1]", eff.as_f64()),
        });
    }
    Ok(eff.max(R::zero()).min(R::one()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pulses::{make_hsh, make_square, HshParams, DEFAULT_EDGE_TRUNCATION};

    const TWO_PI: f64 = std::f64::consts::TAU;

    /// Closed-form Rabi inversion for a constant pulse: the independent
    /// oracle for the numerical propagation.
    fn rabi_oracle(rabi: f64, detuning: f64, duration: f64) -> f64 {
        let gen2 = rabi * rabi + detuning * detuning;
        if gen2 == 0.0 {
            return -1.0;
        }
        let s = (gen2.sqrt() * duration / 2.0).sin();
        -1.0 + 2.0 * (rabi * rabi / gen2) * s * s
    }

    #[test]
    fn zero_drive_is_identity_on_ground() {
        let p = make_square(0.0, 5e-6, 0.0).unwrap();
        let r = propagate(&p, TWO_PI * 250e3, BlochVector::ground()).unwrap();
        assert!((r.w + 1.0).abs() < 1e-12);
        assert!(r.u.abs() < 1e-12 && r.v.abs() < 1e-12);
    }

    #[test]
    fn resonant_pi_pulse_inverts() {
        let rabi = TWO_PI * 100e3;
        let duration = std::f64::consts::PI / rabi;
        let p = make_square(rabi, duration, 0.0).unwrap();
        let r = propagate(&p, 0.0, BlochVector::ground()).unwrap();
        assert!((r.w - 1.0).abs() < 1e-6, "w = {}", r.w);
        let eff = inversion_efficiency(&p, 0.0).unwrap();
        assert!((eff - 1.0).abs() < 1e-6);
    }

    #[test]
    fn detuned_square_matches_rabi_oracle() {
        let rabi = TWO_PI * 100e3;
        let det = TWO_PI * 100e3;
        let p = make_square(rabi, 5e-6, 0.0).unwrap();
        let r = propagate(&p, det, BlochVector::ground()).unwrap();
        let expected = rabi_oracle(rabi, det, 5e-6);
        assert!((expected + 0.367).abs() < 5e-4, "oracle sanity: {expected}");
        assert!((r.w - expected).abs() < 1e-6, "w = {} vs {}", r.w, expected);
    }

    #[test]
    fn oracle_grid_and_norm_conservation() {
        let rabis = [10e3, 100e3, 500e3];
        let dets = [0.0, 50e3, -50e3, 300e3, -300e3];
        let durations = [1e-6, 5e-6, 20e-6];
        let mut worst_err: f64 = 0.0;
        let mut worst_norm: f64 = 0.0;
        for &f in &rabis {
            for &d in &dets {
                for &t in &durations {
                    let p = make_square(TWO_PI * f, t, 0.0).unwrap();
                    let r = propagate(&p, TWO_PI * d, BlochVector::ground()).unwrap();
                    let expected = rabi_oracle(TWO_PI * f, TWO_PI * d, t);
                    worst_err = worst_err.max((r.w - expected).abs());
                    worst_norm = worst_norm.max((r.norm() - 1.0).abs());
                }
            }
        }
        assert!(worst_err < 1e-6, "worst oracle error {worst_err}");
        assert!(worst_norm < 1e-8, "worst norm drift {worst_norm}");
    }

    fn hsh(cutoff: f64, rabi: f64) -> HshParams<f64> {
        HshParams {
            peak_rabi: rabi,
            cutoff_duration: cutoff,
            square_fraction: 0.7,
            chirp_span: TWO_PI * 1.5e6,
            edge_truncation: DEFAULT_EDGE_TRUNCATION,
        }
    }

    #[test]
    fn adiabatic_hsh_matches_asymptotic_formula() {
        // long pulse: numerical inversion agrees with the asymptotic value
        let params = hsh(60e-6, TWO_PI * 532e3);
        let pulse = make_hsh(params).unwrap();
        let eff = inversion_efficiency(&pulse, 0.0).unwrap();
        let expected = crate::pulses::analytical_hsh_efficiency(
            TWO_PI * 532e3,
            0.7 * 60e-6,
            TWO_PI * 1.5e6,
        )
        .unwrap();
        assert!((eff - expected).abs() < 0.005, "{eff} vs {expected}");
    }

    #[test]
    fn chirp_direction_symmetry() {
        let pulse = make_hsh(hsh(15e-6, TWO_PI * 200e3)).unwrap();
        let reversed = pulse.reversed_chirp();
        for det_khz in [-400.0, -75.0, 0.0, 150.0, 620.0] {
            let det = TWO_PI * det_khz * 1e3;
            let fwd = inversion_efficiency(&pulse, det).unwrap();
            let rev = inversion_efficiency(&reversed, -det).unwrap();
            assert!((fwd - rev).abs() < 1e-6, "det {det_khz} kHz: {fwd} vs {rev}");
        }
    }

    #[test]
    fn detuning_symmetry() {
        let pulse = make_hsh(hsh(15e-6, TWO_PI * 200e3)).unwrap();
        for det_khz in [40.0, 310.0, 700.0] {
            let det = TWO_PI * det_khz * 1e3;
            let plus = inversion_efficiency(&pulse, det).unwrap();
            let minus = inversion_efficiency(&pulse, -det).unwrap();
            assert!((plus - minus).abs() < 1e-6, "det {det_khz} kHz");
        }
    }

    #[test]
    fn rejects_non_unit_initial_vector() {
        let p = make_square(1.0, 1e-6, 0.0).unwrap();
        let bad = BlochVector::new(0.0, 0.0, -0.9);
        match propagate(&p, 0.0, bad) {
            Err(Error::InvalidParameter { name, .. }) => assert_eq!(name, "initial"),
            other => panic!("expected parameter error, got {other:?}"),
        }
    }

    #[test]
    fn f32_propagation_matches_oracle_at_reduced_precision() {
        let rabi = std::f32::consts::TAU * 100e3;
        let p = make_square(rabi, 5e-6_f32, 0.0).unwrap();
        let r = propagate(&p, std::f32::consts::TAU * 100e3, BlochVector::ground()).unwrap();
        let expected = rabi_oracle(TWO_PI * 100e3, TWO_PI * 100e3, 5e-6) as f32;
        assert!((r.w - expected).abs() < 1e-3, "w = {} vs {}", r.w, expected);
        assert!((r.norm() - 1.0).abs() < 1e-4);
    }

    #[test]
    fn relaxation_damps_inversion() {
        // a pi pulse with strong transverse decay no longer fully inverts
        let rabi = TWO_PI * 100e3;
        let duration = std::f64::consts::PI / rabi;
        let p = make_square(rabi, duration, 0.0).unwrap();
        let opts = BlochOptions {
            relaxation: Relaxation {
                population_rate: 0.0,
                dephasing_rate: 2e5,
            },
            ..BlochOptions::default()
        };
        let r = propagate_with(&p, 0.0, BlochVector::ground(), &opts).unwrap();
        assert!(r.w < 0.999 && r.w > 0.0, "w = {}", r.w);
    }
}
