//! Control-pulse waveforms: chirped HSH pulses and constant square pulses.
//!
//! An HSH pulse has hyperbolic-secant amplitude edges around a flat middle
//! section, with a frequency chirp that follows tanh on the edges and is
//! linear across the middle. Both the amplitude and the chirp slope are
//! continuous at the edge/middle junctions.

use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::float::Real;

/// Default sech-edge truncation: sech(5.3) cuts the amplitude at ~1%.
pub const DEFAULT_EDGE_TRUNCATION: f64 = 5.3;

/// Shape parameters of an HSH pulse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HshParams<R> {
    /// Peak Rabi angular frequency at the flat middle, rad/s.
    pub peak_rabi: R,
    /// Total cut-off duration T_C, seconds.
    pub cutoff_duration: R,
    /// Flat-middle fraction T_sq / T_C, in (0, 1).
    pub square_fraction: R,
    /// Total chirp span over the whole pulse, rad/s.
    pub chirp_span: R,
    /// Dimensionless sech-edge truncation argument (beta).
    pub edge_truncation: R,
}

impl<R: Real> HshParams<R> {
    /// Duration of the flat middle, T_sq = f_sq * T_C.
    pub fn square_duration(&self) -> R {
        self.square_fraction * self.cutoff_duration
    }

    /// Duration of each sech edge, T_e = (T_C - T_sq) / 2.
    pub fn edge_duration(&self) -> R {
        (self.cutoff_duration - self.square_duration()) * R::of(0.5)
    }

    pub fn with_peak_rabi(mut self, peak_rabi: R) -> Self {
        self.peak_rabi = peak_rabi;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.cutoff_duration > R::zero()) {
            return Err(Error::invalid("cutoff_duration", "must be > 0"));
        }
        if !(self.square_fraction > R::zero() && self.square_fraction < R::one()) {
            return Err(Error::invalid("square_fraction", "must lie in (0, 1)"));
        }
        if !(self.chirp_span >= R::zero()) {
            return Err(Error::invalid("chirp_span", "must be >= 0"));
        }
        if !(self.edge_truncation > R::zero()) {
            return Err(Error::invalid("edge_truncation", "must be > 0"));
        }
        if !(self.peak_rabi >= R::zero()) {
            return Err(Error::invalid("peak_rabi", "must be >= 0"));
        }
        Ok(())
    }
}

/// Time-domain description of a control pulse in the rotating frame:
/// a non-negative Rabi amplitude and an instantaneous chirp detuning,
/// both in rad/s over `t` in `[0, duration]`.
pub trait PulseWaveform<R: Real>: Send + Sync {
    fn duration(&self) -> R;
    fn amplitude(&self, t: R) -> R;
    fn chirp_detuning(&self, t: R) -> R;

    /// Largest Rabi amplitude over the pulse.
    fn peak_amplitude(&self) -> R;

    /// Largest |chirp_detuning| over the pulse.
    fn chirp_extent(&self) -> R;

    /// Uniform sampling with `n >= 2` points including both endpoints.
    fn sample(&self, n: usize) -> Vec<WaveformSample<R>> {
        assert!(n >= 2, "need at least two samples");
        let dt = self.duration() / R::of((n - 1) as f64);
        (0..n)
            .map(|i| {
                let t = dt * R::of(i as f64);
                WaveformSample {
                    time: t,
                    amplitude: self.amplitude(t),
                    detuning: self.chirp_detuning(t),
                }
            })
            .collect()
    }
}

/// One sampled waveform point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveformSample<R> {
    pub time: R,
    pub amplitude: R,
    pub detuning: R,
}

/// Write a sampled waveform as CSV for inspection.
pub fn write_waveform_csv<R: Real, W: Write>(
    out: &mut W,
    pulse: &dyn PulseWaveform<R>,
    samples: usize,
) -> io::Result<()> {
    writeln!(out, "t_s,amplitude_rad_per_s,detuning_rad_per_s")?;
    for s in pulse.sample(samples) {
        writeln!(
            out,
            "{:.9e},{:.9e},{:.9e}",
            s.time.as_f64(),
            s.amplitude.as_f64(),
            s.detuning.as_f64()
        )?;
    }
    Ok(())
}

/// An HSH pulse with precomputed chirp geometry.
#[derive(Debug, Clone, Copy)]
pub struct HshPulse<R> {
    params: HshParams<R>,
    edge: R,
    square: R,
    /// Chirp span of the linear middle section.
    gamma_mid: R,
    /// tanh coefficient on the edges, fixed by slope continuity.
    edge_chirp_coeff: R,
    /// +1 for the canonical low-to-high sweep, -1 when reversed.
    chirp_sign: R,
}

/// Build an HSH waveform over `[0, T_C]`.
///
/// The chirp sweeps from -chirp_span/2 to +chirp_span/2 in total; the middle
/// section carries `gamma_mid = chirp_span / (1 + 2 T_e tanh(beta) / (T_sq beta))`
/// of it and the tanh edges the remainder, the unique smooth apportionment
/// with value and slope continuous at the junctions.
pub fn make_hsh<R: Real>(params: HshParams<R>) -> Result<HshPulse<R>> {
    params.validate()?;
    let edge = params.edge_duration();
    let square = params.square_duration();
    let beta = params.edge_truncation;
    let gamma_mid =
        params.chirp_span / (R::one() + R::of(2.0) * edge * beta.tanh() / (square * beta));
    let edge_chirp_coeff = gamma_mid * edge / (square * beta);
    Ok(HshPulse {
        params,
        edge,
        square,
        gamma_mid,
        edge_chirp_coeff,
        chirp_sign: R::one(),
    })
}

impl<R: Real> HshPulse<R> {
    pub fn params(&self) -> &HshParams<R> {
        &self.params
    }

    /// Chirp span carried by the linear middle section, rad/s.
    pub fn middle_chirp_span(&self) -> R {
        self.gamma_mid
    }

    /// The same pulse with the chirp direction reversed (high-to-low sweep).
    pub fn reversed_chirp(mut self) -> Self {
        self.chirp_sign = -self.chirp_sign;
        self
    }

    fn clamp_time(&self, t: R) -> R {
        t.max(R::zero()).min(self.params.cutoff_duration)
    }
}

#[inline]
fn sech<R: Real>(x: R) -> R {
    R::one() / x.cosh()
}

impl<R: Real> PulseWaveform<R> for HshPulse<R> {
    fn duration(&self) -> R {
        self.params.cutoff_duration
    }

    fn amplitude(&self, t: R) -> R {
        let t = self.clamp_time(t);
        let beta = self.params.edge_truncation;
        let omega = self.params.peak_rabi;
        if t < self.edge {
            let s = (t - self.edge) / self.edge;
            omega * sech(beta * s)
        } else if t <= self.edge + self.square {
            omega
        } else {
            let s = (t - self.edge - self.square) / self.edge;
            omega * sech(beta * s)
        }
    }

    fn chirp_detuning(&self, t: R) -> R {
        let t = self.clamp_time(t);
        let beta = self.params.edge_truncation;
        let half_mid = self.gamma_mid * R::of(0.5);
        let value = if t < self.edge {
            let s = (t - self.edge) / self.edge;
            -half_mid + self.edge_chirp_coeff * (beta * s).tanh()
        } else if t <= self.edge + self.square {
            -half_mid + self.gamma_mid / self.square * (t - self.edge)
        } else {
            let s = (t - self.edge - self.square) / self.edge;
            half_mid + self.edge_chirp_coeff * (beta * s).tanh()
        };
        self.chirp_sign * value
    }

    fn peak_amplitude(&self) -> R {
        self.params.peak_rabi
    }

    fn chirp_extent(&self) -> R {
        self.params.chirp_span * R::of(0.5)
    }
}

/// A constant-amplitude, constant-detuning pulse.
#[derive(Debug, Clone, Copy)]
pub struct SquarePulse<R> {
    pub rabi: R,
    pub duration: R,
    pub fixed_detuning: R,
}

pub fn make_square<R: Real>(rabi: R, duration: R, fixed_detuning: R) -> Result<SquarePulse<R>> {
    if !(duration > R::zero()) {
        return Err(Error::invalid("duration", "must be > 0"));
    }
    if !(rabi >= R::zero()) {
        return Err(Error::invalid("rabi", "must be >= 0"));
    }
    Ok(SquarePulse {
        rabi,
        duration,
        fixed_detuning,
    })
}

impl<R: Real> PulseWaveform<R> for SquarePulse<R> {
    fn duration(&self) -> R {
        self.duration
    }

    fn amplitude(&self, _t: R) -> R {
        self.rabi
    }

    fn chirp_detuning(&self, _t: R) -> R {
        self.fixed_detuning
    }

    fn peak_amplitude(&self) -> R {
        self.rabi
    }

    fn chirp_extent(&self) -> R {
        self.fixed_detuning.abs()
    }
}

/// Asymptotic inversion efficiency of a long adiabatic HSH pulse,
/// `1 - exp(-pi/2 * T_sq * rabi^2 / chirp_span)`, all frequencies in rad/s.
///
/// Valid when the chirp span is large compared to the pulse Fourier width
/// 1/T_sq; the numerical Bloch propagation has no such restriction.
pub fn analytical_hsh_efficiency<R: Real>(peak_rabi: R, square_duration: R, chirp_span: R) -> Result<R> {
    if !(square_duration > R::zero()) {
        return Err(Error::invalid("square_duration", "must be > 0"));
    }
    if !(chirp_span > R::zero()) {
        return Err(Error::invalid(
            "chirp_span",
            "must be > 0 (the asymptotic formula is singular at zero span)",
        ));
    }
    if !(peak_rabi >= R::zero()) {
        return Err(Error::invalid("peak_rabi", "must be >= 0"));
    }
    let exponent = R::of(0.5) * R::PI() * square_duration * peak_rabi * peak_rabi / chirp_span;
    Ok(R::one() - (-exponent).exp())
}
