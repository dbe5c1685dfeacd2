//! Spin (RF) control-pulse efficiency with resonant-circuit filtering.
//!
//! The impedance-matched coil enhances the RF Rabi frequency but responds as
//! a Lorentzian resonance, attenuating the drive away from its center. The
//! RF field is taken as spatially homogeneous, so the spin control efficiency
//! is a purely spectral average over the inhomogeneous spin line.

use crate::bloch::{inversion_efficiency_with, BlochOptions};
use crate::error::{Error, Result};
use crate::float::Real;
use crate::pulses::{make_hsh, HshParams, HshPulse, PulseWaveform};
use crate::spectral::{spectral_average_with_nodes, GaussianSpectrum};

/// Resonant RF circuit with a Lorentzian resonance of FWHM `fwhm`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RfCircuit<R> {
    /// Resonance angular frequency, rad/s.
    pub resonance: R,
    /// FWHM of the Lorentzian resonance, rad/s.
    pub fwhm: R,
    /// Rabi frequency on resonance, rad/s.
    pub peak_rabi: R,
}

impl<R: Real> RfCircuit<R> {
    pub fn validate(&self) -> Result<()> {
        if !(self.fwhm > R::zero()) {
            return Err(Error::invalid("circuit.fwhm", "must be > 0"));
        }
        if !(self.peak_rabi >= R::zero()) {
            return Err(Error::invalid("circuit.peak_rabi", "must be >= 0"));
        }
        Ok(())
    }

    /// Dimensionless Lorentzian resonance curve in (0, 1], unity on
    /// resonance and 1/2 at one half-width.
    pub fn lorentzian(&self, omega: R) -> R {
        let half = self.fwhm * R::of(0.5);
        let det = omega - self.resonance;
        half * half / (det * det + half * half)
    }

    /// Conventional frequency-dependent Rabi curve of the circuit: the peak
    /// Rabi frequency scaled by the Lorentzian.
    pub fn rabi_at(&self, omega: R) -> R {
        self.peak_rabi * self.lorentzian(omega)
    }

    /// Field-magnitude response used when propagating through the circuit:
    /// the Lorentzian describes the resonance power, so the drive amplitude
    /// (and with it the Rabi frequency) follows its square root, the
    /// magnitude response of a single-pole resonance.
    pub fn field_response(&self, omega: R) -> R {
        self.lorentzian(omega).sqrt()
    }
}

/// Where the circuit response enters the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CircuitFilterMode {
    /// Attenuate the drive amplitude in time as the chirp sweeps the pulse
    /// carrier across the resonance. The chirp is slow compared to the
    /// circuit response, so the filter acts on the instantaneous frequency.
    #[default]
    InstantaneousFrequency,
    /// Apply one static attenuation per atom, evaluated at the atom's
    /// transition frequency.
    StaticDetuning,
}

/// Configuration of one spin control pulse.
///
/// `pulse.peak_rabi` must equal `circuit.peak_rabi`: the circuit sets the
/// on-resonance drive strength and the waveform is filtered relative to it.
#[derive(Debug, Clone, Copy)]
pub struct SpinControlConfig<R> {
    pub circuit: RfCircuit<R>,
    pub pulse: HshParams<R>,
    /// Inhomogeneous spin line (FWHM Gamma_spin), centered on the carrier.
    pub spin_line: GaussianSpectrum<R>,
    /// Spin transition angular frequency the pulse is centered on, rad/s.
    pub carrier: R,
    pub filter_mode: CircuitFilterMode,
    pub spectral_nodes: usize,
}

impl<R: Real> SpinControlConfig<R> {
    pub fn validate(&self) -> Result<()> {
        self.circuit.validate()?;
        self.pulse.validate()?;
        if !(self.pulse.chirp_span > R::zero()) {
            return Err(Error::invalid(
                "spin.pulse.chirp_span",
                "must be > 0 to cover the spin line",
            ));
        }
        if self.pulse.peak_rabi != self.circuit.peak_rabi {
            return Err(Error::invalid(
                "spin.pulse.peak_rabi",
                "must equal circuit.peak_rabi (the circuit sets the drive peak)",
            ));
        }
        if !(self.carrier > R::zero()) {
            return Err(Error::invalid("spin.carrier", "must be > 0"));
        }
        if self.spectral_nodes < 2 {
            return Err(Error::invalid("spin.spectral_nodes", "needs at least two nodes"));
        }
        Ok(())
    }
}

/// An HSH waveform whose amplitude is attenuated by the circuit response at
/// the instantaneous pulse frequency `carrier + chirp(t)`.
#[derive(Debug, Clone, Copy)]
pub struct CircuitFilteredPulse<R> {
    base: HshPulse<R>,
    circuit: RfCircuit<R>,
    carrier: R,
}

impl<R: Real> CircuitFilteredPulse<R> {
    pub fn new(base: HshPulse<R>, circuit: RfCircuit<R>, carrier: R) -> Self {
        CircuitFilteredPulse {
            base,
            circuit,
            carrier,
        }
    }
}

impl<R: Real> PulseWaveform<R> for CircuitFilteredPulse<R> {
    fn duration(&self) -> R {
        self.base.duration()
    }

    fn amplitude(&self, t: R) -> R {
        self.base.amplitude(t)
            * self
                .circuit
                .field_response(self.carrier + self.base.chirp_detuning(t))
    }

    fn chirp_detuning(&self, t: R) -> R {
        self.base.chirp_detuning(t)
    }

    fn peak_amplitude(&self) -> R {
        self.base.peak_amplitude()
    }

    fn chirp_extent(&self) -> R {
        self.base.chirp_extent()
    }
}

/// An HSH waveform with a constant amplitude attenuation.
#[derive(Debug, Clone, Copy)]
struct ScaledPulse<R> {
    base: HshPulse<R>,
    scale: R,
}

impl<R: Real> PulseWaveform<R> for ScaledPulse<R> {
    fn duration(&self) -> R {
        self.base.duration()
    }

    fn amplitude(&self, t: R) -> R {
        self.scale * self.base.amplitude(t)
    }

    fn chirp_detuning(&self, t: R) -> R {
        self.base.chirp_detuning(t)
    }

    fn peak_amplitude(&self) -> R {
        self.scale * self.base.peak_amplitude()
    }

    fn chirp_extent(&self) -> R {
        self.base.chirp_extent()
    }
}

/// Spin control single-pulse efficiency: the Bloch inversion efficiency of
/// the circuit-filtered spin HSH pulse, averaged over the inhomogeneous spin
/// line. No spatial average is taken (homogeneous RF field).
pub fn spin_control_efficiency<R: Real>(cfg: &SpinControlConfig<R>) -> Result<R> {
    spin_control_efficiency_with(cfg, &BlochOptions::default())
}

pub fn spin_control_efficiency_with<R: Real>(
    cfg: &SpinControlConfig<R>,
    opts: &BlochOptions<R>,
) -> Result<R> {
    cfg.validate()?;
    let base = make_hsh(cfg.pulse)?;
    match cfg.filter_mode {
        CircuitFilterMode::InstantaneousFrequency => {
            let pulse = CircuitFilteredPulse::new(base, cfg.circuit, cfg.carrier);
            spectral_average_with_nodes(
                |delta| inversion_efficiency_with(&pulse, delta, opts),
                &cfg.spin_line,
                cfg.spectral_nodes,
            )
        }
        CircuitFilterMode::StaticDetuning => spectral_average_with_nodes(
            |delta| {
                let pulse = ScaledPulse {
                    base,
                    scale: cfg.circuit.field_response(cfg.carrier + delta),
                };
                inversion_efficiency_with(&pulse, delta, opts)
            },
            &cfg.spin_line,
            cfg.spectral_nodes,
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pulses::DEFAULT_EDGE_TRUNCATION;
    use crate::spectral::DEFAULT_SPECTRAL_NODES;

    const TWO_PI: f64 = std::f64::consts::TAU;

    fn reference_circuit() -> RfCircuit<f64> {
        RfCircuit {
            resonance: TWO_PI * 34e6,
            fwhm: TWO_PI * 190e3,
            peak_rabi: TWO_PI * 42e3,
        }
    }

    fn reference_config() -> SpinControlConfig<f64> {
        SpinControlConfig {
            circuit: reference_circuit(),
            pulse: HshParams {
                peak_rabi: TWO_PI * 42e3,
                cutoff_duration: 200e-6,
                square_fraction: 0.75,
                chirp_span: TWO_PI * 350e3,
                edge_truncation: DEFAULT_EDGE_TRUNCATION,
            },
            spin_line: GaussianSpectrum::new(TWO_PI * 123e3).unwrap(),
            carrier: TWO_PI * 34e6,
            filter_mode: CircuitFilterMode::InstantaneousFrequency,
            spectral_nodes: DEFAULT_SPECTRAL_NODES,
        }
    }

    #[test]
    fn circuit_response_values() {
        let c = reference_circuit();
        assert_eq!(c.rabi_at(c.resonance), c.peak_rabi);
        let at_half = c.rabi_at(c.resonance + c.fwhm / 2.0);
        assert!((at_half - c.peak_rabi / 2.0).abs() / c.peak_rabi < 1e-12);
        // 175 kHz off a 190 kHz-wide resonance leaves 22.8% on the
        // Lorentzian Rabi curve
        let at_175 = c.lorentzian(c.resonance + TWO_PI * 175e3);
        assert!((at_175 - 0.2276).abs() < 1e-3, "{at_175}");
        // even around the resonance and maximal there
        for f in [10e3, 60e3, 250e3] {
            let lo = c.lorentzian(c.resonance - TWO_PI * f);
            let hi = c.lorentzian(c.resonance + TWO_PI * f);
            assert!((lo - hi).abs() < 1e-15);
            assert!(lo < 1.0);
        }
        // the field response is the square root of the Lorentzian
        let f = c.field_response(c.resonance + TWO_PI * 95e3);
        assert!((f - 0.5_f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn efficiency_rises_then_falls_with_chirp_span() {
        let eta = |span_khz: f64| {
            let mut cfg = reference_config();
            cfg.pulse.chirp_span = TWO_PI * span_khz * 1e3;
            spin_control_efficiency(&cfg).unwrap()
        };
        let narrow = eta(150.0);
        let peak = eta(300.0);
        let wide = eta(600.0);
        assert!(narrow < peak, "{narrow} !< {peak}");
        assert!(wide < peak, "{wide} !< {peak}");
    }

    #[test]
    fn zero_drive_gives_zero_efficiency() {
        let mut cfg = reference_config();
        cfg.circuit.peak_rabi = 0.0;
        cfg.pulse.peak_rabi = 0.0;
        let eta = spin_control_efficiency(&cfg).unwrap();
        assert!(eta.abs() < 1e-12, "eta = {eta}");
    }

    #[test]
    fn flat_circuit_adiabatic_limit_approaches_unity() {
        let mut cfg = reference_config();
        cfg.circuit.fwhm = TWO_PI * 1e9;
        cfg.circuit.peak_rabi = TWO_PI * 60e3;
        cfg.pulse.peak_rabi = TWO_PI * 60e3;
        cfg.pulse.cutoff_duration = 400e-6;
        cfg.pulse.chirp_span = TWO_PI * 500e3;
        cfg.spin_line = GaussianSpectrum::new(TWO_PI * 50e3).unwrap();
        let eta = spin_control_efficiency(&cfg).unwrap();
        assert!(eta > 0.99, "eta = {eta}");
    }

    #[test]
    fn wider_spin_line_is_harder_to_cover() {
        let mut etas = Vec::new();
        for fwhm_khz in [80.0, 123.0, 200.0] {
            let mut cfg = reference_config();
            cfg.spin_line = GaussianSpectrum::new(TWO_PI * fwhm_khz * 1e3).unwrap();
            etas.push(spin_control_efficiency(&cfg).unwrap());
        }
        assert!(etas[0] >= etas[1] && etas[1] >= etas[2], "{etas:?}");
    }

    #[test]
    fn static_mode_runs_and_stays_in_range() {
        let mut cfg = reference_config();
        cfg.filter_mode = CircuitFilterMode::StaticDetuning;
        let eta = spin_control_efficiency(&cfg).unwrap();
        assert!((0.0..=1.0).contains(&eta), "eta = {eta}");
    }

    #[test]
    fn mismatched_peaks_rejected() {
        let mut cfg = reference_config();
        cfg.pulse.peak_rabi = TWO_PI * 41e3;
        assert!(spin_control_efficiency(&cfg).is_err());
        let mut cfg = reference_config();
        cfg.pulse.chirp_span = 0.0;
        assert!(spin_control_efficiency(&cfg).is_err());
        let mut cfg = reference_config();
        cfg.circuit.fwhm = 0.0;
        assert!(spin_control_efficiency(&cfg).is_err());
    }
}
