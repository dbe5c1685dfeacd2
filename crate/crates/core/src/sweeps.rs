//! Single-parameter sweeps of the full model, control-waist optimization,
//! and transverse mode/efficiency profiles.

use std::time::{Duration, Instant};

use crate::beams::{optimal_input_waist, CrystalGeometry, GaussianBeam};
use crate::efficiency::EfficiencyResult;
use crate::error::{Error, Result};
use crate::float::Real;
use crate::optimize::grid_then_golden_maximize;
use crate::pulses::{HshParams, DEFAULT_EDGE_TRUNCATION};
use crate::spatial::{
    crossed_beam_average, crossed_map_extent, radial_average, radial_efficiency_map_with_curve,
    EvalMode, GridSpec, OpticalControlConfig, RabiEfficiencyCurve,
};
use crate::spectral::{GaussianSpectrum, DEFAULT_SPECTRAL_NODES};
use crate::spincontrol::{
    spin_control_efficiency, CircuitFilterMode, RfCircuit, SpinControlConfig,
};

/// The model parameter a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParameter {
    ControlWaist,
    InputWaist,
    RfChirpSpan,
    StorageTime,
    OpticalDuration,
    InputDetuning,
    Angle,
    CrystalLength,
}

impl SweepParameter {
    pub const ALL: [SweepParameter; 8] = [
        SweepParameter::ControlWaist,
        SweepParameter::InputWaist,
        SweepParameter::RfChirpSpan,
        SweepParameter::StorageTime,
        SweepParameter::OpticalDuration,
        SweepParameter::InputDetuning,
        SweepParameter::Angle,
        SweepParameter::CrystalLength,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SweepParameter::ControlWaist => "control_waist",
            SweepParameter::InputWaist => "input_waist",
            SweepParameter::RfChirpSpan => "rf_chirp_span",
            SweepParameter::StorageTime => "storage_time",
            SweepParameter::OpticalDuration => "optical_duration",
            SweepParameter::InputDetuning => "input_detuning",
            SweepParameter::Angle => "angle",
            SweepParameter::CrystalLength => "crystal_length",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|p| p.name() == s)
    }

    /// Does changing this parameter change the optical control efficiency?
    pub fn affects_optical(&self) -> bool {
        !matches!(
            self,
            SweepParameter::RfChirpSpan | SweepParameter::StorageTime
        )
    }

    /// Does changing this parameter change the spin control efficiency?
    pub fn affects_spin(&self) -> bool {
        matches!(
            self,
            SweepParameter::RfChirpSpan | SweepParameter::StorageTime
        )
    }

    /// Does the optical pulse shape or input spectrum stay fixed across the
    /// sweep? If so, one efficiency-vs-Rabi curve serves every grid value.
    fn optical_curve_invariant(&self) -> bool {
        matches!(
            self,
            SweepParameter::ControlWaist
                | SweepParameter::InputWaist
                | SweepParameter::Angle
                | SweepParameter::CrystalLength
        )
    }
}

/// Parameter-coupling rules applied when the base configuration is resolved.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CouplingRules {
    /// Scale the control Rabi frequency as 1/waist from the reference pair.
    pub rabi_waist_scaling: bool,
    /// Shorten the spin pulse to 80% of half the storage time when the
    /// storage window cannot hold the nominal pulse.
    pub storage_time_tc_rule: bool,
    /// Recompute the input waist from the crystal length.
    pub input_waist_from_length: bool,
    /// Re-optimize the control waist at every evaluation.
    pub optimize_control_waist: bool,
}

/// Reference (waist, Rabi) pair for fixed-power 1/waist scaling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RabiReference<R> {
    pub waist: R,
    pub rabi: R,
}

/// Fully specified model: optical and spin control, geometry, composition
/// inputs and coupling rules.
#[derive(Debug, Clone, Copy)]
pub struct ModelConfig<R> {
    pub optical: OpticalControlConfig<R>,
    pub spin: SpinControlConfig<R>,
    /// Crossing angle between input and control modes, radians.
    pub angle: R,
    /// Externally measured AFC echo efficiency, if total efficiency is wanted.
    pub eta_afc: Option<R>,
    /// Externally supplied spin dephasing factor.
    pub eta_spin: R,
    pub rabi_reference: RabiReference<R>,
    /// Spin storage time T_S, seconds.
    pub storage_time: R,
    pub rules: CouplingRules,
    /// Waist bounds for the control-waist optimizer, meters.
    pub waist_bounds: (R, R),
}

impl<R: Real> Default for ModelConfig<R> {
    /// The reference experimental configuration: co-linear beams in a
    /// 12.5 mm crystal at 580 nm, 34 um input / 60 um control waists,
    /// 532 kHz control Rabi frequency, 15 us optical HSH (f_sq = 0.7,
    /// 1.5 MHz chirp), 110 kHz input spectrum, 42 kHz RF drive through a
    /// 190 kHz circuit resonating at 34 MHz, 200 us spin HSH (f_sq = 0.75,
    /// 350 kHz chirp) over a 123 kHz spin line, 500 us storage time.
    fn default() -> Self {
        let two_pi = R::TAU();
        let wavelength = R::of(580e-9);
        ModelConfig {
            optical: OpticalControlConfig {
                control_beam: GaussianBeam::new(R::of(60e-6), wavelength).unwrap(),
                pulse: HshParams {
                    peak_rabi: two_pi * R::of(532e3),
                    cutoff_duration: R::of(15e-6),
                    square_fraction: R::of(0.7),
                    chirp_span: two_pi * R::of(1.5e6),
                    edge_truncation: R::of(DEFAULT_EDGE_TRUNCATION),
                },
                input_beam: GaussianBeam::new(R::of(34e-6), wavelength).unwrap(),
                input_spectrum: GaussianSpectrum::new(two_pi * R::of(110e3)).unwrap(),
                crystal: CrystalGeometry::new(R::of(12.5e-3)).unwrap(),
                mode: EvalMode::Bloch,
                grid: GridSpec::default(),
            },
            spin: SpinControlConfig {
                circuit: RfCircuit {
                    resonance: two_pi * R::of(34e6),
                    fwhm: two_pi * R::of(190e3),
                    peak_rabi: two_pi * R::of(42e3),
                },
                pulse: HshParams {
                    peak_rabi: two_pi * R::of(42e3),
                    cutoff_duration: R::of(200e-6),
                    square_fraction: R::of(0.75),
                    chirp_span: two_pi * R::of(350e3),
                    edge_truncation: R::of(DEFAULT_EDGE_TRUNCATION),
                },
                spin_line: GaussianSpectrum::new(two_pi * R::of(123e3)).unwrap(),
                carrier: two_pi * R::of(34e6),
                filter_mode: CircuitFilterMode::InstantaneousFrequency,
                spectral_nodes: DEFAULT_SPECTRAL_NODES,
            },
            angle: R::zero(),
            eta_afc: None,
            eta_spin: R::one(),
            rabi_reference: RabiReference {
                waist: R::of(60e-6),
                rabi: two_pi * R::of(532e3),
            },
            storage_time: R::of(500e-6),
            rules: CouplingRules::default(),
            waist_bounds: (R::of(20e-6), R::of(400e-6)),
        }
    }
}

impl<R: Real> ModelConfig<R> {
    /// Apply the coupling rules, returning the configuration that is
    /// actually evaluated.
    pub fn resolve(&self) -> Result<ModelConfig<R>> {
        let mut out = *self;
        if self.rules.input_waist_from_length {
            out.optical.input_beam = GaussianBeam::with_waist_position(
                optimal_input_waist(out.optical.crystal.length, out.optical.input_beam.wavelength)?,
                out.optical.input_beam.wavelength,
                out.optical.input_beam.waist_position,
            )?;
        }
        if self.rules.rabi_waist_scaling {
            out.optical.pulse.peak_rabi = scaled_rabi(
                &self.rabi_reference,
                out.optical.control_beam.waist_radius,
            );
        }
        if self.rules.storage_time_tc_rule {
            let cap = R::of(0.8) * out.storage_time * R::of(0.5);
            if cap < out.spin.pulse.cutoff_duration {
                out.spin.pulse.cutoff_duration = cap;
            }
        }
        Ok(out)
    }
}

/// Fixed-power Rabi frequency at a control waist `w`: `rabi_ref * w_ref / w`.
pub fn scaled_rabi<R: Real>(reference: &RabiReference<R>, waist: R) -> R {
    reference.rabi * reference.waist / waist
}

/// The optical control efficiency of a resolved configuration at its angle,
/// choosing the radial or crossed-beam average as appropriate.
fn optical_efficiency_resolved<R: Real>(cfg: &ModelConfig<R>) -> Result<R> {
    let opt = &cfg.optical;
    let curve = RabiEfficiencyCurve::build(
        &opt.pulse,
        &opt.input_spectrum,
        opt.mode,
        opt.peak_rabi(),
        &opt.grid,
    )?;
    eta_oc_with_curve(opt, cfg.angle, &curve)
}

fn eta_oc_with_curve<R: Real>(
    opt: &OpticalControlConfig<R>,
    angle: R,
    curve: &RabiEfficiencyCurve<R>,
) -> Result<R> {
    if angle == R::zero() {
        let map = radial_efficiency_map_with_curve(opt, opt.radial_extent(), curve)?;
        radial_average(&map, opt)
    } else {
        let extent = crossed_map_extent(opt, angle);
        let map = radial_efficiency_map_with_curve(opt, extent, curve)?;
        crossed_beam_average(&map, angle, opt)
    }
}

/// Evaluate the full model at one configuration.
pub fn evaluate<R: Real>(cfg: &ModelConfig<R>) -> Result<EfficiencyResult<R>> {
    let resolved = cfg.resolve()?;
    let eta_oc = if resolved.rules.optimize_control_waist {
        let (_, eta_oc_sq) =
            optimize_control_waist(cfg, resolved.angle, resolved.waist_bounds)?;
        eta_oc_sq.sqrt()
    } else {
        optical_efficiency_resolved(&resolved)?
    };
    let eta_sc = spin_control_efficiency(&resolved.spin)?;
    EfficiencyResult::compose(eta_oc, eta_sc, resolved.eta_afc, resolved.eta_spin)
}

/// One sweep: the varied parameter, its value grid and the base model.
#[derive(Debug, Clone)]
pub struct SweepSpec<R> {
    pub parameter: SweepParameter,
    pub values: Vec<R>,
    pub base: ModelConfig<R>,
}

/// One evaluated grid point.
#[derive(Debug, Clone, Copy)]
pub struct SweepRow<R> {
    pub value: R,
    pub eta_oc: R,
    pub eta_sc: R,
    pub eta_opt_spin: R,
    pub eta_tot: Option<R>,
    /// Optimized control waist, when the sweep re-optimizes it per value.
    pub optimized_waist: Option<R>,
}

#[derive(Debug, Clone, Copy)]
pub struct SweepMeta {
    pub mode: EvalMode,
    pub grid: GridSpec,
    pub wall_time: Duration,
}

#[derive(Debug, Clone)]
pub struct SweepResult<R> {
    pub parameter: SweepParameter,
    pub rows: Vec<SweepRow<R>>,
    pub meta: SweepMeta,
}

fn apply_parameter<R: Real>(cfg: &mut ModelConfig<R>, parameter: SweepParameter, value: R) {
    match parameter {
        SweepParameter::ControlWaist => cfg.optical.control_beam.waist_radius = value,
        SweepParameter::InputWaist => cfg.optical.input_beam.waist_radius = value,
        SweepParameter::RfChirpSpan => cfg.spin.pulse.chirp_span = value,
        SweepParameter::StorageTime => cfg.storage_time = value,
        SweepParameter::OpticalDuration => cfg.optical.pulse.cutoff_duration = value,
        SweepParameter::InputDetuning => cfg.optical.input_spectrum.center = value,
        SweepParameter::Angle => cfg.angle = value,
        SweepParameter::CrystalLength => cfg.optical.crystal.length = value,
    }
}

/// Run the sweep, evaluating the full model at every grid value.
///
/// The side of the model the parameter does not touch is evaluated once from
/// the base configuration and reused across rows.
pub fn run_sweep<R: Real>(spec: &SweepSpec<R>) -> Result<SweepResult<R>> {
    let started = Instant::now();
    if spec.values.is_empty() {
        return Err(Error::invalid("sweep.values", "grid must be nonempty"));
    }
    if spec.values.len() > 1 {
        let increasing = spec.values.windows(2).all(|w| w[1] > w[0]);
        let decreasing = spec.values.windows(2).all(|w| w[1] < w[0]);
        if !increasing && !decreasing {
            return Err(Error::invalid("sweep.values", "grid must be monotone"));
        }
    }

    let annotate = |value: R| {
        move |e: Error| Error::Sweep {
            parameter: spec.parameter.name(),
            value: value.as_f64(),
            source: Box::new(e),
        }
    };

    let shared_spin = if spec.parameter.affects_spin() {
        None
    } else {
        let resolved = spec.base.resolve()?;
        Some(spin_control_efficiency(&resolved.spin)?)
    };
    let shared_optical = if spec.parameter.affects_optical() {
        None
    } else {
        let resolved = spec.base.resolve()?;
        if resolved.rules.optimize_control_waist {
            let (w, eta_sq) =
                optimize_control_waist(&spec.base, resolved.angle, resolved.waist_bounds)?;
            Some((eta_sq.sqrt(), Some(w)))
        } else {
            Some((optical_efficiency_resolved(&resolved)?, None))
        }
    };

    // When the pulse shape and spectrum are fixed across the grid, the
    // efficiency-vs-Rabi curve (the expensive Bloch part) is built once,
    // spanning the strongest drive any row needs.
    let shared_curve = if spec.parameter.affects_optical()
        && spec.parameter.optical_curve_invariant()
    {
        let resolved = spec.base.resolve()?;
        let mut max_rabi = R::zero();
        for &value in &spec.values {
            let mut cfg = spec.base;
            apply_parameter(&mut cfg, spec.parameter, value);
            let row = cfg.resolve().map_err(annotate(value))?;
            max_rabi = max_rabi.max(row.optical.peak_rabi());
        }
        if resolved.rules.optimize_control_waist {
            max_rabi = max_rabi.max(scaled_rabi(&resolved.rabi_reference, resolved.waist_bounds.0));
        }
        Some(RabiEfficiencyCurve::build(
            &resolved.optical.pulse,
            &resolved.optical.input_spectrum,
            resolved.optical.mode,
            max_rabi,
            &resolved.optical.grid,
        )?)
    } else {
        None
    };

    let mut rows = Vec::with_capacity(spec.values.len());
    for &value in &spec.values {
        let mut cfg = spec.base;
        apply_parameter(&mut cfg, spec.parameter, value);
        let resolved = cfg.resolve().map_err(annotate(value))?;

        let eta_sc = match shared_spin {
            Some(eta) => eta,
            None => spin_control_efficiency(&resolved.spin).map_err(annotate(value))?,
        };
        let (eta_oc, optimized_waist) = match shared_optical {
            Some(pair) => pair,
            None => {
                if resolved.rules.optimize_control_waist {
                    let (w, eta_sq) = match &shared_curve {
                        Some(curve) => optimize_control_waist_with_curve(
                            &resolved,
                            resolved.angle,
                            resolved.waist_bounds,
                            curve,
                        ),
                        None => {
                            optimize_control_waist(&cfg, resolved.angle, resolved.waist_bounds)
                        }
                    }
                    .map_err(annotate(value))?;
                    (eta_sq.sqrt(), Some(w))
                } else {
                    let eta = match &shared_curve {
                        Some(curve) => {
                            eta_oc_with_curve(&resolved.optical, resolved.angle, curve)
                        }
                        None => optical_efficiency_resolved(&resolved),
                    }
                    .map_err(annotate(value))?;
                    (eta, None)
                }
            }
        };

        let composed =
            EfficiencyResult::compose(eta_oc, eta_sc, resolved.eta_afc, resolved.eta_spin)
                .map_err(annotate(value))?;
        rows.push(SweepRow {
            value,
            eta_oc,
            eta_sc,
            eta_opt_spin: composed.eta_opt_spin,
            eta_tot: composed.eta_tot,
            optimized_waist,
        });
    }

    Ok(SweepResult {
        parameter: spec.parameter,
        rows,
        meta: SweepMeta {
            mode: spec.base.optical.mode,
            grid: spec.base.optical.grid,
            wall_time: started.elapsed(),
        },
    })
}

/// Maximize the squared optical control efficiency over the control waist,
/// with the Rabi frequency following the fixed-power 1/waist rule.
///
/// Returns `(best_waist, eta_oc_squared_at_best)`. The efficiency curve over
/// the local Rabi frequency is built once for the strongest candidate drive
/// and shared by all waists, since it does not depend on the beam geometry.
pub fn optimize_control_waist<R: Real>(
    cfg: &ModelConfig<R>,
    theta: R,
    bounds: (R, R),
) -> Result<(R, R)> {
    let (lo, hi) = bounds;
    let mut resolved = cfg.resolve()?;
    resolved.rules.optimize_control_waist = false;
    if !(lo > R::zero() && hi > lo) {
        return Err(Error::OptimizationDomain(format!(
            "waist bounds must satisfy 0 < lo < hi, got [{}, {}]",
            lo.as_f64(),
            hi.as_f64()
        )));
    }

    let max_rabi = scaled_rabi(&resolved.rabi_reference, lo);
    let opt = &resolved.optical;
    let curve =
        RabiEfficiencyCurve::build(&opt.pulse, &opt.input_spectrum, opt.mode, max_rabi, &opt.grid)?;
    optimize_control_waist_with_curve(&resolved, theta, bounds, &curve)
}

fn optimize_control_waist_with_curve<R: Real>(
    resolved: &ModelConfig<R>,
    theta: R,
    bounds: (R, R),
    curve: &RabiEfficiencyCurve<R>,
) -> Result<(R, R)> {
    let (lo, hi) = bounds;
    if !(lo > R::zero() && hi > lo) {
        return Err(Error::OptimizationDomain(format!(
            "waist bounds must satisfy 0 < lo < hi, got [{}, {}]",
            lo.as_f64(),
            hi.as_f64()
        )));
    }
    let objective = |waist: R| -> Result<R> {
        let mut candidate = resolved.optical;
        candidate.control_beam.waist_radius = waist;
        candidate.pulse.peak_rabi = scaled_rabi(&resolved.rabi_reference, waist);
        let eta = eta_oc_with_curve(&candidate, theta, curve)?;
        Ok(eta * eta)
    };

    grid_then_golden_maximize(objective, lo, hi, 12, R::of(1e-6))
}

/// One point of a transverse profile cut.
#[derive(Debug, Clone, Copy)]
pub struct ModeProfileRow<R> {
    pub x: R,
    /// Input-mode intensity, peak-normalized over the cut.
    pub input_intensity: R,
    /// Control-mode intensity, peak-normalized over the cut.
    pub control_intensity: R,
    /// Spectrally averaged single-pulse efficiency at (x, y, z).
    pub efficiency: R,
}

/// Transverse cut at height `y` and position `z`: input and control
/// intensity profiles along x together with the single-pulse efficiency.
/// The input mode is centered on x = 0 and the control mode displaced by
/// `z tan(theta)`.
pub fn emit_mode_profiles<R: Real>(
    cfg: &ModelConfig<R>,
    theta: R,
    y: R,
    z: R,
) -> Result<Vec<ModeProfileRow<R>>> {
    if !(theta >= R::zero()) {
        return Err(Error::invalid("theta", "must be >= 0"));
    }
    let resolved = cfg.resolve()?;
    let opt = &resolved.optical;
    opt.validate()?;
    let curve = RabiEfficiencyCurve::build(
        &opt.pulse,
        &opt.input_spectrum,
        opt.mode,
        opt.peak_rabi(),
        &opt.grid,
    )?;

    let displacement = z * theta.tan();
    let w_in = opt.input_beam.radius(z);
    let w_c = opt.control_beam.radius(z);
    let x_half = R::of(3.0) * w_in.max(w_c) + displacement.abs();
    let n = opt.grid.profile_points.max(2);
    let step = R::of(2.0) * x_half / R::of((n - 1) as f64);

    let two = R::of(2.0);
    let mut rows: Vec<ModeProfileRow<R>> = (0..n)
        .map(|i| {
            let x = -x_half + step * R::of(i as f64);
            let r_in_sq = x * x + y * y;
            let dx = x - displacement;
            let r_c = (dx * dx + y * y).sqrt();
            let input = (-two * r_in_sq / (w_in * w_in)).exp();
            let control = (-two * r_c * r_c / (w_c * w_c)).exp();
            let local_rabi = opt.control_beam.rabi(opt.peak_rabi(), r_c, z);
            ModeProfileRow {
                x,
                input_intensity: input,
                control_intensity: control,
                efficiency: curve.eta_at_rabi(local_rabi),
            }
        })
        .collect();

    let max_in = rows.iter().map(|r| r.input_intensity).fold(R::zero(), R::max);
    let max_c = rows.iter().map(|r| r.control_intensity).fold(R::zero(), R::max);
    for row in &mut rows {
        if max_in > R::zero() {
            row.input_intensity /= max_in;
        }
        if max_c > R::zero() {
            row.control_intensity /= max_c;
        }
    }
    Ok(rows)
}
