//! Spatial averaging of the spectrally averaged inversion efficiency over
//! the input mode: radial for co-linear beams, Cartesian with a z-dependent
//! transverse displacement for crossed beams.

use rayon::prelude::*;

use crate::beams::{CrystalGeometry, GaussianBeam};
use crate::bloch::{inversion_efficiency_with, BlochOptions};
use crate::error::{Error, Result};
use crate::float::Real;
use crate::interp::{CubicSpline, LeftBoundary};
use crate::pulses::{analytical_hsh_efficiency, make_hsh, HshParams};
use crate::quad::GaussLegendre;
use crate::spectral::{spectral_average_with_nodes, GaussianSpectrum};

/// How the single-pulse efficiency at a point is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMode {
    /// Numerical Bloch propagation averaged over the input spectrum.
    Bloch,
    /// Asymptotic HSH formula with the local Rabi frequency; valid for long
    /// adiabatic pulses whose chirp span dwarfs the pulse Fourier width.
    Analytical,
}

/// Grid resolutions for the spatial and spectral averages.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    /// Gauss-Legendre nodes of the radial quadrature.
    pub radial: usize,
    /// Uniform z slabs across the crystal.
    pub z_slabs: usize,
    /// Nodes per Cartesian axis for the crossed-beam average.
    pub cartesian: usize,
    /// Samples of the local-Rabi efficiency curve (Bloch mode).
    pub rabi: usize,
    /// Spectral quadrature nodes.
    pub spectral: usize,
    /// Points per emitted transverse profile.
    pub profile_points: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            radial: 64,
            z_slabs: 41,
            cartesian: 81,
            rabi: 129,
            spectral: 65,
            profile_points: 201,
        }
    }
}

/// Everything needed to evaluate one optical control pulse over the crystal.
///
/// `pulse.peak_rabi` is the control Rabi frequency at the beam waist center,
/// i.e. the largest value anywhere in the crystal.
#[derive(Debug, Clone, Copy)]
pub struct OpticalControlConfig<R> {
    pub control_beam: GaussianBeam<R>,
    pub pulse: HshParams<R>,
    pub input_beam: GaussianBeam<R>,
    pub input_spectrum: GaussianSpectrum<R>,
    pub crystal: CrystalGeometry<R>,
    pub mode: EvalMode,
    pub grid: GridSpec,
}

impl<R: Real> OpticalControlConfig<R> {
    pub fn peak_rabi(&self) -> R {
        self.pulse.peak_rabi
    }

    pub fn validate(&self) -> Result<()> {
        self.pulse.validate()?;
        if self.mode == EvalMode::Analytical && !(self.pulse.chirp_span > R::zero()) {
            return Err(Error::invalid(
                "pulse.chirp_span",
                "must be > 0 in analytical mode",
            ));
        }
        if self.control_beam.wavelength != self.input_beam.wavelength {
            return Err(Error::invalid(
                "input_beam.wavelength",
                "control and input beams must share the wavelength",
            ));
        }
        if self.grid.radial < 2 || self.grid.z_slabs < 1 || self.grid.cartesian < 3 {
            return Err(Error::invalid("grid", "spatial grids are too small"));
        }
        if self.grid.rabi < 2 || self.grid.spectral < 2 {
            return Err(Error::invalid("grid", "curve grids need at least two nodes"));
        }
        Ok(())
    }

    /// Largest input-mode radius inside the crystal.
    fn max_input_radius(&self) -> R {
        let half = self.crystal.half_length();
        self.input_beam.radius(half).max(self.input_beam.radius(-half))
    }

    /// Radial extent needed by the co-linear average: 3x the widest input
    /// radius, where the intensity weight has fallen to e^-18.
    pub fn radial_extent(&self) -> R {
        R::of(3.0) * self.max_input_radius()
    }
}

/// Spectrally averaged single-pulse efficiency as a function of the local
/// peak Rabi frequency.
///
/// The pulse shape and spectrum are fixed over the crystal, so the efficiency
/// at any point depends on position only through the local Rabi frequency.
/// In Bloch mode the curve is sampled on a uniform Rabi grid (each sample is
/// a full spectral average of Bloch propagations) and interpolated with a
/// cubic spline; the top node sits exactly at `max_rabi`, so on-axis values
/// at the waist are table entries, not interpolants.
#[derive(Debug, Clone)]
pub enum RabiEfficiencyCurve<R> {
    Analytic { square_duration: R, chirp_span: R },
    Sampled(CubicSpline<R>),
}

impl<R: Real> RabiEfficiencyCurve<R> {
    pub fn build(
        pulse: &HshParams<R>,
        spectrum: &GaussianSpectrum<R>,
        mode: EvalMode,
        max_rabi: R,
        grid: &GridSpec,
    ) -> Result<Self> {
        match mode {
            EvalMode::Analytical => {
                // validated once here so evaluation is infallible
                analytical_hsh_efficiency(max_rabi, pulse.square_duration(), pulse.chirp_span)?;
                Ok(RabiEfficiencyCurve::Analytic {
                    square_duration: pulse.square_duration(),
                    chirp_span: pulse.chirp_span,
                })
            }
            EvalMode::Bloch => {
                let n = grid.rabi.max(2);
                let opts = BlochOptions::default();
                let step = max_rabi / R::of((n - 1) as f64);
                let rabis: Vec<R> = (0..n).map(|i| step * R::of(i as f64)).collect();
                let values: Result<Vec<R>> = rabis
                    .par_iter()
                    .map(|&rabi| {
                        let local = make_hsh(pulse.with_peak_rabi(rabi))?;
                        spectral_average_with_nodes(
                            |delta| inversion_efficiency_with(&local, delta, &opts),
                            spectrum,
                            grid.spectral,
                        )
                    })
                    .collect();
                Ok(RabiEfficiencyCurve::Sampled(CubicSpline::new(
                    rabis,
                    values?,
                    LeftBoundary::Natural,
                )))
            }
        }
    }

    /// Efficiency at a local Rabi frequency; result clamped to [0, 1].
    pub fn eta_at_rabi(&self, rabi: R) -> R {
        let eta = match self {
            RabiEfficiencyCurve::Analytic {
                square_duration,
                chirp_span,
            } => {
                let x = R::of(0.5) * R::PI() * *square_duration * rabi * rabi / *chirp_span;
                R::one() - (-x).exp()
            }
            RabiEfficiencyCurve::Sampled(spline) => spline.eval(rabi),
        };
        eta.max(R::zero()).min(R::one())
    }
}

/// Spectrally averaged efficiency tabulated on an (r, z) grid.
///
/// The radial nodes are Gauss-Legendre nodes on `[0, r_extent]` with the
/// axis point prepended (zero quadrature weight, interpolation anchor); the
/// z nodes are the centers of uniform slabs spanning the crystal.
#[derive(Debug, Clone)]
pub struct RadialEfficiencyMap<R> {
    r: Vec<R>,
    r_weights: Vec<R>,
    z: Vec<R>,
    dz: R,
    /// Radial extent the map was built for; the last node lies just inside.
    extent: R,
    /// values[j][i] = efficiency at (r[i], z[j])
    values: Vec<Vec<R>>,
}

impl<R: Real> RadialEfficiencyMap<R> {
    pub fn r_nodes(&self) -> &[R] {
        &self.r
    }

    pub fn z_nodes(&self) -> &[R] {
        &self.z
    }

    pub fn value(&self, i_r: usize, j_z: usize) -> R {
        self.values[j_z][i_r]
    }

    pub fn r_extent(&self) -> R {
        self.extent
    }

    /// Write as CSV rows `r_m,z_m,eta`.
    pub fn write_csv<W: std::io::Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "r_m,z_m,eta")?;
        for (j, z) in self.z.iter().enumerate() {
            for (i, r) in self.r.iter().enumerate() {
                writeln!(
                    out,
                    "{:.9e},{:.9e},{:.9e}",
                    r.as_f64(),
                    z.as_f64(),
                    self.values[j][i].as_f64()
                )?;
            }
        }
        Ok(())
    }
}

/// Build the efficiency map over the default co-linear extent.
pub fn radial_efficiency_map<R: Real>(
    cfg: &OpticalControlConfig<R>,
) -> Result<RadialEfficiencyMap<R>> {
    radial_efficiency_map_with_extent(cfg, cfg.radial_extent())
}

/// Build the efficiency map out to `r_extent`.
pub fn radial_efficiency_map_with_extent<R: Real>(
    cfg: &OpticalControlConfig<R>,
    r_extent: R,
) -> Result<RadialEfficiencyMap<R>> {
    let curve = RabiEfficiencyCurve::build(
        &cfg.pulse,
        &cfg.input_spectrum,
        cfg.mode,
        cfg.peak_rabi(),
        &cfg.grid,
    )?;
    radial_efficiency_map_with_curve(cfg, r_extent, &curve)
}

/// Build the efficiency map out to `r_extent` from a prebuilt curve, so
/// callers sweeping the beam geometry can reuse one set of Bloch solutions.
///
/// The radial node count grows with the extent so the interpolation spacing
/// stays below ~1/6 of the control waist (the scale the efficiency varies on)
/// even for the wide maps needed at large crossing angles.
pub fn radial_efficiency_map_with_curve<R: Real>(
    cfg: &OpticalControlConfig<R>,
    r_extent: R,
    curve: &RabiEfficiencyCurve<R>,
) -> Result<RadialEfficiencyMap<R>> {
    cfg.validate()?;
    if !(r_extent > R::zero()) {
        return Err(Error::invalid("r_extent", "must be > 0"));
    }

    let dense = (R::of(3.0) * R::PI() * r_extent / cfg.control_beam.waist_radius)
        .as_f64()
        .ceil() as usize;
    let n_r = cfg.grid.radial.max(dense);
    let rule = GaussLegendre::new(n_r);
    let (mut r, mut r_weights) = rule.scaled(R::zero(), r_extent);
    r.insert(0, R::zero());
    r_weights.insert(0, R::zero());

    let n_z = cfg.grid.z_slabs;
    let length = cfg.crystal.length;
    let dz = length / R::of(n_z as f64);
    let z: Vec<R> = (0..n_z)
        .map(|j| -cfg.crystal.half_length() + dz * R::of(j as f64 + 0.5))
        .collect();

    let peak = cfg.peak_rabi();
    let values: Vec<Vec<R>> = z
        .iter()
        .map(|&zj| {
            r.iter()
                .map(|&ri| curve.eta_at_rabi(cfg.control_beam.rabi(peak, ri, zj)))
                .collect()
        })
        .collect();

    Ok(RadialEfficiencyMap {
        r,
        r_weights,
        z,
        dz,
        extent: r_extent,
        values,
    })
}

/// Single-pulse optical control efficiency for co-linear beams: the input-
/// intensity-weighted average of the map over r and z.
pub fn radial_average<R: Real>(
    map: &RadialEfficiencyMap<R>,
    cfg: &OpticalControlConfig<R>,
) -> Result<R> {
    let required = cfg.radial_extent();
    let available = map.r_extent();
    if available < required * (R::one() - R::of(1e-9)) {
        return Err(Error::InsufficientCoverage {
            required: required.as_f64(),
            available: available.as_f64(),
        });
    }
    let length = cfg.crystal.length;
    let two_pi = R::TAU();
    let mut total = R::zero();
    for (j, &zj) in map.z.iter().enumerate() {
        let mut slab = R::zero();
        for (i, &ri) in map.r.iter().enumerate() {
            slab += map.r_weights[i] * ri * cfg.input_beam.intensity(ri, zj) * map.values[j][i];
        }
        total += map.dz / length * two_pi * slab;
    }
    Ok(total.max(R::zero()).min(R::one()))
}

/// Cartesian geometry of the crossed-beam average for angle `theta`.
struct CrossedGrid<R> {
    x_half: R,
    y_half: R,
    max_displacement: R,
}

fn crossed_grid<R: Real>(cfg: &OpticalControlConfig<R>, theta: R) -> CrossedGrid<R> {
    let w_in_max = cfg.input_beam.radius(cfg.crystal.half_length()).max(
        cfg.input_beam.radius(-cfg.crystal.half_length()),
    );
    let max_displacement = cfg.crystal.half_length() * theta.tan();
    CrossedGrid {
        x_half: R::of(3.0) * (w_in_max + max_displacement),
        y_half: R::of(3.0) * w_in_max,
        max_displacement,
    }
}

/// Map extent required by [`crossed_beam_average`] at angle `theta`.
pub fn crossed_map_extent<R: Real>(cfg: &OpticalControlConfig<R>, theta: R) -> R {
    let g = crossed_grid(cfg, theta);
    ((g.x_half + g.max_displacement).powi(2) + g.y_half * g.y_half).sqrt()
}

/// Single-pulse optical control efficiency for beams crossing at `theta`.
///
/// The control mode keeps its radial symmetry about its own axis, displaced
/// by `z tan(theta)` along x relative to the input axis, so the efficiency at
/// a Cartesian point interpolates the radial map at the displaced radius.
/// The average weights by the Cartesian input intensity over x, y and z.
pub fn crossed_beam_average<R: Real>(
    map: &RadialEfficiencyMap<R>,
    theta: R,
    cfg: &OpticalControlConfig<R>,
) -> Result<R> {
    if !(theta >= R::zero()) {
        return Err(Error::invalid("theta", "must be >= 0"));
    }
    let grid = crossed_grid(cfg, theta);
    let required = crossed_map_extent(cfg, theta);
    if map.r_extent() < required * (R::one() - R::of(1e-9)) {
        return Err(Error::InsufficientCoverage {
            required: required.as_f64(),
            available: map.r_extent().as_f64(),
        });
    }

    let n = cfg.grid.cartesian;
    let xs = uniform_grid(-grid.x_half, grid.x_half, n);
    let ys = uniform_grid(-grid.y_half, grid.y_half, n);
    let wx = trapezoid_weights(&xs);
    let wy = trapezoid_weights(&ys);
    let tan_theta = theta.tan();
    let length = cfg.crystal.length;

    let slab_sums: Vec<R> = map
        .z
        .par_iter()
        .enumerate()
        .map(|(j, &zj)| {
            let spline = CubicSpline::new(
                map.r.clone(),
                map.values[j].clone(),
                LeftBoundary::Clamped(R::zero()),
            );
            let w_in = cfg.input_beam.radius(zj);
            let norm = R::of(2.0) / (R::PI() * w_in * w_in);
            let displacement = zj * tan_theta;
            let gy: Vec<R> = ys
                .iter()
                .map(|&y| (-R::of(2.0) * (y / w_in) * (y / w_in)).exp())
                .collect();
            let mut slab = R::zero();
            for (xi, &x) in xs.iter().enumerate() {
                let gx = (-R::of(2.0) * (x / w_in) * (x / w_in)).exp();
                let dx = x - displacement;
                let mut row = R::zero();
                for (yi, &y) in ys.iter().enumerate() {
                    let r_shift = (dx * dx + y * y).sqrt();
                    row += wy[yi] * gy[yi] * spline.eval(r_shift);
                }
                slab += wx[xi] * gx * row;
            }
            norm * slab
        })
        .collect();

    let total = slab_sums
        .iter()
        .fold(R::zero(), |acc, &s| acc + map.dz / length * s);
    Ok(total.max(R::zero()).min(R::one()))
}

/// Convenience wrapper: build a map of adequate extent and average it.
/// At theta = 0 this reduces to the radial average.
pub fn optical_control_efficiency<R: Real>(
    cfg: &OpticalControlConfig<R>,
    theta: R,
) -> Result<R> {
    if theta == R::zero() {
        let map = radial_efficiency_map(cfg)?;
        radial_average(&map, cfg)
    } else {
        let map = radial_efficiency_map_with_extent(cfg, crossed_map_extent(cfg, theta))?;
        crossed_beam_average(&map, theta, cfg)
    }
}

fn uniform_grid<R: Real>(lo: R, hi: R, n: usize) -> Vec<R> {
    let step = (hi - lo) / R::of((n - 1) as f64);
    (0..n).map(|i| lo + step * R::of(i as f64)).collect()
}

fn trapezoid_weights<R: Real>(grid: &[R]) -> Vec<R> {
    let n = grid.len();
    let h = (grid[n - 1] - grid[0]) / R::of((n - 1) as f64);
    (0..n)
        .map(|i| {
            if i == 0 || i == n - 1 {
                h * R::of(0.5)
            } else {
                h
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beams::optimal_input_waist;
    use crate::pulses::DEFAULT_EDGE_TRUNCATION;

    const TWO_PI: f64 = std::f64::consts::TAU;

    fn nominal(mode: EvalMode) -> OpticalControlConfig<f64> {
        let wavelength = 580e-9;
        OpticalControlConfig {
            control_beam: GaussianBeam::new(60e-6, wavelength).unwrap(),
            pulse: HshParams {
                peak_rabi: TWO_PI * 532e3,
                cutoff_duration: 15e-6,
                square_fraction: 0.7,
                chirp_span: TWO_PI * 1.5e6,
                edge_truncation: DEFAULT_EDGE_TRUNCATION,
            },
            input_beam: GaussianBeam::new(34e-6, wavelength).unwrap(),
            input_spectrum: GaussianSpectrum::new(TWO_PI * 110e3).unwrap(),
            crystal: CrystalGeometry::new(12.5e-3).unwrap(),
            mode,
            grid: GridSpec::default(),
        }
    }

    #[test]
    fn zero_rabi_gives_zero_map() {
        let mut cfg = nominal(EvalMode::Analytical);
        cfg.pulse.peak_rabi = 0.0;
        let map = radial_efficiency_map(&cfg).unwrap();
        for j in 0..map.z_nodes().len() {
            for i in 0..map.r_nodes().len() {
                assert_eq!(map.value(i, j), 0.0);
            }
        }
        assert_eq!(radial_average(&map, &cfg).unwrap(), 0.0);
    }

    #[test]
    fn analytic_map_center_matches_formula() {
        let cfg = nominal(EvalMode::Analytical);
        let map = radial_efficiency_map(&cfg).unwrap();
        // node (r = 0, middle slab) sits exactly on the beam waist
        let j_mid = cfg.grid.z_slabs / 2;
        assert!(map.z_nodes()[j_mid].abs() < 1e-12);
        let expected =
            analytical_hsh_efficiency(cfg.peak_rabi(), cfg.pulse.square_duration(), cfg.pulse.chirp_span)
                .unwrap();
        assert_eq!(map.value(0, j_mid), expected);
    }

    #[test]
    fn bloch_and_analytic_agree_on_axis_for_adiabatic_pulse() {
        // only the curve endpoints are needed for the on-axis comparison;
        // at 15 us the pulse is adiabatic to ~1e-2, at 60 us to well below
        for (cutoff, tol) in [(15e-6, 0.02), (60e-6, 0.005)] {
            let mut cfg = nominal(EvalMode::Bloch);
            cfg.pulse.cutoff_duration = cutoff;
            cfg.grid.rabi = 2;
            let map_b = radial_efficiency_map(&cfg).unwrap();
            cfg.mode = EvalMode::Analytical;
            let map_a = radial_efficiency_map(&cfg).unwrap();
            let j_mid = cfg.grid.z_slabs / 2;
            let diff = (map_b.value(0, j_mid) - map_a.value(0, j_mid)).abs();
            assert!(diff < tol, "bloch vs analytic at the waist ({cutoff} s): {diff}");
        }
    }

    #[test]
    fn unit_map_averages_to_one() {
        let cfg = nominal(EvalMode::Analytical);
        let mut map = radial_efficiency_map(&cfg).unwrap();
        for row in &mut map.values {
            for v in row.iter_mut() {
                *v = 1.0;
            }
        }
        let avg = radial_average(&map, &cfg).unwrap();
        assert!((avg - 1.0).abs() < 1e-6, "avg = {avg}");
    }

    #[test]
    fn wide_control_beam_approaches_on_axis_average() {
        let mut cfg = nominal(EvalMode::Analytical);
        cfg.control_beam = GaussianBeam::new(5e-3, 580e-9).unwrap();
        let map = radial_efficiency_map(&cfg).unwrap();
        let avg = radial_average(&map, &cfg).unwrap();
        // on-axis z-average
        let n = map.z_nodes().len() as f64;
        let on_axis: f64 = (0..map.z_nodes().len()).map(|j| map.value(0, j)).sum::<f64>() / n;
        assert!((avg - on_axis).abs() < 1e-3, "{avg} vs {on_axis}");
    }

    #[test]
    fn crossed_at_zero_angle_matches_radial() {
        let cfg = nominal(EvalMode::Analytical);
        let radial = optical_control_efficiency(&cfg, 0.0).unwrap();
        let map = radial_efficiency_map_with_extent(&cfg, crossed_map_extent(&cfg, 0.0)).unwrap();
        let cart = crossed_beam_average(&map, 0.0, &cfg).unwrap();
        assert!((radial - cart).abs() < 1e-3, "{radial} vs {cart}");
    }

    #[test]
    fn efficiency_decreases_with_angle() {
        let mut cfg = nominal(EvalMode::Analytical);
        cfg.control_beam = GaussianBeam::new(120e-6, 580e-9).unwrap();
        cfg.pulse.peak_rabi = TWO_PI * 266e3;
        let mut prev = f64::INFINITY;
        for deg in [0.0, 0.25, 0.5, 1.0, 2.0] {
            let theta = deg * std::f64::consts::PI / 180.0;
            let eta = optical_control_efficiency(&cfg, theta).unwrap();
            assert!(eta <= prev + 1e-9, "theta {deg} deg: {eta} vs {prev}");
            assert!((0.0..=1.0).contains(&eta));
            prev = eta;
        }
    }

    #[test]
    fn grid_doubling_is_converged() {
        let mut cfg = nominal(EvalMode::Analytical);
        let base = optical_control_efficiency(&cfg, 0.0).unwrap();
        cfg.grid.radial *= 2;
        cfg.grid.z_slabs *= 2;
        let fine = optical_control_efficiency(&cfg, 0.0).unwrap();
        assert!((base - fine).abs() < 1e-3, "{base} vs {fine}");

        let mut cfg = nominal(EvalMode::Analytical);
        cfg.control_beam = GaussianBeam::new(120e-6, 580e-9).unwrap();
        cfg.pulse.peak_rabi = TWO_PI * 266e3;
        let theta = 1.0 * std::f64::consts::PI / 180.0;
        let base = optical_control_efficiency(&cfg, theta).unwrap();
        cfg.grid.radial *= 2;
        cfg.grid.z_slabs *= 2;
        cfg.grid.cartesian = 2 * cfg.grid.cartesian - 1;
        let fine = optical_control_efficiency(&cfg, theta).unwrap();
        assert!((base - fine).abs() < 1e-3, "{base} vs {fine}");
    }

    #[test]
    fn coverage_errors() {
        let cfg = nominal(EvalMode::Analytical);
        let map = radial_efficiency_map(&cfg).unwrap();
        // the default map is too narrow for a 1 degree crossing
        let theta = 1.0_f64.to_radians();
        match crossed_beam_average(&map, theta, &cfg) {
            Err(Error::InsufficientCoverage { .. }) => {}
            other => panic!("expected coverage error, got {other:?}"),
        }
        let mut small = nominal(EvalMode::Analytical);
        small.input_beam = GaussianBeam::new(500e-6, 580e-9).unwrap();
        match radial_average(&map, &small) {
            Err(Error::InsufficientCoverage { .. }) => {}
            other => panic!("expected coverage error, got {other:?}"),
        }
    }

    #[test]
    fn negative_angle_rejected() {
        let cfg = nominal(EvalMode::Analytical);
        let map = radial_efficiency_map(&cfg).unwrap();
        assert!(crossed_beam_average(&map, -0.1, &cfg).is_err());
    }

    #[test]
    fn analytic_mode_requires_chirp() {
        let mut cfg = nominal(EvalMode::Analytical);
        cfg.pulse.chirp_span = 0.0;
        assert!(radial_efficiency_map(&cfg).is_err());
    }

    #[test]
    fn displacement_rule() {
        // z tan(theta) at the end face for half a degree
        let z: f64 = 6.25e-3;
        let theta = 0.5_f64.to_radians();
        let displacement = z * theta.tan();
        assert!((displacement - 54.5e-6).abs() < 0.1e-6, "{displacement}");
    }

    #[test]
    fn input_waist_from_length_rule_recovers_default() {
        let w = optimal_input_waist(12.5e-3, 580e-9).unwrap();
        let cfg = nominal(EvalMode::Analytical);
        assert!((w - cfg.input_beam.waist_radius).abs() < 0.05e-6);
    }

    #[test]
    fn map_csv_shape() {
        let mut cfg = nominal(EvalMode::Analytical);
        cfg.grid.radial = 8;
        cfg.grid.z_slabs = 3;
        let map = radial_efficiency_map(&cfg).unwrap();
        let mut buf = Vec::new();
        map.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let expected_rows = map.r_nodes().len() * map.z_nodes().len();
        assert_eq!(text.lines().count(), 1 + expected_rows);
        assert!(text.starts_with("r_m,z_m,eta"));
    }
}
