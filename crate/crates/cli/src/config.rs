//! Configuration parsing: flat `key = value` text or JSON, dotted keys,
//! mandatory unit suffixes on dimensioned values.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use afc_sim_core::spatial::EvalMode;
use afc_sim_core::spincontrol::CircuitFilterMode;
use afc_sim_core::sweeps::{ModelConfig, SweepParameter};

const TWO_PI: f64 = std::f64::consts::TAU;

/// A config-level error: reported with the key path and reason, exit 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ConfigError {}

type Result<T> = std::result::Result<T, ConfigError>;

fn err<T>(key: &str, reason: impl std::fmt::Display) -> Result<T> {
    Err(ConfigError(format!("config error at `{key}`: {reason}")))
}

/// Physical dimension of a config value, fixing the accepted unit suffixes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    /// Ordinary frequency with suffix (Hz, kHz, MHz, GHz); stored as rad/s.
    Frequency,
    /// Time with suffix (s, ms, us, ns).
    Time,
    /// Length with suffix (m, mm, um, nm).
    Length,
    /// Angle with suffix (deg, rad, mrad); stored as radians.
    Angle,
    /// Bare number.
    Dimensionless,
}

impl Dimension {
    fn unit_help(&self) -> &'static str {
        match self {
            Dimension::Frequency => "Hz|kHz|MHz|GHz",
            Dimension::Time => "s|ms|us|ns",
            Dimension::Length => "m|mm|um|nm",
            Dimension::Angle => "deg|rad|mrad",
            Dimension::Dimensionless => "(no unit)",
        }
    }
}

/// Parse `"60 um"`-style quantities into SI (rad/s, s, m, rad, or bare).
pub fn parse_quantity(key: &str, raw: &str, dim: Dimension) -> Result<f64> {
    let raw = raw.trim();
    let split = raw
        .char_indices()
        .rev()
        .take_while(|(_, c)| c.is_alphabetic() || *c == 'µ' || *c == '°')
        .last()
        .map(|(i, _)| i)
        .unwrap_or(raw.len());
    let (num_part, unit) = raw.split_at(split);
    let unit = unit.trim();
    let value: f64 = match num_part.trim().parse() {
        Ok(v) => v,
        Err(_) => return err(key, format!("`{raw}` is not a number with unit")),
    };
    let scale = match (dim, unit) {
        (Dimension::Dimensionless, "") => 1.0,
        (Dimension::Dimensionless, _) => {
            return err(key, format!("dimensionless value must carry no unit, got `{unit}`"))
        }
        (Dimension::Frequency, "Hz") => TWO_PI,
        (Dimension::Frequency, "kHz") => TWO_PI * 1e3,
        (Dimension::Frequency, "MHz") => TWO_PI * 1e6,
        (Dimension::Frequency, "GHz") => TWO_PI * 1e9,
        (Dimension::Time, "s") => 1.0,
        (Dimension::Time, "ms") => 1e-3,
        (Dimension::Time, "us" | "µs") => 1e-6,
        (Dimension::Time, "ns") => 1e-9,
        (Dimension::Length, "m") => 1.0,
        (Dimension::Length, "mm") => 1e-3,
        (Dimension::Length, "um" | "µm") => 1e-6,
        (Dimension::Length, "nm") => 1e-9,
        (Dimension::Angle, "deg" | "°") => std::f64::consts::PI / 180.0,
        (Dimension::Angle, "rad") => 1.0,
        (Dimension::Angle, "mrad") => 1e-3,
        (_, "") => {
            return err(
                key,
                format!("missing unit suffix; expected one of {}", dim.unit_help()),
            )
        }
        (_, other) => {
            return err(
                key,
                format!("unknown unit `{other}`; expected one of {}", dim.unit_help()),
            )
        }
    };
    Ok(value * scale)
}

fn parse_bool(key: &str, raw: &str) -> Result<bool> {
    match raw.trim() {
        "true" => Ok(true),
        "false" => Ok(false),
        other => err(key, format!("expected true|false, got `{other}`")),
    }
}

fn parse_usize(key: &str, raw: &str) -> Result<usize> {
    raw.trim()
        .parse()
        .map_err(|_| ConfigError(format!("config error at `{key}`: `{raw}` is not a count")))
}

/// Sweep grid settings, resolved against the swept parameter's dimension.
#[derive(Debug, Clone, Default)]
pub struct SweepSettings {
    pub parameter: Option<SweepParameter>,
    start: Option<String>,
    stop: Option<String>,
    steps: Option<usize>,
    values: Option<String>,
}

/// Everything a CLI run needs: the resolved model plus front-end settings.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub model: ModelConfig<f64>,
    pub sweep: SweepSettings,
    pub profile_y: f64,
    pub profile_z: f64,
    pub threads: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        let model = ModelConfig::default();
        RunConfig {
            profile_z: model.optical.crystal.half_length(),
            model,
            sweep: SweepSettings::default(),
            profile_y: 0.0,
            threads: 0,
        }
    }
}

/// Dimension of a sweep parameter's values.
pub fn parameter_dimension(p: SweepParameter) -> Dimension {
    match p {
        SweepParameter::ControlWaist
        | SweepParameter::InputWaist
        | SweepParameter::CrystalLength => Dimension::Length,
        SweepParameter::RfChirpSpan | SweepParameter::InputDetuning => Dimension::Frequency,
        SweepParameter::StorageTime | SweepParameter::OpticalDuration => Dimension::Time,
        SweepParameter::Angle => Dimension::Angle,
    }
}

/// Unit the CSV `value` column is written in for a sweep parameter.
pub fn parameter_output_unit(p: SweepParameter) -> &'static str {
    match parameter_dimension(p) {
        Dimension::Length => "m",
        Dimension::Frequency => "Hz",
        Dimension::Time => "s",
        Dimension::Angle => "deg",
        Dimension::Dimensionless => "",
    }
}

/// Convert an internal SI value into the CSV output unit of the parameter.
pub fn parameter_output_value(p: SweepParameter, si: f64) -> f64 {
    match parameter_dimension(p) {
        Dimension::Frequency => si / TWO_PI,
        Dimension::Angle => si.to_degrees(),
        _ => si,
    }
}

impl RunConfig {
    /// Apply one `key = value` assignment.
    pub fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        let m = &mut self.model;
        match key {
            "wavelength" => {
                let v = parse_quantity(key, value, Dimension::Length)?;
                m.optical.control_beam.wavelength = v;
                m.optical.input_beam.wavelength = v;
            }
            "crystal.length" => {
                m.optical.crystal.length = parse_quantity(key, value, Dimension::Length)?
            }
            "input.waist" => {
                m.optical.input_beam.waist_radius = parse_quantity(key, value, Dimension::Length)?
            }
            "input.spectrum_fwhm" => {
                m.optical.input_spectrum.fwhm = parse_quantity(key, value, Dimension::Frequency)?
            }
            "input.detuning" => {
                m.optical.input_spectrum.center = parse_quantity(key, value, Dimension::Frequency)?
            }
            "input.waist_from_length" => {
                m.rules.input_waist_from_length = parse_bool(key, value)?
            }
            "control.waist" => {
                m.optical.control_beam.waist_radius = parse_quantity(key, value, Dimension::Length)?
            }
            "control.peak_rabi" => {
                let v = parse_quantity(key, value, Dimension::Frequency)?;
                m.optical.pulse.peak_rabi = v;
                m.rabi_reference.rabi = v;
            }
            "control.reference_waist" => {
                m.rabi_reference.waist = parse_quantity(key, value, Dimension::Length)?
            }
            "control.rabi_scaling" => m.rules.rabi_waist_scaling = parse_bool(key, value)?,
            "control.pulse.duration" => {
                m.optical.pulse.cutoff_duration = parse_quantity(key, value, Dimension::Time)?
            }
            "control.pulse.square_fraction" => {
                m.optical.pulse.square_fraction =
                    parse_quantity(key, value, Dimension::Dimensionless)?
            }
            "control.pulse.chirp_span" => {
                m.optical.pulse.chirp_span = parse_quantity(key, value, Dimension::Frequency)?
            }
            "control.pulse.edge_truncation" => {
                m.optical.pulse.edge_truncation =
                    parse_quantity(key, value, Dimension::Dimensionless)?
            }
            "angle" => m.angle = parse_quantity(key, value, Dimension::Angle)?,
            "spin.peak_rabi" => {
                let v = parse_quantity(key, value, Dimension::Frequency)?;
                m.spin.circuit.peak_rabi = v;
                m.spin.pulse.peak_rabi = v;
            }
            "spin.pulse.duration" => {
                m.spin.pulse.cutoff_duration = parse_quantity(key, value, Dimension::Time)?
            }
            "spin.pulse.square_fraction" => {
                m.spin.pulse.square_fraction =
                    parse_quantity(key, value, Dimension::Dimensionless)?
            }
            "spin.pulse.chirp_span" => {
                m.spin.pulse.chirp_span = parse_quantity(key, value, Dimension::Frequency)?
            }
            "spin.pulse.edge_truncation" => {
                m.spin.pulse.edge_truncation =
                    parse_quantity(key, value, Dimension::Dimensionless)?
            }
            "spin.linewidth" => {
                m.spin.spin_line.fwhm = parse_quantity(key, value, Dimension::Frequency)?
            }
            "spin.transition" => {
                m.spin.carrier = parse_quantity(key, value, Dimension::Frequency)?
            }
            "circuit.resonance" => {
                m.spin.circuit.resonance = parse_quantity(key, value, Dimension::Frequency)?
            }
            "circuit.fwhm" => {
                m.spin.circuit.fwhm = parse_quantity(key, value, Dimension::Frequency)?
            }
            "circuit.filter" => {
                m.spin.filter_mode = match value {
                    "instantaneous" => CircuitFilterMode::InstantaneousFrequency,
                    "static" => CircuitFilterMode::StaticDetuning,
                    other => return err(key, format!("expected instantaneous|static, got `{other}`")),
                }
            }
            "storage.time" => m.storage_time = parse_quantity(key, value, Dimension::Time)?,
            "storage.tc_rule" => m.rules.storage_time_tc_rule = parse_bool(key, value)?,
            "optimize.per_value" => m.rules.optimize_control_waist = parse_bool(key, value)?,
            "optimize.waist_min" => {
                m.waist_bounds.0 = parse_quantity(key, value, Dimension::Length)?
            }
            "optimize.waist_max" => {
                m.waist_bounds.1 = parse_quantity(key, value, Dimension::Length)?
            }
            "eta.afc" => {
                m.eta_afc = if value == "none" {
                    None
                } else {
                    Some(parse_quantity(key, value, Dimension::Dimensionless)?)
                }
            }
            "eta.spin" => m.eta_spin = parse_quantity(key, value, Dimension::Dimensionless)?,
            "mode" => {
                m.optical.mode = match value {
                    "bloch" => EvalMode::Bloch,
                    "analytical" => EvalMode::Analytical,
                    other => return err(key, format!("expected bloch|analytical, got `{other}`")),
                }
            }
            "grid.radial" => m.optical.grid.radial = parse_usize(key, value)?,
            "grid.z" => m.optical.grid.z_slabs = parse_usize(key, value)?,
            "grid.cartesian" => m.optical.grid.cartesian = parse_usize(key, value)?,
            "grid.rabi" => m.optical.grid.rabi = parse_usize(key, value)?,
            "grid.spectral" => {
                let n = parse_usize(key, value)?;
                m.optical.grid.spectral = n;
                m.spin.spectral_nodes = n;
            }
            "grid.profile_points" => m.optical.grid.profile_points = parse_usize(key, value)?,
            "threads" => self.threads = parse_usize(key, value)?,
            "sweep.parameter" => {
                self.sweep.parameter = Some(match SweepParameter::parse(value) {
                    Some(p) => p,
                    None => {
                        let names: Vec<_> =
                            SweepParameter::ALL.iter().map(|p| p.name()).collect();
                        return err(key, format!("unknown parameter; expected one of {}", names.join("|")));
                    }
                })
            }
            "sweep.start" => self.sweep.start = Some(value.to_string()),
            "sweep.stop" => self.sweep.stop = Some(value.to_string()),
            "sweep.steps" => self.sweep.steps = Some(parse_usize(key, value)?),
            "sweep.values" => self.sweep.values = Some(value.to_string()),
            "profiles.y" => self.profile_y = parse_quantity(key, value, Dimension::Length)?,
            "profiles.z" => self.profile_z = parse_quantity(key, value, Dimension::Length)?,
            other => return Err(ConfigError(format!("config error at `{other}`: unknown key"))),
        }
        Ok(())
    }

    /// Validate invariants that parsing alone cannot catch.
    pub fn validate(&self) -> Result<()> {
        let m = &self.model;
        if let Err(e) = m.optical.validate() {
            return Err(ConfigError(format!("config error: {e}")));
        }
        if let Err(e) = m.spin.validate() {
            return Err(ConfigError(format!("config error: {e}")));
        }
        if !(m.angle >= 0.0) {
            return err("angle", "must be >= 0");
        }
        if !(m.eta_spin >= 0.0 && m.eta_spin <= 1.0) {
            return err("eta.spin", "must lie in [0, 1]");
        }
        if let Some(afc) = m.eta_afc {
            if !(0.0..=1.0).contains(&afc) {
                return err("eta.afc", "must lie in [0, 1]");
            }
        }
        if !(m.storage_time > 0.0) {
            return err("storage.time", "must be > 0");
        }
        Ok(())
    }

    /// Resolve the sweep grid (start/stop/steps or explicit values) into SI.
    pub fn sweep_grid(&self) -> Result<(SweepParameter, Vec<f64>)> {
        let parameter = match self.sweep.parameter {
            Some(p) => p,
            None => return err("sweep.parameter", "a sweep needs a parameter"),
        };
        let dim = parameter_dimension(parameter);
        if let Some(list) = &self.sweep.values {
            let values: Result<Vec<f64>> = list
                .split(',')
                .map(|v| parse_quantity("sweep.values", v, dim))
                .collect();
            return Ok((parameter, values?));
        }
        let (start, stop) = match (&self.sweep.start, &self.sweep.stop) {
            (Some(a), Some(b)) => (
                parse_quantity("sweep.start", a, dim)?,
                parse_quantity("sweep.stop", b, dim)?,
            ),
            _ => return err("sweep.start", "need sweep.start and sweep.stop (or sweep.values)"),
        };
        let steps = self.sweep.steps.unwrap_or(21);
        if steps < 1 {
            return err("sweep.steps", "must be >= 1");
        }
        let values = if steps == 1 {
            vec![start]
        } else {
            (0..steps)
                .map(|i| start + (stop - start) * i as f64 / (steps - 1) as f64)
                .collect()
        };
        Ok((parameter, values))
    }

    /// The fully resolved configuration as sorted `key = value` lines, in the
    /// same syntax `apply` accepts. Times in us, lengths in um, frequencies
    /// in Hz, angles in deg.
    pub fn resolved_lines(&self) -> Vec<String> {
        let m = &self.model;
        let mut map: BTreeMap<&'static str, String> = BTreeMap::new();
        let hz = |v: f64| format!("{:.9} Hz", v / TWO_PI);
        let um = |v: f64| format!("{:.6} um", v * 1e6);
        let us = |v: f64| format!("{:.6} us", v * 1e6);
        let bare = |v: f64| format!("{v:.9}");
        map.insert("wavelength", format!("{:.3} nm", m.optical.input_beam.wavelength * 1e9));
        map.insert("crystal.length", um(m.optical.crystal.length));
        map.insert("input.waist", um(m.optical.input_beam.waist_radius));
        map.insert("input.spectrum_fwhm", hz(m.optical.input_spectrum.fwhm));
        map.insert("input.detuning", hz(m.optical.input_spectrum.center));
        map.insert(
            "input.waist_from_length",
            m.rules.input_waist_from_length.to_string(),
        );
        map.insert("control.waist", um(m.optical.control_beam.waist_radius));
        map.insert("control.peak_rabi", hz(m.rabi_reference.rabi));
        map.insert("control.reference_waist", um(m.rabi_reference.waist));
        map.insert("control.rabi_scaling", m.rules.rabi_waist_scaling.to_string());
        map.insert("control.pulse.duration", us(m.optical.pulse.cutoff_duration));
        map.insert(
            "control.pulse.square_fraction",
            bare(m.optical.pulse.square_fraction),
        );
        map.insert("control.pulse.chirp_span", hz(m.optical.pulse.chirp_span));
        map.insert(
            "control.pulse.edge_truncation",
            bare(m.optical.pulse.edge_truncation),
        );
        map.insert("angle", format!("{:.6} deg", m.angle.to_degrees()));
        map.insert("spin.peak_rabi", hz(m.spin.circuit.peak_rabi));
        map.insert("spin.pulse.duration", us(m.spin.pulse.cutoff_duration));
        map.insert("spin.pulse.square_fraction", bare(m.spin.pulse.square_fraction));
        map.insert("spin.pulse.chirp_span", hz(m.spin.pulse.chirp_span));
        map.insert(
            "spin.pulse.edge_truncation",
            bare(m.spin.pulse.edge_truncation),
        );
        map.insert("spin.linewidth", hz(m.spin.spin_line.fwhm));
        map.insert("spin.transition", hz(m.spin.carrier));
        map.insert("circuit.resonance", hz(m.spin.circuit.resonance));
        map.insert("circuit.fwhm", hz(m.spin.circuit.fwhm));
        map.insert(
            "circuit.filter",
            match m.spin.filter_mode {
                CircuitFilterMode::InstantaneousFrequency => "instantaneous".into(),
                CircuitFilterMode::StaticDetuning => "static".into(),
            },
        );
        map.insert("storage.time", us(m.storage_time));
        map.insert("storage.tc_rule", m.rules.storage_time_tc_rule.to_string());
        map.insert("optimize.per_value", m.rules.optimize_control_waist.to_string());
        map.insert("optimize.waist_min", um(m.waist_bounds.0));
        map.insert("optimize.waist_max", um(m.waist_bounds.1));
        map.insert(
            "eta.afc",
            m.eta_afc.map_or_else(|| "none".into(), bare),
        );
        map.insert("eta.spin", bare(m.eta_spin));
        map.insert(
            "mode",
            match m.optical.mode {
                EvalMode::Bloch => "bloch".into(),
                EvalMode::Analytical => "analytical".into(),
            },
        );
        map.insert("grid.radial", m.optical.grid.radial.to_string());
        map.insert("grid.z", m.optical.grid.z_slabs.to_string());
        map.insert("grid.cartesian", m.optical.grid.cartesian.to_string());
        map.insert("grid.rabi", m.optical.grid.rabi.to_string());
        map.insert("grid.spectral", m.optical.grid.spectral.to_string());
        map.insert(
            "grid.profile_points",
            m.optical.grid.profile_points.to_string(),
        );
        map.insert("profiles.y", um(self.profile_y));
        map.insert("profiles.z", um(self.profile_z));
        map.insert("threads", self.threads.to_string());
        if let Some(p) = self.sweep.parameter {
            map.insert("sweep.parameter", p.name().to_string());
        }

        map.into_iter()
            .map(|(k, v)| {
                let mut line = String::new();
                let _ = write!(line, "{k} = {v}");
                line
            })
            .collect()
    }

    /// Load assignments from a file: flat `key = value` lines (with `#`
    /// comments) or a JSON object with the same keys, nested or flat.
    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = fs::read_to_string(path).map_err(|e| {
            ConfigError(format!("config error: cannot read {}: {e}", path.display()))
        })?;
        if text.trim_start().starts_with('{') {
            let doc: serde_json::Value = serde_json::from_str(&text)
                .map_err(|e| ConfigError(format!("config error: invalid JSON: {e}")))?;
            let mut pairs = Vec::new();
            flatten_json("", &doc, &mut pairs)?;
            for (key, value) in pairs {
                self.apply(&key, &value)?;
            }
            Ok(())
        } else {
            for (lineno, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (key, value) = line.split_once('=').ok_or_else(|| {
                    ConfigError(format!(
                        "config error at line {}: expected `key = value`, got `{line}`",
                        lineno + 1
                    ))
                })?;
                self.apply(key.trim(), value.trim())?;
            }
            Ok(())
        }
    }
}

fn flatten_json(
    prefix: &str,
    value: &serde_json::Value,
    out: &mut Vec<(String, String)>,
) -> Result<()> {
    match value {
        serde_json::Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten_json(&key, v, out)?;
            }
            Ok(())
        }
        serde_json::Value::String(s) => {
            out.push((prefix.to_string(), s.clone()));
            Ok(())
        }
        serde_json::Value::Number(n) => {
            out.push((prefix.to_string(), n.to_string()));
            Ok(())
        }
        serde_json::Value::Bool(b) => {
            out.push((prefix.to_string(), b.to_string()));
            Ok(())
        }
        _ => Err(ConfigError(format!(
            "config error at `{prefix}`: unsupported JSON value"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_parsing() {
        assert!((parse_quantity("k", "532 kHz", Dimension::Frequency).unwrap()
            - TWO_PI * 532e3)
            .abs()
            < 1e-6);
        assert!((parse_quantity("k", "1.5e6Hz", Dimension::Frequency).unwrap()
            - TWO_PI * 1.5e6)
            .abs()
            < 1e-6);
        assert!((parse_quantity("k", "60 um", Dimension::Length).unwrap() - 60e-6).abs() < 1e-18);
        assert!((parse_quantity("k", "15 us", Dimension::Time).unwrap() - 15e-6).abs() < 1e-18);
        assert!(
            (parse_quantity("k", "0.5 deg", Dimension::Angle).unwrap()
                - 0.5_f64.to_radians())
            .abs()
                < 1e-15
        );
        assert!((parse_quantity("k", "0.7", Dimension::Dimensionless).unwrap() - 0.7).abs() < 1e-15);
        // missing or wrong units are rejected
        assert!(parse_quantity("k", "60", Dimension::Length).is_err());
        assert!(parse_quantity("k", "60 kHz", Dimension::Length).is_err());
        assert!(parse_quantity("k", "0.7 m", Dimension::Dimensionless).is_err());
        assert!(parse_quantity("k", "abc", Dimension::Length).is_err());
    }

    #[test]
    fn defaults_validate_and_echo() {
        let cfg = RunConfig::default();
        cfg.validate().unwrap();
        let lines = cfg.resolved_lines();
        assert!(lines.iter().any(|l| l == "control.waist = 60.000000 um"));
        assert!(lines.iter().any(|l| l.starts_with("spin.linewidth = 123000")));
        assert!(lines.iter().any(|l| l == "mode = bloch"));
    }

    #[test]
    fn apply_and_roundtrip_through_resolved_lines() {
        let mut cfg = RunConfig::default();
        cfg.apply("control.waist", "120 um").unwrap();
        cfg.apply("control.rabi_scaling", "true").unwrap();
        cfg.apply("mode", "analytical").unwrap();
        cfg.validate().unwrap();
        // the echoed lines can be re-applied verbatim
        let lines = cfg.resolved_lines();
        let mut again = RunConfig::default();
        for line in &lines {
            let (k, v) = line.split_once('=').unwrap();
            if k.trim() == "sweep.parameter" {
                continue;
            }
            again.apply(k.trim(), v.trim()).unwrap();
        }
        assert_eq!(
            again.model.optical.control_beam.waist_radius,
            cfg.model.optical.control_beam.waist_radius
        );
        assert!(again.model.rules.rabi_waist_scaling);
        // 1/waist scaling applies on resolve
        let resolved = again.model.resolve().unwrap();
        assert!((resolved.optical.pulse.peak_rabi / TWO_PI - 266e3).abs() < 1.0);
    }

    #[test]
    fn invariant_violations_name_the_key() {
        let mut cfg = RunConfig::default();
        cfg.apply("control.pulse.square_fraction", "1.2").unwrap();
        let e = cfg.validate().unwrap_err();
        assert!(e.0.contains("square_fraction"), "{e}");
        assert!(RunConfig::default().apply("bogus.key", "1").is_err());
    }

    #[test]
    fn sweep_grid_resolution() {
        let mut cfg = RunConfig::default();
        cfg.apply("sweep.parameter", "rf_chirp_span").unwrap();
        cfg.apply("sweep.start", "100 kHz").unwrap();
        cfg.apply("sweep.stop", "600 kHz").unwrap();
        cfg.apply("sweep.steps", "26").unwrap();
        let (p, grid) = cfg.sweep_grid().unwrap();
        assert_eq!(p, SweepParameter::RfChirpSpan);
        assert_eq!(grid.len(), 26);
        assert!((grid[0] - TWO_PI * 100e3).abs() < 1e-6);
        assert!((grid[25] - TWO_PI * 600e3).abs() < 1e-6);
        // explicit value lists win
        cfg.apply("sweep.values", "60 um, 120 um").unwrap();
        cfg.apply("sweep.parameter", "control_waist").unwrap();
        let (_, grid) = cfg.sweep_grid().unwrap();
        assert_eq!(grid.len(), 2);
        assert!((grid[0] - 60e-6).abs() < 1e-15 && (grid[1] - 120e-6).abs() < 1e-15);
    }

    #[test]
    fn json_config_is_accepted() {
        let dir = std::env::temp_dir().join("afc-sim-config-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("cfg.json");
        std::fs::write(
            &path,
            r#"{"control": {"waist": "120 um", "rabi_scaling": true}, "grid": {"radial": 32}}"#,
        )
        .unwrap();
        let mut cfg = RunConfig::default();
        cfg.apply_file(&path).unwrap();
        assert!((cfg.model.optical.control_beam.waist_radius - 120e-6).abs() < 1e-15);
        assert!(cfg.model.rules.rabi_waist_scaling);
        assert_eq!(cfg.model.optical.grid.radial, 32);
    }
}
