//! Named presets bundling the sweep grids and coupling rules of the
//! standard model studies.

/// Key/value assignments a preset applies on top of the defaults.
pub fn preset(name: &str) -> Option<Vec<(&'static str, &'static str)>> {
    let bundle: Vec<(&'static str, &'static str)> = match name {
        // total optical control efficiency vs control waist, 1/waist Rabi
        // scaling, co-linear by default (override `angle` for crossed runs)
        "fig3a" => vec![
            ("mode", "analytical"),
            ("control.rabi_scaling", "true"),
            ("sweep.parameter", "control_waist"),
            ("sweep.start", "30 um"),
            ("sweep.stop", "300 um"),
            ("sweep.steps", "28"),
        ],
        // efficiency vs input waist at a fixed 120 um control mode
        "fig3b" => vec![
            ("mode", "analytical"),
            ("control.waist", "120 um"),
            ("control.rabi_scaling", "true"),
            ("sweep.parameter", "input_waist"),
            ("sweep.start", "10 um"),
            ("sweep.stop", "100 um"),
            ("sweep.steps", "19"),
        ],
        // efficiency vs RF chirp span of the spin pulses
        "fig4a" => vec![
            ("mode", "analytical"),
            ("sweep.parameter", "rf_chirp_span"),
            ("sweep.start", "100 kHz"),
            ("sweep.stop", "600 kHz"),
            ("sweep.steps", "26"),
        ],
        // efficiency vs spin storage time, with the spin pulse shortened to
        // fit the storage window
        "fig4b" => vec![
            ("mode", "analytical"),
            ("storage.tc_rule", "true"),
            ("sweep.parameter", "storage_time"),
            (
                "sweep.values",
                "50 us, 70 us, 100 us, 140 us, 200 us, 280 us, 400 us, 500 us, 700 us, 1000 us, 1400 us, 2000 us, 2800 us, 4000 us, 5000 us",
            ),
        ],
        // efficiency vs optical control pulse duration
        "fig5" => vec![
            ("mode", "bloch"),
            ("sweep.parameter", "optical_duration"),
            ("sweep.start", "2 us"),
            ("sweep.stop", "30 us"),
            ("sweep.steps", "29"),
        ],
        // efficiency vs input pulse detuning
        "fig6" => vec![
            ("mode", "bloch"),
            ("sweep.parameter", "input_detuning"),
            ("sweep.start", "-1 MHz"),
            ("sweep.stop", "1 MHz"),
            ("sweep.steps", "41"),
        ],
        // efficiency vs crossing angle at a fixed 120 um control mode
        "fig7" => vec![
            ("mode", "analytical"),
            ("control.waist", "120 um"),
            ("control.rabi_scaling", "true"),
            ("sweep.parameter", "angle"),
            ("sweep.start", "0 deg"),
            ("sweep.stop", "2 deg"),
            ("sweep.steps", "9"),
        ],
        // efficiency vs angle with the control waist re-optimized per angle;
        // override `crystal.length` to study shorter crystals
        "fig8" => vec![
            ("mode", "analytical"),
            ("control.rabi_scaling", "true"),
            ("input.waist_from_length", "true"),
            ("optimize.per_value", "true"),
            ("sweep.parameter", "angle"),
            ("sweep.start", "0 deg"),
            ("sweep.stop", "2 deg"),
            ("sweep.steps", "5"),
        ],
        // transverse mode and efficiency profiles at the crystal end face
        "fig9" => vec![
            ("mode", "bloch"),
            ("control.waist", "120 um"),
            ("control.rabi_scaling", "true"),
            ("angle", "0.5 deg"),
            ("profiles.y", "0 um"),
            ("profiles.z", "6.25 mm"),
        ],
        _ => return None,
    };
    Some(bundle)
}

pub const PRESET_NAMES: [&str; 9] = [
    "fig3a", "fig3b", "fig4a", "fig4b", "fig5", "fig6", "fig7", "fig8", "fig9",
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::RunConfig;

    #[test]
    fn all_presets_apply_cleanly() {
        for name in PRESET_NAMES {
            let mut cfg = RunConfig::default();
            for (k, v) in preset(name).unwrap() {
                cfg.apply(k, v).unwrap_or_else(|e| panic!("{name}: {e}"));
            }
            cfg.validate().unwrap_or_else(|e| panic!("{name}: {e}"));
            if name != "fig9" {
                let (_, grid) = cfg.sweep_grid().unwrap();
                assert!(!grid.is_empty(), "{name} grid empty");
            }
        }
        assert!(preset("fig1").is_none());
    }

    #[test]
    fn fig4a_grid_covers_the_plotted_range() {
        let mut cfg = RunConfig::default();
        for (k, v) in preset("fig4a").unwrap() {
            cfg.apply(k, v).unwrap();
        }
        let (_, grid) = cfg.sweep_grid().unwrap();
        assert_eq!(grid.len(), 26);
        let two_pi = std::f64::consts::TAU;
        assert!((grid[0] / two_pi - 100e3).abs() < 1e-6);
        assert!((grid[25] / two_pi - 600e3).abs() < 1e-6);
    }
}
