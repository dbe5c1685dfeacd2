//! CSV and JSON output documents. Every file embeds the fully resolved
//! configuration; numbers are written with 9 significant digits so identical
//! runs produce byte-identical CSV.

use afc_sim_core::efficiency::EfficiencyResult;
use afc_sim_core::spatial::EvalMode;
use afc_sim_core::sweeps::{ModeProfileRow, SweepResult};
use serde_json::json;

use crate::config::{parameter_output_unit, parameter_output_value, RunConfig};

/// 9 significant digits.
fn sig9(v: f64) -> String {
    format!("{v:.8e}")
}

fn mode_name(mode: EvalMode) -> &'static str {
    match mode {
        EvalMode::Bloch => "bloch",
        EvalMode::Analytical => "analytical",
    }
}

fn csv_header(command: &str, preset: Option<&str>, cfg: &RunConfig) -> String {
    let mut out = String::new();
    out.push_str(&format!("# afc-pulse-sim {command}\n"));
    if let Some(p) = preset {
        out.push_str(&format!("# preset = {p}\n"));
    }
    for line in cfg.resolved_lines() {
        out.push_str(&format!("# {line}\n"));
    }
    out
}

pub fn sweep_csv(result: &SweepResult<f64>, cfg: &RunConfig, preset: Option<&str>) -> String {
    let mut out = csv_header("sweep", preset, cfg);
    out.push_str(&format!(
        "# value_unit = {}\n",
        parameter_output_unit(result.parameter)
    ));
    out.push_str("parameter,value,eta_oc,eta_sc,eta_opt_spin,eta_tot\n");
    for row in &result.rows {
        let value = parameter_output_value(result.parameter, row.value);
        let eta_tot = row.eta_tot.map(sig9).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            result.parameter.name(),
            sig9(value),
            sig9(row.eta_oc),
            sig9(row.eta_sc),
            sig9(row.eta_opt_spin),
            eta_tot
        ));
    }
    out
}

pub fn sweep_json(result: &SweepResult<f64>, cfg: &RunConfig, preset: Option<&str>) -> String {
    let rows: Vec<_> = result
        .rows
        .iter()
        .map(|row| {
            json!({
                "value": parameter_output_value(result.parameter, row.value),
                "eta_oc": row.eta_oc,
                "eta_sc": row.eta_sc,
                "eta_opt_spin": row.eta_opt_spin,
                "eta_tot": row.eta_tot,
                "optimized_waist_m": row.optimized_waist,
            })
        })
        .collect();
    let doc = json!({
        "command": "sweep",
        "preset": preset,
        "parameter": result.parameter.name(),
        "value_unit": parameter_output_unit(result.parameter),
        "config": config_map(cfg),
        "meta": {
            "mode": mode_name(result.meta.mode),
            "grid": {
                "radial": result.meta.grid.radial,
                "z": result.meta.grid.z_slabs,
                "cartesian": result.meta.grid.cartesian,
                "rabi": result.meta.grid.rabi,
                "spectral": result.meta.grid.spectral,
            },
            "wall_time_s": result.meta.wall_time.as_secs_f64(),
        },
        "rows": rows,
    });
    serde_json::to_string_pretty(&doc).expect("json serialization") + "\n"
}

pub fn profiles_csv(rows: &[ModeProfileRow<f64>], cfg: &RunConfig, preset: Option<&str>) -> String {
    let mut out = csv_header("profiles", preset, cfg);
    out.push_str("x_m,input_intensity,control_intensity,efficiency\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            sig9(row.x),
            sig9(row.input_intensity),
            sig9(row.control_intensity),
            sig9(row.efficiency)
        ));
    }
    out
}

pub fn profiles_json(
    rows: &[ModeProfileRow<f64>],
    cfg: &RunConfig,
    preset: Option<&str>,
) -> String {
    let rows: Vec<_> = rows
        .iter()
        .map(|r| {
            json!({
                "x_m": r.x,
                "input_intensity": r.input_intensity,
                "control_intensity": r.control_intensity,
                "efficiency": r.efficiency,
            })
        })
        .collect();
    let doc = json!({
        "command": "profiles",
        "preset": preset,
        "config": config_map(cfg),
        "rows": rows,
    });
    serde_json::to_string_pretty(&doc).expect("json serialization") + "\n"
}

pub fn simulate_text(result: &EfficiencyResult<f64>) -> String {
    let mut out = String::new();
    out.push_str(&format!("eta_oc       = {}\n", sig9(result.eta_oc)));
    out.push_str(&format!("eta_sc       = {}\n", sig9(result.eta_sc)));
    out.push_str(&format!("eta_opt_spin = {}\n", sig9(result.eta_opt_spin)));
    if let Some(tot) = result.eta_tot {
        out.push_str(&format!("eta_tot      = {}\n", sig9(tot)));
    }
    out
}

pub fn simulate_json(result: &EfficiencyResult<f64>, cfg: &RunConfig) -> String {
    let doc = json!({
        "command": "simulate",
        "config": config_map(cfg),
        "result": {
            "eta_oc": result.eta_oc,
            "eta_sc": result.eta_sc,
            "eta_opt_spin": result.eta_opt_spin,
            "eta_afc": result.eta_afc,
            "eta_spin": result.eta_spin,
            "eta_tot": result.eta_tot,
        },
    });
    serde_json::to_string_pretty(&doc).expect("json serialization") + "\n"
}

fn config_map(cfg: &RunConfig) -> serde_json::Map<String, serde_json::Value> {
    cfg.resolved_lines()
        .into_iter()
        .filter_map(|line| {
            line.split_once(" = ")
                .map(|(k, v)| (k.to_string(), serde_json::Value::String(v.to_string())))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig9_is_nine_significant_digits() {
        assert_eq!(sig9(0.123456789123), "1.23456789e-1");
        assert_eq!(sig9(532000.0), "5.32000000e5");
    }
}
