//! Structural validation of the JSON documents this tool emits and consumes.
//!
//! The schemas are published in `schemas/*.schema.json`; the checks here
//! implement the same required-field and type rules so tests and the CLI can
//! validate emitted documents without a schema engine.

use serde_json::Value;

pub struct SchemaError(pub String);

impl std::fmt::Debug for SchemaError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "schema violation: {}", self.0)
    }
}

type Check = Result<(), SchemaError>;

fn fail(msg: impl Into<String>) -> Check {
    Err(SchemaError(msg.into()))
}

fn require<'v>(doc: &'v Value, key: &str, what: &str) -> Result<&'v Value, SchemaError> {
    doc.get(key)
        .ok_or_else(|| SchemaError(format!("{what}: missing required field '{key}'")))
}

fn require_number(doc: &Value, key: &str, what: &str) -> Check {
    if !require(doc, key, what)?.is_number() {
        return fail(format!("{what}: field '{key}' must be a number"));
    }
    Ok(())
}

fn require_array_of_numbers(doc: &Value, key: &str, what: &str) -> Check {
    let arr = require(doc, key, what)?
        .as_array()
        .ok_or_else(|| SchemaError(format!("{what}: field '{key}' must be an array")))?;
    if arr.iter().any(|v| !v.is_number()) {
        return fail(format!("{what}: field '{key}' must contain only numbers"));
    }
    Ok(())
}

/// Result files written by `restore` (`result_seed*.json`).
pub fn validate_run_record(doc: &Value) -> Check {
    let what = "run record";
    require_number(doc, "seed", what)?;
    if !require(doc, "mode", what)?.is_string() {
        return fail(format!("{what}: 'mode' must be a string"));
    }
    let result = require(doc, "result", what)?;
    require_array_of_numbers(result, "x0", what)?;
    require_array_of_numbers(result, "phi", what)?;
    require_number(result, "denoiser_evals", what)?;
    require_number(result, "phi_update_calls", what)?;
    require_number(result, "latent_samples", what)?;
    let trace = require(result, "trace", what)?
        .as_array()
        .ok_or_else(|| SchemaError(format!("{what}: 'result.trace' must be an array")))?;
    for rec in trace {
        require_number(rec, "cycle", what)?;
        require_number(rec, "t", what)?;
        require_number(rec, "inner", what)?;
        require_number(rec, "residual", what)?;
        require_number(rec, "evals", what)?;
        require_array_of_numbers(rec, "phi", what)?;
    }
    let metrics = require(doc, "metrics", what)?;
    if !metrics.is_null() {
        // psnr_db may be null (infinite PSNR sentinel) with the flag set.
        let psnr = require(metrics, "psnr_db", what)?;
        let infinite = require(metrics, "psnr_infinite", what)?
            .as_bool()
            .ok_or_else(|| SchemaError(format!("{what}: 'metrics.psnr_infinite' must be a bool")))?;
        if psnr.is_null() && !infinite {
            return fail(format!("{what}: null psnr_db requires psnr_infinite = true"));
        }
        if !psnr.is_null() && !psnr.is_number() {
            return fail(format!("{what}: 'metrics.psnr_db' must be number or null"));
        }
        require_number(metrics, "mse", what)?;
        require_number(metrics, "kernel_error_l2_normalized", what)?;
    }
    require_number(doc, "timing_secs", what)?;
    Ok(())
}

/// Manifest files written by `generate`.
pub fn validate_manifest(doc: &Value) -> Check {
    let what = "manifest";
    require_number(doc, "seed", what)?;
    require_number(doc, "dim", what)?;
    require_number(doc, "sigma_y", what)?;
    require_number(doc, "data_range", what)?;
    for key in ["x_true", "kernel", "y"] {
        if !require(doc, key, what)?.is_string() {
            return fail(format!("{what}: field '{key}' must be a path string"));
        }
    }
    Ok(())
}

/// Calibration constants consumed by the acceptance suite.
pub fn validate_constants(doc: &Value) -> Check {
    let what = "calibration constants";
    if !require(doc, "recipe", what)?.is_string() {
        return fail(format!("{what}: 'recipe' must be a string"));
    }
    require_number(doc, "ddrm_mse_relative_band", what)?;
    let bench = require(doc, "bench", what)?;
    require_number(bench, "langevin_step_size", what)?;
    require_number(bench, "langevin_n_steps", what)?;
    require_number(bench, "n_seeds", what)?;
    require_number(bench, "observed_combined_successes", what)?;
    require_number(bench, "observed_nonblind_upper_bounds", what)?;
    Ok(())
}
