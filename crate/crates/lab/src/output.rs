//! Versioned, deterministic JSON reports.

use std::path::PathBuf;

use effectus_core::Report;
use serde::Serialize;
use serde_json::{json, Value};

pub const SCHEMA: &str = "effectus-lab/1";

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct RunConfig {
    pub command: String,
    pub tol: f64,
    pub seed: u64,
    pub trials: usize,
    /// Named input paths, in the order given.
    pub inputs: Vec<(String, PathBuf)>,
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

impl RunConfig {
    fn to_json(&self) -> Value {
        let inputs: serde_json::Map<String, Value> =
            self.inputs.iter().map(|(k, p)| (k.clone(), Value::String(p.display().to_string()))).collect();
        json!({
            "command": self.command,
            "tol": self.tol,
            "seed": self.seed,
            "trials": self.trials,
            "inputs": inputs,
        })
    }
}

pub fn checks_json(rep: &Report) -> Value {
    Value::Array(
        rep.checks
            .iter()
            .map(|c| {
                json!({
                    "law": c.law,
                    "status": if c.passed { "pass" } else { "fail" },
                    "checked": c.checked,
                    "residual": c.residual,
                    "witness": c.witness,
                })
            })
            .collect(),
    )
}

/// The full report document for one command.
pub fn report_json(cfg: &RunConfig, rep: &Report, data: Value) -> Value {
    json!({
        "schema": SCHEMA,
        "config": cfg.to_json(),
        "status": if rep.passed() { "pass" } else { "fail" },
        "max_residual": rep.max_residual(),
        "checks": checks_json(rep),
        "data": data,
    })
}
