use finite_sampling::{CVector, Complex64, FiniteGroup};
use serde::Serialize;

use crate::error::{CliError, Stage};

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Measured deviation, absent for boolean checks.
    pub value: Option<f64>,
    pub tolerance: Option<f64>,
}

impl Check {
    pub fn within(name: &str, value: f64, tolerance: f64) -> Self {
        Self { name: name.into(), passed: value <= tolerance, value: Some(value), tolerance: Some(tolerance) }
    }

    pub fn flag(name: &str, passed: bool) -> Self {
        Self { name: name.into(), passed, value: None, tolerance: None }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DesignSummary {
    pub id: String,
    pub group_order: usize,
    pub dim: usize,
    pub ell: usize,
    pub h_order: usize,
    pub systems: usize,
    pub k: Vec<String>,
    pub h: Vec<String>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct FrameSummary {
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ResidualStats {
    pub count: usize,
    pub max: f64,
    pub mean: f64,
}

impl ResidualStats {
    pub fn of(values: &[f64]) -> Self {
        let max = values.iter().copied().fold(0.0, f64::max);
        let mean = if values.is_empty() { 0.0 } else { values.iter().sum::<f64>() / values.len() as f64 };
        Self { count: values.len(), max, mean }
    }
}

pub fn labels(g: &FiniteGroup, elements: &[usize]) -> Vec<String> {
    elements.iter().map(|&e| g.label(e)).collect()
}

pub fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

pub fn pairs(v: &CVector) -> Vec<[f64; 2]> {
    v.iter().map(|&z| pair(z)).collect()
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value).map_err(|e| CliError::config(Stage::Output, e))
}

/// Drops `timing_ms` fields so that reports can be compared byte for byte.
pub fn strip_timing(json: &str) -> Result<String, serde_json::Error> {
    fn strip(v: &mut serde_json::Value) {
        match v {
            serde_json::Value::Object(map) => {
                map.remove("timing_ms");
                map.values_mut().for_each(strip);
            }
            serde_json::Value::Array(items) => items.iter_mut().for_each(strip),
            _ => {}
        }
    }
    let mut value: serde_json::Value = serde_json::from_str(json)?;
    strip(&mut value);
    serde_json::to_string_pretty(&value)
}
