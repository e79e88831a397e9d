//! Parsing of the JSON spec files accepted on the command line: plane
//! quadruples, circles, points, and function specs. All inputs are
//! untrusted; every parser validates before handing values to the numeric
//! layers.

use crate::circles::{Circle, PlaneSpec};
use crate::classify;
use crate::functions::{CheckerConfig, ShFunction};
use crate::torus::TorusPoint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Syntax(String),
    #[error("invalid spec: {0}")]
    Invalid(String),
}

/// A plane spec file: four function specs, an optional normalisation flag,
/// and optional checker overrides.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct PlaneFile {
    pub f1: ShFunction,
    pub f2: ShFunction,
    pub f3: ShFunction,
    pub f4: ShFunction,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normalise: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checker: Option<CheckerOverrides>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
pub struct CheckerOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limit_b_values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

impl CheckerOverrides {
    pub fn apply(&self, mut cfg: CheckerConfig) -> CheckerConfig {
        if let Some(v) = self.grid_min {
            cfg.grid_min = v;
        }
        if let Some(v) = self.grid_max {
            cfg.grid_max = v;
        }
        if let Some(v) = self.grid_points {
            cfg.grid_points = v;
        }
        if let Some(v) = &self.limit_b_values {
            cfg.limit_b_values = v.clone();
        }
        if let Some(v) = self.tolerance {
            cfg.tolerance = v;
        }
        cfg
    }
}

impl PlaneFile {
    /// Validates the four functions and builds the plane, normalising when
    /// the flag asks for it.
    pub fn to_plane(&self) -> Result<PlaneSpec, JsonError> {
        for (name, f) in [
            ("f1", &self.f1),
            ("f2", &self.f2),
            ("f3", &self.f3),
            ("f4", &self.f4),
        ] {
            f.validate()
                .map_err(|e| JsonError::Invalid(format!("{name}: {e}")))?;
        }
        let plane = PlaneSpec::new(
            self.f1.clone(),
            self.f2.clone(),
            self.f3.clone(),
            self.f4.clone(),
        );
        Ok(if self.normalise.unwrap_or(false) {
            classify::normalise(&plane)
        } else {
            plane
        })
    }

    pub fn checker_config(&self) -> Result<CheckerConfig, JsonError> {
        let cfg = self
            .checker
            .as_ref()
            .map(|o| o.apply(CheckerConfig::default()))
            .unwrap_or_default();
        cfg.validate()
            .map_err(|e| JsonError::Invalid(e.to_string()))?;
        Ok(cfg)
    }
}

pub fn parse_plane_file(s: &str) -> Result<PlaneFile, JsonError> {
    serde_json::from_str(s).map_err(|e| JsonError::Syntax(e.to_string()))
}

pub fn parse_circle(s: &str) -> Result<Circle, JsonError> {
    serde_json::from_str(s).map_err(|e| JsonError::Syntax(e.to_string()))
}

pub fn parse_point(s: &str) -> Result<TorusPoint, JsonError> {
    serde_json::from_str(s).map_err(|e| JsonError::Syntax(e.to_string()))
}

pub fn parse_points(s: &str) -> Result<Vec<TorusPoint>, JsonError> {
    serde_json::from_str(s).map_err(|e| JsonError::Syntax(e.to_string()))
}

pub fn parse_circles(s: &str) -> Result<Vec<Circle>, JsonError> {
    serde_json::from_str(s).map_err(|e| JsonError::Syntax(e.to_string()))
}

/// A bare function spec, validated.
pub fn parse_function(s: &str) -> Result<ShFunction, JsonError> {
    let f: ShFunction = serde_json::from_str(s).map_err(|e| JsonError::Syntax(e.to_string()))?;
    f.validate().map_err(|e| JsonError::Invalid(e.to_string()))?;
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    const CLASSICAL: &str = r#"{
        "f1": {"kind": "reciprocal_power", "i": 1},
        "f2": {"kind": "reciprocal_power", "i": 1},
        "f3": {"kind": "reciprocal_power", "i": 1},
        "f4": {"kind": "reciprocal_power", "i": 1}
    }"#;

    #[test]
    fn plane_file_round_trip() {
        let pf = parse_plane_file(CLASSICAL).unwrap();
        let plane = pf.to_plane().unwrap();
        assert_eq!(plane, PlaneSpec::classical());
        let s = serde_json::to_string(&pf).unwrap();
        assert_eq!(parse_plane_file(&s).unwrap(), pf);
    }

    #[test]
    fn plane_file_normalise_and_overrides() {
        let s = r#"{
            "f1": {"kind": "reciprocal_power_sum", "n": 2},
            "f2": {"kind": "reciprocal_power", "i": 1},
            "f3": {"kind": "reciprocal_power", "i": 1},
            "f4": {"kind": "reciprocal_power", "i": 1},
            "normalise": true,
            "checker": {"grid_max": 30.0, "limit_b_values": [1.0]}
        }"#;
        let pf = parse_plane_file(s).unwrap();
        let plane = pf.to_plane().unwrap();
        assert!(plane.normalised);
        let cfg = pf.checker_config().unwrap();
        assert_eq!(cfg.grid_max, 30.0);
        assert_eq!(cfg.limit_b_values, vec![1.0]);
        assert_eq!(cfg.grid_points, 512);
    }

    #[test]
    fn invalid_specs_are_rejected_not_panicked() {
        assert!(parse_plane_file("{").is_err());
        assert!(parse_function(r#"{"kind": "reciprocal_power", "i": 0}"#).is_err());
        assert!(parse_function(r#"{"kind": "hartmann_power", "r": -1.0}"#).is_err());
        assert!(parse_circle(r#"{"half": "neg", "kind": "curve", "a": 0.0, "b": 0, "c": 0}"#).is_err());
        assert!(parse_point(r#"{"x": "infinity", "y": 0}"#).is_err());
        assert!(parse_points(r#"[{"x": 1, "y": 2}, {"x": "inf"}]"#).is_err());
    }
}
