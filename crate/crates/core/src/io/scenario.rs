//! Scenario files: one JSON object describing a medium, a launch ray and run settings.
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "medium": { "kind": "linear_gradient", "n0": 1.0, "gradient": [0, 0, 0.1] },
//!   "ray": { "x0": [0, 0, 0], "direction": [1, 0, 0], "helicities": [1, -1] },
//!   "physics": { "hbar_eff": 0.001, "kappa": 0.0, "polarized": true },
//!   "integrator": { "rtol": 1e-10, "atol": 1e-12, "t_max": 20.0,
//!                   "max_step": 0.3125, "sample_interval": 0.0048828125,
//!                   "adiabatic_threshold": 0.1 },
//!   "output": { "prefix": "out/gradient" }
//! }
//! ```
//!
//! Only `medium` and `ray.direction` are required. Unknown keys are rejected.

use serde::Deserialize;
use thiserror::Error;

use crate::dynamics::{IntegratorConfig, PhysicsParams};
use crate::medium::{MediumProfile, DEFAULT_ADIABATIC_THRESHOLD};
use crate::state::{Helicity, RayState};
use crate::vec3::Vec3;

pub const SCHEMA_VERSION: u32 = 1;

/// Default effective Planck constant when `physics.hbar_eff` is omitted.
pub const DEFAULT_HBAR_EFF: f64 = 1e-3;

/// Default run length when `integrator.t_max` is omitted.
pub const DEFAULT_T_MAX: f64 = 20.0;

/// Largest accepted deviation of `|ray.direction|` from 1 before it is rejected.
pub const DIRECTION_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("schema error at `{path}`: {message}")]
    Schema { path: String, message: String },
    #[error("validation error at `{path}`: {message}")]
    Validation { path: String, message: String },
}

impl ScenarioError {
    fn schema(path: &str, message: impl Into<String>) -> Self {
        Self::Schema {
            path: path.to_owned(),
            message: message.into(),
        }
    }

    fn validation(path: &str, message: impl Into<String>) -> Self {
        Self::Validation {
            path: path.to_owned(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RaySpec {
    pub x0: Vec3,
    /// Unit launch direction.
    pub direction: Vec3,
    pub helicities: Vec<Helicity>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct OutputSpec {
    pub prefix: Option<String>,
}

/// A validated scenario with defaults filled in.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub medium: MediumProfile,
    pub ray: RaySpec,
    pub physics: PhysicsParams,
    pub integrator: IntegratorConfig,
    pub output: OutputSpec,
}

impl Scenario {
    /// Launch state with `|p| = n(x0)`, so `H̃ = 1` at `t = 0` when `κ = 0`.
    pub fn initial_state(&self, helicity: Helicity) -> RayState {
        let n = self.medium.index_unchecked(self.ray.x0);
        RayState::new(self.ray.x0, self.ray.direction * n, helicity)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    schema_version: Option<u32>,
    medium: RawMedium,
    ray: RawRay,
    #[serde(default)]
    physics: RawPhysics,
    #[serde(default)]
    integrator: RawIntegrator,
    #[serde(default)]
    output: RawOutput,
}

#[derive(Debug, Deserialize, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
enum MediumKind {
    Homogeneous,
    LinearGradient,
    ParabolicGrin,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMedium {
    kind: MediumKind,
    n0: f64,
    gradient: Option<[f64; 3]>,
    beta: Option<f64>,
    axis: Option<[f64; 3]>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRay {
    #[serde(default)]
    x0: [f64; 3],
    direction: [f64; 3],
    helicities: Option<Vec<Helicity>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPhysics {
    hbar_eff: Option<f64>,
    kappa: Option<f64>,
    polarized: Option<bool>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawIntegrator {
    rtol: Option<f64>,
    atol: Option<f64>,
    t_max: Option<f64>,
    max_step: Option<f64>,
    sample_interval: Option<f64>,
    adiabatic_threshold: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    prefix: Option<String>,
}

/// Parses and validates a scenario document.
pub fn load_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let raw: RawScenario = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        match inner.classify() {
            serde_json::error::Category::Data => ScenarioError::Schema {
                path,
                message: inner.to_string(),
            },
            _ => ScenarioError::Parse(inner.to_string()),
        }
    })?;

    if let Some(v) = raw.schema_version {
        if v != SCHEMA_VERSION {
            return Err(ScenarioError::schema(
                "schema_version",
                format!("unsupported version {v}, expected {SCHEMA_VERSION}"),
            ));
        }
    }

    let medium = build_medium(&raw.medium)?;
    let ray = build_ray(&raw.ray, &medium)?;
    let physics = build_physics(&raw.physics)?;
    let integrator = build_integrator(&raw.integrator)?;
    Ok(Scenario {
        medium,
        ray,
        physics,
        integrator,
        output: OutputSpec {
            prefix: raw.output.prefix,
        },
    })
}

fn finite_vec(path: &str, a: [f64; 3]) -> Result<Vec3, ScenarioError> {
    let v = Vec3::from(a);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(ScenarioError::validation(path, "components must be finite"))
    }
}

fn build_medium(raw: &RawMedium) -> Result<MediumProfile, ScenarioError> {
    let allowed: &[&str] = match raw.kind {
        MediumKind::Homogeneous => &[],
        MediumKind::LinearGradient => &["gradient"],
        MediumKind::ParabolicGrin => &["beta", "axis"],
    };
    let present = [
        ("gradient", raw.gradient.is_some()),
        ("beta", raw.beta.is_some()),
        ("axis", raw.axis.is_some()),
    ];
    for (key, is_set) in present {
        if is_set && !allowed.contains(&key) {
            return Err(ScenarioError::schema(
                &format!("medium.{key}"),
                format!("not a parameter of medium kind {:?}", raw.kind),
            ));
        }
    }
    if !(raw.n0 > 0.0 && raw.n0.is_finite()) {
        return Err(ScenarioError::validation(
            "medium.n0",
            format!("must be > 0, got {}", raw.n0),
        ));
    }

    let profile = match raw.kind {
        MediumKind::Homogeneous => MediumProfile::homogeneous(raw.n0),
        MediumKind::LinearGradient => {
            let g = raw
                .gradient
                .ok_or_else(|| ScenarioError::schema("medium.gradient", "missing field"))?;
            MediumProfile::linear_gradient(raw.n0, finite_vec("medium.gradient", g)?)
        }
        MediumKind::ParabolicGrin => {
            let beta = raw
                .beta
                .ok_or_else(|| ScenarioError::schema("medium.beta", "missing field"))?;
            if !(beta >= 0.0) || !beta.is_finite() {
                return Err(ScenarioError::schema(
                    "medium.beta",
                    format!("must be a non-negative number, got {beta}"),
                ));
            }
            let axis = finite_vec("medium.axis", raw.axis.unwrap_or([0.0, 0.0, 1.0]))?;
            if axis.norm() == 0.0 {
                return Err(ScenarioError::validation("medium.axis", "must be nonzero"));
            }
            MediumProfile::parabolic_grin(raw.n0, beta, axis)
        }
    };
    profile.map_err(|e| ScenarioError::validation("medium", e.to_string()))
}

fn build_ray(raw: &RawRay, medium: &MediumProfile) -> Result<RaySpec, ScenarioError> {
    let x0 = finite_vec("ray.x0", raw.x0)?;
    let d = finite_vec("ray.direction", raw.direction)?;
    let norm = d.norm();
    if (norm - 1.0).abs() > DIRECTION_TOL {
        return Err(ScenarioError::validation(
            "ray.direction",
            format!("must be a unit vector, |d| = {norm}"),
        ));
    }
    let n = medium.index_unchecked(x0);
    if !(n > 0.0) {
        return Err(ScenarioError::validation(
            "ray.x0",
            format!("refractive index n(x0) = {n} must be > 0"),
        ));
    }
    let helicities = raw
        .helicities
        .clone()
        .unwrap_or_else(|| Helicity::BOTH.to_vec());
    if helicities.is_empty() {
        return Err(ScenarioError::validation(
            "ray.helicities",
            "must list at least one of +1, -1",
        ));
    }
    if helicities.len() == 2 && helicities[0] == helicities[1] || helicities.len() > 2 {
        return Err(ScenarioError::validation(
            "ray.helicities",
            "must not repeat a helicity",
        ));
    }
    Ok(RaySpec {
        x0,
        direction: d / norm,
        helicities,
    })
}

fn build_physics(raw: &RawPhysics) -> Result<PhysicsParams, ScenarioError> {
    let hbar_eff = raw.hbar_eff.unwrap_or(DEFAULT_HBAR_EFF);
    if !(hbar_eff >= 0.0) || !hbar_eff.is_finite() {
        return Err(ScenarioError::validation(
            "physics.hbar_eff",
            format!("must be ≥ 0, got {hbar_eff}"),
        ));
    }
    let kappa = raw.kappa.unwrap_or(0.0);
    if !kappa.is_finite() {
        return Err(ScenarioError::validation("physics.kappa", "must be finite"));
    }
    Ok(PhysicsParams {
        hbar_eff,
        kappa,
        polarized: raw.polarized.unwrap_or(true),
    })
}

fn build_integrator(raw: &RawIntegrator) -> Result<IntegratorConfig, ScenarioError> {
    let t_max = raw.t_max.unwrap_or(DEFAULT_T_MAX);
    let defaults = IntegratorConfig::new(t_max);
    let cfg = IntegratorConfig {
        rtol: raw.rtol.unwrap_or(defaults.rtol),
        atol: raw.atol.unwrap_or(defaults.atol),
        t_max,
        max_step: raw.max_step.unwrap_or(defaults.max_step),
        sample_interval: raw.sample_interval.unwrap_or(defaults.sample_interval),
        adiabatic_threshold: raw
            .adiabatic_threshold
            .unwrap_or(DEFAULT_ADIABATIC_THRESHOLD),
    };
    let fields = [
        ("integrator.rtol", cfg.rtol),
        ("integrator.atol", cfg.atol),
        ("integrator.t_max", cfg.t_max),
        ("integrator.max_step", cfg.max_step),
        ("integrator.sample_interval", cfg.sample_interval),
        ("integrator.adiabatic_threshold", cfg.adiabatic_threshold),
    ];
    for (path, v) in fields {
        if !(v > 0.0) || !v.is_finite() {
            return Err(ScenarioError::validation(
                path,
                format!("must be > 0, got {v}"),
            ));
        }
    }
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "medium": { "kind": "homogeneous", "n0": 1.5 },
        "ray": { "direction": [0, 0, 1] }
    }"#;

    #[test]
    fn minimal_scenario_gets_defaults() {
        let s = load_scenario(MINIMAL).unwrap();
        assert_eq!(s.medium, MediumProfile::Homogeneous { n0: 1.5 });
        assert_eq!(s.ray.helicities, vec![Helicity::Plus, Helicity::Minus]);
        assert_eq!(s.integrator.rtol, 1e-10);
        assert_eq!(s.integrator.atol, 1e-12);
        assert_eq!(s.integrator.t_max, DEFAULT_T_MAX);
        assert_eq!(s.physics.kappa, 0.0);
        assert!(s.physics.polarized);
        let init = s.initial_state(Helicity::Plus);
        assert_eq!(init.p, Vec3::new(0.0, 0.0, 1.5));
    }

    #[test]
    fn short_direction_is_a_validation_error() {
        let text = r#"{ "medium": { "kind": "homogeneous", "n0": 1.0 }, "ray": { "direction": [0.3, 0, 0] } }"#;
        match load_scenario(text) {
            Err(ScenarioError::Validation { path, .. }) => assert_eq!(path, "ray.direction"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn nearly_unit_direction_is_renormalized() {
        let text = r#"{ "medium": { "kind": "homogeneous", "n0": 1.0 }, "ray": { "direction": [1.0000005, 0, 0] } }"#;
        assert_eq!(load_scenario(text).unwrap().ray.direction, Vec3::X);
    }

    #[test]
    fn negative_beta_is_a_schema_error() {
        let text = r#"{ "medium": { "kind": "parabolic_grin", "n0": 1.5, "beta": -0.1 }, "ray": { "direction": [0, 0, 1] } }"#;
        match load_scenario(text) {
            Err(ScenarioError::Schema { path, .. }) => assert_eq!(path, "medium.beta"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_keys_are_rejected_with_their_path() {
        let text = r#"{ "medium": { "kind": "homogeneous", "n0": 1.0 }, "ray": { "direction": [0, 0, 1] },
                        "integrator": { "rtol": 1e-9, "tol": 3 } }"#;
        match load_scenario(text) {
            Err(ScenarioError::Schema { path, message }) => {
                assert_eq!(path, "integrator.tol");
                assert!(message.contains("unknown field"), "{message}");
            }
            other => panic!("{other:?}"),
        }
        let text = r#"{ "medium": { "kind": "homogeneous", "n0": 1.0, "beta": 0.1 }, "ray": { "direction": [0, 0, 1] } }"#;
        assert!(
            matches!(load_scenario(text), Err(ScenarioError::Schema { path, .. }) if path == "medium.beta")
        );
    }

    #[test]
    fn wrong_type_is_a_schema_error() {
        let text = r#"{ "medium": { "kind": "homogeneous", "n0": "one" }, "ray": { "direction": [0, 0, 1] } }"#;
        assert!(
            matches!(load_scenario(text), Err(ScenarioError::Schema { path, .. }) if path == "medium.n0")
        );
        let text = r#"{ "medium": { "kind": "homogeneous", "n0": 1 }, "ray": { "direction": [0, 0, 1], "helicities": [0] } }"#;
        assert!(
            matches!(load_scenario(text), Err(ScenarioError::Schema { path, .. }) if path.starts_with("ray.helicities"))
        );
    }

    #[test]
    fn malformed_text_is_a_parse_error() {
        assert!(matches!(
            load_scenario("{ \"medium\": "),
            Err(ScenarioError::Parse(_))
        ));
        assert!(matches!(
            load_scenario("medium = 1"),
            Err(ScenarioError::Parse(_))
        ));
    }

    #[test]
    fn validation_errors_name_their_key() {
        let cases = [
            (
                r#"{ "medium": { "kind": "homogeneous", "n0": 1 }, "ray": { "direction": [1, 0, 0] }, "integrator": { "atol": -1 } }"#,
                "integrator.atol",
            ),
            (
                r#"{ "medium": { "kind": "homogeneous", "n0": 1 }, "ray": { "direction": [1, 0, 0] }, "physics": { "hbar_eff": -1 } }"#,
                "physics.hbar_eff",
            ),
            (
                r#"{ "medium": { "kind": "linear_gradient", "n0": 1, "gradient": [0, 0, 0.1] }, "ray": { "x0": [0, 0, -20], "direction": [1, 0, 0] } }"#,
                "ray.x0",
            ),
            (
                r#"{ "medium": { "kind": "homogeneous", "n0": 0 }, "ray": { "direction": [1, 0, 0] } }"#,
                "medium.n0",
            ),
            (
                r#"{ "medium": { "kind": "homogeneous", "n0": 1 }, "ray": { "direction": [1, 0, 0], "helicities": [1, 1] } }"#,
                "ray.helicities",
            ),
        ];
        for (text, key) in cases {
            match load_scenario(text) {
                Err(ScenarioError::Validation { path, .. }) => assert_eq!(path, key),
                other => panic!("{key}: {other:?}"),
            }
        }
    }

    #[test]
    fn schema_version_must_match() {
        let text = r#"{ "schema_version": 2, "medium": { "kind": "homogeneous", "n0": 1 }, "ray": { "direction": [1, 0, 0] } }"#;
        assert!(
            matches!(load_scenario(text), Err(ScenarioError::Schema { path, .. }) if path == "schema_version")
        );
    }

    #[test]
    fn missing_gradient_is_reported() {
        let text = r#"{ "medium": { "kind": "linear_gradient", "n0": 1 }, "ray": { "direction": [1, 0, 0] } }"#;
        assert!(
            matches!(load_scenario(text), Err(ScenarioError::Schema { path, .. }) if path == "medium.gradient")
        );
    }
}
