use thiserror::Error;

use crate::vec3::Vec3;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the geometric and dynamical operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("zero momentum has no direction")]
    ZeroMomentum,

    #[error("gauge singularity: θ = {theta} is within {guard} of a pole")]
    GaugeSingularity { theta: f64, guard: f64 },

    #[error("refractive index n = {n} ≤ 0 at x = ({}, {}, {})", x.x, x.y, x.z)]
    MediumDomain { n: f64, x: Vec3 },

    #[error("degenerate path: {0}")]
    DegeneratePath(String),

    #[error("samples {index} and {} are antipodal; the geodesic between them is undefined", index + 1)]
    AntipodalPair { index: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("step size underflow at t = {t} (h = {h:e})")]
    IntegrationFailure { t: f64, h: f64 },
}
