//! Semiclassical ray equations with the Berry-curvature correction.
//!
//! With `H̃ = |p|/n(x) + κλ|p|`:
//!
//! ```text
//! ṗ = −∇_x H̃ = (|p|/n²) ∇n
//! ẋ = ∇_p H̃ + λħ (p/|p|³ × ṗ)
//! ```
//!
//! The correction is orthogonal to `ṗ`, so `H̃` is conserved exactly by the flow.

mod stepper;
mod trajectory;

pub use trajectory::{
    integrate, trace_pair, AdiabaticityWarning, PairTrace, Trajectory, TrajectorySample,
    TrajectoryStatus,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::medium::{MediumProfile, DEFAULT_ADIABATIC_THRESHOLD};
use crate::state::{Helicity, RayState};
use crate::vec3::Vec3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicsParams {
    /// Effective Planck constant in simulation units.
    pub hbar_eff: f64,
    /// Spin-orbit coupling strength.
    pub kappa: f64,
    /// When false the ray is unpolarized (λ = 0) and the classical equations are recovered.
    pub polarized: bool,
}

impl Default for PhysicsParams {
    fn default() -> Self {
        Self {
            hbar_eff: 0.0,
            kappa: 0.0,
            polarized: true,
        }
    }
}

impl PhysicsParams {
    pub fn new(hbar_eff: f64) -> Self {
        Self {
            hbar_eff,
            ..Self::default()
        }
    }

    pub fn classical() -> Self {
        Self {
            hbar_eff: 0.0,
            kappa: 0.0,
            polarized: false,
        }
    }

    /// λ entering the equations: ±1, or 0 for unpolarized light.
    pub fn lambda(&self, helicity: Helicity) -> f64 {
        if self.polarized {
            helicity.sign()
        } else {
            0.0
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.hbar_eff >= 0.0) || !self.hbar_eff.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "hbar_eff must be ≥ 0, got {}",
                self.hbar_eff
            )));
        }
        if !self.kappa.is_finite() {
            return Err(Error::InvalidParameter("kappa must be finite".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub rtol: f64,
    pub atol: f64,
    pub t_max: f64,
    pub max_step: f64,
    /// Spacing of recorded samples; steps are clamped to land on multiples of it.
    pub sample_interval: f64,
    pub adiabatic_threshold: f64,
}

impl IntegratorConfig {
    /// Defaults for a run of length `t_max`: 4096 sample intervals.
    pub fn new(t_max: f64) -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-12,
            t_max,
            max_step: t_max / 64.0,
            sample_interval: t_max / 4096.0,
            adiabatic_threshold: DEFAULT_ADIABATIC_THRESHOLD,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("rtol", self.rtol),
            ("atol", self.atol),
            ("t_max", self.t_max),
            ("max_step", self.max_step),
            ("sample_interval", self.sample_interval),
            ("adiabatic_threshold", self.adiabatic_threshold),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be > 0, got {v}"
                )));
            }
        }
        Ok(())
    }
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self::new(20.0)
    }
}

/// Adiabatic eigenvalue of the Hamiltonian for the state's helicity.
pub fn hamiltonian(
    state: &RayState,
    medium: &MediumProfile,
    params: &PhysicsParams,
) -> Result<f64> {
    let n = medium.refractive_index(state.x)?;
    let p = state.p.norm();
    if p == 0.0 {
        return Err(Error::ZeroMomentum);
    }
    Ok(p / n + params.kappa * params.lambda(state.helicity) * p)
}

/// Right-hand side `(ẋ, ṗ)` of the ray equations.
pub fn eom_rhs(
    state: &RayState,
    medium: &MediumProfile,
    params: &PhysicsParams,
) -> Result<(Vec3, Vec3)> {
    let lambda = params.lambda(state.helicity);
    let (dx, dp, _) = rhs_parts(state.x, state.p, medium, params, lambda)?;
    Ok((dx, dp))
}

/// `(ẋ, ṗ, anomalous velocity)`.
fn rhs_parts(
    x: Vec3,
    p: Vec3,
    medium: &MediumProfile,
    params: &PhysicsParams,
    lambda: f64,
) -> Result<(Vec3, Vec3, Vec3)> {
    let n = medium.refractive_index(x)?;
    let p_norm = p.norm();
    if p_norm == 0.0 {
        return Err(Error::ZeroMomentum);
    }
    let dp = medium.grad_n(x) * (p_norm / (n * n));
    let group = p * ((1.0 / n + params.kappa * lambda) / p_norm);
    let anomalous = if lambda == 0.0 || params.hbar_eff == 0.0 {
        Vec3::ZERO
    } else {
        (p / (p_norm * p_norm * p_norm)).cross(dp) * (lambda * params.hbar_eff)
    };
    Ok((group + anomalous, dp, anomalous))
}
