//! Smooth isotropic refractive-index profiles with analytic gradients.

use crate::error::{Error, Result};
use crate::vec3::Vec3;

/// Default bound on `|∇n| ħ_eff / n²` before a trajectory is flagged non-adiabatic.
pub const DEFAULT_ADIABATIC_THRESHOLD: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MediumProfile {
    Homogeneous {
        n0: f64,
    },
    /// `n(x) = n0 + g·x`.
    LinearGradient {
        n0: f64,
        g: Vec3,
    },
    /// `n(x) = n0 − (β/2)|x_⊥|²` with `x_⊥` orthogonal to the unit `axis`.
    ParabolicGrin {
        n0: f64,
        beta: f64,
        axis: Vec3,
    },
}

impl MediumProfile {
    pub fn homogeneous(n0: f64) -> Result<Self> {
        check_n0(n0)?;
        Ok(Self::Homogeneous { n0 })
    }

    pub fn linear_gradient(n0: f64, g: Vec3) -> Result<Self> {
        check_n0(n0)?;
        if !g.is_finite() {
            return Err(Error::InvalidParameter("gradient must be finite".into()));
        }
        Ok(Self::LinearGradient { n0, g })
    }

    /// Parabolic graded-index profile; `axis` is normalized here.
    pub fn parabolic_grin(n0: f64, beta: f64, axis: Vec3) -> Result<Self> {
        check_n0(n0)?;
        if !(beta >= 0.0) || !beta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "beta must be ≥ 0, got {beta}"
            )));
        }
        let axis = axis
            .normalized()
            .ok_or_else(|| Error::InvalidParameter("GRIN axis must be nonzero".into()))?;
        Ok(Self::ParabolicGrin { n0, beta, axis })
    }

    /// Index at `x` without the positivity check.
    pub fn index_unchecked(&self, x: Vec3) -> f64 {
        match *self {
            Self::Homogeneous { n0 } => n0,
            Self::LinearGradient { n0, g } => n0 + g.dot(x),
            Self::ParabolicGrin { n0, beta, axis } => {
                let perp = transverse(x, axis);
                n0 - 0.5 * beta * perp.norm_squared()
            }
        }
    }

    /// Refractive index at `x`; nonpositive values mean the ray left the physical region.
    pub fn refractive_index(&self, x: Vec3) -> Result<f64> {
        let n = self.index_unchecked(x);
        if n > 0.0 {
            Ok(n)
        } else {
            Err(Error::MediumDomain { n, x })
        }
    }

    pub fn grad_n(&self, x: Vec3) -> Vec3 {
        match *self {
            Self::Homogeneous { .. } => Vec3::ZERO,
            Self::LinearGradient { g, .. } => g,
            Self::ParabolicGrin { beta, axis, .. } => transverse(x, axis) * -beta,
        }
    }

    /// `|∇n| ħ / n²`, the local adiabaticity parameter.
    pub fn adiabaticity(&self, x: Vec3, hbar_eff: f64) -> Result<f64> {
        let n = self.refractive_index(x)?;
        Ok(self.grad_n(x).norm() * hbar_eff / (n * n))
    }
}

fn transverse(x: Vec3, axis: Vec3) -> Vec3 {
    x - axis * axis.dot(x)
}

fn check_n0(n0: f64) -> Result<()> {
    if n0 > 0.0 && n0.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("n0 must be > 0, got {n0}")))
    }
}
