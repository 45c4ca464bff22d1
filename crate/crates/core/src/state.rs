use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vec3::Vec3;

/// Momentum in spherical form `(p, θ, φ)`.
///
/// `theta` is the zenith angle in `[0, π]`, `phi` the azimuth in `[−π, π)`.
/// At the poles `phi` is fixed to zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalMomentum {
    pub p: f64,
    pub theta: f64,
    pub phi: f64,
}

impl SphericalMomentum {
    pub const fn new(p: f64, theta: f64, phi: f64) -> Self {
        Self { p, theta, phi }
    }

    /// Unit vector n̂ = (sinθ cosφ, sinθ sinφ, cosθ).
    pub fn unit(&self) -> Vec3 {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        Vec3::new(st * cp, st * sp, ct)
    }

    pub fn e_theta(&self) -> Vec3 {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        Vec3::new(ct * cp, ct * sp, -st)
    }

    pub fn e_phi(&self) -> Vec3 {
        let (sp, cp) = self.phi.sin_cos();
        Vec3::new(-sp, cp, 0.0)
    }

    pub fn to_cartesian(&self) -> Vec3 {
        from_spherical(*self)
    }
}

pub fn to_spherical(p: Vec3) -> Result<SphericalMomentum> {
    let r = p.norm();
    if r == 0.0 || !r.is_finite() {
        return Err(Error::ZeroMomentum);
    }
    let rho = p.x.hypot(p.y);
    let theta = rho.atan2(p.z);
    let phi = if rho == 0.0 {
        0.0
    } else {
        let phi = p.y.atan2(p.x);
        if phi >= PI {
            -PI
        } else {
            phi
        }
    };
    Ok(SphericalMomentum::new(r, theta, phi))
}

pub fn from_spherical(s: SphericalMomentum) -> Vec3 {
    s.unit() * s.p
}

/// Photon helicity λ = ±1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "i8", into = "i8")]
pub enum Helicity {
    Plus,
    Minus,
}

impl Helicity {
    pub const BOTH: [Helicity; 2] = [Helicity::Plus, Helicity::Minus];

    pub fn value(self) -> i8 {
        match self {
            Helicity::Plus => 1,
            Helicity::Minus => -1,
        }
    }

    pub fn sign(self) -> f64 {
        f64::from(self.value())
    }

    pub fn flipped(self) -> Self {
        match self {
            Helicity::Plus => Helicity::Minus,
            Helicity::Minus => Helicity::Plus,
        }
    }
}

impl TryFrom<i8> for Helicity {
    type Error = String;

    fn try_from(v: i8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Helicity::Plus),
            -1 => Ok(Helicity::Minus),
            other => Err(format!("helicity must be +1 or -1, got {other}")),
        }
    }
}

impl From<Helicity> for i8 {
    fn from(h: Helicity) -> i8 {
        h.value()
    }
}

impl fmt::Display for Helicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Helicity::Plus => "+1",
            Helicity::Minus => "-1",
        })
    }
}

/// Phase-space point evolved by the ray equations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayState {
    /// Canonical position.
    pub x: Vec3,
    pub p: Vec3,
    pub helicity: Helicity,
    pub t: f64,
}

impl RayState {
    pub fn new(x: Vec3, p: Vec3, helicity: Helicity) -> Self {
        Self {
            x,
            p,
            helicity,
            t: 0.0,
        }
    }

    pub fn with_helicity(self, helicity: Helicity) -> Self {
        Self { helicity, ..self }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2};

    #[test]
    fn pole_convention() {
        let s = to_spherical(Vec3::new(0.0, 0.0, 2.0)).unwrap();
        assert_eq!((s.p, s.theta, s.phi), (2.0, 0.0, 0.0));
        let s = to_spherical(Vec3::new(0.0, 0.0, -3.0)).unwrap();
        assert_eq!((s.theta, s.phi), (PI, 0.0));
    }

    #[test]
    fn equatorial_axis() {
        let s = to_spherical(Vec3::X).unwrap();
        assert_eq!((s.p, s.theta, s.phi), (1.0, FRAC_PI_2, 0.0));
        assert_eq!(
            from_spherical(SphericalMomentum::new(1.0, FRAC_PI_2, 0.0)).x,
            1.0
        );
        assert!(
            from_spherical(SphericalMomentum::new(1.0, FRAC_PI_2, 0.0))
                .z
                .abs()
                < 1e-16
        );
    }

    #[test]
    fn forty_five_degrees() {
        let s = to_spherical(Vec3::new(1.0, 1.0, SQRT_2)).unwrap();
        assert!((s.p - 2.0).abs() < 1e-15);
        assert!((s.theta - FRAC_PI_4).abs() < 1e-15);
        assert!((s.phi - FRAC_PI_4).abs() < 1e-15);
        let v = from_spherical(SphericalMomentum::new(2.0, FRAC_PI_4, FRAC_PI_4));
        assert!((v - Vec3::new(1.0, 1.0, SQRT_2)).max_abs() < 1e-15);
    }

    #[test]
    fn pole_ignores_phi() {
        let v = from_spherical(SphericalMomentum::new(2.0, 0.0, 1.234));
        assert_eq!(v, Vec3::new(0.0, 0.0, 2.0));
    }

    #[test]
    fn zero_vector_is_rejected() {
        assert_eq!(to_spherical(Vec3::ZERO), Err(Error::ZeroMomentum));
    }

    #[test]
    fn azimuth_range_is_half_open() {
        let s = to_spherical(Vec3::new(-1.0, 0.0, 0.0)).unwrap();
        assert_eq!(s.phi, -PI);
        let s = to_spherical(Vec3::new(-1.0, -0.0, 0.0)).unwrap();
        assert_eq!(s.phi, -PI);
    }

    #[test]
    fn helicity_values() {
        assert_eq!(Helicity::try_from(1), Ok(Helicity::Plus));
        assert!(Helicity::try_from(0).is_err());
        assert_eq!(Helicity::Minus.flipped().sign(), 1.0);
    }

    proptest! {
        #[test]
        fn spherical_round_trip(p in 1e-3..1e3f64, theta in 1e-6..(PI - 1e-6), phi in -PI..PI) {
            let v = from_spherical(SphericalMomentum::new(p, theta, phi));
            let s = to_spherical(v).unwrap();
            let back = from_spherical(s);
            prop_assert!((back - v).norm() <= 1e-12 * v.norm());
            prop_assert!((s.unit().norm() - 1.0).abs() <= 1e-15);
            prop_assert!((v.dot(s.unit()) - v.norm()).abs() <= 1e-12 * v.norm());
        }
    }
}
