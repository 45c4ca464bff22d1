//! Shared inputs for the benchmarks.

use std::f64::consts::FRAC_PI_3;

use spinray_core::{
    kinematic_path, Helicity, IntegratorConfig, MediumProfile, MomentumPath, PathKind,
    PhysicsParams, RayState, SphericalMomentum, Vec3,
};

/// The reference spin-Hall setup: a ray launched across a linear index gradient.
pub fn gradient_ray() -> (RayState, MediumProfile, PhysicsParams, IntegratorConfig) {
    let medium =
        MediumProfile::linear_gradient(1.0, Vec3::new(0.0, 0.0, 0.1)).expect("valid medium");
    let init = RayState::new(Vec3::ZERO, Vec3::X, Helicity::Plus);
    (
        init,
        medium,
        PhysicsParams::new(1e-3),
        IntegratorConfig::new(20.0),
    )
}

/// Skew ray in a parabolic fiber whose axis is tilted off the coordinate axes.
pub fn grin_ray() -> (RayState, MediumProfile, PhysicsParams, IntegratorConfig) {
    let axis = Vec3::new(0.0, 0.6, 0.8);
    let medium = MediumProfile::parabolic_grin(1.5, 0.02, axis).expect("valid medium");
    let x0 = Vec3::X;
    let dir = (axis + axis.cross(Vec3::X) * 0.12)
        .normalized()
        .expect("nonzero direction");
    let n = medium.refractive_index(x0).expect("inside the fiber");
    (
        RayState::new(x0, dir * n, Helicity::Plus),
        medium,
        PhysicsParams::new(1e-3),
        IntegratorConfig::new(20.0),
    )
}

pub fn loop_path(n_samples: usize) -> MomentumPath {
    kinematic_path(
        PathKind::ConstantColatitudeCircle {
            theta0: FRAC_PI_3,
            p0: 1.0,
            turns: 1.0,
        },
        n_samples,
    )
    .expect("valid loop")
}

pub fn sample_point() -> SphericalMomentum {
    SphericalMomentum::new(1.7, 1.1, -0.4)
}
