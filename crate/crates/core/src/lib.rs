//! Semiclassical transport of polarized light in smoothly inhomogeneous media.
//!
//! The crate covers the momentum-space gauge structure of the photon helicity
//! basis ([`gauge`]), refractive-index profiles ([`medium`]), the ray equations
//! with the Berry-curvature correction ([`dynamics`]), and path functionals for
//! the polarization-plane rotation and the spin Hall shift ([`functionals`]).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod error;
pub mod functionals;
pub mod gauge;
pub mod io;
pub mod mat2;
pub mod medium;
pub mod state;
pub mod validation;
pub mod vec3;

pub use dynamics::{
    eom_rhs, hamiltonian, integrate, trace_pair, IntegratorConfig, PairTrace, PhysicsParams,
    Trajectory, TrajectorySample, TrajectoryStatus,
};
pub use error::{Error, Result};
pub use functionals::{
    berry_phase, hall_shift, kinematic_path, solid_angle, BerryPhase, MomentumPath, PathKind,
};
pub use mat2::{pauli_dot, ComplexMat2};
pub use medium::MediumProfile;
pub use state::{from_spherical, to_spherical, Helicity, RayState, SphericalMomentum};
pub use vec3::Vec3;
