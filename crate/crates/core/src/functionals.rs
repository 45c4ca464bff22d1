//! Geometric functionals of momentum paths.
//!
//! - [`berry_phase`]: rotation of the polarization plane, `γ = ∫cosθ dφ`.
//! - [`hall_shift`]: helicity-dependent displacement, `λ∫(p × dp)/p³`.
//! - [`solid_angle`]: signed solid angle of a closed direction path, the
//!   gauge-invariant content of a closed-loop `γ` (`γ ≡ 2πW − Ω mod 4π`).

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::gauge::{check_pole_guard, POLE_GUARD};
use crate::state::{to_spherical, Helicity};
use crate::vec3::Vec3;

/// Tolerance for treating a path's first and last samples as the same point.
pub const CLOSURE_TOL: f64 = 1e-12;

/// Ordered momentum samples along a contour in momentum space.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumPath {
    samples: Vec<Vec3>,
    closed: bool,
}

impl MomentumPath {
    /// Builds a path, marking it closed when the endpoints coincide.
    pub fn new(samples: Vec<Vec3>) -> Result<Self> {
        if let Some(i) = samples
            .iter()
            .position(|p| !(p.norm() > 0.0) || !p.is_finite())
        {
            return Err(Error::DegeneratePath(format!(
                "sample {i} is zero or not finite"
            )));
        }
        let closed = match (samples.first(), samples.last()) {
            (Some(a), Some(b)) if samples.len() > 1 => {
                (*a - *b).max_abs() <= CLOSURE_TOL * a.norm().max(1.0)
            }
            _ => false,
        };
        Ok(Self { samples, closed })
    }

    pub fn samples(&self) -> &[Vec3] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn reversed(&self) -> Self {
        let mut samples = self.samples.clone();
        samples.reverse();
        Self {
            samples,
            closed: self.closed,
        }
    }

    /// Applies `f` to every sample.
    pub fn map(&self, f: impl Fn(Vec3) -> Vec3) -> Result<Self> {
        Self::new(self.samples.iter().copied().map(f).collect())
    }

    fn require_samples(&self, min: usize) -> Result<()> {
        if self.samples.len() < min {
            return Err(Error::DegeneratePath(format!(
                "need at least {min} samples, got {}",
                self.samples.len()
            )));
        }
        Ok(())
    }
}

/// Wraps an angle increment into `(−π, π]`.
fn wrap_angle(d: f64) -> f64 {
    let w = d - TAU * (d / TAU).round();
    if w <= -PI {
        w + TAU
    } else {
        w
    }
}

/// Result of [`berry_phase`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BerryPhase {
    /// `∫cosθ dφ` by the trapezoid rule with continuously unwrapped φ.
    pub gamma: f64,
    /// Total unwrapped azimuth change divided by 2π.
    pub winding: f64,
    /// For closed paths: `2πW − Ω` reduced to lie within 2π of `gamma`.
    pub gauge_invariant: Option<f64>,
    /// Open paths depend on the placement of the Dirac string of the cotθ gauge.
    pub gauge_dependent: bool,
}

/// Rotation angle of the polarization plane along `path`.
pub fn berry_phase(path: &MomentumPath) -> Result<BerryPhase> {
    path.require_samples(3)?;
    let mut prev = to_spherical(path.samples[0])?;
    check_pole_guard(prev.theta)?;
    let mut gamma = 0.0;
    let mut total_phi = 0.0;
    for &p in &path.samples[1..] {
        let s = to_spherical(p)?;
        check_pole_guard(s.theta)?;
        let d_phi = wrap_angle(s.phi - prev.phi);
        gamma += 0.5 * (prev.theta.cos() + s.theta.cos()) * d_phi;
        total_phi += d_phi;
        prev = s;
    }
    let winding = total_phi / TAU;

    let gauge_invariant = if path.closed {
        let omega = solid_angle(path)?;
        let raw = TAU * winding.round() - omega;
        Some(raw + 4.0 * PI * ((gamma - raw) / (4.0 * PI)).round())
    } else {
        None
    };
    Ok(BerryPhase {
        gamma,
        winding,
        gauge_invariant,
        gauge_dependent: !path.closed,
    })
}

fn hall_segment(a: Vec3, b: Vec3) -> Vec3 {
    let mid = (a + b) * 0.5;
    let n = mid.norm();
    mid.cross(b - a) / (n * n * n)
}

/// Midpoint rule for `λ∫(p × dp)/p³` over consecutive sample pairs.
pub fn hall_shift_midpoint(path: &MomentumPath, helicity: Helicity) -> Result<Vec3> {
    path.require_samples(3)?;
    let sum = path
        .samples
        .windows(2)
        .fold(Vec3::ZERO, |acc, w| acc + hall_segment(w[0], w[1]));
    Ok(sum * helicity.sign())
}

/// `λ∫(p × dp)/p³` by the midpoint rule with one Richardson extrapolation.
///
/// Segments are paired; for each pair the fine (two-segment) and coarse
/// (one chord) midpoint sums combine as `(4·fine − coarse)/3`. With an odd
/// number of segments the last one enters unextrapolated.
pub fn hall_shift(path: &MomentumPath, helicity: Helicity) -> Result<Vec3> {
    path.require_samples(3)?;
    let s = &path.samples;
    let segments = s.len() - 1;
    let mut sum = Vec3::ZERO;
    let mut i = 0;
    while i + 2 <= segments {
        let fine = hall_segment(s[i], s[i + 1]) + hall_segment(s[i + 1], s[i + 2]);
        let coarse = hall_segment(s[i], s[i + 2]);
        sum += (fine * 4.0 - coarse) / 3.0;
        i += 2;
    }
    if i < segments {
        sum += hall_segment(s[i], s[i + 1]);
    }
    Ok(sum * helicity.sign())
}

/// Signed area of the spherical triangle `(a, b, c)` of unit vectors, in `(−2π, 2π)`.
pub fn triangle_area(a: Vec3, b: Vec3, c: Vec3) -> f64 {
    let num = a.dot(b.cross(c));
    let den = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
    2.0 * num.atan2(den)
}

/// Signed solid angle enclosed by a closed direction path, in `(−4π, 4π)`.
///
/// Sums signed triangle areas from a fan apex to consecutive edges. The apex
/// is the direction of `Σ p̂_i × p̂_{i+1}`, which sits on the left of a
/// counterclockwise loop, so simple loops give the area to their left.
pub fn solid_angle(path: &MomentumPath) -> Result<f64> {
    path.require_samples(3)?;
    if !path.closed {
        return Err(Error::DegeneratePath(
            "solid angle needs a closed path".into(),
        ));
    }
    let units: Vec<Vec3> = path.samples.iter().map(|p| *p / p.norm()).collect();
    for (i, w) in units.windows(2).enumerate() {
        if w[0].dot(w[1]) <= -1.0 + 1e-12 {
            return Err(Error::AntipodalPair { index: i });
        }
    }
    let area_vector = units
        .windows(2)
        .fold(Vec3::ZERO, |acc, w| acc + w[0].cross(w[1]));
    let apex = match area_vector.normalized() {
        Some(a) if area_vector.norm() > 1e-9 => a,
        _ => farthest_axis(&units),
    };
    Ok(units
        .windows(2)
        .map(|w| triangle_area(apex, w[0], w[1]))
        .sum())
}

/// Coordinate direction (±x̂, ±ŷ, ±ẑ) with the largest angular distance to the path.
fn farthest_axis(units: &[Vec3]) -> Vec3 {
    let axes = [Vec3::X, Vec3::Y, Vec3::Z, -Vec3::X, -Vec3::Y, -Vec3::Z];
    let closeness = |a: Vec3| {
        units
            .iter()
            .map(|u| u.dot(a))
            .fold(f64::NEG_INFINITY, f64::max)
    };
    axes.into_iter()
        .min_by(|a, b| closeness(*a).total_cmp(&closeness(*b)))
        .expect("nonempty axis list")
}

/// Prescribed momentum contours.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PathKind {
    /// Circle of fixed colatitude about ẑ; closed for integer `turns`.
    ConstantColatitudeCircle { theta0: f64, p0: f64, turns: f64 },
    /// Full great circle orthogonal to `axis`, counterclockwise about it.
    GreatCircle { axis: Vec3, p0: f64 },
    /// θ varies linearly from `theta_start` to `theta_end` while φ makes `turns` turns.
    Loxodrome {
        theta_start: f64,
        theta_end: f64,
        turns: f64,
        p0: f64,
    },
}

/// Uniformly parameterized samples of a prescribed contour.
pub fn kinematic_path(kind: PathKind, n_samples: usize) -> Result<MomentumPath> {
    if n_samples < 16 {
        return Err(Error::InvalidParameter(format!(
            "need at least 16 samples, got {n_samples}"
        )));
    }
    let param = |k: usize| k as f64 / (n_samples - 1) as f64;
    let check_p0 = |p0: f64| {
        if p0 > 0.0 && p0.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("p0 must be > 0, got {p0}")))
        }
    };
    let check_theta = |theta: f64| {
        if (POLE_GUARD..=PI - POLE_GUARD).contains(&theta) {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "θ = {theta} lies inside the pole guard"
            )))
        }
    };
    let on_sphere = |p0: f64, theta: f64, phi: f64| {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Vec3::new(st * cp, st * sp, ct) * p0
    };

    let mut samples: Vec<Vec3> = match kind {
        PathKind::ConstantColatitudeCircle { theta0, p0, turns } => {
            check_theta(theta0)?;
            check_p0(p0)?;
            (0..n_samples)
                .map(|k| on_sphere(p0, theta0, TAU * turns * param(k)))
                .collect()
        }
        PathKind::GreatCircle { axis, p0 } => {
            check_p0(p0)?;
            let axis = axis.normalized().ok_or_else(|| {
                Error::InvalidParameter("great-circle axis must be nonzero".into())
            })?;
            let helper = if axis.x.abs() < 0.9 { Vec3::X } else { Vec3::Y };
            let u = (helper - axis * axis.dot(helper))
                .normalized()
                .expect("helper not parallel to axis");
            let v = axis.cross(u);
            (0..n_samples)
                .map(|k| {
                    let (s, c) = (TAU * param(k)).sin_cos();
                    (u * c + v * s) * p0
                })
                .collect()
        }
        PathKind::Loxodrome {
            theta_start,
            theta_end,
            turns,
            p0,
        } => {
            check_theta(theta_start)?;
            check_theta(theta_end)?;
            check_p0(p0)?;
            (0..n_samples)
                .map(|k| {
                    let s = param(k);
                    on_sphere(
                        p0,
                        theta_start + (theta_end - theta_start) * s,
                        TAU * turns * s,
                    )
                })
                .collect()
        }
    };

    let closes = match kind {
        PathKind::ConstantColatitudeCircle { turns, .. } => turns.fract() == 0.0 && turns != 0.0,
        PathKind::GreatCircle { .. } => true,
        PathKind::Loxodrome { .. } => false,
    };
    if closes {
        samples[n_samples - 1] = samples[0];
    }
    MomentumPath::new(samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_6};

    fn circle(theta0: f64, p0: f64, n: usize) -> MomentumPath {
        kinematic_path(
            PathKind::ConstantColatitudeCircle {
                theta0,
                p0,
                turns: 1.0,
            },
            n,
        )
        .unwrap()
    }

    #[test]
    fn equatorial_loop_has_no_rotation() {
        let bp = berry_phase(&circle(FRAC_PI_2, 1.0, 256)).unwrap();
        assert!(bp.gamma.abs() <= 1e-12);
    }

    #[test]
    fn colatitude_loop_rotation_and_reverse() {
        let path = circle(FRAC_PI_3, 1.0, 4096);
        let bp = berry_phase(&path).unwrap();
        assert!((bp.gamma - PI).abs() <= 1e-9);
        assert!((bp.winding - 1.0).abs() < 1e-12);
        assert!(!bp.gauge_dependent);
        let gi = bp.gauge_invariant.unwrap();
        assert!((gi - bp.gamma).abs() <= 1e-6);

        let rev = berry_phase(&path.reversed()).unwrap();
        assert!((rev.gamma + PI).abs() <= 1e-9);
    }

    #[test]
    fn open_paths_are_flagged() {
        let path = kinematic_path(
            PathKind::ConstantColatitudeCircle {
                theta0: 1.0,
                p0: 1.0,
                turns: 0.5,
            },
            64,
        )
        .unwrap();
        assert!(!path.is_closed());
        let bp = berry_phase(&path).unwrap();
        assert!(bp.gauge_dependent && bp.gauge_invariant.is_none());
        assert!((bp.gamma - PI * 1f64.cos()).abs() < 1e-12);
    }

    #[test]
    fn berry_phase_rejects_bad_paths() {
        let short = MomentumPath::new(vec![Vec3::X, Vec3::Y]).unwrap();
        assert!(matches!(berry_phase(&short), Err(Error::DegeneratePath(_))));
        let polar = MomentumPath::new(vec![Vec3::X, Vec3::Z, Vec3::Y]).unwrap();
        assert!(matches!(
            berry_phase(&polar),
            Err(Error::GaugeSingularity { .. })
        ));
        assert!(MomentumPath::new(vec![Vec3::X, Vec3::ZERO, Vec3::Y]).is_err());
    }

    #[test]
    fn hall_shift_on_equator() {
        let path = circle(FRAC_PI_2, 1.0, 4096);
        let d = hall_shift(&path, Helicity::Plus).unwrap();
        assert!((d - Vec3::new(0.0, 0.0, TAU)).norm() <= 1e-8 * TAU, "{d:?}");
        assert_eq!(hall_shift(&path, Helicity::Minus).unwrap(), -d);
    }

    #[test]
    fn hall_shift_closed_form_against_brute_force() {
        // closed form 2π sin²θ₀/p₀ ẑ, independently by plain midpoint at 10⁵ samples
        let (theta0, p0) = (1.1f64, 2.0);
        let exact = TAU * theta0.sin().powi(2) / p0;
        let brute = hall_shift_midpoint(&circle(theta0, p0, 100_000), Helicity::Plus).unwrap();
        assert!((brute.z - exact).abs() <= 1e-8 * exact);
        let fast = hall_shift(&circle(theta0, p0, 10_000), Helicity::Plus).unwrap();
        assert!((fast.z - exact).abs() <= 1e-8 * exact);
        assert!(
            fast.x.abs().max(fast.y.abs()) < 1e-10 * fast.norm(),
            "{fast:?}"
        );
    }

    #[test]
    fn hall_shift_cancels_on_arc_and_reverse() {
        let arc = kinematic_path(
            PathKind::Loxodrome {
                theta_start: 0.4,
                theta_end: 0.4,
                turns: 0.3,
                p0: 1.0,
            },
            101,
        )
        .unwrap();
        let arc = MomentumPath::new(
            arc.samples()
                .iter()
                .map(|p| p.rotated(Vec3::Y, 0.9))
                .collect(),
        )
        .unwrap();
        let mut there_and_back = arc.samples().to_vec();
        there_and_back.extend(arc.samples().iter().rev().skip(1));
        let path = MomentumPath::new(there_and_back).unwrap();
        assert!(hall_shift(&path, Helicity::Plus).unwrap().max_abs() <= 1e-12);

        let great = kinematic_path(
            PathKind::GreatCircle {
                axis: Vec3::new(1.0, 2.0, 3.0),
                p0: 1.5,
            },
            64,
        )
        .unwrap();
        let half: Vec<Vec3> = great.samples()[..20].to_vec();
        let mut back = half.clone();
        back.extend(half.iter().rev().skip(1));
        let path = MomentumPath::new(back).unwrap();
        assert!(hall_shift(&path, Helicity::Minus).unwrap().max_abs() <= 1e-12);
    }

    #[test]
    fn midpoint_rule_is_second_order() {
        let theta0 = FRAC_PI_3;
        let exact = TAU * theta0.sin().powi(2);
        let err = |n| {
            (hall_shift_midpoint(&circle(theta0, 1.0, n), Helicity::Plus)
                .unwrap()
                .z
                - exact)
                .abs()
        };
        let ratio = err(201) / err(401);
        assert!((3.9..4.1).contains(&ratio), "{ratio}");
    }

    #[test]
    fn solid_angle_examples() {
        let eq = circle(FRAC_PI_2, 1.0, 512);
        assert!((solid_angle(&eq).unwrap() - TAU).abs() <= 1e-9);
        let cap = circle(FRAC_PI_3, 3.0, 4096);
        assert!((solid_angle(&cap).unwrap() - PI).abs() <= 1e-6);
        let south = circle(2.0 * FRAC_PI_3, 1.0, 4096);
        assert!((solid_angle(&south).unwrap() - 3.0 * PI).abs() <= 1e-6);
        // reversed, the region to the left is the complement: 4π − π ≡ −π
        let rev = solid_angle(&cap.reversed()).unwrap();
        assert!((rev - 3.0 * PI).abs() <= 1e-6);
    }

    #[test]
    fn great_circle_bounds_a_hemisphere() {
        let axis = Vec3::Z.rotated(Vec3::X, 0.7);
        let path = kinematic_path(PathKind::GreatCircle { axis, p0: 1.0 }, 256).unwrap();
        assert!(path.is_closed());
        assert!((solid_angle(&path).unwrap() - TAU).abs() <= 1e-9);
    }

    #[test]
    fn tiny_triangle_is_flat() {
        let base = Vec3::new(0.3, -0.5, 0.8).normalized().unwrap();
        let e1 = base.cross(Vec3::Z).normalized().unwrap();
        let e2 = base.cross(e1);
        let d = 1e-4;
        let a = base;
        let b = (base + e1 * d).normalized().unwrap();
        let c = (base + e2 * d * 0.7 + e1 * d * 0.2).normalized().unwrap();
        let sph = triangle_area(a, b, c);
        let flat = (b - a).cross(c - a).norm() * 0.5;
        assert!((sph.abs() - flat).abs() <= 1e-8 * flat);
    }

    #[test]
    fn antipodal_neighbours_are_rejected() {
        let path = MomentumPath::new(vec![Vec3::X, -Vec3::X, Vec3::Y, Vec3::X]).unwrap();
        assert_eq!(solid_angle(&path), Err(Error::AntipodalPair { index: 0 }));
    }

    #[test]
    fn kinematic_path_properties() {
        let path = circle(FRAC_PI_3, 1.0, 256);
        assert!(path.is_closed());
        for p in path.samples() {
            assert!((p.norm() - 1.0).abs() <= 1e-15);
        }
        let lox = kinematic_path(
            PathKind::Loxodrome {
                theta_start: 0.3,
                theta_end: 2.5,
                turns: 3.0,
                p0: 2.0,
            },
            100,
        )
        .unwrap();
        let first = to_spherical(lox.samples()[0]).unwrap();
        let last = to_spherical(*lox.samples().last().unwrap()).unwrap();
        assert!((first.theta - 0.3).abs() < 1e-14 && (last.theta - 2.5).abs() < 1e-14);
        assert!(!lox.is_closed());

        assert!(kinematic_path(
            PathKind::ConstantColatitudeCircle {
                theta0: 0.0,
                p0: 1.0,
                turns: 1.0
            },
            64
        )
        .is_err());
        assert!(kinematic_path(
            PathKind::ConstantColatitudeCircle {
                theta0: 1.0,
                p0: -1.0,
                turns: 1.0
            },
            64
        )
        .is_err());
        assert!(kinematic_path(
            PathKind::GreatCircle {
                axis: Vec3::Z,
                p0: 1.0
            },
            8
        )
        .is_err());
    }

    #[test]
    fn berry_phase_is_scale_invariant() {
        let a = berry_phase(&circle(FRAC_PI_6, 1.0, 512)).unwrap().gamma;
        let b = berry_phase(&circle(FRAC_PI_6, 7.5, 512)).unwrap().gamma;
        assert!((a - b).abs() < 1e-12);
    }
}
