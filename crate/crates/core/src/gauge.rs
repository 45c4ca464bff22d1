//! Momentum-space gauge structure of the helicity basis.
//!
//! The unitary `U(p)` rotates `σ·p` onto `|p|σ₃`. Differentiating it gives the
//! non-Abelian connection `A = iU†∇U`, which is pure gauge (its field strength
//! vanishes). Keeping only the diagonal part gives the Abelian Berry connection
//! `λ cotθ/p ê_φ` whose curvature is the monopole field `−λp/p³`.
//!
//! Connection components are physical (orthonormal-frame) components: the
//! `ê_θ` component carries `1/p`, the `ê_φ` component `1/(p sinθ)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mat2::{pauli_dot, sigma_z, ComplexMat2};
use crate::state::{to_spherical, Helicity, SphericalMomentum};
use crate::vec3::Vec3;

/// Minimum distance in θ from either pole for gauge-dependent quantities.
pub const POLE_GUARD: f64 = 1e-3;

/// Default angular step for finite-difference connection and curvature checks.
pub const DEFAULT_STEP: f64 = 1e-4;

pub fn check_pole_guard(theta: f64) -> Result<()> {
    if (POLE_GUARD..=PI - POLE_GUARD).contains(&theta) {
        Ok(())
    } else {
        Err(Error::GaugeSingularity {
            theta,
            guard: POLE_GUARD,
        })
    }
}

/// Spherical components of the non-Abelian connection `iU†∇_p U`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaugeConnection {
    pub a_p: ComplexMat2,
    pub a_theta: ComplexMat2,
    pub a_phi: ComplexMat2,
}

impl GaugeConnection {
    /// Cartesian components `A_x, A_y, A_z` at the point `s`.
    pub fn cartesian(&self, s: &SphericalMomentum) -> [ComplexMat2; 3] {
        let (er, et, ef) = (s.unit(), s.e_theta(), s.e_phi());
        [0, 1, 2].map(|j| self.a_p * er[j] + self.a_theta * et[j] + self.a_phi * ef[j])
    }
}

/// Field-strength components in the local spherical frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldStrength {
    pub p_theta: ComplexMat2,
    pub theta_phi: ComplexMat2,
    pub p_phi: ComplexMat2,
}

impl FieldStrength {
    /// Largest entry over all three components.
    pub fn max_abs(&self) -> f64 {
        self.p_theta
            .max_abs()
            .max(self.theta_phi.max_abs())
            .max(self.p_phi.max_abs())
    }
}

/// Acceptance bound for the finite-difference field strength at `step`.
pub fn flatness_tolerance(step: f64) -> f64 {
    1e-6f64.max(10.0 * step * step)
}

/// `U = exp(−iφσ₃/2)·exp(−iθσ₂/2)`, the SU(2) rotation taking ẑ onto p̂.
pub fn unitary(s: &SphericalMomentum) -> ComplexMat2 {
    let (sh, ch) = (0.5 * s.theta).sin_cos();
    let rot_theta = ComplexMat2::from_real(ch, -sh, sh, ch);
    let half = Complex64::new(0.0, -0.5 * s.phi).exp();
    let rot_phi = ComplexMat2::diag(half, half.conj());
    rot_phi * rot_theta
}

/// `U†(σ·p)U`, which equals `|p|σ₃`.
pub fn diagonalize(p: Vec3) -> Result<ComplexMat2> {
    let s = to_spherical(p)?;
    let u = unitary(&s);
    Ok(u.adjoint() * pauli_dot(p) * u)
}

/// Residual `‖U†(σ·p)U − |p|σ₃‖∞`.
pub fn diagonalization_residual(p: Vec3) -> Result<f64> {
    Ok((diagonalize(p)? - sigma_z() * p.norm()).max_abs())
}

/// Non-Abelian connection from central differences of `U` in θ and φ.
///
/// `a_p` is exactly zero since `U` depends only on direction.
pub fn connection_nonabelian(s: &SphericalMomentum, step: f64) -> Result<GaugeConnection> {
    check_pole_guard(s.theta)?;
    if !(step > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "finite-difference step must be > 0, got {step}"
        )));
    }
    let u_dag = unitary(s).adjoint();
    let i_over_2h = Complex64::new(0.0, 0.5 / step);

    let d_theta = unitary(&SphericalMomentum {
        theta: s.theta + step,
        ..*s
    }) - unitary(&SphericalMomentum {
        theta: s.theta - step,
        ..*s
    });
    let d_phi = unitary(&SphericalMomentum {
        phi: s.phi + step,
        ..*s
    }) - unitary(&SphericalMomentum {
        phi: s.phi - step,
        ..*s
    });

    Ok(GaugeConnection {
        a_p: ComplexMat2::ZERO,
        a_theta: (u_dag * d_theta).scale(i_over_2h / s.p),
        a_phi: (u_dag * d_phi).scale(i_over_2h / (s.p * s.theta.sin())),
    })
}

/// Closed-form connection: `A_θ = σ₂/(2p)`, `A_φ = (cotθ σ₃ − σ₁)/(2p)`.
pub fn connection_nonabelian_analytic(s: &SphericalMomentum) -> Result<GaugeConnection> {
    use crate::mat2::{sigma_x, sigma_y};
    check_pole_guard(s.theta)?;
    let cot = s.theta.cos() / s.theta.sin();
    Ok(GaugeConnection {
        a_p: ComplexMat2::ZERO,
        a_theta: sigma_y() * (0.5 / s.p),
        a_phi: (sigma_z() * cot - sigma_x()) * (0.5 / s.p),
    })
}

/// `iU†∂U` with the angular derivatives of `U` taken in closed form.
fn connection_from_unitary(s: &SphericalMomentum) -> Result<GaugeConnection> {
    check_pole_guard(s.theta)?;
    let (sh, ch) = (0.5 * s.theta).sin_cos();
    let rot_theta = ComplexMat2::from_real(ch, -sh, sh, ch);
    let d_rot_theta = ComplexMat2::from_real(-0.5 * sh, -0.5 * ch, 0.5 * ch, -0.5 * sh);
    let half = Complex64::new(0.0, -0.5 * s.phi).exp();
    let rot_phi = ComplexMat2::diag(half, half.conj());
    let d_rot_phi = ComplexMat2::diag(
        half * Complex64::new(0.0, -0.5),
        half.conj() * Complex64::new(0.0, 0.5),
    );

    let u_dag = (rot_phi * rot_theta).adjoint();
    let i = Complex64::new(0.0, 1.0);
    Ok(GaugeConnection {
        a_p: ComplexMat2::ZERO,
        a_theta: (u_dag * rot_phi * d_rot_theta).scale(i / s.p),
        a_phi: (u_dag * d_rot_phi * rot_theta).scale(i / (s.p * s.theta.sin())),
    })
}

#[cfg(test)]
fn cartesian_connection(p: Vec3) -> Result<[ComplexMat2; 3]> {
    let s = to_spherical(p)?;
    Ok(connection_from_unitary(&s)?.cartesian(&s))
}

/// Coordinate-basis components `(A_p, A_θ, A_φ)` of `iU†dU`.
fn coordinate_connection(s: &SphericalMomentum) -> Result<[ComplexMat2; 3]> {
    let a = connection_from_unitary(s)?;
    Ok([a.a_p, a.a_theta * s.p, a.a_phi * (s.p * s.theta.sin())])
}

/// `F_ij = ∂_i A_j − ∂_j A_i − i[A_i, A_j]` by central differences.
///
/// Derivatives are taken in `(p, θ, φ)` with displacements `step·p`, `step`
/// and `step`; the result is returned in the orthonormal frame
/// `(p̂, ê_θ, ê_φ)`. For `A = iU†∇U` this is the curvature of `D = ∇ − iA`
/// and vanishes identically.
pub fn field_strength(s: &SphericalMomentum, step: f64) -> Result<FieldStrength> {
    check_pole_guard(s.theta)?;
    if !(step > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "finite-difference step must be > 0, got {step}"
        )));
    }
    let a = coordinate_connection(s)?;
    let shifts = [
        (
            SphericalMomentum {
                p: s.p * (1.0 + step),
                ..*s
            },
            SphericalMomentum {
                p: s.p * (1.0 - step),
                ..*s
            },
            step * s.p,
        ),
        (
            SphericalMomentum {
                theta: s.theta + step,
                ..*s
            },
            SphericalMomentum {
                theta: s.theta - step,
                ..*s
            },
            step,
        ),
        (
            SphericalMomentum {
                phi: s.phi + step,
                ..*s
            },
            SphericalMomentum {
                phi: s.phi - step,
                ..*s
            },
            step,
        ),
    ];

    // grad[i][j] = ∂_i A_j
    let mut grad = [[ComplexMat2::ZERO; 3]; 3];
    for (i, (plus, minus, h)) in shifts.iter().enumerate() {
        let (ap, am) = (coordinate_connection(plus)?, coordinate_connection(minus)?);
        for j in 0..3 {
            grad[i][j] = (ap[j] - am[j]) * (0.5 / h);
        }
    }

    let minus_i = Complex64::new(0.0, -1.0);
    let f = |i: usize, j: usize| grad[i][j] - grad[j][i] + a[i].commutator(&a[j]).scale(minus_i);
    let sin = s.theta.sin();
    Ok(FieldStrength {
        p_theta: f(0, 1) * (1.0 / s.p),
        theta_phi: f(1, 2) * (1.0 / (s.p * s.p * sin)),
        p_phi: f(0, 2) * (1.0 / (s.p * sin)),
    })
}

/// Diagonal (adiabatic) Berry connection `λ (cotθ/p) ê_φ` in Cartesian form.
pub fn connection_abelian(s: &SphericalMomentum, helicity: Helicity) -> Result<Vec3> {
    check_pole_guard(s.theta)?;
    let cot = s.theta.cos() / s.theta.sin();
    Ok(s.e_phi() * (helicity.sign() * cot / s.p))
}

/// Spherical components `(A_p, A_θ, A_φ)` of [`connection_abelian`].
fn abelian_components(s: &SphericalMomentum, helicity: Helicity) -> Result<[f64; 3]> {
    let a = connection_abelian(s, helicity)?;
    Ok([a.dot(s.unit()), a.dot(s.e_theta()), a.dot(s.e_phi())])
}

/// Monopole curvature `−λ p/|p|³`.
pub fn berry_curvature(p: Vec3, helicity: Helicity) -> Result<Vec3> {
    let n = p.norm();
    if n == 0.0 {
        return Err(Error::ZeroMomentum);
    }
    Ok(p * (-helicity.sign() / (n * n * n)))
}

/// Curl of [`connection_abelian`] by central differences in `(p, θ, φ)`.
///
/// Displacements are `step·p` radially and `step` in both angles; the result
/// is returned in Cartesian components.
pub fn abelian_curl(p: Vec3, helicity: Helicity, step: f64) -> Result<Vec3> {
    let s = to_spherical(p)?;
    check_pole_guard(s.theta)?;
    if !(step > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "finite-difference step must be > 0, got {step}"
        )));
    }
    let (r, sin) = (s.p, s.theta.sin());
    let comps = |q: SphericalMomentum| abelian_components(&q, helicity);
    let shifts = [
        (
            SphericalMomentum {
                p: r * (1.0 + step),
                ..s
            },
            SphericalMomentum {
                p: r * (1.0 - step),
                ..s
            },
        ),
        (
            SphericalMomentum {
                theta: s.theta + step,
                ..s
            },
            SphericalMomentum {
                theta: s.theta - step,
                ..s
            },
        ),
        (
            SphericalMomentum {
                phi: s.phi + step,
                ..s
            },
            SphericalMomentum {
                phi: s.phi - step,
                ..s
            },
        ),
    ];
    // d[i][j] = ∂_i of the j-th weighted component, with weights that make the
    // curl a plain difference: p A_θ, p sinθ A_φ and A_p.
    let weighted = |q: &SphericalMomentum| -> Result<[f64; 3]> {
        let c = comps(*q)?;
        Ok([c[0], q.p * c[1], q.p * q.theta.sin() * c[2]])
    };
    let widths = [2.0 * step * r, 2.0 * step, 2.0 * step];
    let mut d = [[0.0; 3]; 3];
    for (i, (plus, minus)) in shifts.iter().enumerate() {
        let (wp, wm) = (weighted(plus)?, weighted(minus)?);
        for j in 0..3 {
            d[i][j] = (wp[j] - wm[j]) / widths[i];
        }
    }
    let curl_p = (d[1][2] - d[2][1]) / (r * r * sin);
    let curl_theta = (d[2][0] - d[0][2]) / (r * sin);
    let curl_phi = (d[0][1] - d[1][0]) / r;
    Ok(s.unit() * curl_p + s.e_theta() * curl_theta + s.e_phi() * curl_phi)
}

/// `ε_ijk` contraction of the curvature: the antisymmetric tensor `Ω_ij = ε_ijk F_k`.
///
/// With `F = −λp/p³` this is `−λ ε_ijk p_k/p³`, so `[r_i, r_j] = −iħ² Ω_ij`.
pub fn curvature_tensor(p: Vec3, helicity: Helicity) -> Result<[[f64; 3]; 3]> {
    let f = berry_curvature(p, helicity)?;
    Ok([[0.0, f.z, -f.y], [-f.z, 0.0, f.x], [f.y, -f.x, 0.0]])
}

/// Flux of the monopole curvature through the sphere `|p| = radius`.
///
/// Gauss–Legendre in θ (`n_theta` nodes) times the periodic trapezoid rule in φ.
pub fn monopole_flux(radius: f64, helicity: Helicity, n_theta: usize, n_phi: usize) -> Result<f64> {
    if !(radius > 0.0) || n_theta == 0 || n_phi == 0 {
        return Err(Error::InvalidParameter(
            "flux grid needs radius > 0 and nonempty grid".into(),
        ));
    }
    let (nodes, weights) = gauss_legendre(n_theta);
    let d_phi = 2.0 * PI / n_phi as f64;
    let mut flux = 0.0;
    for (x, w) in nodes.iter().zip(&weights) {
        let theta = 0.5 * PI * (x + 1.0);
        let w_theta = 0.5 * PI * w;
        let mut ring = 0.0;
        for k in 0..n_phi {
            let s = SphericalMomentum::new(radius, theta, k as f64 * d_phi);
            let normal = s.unit();
            ring += berry_curvature(s.to_cartesian(), helicity)?.dot(normal);
        }
        flux += w_theta * ring * d_phi * radius * radius * theta.sin();
    }
    Ok(flux)
}

/// Gauss–Legendre nodes and weights on `[−1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        if dp == 0.0 {
            dp = legendre(n, x).1;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat2::{sigma_x, sigma_y};
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_3, FRAC_PI_4};

    #[test]
    fn unitary_at_north_pole_is_identity() {
        let u = unitary(&SphericalMomentum::new(1.0, 0.0, 0.0));
        assert_eq!(u, ComplexMat2::IDENTITY);
    }

    #[test]
    fn unitary_on_equator() {
        // exp(−iπσ₂/4) = cos(π/4) I − i sin(π/4) σ₂
        let u = unitary(&SphericalMomentum::new(1.0, FRAC_PI_2, 0.0));
        let expect = ComplexMat2::from_real(1.0, -1.0, 1.0, 1.0) * FRAC_1_SQRT_2;
        assert!((u - expect).max_abs() < 1e-15);
    }

    #[test]
    fn unitary_is_special_unitary() {
        let s = SphericalMomentum::new(3.0, 2.1, -0.4);
        let u = unitary(&s);
        assert!((u * u.adjoint() - ComplexMat2::IDENTITY).max_abs() <= 1e-15);
        assert!((u.det().norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn diagonalize_examples() {
        let d = diagonalize(Vec3::new(0.0, 0.0, 5.0)).unwrap();
        assert!((d - sigma_z() * 5.0).max_abs() < 1e-15);
        let d = diagonalize(Vec3::X).unwrap();
        assert!((d - sigma_z()).max_abs() < 1e-15);
        assert_eq!(diagonalize(Vec3::ZERO), Err(Error::ZeroMomentum));
    }

    #[test]
    fn theta_component_on_equator() {
        let step = 1e-3;
        let s = SphericalMomentum::new(1.0, FRAC_PI_2, 0.0);
        let a = connection_nonabelian(&s, step).unwrap();
        // central difference of exp(−iθσ₂/2) gives sin(h/2)/h σ₂
        let err = (a.a_theta - sigma_y() * 0.5).max_abs();
        assert!(err <= step * step, "{err}");
        assert_eq!(a.a_p, ComplexMat2::ZERO);
    }

    #[test]
    fn finite_difference_matches_closed_form() {
        for &(p, th, ph) in &[(1.0, 0.3, 0.2), (2.5, 1.9, -2.8), (0.4, 2.9, 1.0)] {
            let s = SphericalMomentum::new(p, th, ph);
            let fd = connection_nonabelian(&s, 1e-4).unwrap();
            let exact = connection_nonabelian_analytic(&s).unwrap();
            let scale = 1.0 / (p * th.sin());
            assert!((fd.a_theta - exact.a_theta).max_abs() < 1e-8 * scale);
            assert!((fd.a_phi - exact.a_phi).max_abs() < 1e-8 * scale);
            assert!(fd.a_theta.is_hermitian(1e-10) && fd.a_phi.is_hermitian(1e-10));
        }
    }

    #[test]
    fn printed_components_up_to_half() {
        // σ₂/p and (cotθσ₃ − σ₁)/p, halved by the spin-½ generators.
        let s = SphericalMomentum::new(2.0, 1.1, 0.9);
        let a = connection_nonabelian_analytic(&s).unwrap();
        let cot = 1.1f64.cos() / 1.1f64.sin();
        assert!((a.a_theta * 2.0 - sigma_y() * 0.5).max_abs() < 1e-15);
        assert!((a.a_phi * 2.0 - (sigma_z() * cot - sigma_x()) * 0.5).max_abs() < 1e-15);
    }

    #[test]
    fn pole_guard_is_enforced() {
        let s = SphericalMomentum::new(1.0, 5e-4, 0.0);
        assert!(matches!(
            connection_nonabelian(&s, 1e-4),
            Err(Error::GaugeSingularity { .. })
        ));
        assert!(matches!(
            field_strength(&s, 1e-4),
            Err(Error::GaugeSingularity { .. })
        ));
        assert!(matches!(
            connection_abelian(&s, Helicity::Plus),
            Err(Error::GaugeSingularity { .. })
        ));
        let s = SphericalMomentum::new(1.0, PI - 5e-4, 0.0);
        assert!(connection_abelian(&s, Helicity::Plus).is_err());
    }

    #[test]
    fn field_strength_examples_are_flat() {
        for s in [
            SphericalMomentum::new(1.0, FRAC_PI_3, FRAC_PI_4),
            SphericalMomentum::new(2.0, FRAC_PI_2, 0.0),
        ] {
            let f = field_strength(&s, 1e-4).unwrap();
            assert!(f.max_abs() <= 1e-6, "{}", f.max_abs());
        }
    }

    #[test]
    fn field_strength_converges_quadratically() {
        let s = SphericalMomentum::new(1.0, FRAC_PI_3, FRAC_PI_4);
        let coarse = field_strength(&s, 1e-2).unwrap().max_abs();
        let fine = field_strength(&s, 5e-3).unwrap().max_abs();
        let ratio = coarse / fine;
        assert!((3.5..=4.5).contains(&ratio), "{ratio}");
    }

    #[test]
    fn unitary_derivative_connection_matches_closed_form() {
        for (t, f) in [(0.3, -2.0), (1.2, 0.4), (2.8, 3.0)] {
            let s = SphericalMomentum::new(1.7, t, f);
            let a = connection_from_unitary(&s).unwrap();
            let b = connection_nonabelian_analytic(&s).unwrap();
            assert!((a.a_theta - b.a_theta).max_abs() < 1e-14);
            assert!((a.a_phi - b.a_phi).max_abs() < 1e-14);
        }
    }

    #[test]
    fn plus_sign_commutator_is_not_flat() {
        // Guard against the sign of the commutator term drifting: with +i the
        // residual is O(1/p²).
        let s = SphericalMomentum::new(1.0, 1.0, 0.5);
        let p = s.to_cartesian();
        let a = cartesian_connection(p).unwrap();
        let f = field_strength(&s, 1e-4).unwrap();
        assert!(f.max_abs() < 1e-6);
        assert!(a[0].commutator(&a[1]).max_abs() > 1e-2);
    }

    #[test]
    fn abelian_connection_examples() {
        let s = SphericalMomentum::new(1.0, FRAC_PI_2, 0.0);
        assert!(connection_abelian(&s, Helicity::Plus).unwrap().max_abs() < 1e-16);
        let s = SphericalMomentum::new(2.0, FRAC_PI_4, 0.0);
        let a = connection_abelian(&s, Helicity::Plus).unwrap();
        assert!((a - Vec3::new(0.0, 0.5, 0.0)).max_abs() < 1e-15);
        let b = connection_abelian(&s, Helicity::Minus).unwrap();
        assert_eq!(a, -b);
    }

    #[test]
    fn abelian_connection_is_azimuthal() {
        let s = SphericalMomentum::new(1.7, 0.8, 2.2);
        let a = connection_abelian(&s, Helicity::Minus).unwrap();
        assert!(a.dot(s.unit()).abs() < 1e-15);
        assert!(a.dot(s.e_theta()).abs() < 1e-15);
    }

    #[test]
    fn curvature_example() {
        let f = berry_curvature(Vec3::new(0.0, 0.0, 2.0), Helicity::Plus).unwrap();
        assert_eq!(f, Vec3::new(0.0, 0.0, -0.25));
        let g = berry_curvature(Vec3::new(0.0, 0.0, 2.0), Helicity::Minus).unwrap();
        assert_eq!(f, -g);
    }

    #[test]
    fn curl_matches_monopole() {
        let p = Vec3::new(0.3, -0.7, 0.4);
        let curl = abelian_curl(p, Helicity::Plus, 1e-4).unwrap();
        let exact = berry_curvature(p, Helicity::Plus).unwrap();
        assert!((curl - exact).norm() <= 1e-6 * exact.norm());
    }

    #[test]
    fn curvature_tensor_restates_commutator() {
        let p = Vec3::new(1.0, 2.0, -0.5);
        let n3 = p.norm().powi(3);
        let t = curvature_tensor(p, Helicity::Plus).unwrap();
        // ε_ijk p_k / p³ for λ = +1, up to the monopole sign
        assert!((t[0][1] + p.z / n3).abs() < 1e-15);
        assert!((t[1][2] + p.x / n3).abs() < 1e-15);
        assert!((t[2][0] + p.y / n3).abs() < 1e-15);
        assert_eq!(t[0][1], -t[1][0]);
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(5);
        let sum: f64 = w.iter().sum();
        assert!((sum - 2.0).abs() < 1e-14);
        let x8: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(8)).sum();
        assert!((x8 - 2.0 / 9.0).abs() < 1e-14);
    }

    #[test]
    fn flux_is_quantized() {
        for r in [0.5, 1.0, 2.0] {
            let f = monopole_flux(r, Helicity::Plus, 64, 128).unwrap();
            assert!((f + 4.0 * PI).abs() <= 1e-6 * 4.0 * PI, "{f}");
            let g = monopole_flux(r, Helicity::Minus, 64, 128).unwrap();
            assert!((g - 4.0 * PI).abs() <= 1e-6 * 4.0 * PI);
        }
    }
}
