//! Self-check suite for the gauge, curvature and path-functional identities.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_6, PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::functionals::{berry_phase, hall_shift, kinematic_path, PathKind};
use crate::gauge::{
    abelian_curl, berry_curvature, diagonalization_residual, field_strength, monopole_flux, unitary,
};
use crate::mat2::{pauli, ComplexMat2};
use crate::state::{Helicity, SphericalMomentum};
use crate::vec3::Vec3;

pub const DEFAULT_SEED: u64 = 0x05ee_d0f1_19b7;

/// One row of the validation table.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub description: &'static str,
    /// Worst observed value of the checked quantity.
    pub value: f64,
    /// Human-readable acceptance bound.
    pub bound: String,
    pub passed: bool,
}

impl Check {
    fn at_most(name: &'static str, description: &'static str, value: f64, limit: f64) -> Self {
        Self {
            name,
            description,
            value,
            bound: format!("<= {limit:e}"),
            passed: value <= limit,
        }
    }
}

fn random_direction_point(rng: &mut ChaCha8Rng, theta_margin: f64) -> SphericalMomentum {
    SphericalMomentum::new(
        rng.gen_range(0.5..5.0),
        rng.gen_range(theta_margin..PI - theta_margin),
        rng.gen_range(-PI..PI),
    )
}

fn pauli_algebra() -> Check {
    let s = pauli();
    let i = num_complex::Complex64::new(0.0, 2.0);
    let mut worst = 0.0f64;
    for a in 0..3 {
        let b = (a + 1) % 3;
        let c = (a + 2) % 3;
        worst = worst.max((s[a].commutator(&s[b]) - s[c].scale(i)).max_abs());
        worst = worst.max((s[a] * s[a] - ComplexMat2::IDENTITY).max_abs());
    }
    Check::at_most(
        "pauli-algebra",
        "[σi, σj] = 2i εijk σk, σi² = I",
        worst,
        1e-15,
    )
}

fn unitarity(rng: &mut ChaCha8Rng) -> Check {
    let worst = (0..1000)
        .map(|_| {
            let s = SphericalMomentum::new(1.0, rng.gen_range(0.0..PI), rng.gen_range(-PI..PI));
            let u = unitary(&s);
            (u * u.adjoint() - ComplexMat2::IDENTITY).max_abs()
        })
        .fold(0.0, f64::max);
    Check::at_most(
        "unitarity",
        "‖UU† − I‖∞ over 1000 random directions",
        worst,
        1e-14,
    )
}

fn diagonalization(rng: &mut ChaCha8Rng) -> Result<Check> {
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let p = Vec3::new(
            rng.gen_range(-5.0..5.0),
            rng.gen_range(-5.0..5.0),
            rng.gen_range(-5.0..5.0),
        );
        worst = worst.max(diagonalization_residual(p)?);
    }
    Ok(Check::at_most(
        "diagonalization",
        "‖U†(σ·p)U − |p|σ3‖∞ over 1000 random momenta",
        worst,
        1e-12,
    ))
}

fn flatness(rng: &mut ChaCha8Rng) -> Result<Check> {
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let s = random_direction_point(rng, 0.2);
        worst = worst.max(field_strength(&s, 1e-4)?.max_abs());
    }
    Ok(Check::at_most(
        "flatness",
        "max |F_ij| of iU†∇U at step 1e-4, 100 points",
        worst,
        1e-6,
    ))
}

/// Residual ratio when the step halves from 1e-2 to 5e-3.
pub fn flatness_convergence_ratio(s: &SphericalMomentum) -> Result<f64> {
    let coarse = field_strength(s, 1e-2)?.max_abs();
    let fine = field_strength(s, 5e-3)?.max_abs();
    Ok(coarse / fine)
}

fn flatness_convergence(rng: &mut ChaCha8Rng) -> Result<Check> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for _ in 0..10 {
        let r = flatness_convergence_ratio(&random_direction_point(rng, 0.2))?;
        lo = lo.min(r);
        hi = hi.max(r);
    }
    let worst = if (4.0 - lo).abs() > (hi - 4.0).abs() {
        lo
    } else {
        hi
    };
    Ok(Check {
        name: "flatness-order",
        description: "residual ratio for step 1e-2 → 5e-3, 10 points",
        value: worst,
        bound: "in [3.5, 4.5]".into(),
        passed: (3.5..=4.5).contains(&lo) && (3.5..=4.5).contains(&hi),
    })
}

fn monopole_curl(rng: &mut ChaCha8Rng) -> Result<Check> {
    let mut worst = 0.0f64;
    for k in 0..100 {
        let s = random_direction_point(rng, 0.2);
        let p = s.to_cartesian();
        let h = if k % 2 == 0 {
            Helicity::Plus
        } else {
            Helicity::Minus
        };
        let exact = berry_curvature(p, h)?;
        worst = worst.max((abelian_curl(p, h, 1e-4)? - exact).norm() / exact.norm());
    }
    Ok(Check::at_most(
        "monopole-curl",
        "|curl(λA) + λp/p³| / |λp/p³|, 100 points",
        worst,
        1e-6,
    ))
}

fn monopole_flux_check() -> Result<Check> {
    let mut worst = 0.0f64;
    for radius in [0.5, 1.0, 2.0] {
        for h in Helicity::BOTH {
            let flux = monopole_flux(radius, h, 64, 128)?;
            let exact = -4.0 * PI * h.sign();
            worst = worst.max((flux - exact).abs() / exact.abs());
        }
    }
    Ok(Check::at_most(
        "monopole-flux",
        "relative error of flux vs −4πλ, radii 0.5, 1, 2",
        worst,
        1e-6,
    ))
}

const LOOP_COLATITUDES: [f64; 4] = [FRAC_PI_6, FRAC_PI_3, FRAC_PI_2, 2.0 * FRAC_PI_3];

fn rytov_loops() -> Result<(Check, Check)> {
    let mut worst = 0.0f64;
    let mut worst_gi = 0.0f64;
    for theta0 in LOOP_COLATITUDES {
        let path = kinematic_path(
            PathKind::ConstantColatitudeCircle {
                theta0,
                p0: 1.0,
                turns: 1.0,
            },
            4096,
        )?;
        let expected = TAU * theta0.cos();
        let fwd = berry_phase(&path)?;
        let rev = berry_phase(&path.reversed())?;
        worst = worst
            .max((fwd.gamma - expected).abs())
            .max((rev.gamma + expected).abs());
        if let Some(gi) = fwd.gauge_invariant {
            worst_gi = worst_gi.max((gi - fwd.gamma).abs());
        }
    }
    Ok((
        Check::at_most(
            "rytov-loop",
            "|γ − 2π cosθ0| on closed loops (and reversed), 4096 samples",
            worst,
            1e-9,
        ),
        Check::at_most(
            "rytov-gauge-invariant",
            "|γ − (2πW − Ω)| on the same loops",
            worst_gi,
            1e-6,
        ),
    ))
}

fn hall_loops() -> Result<Check> {
    let mut worst = 0.0f64;
    for theta0 in LOOP_COLATITUDES {
        for p0 in [0.5, 1.0, 3.0] {
            let path = kinematic_path(
                PathKind::ConstantColatitudeCircle {
                    theta0,
                    p0,
                    turns: 1.0,
                },
                10_000,
            )?;
            let exact = Vec3::new(0.0, 0.0, TAU * theta0.sin().powi(2) / p0);
            let plus = hall_shift(&path, Helicity::Plus)?;
            let minus = hall_shift(&path, Helicity::Minus)?;
            if plus != -minus {
                worst = f64::INFINITY;
            }
            worst = worst.max((plus - exact).norm() / exact.norm());
        }
    }
    Ok(Check::at_most(
        "hall-loop",
        "relative error of λ∮p×dp/p³ vs 2π sin²θ0/p0 ẑ, 10^4 samples",
        worst,
        1e-8,
    ))
}

/// Runs every check with a deterministic random stream.
pub fn run_validation(seed: u64) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (rytov, rytov_gi) = rytov_loops()?;
    Ok(vec![
        pauli_algebra(),
        unitarity(&mut rng),
        diagonalization(&mut rng)?,
        flatness(&mut rng)?,
        flatness_convergence(&mut rng)?,
        monopole_curl(&mut rng)?,
        monopole_flux_check()?,
        rytov,
        rytov_gi,
        hall_loops()?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes() {
        let checks = run_validation(DEFAULT_SEED).unwrap();
        assert_eq!(checks.len(), 10);
        for c in &checks {
            assert!(c.passed, "{} = {} ({})", c.name, c.value, c.bound);
        }
    }
}
