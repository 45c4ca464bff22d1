use std::fmt;

use serde::Serialize;

use super::stepper::{self, StepResult};
use super::{hamiltonian, rhs_parts, IntegratorConfig, PhysicsParams};
use crate::error::{Error, Result};
use crate::functionals::MomentumPath;
use crate::gauge::POLE_GUARD;
use crate::medium::MediumProfile;
use crate::state::{to_spherical, Helicity, RayState};
use crate::vec3::Vec3;

/// ODE state: x (3), p (3), γ (1), δr (3).
const DIM: usize = 10;
type State = [f64; DIM];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub state: RayState,
    /// Hamiltonian value at the sample.
    pub hamiltonian: f64,
    /// Accumulated polarization-plane rotation ∫cosθ dφ.
    pub gamma: f64,
    /// Accumulated helicity-dependent displacement λħ∫(p × dp)/p³.
    pub hall_shift: Vec3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrajectoryStatus {
    Completed,
    MediumDomainExit,
    PoleDegeneracyHalt,
}

impl fmt::Display for TrajectoryStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Completed => "completed",
            Self::MediumDomainExit => "medium-domain-exit",
            Self::PoleDegeneracyHalt => "pole-degeneracy-halt",
        })
    }
}

/// Emitted the first time `|∇n| ħ/n²` exceeds the configured threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdiabaticityWarning {
    pub t: f64,
    pub value: f64,
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub helicity: Helicity,
    /// λ used in the equations (0 for unpolarized runs).
    pub lambda: f64,
    pub samples: Vec<TrajectorySample>,
    pub status: TrajectoryStatus,
    pub max_adiabaticity: f64,
    pub warnings: Vec<AdiabaticityWarning>,
}

impl Trajectory {
    pub fn last(&self) -> &TrajectorySample {
        self.samples
            .last()
            .expect("trajectory always holds the initial sample")
    }

    pub fn final_gamma(&self) -> f64 {
        self.last().gamma
    }

    pub fn final_hall_shift(&self) -> Vec3 {
        self.last().hall_shift
    }

    /// Largest `|H̃(t) − H̃(0)| / |H̃(0)|` over the samples.
    pub fn hamiltonian_drift(&self) -> f64 {
        let h0 = self.samples[0].hamiltonian;
        self.samples
            .iter()
            .map(|s| (s.hamiltonian - h0).abs() / h0.abs())
            .fold(0.0, f64::max)
    }

    /// Momentum samples as an open path.
    pub fn momentum_path(&self) -> Result<MomentumPath> {
        MomentumPath::new(self.samples.iter().map(|s| s.state.p).collect())
    }
}

fn pack(x: Vec3, p: Vec3, gamma: f64, dr: Vec3) -> State {
    [x.x, x.y, x.z, p.x, p.y, p.z, gamma, dr.x, dr.y, dr.z]
}

fn unpack(y: &State) -> (Vec3, Vec3, f64, Vec3) {
    (
        Vec3::new(y[0], y[1], y[2]),
        Vec3::new(y[3], y[4], y[5]),
        y[6],
        Vec3::new(y[7], y[8], y[9]),
    )
}

/// `d/dt ∫cosθ dφ = (p_z/|p|)(p_x ṗ_y − p_y ṗ_x)/(p_x² + p_y²)`, zero on the polar axis.
fn gamma_rate(p: Vec3, dp: Vec3) -> f64 {
    let rho2 = p.x * p.x + p.y * p.y;
    if rho2 <= f64::MIN_POSITIVE {
        return 0.0;
    }
    (p.z / p.norm()) * (p.x * dp.y - p.y * dp.x) / rho2
}

struct Driver<'a> {
    medium: &'a MediumProfile,
    params: &'a PhysicsParams,
    cfg: &'a IntegratorConfig,
    helicity: Helicity,
    lambda: f64,
    traj: Trajectory,
    warned: bool,
}

impl Driver<'_> {
    fn rhs(&self, y: &State) -> Result<State> {
        let (x, p, _, _) = unpack(y);
        let (dx, dp, anomalous) = rhs_parts(x, p, self.medium, self.params, self.lambda)?;
        Ok(pack(dx, dp, gamma_rate(p, dp), anomalous))
    }

    fn near_pole(&self, p: Vec3) -> bool {
        if self.params.hbar_eff == 0.0 || self.lambda == 0.0 {
            return false;
        }
        match to_spherical(p) {
            Ok(s) => s.theta < POLE_GUARD || s.theta > std::f64::consts::PI - POLE_GUARD,
            Err(_) => true,
        }
    }

    fn record(&mut self, t: f64, y: &State) -> Result<()> {
        let (x, p, gamma, hall_shift) = unpack(y);
        let state = RayState {
            x,
            p,
            helicity: self.helicity,
            t,
        };
        let h = hamiltonian(&state, self.medium, self.params)?;
        if self.params.hbar_eff > 0.0 {
            let a = self.medium.adiabaticity(x, self.params.hbar_eff)?;
            self.traj.max_adiabaticity = self.traj.max_adiabaticity.max(a);
            if a > self.cfg.adiabatic_threshold && !self.warned {
                self.warned = true;
                self.traj.warnings.push(AdiabaticityWarning {
                    t,
                    value: a,
                    threshold: self.cfg.adiabatic_threshold,
                });
            }
        }
        self.traj.samples.push(TrajectorySample {
            state,
            hamiltonian: h,
            gamma,
            hall_shift,
        });
        Ok(())
    }

    fn sample_time(&self, k: u64) -> f64 {
        let t = k as f64 * self.cfg.sample_interval;
        if t >= self.cfg.t_max * (1.0 - 1e-12) {
            self.cfg.t_max
        } else {
            t
        }
    }

    fn run(mut self, initial: &RayState) -> Result<Trajectory> {
        let cfg = *self.cfg;
        let mut t = initial.t;
        let t_end = initial.t + cfg.t_max;
        let mut y = pack(initial.x, initial.p, 0.0, Vec3::ZERO);
        self.record(t, &y)?;
        if self.near_pole(initial.p) {
            self.traj.status = TrajectoryStatus::PoleDegeneracyHalt;
            return Ok(self.traj);
        }

        let mut k1 = self.rhs(&y)?;
        let mut next_sample = 1u64;
        let mut h = cfg.max_step.min(cfg.sample_interval);
        loop {
            let target = initial.t + self.sample_time(next_sample);
            let remaining = target - t;
            let clamped = h >= remaining;
            let h_try = if clamped { remaining } else { h };

            let attempt = {
                let mut f = |_t: f64, y: &State| self.rhs(y);
                stepper::step(&mut f, t, &y, &k1, h_try)
            };
            let StepResult {
                y: y_new,
                dydt,
                error,
            } = match attempt {
                Ok(r) => r,
                Err(Error::MediumDomain { .. }) => {
                    self.traj.status = TrajectoryStatus::MediumDomainExit;
                    break;
                }
                Err(e) => return Err(e),
            };

            let err = stepper::error_norm(&y, &y_new, &error, cfg.rtol, cfg.atol);
            if !err.is_finite() || err > 1.0 {
                let factor = if err.is_finite() {
                    (0.9 * err.powf(-0.2)).max(0.2)
                } else {
                    0.2
                };
                h = h_try * factor;
                if h <= 16.0 * f64::EPSILON * t.abs().max(1.0) {
                    return Err(Error::IntegrationFailure { t, h });
                }
                continue;
            }

            let factor = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            let h_next = (h_try * factor).min(cfg.max_step);
            h = if clamped {
                h.max(h_next).min(cfg.max_step)
            } else {
                h_next
            };

            t = if clamped { target } else { t + h_try };
            y = y_new;
            k1 = dydt;

            let p = Vec3::new(y[3], y[4], y[5]);
            if self.near_pole(p) {
                self.record(t, &y)?;
                self.traj.status = TrajectoryStatus::PoleDegeneracyHalt;
                return Ok(self.traj);
            }
            if clamped {
                if let Err(Error::MediumDomain { .. }) =
                    self.medium.refractive_index(Vec3::new(y[0], y[1], y[2]))
                {
                    self.traj.status = TrajectoryStatus::MediumDomainExit;
                    break;
                }
                self.record(t, &y)?;
                if target >= t_end {
                    self.traj.status = TrajectoryStatus::Completed;
                    break;
                }
                next_sample += 1;
            }
        }
        Ok(self.traj)
    }
}

/// Integrates the ray equations from `initial` for `cfg.t_max`.
///
/// The rotation angle and the Hall shift are integrated alongside `(x, p)`
/// under the same error control. A ray leaving the region `n > 0` ends with
/// [`TrajectoryStatus::MediumDomainExit`]; a polarized ray with `ħ > 0` whose
/// momentum enters the pole guard ends with [`TrajectoryStatus::PoleDegeneracyHalt`].
pub fn integrate(
    initial: &RayState,
    medium: &MediumProfile,
    params: &PhysicsParams,
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    params.validate()?;
    cfg.validate()?;
    hamiltonian(initial, medium, params)?;
    let lambda = params.lambda(initial.helicity);
    let driver = Driver {
        medium,
        params,
        cfg,
        helicity: initial.helicity,
        lambda,
        traj: Trajectory {
            helicity: initial.helicity,
            lambda,
            samples: Vec::with_capacity((cfg.t_max / cfg.sample_interval) as usize + 2),
            status: TrajectoryStatus::Completed,
            max_adiabaticity: 0.0,
            warnings: Vec::new(),
        },
        warned: false,
    };
    driver.run(initial)
}

/// Both helicities traced from the same initial point.
#[derive(Debug, Clone, PartialEq)]
pub struct PairTrace {
    pub plus: Trajectory,
    pub minus: Trajectory,
    /// `δr(+1) − δr(−1)` at the end of the run.
    pub splitting: Vec3,
    /// Component of `splitting` along the final mean ray direction, relative to `|splitting|`.
    pub longitudinal_fraction: f64,
}

/// Runs `λ = +1` and `λ = −1` concurrently from identical initial conditions.
pub fn trace_pair(
    initial: &RayState,
    medium: &MediumProfile,
    params: &PhysicsParams,
    cfg: &IntegratorConfig,
) -> Result<PairTrace> {
    let (plus, minus) = std::thread::scope(|scope| {
        let minus =
            scope.spawn(|| integrate(&initial.with_helicity(Helicity::Minus), medium, params, cfg));
        let plus = integrate(&initial.with_helicity(Helicity::Plus), medium, params, cfg);
        (plus, minus.join().expect("helicity trace panicked"))
    });
    let (plus, minus) = (plus?, minus?);

    let splitting = plus.final_hall_shift() - minus.final_hall_shift();
    let direction = (plus.last().state.p + minus.last().state.p).normalized();
    let norm = splitting.norm();
    let longitudinal_fraction = match direction {
        Some(d) if norm > 0.0 => splitting.dot(d).abs() / norm,
        _ => 0.0,
    };
    Ok(PairTrace {
        plus,
        minus,
        splitting,
        longitudinal_fraction,
    })
}
