use std::fs::{self, File};
use std::io::{self, BufWriter, IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand};
use serde_json::json;
use spinray_core::io::{
    load_scenario, read_momentum_path, read_trajectory, write_trajectory, Scenario,
};
use spinray_core::validation::{run_validation, DEFAULT_SEED};
use spinray_core::{berry_phase, hall_shift, integrate, trace_pair, Helicity, Trajectory};

mod plot;

#[derive(Parser)]
#[command(
    name = "spinray",
    version,
    about = "Spin-dependent ray tracing in inhomogeneous media"
)]
struct Cli {
    /// Suppress summary output.
    #[arg(short, long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the gauge, curvature and path-functional self-checks.
    Validate {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Trace both helicities through a scenario and write CSVs plus a summary.
    Trace {
        scenario: PathBuf,
        /// Output prefix; defaults to the scenario's `output.prefix`, then to the scenario path without extension.
        #[arg(long)]
        out: Option<String>,
    },
    /// Polarization rotation along a momentum path.
    Phase { path: PathBuf },
    /// Geometric displacement λ∮p×dp/p³ along a momentum path.
    Shift {
        path: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        lambda: i8,
    },
    /// Render trajectory CSVs as an SVG projection.
    Plot {
        #[arg(required = true)]
        trajectories: Vec<PathBuf>,
        #[arg(short, long, default_value = "trajectory.svg")]
        output: PathBuf,
        /// Scale helicity-dependent deviations from the mean ray by this factor.
        #[arg(long, default_value_t = 1.0)]
        magnify: f64,
    },
}

/// Failure carrying the process exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl Failure {
    fn input(error: anyhow::Error) -> Self {
        Self { code: 2, error }
    }

    fn runtime(error: anyhow::Error) -> Self {
        Self { code: 1, error }
    }
}

type CmdResult = Result<ExitCode, Failure>;

trait InputContext<T> {
    fn input(self) -> Result<T, Failure>;
}

impl<T> InputContext<T> for anyhow::Result<T> {
    fn input(self) -> Result<T, Failure> {
        self.map_err(Failure::input)
    }
}

struct Out {
    quiet: bool,
    color: bool,
}

impl Out {
    fn line(&self, text: impl AsRef<str>) {
        if !self.quiet {
            println!("{}", text.as_ref());
        }
    }

    fn verdict(&self, passed: bool) -> String {
        let (word, code) = if passed {
            ("PASS", "32")
        } else {
            ("FAIL", "31")
        };
        if self.color {
            format!("\x1b[{code}m{word}\x1b[0m")
        } else {
            word.to_owned()
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let color =
        std::env::var_os("NO_COLOR").is_none_or(|v| v.is_empty()) && io::stdout().is_terminal();
    let out = Out {
        quiet: cli.quiet,
        color,
    };
    let result = match cli.command {
        Command::Validate { seed } => validate(&out, seed),
        Command::Trace {
            scenario,
            out: prefix,
        } => trace(&out, &scenario, prefix),
        Command::Phase { path } => phase(&out, &path),
        Command::Shift { path, lambda } => shift(&out, &path, lambda),
        Command::Plot {
            trajectories,
            output,
            magnify,
        } => plot_cmd(&out, &trajectories, &output, magnify),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn validate(out: &Out, seed: u64) -> CmdResult {
    let checks = run_validation(seed).map_err(|e| Failure::runtime(e.into()))?;
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    for c in &checks {
        out.line(format!(
            "{:<width$}  {}  {:<12.3e} {:<16} {}",
            c.name,
            out.verdict(c.passed),
            c.value,
            c.bound,
            c.description
        ));
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    out.line(format!("{} checks, {} failed", checks.len(), failed));
    Ok(if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .input()
}

fn write_csv(traj: &Trajectory, path: &Path) -> Result<(), Failure> {
    let file = File::create(path)
        .with_context(|| format!("creating {}", path.display()))
        .map_err(Failure::runtime)?;
    write_trajectory(traj, BufWriter::new(file))
        .with_context(|| format!("writing {}", path.display()))
        .map_err(Failure::runtime)
}

fn trajectory_summary(traj: &Trajectory) -> serde_json::Value {
    let last = traj.last();
    json!({
        "status": traj.status.to_string(),
        "samples": traj.samples.len(),
        "t_final": last.state.t,
        "final_position": last.state.x,
        "final_momentum": last.state.p,
        "gamma": last.gamma,
        "hall_shift": last.hall_shift,
        "hamiltonian_drift": traj.hamiltonian_drift(),
        "max_adiabaticity": traj.max_adiabaticity,
        "warnings": traj.warnings,
    })
}

fn default_prefix(scenario_path: &Path, scenario: &Scenario) -> String {
    scenario.output.prefix.clone().unwrap_or_else(|| {
        scenario_path
            .with_extension("")
            .to_string_lossy()
            .into_owned()
    })
}

fn trace(out: &Out, scenario_path: &Path, prefix: Option<String>) -> CmdResult {
    let scenario = load_scenario(&read_text(scenario_path)?)
        .with_context(|| format!("loading {}", scenario_path.display()))
        .input()?;
    let prefix = prefix.unwrap_or_else(|| default_prefix(scenario_path, &scenario));
    if let Some(dir) = Path::new(&prefix)
        .parent()
        .filter(|d| !d.as_os_str().is_empty())
    {
        fs::create_dir_all(dir)
            .with_context(|| format!("creating {}", dir.display()))
            .map_err(Failure::runtime)?;
    }
    let file = |suffix: &str| PathBuf::from(format!("{prefix}_{suffix}"));

    let helicities = &scenario.ray.helicities;
    let both = helicities.contains(&Helicity::Plus) && helicities.contains(&Helicity::Minus);
    let init = scenario.initial_state(helicities[0]);
    let run = |e: spinray_core::Error| Failure::runtime(anyhow!(e).context("tracing rays"));

    let mut summary = json!({
        "schema_version": 1,
        "hbar_eff": scenario.physics.hbar_eff,
        "kappa": scenario.physics.kappa,
    });
    let mut traces = Vec::new();
    if both {
        let pair = trace_pair(
            &init,
            &scenario.medium,
            &scenario.physics,
            &scenario.integrator,
        )
        .map_err(run)?;
        summary["splitting"] = json!(pair.splitting);
        summary["splitting_norm"] = json!(pair.splitting.norm());
        summary["longitudinal_fraction"] = json!(pair.longitudinal_fraction);
        traces.push(pair.plus);
        traces.push(pair.minus);
    } else {
        traces.push(
            integrate(
                &init,
                &scenario.medium,
                &scenario.physics,
                &scenario.integrator,
            )
            .map_err(run)?,
        );
    }

    let mut written = Vec::new();
    for traj in &traces {
        let name = if traj.helicity == Helicity::Plus {
            "plus"
        } else {
            "minus"
        };
        let path = file(&format!("{name}.csv"));
        write_csv(traj, &path)?;
        summary[name] = trajectory_summary(traj);
        written.push(path);
    }
    let summary_path = file("summary.json");
    let text = serde_json::to_string_pretty(&summary).expect("summary is plain JSON") + "\n";
    fs::write(&summary_path, text)
        .with_context(|| format!("writing {}", summary_path.display()))
        .map_err(Failure::runtime)?;
    written.push(summary_path);

    for traj in &traces {
        for w in &traj.warnings {
            eprintln!(
                "warning: helicity {}: adiabaticity {:.3e} exceeds {} at t = {:.6}",
                traj.helicity, w.value, w.threshold, w.t
            );
        }
    }
    for path in &written {
        out.line(format!("wrote {}", path.display()));
    }
    for traj in &traces {
        out.line(format!(
            "helicity {:+}: {} at t = {}",
            traj.helicity.value(),
            traj.status,
            traj.last().state.t
        ));
    }
    if let Some(s) = summary.get("splitting") {
        out.line(format!(
            "splitting = {s}  |splitting| = {:.16e}",
            summary["splitting_norm"].as_f64().unwrap_or(f64::NAN)
        ));
    }
    Ok(ExitCode::SUCCESS)
}

fn load_path(path: &Path) -> Result<spinray_core::MomentumPath, Failure> {
    let file = File::open(path)
        .with_context(|| format!("opening {}", path.display()))
        .input()?;
    read_momentum_path(io::BufReader::new(file))
        .with_context(|| format!("reading {}", path.display()))
        .input()
}

fn phase(out: &Out, path: &Path) -> CmdResult {
    let momentum = load_path(path)?;
    let bp = berry_phase(&momentum)
        .context("computing the polarization rotation")
        .input()?;
    let detail = match bp.gauge_invariant {
        Some(gi) => format!("closed, winding {}, 2πW − Ω = {gi:.15}", bp.winding.round()),
        None => "open path, gauge dependent".to_owned(),
    };
    out.line(format!("gamma = {:.15} ({detail})", bp.gamma));
    Ok(ExitCode::SUCCESS)
}

fn shift(out: &Out, path: &Path, lambda: i8) -> CmdResult {
    let helicity =
        Helicity::try_from(lambda).map_err(|e| Failure::input(anyhow!("--lambda: {e}")))?;
    let momentum = load_path(path)?;
    let d = hall_shift(&momentum, helicity)
        .context("computing the displacement integral")
        .input()?;
    out.line(format!(
        "delta_r = [{:.16e}, {:.16e}, {:.16e}]  |delta_r| = {:.16e}",
        d.x,
        d.y,
        d.z,
        d.norm()
    ));
    Ok(ExitCode::SUCCESS)
}

fn plot_cmd(out: &Out, inputs: &[PathBuf], output: &Path, magnify: f64) -> CmdResult {
    if !(magnify > 0.0 && magnify.is_finite()) {
        return Err(Failure::input(anyhow!(
            "--magnify must be a positive number, got {magnify}"
        )));
    }
    let mut series = Vec::new();
    for path in inputs {
        let file = File::open(path)
            .with_context(|| format!("opening {}", path.display()))
            .input()?;
        let rows = read_trajectory(io::BufReader::new(file))
            .with_context(|| format!("reading {}", path.display()))
            .input()?;
        if rows.is_empty() {
            return Err(Failure::input(anyhow!("{} has no samples", path.display())));
        }
        series.push(rows);
    }
    let svg = plot::render(&series, magnify);
    let mut sink = File::create(output)
        .map(BufWriter::new)
        .with_context(|| format!("creating {}", output.display()))
        .map_err(Failure::runtime)?;
    sink.write_all(svg.text.as_bytes())
        .and_then(|_| sink.flush())
        .with_context(|| format!("writing {}", output.display()))
        .map_err(Failure::runtime)?;
    out.line(format!(
        "wrote {} ({} vs {}{})",
        output.display(),
        svg.horizontal,
        svg.vertical,
        svg.splitting
            .map(|s| format!(", |splitting| = {s:.6e}"))
            .unwrap_or_default()
    ));
    Ok(ExitCode::SUCCESS)
}
