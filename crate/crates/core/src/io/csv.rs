//! Trajectory and momentum-path CSV formats.

use std::io::{self, Read, Write};

use serde::Deserialize;
use thiserror::Error;

use crate::dynamics::Trajectory;
use crate::functionals::MomentumPath;
use crate::vec3::Vec3;

pub const TRAJECTORY_HEADER: &str = "t,x,y,z,px,py,pz,lambda,gamma,drx,dry,drz,H";
pub const PATH_HEADER: &str = "px,py,pz";

#[derive(Debug, Error)]
pub enum CsvError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("csv: {0}")]
    Csv(#[from] ::csv::Error),
    #[error("expected header `{expected}`, found `{found}`")]
    Header {
        expected: &'static str,
        found: String,
    },
    #[error("invalid path: {0}")]
    Path(#[from] crate::error::Error),
}

/// 17 significant digits, round-trip exact for `f64`.
fn real(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes one row per sample with LF line endings.
pub fn write_trajectory<W: Write>(traj: &Trajectory, mut sink: W) -> io::Result<()> {
    writeln!(sink, "{TRAJECTORY_HEADER}")?;
    let lambda = traj.lambda as i64;
    for s in &traj.samples {
        let st = &s.state;
        writeln!(
            sink,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            real(st.t),
            real(st.x.x),
            real(st.x.y),
            real(st.x.z),
            real(st.p.x),
            real(st.p.y),
            real(st.p.z),
            lambda,
            real(s.gamma),
            real(s.hall_shift.x),
            real(s.hall_shift.y),
            real(s.hall_shift.z),
            real(s.hamiltonian),
        )?;
    }
    sink.flush()
}

/// One parsed row of a trajectory CSV.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
pub struct TrajectoryRow {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub px: f64,
    pub py: f64,
    pub pz: f64,
    pub lambda: i8,
    pub gamma: f64,
    pub drx: f64,
    pub dry: f64,
    pub drz: f64,
    #[serde(rename = "H")]
    pub h: f64,
}

impl TrajectoryRow {
    pub fn position(&self) -> Vec3 {
        Vec3::new(self.x, self.y, self.z)
    }

    pub fn momentum(&self) -> Vec3 {
        Vec3::new(self.px, self.py, self.pz)
    }

    pub fn hall_shift(&self) -> Vec3 {
        Vec3::new(self.drx, self.dry, self.drz)
    }
}

fn check_header<R: Read>(
    reader: &mut ::csv::Reader<R>,
    expected: &'static str,
) -> Result<(), CsvError> {
    let found = reader.headers()?.iter().collect::<Vec<_>>().join(",");
    if found != expected {
        return Err(CsvError::Header { expected, found });
    }
    Ok(())
}

pub fn read_trajectory<R: Read>(source: R) -> Result<Vec<TrajectoryRow>, CsvError> {
    let mut reader = ::csv::ReaderBuilder::new()
        .trim(::csv::Trim::All)
        .from_reader(source);
    check_header(&mut reader, TRAJECTORY_HEADER)?;
    reader
        .deserialize()
        .map(|r| r.map_err(CsvError::from))
        .collect()
}

#[derive(Deserialize)]
struct PathRow {
    px: f64,
    py: f64,
    pz: f64,
}

/// Reads a momentum path from a `px,py,pz` CSV.
pub fn read_momentum_path<R: Read>(source: R) -> Result<MomentumPath, CsvError> {
    let mut reader = ::csv::ReaderBuilder::new()
        .trim(::csv::Trim::All)
        .from_reader(source);
    check_header(&mut reader, PATH_HEADER)?;
    let samples = reader
        .deserialize::<PathRow>()
        .map(|r| r.map(|row| Vec3::new(row.px, row.py, row.pz)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(MomentumPath::new(samples)?)
}

pub fn write_momentum_path<W: Write>(path: &MomentumPath, mut sink: W) -> io::Result<()> {
    writeln!(sink, "{PATH_HEADER}")?;
    for p in path.samples() {
        writeln!(sink, "{},{},{}", real(p.x), real(p.y), real(p.z))?;
    }
    sink.flush()
}
