//! File formats: scenario documents, trajectory CSV and momentum-path CSV.

pub mod csv;
pub mod scenario;

pub use self::csv::{
    read_momentum_path, read_trajectory, write_momentum_path, write_trajectory, CsvError,
    TrajectoryRow, PATH_HEADER, TRAJECTORY_HEADER,
};
pub use scenario::{load_scenario, OutputSpec, RaySpec, Scenario, ScenarioError, SCHEMA_VERSION};
